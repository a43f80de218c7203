import logging
import math
import random

import numpy as np
import pytest

from signed_egonet.egonet import EgoNetwork, Ring
from signed_egonet.report import (
    Counts,
    DatasetReport,
    build_report,
    circle_tables,
    count_corpus,
    mean_confidence_interval,
    negativity_summary,
    parse_csv_tables,
    render_csv,
    render_markdown,
    render_report,
)
from signed_egonet.signing import RelationshipStats, sign_relationship


def edge(ego, alter, negative, n=10):
    neg = 5 if negative else 0
    return sign_relationship(RelationshipStats(ego, alter, n, neg, n - neg, 0))


def ring_net(ego, sizes, prefix="a"):
    rings, start = [], 0
    for k, size in enumerate(sizes):
        rings.append(Ring(100.0 / (k + 1), tuple(f"{prefix}{i}" for i in range(start, start + size))))
        start += size
    return EgoNetwork(ego, tuple(rings))


class TestCI:
    def test_zero_variance(self):
        m = mean_confidence_interval([5, 5, 5])
        assert (m.mean, m.lo, m.hi) == (5, 5, 5)

    def test_single_value(self):
        m = mean_confidence_interval([3.5])
        assert m.lo == m.hi == m.mean == 3.5 and m.n == 1

    def test_textbook_two_points(self):
        m = mean_confidence_interval([0, 10], 0.95)
        # one degree of freedom is the Cauchy law: t = tan(pi * (p - 1/2))
        half = math.tan(math.pi * 0.475) * math.sqrt(50) / math.sqrt(2)
        assert m.mean == 5
        assert abs((m.hi - m.mean) - half) < 1e-9
        assert abs((m.mean - m.lo) - half) < 1e-9
        assert round(m.hi - m.mean, 2) == 63.53

    def test_closed_form_fixed_samples(self):
        # df=2 has a closed form; the rest were computed offline at 30 digits
        table = {2: 0.95 / math.sqrt(2 * 0.975 * 0.025), 4: 2.7764451051977935, 9: 2.262157162798205, 29: 2.0452296421327039, 100: 1.9839715185235519}
        rng = np.random.default_rng(0)
        for df, tq in table.items():
            x = rng.normal(10, 3, size=df + 1)
            m = mean_confidence_interval(x)
            mean = math.fsum(x) / x.size
            s = math.sqrt(math.fsum((v - mean) ** 2 for v in x) / df)
            half = tq * s / math.sqrt(x.size)
            assert abs(m.lo - (mean - half)) < 1e-9 and abs(m.hi - (mean + half)) < 1e-9

    def test_bootstrap_brackets_mean_and_is_seeded(self):
        x = np.random.default_rng(4).normal(0, 1, size=40)
        a = mean_confidence_interval(x, method="bootstrap", seed=3)
        b = mean_confidence_interval(x, method="bootstrap", seed=3)
        assert a == b and a.lo < a.mean < a.hi

    def test_errors(self):
        with pytest.raises(ValueError):
            mean_confidence_interval([])
        with pytest.raises(ValueError):
            mean_confidence_interval([1, 2], level=1.0)
        with pytest.raises(ValueError):
            mean_confidence_interval([1, 2], method="wald")


class TestNegativity:
    def test_one_ego_half(self):
        r = negativity_summary({"e": [edge("e", "a", False), edge("e", "b", True)]})
        assert (r.summary.mean, r.summary.lo, r.summary.hi) == (50.0, 50.0, 50.0)

    def test_active_scope_and_exclusion(self, caplog):
        edges = {
            "e1": [edge("e1", "a", True), edge("e1", "b", False)],
            "e2": [edge("e2", "c", False)],
        }
        with caplog.at_level(logging.WARNING):
            r = negativity_summary(edges, "active", {"e1": {"a"}})
        assert r.excluded == 1 and r.summary.mean == 100.0 and r.summary.n == 1
        assert "excluded" in caplog.text

    def test_pooled_vs_ego(self):
        edges = {"e1": [edge("e1", "a", True)], "e2": [edge("e2", f"b{i}", False) for i in range(3)]}
        assert negativity_summary(edges).summary.mean == 50.0
        assert negativity_summary(edges, averaging="pooled").summary.mean == 25.0

    def test_errors(self):
        with pytest.raises(ValueError):
            negativity_summary({"e": []})
        with pytest.raises(ValueError):
            negativity_summary({"e": [edge("e", "a", True)]}, "active")
        with pytest.raises(ValueError):
            negativity_summary({"e": [edge("e", "a", True)]}, "partial")

    def test_planted_rate_recovered(self):
        rng = random.Random(5)
        edges = {f"e{i}": [edge(f"e{i}", f"a{j}", rng.random() < 0.3) for j in range(100)] for i in range(60)}
        s = negativity_summary(edges).summary
        assert s.lo <= 30.0 <= s.hi

    def test_invariant_under_ego_order(self):
        rng = random.Random(6)
        edges = {f"e{i}": [edge(f"e{i}", f"a{j}", rng.random() < 0.4) for j in range(10)] for i in range(20)}
        rev = dict(reversed(list(edges.items())))
        assert negativity_summary(edges).summary == negativity_summary(rev).summary


class TestCircles:
    def test_all_positive(self):
        net = ring_net("e", [1, 4, 10, 35, 100])
        neg = {("e", a): False for a in net.circle(4)}
        t = circle_tables([net], neg)
        assert t.sizes == [1, 5, 15, 50, 150]
        assert t.negative_pct == [0.0] * 5 and t.negative_counts == [0.0] * 5

    def test_restricted_to_k(self, caplog):
        four = ring_net("e", [1, 2, 3, 4])
        with caplog.at_level(logging.WARNING):
            t = circle_tables([four], {("e", a): False for a in four.circle(3)})
        assert t.empty and t.sizes == []

    def test_decreasing_negativity(self):
        rng = np.random.default_rng(2)
        nets, neg = [], {}
        for i in range(40):
            net = ring_net(f"e{i}", [2, 4, 10, 35, 100])
            nets.append(net)
            for k, ring in enumerate(net.rings):
                p = 0.6 - 0.05 * k
                for a in ring.alters:
                    neg[(net.ego_id, a)] = bool(rng.random() < p)
        t = circle_tables(nets, neg)
        assert all(a > b for a, b in zip(t.negative_pct, t.negative_pct[1:]))
        assert all(0 <= c <= s for c, s in zip(t.negative_counts, t.sizes))


def sample_report():
    nets = [ring_net("e1", [1, 4, 10, 35, 100]), ring_net("e2", [2, 3, 10])]
    edges = {n.ego_id: [edge(n.ego_id, a, i % 3 == 0) for i, a in enumerate(n.circle(n.optimum_circles - 1))] for n in nets}
    edges["e1"].append(edge("e1", "zz", True))
    pairs = {(e.stats.ego_id, e.stats.alter_id): e.stats.n_total for es in edges.values() for e in es}
    pairs[("gone", "x")] = 3
    return build_report(pairs, edges, nets, name="toy")


class TestBuildAndRender:
    def test_counts(self):
        rep = sample_report()
        assert rep.counts_full.egos == 3 and rep.counts_active.egos == 2
        assert all(a <= f for a, f in zip(rep.counts_active.as_tuple(), rep.counts_full.as_tuple()))
        assert rep.counts_active.relationships == 150 + 15
        assert rep.circles.n_egos == 1

    def test_count_corpus(self):
        c = count_corpus({("e", "a"): 2, ("e", "b"): 1, ("f", "a"): 4})
        assert c == Counts(2, 2, 3, 7)

    def test_markdown_layout(self):
        md = render_markdown(sample_report())
        assert "| Full Negatives (%) | Active Negatives (%) | Difference |" in md.replace("Dataset | ", "")
        assert "| Circle 1 | Circle 2 | Circle 3 | Circle 4 | Circle 5 |" in md
        assert "1.00 | 5.00 | 15.00 | 50.00 | 150.00" in md

    def test_deterministic(self):
        assert render_markdown(sample_report()) == render_markdown(sample_report())
        assert render_csv(sample_report()) == render_csv(sample_report())

    def test_empty_report_is_header_only(self):
        md = render_markdown(DatasetReport())
        for table in md.split("## ")[1:]:
            rows = [l for l in table.splitlines() if l.startswith("|")]
            assert len(rows) == 2
        for text in render_csv(DatasetReport()).values():
            assert len(text.splitlines()) == 1

    def test_csv_round_trip(self):
        rep = sample_report()
        parsed = parse_csv_tables(render_report(rep, "csv"))
        summ = {r["metric"]: r for r in parsed["summary.csv"]}
        for name, m in (("negativity_full", rep.negativity_full), ("active_size", rep.mean_active_size)):
            for key in ("mean", "lo", "hi"):
                assert abs(float(summ[name][key]) - getattr(m, key)) < 1e-9
        sizes = [float(r["mean_size"]) for r in parsed["circle_sizes.csv"]]
        assert sizes == pytest.approx(rep.circles.sizes, abs=1e-9)
        pct = [float(r["mean_negative_pct"]) for r in parsed["circle_negativity.csv"]]
        assert pct == pytest.approx(rep.circles.negative_pct, abs=1e-9)
        counts = parsed["counts.csv"]
        assert int(counts[0]["interactions"]) == rep.counts_full.interactions

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render_report(DatasetReport(), "html")

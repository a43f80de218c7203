import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signed_egonet.corpus import InteractionRecord, Kind, group_by_ego
from signed_egonet.egonet import (
    ConvergenceWarning,
    DegenerateBandwidth,
    EgoNetwork,
    MeanShiftConfig,
    Ring,
    TieFrequency,
    active_alters,
    build_ego_network,
    ego_tie_frequencies,
    estimate_bandwidth,
    mean_shift_1d,
    read_egonets,
    tie_frequency,
    write_egonets,
)
from signed_egonet.synth import SynthSpec, generate_corpus

from oracles import brute_bandwidth, random_instance, reference_mean_shift

DAY = 86400
END = 1_700_000_000


def recs(times, alter="a"):
    return [InteractionRecord("e", alter, Kind.REPLY, int(t)) for t in times]


def tf(freq, alter):
    # one-year duration makes freq_per_year == n_interactions
    return TieFrequency("e", alter, freq, 365.25) if float(freq).is_integer() else TieFrequency("e", alter, 1, 365.25 / freq)


class TestFrequency:
    def test_one_year(self):
        t = tie_frequency(recs([END - 365.25 * DAY] + [END] * 11), END)
        assert t.freq_per_year == 12.0

    def test_floor(self):
        t = tie_frequency(recs([END]), END)
        assert t.duration_days == 30.0
        assert t.freq_per_year == pytest.approx(12.175)

    def test_empty(self):
        with pytest.raises(ValueError):
            tie_frequency([], END)

    def test_end_before_last(self):
        with pytest.raises(ValueError):
            tie_frequency(recs([END]), END - 1)

    def test_poisson_rate_within_three_sigma(self):
        lam, years = 52.0, 2.0
        sigma = math.sqrt(lam * years) / years
        hits = 0
        for seed in range(200):
            rng = np.random.default_rng(seed)
            n = max(int(rng.poisson(lam * years)), 1)
            times = rng.uniform(END - years * 365.25 * DAY, END, size=n)
            hits += abs(tie_frequency(recs(times), END).freq_per_year - lam) <= 3 * sigma
        # 3 sigma holds with probability ~0.997; allow sampling slack
        assert hits >= 194

    def test_ego_frequencies_sorted_and_end_defaults(self):
        r = recs([END - 100 * DAY, END], "b") + recs([END - 50 * DAY], "a")
        out = ego_tie_frequencies(r)
        assert [t.alter_id for t in out] == ["a", "b"]
        assert out[1].duration_days == 100.0


class TestActive:
    def test_boundary_inclusive(self):
        out = active_alters([tf(2.0, "x"), tf(1.0, "y"), tf(0.5, "z")])
        assert [t.alter_id for t in out] == ["x", "y"]

    def test_all_below(self):
        assert active_alters([tf(0.5, "x"), tf(0.99, "y")]) == []

    def test_planted_split_recovered(self, small_synth):
        _, records, truth = small_synth
        planted = {(t.ego, t.alter) for t in truth.ties if t.band >= 0}
        found = set()
        for ego, rs in group_by_ego(records).items():
            found |= {(ego, t.alter_id) for t in active_alters(ego_tie_frequencies(rs))}
        assert found == planted


class TestBandwidth:
    def test_two_points(self):
        assert estimate_bandwidth([0, 1], 0.5) == 1.0

    def test_identical(self):
        with pytest.raises(DegenerateBandwidth, match="identical"):
            estimate_bandwidth([0, 0, 0])

    def test_too_few(self):
        with pytest.raises(ValueError):
            estimate_bandwidth([1.0])

    @pytest.mark.parametrize("q", [0.1, 0.3, 0.5, 0.99])
    def test_brute_force_knn(self, q):
        pts = np.random.default_rng(5).uniform(0, 100, size=100).tolist()
        assert estimate_bandwidth(pts, q) == brute_bandwidth(pts, q)

    def test_with_duplicates(self):
        pts = [1.0, 1.0, 2.0, 5.0, 5.0, 5.0]
        assert estimate_bandwidth(pts, 0.3) == brute_bandwidth(pts, 0.3)


class TestMeanShift:
    def test_single_point(self):
        labels, modes = mean_shift_1d([4.2])
        assert labels.tolist() == [0] and modes.tolist() == [4.2]

    def test_fixed_example(self):
        labels, modes = mean_shift_1d([0.9, 1.0, 1.1, 9.9, 10.1, 100], MeanShiftConfig(bandwidth=1.0))
        assert len(modes) == 3
        assert labels.tolist() == [2, 2, 2, 1, 1, 0]
        assert modes.tolist() == pytest.approx([100, 10, 1])

    def test_matches_reference_on_random_instances(self):
        rng = np.random.default_rng(2024)
        for trial in range(200):
            pts, h = random_instance(rng, estimate_bandwidth)
            labels, modes = mean_shift_1d(pts, MeanShiftConfig(bandwidth=h))
            ref_labels, ref_modes = reference_mean_shift(pts, h)
            assert labels.tolist() == ref_labels, trial
            assert modes.tolist() == pytest.approx(ref_modes, abs=1e-9)

    def test_modes_descending_and_labels_cover(self):
        pts = np.random.default_rng(1).normal(0, 5, size=40)
        labels, modes = mean_shift_1d(pts, MeanShiftConfig(bandwidth=2.0))
        assert list(modes) == sorted(modes, reverse=True)
        assert set(labels.tolist()) == set(range(len(modes)))

    def test_permutation_invariant(self):
        rng = np.random.default_rng(8)
        pts = rng.normal(0, 10, size=30)
        perm = rng.permutation(30)
        cfg = MeanShiftConfig(bandwidth=3.0)
        l1, m1 = mean_shift_1d(pts, cfg)
        l2, m2 = mean_shift_1d(pts[perm], cfg)
        assert l2.tolist() == l1[perm].tolist()
        assert m2 == pytest.approx(m1)

    def test_joint_scaling_invariant(self):
        pts = np.random.default_rng(9).normal(0, 10, size=30)
        l1, m1 = mean_shift_1d(pts, MeanShiftConfig(bandwidth=3.0))
        l2, m2 = mean_shift_1d(pts * 4, MeanShiftConfig(bandwidth=12.0, convergence_tol=4e-4))
        assert l1.tolist() == l2.tolist()
        assert m2 == pytest.approx(m1 * 4)

    def test_cluster_count_non_increasing_in_bandwidth(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            pts = np.concatenate([rng.normal(c, 0.5, size=8) for c in rng.uniform(0, 60, size=4)])
            counts = [len(mean_shift_1d(pts, MeanShiftConfig(bandwidth=h))[1]) for h in (0.5, 1, 2, 4, 8, 16, 64)]
            assert counts == sorted(counts, reverse=True)

    def test_non_convergence_warns_and_assigns(self):
        pts = np.linspace(0, 10, 21)
        with pytest.warns(ConvergenceWarning):
            labels, modes = mean_shift_1d(pts, MeanShiftConfig(bandwidth=1.0, max_iterations=1))
        assert len(labels) == 21 and labels.max() < len(modes)

    def test_config_validation(self):
        for kw in ({"quantile": 0}, {"quantile": 1}, {"bandwidth": -1}, {"bandwidth": "wide"}, {"max_iterations": 0}, {"mode_merge_radius": 0}):
            with pytest.raises(ValueError):
                MeanShiftConfig(**kw)


def _concentric(net, freqs):
    f = {t.alter_id: t.freq_per_year for t in freqs}
    for inner, outer in zip(net.rings, net.rings[1:]):
        assert min(f[a] for a in inner.alters) >= max(f[a] for a in outer.alters)


class TestBuild:
    def test_single_alter(self):
        net = build_ego_network([tf(3.0, "a")])
        assert net.optimum_circles == 1 and net.circle_sizes == (1,) and net.active_size == 1

    def test_identical_frequencies(self):
        net = build_ego_network([tf(5.0, a) for a in "abcd"])
        assert net.circle_sizes == (4,)

    def test_empty(self):
        with pytest.raises(ValueError):
            build_ego_network([])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(1.0, 500.0), min_size=1, max_size=60), st.booleans())
    def test_invariants(self, values, log_space):
        freqs = [tf(v, f"a{i}") for i, v in enumerate(values)]
        net = build_ego_network(freqs, MeanShiftConfig(log_space=log_space))
        sizes = net.circle_sizes
        assert all(a < b for a, b in zip(sizes, sizes[1:]))
        assert sizes[-1] == net.active_size == len(values)
        assert sorted(a for r in net.rings for a in r.alters) == sorted(t.alter_id for t in freqs)
        assert all(a.mode_freq > b.mode_freq for a, b in zip(net.rings, net.rings[1:]))
        _concentric(net, freqs)

    def test_planted_bands_recovered(self, pools):
        spec = SynthSpec(n_egos=10, count_model="expected", n_inactive=0, seed=4)
        records, truth = generate_corpus(spec, pools)
        bands = {(t.ego, t.alter): t.band for t in truth.ties}
        cfg = MeanShiftConfig(log_space=True, quantile=spec.quantile)
        for ego, rs in group_by_ego(records).items():
            freqs = active_alters(ego_tie_frequencies(rs))
            net = build_ego_network(freqs, cfg, ego)
            assert net.optimum_circles == 5
            assert all(bands[(ego, a)] == k for a, k in net.ring_of().items())
            assert list(net.circle_sizes) == truth.circle_sizes[ego]

    def test_circle_is_cumulative(self):
        net = EgoNetwork("e", (Ring(10.0, ("a",)), Ring(3.0, ("b", "c"))))
        assert net.circle(0) == ["a"] and net.circle(1) == ["a", "b", "c"]
        assert net.circle_sizes == (1, 3)


def test_egonet_jsonl_round_trip(tmp_path):
    nets = [EgoNetwork("e1", (Ring(12.5, ("a", "b")), Ring(1.25, ("c",)))), EgoNetwork("e2", (Ring(2.0, ("z",)),))]
    path = tmp_path / "egonets.jsonl"
    with open(path, "w") as fh:
        write_egonets(nets, fh)
    first = json.loads(path.read_text().splitlines()[0])
    assert set(first) == {"ego", "optimum_circles", "circle_sizes", "rings", "active_size"}
    with open(path) as fh:
        assert read_egonets(fh) == nets


def test_inconsistent_json_rejected():
    obj = EgoNetwork("e", (Ring(1.0, ("a",)),)).to_json()
    obj["circle_sizes"] = [2]
    with pytest.raises(ValueError):
        EgoNetwork.from_json(obj)

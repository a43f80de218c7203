"""Dataset-level tables: counts, negativity with CIs and per-circle summaries."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from .egonet import EgoNetwork
from .signing import SignedRelationship

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeanWithCI:
    mean: float
    lo: float
    hi: float
    n: int
    level: float = 0.95

    def __post_init__(self):
        if not self.lo <= self.mean <= self.hi:
            raise ValueError("interval must contain the mean")


def t_quantile(p: float, df: int) -> float:
    """Student-t quantile for p > 1/2, polished to near machine precision.

    ``scipy``'s inverse is only good to ~1e-11 relative; one Newton step on
    the upper tail, whose evaluation is accurate, removes that error.
    """
    x = float(stats.t.ppf(p, df))
    return x + (float(stats.t.sf(x, df)) - (1 - p)) / float(stats.t.pdf(x, df))


def mean_confidence_interval(
    values: Iterable[float], level: float = 0.95, method: str = "t", n_boot: int = 10_000, seed: int = 0
) -> MeanWithCI:
    """Two-sided interval for the mean: Student-t (default) or percentile bootstrap."""
    x = np.asarray(list(values), dtype=float)
    if x.size == 0:
        raise ValueError("no values")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    mean = math.fsum(x.tolist()) / x.size
    if x.size == 1 or np.all(x == x[0]):
        return MeanWithCI(mean, mean, mean, int(x.size), level)
    if method == "t":
        s = float(np.std(x, ddof=1))
        half = t_quantile(0.5 + level / 2, x.size - 1) * s / math.sqrt(x.size)
        return MeanWithCI(mean, mean - half, mean + half, int(x.size), level)
    if method == "bootstrap":
        rng = np.random.default_rng(seed)
        boots = x[rng.integers(0, x.size, size=(n_boot, x.size))].mean(axis=1)
        lo, hi = np.quantile(boots, [(1 - level) / 2, (1 + level) / 2])
        return MeanWithCI(mean, min(float(lo), mean), max(float(hi), mean), int(x.size), level)
    raise ValueError(f"unknown CI method {method!r}")


@dataclass(frozen=True)
class Counts:
    egos: int = 0
    alters: int = 0
    relationships: int = 0
    interactions: int = 0

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.egos, self.alters, self.relationships, self.interactions)


@dataclass
class NegativityResult:
    summary: MeanWithCI
    excluded: int = 0


def negativity_summary(
    edges_by_ego: Mapping[str, Sequence[SignedRelationship]],
    scope: str = "full",
    active_sets: Mapping[str, set[str]] | None = None,
    averaging: str = "ego",
    level: float = 0.95,
    ci_method: str = "t",
    seed: int = 0,
) -> NegativityResult:
    """Mean percentage of negative relationships.

    ``averaging="ego"`` averages per-ego percentages; ``"pooled"`` treats
    every in-scope edge as one observation. Egos without in-scope edges are
    dropped and counted in ``excluded``.
    """
    if scope not in ("full", "active"):
        raise ValueError(f"unknown scope {scope!r}")
    if scope == "active" and active_sets is None:
        raise ValueError("active scope needs active_sets")
    per_ego, pooled, excluded = [], [], 0
    for ego in sorted(edges_by_ego):
        edges = edges_by_ego[ego]
        if scope == "active":
            keep = active_sets.get(ego, set())
            edges = [e for e in edges if e.stats.alter_id in keep]
        if not edges:
            excluded += 1
            continue
        flags = [100.0 if e.is_negative else 0.0 for e in edges]
        per_ego.append(math.fsum(flags) / len(flags))
        pooled.extend(flags)
    if excluded:
        log.warning("%d ego(s) without %s-scope relationships excluded", excluded, scope)
    if not per_ego:
        raise ValueError("no eligible egos")
    if averaging == "ego":
        values = per_ego
    elif averaging == "pooled":
        values = pooled
    else:
        raise ValueError(f"unknown averaging {averaging!r}")
    return NegativityResult(mean_confidence_interval(values, level, ci_method, seed=seed), excluded)


@dataclass
class CircleTables:
    k: int
    n_egos: int = 0
    sizes: list[float] = field(default_factory=list)
    negative_counts: list[float] = field(default_factory=list)
    negative_pct: list[float] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return self.n_egos == 0


def circle_tables(
    egonets: Iterable[EgoNetwork], negative: Mapping[tuple[str, str], bool], restrict_k: int = 5
) -> CircleTables:
    """Per concentric circle: mean size, mean negative count, mean negative %.

    Only egos whose optimum circle count equals ``restrict_k`` contribute.
    ``negative`` maps (ego, alter) to whether that relationship is negative.
    """
    nets = [n for n in egonets if n.optimum_circles == restrict_k]
    tables = CircleTables(restrict_k, len(nets))
    if not nets:
        log.warning("no ego with %d circles; circle tables are empty", restrict_k)
        return tables
    sizes = np.zeros((len(nets), restrict_k))
    negs = np.zeros_like(sizes)
    for i, net in enumerate(sorted(nets, key=lambda n: n.ego_id)):
        for k in range(restrict_k):
            members = net.circle(k)
            sizes[i, k] = len(members)
            negs[i, k] = sum(negative[(net.ego_id, a)] for a in members)
    pct = 100.0 * negs / sizes
    tables.sizes = [math.fsum(c) / len(nets) for c in sizes.T.tolist()]
    tables.negative_counts = [math.fsum(c) / len(nets) for c in negs.T.tolist()]
    tables.negative_pct = [math.fsum(c) / len(nets) for c in pct.T.tolist()]
    return tables


@dataclass
class DatasetReport:
    counts_full: Counts = field(default_factory=Counts)
    counts_active: Counts = field(default_factory=Counts)
    negativity_full: MeanWithCI | None = None
    negativity_active: MeanWithCI | None = None
    mean_optimum_circles: MeanWithCI | None = None
    mean_active_size: MeanWithCI | None = None
    circles: CircleTables = field(default_factory=lambda: CircleTables(5))
    name: str = "dataset"


def count_corpus(pairs: Mapping[tuple[str, str], int]) -> Counts:
    """Counts from a mapping (ego, alter) -> number of interactions."""
    return Counts(
        egos=len({e for e, _ in pairs}),
        alters=len({a for _, a in pairs}),
        relationships=len(pairs),
        interactions=sum(pairs.values()),
    )


def build_report(
    pair_counts_full: Mapping[tuple[str, str], int] | Counts,
    edges_by_ego: Mapping[str, Sequence[SignedRelationship]],
    egonets: Sequence[EgoNetwork],
    averaging: str = "ego",
    ci_method: str = "t",
    level: float = 0.95,
    restrict_k: int = 5,
    name: str = "dataset",
    seed: int = 0,
) -> DatasetReport:
    """Assemble every table.

    ``pair_counts_full`` covers the whole input before the engagement
    filter (a precomputed :class:`Counts` is accepted too); ``edges_by_ego`` holds the signed relationships of engaged egos;
    ``egonets`` their active networks.
    """
    active_sets = {n.ego_id: set(n.circle(n.optimum_circles - 1)) for n in egonets}
    active_pairs = {
        (e.stats.ego_id, e.stats.alter_id): e.stats.n_total
        for ego, edges in edges_by_ego.items()
        for e in edges
        if e.stats.alter_id in active_sets.get(ego, ())
    }
    counts_active = count_corpus(active_pairs)
    counts_active = Counts(len(edges_by_ego), counts_active.alters, counts_active.relationships, counts_active.interactions)
    full = pair_counts_full if isinstance(pair_counts_full, Counts) else count_corpus(pair_counts_full)
    rep = DatasetReport(full, counts_active, name=name)
    rep.circles = CircleTables(restrict_k)
    if edges_by_ego and any(edges_by_ego.values()):
        rep.negativity_full = negativity_summary(edges_by_ego, "full", None, averaging, level, ci_method, seed).summary
    if egonets:
        rep.negativity_active = negativity_summary(edges_by_ego, "active", active_sets, averaging, level, ci_method, seed).summary
        rep.mean_optimum_circles = mean_confidence_interval([n.optimum_circles for n in egonets], level, ci_method, seed=seed)
        rep.mean_active_size = mean_confidence_interval([n.active_size for n in egonets], level, ci_method, seed=seed)
        negative = {(e.stats.ego_id, e.stats.alter_id): e.is_negative for edges in edges_by_ego.values() for e in edges}
        rep.circles = circle_tables(egonets, negative, restrict_k)
    return rep


# rendering

def _ci(m: MeanWithCI | None) -> str:
    return "" if m is None else f"{m.mean:.2f} [{m.lo:.2f}, {m.hi:.2f}]"


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines)


def render_markdown(rep: DatasetReport) -> str:
    out = [f"# Signed ego network report: {rep.name}", ""]
    head = ["Network", "Egos", "Alters", "Relationships", "Interactions"]
    out += ["## Dataset counts", ""]
    rows = [["Full", *map(str, rep.counts_full.as_tuple())], ["Active", *map(str, rep.counts_active.as_tuple())]]
    if rep.counts_full == Counts() and rep.counts_active == Counts():
        rows = []
    out += [_md_table(head, rows), ""]

    out += ["## Negative relationships (%), 95% CI in brackets", ""]
    rows = []
    if rep.negativity_full and rep.negativity_active:
        diff = rep.negativity_active.mean - rep.negativity_full.mean
        rows = [[rep.name, _ci(rep.negativity_full), _ci(rep.negativity_active), f"{diff:+.2f}"]]
    out += [_md_table(["Dataset", "Full Negatives (%)", "Active Negatives (%)", "Difference"], rows), ""]

    out += ["## Optimum circles and ego network size", ""]
    rows = []
    if rep.mean_optimum_circles and rep.mean_active_size:
        rows = [[rep.name, _ci(rep.mean_optimum_circles), _ci(rep.mean_active_size)]]
    out += [_md_table(["Dataset", "Mean Optimum Circle", "Mean Ego Network Size"], rows), ""]

    c = rep.circles
    circles = [f"Circle {i + 1}" for i in range(c.k)]
    out += [f"## Mean circle sizes (egos with {c.k} circles, n={c.n_egos})", ""]
    rows = [] if c.empty else [[rep.name, *(f"{v:.2f}" for v in c.sizes)]]
    out += [_md_table(["Dataset", *circles], rows), ""]
    out += [f"## Negative relationships per circle (egos with {c.k} circles)", ""]
    rows = [] if c.empty else [[rep.name, *(f"{n:.2f} ({p:.2f}%)" for n, p in zip(c.negative_counts, c.negative_pct))]]
    out += [_md_table(["Dataset", *circles], rows), ""]
    return "\n".join(out)


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


CI_HEADER = ["metric", "mean", "lo", "hi", "n", "level"]


def render_csv(rep: DatasetReport) -> dict[str, str]:
    """One CSV document per table, keyed by file name; floats at full precision."""
    counts = [("full", *rep.counts_full.as_tuple()), ("active", *rep.counts_active.as_tuple())]
    if rep.counts_full == Counts() and rep.counts_active == Counts():
        counts = []
    summary = [
        (name, m.mean, m.lo, m.hi, m.n, m.level)
        for name, m in (
            ("negativity_full", rep.negativity_full),
            ("negativity_active", rep.negativity_active),
            ("optimum_circles", rep.mean_optimum_circles),
            ("active_size", rep.mean_active_size),
        )
        if m is not None
    ]
    c = rep.circles
    return {
        "counts.csv": _csv(["scope", "egos", "alters", "relationships", "interactions"], counts),
        "summary.csv": _csv(CI_HEADER, summary),
        "circle_sizes.csv": _csv(["circle", "mean_size"], [(i + 1, v) for i, v in enumerate(c.sizes)]),
        "circle_negativity.csv": _csv(
            ["circle", "mean_negative_count", "mean_negative_pct"],
            [(i + 1, n, p) for i, (n, p) in enumerate(zip(c.negative_counts, c.negative_pct))],
        ),
    }


def render_report(rep: DatasetReport, fmt: str = "markdown") -> str | dict[str, str]:
    if fmt == "markdown":
        return render_markdown(rep)
    if fmt == "csv":
        return render_csv(rep)
    raise ValueError(f"unknown report format {fmt!r}")


def parse_csv_tables(tables: Mapping[str, str]) -> dict[str, list[dict[str, str]]]:
    return {name: list(csv.DictReader(io.StringIO(text))) for name, text in tables.items()}

"""Interaction frequencies, 1-D mean-shift clustering and Dunbar circles."""

from __future__ import annotations

import json
import logging
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .corpus import SECONDS_PER_DAY, InteractionRecord

log = logging.getLogger(__name__)

DAYS_PER_YEAR = 365.25
DURATION_FLOOR_DAYS = 30.0
ACTIVE_MIN_FREQ = 1.0


class DegenerateBandwidth(ValueError):
    """All points coincide, so no positive bandwidth exists."""


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TieFrequency:
    ego_id: str
    alter_id: str
    n_interactions: int
    duration_days: float

    @property
    def freq_per_year(self) -> float:
        return self.n_interactions * DAYS_PER_YEAR / self.duration_days


@dataclass(frozen=True)
class MeanShiftConfig:
    bandwidth: float | str = "auto"
    quantile: float = 0.3
    max_iterations: int = 300
    convergence_tol: float = 1e-4
    mode_merge_radius: float | None = None  # None: same as the bandwidth
    log_space: bool = False

    def __post_init__(self):
        if not 0 < self.quantile < 1:
            raise ValueError("quantile must lie in (0, 1)")
        if self.bandwidth != "auto" and not (isinstance(self.bandwidth, (int, float)) and self.bandwidth > 0):
            raise ValueError("bandwidth must be positive or 'auto'")
        if self.max_iterations < 1 or self.convergence_tol <= 0:
            raise ValueError("max_iterations and convergence_tol must be positive")
        if self.mode_merge_radius is not None and self.mode_merge_radius <= 0:
            raise ValueError("mode_merge_radius must be positive")


@dataclass(frozen=True)
class Ring:
    mode_freq: float
    alters: tuple[str, ...]


@dataclass(frozen=True)
class EgoNetwork:
    ego_id: str
    rings: tuple[Ring, ...]
    circle_sizes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        sizes, total = [], 0
        for ring in self.rings:
            total += len(ring.alters)
            sizes.append(total)
        object.__setattr__(self, "circle_sizes", tuple(sizes))

    @property
    def optimum_circles(self) -> int:
        return len(self.rings)

    @property
    def active_size(self) -> int:
        return self.circle_sizes[-1] if self.circle_sizes else 0

    def ring_of(self) -> dict[str, int]:
        return {a: k for k, ring in enumerate(self.rings) for a in ring.alters}

    def circle(self, k: int) -> list[str]:
        """Alters of the k-th (0-based) concentric circle, i.e. rings 0..k."""
        return [a for ring in self.rings[: k + 1] for a in ring.alters]

    def to_json(self) -> dict:
        return {
            "ego": self.ego_id,
            "optimum_circles": self.optimum_circles,
            "circle_sizes": list(self.circle_sizes),
            "rings": [{"mode_freq": r.mode_freq, "alters": list(r.alters)} for r in self.rings],
            "active_size": self.active_size,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EgoNetwork":
        rings = tuple(Ring(float(r["mode_freq"]), tuple(r["alters"])) for r in obj["rings"])
        net = cls(obj["ego"], rings)
        if list(net.circle_sizes) != list(obj["circle_sizes"]):
            raise ValueError(f"ego {obj['ego']}: circle_sizes inconsistent with rings")
        return net


def tie_frequency(
    records: Sequence[InteractionRecord],
    observation_end: int,
    floor_days: float = DURATION_FLOOR_DAYS,
) -> TieFrequency:
    """Interactions per year for one Ego->Alter pair.

    Duration runs from the first interaction to ``observation_end`` and is
    clamped below at ``floor_days``.
    """
    if not records:
        raise ValueError("no interactions for tie")
    first = min(r.timestamp for r in records)
    if observation_end < max(r.timestamp for r in records):
        raise ValueError("observation_end precedes the last interaction")
    days = max((observation_end - first) / SECONDS_PER_DAY, floor_days)
    return TieFrequency(records[0].ego_id, records[0].alter_id, len(records), days)


def ego_tie_frequencies(
    records: Sequence[InteractionRecord],
    observation_end: int | None = None,
    floor_days: float = DURATION_FLOOR_DAYS,
) -> list[TieFrequency]:
    """All tie frequencies of one ego, sorted by alter id.

    ``observation_end`` defaults to the ego's last recorded interaction.
    """
    if not records:
        return []
    if observation_end is None:
        observation_end = max(r.timestamp for r in records)
    by_alter: dict[str, list[InteractionRecord]] = defaultdict(list)
    for r in records:
        by_alter[r.alter_id].append(r)
    return [tie_frequency(recs, observation_end, floor_days) for _, recs in sorted(by_alter.items())]


def active_alters(freqs: Iterable[TieFrequency], min_freq: float = ACTIVE_MIN_FREQ) -> list[TieFrequency]:
    kept = [f for f in freqs if f.freq_per_year >= min_freq]
    kept.sort(key=lambda f: (-f.freq_per_year, f.alter_id))
    return kept


def _kth_rank(quantile: float, n: int) -> int:
    # round first so 0.3 * 10 counts as 3, not 3.0000000000000004
    return min(max(math.ceil(round(quantile * n, 9)), 1), n - 1)


def estimate_bandwidth(points: Sequence[float], quantile: float = 0.3) -> float:
    """Mean distance from each point to its ceil(quantile * n)-th nearest neighbour."""
    x = np.asarray(points, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two points")
    if np.all(x == x[0]):
        raise DegenerateBandwidth("degenerate: identical points")
    k = _kth_rank(quantile, x.size)
    d = np.sort(np.abs(x[:, None] - x[None, :]), axis=1)
    # column 0 is each point's zero distance to itself
    bw = math.fsum(d[:, k].tolist()) / x.size
    if bw <= 0:
        raise DegenerateBandwidth("degenerate: bandwidth is zero")
    return bw


def _merge_modes(positions: np.ndarray, radius: float) -> tuple[list[float], np.ndarray]:
    """Greedy merge of converged positions, highest first.

    A position joins the current group if it lies within ``radius`` of the
    group's first (highest) member; ties go to the higher mode.
    """
    order = sorted(range(len(positions)), key=lambda i: -positions[i])
    labels = np.empty(len(positions), dtype=int)
    groups: list[list[float]] = []
    anchor = math.inf
    for i in order:
        p = float(positions[i])
        if not groups or anchor - p > radius:
            groups.append([])
            anchor = p
        groups[-1].append(p)
        labels[i] = len(groups) - 1
    return [math.fsum(g) / len(g) for g in groups], labels


def mean_shift_1d(points: Sequence[float], config: MeanShiftConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Flat-kernel mean shift on scalars.

    Returns ``(labels, modes)`` with ``modes`` sorted in descending order and
    ``labels[i]`` the index of point i's mode. ``config.log_space`` is
    ignored here; callers transform the points themselves.
    """
    config = config or MeanShiftConfig()
    x = np.asarray(points, dtype=float)
    if x.size == 0:
        raise ValueError("need at least one point")
    if x.size == 1:
        return np.zeros(1, dtype=int), x.copy()
    h = estimate_bandwidth(x, config.quantile) if config.bandwidth == "auto" else float(config.bandwidth)
    radius = h if config.mode_merge_radius is None else config.mode_merge_radius

    srt = np.sort(x)
    pos = x.copy()
    converged = np.zeros(x.size, dtype=bool)
    for _ in range(config.max_iterations):
        live = np.flatnonzero(~converged)
        if live.size == 0:
            break
        inside = np.abs(srt[None, :] - pos[live, None]) <= h
        lo = inside.argmax(axis=1)
        hi = inside.shape[1] - inside[:, ::-1].argmax(axis=1)
        for j, i in enumerate(live):
            new = math.fsum(srt[lo[j] : hi[j]].tolist()) / (hi[j] - lo[j])
            if abs(new - pos[i]) < config.convergence_tol:
                converged[i] = True
            pos[i] = new

    if converged.all():
        return _relabel(*_merge_modes(pos, radius))

    n_bad = int((~converged).sum())
    warnings.warn(f"{n_bad} point(s) did not converge in {config.max_iterations} iterations", ConvergenceWarning, stacklevel=2)
    if not converged.any():
        return _relabel(*_merge_modes(pos, radius))
    modes, sub = _merge_modes(pos[converged], radius)
    labels = np.empty(x.size, dtype=int)
    labels[converged] = sub
    marr = np.asarray(modes)
    for i in np.flatnonzero(~converged):
        # modes are descending, so argmin picks the higher mode on ties
        labels[i] = int(np.argmin(np.abs(marr - pos[i])))
    return labels, marr


def _relabel(modes: list[float], labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return labels, np.asarray(modes, dtype=float)


def _distinct_bandwidth(values: np.ndarray) -> float:
    gaps = np.diff(np.unique(values))
    return float(gaps.min()) / 2


def build_ego_network(freqs: Sequence[TieFrequency], config: MeanShiftConfig | None = None, ego_id: str | None = None) -> EgoNetwork:
    """Cluster active ties into concentric rings, innermost first."""
    config = config or MeanShiftConfig()
    if not freqs:
        raise ValueError("empty active set")
    ego_id = ego_id if ego_id is not None else freqs[0].ego_id
    f = np.array([t.freq_per_year for t in freqs])
    pts = np.log(f) if config.log_space else f

    if pts.size == 1 or np.all(pts == pts[0]):
        labels, modes = np.zeros(pts.size, dtype=int), np.array([pts[0]])
    else:
        cfg = config
        if config.bandwidth == "auto":
            try:
                bw = estimate_bandwidth(pts, config.quantile)
            except DegenerateBandwidth:
                bw = _distinct_bandwidth(pts)
            cfg = MeanShiftConfig(bw, config.quantile, config.max_iterations, config.convergence_tol, config.mode_merge_radius)
        labels, modes = mean_shift_1d(pts, cfg)

    if config.log_space:
        modes = np.exp(modes)
    members: list[list[int]] = [[] for _ in modes]
    for i, lab in enumerate(labels):
        members[lab].append(i)
    rings = []
    for mode, idx in zip(modes, members):
        idx.sort(key=lambda i: (-f[i], freqs[i].alter_id))
        rings.append(Ring(float(mode), tuple(freqs[i].alter_id for i in idx)))
    return EgoNetwork(ego_id, tuple(rings))


def write_egonets(nets: Iterable[EgoNetwork], fh: IO[str]) -> None:
    for net in nets:
        fh.write(json.dumps(net.to_json(), separators=(",", ":")))
        fh.write("\n")


def read_egonets(fh: IO[str]) -> list[EgoNetwork]:
    return [EgoNetwork.from_json(json.loads(line)) for line in fh if line.strip()]

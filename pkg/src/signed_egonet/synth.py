"""Synthetic interaction corpora with planted signs, bands and circles.

Each ego gets a few concentric bands of alters. A tie in band ``k`` draws
its interaction count from a Poisson law with the band's yearly rate, and
its texts are picked from sentence pools that the bundled scorer has
already labelled, so the negative share of every tie is known exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import IO, Sequence

import numpy as np

from .corpus import InteractionRecord, Kind
from .egonet import DAYS_PER_YEAR, DegenerateBandwidth, EgoNetwork, estimate_bandwidth
from .sentiment import NEGATIVE, POSITIVE, LexiconScorer, ScorerConfig, clean_text, load_lexicon, polarity_of
from .signing import GOLDEN_THRESHOLD, SignedRelationship

DAY = 86400
# 2020-01-01T00:00:00Z
DEFAULT_START = 1577836800

NEGATIVE_SENTENCES = [
    "You are a liar and a fraud.",
    "What a terrible take, you should be ashamed.",
    "This is the worst article I have read all year.",
    "Disgusting behaviour, utterly shameful.",
    "Stop spreading lies, it is dangerous and irresponsible.",
    "That was a stupid, stupid decision.",
    "The new rules are unfair and cruel.",
    "I hate this policy and everyone who supports it.",
    "This makes me furious.",
    "Horrible service, never again!",
    "Your argument is pathetic and dishonest.",
    "Awful reporting, full of errors.",
    "This is a disaster and you know it.",
    "Shame on you for this nonsense.",
    "Such a hypocrite, it is sickening.",
    "Terrible idea, it will hurt everyone.",
    "You have no idea how wrong you are.",
    "What an ugly and hateful comment.",
    "Embarrassing and incompetent as usual.",
    "I am sick of your lies.",
]

POSITIVE_SENTENCES = [
    "Great interview today, really insightful.",
    "Congratulations on the award, well deserved.",
    "Thanks for the kind words, much appreciated.",
    "Happy birthday! Hope you have a wonderful day.",
    "Well done, proud of you.",
    "Such a beautiful photo, thanks for posting.",
    "Agreed, excellent point.",
    "Really enjoyed the panel discussion this morning.",
    "Love this, brilliant work.",
    "Glad to help, anytime.",
    "What a lovely thread, thank you.",
    "Fantastic news, congrats to the whole team.",
    "This is a great idea.",
    "Good luck with the launch!",
    "Wonderful piece, I learned a lot.",
    "Thank you for sharing this.",
    "So happy for you both.",
    "Best analysis I have seen on this.",
    "Nice work, keep it up.",
    "Amazing result, well played.",
]

NEUTRAL_SENTENCES = [
    "The report is out today.",
    "Meeting moved to Thursday.",
    "See the figures in the appendix.",
    "Link to the document below.",
    "We are discussing this on the panel tomorrow.",
    "The vote is scheduled for next week.",
    "Here is the schedule for the conference.",
    "Page two has the details.",
]

KIND_ORDER = (Kind.REPLY, Kind.MENTION, Kind.RETWEET, Kind.QUOTE_RETWEET)


class InfeasibleSpec(ValueError):
    pass


MAX_REDRAWS = 50


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic population.

    ``band_sizes`` are expected ring sizes, innermost first; band 0 is
    realised as 1 or 2 alters with equal odds when its size is 1.5, other
    bands draw a Poisson size (at least 1). ``band_rates`` are yearly
    interaction rates per tie.
    """

    n_egos: int = 500
    band_sizes: tuple[float, ...] = (1.5, 3.5, 10.0, 35.0, 100.0)
    band_rates: tuple[float, ...] = (127.0, 50.8, 20.3, 8.1, 3.25)
    band_negative_prob: tuple[float, ...] = (0.6, 0.55, 0.5, 0.45, 0.4)
    n_inactive: float = 40.0
    inactive_negative_prob: float = 0.1
    negative_tie_fraction: float = 0.4
    positive_tie_fraction: float = 0.05
    kind_weights: tuple[float, float, float, float] = (0.4, 0.3, 0.2, 0.1)
    window_days: float = 730.0
    start_ts: int = DEFAULT_START
    count_model: str = "poisson"  # or "expected": round(rate * window), no dispersion
    exact_fractions: bool = False
    sign_threshold: float = GOLDEN_THRESHOLD
    log_space: bool = True
    quantile: float = 0.15
    separation_factor: float = 3.0
    min_total: int = 2000  # redraw egos that would fail the engagement filter
    seed: int = 1

    def __post_init__(self):
        n = len(self.band_sizes)
        if n == 0 or len(self.band_rates) != n or len(self.band_negative_prob) != n:
            raise InfeasibleSpec("band_sizes, band_rates and band_negative_prob must have equal non-zero length")
        if any(r <= 0 for r in self.band_rates) or list(self.band_rates) != sorted(self.band_rates, reverse=True):
            raise InfeasibleSpec("band_rates must be positive and strictly decreasing outward")
        if len(set(self.band_rates)) != n:
            raise InfeasibleSpec("band_rates must be distinct")
        probs = [*self.band_negative_prob, self.inactive_negative_prob, self.negative_tie_fraction, self.positive_tie_fraction]
        if any(not 0 <= p <= 1 for p in probs):
            raise InfeasibleSpec("probabilities must lie in [0, 1]")
        if self.count_model not in ("poisson", "expected"):
            raise InfeasibleSpec(f"unknown count_model {self.count_model!r}")
        if self.window_days <= DAYS_PER_YEAR and self.n_inactive > 0:
            raise InfeasibleSpec("inactive ties need an observation window longer than a year")
        if min(self.band_rates) * self.window_days / DAYS_PER_YEAR < 1:
            raise InfeasibleSpec("outermost band expects fewer than one interaction in the window")

    def expected_points(self) -> np.ndarray:
        sizes = [max(1, round(s)) for s in self.band_sizes]
        pts = np.repeat(np.asarray(self.band_rates, dtype=float), sizes)
        return np.log(pts) if self.log_space else pts

    def check_separation(self) -> float:
        """Ratio of the smallest band gap to the expected auto bandwidth.

        Raises :class:`InfeasibleSpec` when it is below ``separation_factor``.
        """
        rates = np.asarray(self.band_rates, dtype=float)
        modes = np.log(rates) if self.log_space else rates
        if modes.size < 2:
            return math.inf
        try:
            bw = estimate_bandwidth(self.expected_points(), self.quantile)
        except DegenerateBandwidth:
            return math.inf
        ratio = float(np.min(-np.diff(modes))) / bw
        if ratio < self.separation_factor:
            raise InfeasibleSpec(
                f"bands are only {ratio:.2f}x the expected auto bandwidth apart (need {self.separation_factor})"
            )
        return ratio


@dataclass
class TieTruth:
    ego: str
    alter: str
    band: int  # -1 for inactive ties
    sign: str
    n_interactions: int
    n_negative: int

    @property
    def negative_fraction(self) -> float:
        return self.n_negative / self.n_interactions


@dataclass
class GroundTruth:
    ties: list[TieTruth] = field(default_factory=list)
    circle_sizes: dict[str, list[int]] = field(default_factory=dict)

    def by_pair(self) -> dict[tuple[str, str], TieTruth]:
        return {(t.ego, t.alter): t for t in self.ties}

    def to_json(self) -> dict:
        return {"ties": [asdict(t) for t in self.ties], "circle_sizes": self.circle_sizes}

    @classmethod
    def from_json(cls, obj: dict) -> "GroundTruth":
        return cls([TieTruth(**t) for t in obj["ties"]], {k: list(v) for k, v in obj["circle_sizes"].items()})

    def dump(self, fh: IO[str]) -> None:
        json.dump(self.to_json(), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


@dataclass
class TextPools:
    negative: list[str]
    positive: list[str]
    neutral: list[str]


def build_text_pools(scorer=None, config: ScorerConfig | None = None) -> TextPools:
    """Keep only candidate sentences whose label matches their pool."""
    config = config or ScorerConfig()
    scorer = scorer or LexiconScorer(load_lexicon(), config)

    def keep(cands, want):
        return [s for s in cands if clean_text(s) == s and polarity_of(scorer.score(s), config) in want]

    pools = TextPools(
        negative=keep(NEGATIVE_SENTENCES, {NEGATIVE}),
        positive=keep(POSITIVE_SENTENCES, {POSITIVE}),
        neutral=keep(NEUTRAL_SENTENCES, {"neutral"}),
    )
    if not pools.negative or not (pools.positive or pools.neutral):
        raise InfeasibleSpec("scorer leaves a text pool empty")
    return pools


def plan_negatives(n: int, fraction: float, negative_sign: bool, threshold: float, exact: bool = False) -> int:
    """Number of negative interactions for a tie of ``n`` interactions.

    With ``exact`` the requested fraction must be realisable as ``m / n``.
    Otherwise ``m`` is the closest count that still yields the planted sign.
    """
    if n < 1:
        raise InfeasibleSpec("a tie needs at least one interaction")
    target = fraction * n
    if exact:
        m = round(target)
        if abs(m - target) > 1e-9:
            raise InfeasibleSpec(f"negative fraction {fraction} is not realisable with {n} interactions")
        if (m / n > threshold) != negative_sign:
            raise InfeasibleSpec(f"negative fraction {fraction} contradicts the planted sign")
        return m
    m = min(max(round(target), 0), n)
    if negative_sign:
        while m / n <= threshold:
            m += 1
        if m > n:
            raise InfeasibleSpec("negative sign impossible at this threshold")
    else:
        while m > 0 and m / n > threshold:
            m -= 1
    return m


def _texts(kind: Kind, sentence: str, alter: str) -> str:
    if kind is Kind.REPLY:
        return f"@{alter} {sentence}"
    if kind is Kind.MENTION:
        return f"{sentence} @{alter}"
    if kind is Kind.RETWEET:
        return f"RT @{alter}: {sentence}"
    return sentence


def _ring_sizes(spec: SynthSpec, rng: np.random.Generator) -> list[int]:
    sizes = []
    for s in spec.band_sizes:
        frac = s - math.floor(s)
        if s < 3 and frac:
            sizes.append(int(math.floor(s) + (rng.random() < frac)) or 1)
        else:
            sizes.append(max(1, int(rng.poisson(s))))
    return sizes


def _generate_ego(spec: SynthSpec, index: int, pools: TextPools):
    rng = np.random.default_rng([spec.seed, index])
    ego = f"ego{index:05d}"
    for _ in range(MAX_REDRAWS):
        recs, ties, circles = _draw_ego(spec, rng, ego, pools)
        if len(recs) >= spec.min_total:
            return recs, ties, circles
    raise InfeasibleSpec(f"{ego}: no draw reached min_total={spec.min_total} in {MAX_REDRAWS} attempts")


def _draw_ego(spec: SynthSpec, rng: np.random.Generator, ego: str, pools: TextPools):
    window = spec.window_days * DAY
    start = spec.start_ts
    end = start + int(window)
    kind_p = np.asarray(spec.kind_weights, dtype=float)
    kind_p = kind_p / kind_p.sum()
    nonneg_pool = pools.positive + pools.neutral

    sizes = _ring_sizes(spec, rng)
    ties: list[TieTruth] = []
    recs: list[InteractionRecord] = []
    alter_no = 0

    def add_tie(band: int, n: int, neg_prob: float, times: np.ndarray):
        nonlocal alter_no
        alter = f"{ego}-a{alter_no:04d}"
        alter_no += 1
        negative = bool(rng.random() < neg_prob)
        fraction = spec.negative_tie_fraction if negative else spec.positive_tie_fraction
        m = plan_negatives(n, fraction, negative, spec.sign_threshold, spec.exact_fractions)
        is_neg = np.zeros(n, dtype=bool)
        if m:
            is_neg[rng.choice(n, size=m, replace=False)] = True
        kinds = rng.choice(4, size=n, p=kind_p)
        neg_pick = rng.integers(len(pools.negative), size=n)
        pos_pick = rng.integers(len(nonneg_pool), size=n)
        any_pick = rng.integers(len(pools.negative) + len(nonneg_pool), size=n)
        for j in range(n):
            kind = KIND_ORDER[kinds[j]]
            if is_neg[j]:
                # negative interactions must carry the ego's own text
                if kind is Kind.RETWEET:
                    kind = Kind.REPLY
                sentence = pools.negative[neg_pick[j]]
            elif kind is Kind.RETWEET:
                # retweeted text may be anything; it is never scored
                k = any_pick[j]
                sentence = pools.negative[k] if k < len(pools.negative) else nonneg_pool[k - len(pools.negative)]
            else:
                sentence = nonneg_pool[pos_pick[j]]
            recs.append(InteractionRecord(ego, alter, kind, int(times[j]), _texts(kind, sentence, alter)))
        ties.append(TieTruth(ego, alter, band, NEGATIVE if negative else POSITIVE, n, m))

    # planted active ties keep at least one contact per year of window
    n_floor = max(1, math.ceil(spec.window_days / DAYS_PER_YEAR - 1e-9))
    for band, (size, rate, neg_prob) in enumerate(zip(sizes, spec.band_rates, spec.band_negative_prob)):
        mean = rate * spec.window_days / DAYS_PER_YEAR
        for _ in range(size):
            if spec.count_model == "poisson":
                n = max(n_floor, int(rng.poisson(mean)))
            else:
                n = max(n_floor, round(mean))
            # first contact at the start of the window, the rest uniform
            times = np.empty(n)
            times[0] = start + rng.uniform(0, DAY)
            times[1:] = rng.uniform(start, end, size=n - 1)
            add_tie(band, n, neg_prob, times)

    n_inactive = int(rng.poisson(spec.n_inactive)) if spec.n_inactive > 0 else 0
    # one contact well before the last year, so the tie falls under 1/yr
    latest = max(start + 1, end - int((DAYS_PER_YEAR + 30) * DAY))
    for _ in range(n_inactive):
        add_tie(-1, 1, spec.inactive_negative_prob, np.array([rng.uniform(start, latest)]))

    # pin the ego's last observation to the window end
    last = max(recs, key=lambda r: r.timestamp)
    if last.timestamp < end:
        recs[recs.index(last)] = InteractionRecord(last.ego_id, last.alter_id, last.kind, end, last.text)
    recs.sort(key=lambda r: (r.timestamp, r.alter_id))
    return recs, ties, list(np.cumsum(sizes).tolist())


def generate_corpus(spec: SynthSpec, pools: TextPools | None = None) -> tuple[list[InteractionRecord], GroundTruth]:
    """Deterministic corpus and truth for ``spec`` (seeded per ego)."""
    spec.check_separation()
    pools = pools or build_text_pools()
    records: list[InteractionRecord] = []
    truth = GroundTruth()
    for i in range(spec.n_egos):
        recs, ties, circles = _generate_ego(spec, i, pools)
        records.extend(recs)
        truth.ties.extend(ties)
        truth.circle_sizes[recs[0].ego_id] = circles
    return records, truth


@dataclass
class Discrepancies:
    sign: list[tuple[str, str, str, str]] = field(default_factory=list)
    band: list[tuple[str, str, int, int | None]] = field(default_factory=list)
    circles: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (self.sign or self.band or self.circles)

    def __len__(self) -> int:
        return len(self.sign) + len(self.band) + len(self.circles)


def verify_pipeline(
    truth: GroundTruth,
    signed: Sequence[SignedRelationship],
    egonets: Sequence[EgoNetwork],
    records: Sequence[InteractionRecord] | None = None,
) -> Discrepancies:
    """Compare pipeline outputs against the planted truth.

    Band mismatches use the recovered ring index (0 = innermost); a planted
    active tie missing from the ego network is reported with ``None``.
    """
    if records is not None:
        seen = {(r.ego_id, r.alter_id) for r in records}
        if seen != set(truth.by_pair()):
            raise ValueError("truth does not describe these records")
    truth_pairs = truth.by_pair()
    out_pairs = {(e.stats.ego_id, e.stats.alter_id): e for e in signed}
    if set(out_pairs) != set(truth_pairs):
        missing = len(set(truth_pairs) - set(out_pairs))
        extra = len(set(out_pairs) - set(truth_pairs))
        raise ValueError(f"id mismatch between truth and signed edges ({missing} missing, {extra} extra)")
    nets = {n.ego_id: n for n in egonets}
    if not set(nets) <= set(truth.circle_sizes):
        raise ValueError("ego networks for egos absent from the truth")

    report = Discrepancies()
    for key, t in sorted(truth_pairs.items()):
        got = out_pairs[key].sign
        if got != t.sign:
            report.sign.append((t.ego, t.alter, t.sign, got))

    rings = {ego: net.ring_of() for ego, net in nets.items()}
    for ego, planted in sorted(truth.circle_sizes.items()):
        net = nets.get(ego)
        if net is None:
            continue
        if net.optimum_circles != len(planted):
            report.circles.append((ego, len(planted), net.optimum_circles))
    for key, t in sorted(truth_pairs.items()):
        if t.band < 0 or t.ego not in nets:
            continue
        got = rings[t.ego].get(t.alter)
        if got != t.band:
            report.band.append((t.ego, t.alter, t.band, got))
    return report

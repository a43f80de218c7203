"""Relationship signs from per-interaction labels.

A directed Ego->Alter relationship is negative when its share of negative
interactions is strictly above the golden interaction threshold (17% by
default, about one negative per five positive). Neutral interactions,
including forced-neutral retweets, stay in the denominator.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .sentiment import NEGATIVE, POSITIVE, SentimentLabel

GOLDEN_THRESHOLD = 0.17


@dataclass(frozen=True)
class RelationshipStats:
    ego_id: str
    alter_id: str
    n_total: int
    n_negative: int
    n_positive: int
    n_neutral: int

    def __post_init__(self):
        if self.n_total < 1:
            raise ValueError("no interactions")
        if self.n_negative + self.n_positive + self.n_neutral != self.n_total:
            raise ValueError("label counts do not partition n_total")

    @property
    def negative_fraction(self) -> float:
        return self.n_negative / self.n_total


@dataclass(frozen=True)
class SignedRelationship:
    stats: RelationshipStats
    sign: str
    threshold_used: float

    @property
    def is_negative(self) -> bool:
        return self.sign == NEGATIVE


def aggregate_relationship(labels: Sequence[SentimentLabel], ego_id: str = "", alter_id: str = "") -> RelationshipStats:
    if not labels:
        raise ValueError("no interactions")
    neg = pos = 0
    for lab in labels:
        if lab.polarity == NEGATIVE:
            neg += 1
        elif lab.polarity == POSITIVE:
            pos += 1
    n = len(labels)
    return RelationshipStats(ego_id, alter_id, n, neg, pos, n - neg - pos)


def sign_relationship(stats: RelationshipStats, threshold: float = GOLDEN_THRESHOLD) -> SignedRelationship:
    if not 0 <= threshold <= 1:
        raise ValueError("threshold must lie in [0, 1]")
    negative = stats.negative_fraction > threshold
    return SignedRelationship(stats, NEGATIVE if negative else POSITIVE, threshold)


def sign_ego(
    pairs: dict[str, Sequence[SentimentLabel]], ego_id: str, threshold: float = GOLDEN_THRESHOLD
) -> dict[str, SignedRelationship]:
    """Sign every relationship of one ego, keyed by alter id (sorted)."""
    return {
        alter: sign_relationship(aggregate_relationship(labels, ego_id, alter), threshold)
        for alter, labels in sorted(pairs.items())
    }


EDGE_COLUMNS = ["ego", "alter", "n_total", "n_neg", "n_pos", "n_neu", "fraction", "sign"]


def write_signed_edges(edges: Iterable[SignedRelationship], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(EDGE_COLUMNS)
    for e in edges:
        s = e.stats
        w.writerow([s.ego_id, s.alter_id, s.n_total, s.n_negative, s.n_positive, s.n_neutral, repr(s.negative_fraction), e.sign])


def read_signed_edges(fh: IO[str], threshold: float = GOLDEN_THRESHOLD) -> list[SignedRelationship]:
    out = []
    for row in csv.DictReader(fh):
        stats = RelationshipStats(row["ego"], row["alter"], int(row["n_total"]), int(row["n_neg"]), int(row["n_pos"]), int(row["n_neu"]))
        out.append(SignedRelationship(stats, row["sign"], threshold))
    return out

"""Interaction-log parsing and ego engagement filtering."""

from __future__ import annotations

import calendar
import csv
import enum
import io
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import IO, Iterable, Iterator

log = logging.getLogger(__name__)

SECONDS_PER_DAY = 86400.0
MIN_SPAN_DAYS = 182


class Kind(str, enum.Enum):
    REPLY = "reply"
    MENTION = "mention"
    RETWEET = "retweet"
    QUOTE_RETWEET = "quote_retweet"


_KINDS = {k.value: k for k in Kind}


@dataclass(frozen=True, slots=True)
class InteractionRecord:
    ego_id: str
    alter_id: str
    kind: Kind
    timestamp: int
    text: str = ""

    def __post_init__(self):
        if self.ego_id == self.alter_id:
            raise ValueError("self-interaction")
        if self.timestamp <= 0:
            raise ValueError("non-positive timestamp")

    def to_json(self) -> dict:
        return {"ego": self.ego_id, "alter": self.alter_id, "kind": self.kind.value, "ts": self.timestamp, "text": self.text}


@dataclass
class Skip:
    line_number: int
    reason: str


@dataclass
class ParseResult:
    records: list[InteractionRecord]
    skips: list[Skip] = field(default_factory=list)
    lines: int = 0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return not self.skips and self.error is None


def parse_line(line: str | bytes) -> InteractionRecord:
    """Parse one JSONL record; raises ``ValueError`` with a short reason."""
    try:
        obj = json.loads(line)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ValueError(f"malformed json: {e.msg if hasattr(e, 'msg') else e}") from None
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    for key in ("ego", "alter", "kind"):
        if not isinstance(obj.get(key), str):
            raise ValueError(f"missing or invalid field {key!r}")
    text = obj.get("text", "")  # plain retweets may omit it
    if not isinstance(text, str):
        raise ValueError("missing or invalid field 'text'")
    kind = _KINDS.get(obj["kind"])
    if kind is None:
        raise ValueError(f"unknown kind {obj['kind']!r}")
    ts = obj.get("ts")
    if isinstance(ts, bool) or not isinstance(ts, int):
        raise ValueError("missing or invalid field 'ts'")
    if ts <= 0:
        raise ValueError("non-positive timestamp")
    if obj["ego"] == obj["alter"]:
        raise ValueError("self-interaction")
    return InteractionRecord(obj["ego"], obj["alter"], kind, ts, text)


def iter_interaction_log(stream: IO[bytes] | IO[str] | Iterable) -> Iterator[tuple[int, InteractionRecord | Skip]]:
    """Yield ``(line_number, record_or_skip)`` in input order."""
    for lineno, line in enumerate(stream, start=1):
        try:
            yield lineno, parse_line(line)
        except ValueError as e:
            yield lineno, Skip(lineno, str(e))


def parse_interaction_log(stream: IO[bytes] | IO[str] | Iterable) -> ParseResult:
    """Parse a whole JSONL stream.

    Bad lines never stop the parse; they are returned as skips. An I/O
    error stops it and is reported in ``error`` alongside what was read.
    """
    result = ParseResult(records=[])
    try:
        for lineno, item in iter_interaction_log(stream):
            result.lines = lineno
            if isinstance(item, Skip):
                result.skips.append(item)
            else:
                result.records.append(item)
    except OSError as e:
        result.error = f"I/O failure after {result.lines} lines: {e}"
        log.error(result.error)
    return result


def write_interaction_log(records: Iterable[InteractionRecord], fh: IO[str]) -> int:
    n = 0
    for r in records:
        fh.write(json.dumps(r.to_json(), ensure_ascii=False, separators=(",", ":")))
        fh.write("\n")
        n += 1
    return n


def write_skip_report(skips: Iterable[Skip], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["line_number", "reason"])
    for s in skips:
        w.writerow([s.line_number, s.reason])


def group_by_ego(records: Iterable[InteractionRecord]) -> dict[str, list[InteractionRecord]]:
    groups: dict[str, list[InteractionRecord]] = defaultdict(list)
    for r in records:
        groups[r.ego_id].append(r)
    return dict(groups)


@dataclass(frozen=True)
class TimelineSummary:
    ego_id: str
    total_interactions: int
    first_ts: int
    last_ts: int
    per_month_counts: dict[tuple[int, int], int]

    @property
    def span_days(self) -> float:
        return (self.last_ts - self.first_ts) / SECONDS_PER_DAY


@dataclass(frozen=True)
class EngagementPolicy:
    min_total: int = 2000
    min_span_months: int = 6
    regularity_rate: float = 1 / 3
    max_low_month_fraction: float = 0.5

    def __post_init__(self):
        if min(self.min_total, self.min_span_months, self.regularity_rate, self.max_low_month_fraction) <= 0:
            raise ValueError("engagement policy fields must be positive")
        if self.max_low_month_fraction > 1:
            raise ValueError("max_low_month_fraction must lie in (0, 1]")

    @property
    def min_span_days(self) -> float:
        # six months is taken as 182 days; other month counts scale from that
        return self.min_span_months * MIN_SPAN_DAYS / 6


def month_of(ts: int) -> tuple[int, int]:
    d = datetime.fromtimestamp(ts, tz=timezone.utc)
    return d.year, d.month


def summarize_timeline(records: Iterable[InteractionRecord]) -> TimelineSummary:
    records = list(records)
    if not records:
        raise ValueError("empty timeline")
    egos = {r.ego_id for r in records}
    if len(egos) != 1:
        raise ValueError(f"timeline mixes {len(egos)} egos")
    ts = [r.timestamp for r in records]
    months = Counter(month_of(t) for t in ts)
    return TimelineSummary(
        ego_id=records[0].ego_id,
        total_interactions=len(ts),
        first_ts=min(ts),
        last_ts=max(ts),
        per_month_counts=dict(sorted(months.items())),
    )


def low_month_fraction(summary: TimelineSummary, rate: float) -> float:
    """Share of active months with fewer than ``rate * days_in_month`` records."""
    months = summary.per_month_counts
    if not months:
        return 0.0
    low = sum(1 for (y, m), c in months.items() if c < rate * calendar.monthrange(y, m)[1])
    return low / len(months)


def is_engaged(summary: TimelineSummary, policy: EngagementPolicy | None = None) -> bool:
    policy = policy or EngagementPolicy()
    if summary.total_interactions < policy.min_total:
        return False
    if summary.last_ts - summary.first_ts < policy.min_span_days * SECONDS_PER_DAY:
        return False
    return low_month_fraction(summary, policy.regularity_rate) <= policy.max_low_month_fraction


def filter_engaged(
    by_ego: dict[str, list[InteractionRecord]], policy: EngagementPolicy | None = None
) -> tuple[dict[str, list[InteractionRecord]], dict[str, TimelineSummary]]:
    """Keep only engaged egos. Returns the kept groups and every summary."""
    policy = policy or EngagementPolicy()
    summaries = {ego: summarize_timeline(recs) for ego, recs in by_ego.items()}
    kept = {ego: recs for ego, recs in by_ego.items() if is_engaged(summaries[ego], policy)}
    return kept, summaries


def read_jsonl_path(path) -> ParseResult:
    with open(path, "rb") as fh:
        return parse_interaction_log(fh)


def records_to_jsonl(records: Iterable[InteractionRecord]) -> str:
    buf = io.StringIO()
    write_interaction_log(records, buf)
    return buf.getvalue()

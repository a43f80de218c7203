"""In-memory pipeline: corpus -> sentiment -> signing -> egonet -> report.

The CLI drives the same per-ego functions stage by stage with files in
between; this module keeps everything in memory for library use.
"""

from __future__ import annotations

import os
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .corpus import EngagementPolicy, InteractionRecord, TimelineSummary, filter_engaged, group_by_ego
from .egonet import (
    ACTIVE_MIN_FREQ,
    DURATION_FLOOR_DAYS,
    EgoNetwork,
    MeanShiftConfig,
    TieFrequency,
    active_alters,
    build_ego_network,
    ego_tie_frequencies,
)
from .report import DatasetReport, build_report
from .sentiment import LexiconScorer, ScorerConfig, SentimentLabel, label_interaction, load_lexicon
from .signing import GOLDEN_THRESHOLD, SignedRelationship, sign_ego


@dataclass(frozen=True)
class PipelineConfig:
    engagement: EngagementPolicy = field(default_factory=EngagementPolicy)
    scorer: ScorerConfig = field(default_factory=ScorerConfig)
    lexicon_path: str | None = None
    sign_threshold: float = GOLDEN_THRESHOLD
    meanshift: MeanShiftConfig = field(default_factory=MeanShiftConfig)
    active_min_freq: float = ACTIVE_MIN_FREQ
    duration_floor_days: float = DURATION_FLOOR_DAYS
    averaging: str = "ego"
    ci_method: str = "t"
    ci_level: float = 0.95
    restrict_k: int = 5
    seed: int = 0
    apply_engagement_filter: bool = True


@dataclass
class EgoResult:
    ego_id: str
    edges: list[SignedRelationship]
    freqs: list[TieFrequency]
    egonet: EgoNetwork | None


@dataclass
class PipelineResult:
    summaries: dict[str, TimelineSummary]
    engaged: list[str]
    egos: list[EgoResult]
    report: DatasetReport

    @property
    def signed(self) -> list[SignedRelationship]:
        return [e for r in self.egos for e in r.edges]

    @property
    def egonets(self) -> list[EgoNetwork]:
        return [r.egonet for r in self.egos if r.egonet is not None]


def label_ego(records: Sequence[InteractionRecord], scorer, config: ScorerConfig) -> list[SentimentLabel]:
    return [label_interaction(r, scorer, config) for r in records]


def sign_labeled(
    ego_id: str, records: Sequence[InteractionRecord], labels: Sequence[SentimentLabel], threshold: float
) -> list[SignedRelationship]:
    pairs: dict[str, list[SentimentLabel]] = defaultdict(list)
    for r, lab in zip(records, labels):
        pairs[r.alter_id].append(lab)
    return list(sign_ego(pairs, ego_id, threshold).values())


def egonet_for(
    ego_id: str, records: Sequence[InteractionRecord], config: PipelineConfig
) -> tuple[list[TieFrequency], EgoNetwork | None]:
    freqs = ego_tie_frequencies(records, floor_days=config.duration_floor_days)
    active = active_alters(freqs, config.active_min_freq)
    net = build_ego_network(active, config.meanshift, ego_id) if active else None
    return freqs, net


def process_ego(ego_id: str, records: Sequence[InteractionRecord], scorer, config: PipelineConfig) -> EgoResult:
    labels = label_ego(records, scorer, config.scorer)
    edges = sign_labeled(ego_id, records, labels, config.sign_threshold)
    freqs, net = egonet_for(ego_id, records, config)
    return EgoResult(ego_id, edges, freqs, net)


_worker: dict = {}


def _init_worker(config: PipelineConfig) -> None:
    _worker["config"] = config
    _worker["scorer"] = LexiconScorer(load_lexicon(config.lexicon_path), config.scorer)


def _process_task(task: tuple[str, list[InteractionRecord]]) -> EgoResult:
    ego_id, recs = task
    return process_ego(ego_id, recs, _worker["scorer"], _worker["config"])


def map_egos(fn: Callable, tasks: Sequence, jobs: int, initializer=None, initargs=()) -> list:
    """Ordered map over per-ego tasks, in-process when ``jobs == 1``."""
    if jobs <= 1 or len(tasks) <= 1:
        if initializer:
            initializer(*initargs)
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs, initializer=initializer, initargs=initargs) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def run_pipeline(records: Iterable[InteractionRecord], config: PipelineConfig | None = None, jobs: int = 1, name: str = "dataset") -> PipelineResult:
    config = config or PipelineConfig()
    records = list(records)
    pair_counts = Counter((r.ego_id, r.alter_id) for r in records)
    by_ego = group_by_ego(records)
    if config.apply_engagement_filter:
        kept, summaries = filter_engaged(by_ego, config.engagement)
    else:
        kept, summaries = by_ego, {}
    tasks = sorted(kept.items())
    results = map_egos(_process_task, tasks, jobs or os.cpu_count() or 1, _init_worker, (config,))
    rep = build_report(
        pair_counts,
        {r.ego_id: r.edges for r in results},
        [r.egonet for r in results if r.egonet is not None],
        config.averaging,
        config.ci_method,
        config.ci_level,
        config.restrict_k,
        name,
        config.seed,
    )
    return PipelineResult(summaries, [e for e, _ in tasks], results, rep)

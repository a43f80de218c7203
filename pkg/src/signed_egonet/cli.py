"""Command-line front end.

Each subcommand runs one stage and reads its inputs from, and writes its
outputs to, a single output directory; ``run`` chains every stage. A
``manifest.json`` in that directory records, per stage, a hash of the
governing config section plus hashes of the stage's input and output
files, so an unchanged stage is skipped on rerun.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import logging
import os
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .corpus import (
    EngagementPolicy,
    InteractionRecord,
    Kind,
    filter_engaged,
    group_by_ego,
    is_engaged,
    low_month_fraction,
    parse_interaction_log,
    write_interaction_log,
    write_skip_report,
)
from .egonet import MeanShiftConfig, read_egonets, write_egonets
from .pipeline import egonet_for, label_ego, map_egos
from .report import Counts, build_report, count_corpus, render_csv, render_markdown
from .sentiment import NEUTRAL, LexiconScorer, ScorerConfig, SentimentLabel, bundled_lexicon_path, load_lexicon
from .signing import GOLDEN_THRESHOLD, read_signed_edges, sign_ego, write_signed_edges
from .synth import InfeasibleSpec, SynthSpec, generate_corpus

log = logging.getLogger("signed_egonet")

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

STAGES = ("filter", "sentiment", "sign", "egonet", "report")


class InputError(Exception):
    pass


class ConfigError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


# configuration

@dataclass
class RunConfig:
    inputs: list[str] = field(default_factory=list)
    name: str = "dataset"
    lexicon: str | None = None
    engagement: EngagementPolicy = field(default_factory=EngagementPolicy)
    scorer: ScorerConfig = field(default_factory=ScorerConfig)
    sign_threshold: float = GOLDEN_THRESHOLD
    meanshift: MeanShiftConfig = field(default_factory=MeanShiftConfig)
    active_min_freq: float = 1.0
    duration_floor_days: float = 30.0
    averaging: str = "ego"
    ci_method: str = "t"
    ci_level: float = 0.95
    restrict_k: int = 5
    report_format: str = "both"
    out: str = "out"
    jobs: int = 0
    seed: int = 0
    synth: SynthSpec = field(default_factory=SynthSpec)

    # config subsection governing each stage, used for cache keys
    def stage_config(self, stage: str) -> dict:
        if stage == "filter":
            return dataclasses.asdict(self.engagement)
        if stage == "sentiment":
            return {**dataclasses.asdict(self.scorer), "lexicon": self.lexicon}
        if stage == "sign":
            return {"threshold": self.sign_threshold}
        if stage == "egonet":
            return {
                **dataclasses.asdict(self.meanshift),
                "active_min_freq": self.active_min_freq,
                "duration_floor_days": self.duration_floor_days,
            }
        if stage == "report":
            return {
                "averaging": self.averaging,
                "ci_method": self.ci_method,
                "ci_level": self.ci_level,
                "restrict_k": self.restrict_k,
                "format": self.report_format,
                "name": self.name,
                "seed": self.seed,
            }
        raise KeyError(stage)


_EGONET_EXTRA = {"active_min_freq", "duration_floor_days"}
_KNOWN = {
    "input": {"paths", "name"},
    "corpus": {f.name for f in dataclasses.fields(EngagementPolicy)},
    "sentiment": {f.name for f in dataclasses.fields(ScorerConfig)} | {"lexicon"},
    "signing": {"threshold"},
    "egonet": {f.name for f in dataclasses.fields(MeanShiftConfig)} | _EGONET_EXTRA,
    "report": {"averaging", "ci_method", "level", "restrict_k", "format"},
    "run": {"out", "jobs", "seed"},
    "synth": {f.name for f in dataclasses.fields(SynthSpec)},
}


def load_toml(path: str) -> dict:
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from None


def _tuples(d: dict) -> dict:
    return {k: tuple(v) if isinstance(v, list) else v for k, v in d.items()}


def build_config(raw: dict, overrides: dict[str, Any]) -> RunConfig:
    """Merge a parsed TOML document with command-line overrides."""
    for section, values in raw.items():
        if section not in _KNOWN:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(values, dict):
            raise ConfigError(f"[{section}] must be a table")
        unknown = set(values) - _KNOWN[section]
        if unknown:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")

    sec = {s: dict(raw.get(s, {})) for s in _KNOWN}
    for dotted, value in overrides.items():
        if value is not None:
            s, k = dotted.split(".")
            sec[s][k] = value
    try:
        ms = {k: v for k, v in sec["egonet"].items() if k not in _EGONET_EXTRA}
        synth = _tuples(sec["synth"])
        if "seed" in sec["run"] and "seed" not in synth:
            synth["seed"] = sec["run"]["seed"]
        cfg = RunConfig(
            inputs=list(sec["input"].get("paths", [])),
            name=sec["input"].get("name", "dataset"),
            lexicon=sec["sentiment"].pop("lexicon", None),
            engagement=EngagementPolicy(**sec["corpus"]),
            scorer=ScorerConfig(**sec["sentiment"]),
            sign_threshold=float(sec["signing"].get("threshold", GOLDEN_THRESHOLD)),
            meanshift=MeanShiftConfig(**ms),
            active_min_freq=float(sec["egonet"].get("active_min_freq", 1.0)),
            duration_floor_days=float(sec["egonet"].get("duration_floor_days", 30.0)),
            averaging=sec["report"].get("averaging", "ego"),
            ci_method=sec["report"].get("ci_method", "t"),
            ci_level=float(sec["report"].get("level", 0.95)),
            restrict_k=int(sec["report"].get("restrict_k", 5)),
            report_format=sec["report"].get("format", "both"),
            out=str(sec["run"].get("out", "out")),
            jobs=int(sec["run"].get("jobs", 0)),
            seed=int(sec["run"].get("seed", 0)),
            synth=SynthSpec(**synth),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from None
    if not 0 <= cfg.sign_threshold <= 1:
        raise ConfigError("signing threshold must lie in [0, 1]")
    if cfg.averaging not in ("ego", "pooled"):
        raise ConfigError(f"unknown averaging {cfg.averaging!r}")
    if cfg.ci_method not in ("t", "bootstrap"):
        raise ConfigError(f"unknown ci_method {cfg.ci_method!r}")
    if cfg.report_format not in ("markdown", "csv", "both"):
        raise ConfigError(f"unknown report format {cfg.report_format!r}")
    if not 0 < cfg.ci_level < 1:
        raise ConfigError("report level must lie in (0, 1)")
    if cfg.restrict_k < 1 or cfg.active_min_freq <= 0 or cfg.duration_floor_days <= 0:
        raise ConfigError("restrict_k, active_min_freq and duration_floor_days must be positive")
    if cfg.jobs < 0:
        raise ConfigError("jobs must be non-negative")
    if cfg.jobs == 0:
        cfg.jobs = os.cpu_count() or 1
    return cfg


# hashing and the manifest

def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _sha256_obj(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()


class Workspace:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.manifest_path = self.out / "manifest.json"
        self.manifest: dict = {}
        if self.manifest_path.exists():
            try:
                self.manifest = json.loads(self.manifest_path.read_text())
            except ValueError:
                log.warning("ignoring unreadable manifest %s", self.manifest_path)

    def path(self, name: str) -> Path:
        return self.out / name

    def _key(self, p: Path) -> str:
        try:
            return p.relative_to(self.out).as_posix()
        except ValueError:
            return str(p)

    def run_stage(self, stage: str, inputs: list[Path], outputs: list[str], fn: Callable[[], None]) -> bool:
        """Run ``fn`` unless the manifest shows identical config, inputs and outputs.

        Returns whether the stage actually ran.
        """
        for p in inputs:
            if not p.exists():
                raise InputError(f"stage {stage!r}: missing input {p}")
        entry = {
            "config": _sha256_obj(self.cfg.stage_config(stage)),
            "inputs": {self._key(p): _sha256_file(p) for p in inputs},
        }
        old = self.manifest.get(stage)
        if old and all(old.get(k) == v for k, v in entry.items()):
            outs = old.get("outputs", {})
            if set(outs) == set(outputs) and all(
                self.path(o).exists() and _sha256_file(self.path(o)) == h for o, h in outs.items()
            ):
                log.info("%s: up to date", stage)
                return False
        self.out.mkdir(parents=True, exist_ok=True)
        try:
            fn()
        except (InputError, ConfigError):
            raise
        except Exception as e:
            raise StageError(stage, e) from e
        entry["outputs"] = {o: _sha256_file(self.path(o)) for o in outputs}
        self.manifest[stage] = entry
        self.save()
        log.info("%s: done", stage)
        return True

    def save(self) -> None:
        self.out.mkdir(parents=True, exist_ok=True)
        tmp = self.manifest_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(self.manifest, sort_keys=True, indent=2) + "\n")
        tmp.replace(self.manifest_path)


def _input_paths(cfg: RunConfig) -> list[Path]:
    if not cfg.inputs:
        raise InputError("no input files (pass paths or set [input] paths)")
    paths = [Path(p) for p in cfg.inputs]
    for p in paths:
        if not p.is_file():
            raise InputError(f"input not found: {p}")
    return paths


def _lexicon_path(cfg: RunConfig) -> Path:
    if cfg.lexicon is None:
        return Path(str(bundled_lexicon_path()))
    p = Path(cfg.lexicon)
    if not p.is_file():
        raise InputError(f"lexicon not found: {p}")
    return p


def _parse_inputs(paths: list[Path]):
    records, skips, lines = [], [], 0
    for p in paths:
        with open(p, "rb") as fh:
            res = parse_interaction_log(fh)
        if res.error:
            raise InputError(f"{p}: {res.error}")
        records.extend(res.records)
        lines += res.lines
        prefix = f"{p.name}: " if len(paths) > 1 else ""
        skips.extend(dataclasses.replace(s, reason=prefix + s.reason) for s in res.skips)
    return records, skips, lines


# stage bodies

ENGAGEMENT_COLUMNS = ["ego", "total", "first_ts", "last_ts", "span_days", "active_months", "low_month_fraction", "engaged"]


def stage_filter(ws: Workspace) -> None:
    cfg = ws.cfg
    paths = _input_paths(cfg)

    def body():
        records, skips, _ = _parse_inputs(paths)
        with open(ws.path("skips.csv"), "w", newline="") as fh:
            write_skip_report(skips, fh)
        by_ego = group_by_ego(records)
        _, summaries = filter_engaged(by_ego, cfg.engagement)
        with open(ws.path("engagement.csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(ENGAGEMENT_COLUMNS)
            for ego in sorted(summaries):
                s = summaries[ego]
                w.writerow([
                    ego, s.total_interactions, s.first_ts, s.last_ts, repr(s.span_days), len(s.per_month_counts),
                    repr(low_month_fraction(s, cfg.engagement.regularity_rate)), int(is_engaged(s, cfg.engagement)),
                ])
        full = count_corpus(Counter((r.ego_id, r.alter_id) for r in records))
        ws.path("counts_full.json").write_text(json.dumps(dataclasses.asdict(full), sort_keys=True) + "\n")

    ws.run_stage("filter", paths, ["skips.csv", "engagement.csv", "counts_full.json"], body)


def _engaged_egos(path: Path) -> set[str]:
    with open(path, newline="") as fh:
        return {row["ego"] for row in csv.DictReader(fh) if row["engaged"] == "1"}


_worker: dict = {}


def _init_labeler(lexicon: str | None, config: ScorerConfig) -> None:
    _worker["config"] = config
    _worker["scorer"] = LexiconScorer(load_lexicon(lexicon), config)


def _label_task(task):
    _, recs = task
    return [(lab.compound, lab.polarity) for lab in label_ego(recs, _worker["scorer"], _worker["config"])]


def stage_sentiment(ws: Workspace) -> None:
    cfg = ws.cfg
    paths = _input_paths(cfg)
    lex = _lexicon_path(cfg)

    def body():
        engaged = _engaged_egos(ws.path("engagement.csv"))
        records, _, _ = _parse_inputs(paths)
        groups = group_by_ego(r for r in records if r.ego_id in engaged)
        tasks = sorted(groups.items())
        labels = map_egos(_label_task, tasks, cfg.jobs, _init_labeler, (cfg.lexicon, cfg.scorer))
        with open(ws.path("labeled.jsonl"), "w", encoding="utf-8", newline="\n") as fh:
            for (_, recs), labs in zip(tasks, labels):
                for r, (compound, polarity) in zip(recs, labs):
                    row = r.to_json()
                    row["compound"] = compound
                    row["polarity"] = polarity
                    fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")))
                    fh.write("\n")

    ws.run_stage("sentiment", [*paths, lex, ws.path("engagement.csv")], ["labeled.jsonl"], body)


def read_labeled(path: Path) -> list[tuple[str, list[tuple[InteractionRecord, SentimentLabel]]]]:
    """Labeled rows grouped by ego, in file order."""
    groups: dict[str, list] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            o = json.loads(line)
            kind = Kind(o["kind"])
            rec = InteractionRecord(o["ego"], o["alter"], kind, o["ts"], o["text"])
            lab = SentimentLabel(o["compound"], o["polarity"], kind is Kind.RETWEET and o["polarity"] == NEUTRAL)
            groups.setdefault(rec.ego_id, []).append((rec, lab))
    return list(groups.items())


def _sign_task(task):
    ego, rows, threshold = task
    pairs: dict[str, list[SentimentLabel]] = {}
    for rec, lab in rows:
        pairs.setdefault(rec.alter_id, []).append(lab)
    return list(sign_ego(pairs, ego, threshold).values())


def stage_sign(ws: Workspace) -> None:
    cfg = ws.cfg

    def body():
        tasks = [(ego, rows, cfg.sign_threshold) for ego, rows in read_labeled(ws.path("labeled.jsonl"))]
        results = map_egos(_sign_task, tasks, cfg.jobs)
        with open(ws.path("signed_edges.csv"), "w", newline="") as fh:
            write_signed_edges((e for edges in results for e in edges), fh)

    ws.run_stage("sign", [ws.path("labeled.jsonl")], ["signed_edges.csv"], body)


TIE_COLUMNS = ["ego", "alter", "n_interactions", "duration_days", "freq_per_year", "active"]


def _egonet_task(task):
    ego, recs, cfg = task
    return egonet_for(ego, recs, cfg)


@dataclass(frozen=True)
class _EgonetSettings:
    meanshift: MeanShiftConfig
    active_min_freq: float
    duration_floor_days: float


def stage_egonet(ws: Workspace) -> None:
    cfg = ws.cfg
    settings = _EgonetSettings(cfg.meanshift, cfg.active_min_freq, cfg.duration_floor_days)

    def body():
        tasks = [(ego, [r for r, _ in rows], settings) for ego, rows in read_labeled(ws.path("labeled.jsonl"))]
        results = map_egos(_egonet_task, tasks, cfg.jobs)
        with open(ws.path("ties.csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TIE_COLUMNS)
            for freqs, _ in results:
                for f in freqs:
                    active = int(f.freq_per_year >= cfg.active_min_freq)
                    w.writerow([f.ego_id, f.alter_id, f.n_interactions, repr(f.duration_days), repr(f.freq_per_year), active])
        with open(ws.path("egonets.jsonl"), "w", newline="\n") as fh:
            write_egonets((net for _, net in results if net is not None), fh)

    ws.run_stage("egonet", [ws.path("labeled.jsonl")], ["ties.csv", "egonets.jsonl"], body)


def stage_report(ws: Workspace) -> None:
    cfg = ws.cfg
    outputs = []
    if cfg.report_format in ("markdown", "both"):
        outputs.append("report.md")
    if cfg.report_format in ("csv", "both"):
        outputs += [f"tables/{n}" for n in ("counts.csv", "summary.csv", "circle_sizes.csv", "circle_negativity.csv")]

    def body():
        full = Counts(**json.loads(ws.path("counts_full.json").read_text()))
        with open(ws.path("signed_edges.csv"), newline="") as fh:
            edges = read_signed_edges(fh, cfg.sign_threshold)
        by_ego: dict[str, list] = {}
        for e in edges:
            by_ego.setdefault(e.stats.ego_id, []).append(e)
        with open(ws.path("egonets.jsonl")) as fh:
            nets = read_egonets(fh)
        rep = build_report(full, by_ego, nets, cfg.averaging, cfg.ci_method, cfg.ci_level, cfg.restrict_k, cfg.name, cfg.seed)
        if "report.md" in outputs:
            ws.path("report.md").write_text(render_markdown(rep))
        if cfg.report_format != "markdown":
            ws.path("tables").mkdir(exist_ok=True)
            for name, text in render_csv(rep).items():
                ws.path(f"tables/{name}").write_text(text)

    inputs = [ws.path(n) for n in ("counts_full.json", "signed_edges.csv", "egonets.jsonl")]
    ws.run_stage("report", inputs, outputs, body)


STAGE_FUNCS = {
    "filter": stage_filter,
    "sentiment": stage_sentiment,
    "sign": stage_sign,
    "egonet": stage_egonet,
    "report": stage_report,
}


# commands

def cmd_validate(cfg: RunConfig, out_given: bool) -> int:
    paths = _input_paths(cfg)
    records, skips, lines = _parse_inputs(paths)
    if out_given:
        Path(cfg.out).mkdir(parents=True, exist_ok=True)
        with open(Path(cfg.out) / "skips.csv", "w", newline="") as fh:
            write_skip_report(skips, fh)
    else:
        write_skip_report(skips, sys.stdout)
    egos = len({r.ego_id for r in records})
    print(f"lines={lines} records={len(records)} skips={len(skips)} egos={egos}", file=sys.stderr)
    return EXIT_OK if not skips else EXIT_INPUT


def cmd_stage(cfg: RunConfig, stage: str) -> int:
    STAGE_FUNCS[stage](Workspace(cfg))
    return EXIT_OK


def cmd_run(cfg: RunConfig) -> int:
    ws = Workspace(cfg)
    for stage in STAGES:
        STAGE_FUNCS[stage](ws)
    return EXIT_OK


def cmd_synth(cfg: RunConfig) -> int:
    try:
        records, truth = generate_corpus(cfg.synth)
    except InfeasibleSpec as e:
        raise ConfigError(str(e)) from None
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "corpus.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        write_interaction_log(records, fh)
    with open(out / "truth.json", "w") as fh:
        truth.dump(fh)
    print(f"egos={cfg.synth.n_egos} records={len(records)} ties={len(truth.ties)}", file=sys.stderr)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML file with one [section] per module")
    common.add_argument("--out", metavar="DIR", help="artifact directory (default: out)")
    common.add_argument("--jobs", type=int, metavar="N", help="worker processes (default: CPU count)")
    common.add_argument("--seed", type=int, metavar="N", help="seed for synthesis and bootstrap CIs")
    common.add_argument("-v", "--verbose", action="count", default=0)

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("inputs", nargs="*", metavar="INPUT", help="interaction log(s), JSONL")

    sign = argparse.ArgumentParser(add_help=False)
    sign.add_argument("--threshold", type=float, help="negative-fraction threshold (default 0.17)")

    ego = argparse.ArgumentParser(add_help=False)
    ego.add_argument("--bandwidth", help="mean-shift bandwidth or 'auto'")
    ego.add_argument("--quantile", type=float, help="kNN quantile for the auto bandwidth")
    ego.add_argument("--log-space", action=argparse.BooleanOptionalAction, default=None, help="cluster log frequencies")
    ego.add_argument("--active-min-freq", type=float, help="interactions/yr for an active tie (default 1)")

    rep = argparse.ArgumentParser(add_help=False)
    rep.add_argument("--averaging", choices=("ego", "pooled"))
    rep.add_argument("--ci-method", choices=("t", "bootstrap"))
    rep.add_argument("--format", dest="report_format", choices=("markdown", "csv", "both"))

    p = argparse.ArgumentParser(prog="signed-egonet", description="Signed ego networks from interaction logs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common, inputs], help="check an interaction log and report skipped lines")
    sub.add_parser("filter", parents=[common, inputs], help="skip report and engagement filter")
    sub.add_parser("sentiment", parents=[common, inputs], help="label interactions of engaged egos")
    sub.add_parser("sign", parents=[common, sign], help="sign relationships")
    sub.add_parser("egonet", parents=[common, ego], help="tie frequencies and circles")
    sub.add_parser("report", parents=[common, sign, rep], help="tables in Markdown and CSV")
    sub.add_parser("run", parents=[common, inputs, sign, ego, rep], help="every stage in order")
    sp = sub.add_parser("synth", parents=[common], help="synthetic corpus with planted truth")
    sp.add_argument("--egos", type=int, help="number of egos")
    sp.add_argument("--count-model", choices=("poisson", "expected"))
    return p


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    get = lambda name: getattr(args, name, None)  # noqa: E731
    bw = get("bandwidth")
    if bw is not None and bw != "auto":
        try:
            bw = float(bw)
        except ValueError:
            raise ConfigError(f"bad --bandwidth {bw!r}") from None
    return {
        "input.paths": get("inputs") or None,
        "run.out": get("out"),
        "run.jobs": get("jobs"),
        "run.seed": get("seed"),
        "signing.threshold": get("threshold"),
        "egonet.bandwidth": bw,
        "egonet.quantile": get("quantile"),
        "egonet.log_space": get("log_space"),
        "egonet.active_min_freq": get("active_min_freq"),
        "report.averaging": get("averaging"),
        "report.ci_method": get("ci_method"),
        "report.format": get("report_format"),
        "synth.seed": get("seed"),
        "synth.n_egos": get("egos"),
        "synth.count_model": get("count_model"),
    }


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        raw = load_toml(args.config) if args.config else {}
        cfg = build_config(raw, _overrides(args))
        if args.command == "validate":
            return cmd_validate(cfg, out_given=args.out is not None or "out" in raw.get("run", {}))
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "synth":
            return cmd_synth(cfg)
        return cmd_stage(cfg, args.command)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except StageError as e:
        print(f"error: {e}", file=sys.stderr)
        log.debug("traceback", exc_info=e.cause)
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {e}", file=sys.stderr)
        log.debug("traceback", exc_info=True)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

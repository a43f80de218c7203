"""Lexicon-and-rules polarity scoring for short social-media text.

The default scorer follows the well-known valence-lexicon heuristics for
tweets: per-token valences adjusted for negation, degree boosters, ALL-CAPS
emphasis, exclamation/question emphasis and contrastive "but", squashed
into [-1, 1] with ``x / sqrt(x**2 + alpha)``.

Plain retweets are never scored: the ego did not write the text, so the
interaction is labelled neutral regardless of its content.
"""

from __future__ import annotations

import logging
import math
import re
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol

from .corpus import InteractionRecord, Kind

log = logging.getLogger(__name__)

NEGATIVE = "negative"
NEUTRAL = "neutral"
POSITIVE = "positive"

BOOST = 0.293

DEFAULT_BOOSTERS: dict[str, float] = {
    **dict.fromkeys(
        [
            "absolutely", "amazingly", "awfully", "completely", "considerable",
            "considerably", "decidedly", "deeply", "effing", "enormous",
            "enormously", "entirely", "especially", "exceptional",
            "exceptionally", "extreme", "extremely", "fabulously", "flipping",
            "flippin", "frackin", "fracking", "fricking", "frickin", "frigging",
            "friggin", "fully", "fuckin", "fucking", "fuggin", "fugging",
            "greatly", "hella", "highly", "hugely", "incredible", "incredibly",
            "intensely", "major", "majorly", "more", "most", "particularly",
            "purely", "quite", "really", "remarkably", "so", "substantially",
            "thoroughly", "total", "totally", "tremendous", "tremendously",
            "uber", "unbelievably", "unusually", "utter", "utterly", "very",
        ],
        BOOST,
    ),
    **dict.fromkeys(
        [
            "almost", "barely", "hardly", "just enough", "kind of", "kinda",
            "kindof", "kind-of", "less", "little", "marginal", "marginally",
            "occasional", "occasionally", "partly", "scarce", "scarcely",
            "slight", "slightly", "somewhat", "sort of", "sorta", "sortof",
            "sort-of",
        ],
        -BOOST,
    ),
}

DEFAULT_NEGATIONS: frozenset[str] = frozenset(
    """aint arent cannot cant couldnt darent didnt doesnt ain't aren't can't
    couldn't daren't didn't doesn't dont hadnt hasnt havent isnt mightnt
    mustnt neither don't hadn't hasn't haven't isn't mightn't mustn't neednt
    needn't never none nope nor not nothing nowhere oughtnt shant shouldnt
    uhuh wasnt werent oughtn't shan't shouldn't uh-uh wasn't weren't without
    wont wouldnt won't wouldn't rarely seldom despite""".split()
)

# multi-word expressions whose valence replaces the token's own
IDIOMS: dict[str, float] = {
    "the shit": 3, "the bomb": 3, "bad ass": 1.5, "badass": 1.5,
    "bus stop": 0.0, "yeah right": -2, "kiss of death": -1.5,
    "to die for": 3, "beating heart": 3.1, "broken heart": -2.9,
}

_MENTION_RE = re.compile(r"(?<!\w)@\w+")
_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)


@dataclass(frozen=True)
class Lexicon:
    entries: dict[str, float]
    booster_map: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_BOOSTERS))
    negation_set: frozenset[str] = DEFAULT_NEGATIONS

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ScorerConfig:
    pos_threshold: float = 0.05
    neg_threshold: float = 0.05
    normalization_alpha: float = 15.0
    negation_scalar: float = -0.74
    caps_increment: float = 0.733
    exclamation_increment: float = 0.292
    max_exclamations: int = 4
    question_increment: float = 0.18
    question_cap: float = 0.96
    but_before: float = 0.5
    but_after: float = 1.5

    def __post_init__(self):
        if not (0 < self.pos_threshold < 1 and 0 < self.neg_threshold < 1):
            raise ValueError("polarity thresholds must lie in (0, 1)")
        if self.normalization_alpha <= 0:
            raise ValueError("normalization_alpha must be positive")


@dataclass(frozen=True)
class SentimentLabel:
    compound: float
    polarity: str
    forced_neutral: bool = False


class Scorer(Protocol):
    def score(self, text: str) -> float: ...


def bundled_lexicon_path():
    return resources.files(__package__).joinpath("data/vader_lexicon.txt")


def load_lexicon(
    path: str | Path | None = None,
    booster_map: dict[str, float] | None = None,
    negation_set: Iterable[str] | None = None,
) -> Lexicon:
    """Read a tab-separated ``token<TAB>valence[<TAB>...]`` lexicon.

    ``path=None`` loads the bundled lexicon. Tokens are lower-cased; a
    repeated token keeps the last row and logs a warning.
    """
    if path is None:
        text = bundled_lexicon_path().read_text("utf-8")
        source = "<bundled>"
    else:
        text = Path(path).read_text(encoding="utf-8")
        source = str(path)
    entries: dict[str, float] = {}
    dupes = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) < 2:
            raise ValueError(f"{source}:{lineno}: expected token<TAB>valence")
        token = cols[0].strip().lower()
        try:
            valence = float(cols[1])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-numeric valence {cols[1]!r}") from None
        if not math.isfinite(valence):
            raise ValueError(f"{source}:{lineno}: valence must be finite")
        if token in entries:
            log.debug("%s:%d: duplicate token %r", source, lineno, token)
            dupes.append(token)
        entries[token] = valence
    if dupes:
        # the bundled file's duplicates are known and harmless
        (log.info if path is None else log.warning)("%s: %d duplicate token(s), last value kept: %s", source, len(dupes), ", ".join(sorted(set(dupes))[:10]))
    return Lexicon(
        entries=entries,
        booster_map=dict(DEFAULT_BOOSTERS if booster_map is None else booster_map),
        negation_set=frozenset(DEFAULT_NEGATIONS if negation_set is None else negation_set),
    )


def normalize(x: float, alpha: float = 15.0) -> float:
    return x / math.sqrt(x * x + alpha)


def clean_text(text: str) -> str:
    """Drop @usernames and URLs, which carry no valence."""
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    return " ".join(text.split())


def _strip_token(tok: str) -> str:
    stripped = tok.strip(string.punctuation)
    # short remainders are emoticons like ":)" and stay intact
    return tok if len(stripped) <= 2 else stripped


class LexiconScorer:
    """Default :class:`Scorer` backed by a :class:`Lexicon`.

    Scores are memoised per text since identical texts recur heavily in
    timelines; the cache is per instance.
    """

    def __init__(self, lexicon: Lexicon, config: ScorerConfig | None = None, cache_size: int = 1 << 18):
        self.lexicon = lexicon
        self.config = config or ScorerConfig()
        self._cache: dict[str, float] = {}
        self._cache_size = cache_size

    def score(self, text: str) -> float:
        hit = self._cache.get(text)
        if hit is not None:
            return hit
        value = self._score(text)
        if len(self._cache) < self._cache_size:
            self._cache[text] = value
        return value

    def _score(self, text: str) -> float:
        text = clean_text(text)
        if not text:
            return 0.0
        tokens = [_strip_token(t) for t in text.split()]
        tokens = [t for t in tokens if t]
        if not tokens:
            return 0.0
        lower = [t.lower() for t in tokens]
        n_caps = sum(t.isupper() for t in tokens)
        caps_diff = 0 < n_caps < len(tokens)

        valences = []
        for i, tok in enumerate(tokens):
            if lower[i] in self.lexicon.booster_map:
                valences.append(0.0)
            elif lower[i] == "kind" and i + 1 < len(tokens) and lower[i + 1] == "of":
                valences.append(0.0)
            else:
                valences.append(self._token_valence(i, tokens, lower, caps_diff))

        if "but" in lower:
            b = lower.index("but")
            valences = [
                v * self.config.but_before if i < b else v * self.config.but_after if i > b else v
                for i, v in enumerate(valences)
            ]

        total = math.fsum(valences)
        emphasis = self._punctuation_emphasis(text)
        if total > 0:
            total += emphasis
        elif total < 0:
            total -= emphasis
        return max(-1.0, min(1.0, normalize(total, self.config.normalization_alpha)))

    def _token_valence(self, i: int, tokens: list[str], lower: list[str], caps_diff: bool) -> float:
        cfg = self.config
        lex = self.lexicon.entries
        word = lower[i]
        if word not in lex:
            return 0.0
        valence = lex[word]
        # "no" before another lexicon word acts as a negator, not a valence
        if word == "no" and i + 1 < len(tokens) and lower[i + 1] in lex:
            valence = 0.0
        if (
            (i > 0 and lower[i - 1] == "no")
            or (i > 1 and lower[i - 2] == "no")
            or (i > 2 and lower[i - 3] == "no" and lower[i - 1] in ("or", "nor"))
        ):
            valence = lex[word] * cfg.negation_scalar

        if caps_diff and tokens[i].isupper():
            valence += cfg.caps_increment if valence > 0 else -cfg.caps_increment

        for dist in range(3):
            j = i - dist - 1
            if j < 0 or lower[j] in lex:
                continue
            s = self._booster(tokens[j], valence, caps_diff)
            if s:
                s *= (1.0, 0.95, 0.9)[dist]
            valence += s
            valence = self._negation(valence, lower, dist, i)
            if dist == 2:
                valence = self._idioms(valence, lower, i)

        # "least" negates unless part of "at least" / "very least"
        if i > 0 and lower[i - 1] == "least" and "least" not in lex:
            if i == 1 or lower[i - 2] not in ("at", "very"):
                valence *= cfg.negation_scalar
        return valence

    def _booster(self, tok: str, valence: float, caps_diff: bool) -> float:
        scalar = self.lexicon.booster_map.get(tok.lower(), 0.0)
        if not scalar:
            return 0.0
        if valence < 0:
            scalar = -scalar
        if caps_diff and tok.isupper():
            scalar += self.config.caps_increment if valence > 0 else -self.config.caps_increment
        return scalar

    def _is_negator(self, word: str) -> bool:
        return word in self.lexicon.negation_set or "n't" in word

    def _negation(self, valence: float, lower: list[str], dist: int, i: int) -> float:
        neg = self.config.negation_scalar
        if dist == 0:
            return valence * neg if self._is_negator(lower[i - 1]) else valence
        if dist == 1:
            if lower[i - 2] == "never" and lower[i - 1] in ("so", "this"):
                return valence * 1.25
            if lower[i - 2] == "without" and lower[i - 1] == "doubt":
                return valence
            return valence * neg if self._is_negator(lower[i - 2]) else valence
        if (lower[i - 3] == "never" and lower[i - 2] in ("so", "this")) or lower[i - 1] in ("so", "this"):
            return valence * 1.25
        if lower[i - 3] == "without" and "doubt" in (lower[i - 2], lower[i - 1]):
            return valence
        return valence * neg if self._is_negator(lower[i - 3]) else valence

    def _idioms(self, valence: float, lower: list[str], i: int) -> float:
        before = [
            f"{lower[i - 1]} {lower[i]}",
            f"{lower[i - 2]} {lower[i - 1]} {lower[i]}",
            f"{lower[i - 2]} {lower[i - 1]}",
            f"{lower[i - 3]} {lower[i - 2]} {lower[i - 1]}",
            f"{lower[i - 3]} {lower[i - 2]}",
        ]
        for seq in before:
            if seq in IDIOMS:
                valence = IDIOMS[seq]
                break
        if i + 1 < len(lower) and f"{lower[i]} {lower[i + 1]}" in IDIOMS:
            valence = IDIOMS[f"{lower[i]} {lower[i + 1]}"]
        if i + 2 < len(lower) and f"{lower[i]} {lower[i + 1]} {lower[i + 2]}" in IDIOMS:
            valence = IDIOMS[f"{lower[i]} {lower[i + 1]} {lower[i + 2]}"]
        for gram in before[3], before[4], before[2]:
            if gram in self.lexicon.booster_map:
                valence += self.lexicon.booster_map[gram]
        return valence

    def _punctuation_emphasis(self, text: str) -> float:
        cfg = self.config
        amp = min(text.count("!"), cfg.max_exclamations) * cfg.exclamation_increment
        q = text.count("?")
        if q > 1:
            amp += q * cfg.question_increment if q <= 3 else cfg.question_cap
        return amp


def polarity_of(compound: float, config: ScorerConfig) -> str:
    if compound <= -config.neg_threshold:
        return NEGATIVE
    if compound >= config.pos_threshold:
        return POSITIVE
    return NEUTRAL


def score_text(lexicon: Lexicon, config: ScorerConfig, text: str) -> float:
    return LexiconScorer(lexicon, config).score(text)


def label_interaction(record: InteractionRecord, scorer: Scorer | Lexicon, config: ScorerConfig | None = None) -> SentimentLabel:
    """Label one interaction; plain retweets are forced neutral.

    ``scorer`` may be any :class:`Scorer` or a bare :class:`Lexicon`, which
    is wrapped in the default :class:`LexiconScorer`.
    """
    if isinstance(scorer, Lexicon):
        scorer = LexiconScorer(scorer, config)
    config = config or getattr(scorer, "config", None) or ScorerConfig()
    if record.kind is Kind.RETWEET:
        return SentimentLabel(0.0, NEUTRAL, forced_neutral=True)
    compound = scorer.score(record.text)
    return SentimentLabel(compound, polarity_of(compound, config))


def label_records(records: Iterable[InteractionRecord], scorer: Scorer, config: ScorerConfig | None = None) -> list[SentimentLabel]:
    return [label_interaction(r, scorer, config) for r in records]

import csv
import logging
import math
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signed_egonet.corpus import InteractionRecord, Kind
from signed_egonet.sentiment import (
    DEFAULT_BOOSTERS,
    DEFAULT_NEGATIONS,
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    LexiconScorer,
    ScorerConfig,
    bundled_lexicon_path,
    clean_text,
    label_interaction,
    load_lexicon,
    normalize,
    polarity_of,
    score_text,
)

REFERENCE = Path(__file__).parent / "data" / "mini_corpus_reference.tsv"


def n15(x):
    return x / math.sqrt(x * x + 15)


def write(tmp_path, text, name="lex.txt"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestLexicon:
    def test_two_rows(self, tmp_path):
        lex = load_lexicon(write(tmp_path, "good\t1.9\t0.5\t[1,2]\nbad\t-2.5\n"))
        assert len(lex) == 2 and lex.entries == {"good": 1.9, "bad": -2.5}

    def test_empty_file(self, tmp_path):
        lex = load_lexicon(write(tmp_path, ""))
        assert len(lex) == 0
        assert score_text(lex, ScorerConfig(), "a wonderful, terrible day!!!") == 0.0

    def test_bundled_count(self):
        # independent count: distinct lower-cased first columns
        tokens = set()
        for row in bundled_lexicon_path().read_text("utf-8").splitlines():
            if row.strip():
                tokens.add(row.split("\t")[0].strip().lower())
        assert len(load_lexicon()) == len(tokens) > 7000

    def test_duplicate_last_wins_with_warning(self, tmp_path, caplog):
        with caplog.at_level(logging.WARNING):
            lex = load_lexicon(write(tmp_path, "meh\t-0.5\nMEH\t-1.0\n"))
        assert lex.entries == {"meh": -1.0}
        assert "duplicate" in caplog.text

    def test_non_numeric_valence_reports_row(self, tmp_path):
        with pytest.raises(ValueError, match=":2:"):
            load_lexicon(write(tmp_path, "good\t1.9\nbad\tvery\n"))

    def test_missing_column(self, tmp_path):
        with pytest.raises(ValueError, match=":1:"):
            load_lexicon(write(tmp_path, "lonely\n"))

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(OSError):
            load_lexicon(tmp_path / "nope.txt")

    def test_row_permutation_does_not_change_scores(self, tmp_path, scorer):
        rows = bundled_lexicon_path().read_text("utf-8").splitlines()
        last = {r.split("\t")[0].lower(): r for r in rows if r.strip()}
        unique = list(last.values())
        random.Random(3).shuffle(unique)
        shuffled = LexiconScorer(load_lexicon(write(tmp_path, "\n".join(unique))))
        for text in ("The book was good.", "Not bad at all :)", "I HATE mondays!!", "meh, kind of ok"):
            assert shuffled.score(text) == scorer.score(text)


class TestRules:
    def test_empty(self, scorer):
        assert scorer.score("") == 0.0

    def test_out_of_lexicon(self, scorer):
        assert scorer.score("the table is in the kitchen") == 0.0

    def test_single_token_is_exact(self, scorer, lexicon):
        for tok in ("good", "bad", "love", "hate"):
            v = lexicon.entries[tok]
            assert scorer.score(tok) == v / math.sqrt(v * v + 15)

    @pytest.mark.parametrize(
        "text,raw",
        [
            ("not good", 1.9 * -0.74),
            ("very good", 1.9 + 0.293),
            ("GOOD movie", 1.9 + 0.733),
            ("good!!", 1.9 + 2 * 0.292),
            ("good!!!!!!", 1.9 + 4 * 0.292),
            ("good??", 1.9 + 2 * 0.18),
            ("good????", 1.9 + 0.96),
            ("good but bad", 1.9 * 0.5 - 2.5 * 1.5),
            ("@someone good https://t.co/xyz", 1.9),
        ],
    )
    def test_rule_arithmetic(self, scorer, text, raw):
        assert scorer.score(text) == pytest.approx(n15(raw), abs=1e-12)

    def test_mentions_and_urls_stripped(self):
        assert clean_text("@bob hi www.example.com there http://x.y/z") == "hi there"

    def test_reference_corpus(self, scorer):
        with open(REFERENCE, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE))
        assert len(rows) == 50
        cfg = ScorerConfig()
        for r in rows:
            ref = float(r["compound"])
            got = scorer.score(r["text"])
            assert abs(got - ref) <= 0.05, r["text"]
            assert polarity_of(got, cfg) == polarity_of(ref, cfg), r["text"]

    def test_deterministic(self, scorer, lexicon):
        fresh = LexiconScorer(lexicon)
        text = "Sooo not happy with this, but the staff were GREAT!!"
        assert scorer.score(text) == scorer.score(text) == fresh.score(text)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-1e4, max_value=1e4))
    def test_normalize_strictly_inside(self, x):
        # beyond ~1e8 the float quotient rounds to exactly 1
        assert abs(normalize(x)) < 1


_SKIP_WORDS = set(DEFAULT_NEGATIONS) | set(DEFAULT_BOOSTERS) | {"but", "least", "kind", "of", "no", "never", "so", "this"}


@pytest.fixture(scope="module")
def plain_words(lexicon):
    words = sorted(w for w in lexicon.entries if w.isalpha() and w.islower() and w not in _SKIP_WORDS)
    pos = [w for w in words if lexicon.entries[w] > 0]
    return words, pos


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_appending_positive_token_never_decreases(scorer, plain_words, data):
    words, pos = plain_words
    body = data.draw(st.lists(st.sampled_from(words), max_size=8))
    extra = data.draw(st.sampled_from(pos))
    before = scorer.score(" ".join(body))
    after = scorer.score(" ".join([*body, extra]))
    assert after >= before - 1e-12


class TestLabels:
    def rec(self, kind, text):
        return InteractionRecord("e", "a", kind, 1, text)

    def test_retweet_forced_neutral(self, scorer):
        lab = label_interaction(self.rec(Kind.RETWEET, "I HATE this"), scorer)
        assert (lab.compound, lab.polarity, lab.forced_neutral) == (0.0, NEUTRAL, True)

    def test_quote_retweet_scored(self, scorer):
        lab = label_interaction(self.rec(Kind.QUOTE_RETWEET, "I HATE this"), scorer)
        assert lab.polarity == NEGATIVE and not lab.forced_neutral

    def test_zero_reply_is_plain_neutral(self, scorer):
        lab = label_interaction(self.rec(Kind.REPLY, "see you at noon"), scorer)
        assert (lab.compound, lab.polarity, lab.forced_neutral) == (0.0, NEUTRAL, False)

    def test_bare_lexicon_accepted(self, lexicon):
        assert label_interaction(self.rec(Kind.MENTION, "great work"), lexicon).polarity == POSITIVE

    def test_threshold_edges(self):
        cfg = ScorerConfig()
        assert polarity_of(0.05, cfg) == POSITIVE
        assert polarity_of(-0.05, cfg) == NEGATIVE
        assert polarity_of(0.0499, cfg) == NEUTRAL

    @pytest.mark.parametrize("kw", [{"pos_threshold": 0}, {"neg_threshold": 1}, {"normalization_alpha": 0}])
    def test_config_validation(self, kw):
        with pytest.raises(ValueError):
            ScorerConfig(**kw)

    def test_only_retweets_forced(self, small_synth, scorer):
        _, records, _ = small_synth
        for r in records:
            lab = label_interaction(r, scorer)
            assert lab.forced_neutral == (r.kind is Kind.RETWEET)
            assert -1 <= lab.compound <= 1

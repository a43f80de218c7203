"""Score a few short posts and see how retweets are handled.

Run: python demos/01_sentiment.py
"""
from signed_egonet.corpus import InteractionRecord, Kind
from signed_egonet.sentiment import LexiconScorer, ScorerConfig, label_interaction, load_lexicon

scorer = LexiconScorer(load_lexicon(), ScorerConfig())

posts = [
    "I love this, great work!",
    "I love this, great work!!!",
    "This is NOT good at all.",
    "The food was okay, but the service was awful.",
    "Meeting moved to 3pm.",
]
for text in posts:
    print(f"{scorer.score(text):+.4f}  {text}")

# A retweet copies someone else's words, so it carries no sentiment of its own.
# A quote retweet adds commentary, which is scored.
rt = InteractionRecord("alice", "bob", Kind.RETWEET, 1_600_000_000, "RT @bob: What a disgusting, hateful lie.")
qt = InteractionRecord("alice", "bob", Kind.QUOTE_RETWEET, 1_600_000_000, "What a disgusting, hateful lie.")
for rec in (rt, qt):
    lab = label_interaction(rec, scorer)
    print(f"{rec.kind.value:>14}: {lab.polarity} ({lab.compound:+.3f})")

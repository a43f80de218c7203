"""Turn per-interaction polarities into a signed relationship.

A relationship is negative when the share of negative interactions exceeds
the threshold (0.17 by default).
"""
from signed_egonet.sentiment import NEGATIVE, NEUTRAL, POSITIVE, SentimentLabel
from signed_egonet.signing import aggregate_relationship, sign_relationship

neg, pos, neu = (SentimentLabel(-0.5, NEGATIVE), SentimentLabel(0.5, POSITIVE), SentimentLabel(0.0, NEUTRAL))

for n_neg, n_other in ((1, 5), (1, 4), (3, 20), (0, 12)):
    stats = aggregate_relationship([neg] * n_neg + [pos] * (n_other // 2) + [neu] * (n_other - n_other // 2), "ego", "alter")
    default = sign_relationship(stats)
    strict = sign_relationship(stats, 0.0)
    print(f"{n_neg}/{stats.n_total} negative: {default.sign:>8} at 0.17, {strict.sign:>8} at 0.0")

"""Rational rates by time expansion, and a half-duplex relay."""
# %%
from fractions import Fraction as F

from relaynet import FIG2, HalfDuplex, NetworkSpec, halfduplex_contains, verify
from relaynet import schedule_halfduplex, schedule_rational
from relaynet.forwarding import dumps_schedule
from relaynet.region import best_t

r = (F(2, 3), F(1, 2), 0, 0)
s = schedule_rational(FIG2, r)
print(f"Q = {s.Q}, inner rates {s.inner.rates}")
print("verified over", s.Q, "slots:", verify(FIG2, s))

# %% A relay that listens half the time.
half = NetworkSpec(FIG2.up_a, FIG2.up_b, FIG2.down_a, FIG2.down_b, HalfDuplex(F(1, 2)))
r = (1, F(1, 2), F(1, 2), F(1, 2))
print("inside half-duplex region:", halfduplex_contains(half, r))
h = schedule_halfduplex(half, r)
print("slots listen/transmit:", h.listen, h.transmit)
print(dumps_schedule(h))
print("verified:", verify(half, h))

# %% Choosing the listen fraction beforehand.
asym = NetworkSpec.from_pairs([(2, 2, 6, 6)])
print("best t for R_AB:", best_t(asym, (1, 0), 8))

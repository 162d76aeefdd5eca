"""Canonical form: every equation type sits in one contiguous block of levels."""
# %%
from relaynet import Flow, NetworkSpec, OneWay, Schedule, Shared, canonicalize, verify
from relaynet.forwarding import dumps_schedule
from relaynet.oracle import check_schedule, grouping_problems

# %% A valid but scattered schedule: two shared levels split by a one-way level,
# plus a second pair of opposite one-way bits that could have been one shared level.
spec = NetworkSpec.from_pairs([(4, 4, 4, 4)])
s = Schedule(
    1,
    (Shared(1, 1, 1), OneWay(Flow(1, "AB"), 2), Shared(1, 3, 2), OneWay(Flow(1, "BA"), 3)),
    (1, 4, 2, 3),
    4,
    (3, 3),
)
print("valid:", check_schedule(spec, s) == [])
print(dumps_schedule(s))
print("grouping problems:", grouping_problems(s))

# %%
c = canonicalize(s)
print(dumps_schedule(c))
print("grouping problems:", grouping_problems(c))
print("still verifies:", verify(spec, c))

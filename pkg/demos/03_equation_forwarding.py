"""Build an equation-forwarding schedule and push real bits through it."""
# %%
from relaynet import FIG2, Flow, run, schedule_integral, verify
from relaynet.forwarding import dumps_schedule
from relaynet.oracle import brute_force_schedule, check_schedule

s = schedule_integral(FIG2, (2, 1, 1, 1))
print(dumps_schedule(s))
print("checker problems:", check_schedule(FIG2, s))

# %% One message pattern end to end.
msgs = {Flow(1, "AB"): (1, 0), Flow(1, "BA"): (1,), Flow(2, "AB"): (1,), Flow(2, "BA"): (0,)}
print(run(FIG2, s, msgs).dumps())

# %% All 32 message patterns.
print("verified:", verify(FIG2, s))

# %% Outside the region no permutation scheme exists.
print("brute force for (3,1,1,1):", brute_force_schedule(FIG2, (3, 1, 1, 1)))

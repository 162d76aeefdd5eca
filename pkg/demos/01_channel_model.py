"""The deterministic shift channel.

Each node sends a bit vector; a link of gain n delivers the sender's top n
bits onto the receiver's bottom n levels, and simultaneous arrivals add
modulo two.
"""
# %%
import itertools

from relaynet.core import level_vector, receive, shift_apply

x = level_vector([1, 0, 1])
for n in range(4):
    print(f"gain {n}: {x.tolist()} -> {shift_apply(x, n, 3).tolist()}")

# %% Two-pair example: uplink gains A1=3, B1=2, A2=2, B2=1 into a 3-level relay.
gains = {"A1": 3, "B1": 2, "A2": 2, "B2": 1}
a11, a12, b11, a21, b21 = 1, 0, 1, 1, 0
tx = {
    "A1": level_vector([a11, a12, 0]),
    "B1": level_vector([b11, 0, 0]),
    "A2": level_vector([0, a21, 0]),
    "B2": level_vector([b21, 0, 0]),
}
print("relay hears", receive(tx, gains, 3).tolist(), "= [a11, a12^b11, a21^b21]")

# %% The relation holds for every choice of the five message bits.
ok = all(
    receive(
        {
            "A1": level_vector([p[0], p[1], 0]),
            "B1": level_vector([p[2], 0, 0]),
            "A2": level_vector([0, p[3], 0]),
            "B2": level_vector([p[4], 0, 0]),
        },
        gains,
        3,
    ).tolist()
    == [p[0], p[1] ^ p[2], p[3] ^ p[4]]
    for p in itertools.product((0, 1), repeat=5)
)
print("all 32 patterns:", ok)

"""Cut-set region of a two-pair network: inequalities, membership, vertices."""
# %%
from relaynet import FIG2, constraints, contains, integral_points, vertices

region = constraints(FIG2)
for c in region.constraints:
    print(c)

# %%
for r in [(2, 1, 1, 1), (3, 1, 1, 1)]:
    print(r, "inside" if contains(FIG2, r) else f"outside, violates {region.first_violation(r)}")

# %% Integer points and exact vertices.
pts = list(integral_points(FIG2))
print(len(pts), "integral rate tuples")
verts = vertices(FIG2)
print(len(verts), "vertices:")
for v in verts:
    print("  ", tuple(str(x) for x in v))

# %% Weighted sum-rate maxima come out of an exact simplex.
print("max R_A1B1 + R_B2A2 =", region.maximize([1, 0, 0, 1]))

# %% [markdown]
# # Tunnels between crevasses
#
# An extended gauge splits the space into crevasses, the classes of points at
# finite distance.  Tunnels join crevasses with a positive length, and the
# tunnel distance is the cheapest walk using gauge steps and tunnels.

# %%
from fractions import Fraction

from isometrize import ExtGauge, TunnelSystem, tunnel_distance, verify_theorem_3_6
from isometrize.catalog import run_ex3_2, run_ex3_3, run_ex3_4

inf = float("inf")
half, quarter = Fraction(1, 2), Fraction(1, 4)
rho = ExtGauge(((0, half, inf, inf), (half, 0, inf, inf), (inf, inf, 0, quarter), (inf, inf, quarter, 0)))
T = TunnelSystem(((1, 2, 5),))
sigma = tunnel_distance(rho, T)
print(sigma.matrix_strings())
print(verify_theorem_3_6(rho, T, sigma).status)

# %% [markdown]
# Unit tunnels from one hub to every crevasse pull all representatives into a
# bounded ball, so the result is not proper.  Chains, or stars whose lengths
# grow, keep every tunnel neighbourhood finite.

# %%
for run in (run_ex3_2, run_ex3_3, run_ex3_4):
    rep = run()
    print(rep.name, rep.observed, "matches" if rep.matches else "MISMATCH")

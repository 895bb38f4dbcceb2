# %% [markdown]
# # Chain distances from a development
#
# A development is a finite list of open covers, each refining the one before.
# Members of level ``n`` weigh ``2**-n`` and the distance between two points is
# the cheapest chain of intersecting members joining them.

# %%
from isometrize import Development, au_distance, au_oracle, verify_sandwich
from isometrize.report import plain

dev = Development(([{0, 1}, {1, 2}], [{0}, {1}, {2}]))
rho = au_distance(dev)
print(rho.matrix_strings())

# %% [markdown]
# The shortest-path computation agrees with brute-force chain enumeration.

# %%
assert rho == au_oracle(dev, max_links=5)

# %% [markdown]
# Balls of radius ``2**-n`` sit between the level-``n`` stars.

# %%
print(plain(verify_sandwich(rho, dev)))

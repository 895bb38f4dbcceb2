# %% [markdown]
# # Invariant gauges for group actions
#
# Horizon families stand in for infinite spaces: each window is a finite
# instance, and a property is accepted once its labelled witness stops
# changing between the largest windows.

# %%
from isometrize import proper_metrize_family
from isometrize.catalog import ex1_3_family, run_ex1_1, run_ex1_2
from isometrize.report import plain

# %% [markdown]
# Transpositions on a discrete set: an invariant metric exists, but the
# translates of ``{0, 1}`` sweep out the whole space, so no proper one does.

# %%
rep = run_ex1_1()
print(rep.observed)

# %% [markdown]
# A shift on a two-point compactification is not equiregular at ``p+``.

# %%
print(run_ex1_2().checks["failure"])

# %% [markdown]
# Integer translations pass both checks and the proper pipeline succeeds.

# %%
res = proper_metrize_family(ex1_3_family())
print(res.succeeded, {k: plain(v)["status"] for k, v in res.verdicts.items()})

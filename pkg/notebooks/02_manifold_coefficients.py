# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Taylor coefficients of the unstable manifold
#
# The two-dimensional unstable manifold is parametrized by a power series in
# $\sigma = (\sigma_1, \sigma_2)$. After reduction to a scalar sequence $x$,
# every coefficient of degree at least two solves
# $\Delta(\langle\lambda,\beta\rangle)\, x_\beta = -\alpha (x * r(x))_\beta$,
# where $r$ multiplies each coefficient by a problem-specific factor.

# %%
import numpy as np

from wrightcap.cheb import build_scheme
from wrightcap.manifold import eval_F, eval_manifold, make_problem, recurse_coeffs, xhat_sha256
from wrightcap.roots import census_psa
from wrightcap.seq import degrees

alpha, N = 2.0, 25
scheme = build_scheme(10, alpha)
_, pair = census_psa(scheme)
p = make_problem("psa", alpha, pair, scheme, maxdeg=2 * N)
x = recurse_coeffs(p, N)
print(xhat_sha256(x))

# %% [markdown]
# The first-order coefficients fix the scale of the eigenvector. Coefficients
# then decay geometrically with the degree.

# %%
mags = np.abs(x.mid())
deg = degrees(N)
for k in range(0, N + 1, 3):
    print(k, mags[deg == k].max())

# %% [markdown]
# The truncated guess solves the equations up to rounding on its own degrees;
# the first nonzero defect appears above degree $N$.

# %%
F = eval_F(p, x, 2 * N)
fm = F.coeffs.mag_upper()
deg2 = degrees(2 * N)
print("head:", fm[deg2 <= N].max())
print("tail:", fm[deg2 > N].max())

# %% [markdown]
# Evaluating the parametrization on conjugate arguments gives real orbits of
# the discretized system; the first component is the value at $\theta = 0$.

# %%
for rho in (0.0, 0.5, 1.0, 2.0):
    s = rho * np.exp(0.4j)
    v = eval_manifold(p, x, (s, np.conj(s)))
    print(rho, np.round(v.real[:3], 6), abs(v.imag).max())

# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Bounding the multipliers of the discretized problem
#
# For the discretization the multiplier of index $\beta$ is the last component
# of $(D - zI)^{-1} D\mathbf 1$ at $z = \langle\lambda_n,\beta\rangle$. A finite
# sweep certifies invertibility for $|\beta| \le M$, and a Neumann-series bound
# covers everything beyond.

# %%
import time

from wrightcap.bounds import dde_tail, invertibility_sweep
from wrightcap.cheb import build_scheme
from wrightcap.roots import census_psa, find_dde_pair

alpha = 2.0
scheme = build_scheme(10, alpha)
_, pair = census_psa(scheme)
print("||D||_1 =", scheme.norm_D("one"), " ||1||_1 =", scheme.norm_ones("one"))

# %%
t0 = time.perf_counter()
tail = invertibility_sweep(scheme, pair, M=1000, N=25)
print(f"{time.perf_counter() - t0:.1f} s, {tail.explicit_solves} explicit solves")
print("epsilon:", tail.epsilon)
print("sup |m| for |beta| <= M:", tail.finite_max)
print("sup |m| beyond M:       ", tail.resolvent_tail)
print("sup 1/|Delta_n| beyond N:", max(tail.delta_inv_max, tail.delta_tail))

# %% [markdown]
# $M$ must exceed $(\|D\| + \varepsilon)/\operatorname{Re}\lambda_n$ and
# $\alpha\|D\|\|\mathbf 1\|/(\varepsilon\operatorname{Re}\lambda_n)$. With
# $\operatorname{Re}\lambda_n \approx 0.173$ and $\|D\|_1 \approx 121.6$ no
# $\varepsilon$ satisfies both below $M = 805$.

# %%
for M in (600, 804, 805, 1000, 2000):
    try:
        t = invertibility_sweep(scheme, pair, M=M, N=25)
        print(M, "ok", round(t.epsilon, 3), round(t.resolvent_tail, 3))
    except ArithmeticError as exc:
        print(M, "fails:", exc)

# %% [markdown]
# The delay equation needs no sweep: $|\Delta(z)| \ge \operatorname{Re} z - \alpha e^{-\operatorname{Re} z}$
# already bounds the inverse beyond degree $N$.

# %%
print(dde_tail(find_dde_pair(alpha), alpha, 25).delta_tail)

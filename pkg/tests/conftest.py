import pytest

from wrightcap.cheb import build_scheme
from wrightcap.manifold import build_approx_solution, make_problem, recurse_coeffs
from wrightcap.roots import census_psa, find_dde_pair

ALPHA = 2.0
N_MESH = 10
TRUNC = 25
TAIL_M = 1000


@pytest.fixture(scope="session")
def scheme10():
    return build_scheme(N_MESH, ALPHA)


@pytest.fixture(scope="session")
def census10(scheme10):
    return census_psa(scheme10)


@pytest.fixture(scope="session")
def psa_pair(census10):
    return census10[1]


@pytest.fixture(scope="session")
def dde_pair():
    return find_dde_pair(ALPHA)


@pytest.fixture(scope="session")
def psa_problem(scheme10, psa_pair):
    return make_problem("psa", ALPHA, psa_pair, scheme10, maxdeg=2 * TRUNC)


@pytest.fixture(scope="session")
def dde_problem(dde_pair):
    return make_problem("dde", ALPHA, dde_pair, maxdeg=2 * TRUNC)


@pytest.fixture(scope="session")
def xhat(psa_problem):
    return recurse_coeffs(psa_problem, TRUNC)


@pytest.fixture(scope="session")
def psa_solution(psa_problem, xhat):
    return build_approx_solution(psa_problem, xhat, TRUNC)


@pytest.fixture(scope="session")
def dde_solution(dde_problem, xhat):
    return build_approx_solution(dde_problem, xhat, TRUNC)


@pytest.fixture(scope="session")
def sweep(scheme10, psa_pair):
    from wrightcap.bounds import invertibility_sweep

    return invertibility_sweep(scheme10, psa_pair, TAIL_M, TRUNC)


@pytest.fixture(scope="session")
def distance_certificate():
    from wrightcap.cli import RunConfig, run_validation

    return run_validation(RunConfig(alpha=ALPHA, n=N_MESH, trunc_N=TRUNC, tail_M=TAIL_M), "distance")

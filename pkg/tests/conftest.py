import pytest

from qubeam import build_block, exact_roots, make_params

# The reference point used throughout: red and violet photons, a weak field,
# and the production coupling.
FIG = (2500.0, 3000.0, 0.5, 0.1)


@pytest.fixture(scope="session")
def fig_params():
    return make_params(*FIG)


@pytest.fixture(scope="session")
def fig_roots(fig_params):
    return exact_roots(fig_params)


@pytest.fixture(scope="session")
def fig_block(fig_params, fig_roots):
    return build_block(fig_roots, fig_params)

from pathlib import Path

import pytest

from anosov_liouville.constructions import model_defining_pair, standard_pair
from anosov_liouville.frames import CATMAP_KAPPA, make_abelian_test_frame, make_sl2_frame, make_sol_suspension


@pytest.fixture
def tmp_root_dir(tmpdir):
    """A temporary directory that gets set as the current working dir during the test using it"""
    with tmpdir.as_cwd() as _old_cwd:
        yield Path(str(tmpdir))


@pytest.fixture(scope="session")
def sol():
    """The suspension of the cat map, on a small grid"""
    return make_sol_suspension(CATMAP_KAPPA, grid_t=64)


@pytest.fixture(scope="session")
def sl2():
    return make_sl2_frame()


@pytest.fixture(scope="session")
def abelian():
    return make_abelian_test_frame(8)


@pytest.fixture(scope="session")
def sol_dp(sol):
    return model_defining_pair(sol)


@pytest.fixture(scope="session")
def sl2_dp(sl2):
    return model_defining_pair(sl2)


@pytest.fixture(scope="session")
def sol_standard(sol_dp):
    return standard_pair(sol_dp)


@pytest.fixture(scope="session")
def sl2_standard(sl2_dp):
    return standard_pair(sl2_dp)

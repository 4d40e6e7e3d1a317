import pytest

from cubechains import corpus
from cubechains.cube_cat import HAT_BOX, HAT_BOX_S, builtin


@pytest.fixture(scope="session")
def hat_box():
    return builtin(HAT_BOX, 3)


@pytest.fixture(scope="session")
def hat_box_s():
    return builtin(HAT_BOX_S, 3)


@pytest.fixture(scope="session")
def fixtures():
    return corpus.corpus()

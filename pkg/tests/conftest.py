import pytest
from hypothesis import settings

from homext.modcat import Module, Ring

settings.register_profile("homext", max_examples=25, deadline=None)
settings.load_profile("homext")


@pytest.fixture
def z4() -> Ring:
    return Ring(4)


@pytest.fixture
def z8() -> Ring:
    return Ring(8)


@pytest.fixture
def z12() -> Ring:
    return Ring(12)


@pytest.fixture
def z2_over_z4(z4) -> Module:
    return Module.cyclic(z4, 2)


@pytest.fixture
def free_z4(z4) -> Module:
    return Module.free(z4)

import pytest

from wellbarrier import PotentialGeometry, SpecialCondition, special_v0_catalog

# geometry used by the reference table and most checks
A, B = 6.0, 2.0


@pytest.fixture(scope="session")
def base_geom():
    return PotentialGeometry(a=A, b=B, v0=0.0)


@pytest.fixture(scope="session")
def f_roots(base_geom):
    """First four zero-energy special values, refined to machine precision."""
    return [r.v0 for r in special_v0_catalog(SpecialCondition.F_ZERO, 4, base_geom)]


@pytest.fixture(scope="session")
def g_roots(base_geom):
    """First four barrier-top special values, refined to machine precision."""
    return [r.v0 for r in special_v0_catalog(SpecialCondition.G_TOP, 4, base_geom)]


def geom(v0: float) -> PotentialGeometry:
    return PotentialGeometry(a=A, b=B, v0=v0)

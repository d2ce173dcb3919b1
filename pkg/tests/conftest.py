from fractions import Fraction as Fr

import pytest

from rhombic import algebra, asep, moments, tableaux, transfer


def clear_all_caches():
    """Drop every memo so timings measure cold work."""
    for mod in (algebra, tableaux, transfer, asep, moments):
        for obj in vars(mod).values():
            if hasattr(obj, "cache_clear"):
                obj.cache_clear()


@pytest.fixture
def half_third():
    return {"alpha": Fr(1, 2), "beta": Fr(1, 2), "gamma": Fr(1, 2), "delta": Fr(1, 2),
            "q": Fr(1, 3), "u": Fr(1)}


@pytest.fixture
def ones():
    return {v: Fr(1) for v in algebra.VARIABLES}

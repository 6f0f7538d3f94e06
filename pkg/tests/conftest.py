"""Pytest configuration and fixtures for braid dilatation tests."""
import math
import random

import pytest

from core.config import settings
from services.braid_core import BraidWord
from services.laurent import LaurentMatrix, LaurentPoly


GOLDEN_SQUARED = (3 + math.sqrt(5)) / 2


@pytest.fixture(scope="function")
def rng():
    """Seeded random source so every test is reproducible."""
    return random.Random(12345)


@pytest.fixture(scope="session")
def golden_squared():
    """Dilatation of sigma_1 sigma_2^-1, (3 + sqrt 5) / 2."""
    return GOLDEN_SQUARED


@pytest.fixture(scope="function")
def pa_braid():
    """The pseudo-Anosov 3-braid sigma_1 sigma_2^-1."""
    return BraidWord(3, (1, -2))


@pytest.fixture(scope="function")
def t():
    """The univariate Laurent variable t."""
    return LaurentPoly.variable(0, 1)


@pytest.fixture(scope="function")
def qt():
    """The pair of variables (q, t) in two-variable Laurent polynomials."""
    return LaurentPoly.variable(0, 2), LaurentPoly.variable(1, 2)


@pytest.fixture(scope="function")
def triangular_matrix(t):
    """[[t, 1], [0, 2]], whose eigenvalues are t and 2."""
    return LaurentMatrix.from_rows([[t, 1], [0, 2]])


@pytest.fixture(scope="function")
def random_poly():
    """Factory for random Laurent polynomials."""
    def _make(rng, var_count=1, span=4, terms=6, low=-2, coeff=5):
        items = []
        for _ in range(terms):
            exponent = tuple(low + rng.randint(0, span) for _ in range(var_count))
            items.append((exponent, rng.randint(-coeff, coeff)))
        return LaurentPoly(var_count, tuple(items))
    return _make


@pytest.fixture(scope="function")
def override_settings(mocker):
    """Patch settings fields for the duration of a test."""
    def _override(**values):
        for name, value in values.items():
            mocker.patch.object(settings, name, value)
    return _override

import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from backend.exact_numbers import PerturbedRational  # noqa: E402
from backend.spectrum import EllipsoidShape  # noqa: E402


@pytest.fixture
def two_three_plus():
    """The shape (2, 3 + eps)."""
    return EllipsoidShape.of(2, PerturbedRational(3, 1))


@pytest.fixture
def shape_8_13_22():
    return EllipsoidShape.of(8, 13, 22)


@pytest.fixture
def branched_cover_shape():
    return EllipsoidShape.of(1, PerturbedRational(1, 1), PerturbedRational(1, 0, 1))

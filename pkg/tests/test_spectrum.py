import itertools
from fractions import Fraction

import pytest

from backend.exact_numbers import PerturbedRational
from backend.exceptions import AmbiguousMaximizer, AmbiguousMinimizer, DomainError, TieInSpectrum
from backend.spectrum import (EllipsoidShape, LatticeTuple, ReebOrbit, action, capacity, cz_index, delta_path,
                              orbit_at, orbit_from_negative_tuple, orbit_rank, scale, spectrum_prefix)

PATHS_2_3_PLUS = [(1, 1), (2, 1), (2, 2), (3, 2), (4, 2), (4, 3), (5, 3), (5, 4)]


def brute_force_path(a, k):
    # every composition of n + k - 1 into n positive parts
    total = a.n + k - 1
    best, best_tuples = None, []
    for cuts in itertools.combinations(range(1, total), a.n - 1):
        bounds = (0,) + cuts + (total,)
        entries = tuple(bounds[i + 1] - bounds[i] for i in range(a.n))
        value = min(f * i for f, i in zip(a.factors, entries))
        if best is None or value > best:
            best, best_tuples = value, [entries]
        elif value == best:
            best_tuples.append(entries)
    return best, best_tuples


def test_shape_validation():
    with pytest.raises(DomainError):
        EllipsoidShape.of()
    with pytest.raises(DomainError):
        EllipsoidShape.of(1, 0)
    with pytest.raises(DomainError):
        EllipsoidShape.of(PerturbedRational(0, -1))
    with pytest.raises(DomainError):
        ReebOrbit(0, 1)
    with pytest.raises(DomainError):
        LatticeTuple((1, 0))


def test_capacities_of_two_three_plus(two_three_plus):
    expected = [2, PerturbedRational(3, 1), 4, 6, PerturbedRational(6, 2), 8]
    assert [capacity(two_three_plus, k) for k in range(1, 7)] == expected


def test_orbits_of_two_three_plus(two_three_plus):
    names = [str(orbit_at(two_three_plus, k)) for k in range(1, 7)]
    assert names == ['nu_1^1', 'nu_2^1', 'nu_1^2', 'nu_1^3', 'nu_2^2', 'nu_1^4']


def test_spectrum_prefix_and_rank(two_three_plus):
    prefix = spectrum_prefix(two_three_plus, 5)
    assert [value for _, value in prefix] == [capacity(two_three_plus, k) for k in range(1, 6)]
    for k, (orbit, value) in enumerate(prefix, start=1):
        assert orbit_rank(two_three_plus, orbit) == k
        assert action(two_three_plus, orbit) == value


def test_tie_is_reported_at_and_after_the_coincidence():
    shape = EllipsoidShape.of(2, 3)
    assert capacity(shape, 3) == 4
    assert capacity(shape, 4) == 6
    with pytest.raises(TieInSpectrum):
        orbit_at(shape, 4)
    with pytest.raises(TieInSpectrum):
        capacity(shape, 5)
    with pytest.raises(TieInSpectrum):
        orbit_at(shape, 7)
    with pytest.raises(TieInSpectrum):
        orbit_rank(shape, ReebOrbit(2, 2))


def test_example_shape_8_13_22(shape_8_13_22):
    assert [capacity(shape_8_13_22, k) for k in range(1, 5)] == [8, 13, 16, 22]
    assert orbit_at(shape_8_13_22, 4) == ReebOrbit(3, 1)


@pytest.mark.parametrize('k, expected', list(enumerate(PATHS_2_3_PLUS, start=1)))
def test_delta_path_table(two_three_plus, k, expected):
    assert tuple(delta_path(two_three_plus, k)) == expected


def test_delta_path_matches_brute_force_and_spectrum():
    shape = EllipsoidShape.of(PerturbedRational(3, 2), PerturbedRational(5, -1), PerturbedRational(7, 3))
    for k in range(1, 15):
        best, tuples = brute_force_path(shape, k)
        assert tuples == [tuple(delta_path(shape, k))]
        assert best == capacity(shape, k)


def test_delta_path_single_axis():
    assert tuple(delta_path(EllipsoidShape.of(5), 4)) == (4,)


def test_delta_path_ambiguity():
    with pytest.raises(AmbiguousMaximizer):
        delta_path(EllipsoidShape.of(1, 1), 2)


def test_orbit_from_negative_tuple(two_three_plus):
    assert orbit_from_negative_tuple(two_three_plus, (5, 4)) == ReebOrbit(1, 5)
    assert orbit_from_negative_tuple(two_three_plus, (2, 1)) == ReebOrbit(2, 1)
    with pytest.raises(AmbiguousMinimizer):
        orbit_from_negative_tuple(EllipsoidShape.of(2, 3), (3, 2))
    with pytest.raises(DomainError):
        orbit_from_negative_tuple(two_three_plus, (1, 1, 1))


def test_cz_index_on_tie_free_spectrum(two_three_plus, shape_8_13_22):
    for shape in (two_three_plus, shape_8_13_22):
        for k in range(1, 12):
            assert cz_index(shape, orbit_at(shape, k)) == shape.n - 1 + 2 * k


def test_cz_index_of_branched_cover(branched_cover_shape):
    for k in range(1, 7):
        assert cz_index(branched_cover_shape, ReebOrbit(1, k)) == 6 * k - 2


def test_scale(two_three_plus):
    scaled = scale(two_three_plus, 2)
    assert scaled.factors == (PerturbedRational(4), PerturbedRational(6, 2))
    assert orbit_at(scaled, 5) == orbit_at(two_three_plus, 5)
    with pytest.raises(DomainError):
        scale(two_three_plus, 0)


TIE_FREE_SHAPES = [
    EllipsoidShape.of(PerturbedRational(3, 2), PerturbedRational(5, -1), PerturbedRational(7, 3)),
    EllipsoidShape.of(2, PerturbedRational(3, 1)),
    EllipsoidShape.of(8, 13, 22),
]


@pytest.mark.parametrize('shape', TIE_FREE_SHAPES)
def test_capacity_scales_with_the_shape(shape):
    for factor in (Fraction(1, 3), 2, Fraction(7, 5)):
        scaled = scale(shape, factor)
        for k in range(1, 10):
            assert capacity(scaled, k) == capacity(shape, k) * factor
            assert orbit_at(scaled, k) == orbit_at(shape, k)


@pytest.mark.parametrize('shape', TIE_FREE_SHAPES[:2])
def test_actions_increase_strictly_along_the_spectrum(shape):
    prefix = spectrum_prefix(shape, 30)
    values = [value for _, value in prefix]
    assert all(low < high for low, high in zip(values, values[1:]))
    assert [action(shape, orbit) for orbit, _ in prefix] == values
    assert [capacity(shape, k) for k in range(1, 31)] == values

import math

import numpy as np
import pytest

from backend.blowup_homology import (CP2, F1, BlowupClass, certify_perfect, chain_divisor_classes, chern,
                                     cp2_perfect_classes, cremona_reduce, extend, f1_to_cp2, intersect,
                                     is_numerically_exceptional, is_perfect_exceptional, parse_class,
                                     proper_transform_class)
from backend.exceptions import DomainError, ParseError


def test_exceptional_sphere():
    e1 = BlowupClass.exceptional(CP2, 1, 2)
    assert e1.exc_coeffs == (-1, 0)
    assert chern(e1) == 1
    assert e1.self_intersection == -1
    assert is_numerically_exceptional(e1)
    assert str(e1) == 'e1'


def test_f1_basis():
    line = BlowupClass.f1(1, 0)
    fiber_class = BlowupClass.f1(0, -1)
    assert line.self_intersection == 1
    assert fiber_class.self_intersection == -1
    assert chern(BlowupClass.f1(5, 2)) == 13
    assert str(BlowupClass.f1(5, 2)) == '5l-2e'


def test_intersect_requires_matching_blowups():
    with pytest.raises(DomainError):
        intersect(BlowupClass.cp2(1, (1,)), BlowupClass.cp2(1))
    with pytest.raises(DomainError):
        intersect(BlowupClass.cp2(1), BlowupClass.f1(1, 0))
    assert intersect(extend(BlowupClass.cp2(1), 2), BlowupClass.cp2(2, (1, 1))) == 2


def test_proper_transform_of_5l_minus_2e():
    transformed = proper_transform_class(BlowupClass.f1(5, 2), 11, 2)
    assert transformed.exc_coeffs == (2, 2, 2, 2, 2, 1, 1)
    assert chern(transformed) == 1
    assert transformed.self_intersection == -1


def test_cremona_trace_of_perfect_class():
    result = cremona_reduce(BlowupClass.cp2(5, (2, 2, 2, 2, 2, 2, 1, 1)))
    assert result.representable
    assert result.trace == (
        (5, (2, 2, 2, 2, 2, 2, 1, 1)),
        (4, (2, 2, 2, 1, 1, 1, 1, 1)),
        (2, (1, 1, 1, 1, 1)),
        (1, (1, 1)),
        (0, (-1,)),
    )


def test_cremona_rejects_non_exceptional_classes():
    assert not cremona_reduce(BlowupClass.cp2(3, (1, 1))).representable
    assert not cremona_reduce(BlowupClass.cp2(1, (-1, 1))).representable
    assert not cremona_reduce(BlowupClass.cp2(0, (1,))).representable
    with pytest.raises(DomainError):
        cremona_reduce(BlowupClass.f1(1, 0))


def test_f1_to_cp2_puts_e_first():
    converted = f1_to_cp2(BlowupClass.f1(5, 2, (1,)))
    assert converted.base == CP2
    assert converted.base_coeffs == (5,)
    assert converted.exc_coeffs == (2, 1)
    assert chern(converted) == chern(BlowupClass.f1(5, 2, (1,)))


def test_certify_perfect():
    certificate = certify_perfect(BlowupClass.f1(5, 2), 11, 2)
    assert certificate.perfect
    payload = certificate.to_json()
    assert payload['perfect'] is True
    assert payload['chern'] == 1
    assert payload['self_intersection'] == -1
    assert not is_perfect_exceptional(BlowupClass.f1(5, 2), 13, 2)


def test_proper_transform_meets_only_the_last_divisor():
    for klass in (BlowupClass.cp2(3, (1, 2)), BlowupClass.f1(2, 1), BlowupClass.cp2(1)):
        for p, q in ((3, 2), (51, 23), (7, 12), (1, 1)):
            transformed = proper_transform_class(klass, p, q)
            products = [intersect(transformed, divisor) for divisor in chain_divisor_classes(klass, p, q)]
            assert products == [0] * (len(products) - 1) + [1]


def test_cp2_perfect_classes():
    assert cp2_perfect_classes(40) == [(2, 1, 1), (5, 1, 2), (13, 2, 5), (34, 5, 13)]


@pytest.mark.parametrize('text, base, base_coeffs, exc', [
    ('5l-2e', 'f1', (5, -2), ()),
    ('3L-e1-e2', 'cp2', (3,), (1, 1)),
    ('l-e-2e1-e2', 'f1', (1, -1), (2, 1)),
    (' 2 l - 3 e2 ', 'f1', (2, 0), (0, 3)),
    ('4l+e1', 'cp2', (4,), (-1,)),
])
def test_parse_class(text, base, base_coeffs, exc):
    klass = parse_class(text, base)
    assert klass.base_coeffs == base_coeffs
    assert klass.exc_coeffs == exc


@pytest.mark.parametrize('text, base', [('', 'f1'), ('5l 2e', 'f1'), ('3L-e', 'cp2'), ('x', 'f1'),
                                        ('l-e0', 'f1'), ('l', 'p2')])
def test_parse_class_errors(text, base):
    with pytest.raises(ParseError):
        parse_class(text, base)


def test_parse_class_accepts_base_objects():
    assert parse_class('l-e', F1) == BlowupClass.f1(1, 1)


SAMPLE_CLASSES = [BlowupClass.cp2(3, (1, 2)), BlowupClass.f1(5, 2), BlowupClass.f1(2, 1, (1,)), BlowupClass.cp2(1),
                  BlowupClass.cp2(7, (3, 0, 2))]


@pytest.mark.parametrize('klass', SAMPLE_CLASSES)
def test_proper_transform_subtracts_the_weights(klass):
    for p, q in ((3, 2), (51, 23), (7, 12), (1, 1), (13, 5)):
        transformed = proper_transform_class(klass, p, q)
        weights = transformed.exc_coeffs[klass.blowups:]
        lifted = extend(klass, transformed.blowups)
        assert lifted.self_intersection == transformed.self_intersection + sum(m * m for m in weights)
        assert chern(lifted) == chern(transformed) + sum(weights)


def test_cremona_reduction_ignores_the_order_of_coefficients():
    rng = np.random.default_rng(21)
    for _ in range(200):
        d = int(rng.integers(1, 13))
        ms = [int(m) for m in rng.integers(0, d + 1, size=int(rng.integers(1, 7)))]
        result = cremona_reduce(BlowupClass.cp2(d, ms))
        shuffled = cremona_reduce(BlowupClass.cp2(d, [int(m) for m in rng.permutation(ms)]))
        assert shuffled == result
        # each move lowers a positive degree
        assert len(result.trace) - 1 <= d * len(ms)
        assert len(result.trace) - 1 <= d


def test_perfect_classes_have_chern_number_p_plus_q():
    found = 0
    for d in range(1, 9):
        for m in range(d):
            klass = BlowupClass.f1(d, m)
            for p in range(1, 21):
                for q in range(1, p + 1):
                    if math.gcd(p, q) != 1:
                        continue
                    if is_perfect_exceptional(klass, p, q):
                        found += 1
                        assert chern(klass) == p + q
    assert found > 0
    for p, q, d in cp2_perfect_classes(200):
        assert chern(BlowupClass.cp2(d)) == p + q

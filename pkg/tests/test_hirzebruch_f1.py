import pytest

from backend.blowup_homology import chern, is_perfect_exceptional
from backend.cusp_resolution import double_points
from backend.exceptions import DomainError, NoIntegralSolution, NotSquare, RatioTooSmall
from backend.hirzebruch_f1 import (StaircaseQuadruple, apply_R, apply_S, enumerate_perf, exceeds_scope, quadruple,
                                   r_orbit_report, seed_sequence, unique_dm)

QUADRUPLES = [(1, 1, 1, 1), (2, 1, 1, 0), (4, 1, 2, 1), (5, 1, 2, 0), (11, 2, 5, 2), (23, 4, 10, 3),
              (29, 5, 13, 5), (64, 11, 28, 9), (134, 23, 59, 20), (169, 29, 74, 24)]


def test_seed_sequence():
    assert seed_sequence(15) == [1, 1, 1, 1, 2, 4, 5, 11, 23, 29, 64, 134, 169, 373, 781]
    assert seed_sequence(3) == [1, 1, 1]
    with pytest.raises(DomainError):
        seed_sequence(0)


@pytest.mark.parametrize('j, expected', list(enumerate(QUADRUPLES, start=1)))
def test_quadruples_are_certified(j, expected):
    item = quadruple(j)
    assert (item.p, item.q, item.d, item.m) == expected
    assert 3 * item.d - item.m == item.p + item.q
    assert is_perfect_exceptional(item.klass(), item.p, item.q)
    assert unique_dm(item.p, item.q) == (item.d, item.m)
    assert double_points(item.d ** 2 - item.m ** 2, 3 * item.d - item.m, item.p, item.q) == 0


def test_s_shift():
    for j in range(1, 8):
        assert apply_S(*quadruple(j).pq) == quadruple(j + 3).pq
    assert apply_S(2, 1) == (11, 2)


def test_r_symmetry():
    assert apply_R(7, 1) == (7, 1)
    assert apply_R(8, 1) == (13, 2)
    with pytest.raises(RatioTooSmall):
        apply_R(6, 1)


def test_unique_dm_failures():
    assert unique_dm(3, 1) is None
    assert unique_dm(5, 2) is None
    with pytest.raises(NoIntegralSolution):
        unique_dm(3, 1, strict=True)
    with pytest.raises(NotSquare):
        unique_dm(5, 2, strict=True)


def test_exceeds_scope():
    assert not exceeds_scope(11, 2)
    assert not exceeds_scope(5, 1)
    assert exceeds_scope(6, 1)
    assert exceeds_scope(8, 1)
    assert not exceeds_scope(1, 1)


def test_quadruple_validation():
    with pytest.raises(DomainError):
        StaircaseQuadruple(4, 2, 2, 0)
    with pytest.raises(DomainError):
        StaircaseQuadruple(5, 1, 2, 1)


def test_enumerate_perf_small():
    found = enumerate_perf(11)
    in_scope = [(item.p, item.q, item.d, item.m, item.j) for item in found if item.in_scope]
    assert in_scope == [(1, 1, 1, 1, 1), (2, 1, 1, 0, 2), (4, 1, 2, 1, 3), (5, 1, 2, 0, 4), (11, 2, 5, 2, 5)]
    outside = {(item.p, item.q) for item in found if not item.in_scope}
    assert {(6, 1), (8, 1)} <= outside
    assert all(exceeds_scope(p, q) for p, q in outside)
    ratios = [item.ratio for item in found]
    assert ratios == sorted(ratios)
    out_of_scope = next(item for item in found if item.pq == (6, 1))
    assert (out_of_scope.d, out_of_scope.m) == (3, 2)
    assert out_of_scope.to_json()['note'] == 'outside the p/q < 3+2sqrt2 scope'


def test_enumerate_perf_is_thread_independent():
    assert enumerate_perf(30, threads=1) == enumerate_perf(30, threads=3)


def test_r_orbit_report():
    report = r_orbit_report(11)
    entry = next(item for item in report if item['source'] == [8, 1])
    assert entry['image'] == [13, 2]
    assert entry['image_is_perfect']


def test_enumerate_perf_lists_each_pair_once():
    found = enumerate_perf(60)
    pairs = [item.pq for item in found]
    assert len(pairs) == len(set(pairs))


def test_enumerated_classes_have_no_double_points():
    for item in enumerate_perf(60):
        assert double_points(item.d ** 2 - item.m ** 2, 3 * item.d - item.m, item.p, item.q) == 0


def test_enumerated_classes_carry_their_cremona_certificate():
    for item in enumerate_perf(30):
        assert item.certificate is not None
        assert item.certificate.perfect
        payload = item.to_json()['certificate']
        assert payload['cremona_trace'][-1] == {'d': 0, 'm': [-1]}
        assert chern(item.klass()) == item.p + item.q


def test_recursion_quadruples_certify_on_demand():
    item = quadruple(7)
    assert item.certificate is None
    payload = item.to_json()
    assert payload['certificate']['perfect'] is True
    assert payload['certificate']['cremona_trace'][-1] == {'d': 0, 'm': [-1]}
    assert item.certificate is not None

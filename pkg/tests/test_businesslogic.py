from fractions import Fraction

import pytest

from backend.businesslogic import (Workbench, parse_orbit, parse_perturbed, parse_shape, parse_tuple,
                                   validate_positive_int, validate_sign)
from backend.exact_numbers import PerturbedRational
from backend.exceptions import DomainError, ParseError
from backend.spectrum import EllipsoidShape, LatticeTuple, ReebOrbit


@pytest.mark.parametrize('text, expected', [
    ('2,3+', EllipsoidShape.of(2, PerturbedRational(3, 1))),
    ('1,8+', EllipsoidShape.of(1, PerturbedRational(8, 1))),
    ('8,13,22', EllipsoidShape.of(8, 13, 22)),
    ('1, 1+eps, 1+eps^2', EllipsoidShape.of(1, PerturbedRational(1, 1), PerturbedRational(1, 0, 1))),
    ('7/2-,3+2*delta', EllipsoidShape.of(PerturbedRational(Fraction(7, 2), -1), PerturbedRational(3, 2))),
])
def test_parse_shape(text, expected):
    assert parse_shape(text) == expected


@pytest.mark.parametrize('text, position', [('2,x', 2), ('2,,3', 2), ('2,3*', 3), ('', 0)])
def test_parse_shape_errors(text, position):
    with pytest.raises(ParseError) as error:
        parse_shape(text)
    assert error.value.position == position


def test_parse_perturbed():
    assert parse_perturbed('6+2*eps-eps^2') == PerturbedRational(6, 2, -1)
    assert parse_perturbed('44') == PerturbedRational(44)
    with pytest.raises(ParseError):
        parse_perturbed('  ')


def test_parse_orbit_and_tuple():
    assert parse_orbit('1:3') == ReebOrbit(1, 3)
    assert parse_orbit('nu_2^4') == ReebOrbit(2, 4)
    assert parse_tuple('(5,4)') == LatticeTuple((5, 4))
    with pytest.raises(ParseError):
        parse_orbit('1-3')
    with pytest.raises(ParseError) as error:
        parse_tuple('3,a')
    assert error.value.position == 2


def test_validators():
    assert validate_sign('-') == -1
    assert validate_sign('+1') == 1
    with pytest.raises(ParseError):
        validate_sign('x')
    with pytest.raises(DomainError):
        validate_positive_int('k', 0)
    with pytest.raises(DomainError):
        validate_positive_int('k', True)


def test_workbench_spectrum_and_orbit(two_three_plus):
    rows = Workbench.spectrum(two_three_plus, 3)
    assert [row['text'] for row in rows] == ['2', '3+eps', '4']
    orbit = Workbench.orbit(two_three_plus, 2)
    assert orbit['name'] == 'nu_2^1'
    assert Workbench.delta_path(two_three_plus, 8) == [5, 4]


def test_workbench_formal_index(two_three_plus, shape_8_13_22):
    symp = Workbench.formal_index(two_three_plus, (ReebOrbit(1, 1), ReebOrbit(1, 2)), (ReebOrbit(1, 3),))
    assert symp['kind'] == 'symplectization'
    assert symp['index'] == 2
    cob = Workbench.formal_index(shape_8_13_22, negative=(ReebOrbit(3, 1),), c1=5, area=PerturbedRational(44))
    assert cob['index'] == 0
    assert cob['energy_text'] == '22'
    with pytest.raises(DomainError):
        Workbench.formal_index(two_three_plus)


def test_workbench_check_assumptions(shape_8_13_22):
    result = Workbench.check_assumptions(shape_8_13_22, 5)
    assert result['A'].holds and result['B'].holds
    assert not result['sufficient_A'] and not result['sufficient_B']
    assert result['explicit_check_agrees']


def test_workbench_hidden_constraint():
    payload = Workbench.hidden_constraint(LatticeTuple((3, 2)), [LatticeTuple((2, 1)), LatticeTuple((1, 1))])
    assert payload['status'] == 'violated'
    assert payload['witness'] == [2, 3]


def test_workbench_cusp_tools():
    assert Workbench.weights(51, 23) == [23, 23, 5, 5, 5, 5, 3, 2, 1, 1]
    assert Workbench.box(3, 2) == '113\n112\n'
    with pytest.raises(DomainError):
        Workbench.box(3, 2, 'gif')
    resolved = Workbench.resolve(3, 2, [(2, 3), (2, 7)])
    assert resolved['cf_plus'] == [1, 2]
    assert resolved['cabling'] == [[2, 3], [2, 13]]


def test_workbench_perfect_and_cremona():
    payload = Workbench.perfect('f1', '5l-2e', 11, 2)
    assert payload['perfect'] is True
    assert payload['double_points'] == 0
    trace = Workbench.cremona('cp2', '5L-2e1-2e2-2e3-2e4-2e5-2e6-e7-e8')
    assert trace['representable'] is True


def test_workbench_f1_staircase():
    quadruples, table, extras = Workbench.f1_staircase(11, recursion=3)
    assert len(quadruples) == len(table)
    assert list(table['ratio'])[:5] == ['1/1', '2/1', '4/1', '5/1', '11/2']
    assert table['j'].isna().sum() == (~table['in_scope']).sum()
    assert [item.pq for item in extras['recursion']] == [(1, 1), (2, 1), (4, 1)]


def test_workbench_staircase_and_obstruction(shape_8_13_22):
    assert list(Workbench.staircase('cp2', 40)['p']) == [2, 5, 13, 34]
    with pytest.raises(DomainError):
        Workbench.staircase('p2', 40)
    assert Workbench.obstruction(shape_8_13_22, 5, PerturbedRational(44)).limit == 2


def test_workbench_obstruction_records_the_nonvanishing_flag(shape_8_13_22):
    assert Workbench.obstruction(shape_8_13_22, 5, PerturbedRational(44)).nonvanishing_asserted
    record = Workbench.obstruction(shape_8_13_22, 5, PerturbedRational(44), nonvanishing=False)
    assert record.nonvanishing_asserted is False
    assert record.limit == 2

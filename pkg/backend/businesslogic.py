"""
Business Logic Layer for cuspcount.

Parses the textual inputs of the command line (shapes, orbits, lattice tuples,
homology classes) and combines the mathematical modules into the results each
subcommand reports. Every Workbench method returns plain data that DataAccess
can serialize.
"""
import logging
import re
from fractions import Fraction

import pandas as pd

# Local Code
from backend.backend_config import EXPLICIT_ORACLE_MAX_C1
from backend.blowup_homology import (F1, certify_perfect, chern, cremona_reduce, f1_to_cp2, intersect,
                                     parse_class)
from backend.cusp_resolution import (HORIZONTAL, VERTICAL, box_diagram, cf_plus, chain_classes, double_points,
                                     hj_expansions, puiseux_to_cabling, render_box, weight_sequence)
from backend.exact_numbers import PerturbedRational
from backend.exceptions import DomainError, ParseError
from backend.formal_curves import (CobordismCurve, HomologySurrogate, SymplectizationCurve, check_assumption_A,
                                   check_assumption_B, check_assumption_C, check_condition_B, check_condition_C,
                                   cob_energy, cob_index, degeneration_sum_bound, explicit_assumption_witnesses,
                                   hidden_constraint_admissible, sufficient_A, sufficient_B, symp_energy,
                                   symp_index, symp_is_valid)
from backend.hirzebruch_f1 import enumerate_perf, quadruple, r_orbit_report
from backend.obstructions import cp2_profile, embedding_bound, f1_profile
from backend.spectrum import (EllipsoidShape, LatticeTuple, ReebOrbit, cz_index, delta_path, orbit_at,
                              spectrum_prefix)

logger = logging.getLogger(__name__)

BOX_FORMATS = ('ascii', 'svg', 'png', 'json')
STAIRCASE_BASES = ('f1', 'cp2')
F1_COLUMNS = ['ratio', 'p', 'q', 'd', 'm', 'j', 'in_scope']


## ------------------ Validation Functions ------------------
def validate_positive_int(name, value):
    """
    Ensures value is an integer >= 1.
    """
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    return value


def validate_choice(name, value, allowed):
    if value not in allowed:
        raise DomainError(f"{name} must be one of {', '.join(allowed)}, got '{value}'")
    return value


def validate_sign(text):
    """
    Accepts '+', '-', '+1' or '-1' and returns +1 / -1.
    """
    mapping = {'+': 1, '+1': 1, '1': 1, '-': -1, '-1': -1}
    if text not in mapping:
        raise ParseError("Sign must be '+' or '-'", str(text), 0)
    return mapping[text]


## ------------------ Parsing ------------------
_RATIONAL = re.compile(r'\s*(\d+(?:/\d+)?)\s*')
_DELTA_TERM = re.compile(r'\s*([+-])\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?(?:eps|delta)(?:\s*\^\s*(\d+))?\s*')
_BARE_SIGN = re.compile(r'\s*([+-])\s*')
_ORBIT = re.compile(r'\s*(?:nu_?)?(\d+)\s*[:^]\s*(\d+)\s*')
_INTEGER = re.compile(r'\s*(\d+)\s*')


def _parse_rational(text, start, end):
    match = _RATIONAL.match(text, start, end)
    if not match:
        raise ParseError("Expected a rational like 3 or 7/2", text, start)
    try:
        return Fraction(match.group(1)), match.end()
    except ZeroDivisionError:
        raise ParseError("Zero denominator", text, match.start(1))


def _parse_value(text, start, end):
    """One shape entry: 'r', 'r+', 'r-' or r followed by terms like '+k*eps^j'."""
    constant, position = _parse_rational(text, start, end)
    coeffs = {0: constant}
    bare = _BARE_SIGN.fullmatch(text, position, end)
    if bare:
        coeffs[1] = 1 if bare.group(1) == '+' else -1
        position = end
    while position < end:
        term = _DELTA_TERM.match(text, position, end)
        if not term:
            raise ParseError("Expected '+', '-' or a term like +2*eps^2", text, position)
        sign, magnitude, power = term.groups()
        power = int(power) if power else 1
        if power < 1:
            raise ParseError("Powers of eps start at 1", text, term.start(3))
        value = Fraction(magnitude) if magnitude else Fraction(1)
        coeffs[power] = coeffs.get(power, 0) + (value if sign == '+' else -value)
        position = term.end()
    return PerturbedRational(*(coeffs.get(power, 0) for power in range(max(coeffs) + 1)))


def _split_commas(text):
    start = 0
    for index, char in enumerate(text):
        if char == ',':
            yield start, index
            start = index + 1
    yield start, len(text)


def parse_perturbed(text):
    """Parses a single value such as '44', '3+', '6+2*eps-eps^2'."""
    if not text.strip():
        raise ParseError("Empty value", text, 0)
    return _parse_value(text, 0, len(text))


def parse_shape(text):
    """
    Parses comma separated factors into an EllipsoidShape.

    Args:
        text (str): e.g. '2,3+', '1,8+', '8,13,22', '1,1+eps,1+eps^2'.

    Returns:
        EllipsoidShape

    Raises:
        ParseError: with the position of the first offending character.
        DomainError: if a factor is not positive.
    """
    factors = []
    for start, end in _split_commas(text):
        if not text[start:end].strip():
            raise ParseError("Empty shape entry", text, start)
        factors.append(_parse_value(text, start, end))
    return EllipsoidShape(tuple(factors))


def parse_orbit(text):
    """'1:3', '1^3' or 'nu_1^3' -> ReebOrbit(1, 3)."""
    match = _ORBIT.fullmatch(text)
    if not match:
        raise ParseError("Expected an orbit like 1:3 (axis:multiplicity)", text, 0)
    return ReebOrbit(int(match.group(1)), int(match.group(2)))


def parse_tuple(text):
    """'5,4' or '(5,4)' -> LatticeTuple((5, 4))."""
    body = text.strip()
    offset = len(text) - len(text.lstrip())
    if body.startswith('(') and body.endswith(')'):
        body = body[1:-1]
        offset += 1
    entries = []
    for start, end in _split_commas(body):
        match = _INTEGER.fullmatch(body, start, end)
        if not match:
            raise ParseError("Expected a positive integer", text, offset + start)
        entries.append(int(match.group(1)))
    return LatticeTuple(entries)


## ------------------ Facade ------------------
class Workbench:
    """
    Entry points used by the command line, one per subcommand.
    """

    @staticmethod
    def spectrum(shape, k):
        validate_positive_int('k', k)
        return [
            {'rank': rank, 'orbit': orbit, 'action': value, 'text': str(value)}
            for rank, (orbit, value) in enumerate(spectrum_prefix(shape, k), start=1)
        ]

    @staticmethod
    def orbit(shape, k):
        validate_positive_int('k', k)
        found = orbit_at(shape, k)
        value = shape.factor(found.axis) * found.mult
        return {'rank': k, 'orbit': found, 'name': str(found), 'action': value, 'text': str(value),
                'cz': cz_index(shape, found)}

    @staticmethod
    def delta_path(shape, k):
        validate_positive_int('k', k)
        return list(delta_path(shape, k))

    @staticmethod
    def cz(shape, orbit):
        return {'orbit': orbit, 'name': str(orbit), 'cz': cz_index(shape, orbit)}

    @staticmethod
    def formal_index(shape, positive=(), negative=(), c1=None, area=None):
        """
        Index and energy of a formal curve. With c1 the curve lives in the cobordism
        (area defaults to 0 and only affects the energy); otherwise in the symplectization.
        """
        if c1 is not None:
            if positive:
                raise DomainError("Cobordism curves have no positive ends")
            klass = HomologySurrogate(c1, area if area is not None else PerturbedRational())
            curve = CobordismCurve(shape, klass, tuple(negative))
            energy = cob_energy(curve)
            return {'kind': 'cobordism', 'index': cob_index(curve), 'energy': energy,
                    'energy_text': str(energy), 'valid': energy.sign() >= 0}
        if not positive:
            raise DomainError("A symplectization curve needs at least one positive end")
        curve = SymplectizationCurve(shape, tuple(positive), tuple(negative))
        energy = symp_energy(curve)
        return {'kind': 'symplectization', 'index': symp_index(curve), 'energy': energy,
                'energy_text': str(energy), 'valid': symp_is_valid(curve)}

    @staticmethod
    def check_assumptions(shape, c1, divisibility=1, conditions=False):
        assumption_a = check_assumption_A(shape, c1)
        assumption_b = check_assumption_B(shape, c1)
        target = orbit_at(shape, c1 - 1)
        result = {
            'c1': c1,
            'target_orbit': target,
            'A': assumption_a,
            'B': assumption_b,
            'C': check_assumption_C(HomologySurrogate(c1, PerturbedRational(), divisibility), target),
            'sufficient_A': sufficient_A(shape, c1),
            'sufficient_B': sufficient_B(shape, c1),
        }
        if c1 <= EXPLICIT_ORACLE_MAX_C1:
            explicit_a = not explicit_assumption_witnesses(shape, c1)
            explicit_b = not explicit_assumption_witnesses(shape, c1, exact_top=True)
            agrees = explicit_a == assumption_a.holds and explicit_b == assumption_b.holds
            if not agrees:
                logger.warning(f"Explicit enumeration disagrees with the knapsack for ({shape}), c1={c1}")
            result['explicit_check_agrees'] = agrees
        if conditions:
            result['condition_B'] = check_condition_B(shape, c1)
            result['condition_C'] = check_condition_C(shape, c1)
        return result

    @staticmethod
    def hidden_constraint(m, parts):
        result = hidden_constraint_admissible(m, parts)
        payload = result.to_json()
        payload['degeneration_sum_bound'] = degeneration_sum_bound(m, parts)
        return payload

    @staticmethod
    def weights(p, q):
        return list(weight_sequence(p, q).weights)

    @staticmethod
    def box(p, q, fmt='ascii', scale=None):
        validate_choice('format', fmt, BOX_FORMATS)
        if fmt == 'json':
            return box_diagram(p, q)
        return render_box(p, q, fmt, scale)

    @staticmethod
    def resolve(p, q, puiseux=None):
        chain = chain_classes(p, q)
        result = {
            'weights': list(weight_sequence(p, q).weights),
            'chain': chain,
            'horizontal_self_ints': chain.chain_self_ints(HORIZONTAL),
            'vertical_self_ints': chain.chain_self_ints(VERTICAL),
        }
        if p > q:
            hor, ver = hj_expansions(p, q)
            result['cf_plus'] = cf_plus(p, q)
            result['hj_horizontal'] = hor
            result['hj_vertical'] = ver
        if puiseux:
            result['cabling'] = [list(pair) for pair in puiseux_to_cabling(puiseux)]
        return result

    @staticmethod
    def perfect(base, class_text, p, q):
        klass = parse_class(class_text, base)
        payload = certify_perfect(klass, p, q).to_json()
        try:
            payload['double_points'] = double_points(intersect(klass, klass), chern(klass), p, q)
        except DomainError as error:
            logger.info(f"No double point count for {klass} with a ({p}, {q}) cusp: {error}")
            payload['double_points'] = None
        return payload

    @staticmethod
    def cremona(base, class_text):
        klass = parse_class(class_text, base)
        embedded = f1_to_cp2(klass) if klass.base == F1 else klass
        payload = cremona_reduce(embedded).to_json()
        payload['class'] = embedded.to_json()
        return payload

    @staticmethod
    def f1_staircase(max_p, recursion=None, r_orbits=False):
        """
        Certified F_1 perfect classes up to max_p, plus the recursion quadruples
        j = 1..recursion and the R-orbit report when asked.

        Returns:
            (quadruples, table, extras): the StaircaseQuadruple list with Cremona
            certificates, the same rows as a DataFrame, and the optional extras.
        """
        validate_positive_int('max_p', max_p)
        quadruples = enumerate_perf(max_p)
        rows = [
            {'ratio': f"{item.p}/{item.q}", 'p': item.p, 'q': item.q, 'd': item.d, 'm': item.m,
             'j': item.j, 'in_scope': item.in_scope}
            for item in quadruples
        ]
        table = pd.DataFrame(rows, columns=F1_COLUMNS).astype({'j': 'Int64'})
        extras = {}
        if recursion:
            validate_positive_int('recursion', recursion)
            extras['recursion'] = [quadruple(j) for j in range(1, recursion + 1)]
        if r_orbits:
            extras['r_orbits'] = r_orbit_report(max_p)
        return quadruples, table, extras

    @staticmethod
    def obstruction(shape, c1, area, divisibility=1, nonvanishing=True):
        return embedding_bound(HomologySurrogate(c1, area, divisibility), shape, nonvanishing)

    @staticmethod
    def staircase(base, max_p, sign=1):
        validate_choice('base', base, STAIRCASE_BASES)
        validate_positive_int('max_p', max_p)
        if base == 'f1':
            return f1_profile(max_p, sign)
        return cp2_profile(max_p, sign)


if __name__ == '__main__':
    # Local Tests
    shape = parse_shape('2,3+')
    print(Workbench.delta_path(shape, 8))
    print(Workbench.weights(51, 23))
    print(Workbench.perfect('f1', '5l-2e', 11, 2)['perfect'])

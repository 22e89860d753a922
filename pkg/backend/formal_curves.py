"""
Index and energy bookkeeping for formal curves, and the combinatorial checks built on it.

A formal curve in the symplectization of the ellipsoid boundary is a list of positive
and negative Reeb orbit ends; a formal curve in the cobordism M_a carries negative ends
plus a homology surrogate. Their Fredholm indices are

    symplectization: (n-3)(2 - k+ - k-) + sum CZ(positive) - sum CZ(negative)
    cobordism:       (n-3)(2 - k) + 2 c1(A) - sum CZ(negative)
"""
import itertools
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

# Local Code
from backend.backend_config import SEARCH_BUDGET, THREADS
from backend.exact_numbers import ZERO, PerturbedRational
from backend.exceptions import DomainError, SearchBudgetExceeded
from backend.spectrum import (EllipsoidShape, LatticeTuple, ReebOrbit, action, capacity, cz_index,
                              orbit_at, orbit_rank)

logger = logging.getLogger(__name__)


## ------------------ Domain Types ------------------
@dataclass(frozen=True)
class HomologySurrogate:
    """The numbers of a class A that the index and energy formulas use."""
    c1: int
    area: PerturbedRational
    divisibility: int = 1
    self_int: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'area', PerturbedRational.coerce(self.area))
        if isinstance(self.divisibility, bool) or not isinstance(self.divisibility, int) or self.divisibility < 1:
            raise DomainError(f"Divisibility must be a positive integer, got {self.divisibility!r}")

    def to_json(self):
        return {
            'c1': self.c1,
            'area': self.area.to_json(),
            'divisibility': self.divisibility,
            'self_int': self.self_int,
        }


def _canonical_ends(ends):
    return tuple(sorted(ends, key=lambda orbit: (orbit.axis, orbit.mult)))


def _check_axes(ambient, ends):
    for orbit in ends:
        ambient.factor(orbit.axis)


@dataclass(frozen=True)
class SymplectizationCurve:
    """Genus zero formal curve in the symplectization; ends are kept as sorted multisets."""
    ambient: EllipsoidShape
    positive_ends: tuple
    negative_ends: tuple = ()

    def __post_init__(self):
        positive = _canonical_ends(self.positive_ends)
        negative = _canonical_ends(self.negative_ends)
        if not positive:
            raise DomainError("A formal curve in the symplectization needs a positive end")
        _check_axes(self.ambient, positive + negative)
        object.__setattr__(self, 'positive_ends', positive)
        object.__setattr__(self, 'negative_ends', negative)

    @classmethod
    def trivial_cylinder(cls, ambient, orbit):
        return cls(ambient, (orbit,), (orbit,))

    @property
    def is_trivial_cylinder(self):
        return len(self.positive_ends) == 1 and self.positive_ends == self.negative_ends

    def to_json(self):
        return {
            'positive_ends': [orbit.to_json() for orbit in self.positive_ends],
            'negative_ends': [orbit.to_json() for orbit in self.negative_ends],
        }


@dataclass(frozen=True)
class CobordismCurve:
    """Genus zero formal curve in M_a with negative ends on the ellipsoid."""
    ambient: EllipsoidShape
    klass: HomologySurrogate
    negative_ends: tuple = ()

    def __post_init__(self):
        negative = _canonical_ends(self.negative_ends)
        _check_axes(self.ambient, negative)
        object.__setattr__(self, 'negative_ends', negative)

    def to_json(self):
        return {
            'class': self.klass.to_json(),
            'negative_ends': [orbit.to_json() for orbit in self.negative_ends],
        }


@dataclass(frozen=True)
class AssumptionCheck:
    """Outcome of an assumption or condition check, with a witness when it fails."""
    name: str
    holds: bool
    witness: object = None
    target_rank: Optional[int] = None

    def to_json(self):
        witness = self.witness
        if hasattr(witness, 'to_json'):
            witness = witness.to_json()
        elif witness is not None:
            witness = list(witness)
        return {
            'name': self.name,
            'status': 'holds' if self.holds else 'fails',
            'witness': witness,
            'target_rank': self.target_rank,
        }


@dataclass(frozen=True)
class HiddenConstraintResult:
    """Whether sum_i min_s a_s m^i_s >= min_s a_s m_s for every positive direction a."""
    admissible: bool
    witness: Optional[tuple] = None
    difference: Optional[Fraction] = None

    def to_json(self):
        return {
            'status': 'admissible' if self.admissible else 'violated',
            'witness': list(self.witness) if self.witness is not None else None,
            'difference': str(self.difference) if self.difference is not None else None,
        }


## ------------------ Index and Energy ------------------
def symp_energy(curve):
    """Sum of positive end actions minus sum of negative end actions."""
    a = curve.ambient
    total = ZERO
    for orbit in curve.positive_ends:
        total = total + action(a, orbit)
    for orbit in curve.negative_ends:
        total = total - action(a, orbit)
    return total


def symp_is_valid(curve):
    return symp_energy(curve).sign() >= 0


def symp_index(curve):
    a = curve.ambient
    ends = len(curve.positive_ends) + len(curve.negative_ends)
    index = (a.n - 3) * (2 - ends)
    index += sum(cz_index(a, orbit) for orbit in curve.positive_ends)
    index -= sum(cz_index(a, orbit) for orbit in curve.negative_ends)
    return index


def cob_index(curve):
    a = curve.ambient
    index = (a.n - 3) * (2 - len(curve.negative_ends)) + 2 * curve.klass.c1
    return index - sum(cz_index(a, orbit) for orbit in curve.negative_ends)


def cob_energy(curve):
    total = curve.klass.area
    for orbit in curve.negative_ends:
        total = total - action(curve.ambient, orbit)
    return total


## ------------------ Assumptions A / B / C ------------------
def _validate_c1(c1):
    if isinstance(c1, bool) or not isinstance(c1, int) or c1 < 2:
        raise DomainError(f"c1 must be an integer >= 2, got {c1!r}")


def _multi_part_maxima(values, top_weight):
    """
    Knapsack over items i = 1..len(values) of weight i + 1 and value M_i.

    Returns:
        (best_multi, pick_multi, pick_any): best_multi[w] is the largest value of a
        multiset of at least two items with total weight exactly w (None if there is
        none); the pick tables rebuild the multiset.
    """
    best_any = [None] * (top_weight + 1)
    pick_any = [None] * (top_weight + 1)
    best_any[0] = ZERO
    for weight in range(2, top_weight + 1):
        for rank in range(1, min(len(values), weight - 1) + 1):
            rest = best_any[weight - rank - 1]
            if rest is None:
                continue
            candidate = values[rank - 1] + rest
            if best_any[weight] is None or candidate > best_any[weight]:
                best_any[weight], pick_any[weight] = candidate, rank

    best_multi = [None] * (top_weight + 1)
    pick_multi = [None] * (top_weight + 1)
    for weight in range(4, top_weight + 1):
        for rank in range(1, min(len(values), weight - 3) + 1):
            rest_weight = weight - rank - 1
            rest = best_any[rest_weight]
            if rest is None or rest_weight < 2:
                continue
            candidate = values[rank - 1] + rest
            if best_multi[weight] is None or candidate > best_multi[weight]:
                best_multi[weight], pick_multi[weight] = candidate, rank
    return best_multi, pick_multi, pick_any


def _rebuild(weight, pick_multi, pick_any):
    ranks = [pick_multi[weight]]
    weight -= pick_multi[weight] + 1
    while weight:
        ranks.append(pick_any[weight])
        weight -= pick_any[weight] + 1
    return tuple(sorted(ranks))


def check_assumption_A(a, c1):
    """
    M_{i_1} + ... + M_{i_k} <= M_{i_1 + ... + i_k + k - 1} for every multiset with
    k >= 2 and i_1 + ... + i_k + k - 1 <= c1 - 1.

    Returns:
        AssumptionCheck: the failing multiset of ranks and its target rank, if any.
    """
    _validate_c1(c1)
    top = c1 - 1
    values = [capacity(a, rank) for rank in range(1, top + 1)]
    best_multi, pick_multi, pick_any = _multi_part_maxima(values, top + 1)
    for rank in range(3, top + 1):
        best = best_multi[rank + 1]
        if best is not None and best > values[rank - 1]:
            witness = _rebuild(rank + 1, pick_multi, pick_any)
            logger.info(f"Assumption A fails for ({a}), c1={c1}: ranks {witness} exceed M_{rank}")
            return AssumptionCheck('A', False, witness, rank)
    return AssumptionCheck('A', True)


def check_assumption_B(a, c1):
    """
    M_{i_1} + ... + M_{i_k} < M_{c1-1} for every multiset with k >= 2 and
    i_1 + ... + i_k + k - 1 = c1 - 1.
    """
    _validate_c1(c1)
    top = c1 - 1
    values = [capacity(a, rank) for rank in range(1, top + 1)]
    best_multi, pick_multi, pick_any = _multi_part_maxima(values, top + 1)
    best = best_multi[top + 1]
    if best is not None and best >= values[top - 1]:
        witness = _rebuild(top + 1, pick_multi, pick_any)
        logger.info(f"Assumption B fails for ({a}), c1={c1}: ranks {witness} reach M_{top}")
        return AssumptionCheck('B', False, witness, top)
    return AssumptionCheck('B', True)


def _multisets(total_weight, smallest=1, minimum_parts=0):
    """Nondecreasing rank lists whose weights rank + 1 sum to exactly total_weight."""
    if total_weight == 0:
        if minimum_parts <= 0:
            yield ()
        return
    for rank in range(smallest, total_weight):
        for rest in _multisets(total_weight - rank - 1, rank, minimum_parts - 1):
            yield (rank,) + rest


def explicit_assumption_witnesses(a, c1, exact_top=False):
    """
    Every multiset violating Assumption A (or, with exact_top, Assumption B), by
    explicit enumeration. Used to cross-check the knapsack for small c1.
    """
    _validate_c1(c1)
    top = c1 - 1
    values = [capacity(a, rank) for rank in range(1, top + 1)]
    found = []
    targets = [top] if exact_top else range(3, top + 1)
    for target in targets:
        for ranks in _multisets(target + 1, minimum_parts=2):
            total = sum((values[r - 1] for r in ranks), ZERO)
            bad = total >= values[target - 1] if exact_top else total > values[target - 1]
            if bad:
                found.append((ranks, target))
    return found


def check_assumption_C(klass, orbit):
    """True iff the divisibility of the class and the multiplicity of the orbit are coprime."""
    return math.gcd(klass.divisibility, orbit.mult) == 1


def sufficient_A(a, c1):
    """a_3, ..., a_n all exceed M^{(a_1, a_2)}_{c1-1}; vacuous for n <= 2."""
    _validate_c1(c1)
    if a.n <= 2:
        return True
    bound = capacity(EllipsoidShape(a.factors[:2]), c1 - 1)
    return all(factor > bound for factor in a.factors[2:])


def sufficient_B(a, c1):
    """
    Up to scaling a = (q, p +- delta, a_3, ..., a_n) with gcd(p, q) = 1, p + q = c1 and
    a_3, ..., a_n > pq.
    """
    _validate_c1(c1)
    if a.n < 2:
        return False
    first, second = a.factors[0], a.factors[1]
    if not first.is_rational or second.is_rational:
        return False
    ratio = second.constant / first.constant
    p, q = ratio.numerator, ratio.denominator
    if p + q != c1:
        return False
    unit = first.constant / q
    bound = unit * p * q
    return all(factor > bound for factor in a.factors[2:])


## ------------------ Symplectization enumeration ------------------
def enumerate_symp_curves(a, neg, max_index, budget=SEARCH_BUDGET, threads=THREADS):
    """
    All formal curves in the symplectization with the single negative end neg,
    energy >= 0 and index <= max_index, up to reordering of ends.

    On a tie-free spectrum CZ(o_r) = n - 1 + 2r, so with positive end ranks r_i and
    negative rank r the index is 2(k+ - 1) + 2 sum r_i - 2r. Candidates are therefore
    the rank multisets with sum (r_i + 1) <= r + max_index // 2 + 1.

    Raises:
        SearchBudgetExceeded: if more than budget multisets would be examined.
    """
    neg_rank = orbit_rank(a, neg)
    limit = neg_rank + max_index // 2 + 1
    if limit < 2:
        return []
    spectrum = {rank: (orbit_at(a, rank), capacity(a, rank)) for rank in range(1, limit)}
    neg_action = action(a, neg)
    examined = 0
    lock = threading.Lock()

    def shard(first):
        nonlocal examined
        found = []
        for total in range(first + 1, limit + 1):
            for rest in _multisets(total - first - 1, first):
                with lock:
                    examined += 1
                    if examined > budget:
                        raise SearchBudgetExceeded(
                            f"Examined more than {budget} end multisets for negative end {neg}", examined)
                ranks = (first,) + rest
                energy = sum((spectrum[r][1] for r in ranks), ZERO) - neg_action
                if energy.sign() < 0:
                    continue
                curve = SymplectizationCurve(a, tuple(spectrum[r][0] for r in ranks), (neg,))
                if symp_index(curve) <= max_index:
                    found.append(curve)
        return found

    firsts = range(1, limit)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            shards = list(pool.map(shard, firsts))
    else:
        shards = [shard(first) for first in firsts]
    curves = [curve for chunk in shards for curve in chunk]
    curves.sort(key=lambda c: [(o.axis, o.mult) for o in c.positive_ends])
    logger.info(f"Enumerated {examined} end multisets over ({a}) with negative end {neg}: {len(curves)} curves")
    return curves


def check_condition_B(a, c1):
    """Every curve with negative end o_{c1-1} has index >= 0, and index 0 forces energy 0."""
    _validate_c1(c1)
    neg = orbit_at(a, c1 - 1)
    for curve in enumerate_symp_curves(a, neg, 0):
        index = symp_index(curve)
        if index < 0 or symp_energy(curve).sign() > 0:
            return AssumptionCheck('condition B', False, curve, c1 - 1)
    return AssumptionCheck('condition B', True)


def check_condition_C(a, c1):
    """Every index 0, energy 0 curve with negative end o_{c1-1} is a trivial cylinder."""
    _validate_c1(c1)
    neg = orbit_at(a, c1 - 1)
    for curve in enumerate_symp_curves(a, neg, 0):
        if symp_index(curve) == 0 and symp_energy(curve).sign() == 0 and not curve.is_trivial_cylinder:
            return AssumptionCheck('condition C', False, curve, c1 - 1)
    return AssumptionCheck('condition C', True)


## ------------------ Tangency constraints ------------------
def constraint_index_ok(m, c1, n):
    """The index-zero condition sum m_s = c1 + n - 2 for a curve with constraint <<C^m pt>>."""
    m = LatticeTuple(m)
    if len(m) != n:
        raise DomainError(f"Constraint {tuple(m)} has length {len(m)}, expected {n}")
    return sum(m) == c1 + n - 2


def constrained_curve_index(c1, n, m):
    """Index 2 c1 + 2n - 4 - 2 sum m_s of a closed curve with constraint <<C^m pt>>."""
    m = LatticeTuple(m)
    if len(m) != n:
        raise DomainError(f"Constraint {tuple(m)} has length {len(m)}, expected {n}")
    return 2 * c1 + 2 * n - 4 - 2 * sum(m)


def _difference(direction, m, parts):
    return (sum(min(a_s * entry for a_s, entry in zip(direction, part)) for part in parts)
            - min(a_s * entry for a_s, entry in zip(direction, m)))


def _integral_direction(direction):
    scale = math.lcm(*(value.denominator for value in direction))
    values = [int(value * scale) for value in direction]
    divisor = math.gcd(*values)
    return tuple(value // divisor for value in values)


def _hidden_constraint_plane(m, parts):
    # a = (1, t); the difference is linear in t between consecutive breakpoints
    breakpoints = sorted({Fraction(part[0], part[1]) for part in parts} | {Fraction(m[0], m[1])})
    candidates = [breakpoints[0] / 2] + breakpoints + [breakpoints[-1] * 2]
    for t in candidates:
        difference = _difference((Fraction(1), t), m, parts)
        if difference < 0:
            witness = _integral_direction((Fraction(1), t))
            return HiddenConstraintResult(False, witness, _difference(witness, m, parts))
    return HiddenConstraintResult(True)


def _eliminate(constraints, variable):
    """
    One Fourier-Motzkin step. Each constraint is (coeffs, constant, strict) meaning
    sum coeffs_j x_j + constant > 0 (strict) or >= 0.
    """
    lower, upper, kept = [], [], []
    for constraint in constraints:
        coefficient = constraint[0][variable]
        if coefficient > 0:
            lower.append(constraint)
        elif coefficient < 0:
            upper.append(constraint)
        else:
            kept.append(constraint)
    seen = set(kept)
    for low_coeffs, low_const, low_strict in lower:
        for up_coeffs, up_const, up_strict in upper:
            a, b = low_coeffs[variable], -up_coeffs[variable]
            coeffs = tuple(b * x + a * y for x, y in zip(low_coeffs, up_coeffs))
            combined = (coeffs, b * low_const + a * up_const, low_strict or up_strict)
            if combined not in seen:
                seen.add(combined)
                kept.append(combined)
    return kept


def _feasible_point(constraints, size):
    """A point satisfying every constraint, or None. Variables are eliminated in order."""
    stages = [constraints]
    for variable in range(size):
        stages.append(_eliminate(stages[-1], variable))
    for coeffs, constant, strict in stages[-1]:
        if constant < 0 or (strict and constant == 0):
            return None

    point = [Fraction(0)] * size
    for variable in reversed(range(size)):
        # feasibility of the later stage makes [low, high] nonempty, and open if any side is strict
        low, high = None, None
        for coeffs, constant, _ in stages[variable]:
            coefficient = coeffs[variable]
            if coefficient == 0:
                continue
            rest = constant + sum(c * point[j] for j, c in enumerate(coeffs) if j > variable)
            bound = -rest / coefficient
            if coefficient > 0 and (low is None or bound > low):
                low = bound
            elif coefficient < 0 and (high is None or bound < high):
                high = bound
        if low is not None and high is not None:
            point[variable] = low if low == high else (low + high) / 2
        elif low is not None:
            point[variable] = low + 1
        elif high is not None:
            point[variable] = high - 1
    return point


def _hidden_constraint_cones(m, parts):
    n = len(m)
    for assignment in itertools.product(range(n), repeat=len(parts) + 1):
        constraints = []
        for s in range(n):
            # a_s >= 1 (the inequality is homogeneous, so a > 0 rescales to this)
            coeffs = tuple(Fraction(int(j == s)) for j in range(n))
            constraints.append((coeffs, Fraction(-1), False))
        tuples = [m] + list(parts)
        for chosen, vector in zip(assignment, tuples):
            for t in range(n):
                if t == chosen:
                    continue
                # a_t v_t - a_chosen v_chosen >= 0
                coeffs = [Fraction(0)] * n
                coeffs[t] += vector[t]
                coeffs[chosen] -= vector[chosen]
                constraints.append((tuple(coeffs), Fraction(0), False))
        # a_{chosen_0} m_{chosen_0} - sum_i a_{chosen_i} m^i_{chosen_i} > 0
        coeffs = [Fraction(0)] * n
        coeffs[assignment[0]] += m[assignment[0]]
        for chosen, part in zip(assignment[1:], parts):
            coeffs[chosen] -= part[chosen]
        constraints.append((tuple(coeffs), Fraction(0), True))
        point = _feasible_point(constraints, n)
        if point is not None:
            witness = _integral_direction(point)
            logger.debug(f"Hidden constraint cone {assignment} contains {witness}")
            return HiddenConstraintResult(False, witness, _difference(witness, m, parts))
    return HiddenConstraintResult(True)


def hidden_constraint_admissible(m, parts):
    """
    Decides whether sum_i min_s a_s m^i_s >= min_s a_s m_s for every a in R^n_{>0}.

    For n = 2 the difference is piecewise linear along a = (1, t) and is checked at
    every breakpoint and on both unbounded pieces. For n > 2 every argmin assignment
    defines a polyhedral cone, and each cone is tested for a point with negative
    difference by exact Fourier-Motzkin elimination.

    Returns:
        HiddenConstraintResult: admissible, or violated with an integral witness direction.
    """
    m = LatticeTuple(m)
    parts = [LatticeTuple(part) for part in parts]
    if not parts:
        raise DomainError("At least one part is required")
    for part in parts:
        if len(part) != len(m):
            raise DomainError(f"Part {tuple(part)} has length {len(part)}, expected {len(m)}")
    if len(m) == 1:
        difference = sum(part[0] for part in parts) - m[0]
        if difference < 0:
            return HiddenConstraintResult(False, (1,), Fraction(difference))
        return HiddenConstraintResult(True)
    if len(m) == 2:
        return _hidden_constraint_plane(m, parts)
    return _hidden_constraint_cones(m, parts)


def degeneration_sum_bound(m, parts, gcd_coprime=True):
    """
    For n = 2, at least two parts and an admissible degeneration, checks
    sum (p_i + q_i) >= p + q + 1. When gcd_coprime is set the check only applies to
    coprime m. Returns True whenever the hypotheses do not apply.
    """
    m = LatticeTuple(m)
    if len(m) != 2 or len(parts) < 2:
        return True
    if gcd_coprime and math.gcd(m[0], m[1]) != 1:
        return True
    if not hidden_constraint_admissible(m, parts).admissible:
        return True
    return sum(sum(part) for part in parts) >= sum(m) + 1


if __name__ == '__main__':
    # Local Tests
    from backend.exact_numbers import PerturbedRational as PR
    shape = EllipsoidShape.of(8, 13, 22)
    print(check_assumption_A(shape, 5), check_assumption_B(shape, 5))
    print(hidden_constraint_admissible((3, 2), [(2, 1), (1, 1)]))
    print(enumerate_symp_curves(EllipsoidShape.of(2, PR(3, 1)), ReebOrbit(1, 1), 0))

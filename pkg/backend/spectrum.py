"""
Reeb orbit combinatorics on the boundary of an ellipsoid E(a).

The simple orbits nu_1, ..., nu_n lie on the coordinate axes; the orbit nu_i^m has
action m * a_i. The action spectrum M^a_k is the kth smallest of all such actions,
and o^a_k is the orbit realizing it.
"""
import functools
import heapq
import logging
import threading
from dataclasses import dataclass

# Local Code
from backend.exact_numbers import PerturbedRational, as_fraction, floor_quotient
from backend.exceptions import AmbiguousMaximizer, AmbiguousMinimizer, DomainError, TieInSpectrum

logger = logging.getLogger(__name__)


## ------------------ Domain Types ------------------
@dataclass(frozen=True)
class ReebOrbit:
    """The iterate nu_axis^mult. Axes are numbered from 1."""
    axis: int
    mult: int

    def __post_init__(self):
        if not isinstance(self.axis, int) or self.axis < 1:
            raise DomainError(f"Orbit axis must be a positive integer, got {self.axis!r}")
        if not isinstance(self.mult, int) or self.mult < 1:
            raise DomainError(f"Orbit multiplicity must be a positive integer, got {self.mult!r}")

    def __str__(self):
        return f"nu_{self.axis}^{self.mult}"

    def to_json(self):
        return {'axis': self.axis, 'mult': self.mult}


@dataclass(frozen=True)
class EllipsoidShape:
    """Area factors a = (a_1, ..., a_n), each a positive PerturbedRational."""
    factors: tuple

    def __post_init__(self):
        factors = tuple(PerturbedRational.coerce(f) for f in self.factors)
        if not factors:
            raise DomainError("An ellipsoid shape needs at least one factor")
        for index, factor in enumerate(factors, start=1):
            if factor.sign() <= 0:
                raise DomainError(f"Factor a_{index} must be positive, got {factor}")
        object.__setattr__(self, 'factors', factors)

    @classmethod
    def of(cls, *factors):
        return cls(tuple(factors))

    @property
    def n(self):
        return len(self.factors)

    def factor(self, axis):
        if not 1 <= axis <= self.n:
            raise DomainError(f"Axis {axis} out of range 1..{self.n}")
        return self.factors[axis - 1]

    def __str__(self):
        return ','.join(str(f) for f in self.factors)

    def to_json(self):
        return {'factors': [f.to_json() for f in self.factors]}


class LatticeTuple(tuple):
    """A tuple (i_1, ..., i_n) of integers >= 1."""

    def __new__(cls, entries):
        entries = tuple(entries)
        if not entries:
            raise DomainError("A lattice tuple needs at least one entry")
        for value in entries:
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise DomainError(f"Lattice tuple entries must be integers >= 1, got {entries}")
        return super().__new__(cls, entries)

    def to_json(self):
        return list(self)


## ------------------ Spectrum ------------------
class ActionSpectrum:
    """
    Lazy n-way merge of the sequences a_s, 2a_s, 3a_s, ... keyed by delta order.
    Entries are produced on demand and kept; the first coincidence is remembered so
    that every query at or beyond it raises TieInSpectrum.
    """

    def __init__(self, shape):
        self.shape = shape
        self._lock = threading.Lock()
        self._entries = []
        self._first_tie = None
        self._queue = [(factor, axis, 1) for axis, factor in enumerate(shape.factors, start=1)]
        heapq.heapify(self._queue)

    def _extend(self, count):
        while len(self._entries) < count:
            value, axis, mult = heapq.heappop(self._queue)
            heapq.heappush(self._queue, (value + self.shape.factors[axis - 1], axis, mult + 1))
            if self._entries and self._first_tie is None and self._entries[-1][0] == value:
                self._first_tie = len(self._entries)
                logger.debug(f"Spectrum of ({self.shape}) ties at ranks {self._first_tie} and {self._first_tie + 1}")
            self._entries.append((value, axis, mult))

    def entry(self, k, include_next=True):
        """
        Returns (M^a_k, axis, mult), checking ranks 1..k+1 for coincidences, or only
        ranks 1..k when include_next is False (M^a_k is still defined if o_k ties o_{k+1}).
        """
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise DomainError(f"Spectrum rank must be a positive integer, got {k!r}")
        with self._lock:
            self._extend(k + 1)
            first_tie = self._first_tie
            value, axis, mult = self._entries[k - 1]
        last_checked = k if include_next else k - 1
        if first_tie is not None and first_tie <= last_checked:
            tied = self._entries[first_tie - 1][0]
            raise TieInSpectrum(
                f"Action spectrum of ({self.shape}) has equal entries {tied} at ranks "
                f"{first_tie} and {first_tie + 1}; perturb the shape by delta"
            )
        return value, axis, mult


@functools.lru_cache(maxsize=512)
def spectrum_of(shape):
    return ActionSpectrum(shape)


## ------------------ Operations ------------------
def action(a, orbit):
    """Action mult * a_axis of an orbit."""
    return a.factor(orbit.axis) * orbit.mult


def capacity(a, k):
    """M^a_k, the kth smallest element of {i * a_j}. A tie of ranks k and k + 1 is allowed."""
    value, _, _ = spectrum_of(a).entry(k, include_next=False)
    return value


def orbit_at(a, k):
    """o^a_k, the orbit whose action is M^a_k."""
    _, axis, mult = spectrum_of(a).entry(k)
    return ReebOrbit(axis, mult)


def spectrum_prefix(a, k):
    """
    The first k orbits with their actions, in increasing order.

    Returns:
        list: (ReebOrbit, PerturbedRational) pairs for ranks 1..k.
    """
    spectrum = spectrum_of(a)
    spectrum.entry(k)
    return [(ReebOrbit(axis, mult), value) for value, axis, mult in (spectrum.entry(r) for r in range(1, k + 1))]


def orbit_rank(a, orbit):
    """
    The rank k with orbit_at(a, k) == orbit, computed by counting smaller actions.

    Raises:
        TieInSpectrum: if another orbit has the same action.
    """
    target = action(a, orbit)
    rank = orbit.mult
    for axis, factor in enumerate(a.factors, start=1):
        if axis == orbit.axis:
            continue
        count = floor_quotient(target, factor)
        if count >= 1 and factor * count == target:
            raise TieInSpectrum(f"{orbit} and nu_{axis}^{count} have the same action {target}")
        rank += count
    return rank


def scale(a, factor):
    """The shape factor * a for a positive rational factor."""
    factor = as_fraction(factor)
    if factor <= 0:
        raise DomainError(f"Scaling factor must be positive, got {factor}")
    return EllipsoidShape(tuple(f * factor for f in a.factors))


def _least_multiple(factor, bound):
    # smallest i >= 1 with factor * i >= bound
    count = floor_quotient(bound, factor)
    if factor * count < bound:
        count += 1
    return max(count, 1)


def _water_fill_value(factors, total):
    # value of one feasible tuple: repeatedly raise the coordinate with the smallest a_s i_s
    entries = [1] * len(factors)
    for _ in range(total - len(factors)):
        values = [f * i for f, i in zip(factors, entries)]
        entries[values.index(min(values))] += 1
    return min(f * i for f, i in zip(factors, entries))


def delta_path(a, k):
    """
    Delta^a_k: the tuple with entries summing to n + k - 1 that maximizes min_s a_s i_s.

    Exhaustive branch-and-bound over compositions. A branch is cut once its partial
    minimum falls below the incumbent, or once the remaining coordinates cannot all
    reach the incumbent with the budget left.

    Raises:
        AmbiguousMaximizer: if two tuples reach the same maximum.
    """
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise DomainError(f"Path index must be a positive integer, got {k!r}")
    factors = a.factors
    n = a.n
    total = n + k - 1
    if n == 1:
        return LatticeTuple((k,))

    # incumbent from a feasible tuple; ties with it are still explored
    best_value = _water_fill_value(factors, total)
    best_tuples = []

    def search(index, remaining, partial_min, prefix):
        nonlocal best_value, best_tuples
        factor = factors[index]
        if index == n - 1:
            value = factor * remaining
            if partial_min is not None and partial_min < value:
                value = partial_min
            candidate = prefix + (remaining,)
            if value > best_value:
                best_value, best_tuples = value, [candidate]
            elif value == best_value:
                best_tuples.append(candidate)
            return
        need = sum(_least_multiple(factors[t], best_value) for t in range(index + 1, n))
        for i in range(remaining - need, 0, -1):
            value = factor * i
            current = value if partial_min is None or value < partial_min else partial_min
            if current < best_value:
                break
            search(index + 1, remaining - i, current, prefix + (i,))

    search(0, total, None, ())
    if len(best_tuples) > 1:
        raise AmbiguousMaximizer(
            f"Tuples {best_tuples} all maximize min a_s i_s = {best_value} for ({a}), k={k}"
        )
    return LatticeTuple(best_tuples[0])


def orbit_from_negative_tuple(a, v):
    """
    o^a_{-v} = nu_i^{v_i} where i minimizes a_i v_i.

    Raises:
        AmbiguousMinimizer: if the minimum is attained on two axes.
    """
    v = LatticeTuple(v)
    if len(v) != a.n:
        raise DomainError(f"Tuple {tuple(v)} has length {len(v)}, shape has {a.n} factors")
    values = [factor * entry for factor, entry in zip(a.factors, v)]
    smallest = min(values)
    axes = [axis for axis, value in enumerate(values, start=1) if value == smallest]
    if len(axes) > 1:
        raise AmbiguousMinimizer(f"Axes {axes} all attain min a_i v_i = {smallest} for v={tuple(v)}")
    axis = axes[0]
    return ReebOrbit(axis, v[axis - 1])


def cz_index(a, orbit):
    """
    Conley-Zehnder index (n-1) + 2j + 2 * sum_{s != i} floor(j a_i / a_s) of nu_i^j.
    Uses exact sign analysis, so shapes with delta^2 terms are accepted.
    """
    n = a.n
    target = action(a, orbit)
    total = (n - 1) + 2 * orbit.mult
    for axis, factor in enumerate(a.factors, start=1):
        if axis != orbit.axis:
            total += 2 * floor_quotient(target, factor)
    return total


if __name__ == '__main__':
    # Local Tests
    shape = EllipsoidShape.of(2, PerturbedRational(3, 1))
    print([tuple(delta_path(shape, k)) for k in range(1, 9)])
    print([str(capacity(shape, k)) for k in range(1, 7)])

"""
Exact ordered arithmetic over Q[delta], where delta is a positive infinitesimal.

A PerturbedRational c_0 + c_1*delta + ... + c_d*delta^d is compared lexicographically
on its coefficients, so delta is positive and smaller than every positive rational.
Values like (p/q)^+ = p/q + delta and (p/q)^- = p/q - delta are written

    PerturbedRational(Fraction(p, q), 1)
    PerturbedRational(Fraction(p, q), -1)

Division is not closed on Q[delta]. floor_ratio / floor_quotient give the floor of a
quotient for all sufficiently small delta, and PerturbedQuotient keeps an exact ratio.
"""
import enum
import functools
import logging
from fractions import Fraction
from numbers import Rational

# Local Code
from backend.exceptions import DomainError, UnsupportedDegree

logger = logging.getLogger(__name__)


def as_fraction(value):
    """
    Converts an int, Fraction or 'num/den' string to a Fraction.
    Floats are rejected so that no binary rounding can enter a computation.

    Args:
        value (int | Fraction | str): The value to convert.

    Returns:
        Fraction: The exact value.
    """
    if isinstance(value, bool):
        raise DomainError(f"Booleans are not rationals: {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"Invalid rational literal: '{value}'")
    raise DomainError(f"Expected an exact rational, got {type(value).__name__}: {value!r}")


def _fraction_text(value):
    return str(value)


class Ordering(enum.Enum):
    LESS = 'less'
    EQUAL = 'equal'
    GREATER = 'greater'


@functools.total_ordering
class PerturbedRational:
    """
    Immutable value c_0 + c_1*delta + ... + c_d*delta^d with exact rational coefficients.
    Trailing zero coefficients are trimmed, so equal values have equal coefficient tuples.
    """
    __slots__ = ('_coeffs',)

    def __init__(self, *coeffs):
        values = [as_fraction(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, '_coeffs', tuple(values))

    def __setattr__(self, name, value):
        raise AttributeError('PerturbedRational is immutable')

    @classmethod
    def coerce(cls, value):
        if isinstance(value, PerturbedRational):
            return value
        return cls(value)

    # --- Structure ---
    @property
    def coeffs(self):
        return self._coeffs

    @property
    def degree(self):
        return max(len(self._coeffs) - 1, 0)

    @property
    def constant(self):
        return self._coeffs[0] if self._coeffs else Fraction(0)

    @property
    def is_rational(self):
        return len(self._coeffs) <= 1

    @property
    def valuation(self):
        """Index of the first nonzero coefficient (None for zero)."""
        for index, c in enumerate(self._coeffs):
            if c != 0:
                return index
        return None

    def coefficient(self, power):
        return self._coeffs[power] if 0 <= power < len(self._coeffs) else Fraction(0)

    def sign(self):
        """-1, 0 or 1 for all sufficiently small delta > 0."""
        for c in self._coeffs:
            if c != 0:
                return 1 if c > 0 else -1
        return 0

    def evaluate(self, t):
        """Exact value with delta replaced by the rational t."""
        t = as_fraction(t)
        total = Fraction(0)
        for c in reversed(self._coeffs):
            total = total * t + c
        return total

    def shift_down(self, power):
        """Divides by delta^power; the low coefficients must vanish."""
        if any(c != 0 for c in self._coeffs[:power]):
            raise DomainError(f"{self} is not divisible by delta^{power}")
        return PerturbedRational(*self._coeffs[power:])

    # --- Arithmetic ---
    def __add__(self, other):
        try:
            other = PerturbedRational.coerce(other)
        except DomainError:
            return NotImplemented
        size = max(len(self._coeffs), len(other._coeffs))
        return PerturbedRational(*(self.coefficient(i) + other.coefficient(i) for i in range(size)))

    __radd__ = __add__

    def __neg__(self):
        return PerturbedRational(*(-c for c in self._coeffs))

    def __sub__(self, other):
        try:
            other = PerturbedRational.coerce(other)
        except DomainError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        try:
            other = PerturbedRational.coerce(other)
        except DomainError:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        try:
            other = PerturbedRational.coerce(other)
        except DomainError:
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return PerturbedRational()
        product = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                product[i + j] += a * b
        return PerturbedRational(*product)

    __rmul__ = __mul__

    # --- Comparison ---
    def __eq__(self, other):
        try:
            other = PerturbedRational.coerce(other)
        except DomainError:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __lt__(self, other):
        try:
            other = PerturbedRational.coerce(other)
        except DomainError:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self.is_rational:
            return hash(self.constant)
        return hash(self._coeffs)

    # --- Text ---
    def __repr__(self):
        args = ', '.join(repr(_fraction_text(c)) for c in self._coeffs)
        return f"PerturbedRational({args})"

    def __str__(self):
        if not self._coeffs:
            return '0'
        parts = []
        for power, c in enumerate(self._coeffs):
            if c == 0:
                continue
            magnitude = abs(c)
            if power == 0:
                term = _fraction_text(magnitude)
            else:
                symbol = 'eps' if power == 1 else f"eps^{power}"
                term = symbol if magnitude == 1 else f"{_fraction_text(magnitude)}*{symbol}"
            sign = '-' if c < 0 else '+'
            if not parts:
                parts.append(('-' if c < 0 else '') + term)
            else:
                parts.append(sign + term)
        return ''.join(parts)

    def to_json(self):
        return {'coeffs': [_fraction_text(c) for c in self._coeffs] or ['0']}

    @classmethod
    def from_json(cls, payload):
        if not isinstance(payload, dict) or 'coeffs' not in payload:
            raise DomainError(f"Expected an object with 'coeffs', got {payload!r}")
        return cls(*payload['coeffs'])


DELTA = PerturbedRational(0, 1)
ZERO = PerturbedRational()
ONE = PerturbedRational(1)


## ------------------ Module Operations ------------------
def add(x, y):
    return PerturbedRational.coerce(x) + PerturbedRational.coerce(y)


def mul(x, y):
    return PerturbedRational.coerce(x) * PerturbedRational.coerce(y)


def compare(x, y):
    """
    Lexicographic comparison of two perturbed values.

    Returns:
        Ordering: LESS, EQUAL or GREATER.
    """
    sign = (PerturbedRational.coerce(x) - PerturbedRational.coerce(y)).sign()
    if sign < 0:
        return Ordering.LESS
    if sign > 0:
        return Ordering.GREATER
    return Ordering.EQUAL


def floor_quotient(x, y):
    """
    Floor of x/y for all sufficiently small delta > 0, for operands of any degree.

    Both operands are divided by the largest power of delta dividing y, then
    c = x(0)/y(0). A non-integral c gives floor(c); an integral c = N gives N when
    x - N*y >= 0 and N - 1 otherwise.

    Raises:
        DomainError: if y <= 0, or if x/y is unbounded as delta -> 0.
    """
    x = PerturbedRational.coerce(x)
    y = PerturbedRational.coerce(y)
    if y.sign() <= 0:
        raise DomainError(f"floor of a quotient needs a positive divisor, got {y}")
    shift = y.valuation
    if shift:
        x_valuation = x.valuation
        if x_valuation is not None and x_valuation < shift:
            raise DomainError(f"{x} / {y} is unbounded as delta -> 0")
        x = x.shift_down(shift) if x_valuation is not None else x
        y = y.shift_down(shift)
    c = x.constant / y.constant
    if c.denominator != 1:
        return c.numerator // c.denominator
    whole = c.numerator
    return whole if (x - y * whole).sign() >= 0 else whole - 1


def floor_ratio(x, y):
    """
    Floor of x/y for all sufficiently small delta > 0.

    Args:
        x (PerturbedRational): Numerator, delta-degree at most 1.
        y (PerturbedRational): Positive denominator, delta-degree at most 1.

    Returns:
        int: The eventual value of floor(x/y).

    Raises:
        UnsupportedDegree: if either operand has delta-degree above 1.
        DomainError: if y <= 0.
    """
    x = PerturbedRational.coerce(x)
    y = PerturbedRational.coerce(y)
    if x.degree > 1 or y.degree > 1:
        raise UnsupportedDegree(f"floor_ratio supports delta-degree <= 1, got {x} and {y}")
    return floor_quotient(x, y)


@functools.total_ordering
class PerturbedQuotient:
    """
    Exact ratio numerator/denominator of perturbed values with a positive denominator.
    Rational denominators are folded into the numerator.
    """
    __slots__ = ('numerator', 'denominator')

    def __init__(self, numerator, denominator=1):
        numerator = PerturbedRational.coerce(numerator)
        denominator = PerturbedRational.coerce(denominator)
        if denominator.sign() <= 0:
            raise DomainError(f"Quotient denominator must be positive, got {denominator}")
        if denominator.is_rational:
            numerator = numerator * (1 / denominator.constant)
            denominator = ONE
        object.__setattr__(self, 'numerator', numerator)
        object.__setattr__(self, 'denominator', denominator)

    def __setattr__(self, name, value):
        raise AttributeError('PerturbedQuotient is immutable')

    @classmethod
    def coerce(cls, value):
        if isinstance(value, PerturbedQuotient):
            return value
        return cls(value)

    @property
    def is_polynomial(self):
        return self.denominator == ONE

    def limit(self):
        """The value as delta -> 0."""
        top = self.numerator.valuation
        if top is None:
            return Fraction(0)
        bottom = self.denominator.valuation
        if top > bottom:
            return Fraction(0)
        if top < bottom:
            raise DomainError(f"{self} is unbounded as delta -> 0")
        return self.numerator.coefficient(top) / self.denominator.coefficient(bottom)

    def __truediv__(self, scalar):
        scalar = as_fraction(scalar)
        if scalar <= 0:
            raise DomainError(f"Can only divide a quotient by a positive rational, got {scalar}")
        return PerturbedQuotient(self.numerator, self.denominator * scalar)

    def __mul__(self, other):
        if isinstance(other, PerturbedQuotient):
            result = PerturbedQuotient(self.numerator * other.numerator, self.denominator * other.denominator)
        else:
            try:
                other = PerturbedRational.coerce(other)
            except DomainError:
                return NotImplemented
            if other == self.denominator:
                return self.numerator
            result = PerturbedQuotient(self.numerator * other, self.denominator)
        return result.numerator if result.is_polynomial else result

    __rmul__ = __mul__

    def _cross(self, other):
        return self.numerator * other.denominator - other.numerator * self.denominator

    def __eq__(self, other):
        try:
            other = PerturbedQuotient.coerce(other)
        except DomainError:
            return NotImplemented
        return self._cross(other).sign() == 0

    def __lt__(self, other):
        try:
            other = PerturbedQuotient.coerce(other)
        except DomainError:
            return NotImplemented
        return self._cross(other).sign() < 0

    def __hash__(self):
        top = self.numerator.valuation
        if top is None:
            return hash(0)
        bottom = self.denominator.valuation
        lead = self.numerator.coefficient(top) / self.denominator.coefficient(bottom)
        return hash((top - bottom, lead))

    def __repr__(self):
        return f"PerturbedQuotient({self.numerator!r}, {self.denominator!r})"

    def __str__(self):
        if self.is_polynomial:
            return str(self.numerator)
        return f"({self.numerator})/({self.denominator})"

    def to_json(self):
        payload = {
            'numerator': self.numerator.to_json(),
            'denominator': self.denominator.to_json(),
        }
        try:
            payload['limit'] = _fraction_text(self.limit())
        except DomainError:
            payload['limit'] = None
        return payload


if __name__ == '__main__':
    # Local Tests
    print(floor_ratio(6, PerturbedRational(3, 1)))   # 1
    print(floor_ratio(6, PerturbedRational(3, -1)))  # 2
    print(PerturbedRational(1, 1) * PerturbedRational(1, -1))  # 1-eps^2

"""
Second homology of iterated blowups of CP^2 and of F_1.

H_2(Bl^L M) = H_2(M) + Z<e_1, ..., e_L> with e_i.e_i = -1 and every other product
with an e_i zero. A class is stored as B - k_1 e_1 - ... - k_L e_L, so the
exceptional sphere e_i itself has k_i = -1 and c_1(A) = c_1(B) - k_1 - ... - k_L.
"""
import logging
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np
from sympy import integer_nthroot

# Local Code
from backend.cusp_resolution import chain_classes, validate_pair, weight_sequence
from backend.exceptions import DomainError, ParseError

logger = logging.getLogger(__name__)


## ------------------ Domain Types ------------------
@dataclass(frozen=True)
class SurfaceBase:
    kind: str
    labels: tuple
    form: tuple
    chern: tuple

    def pair(self, x, y):
        return int(np.array(x, dtype=np.int64) @ np.array(self.form, dtype=np.int64) @ np.array(y, dtype=np.int64))

    def c1(self, coeffs):
        return int(np.dot(np.array(self.chern, dtype=np.int64), np.array(coeffs, dtype=np.int64)))


CP2 = SurfaceBase('CP2', ('L',), ((1,),), (3,))
# basis (l, e): l.l = 1, e.e = -1, c1(d l - m e) = 3d - m
F1 = SurfaceBase('F1', ('l', 'e'), ((1, 0), (0, -1)), (3, 1))
BASES = {'cp2': CP2, 'f1': F1}


@dataclass(frozen=True)
class BlowupClass:
    base: SurfaceBase
    base_coeffs: tuple
    exc_coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'base_coeffs', tuple(int(c) for c in self.base_coeffs))
        object.__setattr__(self, 'exc_coeffs', tuple(int(k) for k in self.exc_coeffs))
        if len(self.base_coeffs) != len(self.base.labels):
            raise DomainError(f"{self.base.kind} classes need {len(self.base.labels)} base coefficients, "
                              f"got {self.base_coeffs}")

    @classmethod
    def cp2(cls, d, exc=()):
        """d L - k_1 e_1 - ... - k_L e_L"""
        return cls(CP2, (d,), tuple(exc))

    @classmethod
    def f1(cls, d, m, exc=()):
        """d l - m e - k_1 e_1 - ... - k_L e_L"""
        return cls(F1, (d, -m), tuple(exc))

    @classmethod
    def exceptional(cls, base, index, size):
        """The class e_index (1-based) in a blowup with size exceptional directions."""
        exc = [0] * size
        exc[index - 1] = -1
        return cls(base, (0,) * len(base.labels), tuple(exc))

    @property
    def blowups(self):
        return len(self.exc_coeffs)

    @property
    def self_intersection(self):
        return intersect(self, self)

    def __str__(self):
        terms = []
        for label, c in zip(self.base.labels, self.base_coeffs):
            terms.append((c, label))
        for index, k in enumerate(self.exc_coeffs, start=1):
            terms.append((-k, f"e{index}"))
        text = ''
        for c, label in terms:
            if c == 0:
                continue
            magnitude = '' if abs(c) == 1 else str(abs(c))
            sign = '-' if c < 0 else ('+' if text else '')
            text += f"{sign}{magnitude}{label}"
        return text or '0'

    def to_json(self):
        return {
            'base': self.base.kind,
            'base_coeffs': list(self.base_coeffs),
            'exc_coeffs': list(self.exc_coeffs),
            'text': str(self),
        }


@dataclass(frozen=True)
class CremonaResult:
    representable: bool
    trace: tuple
    reason: Optional[str] = None

    def to_json(self):
        return {
            'representable': self.representable,
            'trace': [{'d': d, 'm': list(ms)} for d, ms in self.trace],
            'reason': self.reason,
        }


@dataclass(frozen=True)
class PerfectCertificate:
    klass: BlowupClass
    p: int
    q: int
    proper_transform: BlowupClass
    numerically_exceptional: bool
    cremona: Optional[CremonaResult]

    @property
    def perfect(self):
        return self.numerically_exceptional and self.cremona is not None and self.cremona.representable

    def to_json(self):
        return {
            'perfect': self.perfect,
            'class': self.klass.to_json(),
            'cusp': [self.p, self.q],
            'proper_transform': self.proper_transform.to_json(),
            'chern': chern(self.proper_transform),
            'self_intersection': self.proper_transform.self_intersection,
            'numerically_exceptional': self.numerically_exceptional,
            'cremona_trace': self.cremona.to_json()['trace'] if self.cremona else [],
            'reason': self.cremona.reason if self.cremona else 'not numerically exceptional',
        }


## ------------------ Operations ------------------
def intersect(a, b):
    if a.base != b.base:
        raise DomainError(f"Cannot intersect a {a.base.kind} class with a {b.base.kind} class")
    if a.blowups != b.blowups:
        raise DomainError(f"Classes live on blowups at {a.blowups} and {b.blowups} points")
    exceptional = int(np.dot(np.array(a.exc_coeffs, dtype=np.int64), np.array(b.exc_coeffs, dtype=np.int64))) \
        if a.blowups else 0
    return a.base.pair(a.base_coeffs, b.base_coeffs) - exceptional


def chern(a):
    return a.base.c1(a.base_coeffs) - sum(a.exc_coeffs)


def extend(a, size):
    """The same class viewed on a blowup with size exceptional directions."""
    if size < a.blowups:
        raise DomainError(f"Cannot shrink a class on {a.blowups} blowups to {size}")
    return BlowupClass(a.base, a.base_coeffs, a.exc_coeffs + (0,) * (size - a.blowups))


def proper_transform_class(a, p, q):
    """A - m_1 e_{L'+1} - ... - m_L e_{L'+L} for W(p, q) = (m_1, ..., m_L)."""
    weights = weight_sequence(p, q).weights
    return BlowupClass(a.base, a.base_coeffs, a.exc_coeffs + weights)


def chain_divisor_classes(a, p, q):
    """
    The classes [F_1], ..., [F_L] of the (p, q) resolution chain, placed in the blowup
    that carries proper_transform_class(a, p, q).
    """
    chain = chain_classes(p, q)
    offset = a.blowups
    zero = (0,) * len(a.base.labels)
    return [BlowupClass(a.base, zero, (0,) * offset + tuple(-c for c in vector)) for vector in chain.classes]


def is_numerically_exceptional(a):
    return chern(a) == 1 and a.self_intersection == -1


def f1_to_cp2(a):
    """d l - m e - sum k_i e_i  ->  d L - m e_0 - sum k_i e_i, with e_0 placed first."""
    if a.base != F1:
        raise DomainError(f"Expected an F1 class, got a {a.base.kind} class")
    d, e_coeff = a.base_coeffs
    return BlowupClass(CP2, (d,), (-e_coeff,) + a.exc_coeffs)


def cremona_reduce(a):
    """
    Reduces a CP^2 blowup class (d; m_1, ..., m_L) by elementary Cremona moves.

    Each step sorts the m_i descending and drops zeros. The class e_i (d = 0 and a
    single coefficient -1) is representable. Otherwise, with d > 0, no negative m_i
    and m_1 + m_2 + m_3 > d, the move d' = 2d - m_1 - m_2 - m_3, m_i' = d - m_j - m_k
    is applied to the three largest (zero padded). Every other state stops the
    reduction as not representable; d strictly decreases, so the loop terminates.
    """
    if a.base != CP2:
        raise DomainError(f"Cremona reduction needs a CP2 class, got {a.base.kind} (convert with f1_to_cp2)")
    d = a.base_coeffs[0]
    ms = list(a.exc_coeffs)
    trace = []
    while True:
        ms = sorted((m for m in ms if m != 0), reverse=True)
        trace.append((d, tuple(ms)))
        if d == 0 and ms == [-1]:
            logger.debug(f"Cremona reduction of {a} reached e-form after {len(trace) - 1} moves")
            return CremonaResult(True, tuple(trace))
        if d <= 0:
            return CremonaResult(False, tuple(trace), f"degree {d} reached without e-form")
        if ms and ms[-1] < 0:
            return CremonaResult(False, tuple(trace), f"negative coefficient {ms[-1]} with degree {d}")
        padded = ms + [0] * max(0, 3 - len(ms))
        m1, m2, m3 = padded[:3]
        if m1 + m2 + m3 <= d:
            return CremonaResult(False, tuple(trace), f"reduced form (d={d}) is not an exceptional sphere")
        d, ms = 2 * d - m1 - m2 - m3, [d - m2 - m3, d - m1 - m3, d - m1 - m2] + padded[3:]


def certify_perfect(a, p, q):
    """
    Proper transform, numeric exceptionality and Cremona certificate for A and (p, q).
    """
    validate_pair(p, q)
    transformed = proper_transform_class(a, p, q)
    numeric = is_numerically_exceptional(transformed)
    cremona = None
    if numeric:
        embedded = f1_to_cp2(transformed) if transformed.base == F1 else transformed
        cremona = cremona_reduce(embedded)
    return PerfectCertificate(a, p, q, transformed, numeric, cremona)


def is_perfect_exceptional(a, p, q):
    return certify_perfect(a, p, q).perfect


def cp2_perfect_classes(max_p):
    """
    (p, q, d) with p <= max_p for which d L is (p, q)-perfect, found among the solutions
    of 3d = p + q, pq = d^2 + 1 and certified by Cremona reduction.
    """
    found = []
    d = 1
    while 3 * d <= 2 * max_p:
        discriminant = 5 * d * d - 4
        root, exact = integer_nthroot(discriminant, 2)
        root = int(root)
        if exact and (3 * d + root) % 2 == 0:
            p, q = (3 * d + root) // 2, (3 * d - root) // 2
            if q >= 1 and p <= max_p and math.gcd(p, q) == 1 and is_perfect_exceptional(BlowupClass.cp2(d), p, q):
                found.append((p, q, d))
        d += 1
    return found


## ------------------ Parsing ------------------
_TERM = re.compile(r'\s*([+-]?)\s*(\d*)\s*\*?\s*(l|L|e\d*)\s*')


def parse_class(text, base):
    """
    Parses classes such as '5l-2e', '3L-e1-e2' or 'l-e-2e1-e2'.
    F1 generators are l and e, CP2 uses L (or l); exceptional directions are e1, e2, ...

    Args:
        text (str): The class.
        base (SurfaceBase | str): CP2 / F1 or 'cp2' / 'f1'.

    Returns:
        BlowupClass
    """
    if isinstance(base, str):
        if base.lower() not in BASES:
            raise ParseError(f"Unknown base '{base}', expected cp2 or f1", base, 0)
        base = BASES[base.lower()]
    source = text.strip()
    if not source:
        raise ParseError("Empty class", text, 0)
    base_coeffs = [0] * len(base.labels)
    exc = {}
    position = 0
    while position < len(source):
        match = _TERM.match(source, position)
        if not match or match.end() == position:
            raise ParseError("Expected a term like 2l, -e or -3e2", source, position)
        sign, digits, symbol = match.groups()
        if position > 0 and not sign:
            raise ParseError("Terms after the first need an explicit sign", source, position)
        value = int(digits) if digits else 1
        if sign == '-':
            value = -value
        if symbol in ('l', 'L'):
            base_coeffs[0] += value
        elif symbol == 'e':
            if base != F1:
                raise ParseError("The generator e only exists on F1; use e1, e2, ...", source, position)
            base_coeffs[1] += value
        else:
            index = int(symbol[1:])
            if index < 1:
                raise ParseError("Exceptional directions are numbered from e1", source, position)
            # a term -k e_i stores k
            exc[index] = exc.get(index, 0) - value
        position = match.end()
    size = max(exc) if exc else 0
    return BlowupClass(base, tuple(base_coeffs), tuple(exc.get(i, 0) for i in range(1, size + 1)))


if __name__ == '__main__':
    # Local Tests
    klass = BlowupClass.f1(5, 2)
    print(certify_perfect(klass, 11, 2).to_json())
    print(cp2_perfect_classes(40))

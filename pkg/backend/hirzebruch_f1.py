"""
Perfect exceptional classes of the first Hirzebruch surface F_1.

The classes d l - m e that are (p, q)-perfect with p/q < 3 + 2 sqrt(2) are exactly
(p, q, d, m) = (a_{j+3}, a_j, d_j, m_j), where a_1..a_6 = 1, 1, 1, 1, 2, 4,
a_{j+6} = 6 a_{j+3} - a_j, t_j = sqrt(p^2 - 6pq + q^2 + 8) and

    d_j = (3p + 3q + (-1)^{j+1} t_j) / 8
    m_j = (p + q + 3 (-1)^{j+1} t_j) / 8
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import integer_nthroot

# Local Code
from backend.backend_config import THREADS
from backend.blowup_homology import BlowupClass, PerfectCertificate, certify_perfect
from backend.cusp_resolution import validate_pair
from backend.exceptions import DomainError, NoIntegralSolution, NonIntegralData, NotSquare, RatioTooSmall

logger = logging.getLogger(__name__)

SEED = (1, 1, 1, 1, 2, 4)


@dataclass(frozen=True)
class StaircaseQuadruple:
    p: int
    q: int
    d: int
    m: int
    j: Optional[int] = None
    in_scope: bool = True
    certificate: Optional[PerfectCertificate] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if math.gcd(self.p, self.q) != 1:
            raise DomainError(f"({self.p}, {self.q}) are not coprime")
        if 3 * self.d - self.m != self.p + self.q:
            raise DomainError(f"3d - m = {3 * self.d - self.m} differs from p + q = {self.p + self.q}")

    @property
    def pq(self):
        return self.p, self.q

    @property
    def ratio(self):
        return Fraction(self.p, self.q)

    def klass(self):
        return BlowupClass.f1(self.d, self.m)

    def certify(self):
        """The stored Cremona certificate, computed on first use for recursion quadruples."""
        if self.certificate is None:
            object.__setattr__(self, 'certificate', certify_perfect(self.klass(), self.p, self.q))
        return self.certificate

    def to_json(self):
        payload = {'p': self.p, 'q': self.q, 'd': self.d, 'm': self.m, 'j': self.j,
                   'in_scope': self.in_scope, 'certificate': self.certify().to_json()}
        if not self.in_scope:
            payload['note'] = 'outside the p/q < 3+2sqrt2 scope'
        return payload


def seed_sequence(count):
    """(a_1, ..., a_count) of the recursion a_{j+6} = 6 a_{j+3} - a_j."""
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    values = list(SEED[:count])
    while len(values) < count:
        j = len(values) + 1 - 6
        values.append(6 * values[j + 2] - values[j - 1])
    return values


def _discriminant(p, q):
    return p * p - 6 * p * q + q * q + 8


def _exact_root(value):
    if value < 0:
        return None
    root, exact = integer_nthroot(value, 2)
    return int(root) if exact else None


def quadruple(j):
    """(a_{j+3}, a_j, d_j, m_j)."""
    if isinstance(j, bool) or not isinstance(j, int) or j < 1:
        raise DomainError(f"j must be a positive integer, got {j!r}")
    sequence = seed_sequence(j + 3)
    p, q = sequence[j + 2], sequence[j - 1]
    t = _exact_root(_discriminant(p, q))
    if t is None:
        raise NonIntegralData(f"t_{j}^2 = {_discriminant(p, q)} is not a perfect square")
    sign = 1 if j % 2 == 1 else -1
    d_numerator = 3 * p + 3 * q + sign * t
    m_numerator = p + q + 3 * sign * t
    if d_numerator % 8 or m_numerator % 8:
        raise NonIntegralData(f"j={j}: d = {d_numerator}/8, m = {m_numerator}/8 are not both integers")
    return StaircaseQuadruple(p, q, d_numerator // 8, m_numerator // 8, j)


def unique_dm(p, q, strict=False):
    """
    The (d, m) given by the unique sign eps making (3p + 3q + eps t)/8 and
    (p + q + 3 eps t)/8 integral.

    Returns:
        tuple | None: (d, m), or None when no sign works (strict=False).

    Raises:
        NotSquare, NoIntegralSolution: instead of returning None when strict=True.
    """
    validate_pair(p, q)
    discriminant = _discriminant(p, q)
    t = _exact_root(discriminant)
    if t is None:
        if strict:
            raise NotSquare(f"p^2 - 6pq + q^2 + 8 = {discriminant} is not a perfect square for ({p}, {q})")
        return None
    solutions = set()
    for eps in (1, -1):
        d_numerator = 3 * p + 3 * q + eps * t
        m_numerator = p + q + 3 * eps * t
        if d_numerator % 8 == 0 and m_numerator % 8 == 0:
            solutions.add((d_numerator // 8, m_numerator // 8))
    if len(solutions) == 1:
        return solutions.pop()
    if strict:
        raise NoIntegralSolution(f"({p}, {q}) has {len(solutions)} integral (d, m) candidates, expected one")
    return None


def apply_S(p, q):
    return 6 * p - q, p


def apply_R(p, q):
    if p <= 6 * q:
        raise RatioTooSmall(f"R needs p/q > 6, got {p}/{q}")
    return 6 * p - 35 * q, p - 6 * q


def exceeds_scope(p, q):
    """p/q > 3 + 2 sqrt(2), decided in integers."""
    gap = p - 3 * q
    return gap > 0 and gap * gap > 8 * q * q


def _recursion_index(max_p):
    indices = {}
    j = 1
    while True:
        sequence = seed_sequence(j + 3)
        p, q = sequence[j + 2], sequence[j - 1]
        if p > max_p:
            return indices
        indices.setdefault((p, q), j)
        j += 1


def _certify(pair):
    p, q = pair
    dm = unique_dm(p, q)
    if dm is None:
        return None
    d, m = dm
    certificate = certify_perfect(BlowupClass.f1(d, m), p, q)
    if not certificate.perfect:
        return None
    return p, q, d, m, certificate


def enumerate_perf(max_p, threads=THREADS):
    """
    Every coprime (p, q) with q <= p <= max_p whose unique (d, m) gives a Cremona
    certified (p, q)-perfect class d l - m e, sorted by p/q. Entries with
    p/q > 3 + 2 sqrt(2) are flagged out of scope; in-scope entries carry their
    recursion index j.
    """
    if isinstance(max_p, bool) or not isinstance(max_p, int) or max_p < 1:
        raise DomainError(f"max_p must be a positive integer, got {max_p!r}")
    pairs = [(p, q) for p in range(1, max_p + 1) for q in range(1, p + 1) if math.gcd(p, q) == 1]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            certified = list(pool.map(_certify, pairs))
    else:
        certified = [_certify(pair) for pair in pairs]

    recursion = _recursion_index(max_p)
    found = []
    for item in certified:
        if item is None:
            continue
        p, q, d, m, certificate = item
        in_scope = not exceeds_scope(p, q)
        j = recursion.get((p, q)) if in_scope else None
        if in_scope and j is None:
            logger.warning(f"Perfect class ({p}, {q}, {d}, {m}) is in scope but not produced by the recursion")
        found.append(StaircaseQuadruple(p, q, d, m, j, in_scope, certificate))
    found.sort(key=lambda item: item.ratio)
    logger.info(f"Enumerated {len(pairs)} coprime pairs up to p={max_p}: {len(found)} perfect classes")
    return found


def r_orbit_report(max_p):
    """For each enumerated class with p > 6q, whether R(p, q) is again perfect."""
    report = []
    for item in enumerate_perf(max_p):
        if item.p <= 6 * item.q:
            continue
        image = apply_R(item.p, item.q)
        report.append({
            'source': [item.p, item.q],
            'image': list(image),
            'image_is_perfect': _certify(image) is not None,
        })
    return report


if __name__ == '__main__':
    # Local Tests
    print(seed_sequence(12))
    print([quadruple(j).to_json() for j in range(1, 7)])
    print([item.to_json() for item in enumerate_perf(11)])

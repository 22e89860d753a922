"""
Stable embedding obstructions from ellipsoidal superpotentials.

If the count of index zero planes in class A negatively asymptotic to o^a_{c1(A)-1}
is nonzero, an embedding of the scaled ellipsoid c E(a) x C^N into M x C^N forces

    c <= [omega_M].A / M^a_{c1(A)-1}.

Nonvanishing is an input flag here and is never computed.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import pandas as pd
from sympy import N, Rational

# Local Code
from backend.backend_config import (CP2_LINE_AREA, DECIMAL_DIGITS, F1_FIBER_AREA, F1_LINE_AREA, THREADS)
from backend.blowup_homology import cp2_perfect_classes
from backend.cusp_resolution import validate_pair
from backend.exact_numbers import DELTA, PerturbedQuotient, PerturbedRational
from backend.exceptions import DomainError
from backend.formal_curves import HomologySurrogate
from backend.hirzebruch_f1 import enumerate_perf
from backend.spectrum import EllipsoidShape, action, orbit_at

logger = logging.getLogger(__name__)

PROFILE_COLUMNS = ['ratio', 'p', 'q', 'sign', 'c1', 'area', 'bound', 'bound_exact', 'bound_decimal']


@dataclass(frozen=True)
class ObstructionRecord:
    klass: HomologySurrogate
    shape: EllipsoidShape
    bound: PerturbedQuotient
    orbit: object
    nonvanishing_asserted: bool = True

    @property
    def limit(self):
        return self.bound.limit()

    def to_json(self):
        return {
            'class': self.klass.to_json(),
            'shape': self.shape.to_json(),
            'orbit': self.orbit.to_json(),
            'bound': self.bound.to_json(),
            'nonvanishing_asserted': self.nonvanishing_asserted,
        }


def embedding_bound(klass, a, nonvanishing=True):
    """
    The bound [omega].A / A(o^a_{c1(A)-1}) for a stabilized embedding of c E(a).

    Args:
        klass (HomologySurrogate): c1 >= 2 and positive area.
        a (EllipsoidShape): Spectrum must be tie-free at rank c1 - 1.
        nonvanishing (bool): Caller's assertion that the count is nonzero; recorded only.

    Returns:
        ObstructionRecord
    """
    if klass.c1 < 2:
        raise DomainError(f"Obstruction bounds need c1 >= 2, got {klass.c1}")
    if klass.area.sign() <= 0:
        raise DomainError(f"Obstruction bounds need a positive area, got {klass.area}")
    orbit = orbit_at(a, klass.c1 - 1)
    bound = PerturbedQuotient(klass.area, action(a, orbit))
    return ObstructionRecord(klass, a, bound, orbit, nonvanishing)


def perturbed_shape(p, q, sign):
    """(q, p + delta) for sign +1 and (q, p - delta) for sign -1."""
    sign = _sign_value(sign)
    return EllipsoidShape((PerturbedRational(q), PerturbedRational(p) + DELTA * sign))


def _sign_value(sign):
    if sign in (1, '+'):
        return 1
    if sign in (-1, '-'):
        return -1
    raise DomainError(f"Sign must be +1 or -1, got {sign!r}")


def _decimal(value):
    return str(N(Rational(value.numerator, value.denominator), DECIMAL_DIGITS))


def _profile_record(record):
    klass, p, q, sign = record
    validate_pair(p, q)
    if klass.c1 != p + q:
        raise DomainError(f"Class with c1 = {klass.c1} cannot obstruct at ({p}, {q}); need c1 = p + q")
    sign = _sign_value(sign)
    return Fraction(p, q), p, q, sign, klass, embedding_bound(klass, perturbed_shape(p, q, sign))


def staircase_profile(records, threads=THREADS):
    """
    Table of (p/q, bound) rows sorted by p/q. At equal p/q the largest bound is kept.

    Args:
        records: iterable of (HomologySurrogate, p, q, sign).

    Returns:
        pd.DataFrame: columns PROFILE_COLUMNS; bound is the exact limit value.
    """
    records = list(records)
    if threads > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            computed = list(pool.map(_profile_record, records))
    else:
        computed = [_profile_record(record) for record in records]

    best = {}
    for ratio, p, q, sign, klass, obstruction in computed:
        kept = best.get(ratio)
        if kept is None or obstruction.bound > kept[-1].bound:
            best[ratio] = (p, q, sign, klass, obstruction)

    rows = []
    for ratio in sorted(best):
        p, q, sign, klass, obstruction = best[ratio]
        limit = obstruction.limit
        rows.append({
            'ratio': f"{p}/{q}",
            'p': p,
            'q': q,
            'sign': '+' if sign > 0 else '-',
            'c1': klass.c1,
            'area': str(klass.area),
            'bound': str(limit),
            'bound_exact': str(obstruction.bound),
            'bound_decimal': _decimal(limit),
        })
    logger.info(f"Staircase profile: {len(records)} records, {len(rows)} rows")
    return pd.DataFrame(rows, columns=PROFILE_COLUMNS)


def f1_records(max_p, sign=1):
    """Certified F_1 perfect classes with area(d l - m e) = F1_LINE_AREA d - F1_FIBER_AREA m."""
    records = []
    for item in enumerate_perf(max_p):
        area = F1_LINE_AREA * item.d - F1_FIBER_AREA * item.m
        klass = HomologySurrogate(item.p + item.q, PerturbedRational(area), 1, item.d ** 2 - item.m ** 2)
        records.append((klass, item.p, item.q, sign))
    return records


def cp2_records(max_p, sign=1):
    """Certified CP^2 perfect classes d L with area CP2_LINE_AREA d."""
    records = []
    for p, q, d in cp2_perfect_classes(max_p):
        klass = HomologySurrogate(3 * d, PerturbedRational(CP2_LINE_AREA * d), 1, d * d)
        records.append((klass, p, q, sign))
    return records


def f1_profile(max_p, sign=1):
    return staircase_profile(f1_records(max_p, sign))


def cp2_profile(max_p, sign=1):
    return staircase_profile(cp2_records(max_p, sign))


if __name__ == '__main__':
    # Local Tests
    record = embedding_bound(HomologySurrogate(5, 44), EllipsoidShape.of(8, 13, 22))
    print(record.bound)  # 2
    print(cp2_profile(40))

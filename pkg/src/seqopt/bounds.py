"""Closed-form upper bounds and concentration checks for the triangles.

The row bound at support position t (1-based, t = m - offset + 1) is

    (n-1)!**k / (t-1)! * lam**(t-1) * prod_{j=2..n-t+1} f_weight(j, ~mask)

with lam = h_dot(n, mask) = sum of f_weight(j, mask) over j = 2..n.  It
dominates the exact entry termwise, its row total over (n!)**k never
exceeds e**lam, and for masks with first bit 0 the mass beyond an
explicit threshold M is below e**-M1.  Masks with first bit 1 get the
mirrored statement through the complement-mask symmetry.

Everything rational stays a ``fractions.Fraction``; e**x, pi**2/6 and
e**-M1 only enter at the final comparison, evaluated to 50 significant
digits with a fixed 1e-12 acceptance margin on top of the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, exp, factorial

import mpmath

from .numbers import Mask, f_weight, g_weight, value

_DPS = 50
MARGIN = Fraction(1, 10**12)

__all__ = [
    "MARGIN",
    "BoundReport",
    "HVector",
    "TailCheck",
    "exp_bound_holds",
    "h_dot",
    "h_vector",
    "mirrored_tail",
    "ocmax",
    "ocmax_row",
    "ratio_report",
    "tail_probability",
    "tail_threshold",
    "upper_ratio",
]


def exp_bound_holds(lhs: Fraction, exponent) -> bool:
    """True when lhs <= e**exponent + 1e-12.

    The exponential side is evaluated to 50 significant digits; the
    rational side is converted at the same precision and never rounded
    beforehand.
    """
    exponent = Fraction(exponent)
    with mpmath.workdps(_DPS):
        rhs = mpmath.e ** (mpmath.mpf(exponent.numerator) / mpmath.mpf(exponent.denominator))
        left = mpmath.mpf(lhs.numerator) / mpmath.mpf(lhs.denominator)
        return bool(left <= rhs + mpmath.mpf(10) ** -12)


@dataclass(frozen=True)
class HVector:
    """Partial harmonic power sums h_p = comb(k, p) * sum_{j=1..n-1} 1/j**p."""

    n: int
    k: int
    entries: tuple[Fraction, ...]


def h_vector(n: int, k: int) -> HVector:
    """Exact harmonic vector for rows of size n; h_0 is always n - 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    entries = tuple(
        comb(k, p) * sum((Fraction(1, j**p) for j in range(1, n)), Fraction(0))
        for p in range(k + 1)
    )
    return HVector(n, k, entries)


def h_dot(n: int, mask: Mask) -> Fraction:
    """Dot product of the harmonic vector with the mask bits, p = 0 included.

    Identically equal to sum(f_weight(j, mask) for j in 2..n); that
    identity is enforced in the test suite.
    """
    hv = h_vector(n, mask.k)
    return sum((e for e, bit in zip(hv.entries, mask.bits) if bit), Fraction(0))


def ocmax(mask: Mask, n: int, m: int) -> Fraction:
    """Closed-form upper bound for the triangle entry at (n, m).

    Zero outside the support; inside it the bound dominates value(mask,
    n, m) (verified as a test, never assumed) and is tight at the bottom
    support position.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t = m - mask.offset + 1
    if t < 1 or t > n:
        return Fraction(0)
    comp = mask.complement()
    lam = h_dot(n, mask)
    tail = Fraction(1)
    for j in range(2, n - t + 2):
        tail *= f_weight(j, comp)
    return Fraction(factorial(n - 1) ** mask.k, factorial(t - 1)) * lam ** (t - 1) * tail


def ocmax_row(mask: Mask, n: int) -> dict[int, Fraction]:
    """All of row n's upper bounds in one pass; equal to ocmax per entry."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    comp = mask.complement()
    lam = h_dot(n, mask)
    base = Fraction(factorial(n - 1) ** mask.k)
    suffix = [Fraction(1)] * n  # suffix[s] = prod_{j=2..s+1} f_weight(j, comp)
    for s in range(1, n):
        suffix[s] = suffix[s - 1] * f_weight(s + 1, comp)
    out: dict[int, Fraction] = {}
    lam_pow = Fraction(1)
    fact = 1
    for t in range(1, n + 1):
        if t > 1:
            lam_pow *= lam
            fact *= t - 1
        out[t + mask.offset - 1] = base * lam_pow * suffix[n - t] / fact
    return out


def upper_ratio(mask: Mask, n: int) -> Fraction:
    """Row total of the upper bounds divided by (n!)**k, exactly.

    Same value as sum(ocmax_row(mask, n).values()) / (n!)**k but
    assembled on a single integer common denominator, which keeps a
    sweep over n <= 200 in the low seconds.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    k = mask.k
    comp = mask.complement()
    lam = h_dot(n, mask)
    a, b = lam.numerator, lam.denominator
    # su[s] = prod_{j=2..s+1} g_weight(j, comp) = (s!)**k * suffix product of f_weight(., comp)
    su = [1] * n
    for s in range(1, n):
        su[s] = su[s - 1] * g_weight(s + 1, comp)
    fact_n1 = factorial(n - 1)
    # cs[t-1] scales term t onto the common denominator (n-1)! * b**(n-1) * (n!)**k
    cs = [0] * n
    q1 = fact_n1  # (n-1)!/(t-1)!
    q2 = 1        # (n-1)!/(n-t)!
    for t in range(1, n + 1):
        cs[t - 1] = su[n - t] * q1 * q2**k
        q1 //= t
        q2 *= n - t
    # Horner over sum(cs[u] * a**u * b**(n-1-u)); a and b stay small, so no
    # product here ever multiplies two long operands.
    acc = cs[n - 1]
    bp = 1
    for u in range(n - 2, -1, -1):
        bp *= b
        acc = acc * a + cs[u] * bp
    return Fraction(acc, fact_n1 * bp * factorial(n) ** k)


def tail_threshold(mask: Mask, n: int, m1: int) -> int:
    """Concentration threshold for masks whose first bit is 0.

    Returns ceil(e*k*c_1*(ln(n-1) + 1) + e*(pi**2/6)*sum_{p>=2} c_p*comb(k, p))
    plus m1, with natural logarithms evaluated at 50 significant digits.
    The row mass strictly beyond index M + offset - 1 then stays within
    e**-m1; see tail_probability.
    """
    if mask.bits[0] != 0:
        raise ValueError("mask has first bit 1; its upper tail is not concentrated, "
                         "use mirrored_tail instead")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if m1 < 1:
        raise ValueError(f"m1 must be a positive integer, got {m1}")
    k, bits = mask.k, mask.bits
    with mpmath.workdps(_DPS):
        core = mpmath.e * k * bits[1] * (mpmath.log(n - 1) + 1)
        core += mpmath.e * (mpmath.pi**2 / 6) * sum(bits[p] * comb(k, p) for p in range(2, k + 1))
        return int(mpmath.ceil(core)) + m1


def tail_probability(mask: Mask, n: int, threshold_m: int) -> Fraction:
    """Exact row mass strictly above the absolute index threshold_m.

    sum(value(mask, n, m) for m > threshold_m) over (n!)**k; 1 when the
    threshold sits below the support, 0 when it clears the top.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lo = max(threshold_m + 1, mask.offset)
    mass = sum(value(mask, n, m) for m in range(lo, n + mask.offset))
    return Fraction(mass, factorial(n) ** mask.k)


def mirrored_tail(mask: Mask, n: int, m1: int) -> tuple[int, Fraction]:
    """Concentration check for masks whose first bit is 1.

    The threshold M comes from the complement mask (whose first bit is
    0).  Returned is (M, mass of row entries strictly below the absolute
    index n - M + offset), computed on this mask's own triangle.  By the
    complement symmetry that mass equals the complement mask's tail
    strictly above M + (1 - offset) - 1, so it stays within e**-m1.
    """
    if mask.bits[0] != 1:
        raise ValueError("mask has first bit 0; use tail_threshold and tail_probability")
    comp = mask.complement()
    thr = tail_threshold(comp, n, m1)
    cutoff = n - thr + mask.offset
    hi = min(cutoff, n + mask.offset)
    mass = sum(value(mask, n, m) for m in range(mask.offset, hi))
    return thr, Fraction(mass, factorial(n) ** mask.k)


@dataclass(frozen=True)
class TailCheck:
    m1: int
    threshold: int
    probability: Fraction
    bound: float  # e**-m1 to double precision; the ok flag used 50 digits
    ok: bool


@dataclass(frozen=True)
class BoundReport:
    """One row's bounds: per-entry caps, growth exponents, ratio and tails."""

    mask: Mask
    n: int
    upper_bounds: dict[int, Fraction]
    lam: Fraction
    lam_prime: Fraction
    ratio: Fraction
    ratio_prime: Fraction
    ratio_ok: bool
    ratio_prime_ok: bool
    tails: tuple[TailCheck, ...]


def ratio_report(mask: Mask, n: int, m1_values=()) -> BoundReport:
    """Bound report for row n: exact ratios checked against e**lam.

    ratio is sum(ocmax)/ (n!)**k for this mask, ratio_prime the same for
    the complement mask over the same denominator (row sums agree).  Each
    m1 in m1_values adds a tail check on the branch this mask's first
    bit selects.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    comp = mask.complement()
    lam = h_dot(n, mask)
    lam_prime = h_dot(n, comp)
    ratio = upper_ratio(mask, n)
    ratio_prime = upper_ratio(comp, n)
    tails = []
    for m1 in m1_values:
        if mask.bits[0] == 0:
            thr = tail_threshold(mask, n, m1)
            prob = tail_probability(mask, n, thr + mask.offset - 1)
        else:
            thr, prob = mirrored_tail(mask, n, m1)
        tails.append(TailCheck(m1, thr, prob, exp(-m1), exp_bound_holds(prob, -m1)))
    return BoundReport(
        mask, n, ocmax_row(mask, n), lam, lam_prime, ratio, ratio_prime,
        exp_bound_holds(ratio, lam), exp_bound_holds(ratio_prime, lam_prime),
        tuple(tails))

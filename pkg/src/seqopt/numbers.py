"""Exact masked-record permutation counting.

For a bit mask ``(c_0, ..., c_k)`` and a k-tuple of permutations of
``1..n``, call row ``i`` *selected* when ``c_l = 1``, where ``l`` is the
number of columns whose left-to-right minima include position ``i``.
``value(mask, n, m)`` is the number of permutation tuples with exactly
``m`` selected rows.  Mask ``"01"`` recovers the unsigned Stirling
numbers of the first kind, and row ``n`` of any mask sums to ``(n!)**k``.

Rows live on the index window ``[c_k, n - 1 + c_k]``: position 1 is a
record in every column, so the last mask bit decides whether it is ever
counted.  The triangle is produced by the all-integer recurrence

    value(n+1, m+1) = g_weight(n+1, mask) * value(n, m)
                    + g_weight(n+1, ~mask) * value(n, m+1)

seeded with ``value(1, c_k) = 1``.  ``explicit_value`` recomputes single
entries from an elementary-symmetric sum over the rational column
weights and exists, together with the exhaustive counter in
``seqopt.oracle``, as an independent route to the same integers.

All arithmetic is exact: counts are Python ints, weights are
``fractions.Fraction``; nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

DEFAULT_SUBSET_LIMIT = 12

__all__ = [
    "DEFAULT_SUBSET_LIMIT",
    "IntPolynomial",
    "Mask",
    "SubsetLimitError",
    "Triangle",
    "complement",
    "explicit_value",
    "f_weight",
    "falling_poly",
    "g_weight",
    "poly_zeros",
    "rising_poly",
    "stirling_ref",
    "triangle",
    "value",
]


class SubsetLimitError(ValueError):
    """explicit_value was asked to enumerate more subsets than its cap allows."""


@dataclass(frozen=True)
class Mask:
    """Bit vector ``(c_0, ..., c_k)`` choosing which record counts matter.

    ``bits[l] == 1`` means a row that is a record in exactly ``l`` of the
    ``k`` columns gets counted.  ``k = len(bits) - 1`` and must be >= 1.

    >>> str(Mask((0, 1)).complement())
    '10'
    """

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if len(bits) < 2:
            raise ValueError(f"mask needs k >= 1, i.e. at least two bits, got {bits!r}")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"mask bits must be 0 or 1, got {bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> "Mask":
        """Parse the wire format ``"c0c1...ck"``, e.g. ``"01"``."""
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"mask string must be a nonempty run of 0/1, got {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def stirling(cls) -> "Mask":
        """The mask ``01`` whose triangle is the unsigned Stirling numbers."""
        return cls((0, 1))

    @classmethod
    def any_record(cls, k: int) -> "Mask":
        """``(0, 1, ..., 1)``: select rows that are a record in at least one column."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        return cls((0,) + (1,) * k)

    @property
    def k(self) -> int:
        return len(self.bits) - 1

    @property
    def offset(self) -> int:
        """Low end of every row's support: row n lives on [offset, n - 1 + offset]."""
        return self.bits[-1]

    def support(self, n: int) -> range:
        """Indices m that row n may occupy."""
        return range(self.offset, n + self.offset)

    def complement(self) -> "Mask":
        return Mask(tuple(1 - b for b in self.bits))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def complement(mask: Mask) -> Mask:
    """Bitwise complement, same k; an involution."""
    return mask.complement()


def f_weight(j: int, vec: Mask) -> Fraction:
    """Rational column weight ``sum_p comb(k, p) * bits[p] / (j-1)**p``.

    Defined for j >= 2 only (j = 1 divides by zero past the p = 0 term).
    Complements always pair up: f_weight(j, v) + f_weight(j, ~v) equals
    (j / (j-1))**k.  The sequence is nonincreasing in j.
    """
    if j < 2:
        raise ValueError(f"f_weight needs j >= 2, got {j}")
    k = vec.k
    base = j - 1
    total = Fraction(0)
    for p, bit in enumerate(vec.bits):
        if bit:
            total += Fraction(comb(k, p), base**p)
    return total


def g_weight(j: int, vec: Mask) -> int:
    """Integer-scaled weight ``(j-1)**k * f_weight(j, vec)``.

    These are the recurrence coefficients; g_weight(j, v) +
    g_weight(j, ~v) == j**k.
    """
    if j < 2:
        raise ValueError(f"g_weight needs j >= 2, got {j}")
    k = vec.k
    base = j - 1
    return sum(comb(k, p) * base ** (k - p) for p, bit in enumerate(vec.bits) if bit)


# Unsigned rows keyed by mask; row n is an immutable tuple indexed 0..n with
# slot 0 unused, so cached state can never be corrupted through a Triangle.
_ROW_CACHE: dict[Mask, list[tuple[int, ...]]] = {}


def _unsigned_rows(mask: Mask, max_n: int) -> list[tuple[int, ...]]:
    rows = _ROW_CACHE.setdefault(mask, [(0, 1)])
    comp = mask.complement()
    while len(rows) < max_n:
        n = len(rows)
        prev = rows[n - 1]
        gc = g_weight(n + 1, mask)
        gp = g_weight(n + 1, comp)
        nxt = [0] * (n + 2)
        for u in range(1, n + 2):
            acc = gc * prev[u - 1]
            if u <= n:
                acc += gp * prev[u]
            nxt[u] = acc
        rows.append(tuple(nxt))
    return rows


@dataclass(frozen=True)
class Triangle:
    """Exact rows 1..max_n for one mask; zero entries are not stored."""

    mask: Mask
    max_n: int
    rows: dict[int, dict[int, int]]

    def row(self, n: int) -> dict[int, int]:
        if not 1 <= n <= self.max_n:
            raise ValueError(f"row {n} outside 1..{self.max_n}")
        return dict(self.rows[n])

    def value(self, n: int, m: int) -> int:
        """Entry at (n, m); zero anywhere outside the stored support."""
        if not 1 <= n <= self.max_n:
            raise ValueError(f"row {n} outside 1..{self.max_n}")
        return self.rows[n].get(m, 0)


def triangle(mask: Mask, max_n: int) -> Triangle:
    """Rows 1..max_n of the mask's triangle, exact and deterministic.

    >>> triangle(Mask.stirling(), 4).row(4)
    {1: 6, 2: 11, 3: 6, 4: 1}
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    all_rows = _unsigned_rows(mask, max_n)
    off = mask.offset
    rows: dict[int, dict[int, int]] = {}
    for n in range(1, max_n + 1):
        urow = all_rows[n - 1]
        rows[n] = {u + off - 1: c for u, c in enumerate(urow) if u >= 1 and c}
    return Triangle(mask, max_n, rows)


def value(mask: Mask, n: int, m: int) -> int:
    """Triangle entry at (n, m); zero outside the support [offset, n-1+offset]."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    u = m - mask.offset + 1
    if u < 1 or u > n:
        return 0
    return _unsigned_rows(mask, n)[n - 1][u]


def explicit_value(mask: Mask, n: int, m: int, subset_limit: int = DEFAULT_SUBSET_LIMIT) -> int:
    """Entry at (n, m) by direct subset expansion, independent of the recurrence.

    Sums, over all (t-1)-element subsets J of {2..n} with t = m - offset + 1,
    the product of f_weight(j, mask) for j in J times f_weight(j, ~mask) for
    j outside J, then scales by (n-1)!**k.  The total has 2**(n-1) terms, so
    n is capped (default 12); this is an oracle-scale cross-check, not a fast
    path.  The rational total provably collapses to an integer; that is
    asserted, never assumed.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t = m - mask.offset + 1
    if t < 1 or t > n:
        return 0
    if n > subset_limit:
        raise SubsetLimitError(
            f"subset expansion is oracle-scale only: n={n} exceeds the limit of {subset_limit}")
    comp = mask.complement()
    fc = {j: f_weight(j, mask) for j in range(2, n + 1)}
    fp = {j: f_weight(j, comp) for j in range(2, n + 1)}
    total = Fraction(0)
    for chosen in combinations(range(2, n + 1), t - 1):
        chosen_set = set(chosen)
        prod = Fraction(1)
        for j in range(2, n + 1):
            prod *= fc[j] if j in chosen_set else fp[j]
        total += prod
    result = factorial(n - 1) ** mask.k * total
    if result.denominator != 1:
        raise RuntimeError(
            f"internal inconsistency: subset sum for mask {mask}, n={n}, m={m} "
            f"is the non-integer {result}")
    return result.numerator


@dataclass(frozen=True)
class IntPolynomial:
    """Integer-coefficient polynomial; coefficients[i] multiplies x**i."""

    coefficients: tuple[int, ...]
    kind: str  # "rising" or "falling"

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x) -> Fraction:
        """Exact Horner evaluation; accepts int or Fraction."""
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def _weighted_product(mask: Mask, n: int, sign: int) -> tuple[int, ...]:
    # x * prod_{j=2..n} (g_weight(j, mask)*x + sign*g_weight(j, ~mask)); the
    # coefficient list always has n + 1 slots even when a degenerate mask
    # kills the leading terms.
    comp = mask.complement()
    coeffs = [0, 1]
    for j in range(2, n + 1):
        a = g_weight(j, mask)
        b = sign * g_weight(j, comp)
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            if c:
                nxt[i] += b * c
                nxt[i + 1] += a * c
        coeffs = nxt
    return tuple(coeffs)


def rising_poly(mask: Mask, n: int) -> IntPolynomial:
    """Expand ``x * prod_{j=2..n} (g_weight(j, mask)*x + g_weight(j, ~mask))``.

    The coefficient of x**u is value(mask, n, u + offset - 1): the whole
    row read off a generating product instead of the recurrence.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return IntPolynomial(_weighted_product(mask, n, +1), "rising")


def falling_poly(mask: Mask, n: int) -> IntPolynomial:
    """Same product with the constant terms negated.

    Coefficients match rising_poly up to the sign (-1)**(n+u).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return IntPolynomial(_weighted_product(mask, n, -1), "falling")


def poly_zeros(mask: Mask, n: int, kind: str = "rising") -> list[Fraction | None]:
    """Exact roots of the degree-n generating product, factor by factor.

    Entry 0 is the root x = 0 carried by the leading factor; entry m - 1
    (m = 2..n) is -f_weight(m, ~mask)/f_weight(m, mask) for the rising
    product and the positive ratio for the falling one.  When
    f_weight(m, mask) == 0 (all-zero mask) the factor is constant and the
    slot holds None rather than failing.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if kind not in ("rising", "falling"):
        raise ValueError(f"kind must be 'rising' or 'falling', got {kind!r}")
    comp = mask.complement()
    zeros: list[Fraction | None] = [Fraction(0)]
    for m in range(2, n + 1):
        fm = f_weight(m, mask)
        if fm == 0:
            zeros.append(None)
        else:
            ratio = f_weight(m, comp) / fm
            zeros.append(-ratio if kind == "rising" else ratio)
    return zeros


def stirling_ref(max_n: int) -> dict[int, dict[int, int]]:
    """Classic unsigned Stirling numbers of the first kind, rows 1..max_n.

    Uses the textbook recurrence s(n+1, m) = s(n, m-1) + n*s(n, m) with
    s(1, 1) = 1.  Kept deliberately separate from triangle() so the two
    can be diffed as independent computations.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    table: dict[int, dict[int, int]] = {1: {1: 1}}
    for n in range(1, max_n):
        row = table[n]
        nxt: dict[int, int] = {}
        for m in range(1, n + 2):
            v = row.get(m - 1, 0) + n * row.get(m, 0)
            if v:
                nxt[m] = v
        table[n + 1] = nxt
    return table

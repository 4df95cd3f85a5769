"""Exact decomposition of monomials into powers of integer-slope linear forms.

Any monomial x^alpha of total degree n >= 1 in d variables can be written

    x^alpha = sum_t c_t * (x1 + t_1 x2 + ... + t_{d-1} xd)^n

with integer slopes t_i drawn from the consecutive grid
{-floor(n/2), ..., n - floor(n/2)} and rational coefficients c_t bounded by
(n/2 + 1)^(2d).  The construction recurses on the number of variables: peel
off the last variable, decompose the remaining monomial at its lower
degree, then fold the last variable back in using an extraction row of the
shifted-power Vandermonde system (`vandermonde.extraction_coefficients`).

Monomials of degree below a budget k are handled by homogenizing: pad with
an auxiliary variable raised to the missing degree, decompose at degree k,
then set the auxiliary variable to 1.  The linear forms then pick up an
integer constant term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

from .poly import (
    DEFAULT_EXPANSION_CAP,
    MultiIndex,
    Polynomial,
    format_rational,
    multinomial_expand,
)
from .vandermonde import extraction_coefficients

SlopeTuple = Tuple[int, ...]


@dataclass(frozen=True)
class LinearForm:
    """x1 + slopes[1]*x2 + ... + slopes[d-1]*xd + constant, first slope fixed to 1."""

    slopes: Tuple[int, ...]
    constant: int = 0

    def __post_init__(self) -> None:
        if not self.slopes or self.slopes[0] != 1:
            raise ValueError(f"first slope must be 1, got {self.slopes}")


@dataclass(frozen=True)
class DecompositionTable:
    """Sparse coefficient table c_t for one monomial.

    `entries` maps slope tuples to coefficients.  For a homogeneous table in
    d variables the tuples hold the d-1 slopes of x2..xd; for an
    inhomogeneous table they hold those d-1 slopes plus a trailing integer
    constant.  Zero coefficients are omitted.
    """

    alpha: MultiIndex
    n: int
    dimension: int
    entries: Dict[SlopeTuple, Fraction] = field(default_factory=dict)
    homogeneous: bool = True

    @property
    def slot_count(self) -> int:
        return self.dimension - 1 if self.homogeneous else self.dimension

    @property
    def dense_grid_size(self) -> int:
        """Size of the full slope grid the sparse entries live in."""
        return (self.n + 1) ** self.slot_count

    def forms(self) -> Iterator[Tuple[LinearForm, Fraction]]:
        """Iterate (linear form, coefficient) pairs in sorted slope order."""
        for t in sorted(self.entries):
            if self.homogeneous:
                yield LinearForm(slopes=(1, *t)), self.entries[t]
            else:
                yield LinearForm(slopes=(1, *t[:-1]), constant=t[-1]), self.entries[t]

    def max_abs_coefficient(self) -> Fraction:
        if not self.entries:
            return Fraction(0)
        return max(abs(c) for c in self.entries.values())

    def coefficient_bound(self) -> Fraction:
        """The guaranteed bound on |c_t| for this table."""
        base = Fraction(self.n, 2) + 1
        exponent = 2 * self.dimension if self.homogeneous else 2 * (self.dimension + 1)
        return base**exponent

    def to_json_dict(self) -> dict:
        return {
            "alpha": list(self.alpha),
            "n": self.n,
            "homogeneous": self.homogeneous,
            "entries": [
                {"slopes": list(t), "c": format_rational(self.entries[t])}
                for t in sorted(self.entries)
            ],
        }


def _decompose(alpha: MultiIndex) -> Dict[SlopeTuple, Fraction]:
    """Recursive core; accepts degree 0 in any dimension (all-zero slopes)."""
    d = len(alpha)
    n = sum(alpha)
    if d == 1:
        return {(): Fraction(1)}
    if n == 0:
        return {(0,) * (d - 1): Fraction(1)}
    j = n - alpha[-1]
    inner = _decompose(alpha[:-1])
    row = extraction_coefficients(n, j)
    offset = n // 2
    entries: Dict[SlopeTuple, Fraction] = {}
    for t, coeff in inner.items():
        for s, b in enumerate(row):
            if b:
                entries[(*t, s - offset)] = coeff * b
    return entries


def decompose_monomial(alpha: MultiIndex) -> DecompositionTable:
    """Homogeneous decomposition of x^alpha at its own degree n = |alpha|.

    Requires n >= 1 except for the trivial univariate constant (0,), which
    decomposes as the empty-slope table {(): 1}.  Lower-degree monomials
    inside a degree budget belong to decompose_inhomogeneous.
    """
    alpha = tuple(int(a) for a in alpha)
    d = len(alpha)
    if d < 1:
        raise ValueError("multi-index must have at least one entry")
    if any(a < 0 for a in alpha):
        raise ValueError(f"negative exponent in {alpha}")
    n = sum(alpha)
    if n == 0 and d != 1:
        raise ValueError(
            "constant monomials in several variables have no homogeneous "
            "decomposition; use decompose_inhomogeneous with a degree budget"
        )
    return DecompositionTable(
        alpha=alpha, n=n, dimension=d, entries=_decompose(alpha), homogeneous=True
    )


def decompose_inhomogeneous(alpha: MultiIndex, k: int) -> DecompositionTable:
    """Decomposition of x^alpha as shifted k-th powers, for |alpha| <= k.

    Pads alpha with an auxiliary variable of degree k - |alpha|, decomposes
    homogeneously at degree k, and reads the auxiliary slopes as constant
    terms.  Coefficients are bounded by (k/2 + 1)^(2(d+1)).
    """
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError(f"negative exponent in {alpha}")
    if k < 1:
        raise ValueError(f"degree budget must be >= 1, got {k}")
    n = sum(alpha)
    if n > k:
        raise ValueError(f"degree exceeds budget: |alpha| = {n} > k = {k}")
    padded = (*alpha, k - n)
    return DecompositionTable(
        alpha=alpha, n=k, dimension=len(alpha), entries=_decompose(padded), homogeneous=False
    )


def verify_table(table: DecompositionTable, cap: int = DEFAULT_EXPANSION_CAP) -> Polynomial:
    """Expand the table's combination and subtract x^alpha; zero iff exact.

    This is the independent oracle for the decomposition: it goes through
    plain multinomial expansion and never touches the recursion that built
    the table.
    """
    d = table.dimension
    accumulated: Dict[MultiIndex, Fraction] = {}
    for form, coeff in table.forms():
        expansion = multinomial_expand(form.slopes, form.constant, table.n, cap=cap)
        for mono, value in expansion.items():
            accumulated[mono] = accumulated.get(mono, Fraction(0)) + coeff * value
    target = table.alpha
    accumulated[target] = accumulated.get(target, Fraction(0)) - 1
    return Polynomial(d, accumulated)


def support_level_degrees(table: DecompositionTable) -> List[int]:
    """Per-slot recursion degrees governing the zero-extension rule.

    Slot i of the entry tuples was introduced while decomposing at degree
    d_i (its values are confined to the d_i-node grid); useful for tests
    asserting the sparsity pattern.
    """
    alpha = table.alpha if table.homogeneous else (*table.alpha, table.n - sum(table.alpha))
    degrees: List[int] = []
    running = alpha[0]
    for a in alpha[1:]:
        running += a
        degrees.append(running)
    return degrees

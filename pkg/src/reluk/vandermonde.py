"""Shifted-power Vandermonde systems on consecutive integer nodes.

For a power n, take the n+1 integer nodes -floor(n/2), ..., n - floor(n/2)
and the (n+1)x(n+1) matrix

    M[s][i] = binom(n, i) * node_s^i,

which factors as (plain Vandermonde on the nodes) x (diagonal of binomial
coefficients).  Expanding (y + node_s * z)^n in the mixed monomials
y^(n-i) z^i produces exactly the rows of M, so rows of its inverse give the
coefficients that isolate a single mixed monomial y^j z^(n-j) from the
shifted powers.  Those extraction rows are the workhorse of the monomial
decomposition in `decompose`.

The inverse of the transposed system is computed once per n (a single
multi-RHS elimination) and cached; every extraction row and the max-norm
check read from that cache.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List, Tuple

from .linalg import ExactMatrix, ExactVector, invert_exact, transpose

#: Largest power for which inverse_max_norm will run by default.
DEFAULT_INVERSE_CAP = 40


@dataclass(frozen=True)
class VandermondeSystem:
    """The exact system for one power: nodes and the full matrix."""

    power: int
    nodes: Tuple[int, ...]
    matrix: ExactMatrix  # (n+1) x (n+1); do not mutate

    @property
    def size(self) -> int:
        return self.power + 1


def build_system(n: int) -> VandermondeSystem:
    """Construct the exact (n+1)x(n+1) system for power n."""
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    nodes = tuple(s - n // 2 for s in range(n + 1))
    matrix = [
        [Fraction(comb(n, i) * node**i) for i in range(n + 1)]
        for node in nodes
    ]
    return VandermondeSystem(power=n, nodes=nodes, matrix=matrix)


@lru_cache(maxsize=None)
def _inverse_of_transpose(n: int) -> ExactMatrix:
    # One exact elimination with n+1 right-hand sides, shared by all
    # extraction rows of this power and by inverse_max_norm.
    system = build_system(n)
    return invert_exact(transpose(system.matrix))


def extraction_coefficients(n: int, j: int) -> ExactVector:
    """Coefficients b with  sum_s b_s (y + node_s z)^n  =  y^j z^(n-j).

    Equivalently b solves (M^T) b = e, with e the unit vector selecting the
    mixed monomial y^j z^(n-j).  Requires 0 <= j <= n.
    """
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    if not 0 <= j <= n:
        raise ValueError(f"monomial index j={j} out of range [0, {n}]")
    inverse_t = _inverse_of_transpose(n)
    column = n - j
    return [row[column] for row in inverse_t]


def gautschi_bound(n: int) -> Fraction:
    """Closed-form bound (n/2 + 1)^2 on the max-norm of the system inverse."""
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    return (Fraction(n, 2) + 1) ** 2


def inverse_max_norm(n: int, cap: int = DEFAULT_INVERSE_CAP) -> Fraction:
    """Exact max absolute entry of the system inverse for power n.

    Solves the n+1 unit-vector systems (one shared elimination).  Guarded by
    a cap because the cost grows like n^4 in exact arithmetic.
    """
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    if n > cap:
        raise ValueError(f"cap exceeded: n={n} is above the configured cap {cap}")
    inverse_t = _inverse_of_transpose(n)
    return max(abs(entry) for row in inverse_t for entry in row)

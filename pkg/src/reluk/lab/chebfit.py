"""Chebyshev interpolation with exact conversion to the power basis.

The interpolants are computed in float64 (numpy), but the fitted polynomial
handed to the compiler is exact: every float coefficient is embedded as its
exact binary rational, and the Chebyshev-to-power conversion uses the
integer coefficient table of the Chebyshev polynomials.  Converting in
float would be hopeless at the degrees used here (the entries of T_64 reach
2^63 and float cancellation destroys the value); the exact route makes the
compiled network literally identical to the fitted interpolant.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from ..poly import MultiIndex, Polynomial
from .targets import TargetFunction

MAX_FIT_DEGREE = 200


@lru_cache(maxsize=None)
def _chebyshev_table(n: int) -> Tuple[Tuple[int, ...], ...]:
    """Integer power-basis coefficients of T_0..T_n (row i, entry j = coeff of x^j)."""
    rows: List[List[int]] = [[1], [0, 1]]
    for i in range(2, n + 1):
        prev, prev2 = rows[i - 1], rows[i - 2]
        row = [0] + [2 * c for c in prev]
        for j, c in enumerate(prev2):
            row[j] -= c
        rows.append(row)
    return tuple(tuple(row) for row in rows[: n + 1])


def chebyshev_to_power_1d(coeffs: List[Fraction]) -> Polynomial:
    """Exact power-basis polynomial equal to sum_i coeffs[i] T_i(x)."""
    n = len(coeffs) - 1
    table = _chebyshev_table(max(n, 1))
    acc: Dict[MultiIndex, Fraction] = {}
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        for j, t in enumerate(table[i]):
            if t:
                key = (j,)
                acc[key] = acc.get(key, Fraction(0)) + c * t
    return Polynomial(1, acc)


def chebyshev_to_power_2d(coeffs: np.ndarray, total_degree: int) -> Polynomial:
    """Exact polynomial for sum_{i+j<=n} coeffs[i,j] T_i(x1) T_j(x2)."""
    n = max(coeffs.shape[0], coeffs.shape[1]) - 1
    table = _chebyshev_table(max(n, 1))
    acc: Dict[MultiIndex, Fraction] = {}
    for i in range(coeffs.shape[0]):
        for j in range(coeffs.shape[1]):
            if i + j > total_degree:
                continue
            c = Fraction(float(coeffs[i, j]))
            if c == 0:
                continue
            for a, ta in enumerate(table[i]):
                if not ta:
                    continue
                for b, tb in enumerate(table[j]):
                    if not tb:
                        continue
                    key = (a, b)
                    acc[key] = acc.get(key, Fraction(0)) + c * (ta * tb)
    return Polynomial(2, acc)


def chebyshev_fit(target: TargetFunction, degree: int, d: int = 1) -> Polynomial:
    """Chebyshev interpolant of the target, returned as an exact Polynomial.

    d=1 interpolates at the degree+1 Chebyshev points of the first kind;
    d=2 interpolates on the tensor grid and truncates to total degree.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if degree > MAX_FIT_DEGREE:
        raise ValueError(f"degree {degree} exceeds the fit cap {MAX_FIT_DEGREE}")
    if d == 1:
        cheb_coeffs = npcheb.chebinterpolate(
            lambda x: np.asarray(target(x), dtype=np.float64), degree
        )
        exact = [Fraction(float(c)) for c in cheb_coeffs]
        return chebyshev_to_power_1d(exact)
    if d == 2:
        points = npcheb.chebpts1(degree + 1)
        grid_x, grid_y = np.meshgrid(points, points, indexing="ij")
        flat = np.column_stack([grid_x.ravel(), grid_y.ravel()])
        values = np.asarray(target(flat), dtype=np.float64).reshape(degree + 1, degree + 1)
        # Interpolate one axis at a time: solve V C = F with V the Chebyshev
        # Vandermonde at the first-kind points (square, invertible).
        vander = npcheb.chebvander(points, degree)
        half = np.linalg.solve(vander, values)
        coeffs = np.linalg.solve(vander, half.T).T
        return chebyshev_to_power_2d(coeffs, degree)
    raise ValueError(f"only d in {{1, 2}} is supported, got {d}")

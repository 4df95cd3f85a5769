"""Compile polynomials of degree <= k into shallow ReLU^k networks, exactly.

Every monomial of degree <= k expands into shifted k-th powers of integer
linear forms (decompose_inhomogeneous); summing those tables over the
polynomial's terms gives one aggregated coefficient per grid tuple.  Each
grid tuple then spawns a +/- unit pair: since

    t^k = sigma_k(t) + (-1)^k sigma_k(-t)

a pair with mirrored weights realizes the full k-th power of its linear
form, and positive homogeneity sigma_k(a y) = a^k sigma_k(y) (a > 0) lets
the hidden weights be rescaled to any target bound B with the inverse scale
carried by the output weights.

The resulting width is exactly 2(k+1)^d: pairs whose aggregated coefficient
vanished are still materialized (with zero output weight) so the width
matches the construction; pass prune=True to drop them.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import ceil
from typing import Dict, Tuple

from .decompose import decompose_inhomogeneous
from .network import ShallowNetwork
from .poly import Polynomial


def grid_tuples(k: int, slots: int):
    """Lexicographic slope grid {-floor(k/2), ..., k - floor(k/2)}^slots."""
    nodes = range(-(k // 2), k - k // 2 + 1)
    return itertools.product(nodes, repeat=slots)


def aggregate_coefficients(P: Polynomial, k: int) -> Dict[Tuple[int, ...], Fraction]:
    """Sum of a_alpha * c_t(alpha) over the polynomial's monomials, per grid tuple."""
    beta: Dict[Tuple[int, ...], Fraction] = {}
    for alpha, a in P.items():
        table = decompose_inhomogeneous(alpha, k)
        for t, c in table.entries.items():
            beta[t] = beta.get(t, Fraction(0)) + a * c
    return beta


def compile_shallow(
    P: Polynomial,
    k: int,
    B: Fraction | int = 1,
    prune: bool = False,
) -> ShallowNetwork:
    """Exact shallow ReLU^k network realizing P, width 2(k+1)^d.

    Hidden weights and biases are bounded by B; output weights by
    shallow_output_bound(P, k, B).  Unit order is the lexicographic grid
    order with each +/- pair adjacent, so compilation is deterministic.
    """
    if k < 2:
        raise ValueError(f"shallow compilation requires k >= 2, got {k}")
    B = Fraction(B)
    if B <= 0:
        raise ValueError(f"weight bound B must be positive, got {B}")
    if P.degree > k:
        raise ValueError(f"degree exceeds k: deg P = {P.degree} > {k}")
    d = P.dimension
    beta = aggregate_coefficients(P, k)

    half = ceil(k / 2)
    hidden_scale = B / half          # applied to every slope and constant
    output_scale = half**k / B**k    # undoes hidden_scale^k on the way out
    sign = (-1) ** k

    A, b, c = [], [], []
    for t in grid_tuples(k, d):
        gamma = beta.get(t, Fraction(0)) * output_scale
        if prune and gamma == 0:
            continue
        slopes = (1, *t[:-1])
        row = [hidden_scale * s for s in slopes]
        bias = hidden_scale * t[-1]
        A.append(row)
        b.append(bias)
        c.append(gamma)
        A.append([-w for w in row])
        b.append(-bias)
        c.append(sign * gamma)

    return ShallowNetwork(
        input_dim=d,
        k=k,
        A=A,
        b=b,
        c=c,
        declared_weight_bound=B,
        declared_output_bound=shallow_output_bound(P, k, B),
    )


def shallow_output_bound(P: Polynomial, k: int, B: Fraction | int = 1) -> Fraction:
    """Guaranteed bound on the compiled output weights:

    B^-k (k/2 + 1)^(2(d+1)+k) * sum |a_alpha|.
    """
    B = Fraction(B)
    coeff_sum = P.coefficient_l1()
    return B**-k * (Fraction(k, 2) + 1) ** (2 * (P.dimension + 1) + k) * coeff_sum

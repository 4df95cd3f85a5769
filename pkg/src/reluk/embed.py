"""Embed shallow ReLU^K networks into deep ReLU^k networks, K = k^l.

Three layer shapes do all the work, each of width 2(k+1)n for a width-n
input network:

  power-raising   unit diagonal on the n live slots; sigma_k applied to a
                  nonnegative sigma_{k^i} value yields sigma_{k^(i+1)}, so
                  l raising layers turn sigma_k into sigma_K.

  expand          each live slot value y fans out to 2(k+1) slots holding
                  sigma_k(+-(y + t - floor(k/2))) for t = 0..k.

  contract+expand the identity combination a_t (identity_combination)
                  satisfies  sum_t a_t (y + s_t)^k = y,  so a row reading an
                  expanded block with weights a_t, (-1)^k a_t has
                  pre-activation y + (its own shift); applying sigma_k
                  re-expands.  Contraction is never left as a slot value:
                  a slot can only hold sigma_k(something), so the restored
                  y appears pre-activation (or in the linear readout), never
                  post-activation.

A network with exponent K = k^l embeds at depth L >= l as: one input layer,
raising layers up to l, an expand layer, then contract+expand layers up to
depth L.  The readout is the plain output weights when l == L, or the
a_t-weighted fan-in when the last layer is expanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .linalg import zeros_matrix, zeros_vector
from .network import DeepNetwork, Layer, ShallowNetwork
from .vandermonde import extraction_coefficients


@dataclass(frozen=True)
class IdentityCombination:
    """Coefficients a_t with  sum_t a_t (y + shift_t)^k  =  y  identically."""

    k: int
    shifts: Tuple[int, ...]
    a: Tuple[Fraction, ...]


def identity_combination(k: int) -> IdentityCombination:
    """The degree-k shifted-power representation of the identity map.

    The coefficients are the extraction row isolating the linear mixed
    monomial; |a_t| <= (k/2 + 1)^4.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    shifts = tuple(t - k // 2 for t in range(k + 1))
    a = tuple(extraction_coefficients(k, 1))
    return IdentityCombination(k=k, shifts=shifts, a=a)


def embed_param_count(k: int, L: int, n: int, d: int) -> int:
    """Declared parameter count of the depth-L embedding architecture:

    [(4L - 2)(k + 1) + d] * n.
    """
    return ((4 * L - 2) * (k + 1) + d) * n


def exponent_ladder(k: int, K: int, L: int) -> int:
    """The l with k^l == K, requiring 1 <= l <= L; raises if none exists."""
    power = k
    for level in range(1, L + 1):
        if power == K:
            return level
        power *= k
    raise ValueError(
        f"exponent not embeddable at this depth: {K} is not k^l for k={k}, 1 <= l <= {L}"
    )


def _expand_layer(k: int, n: int, width: int, combo: IdentityCombination) -> Layer:
    A = zeros_matrix(width, width)
    b = zeros_vector(width)
    one = Fraction(1)
    for m in range(n):
        base = 2 * (k + 1) * m
        for t, shift in enumerate(combo.shifts):
            A[base + 2 * t][m] = one
            A[base + 2 * t + 1][m] = -one
            b[base + 2 * t] = Fraction(shift)
            b[base + 2 * t + 1] = Fraction(-shift)
    return Layer(A, b)


def _contract_expand_layer(k: int, n: int, width: int, combo: IdentityCombination) -> Layer:
    sign = (-1) ** k
    A = zeros_matrix(width, width)
    b = zeros_vector(width)
    for m in range(n):
        base = 2 * (k + 1) * m
        for t_target, shift in enumerate(combo.shifts):
            plus = base + 2 * t_target
            minus = plus + 1
            for t, a_t in enumerate(combo.a):
                A[plus][base + 2 * t] = a_t
                A[plus][base + 2 * t + 1] = sign * a_t
                A[minus][base + 2 * t] = -a_t
                A[minus][base + 2 * t + 1] = -sign * a_t
            b[plus] = Fraction(shift)
            b[minus] = Fraction(-shift)
    return Layer(A, b)


def embed_shallow(f: ShallowNetwork, k: int, L: int) -> DeepNetwork:
    """Depth-L ReLU^k network computing exactly the same function as f.

    Requires f's exponent to be k^l for some 1 <= l <= L.  Every layer has
    width 2(k+1)n; hidden weights are bounded by max(B, (k/2+1)^4) and
    output weights by (k/2+1)^4 * M, where B and M bound f's weights and
    output weights.
    """
    if k < 2:
        raise ValueError(f"embedding requires k >= 2, got {k}")
    if L < 1:
        raise ValueError(f"depth must be >= 1, got {L}")
    level = exponent_ladder(k, f.k, L)
    n = f.width
    d = f.input_dim
    width = 2 * (k + 1) * n
    combo = identity_combination(k)

    layers: List[Layer] = []
    first_A = zeros_matrix(width, d)
    first_b = zeros_vector(width)
    for m in range(n):
        first_A[m] = list(f.A[m])
        first_b[m] = f.b[m]
    layers.append(Layer(first_A, first_b))

    for _ in range(2, level + 1):
        diag = zeros_matrix(width, width)
        for m in range(n):
            diag[m][m] = Fraction(1)
        layers.append(Layer(diag, zeros_vector(width)))

    expanded = level < L
    if expanded:
        layers.append(_expand_layer(k, n, width, combo))
        for _ in range(level + 2, L + 1):
            layers.append(_contract_expand_layer(k, n, width, combo))

    c = zeros_vector(width)
    sign = (-1) ** k
    if expanded:
        for m in range(n):
            base = 2 * (k + 1) * m
            for t, a_t in enumerate(combo.a):
                c[base + 2 * t] = f.c[m] * a_t
                c[base + 2 * t + 1] = f.c[m] * a_t * sign
    else:
        for m in range(n):
            c[m] = f.c[m]

    kernel_bound = (Fraction(k, 2) + 1) ** 4
    input_weight = max(
        [abs(w) for row in f.A for w in row] + [abs(v) for v in f.b],
        default=Fraction(0),
    )
    input_output = max((abs(w) for w in f.c), default=Fraction(0))
    return DeepNetwork(
        input_dim=d,
        k=k,
        layers=layers,
        c=c,
        declared_weight_bound=max(input_weight, kernel_bound),
        declared_output_bound=kernel_bound * input_output,
        declared_nonzero=embed_param_count(k, L, n, d),
    )

"""Compile polynomials of degree <= k^L into sparse deep ReLU^k networks.

The construction runs the shallow compiler once with exponent K = k^L and
unit weight bound, so every hidden direction lies in [-1, 1]^d, then
re-expresses that shallow ReLU^K network at depth L:

  * layer 1 scales the shallow directions by B, giving sigma_k of a
    B-scaled pre-activation in each slot;
  * layers 2..L are B-scaled diagonal passes: sigma_k applied to a
    nonnegative sigma_{k^i} value raises the power, so slot j holds
    sigma_{k^i}(w_j . x + b_j) times a known power of B;
  * the output weights divide out the accumulated scale
    B^(k + k^2 + ... + k^L) and apply the shallow output coefficients.

All widths equal 2(k^L + 1)^d.  The architecture allocates
2(2L + d)(k^L + 1)^d parameters (a dense first layer and output over the
pair slots, diagonals and biases elsewhere); that declared count is
attached to the network, since individual entries may still be zero for a
particular polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .linalg import zeros_vector
from .network import DeepNetwork, Layer
from .poly import Polynomial
from .shallow import compile_shallow


class DeepCounts(NamedTuple):
    widths: int
    nonzero: int


def expected_deep_counts(k: int, L: int, d: int) -> DeepCounts:
    """Widths 2(k^L+1)^d and declared nonzero count 2(2L+d)(k^L+1)^d."""
    pairs = (k**L + 1) ** d
    return DeepCounts(widths=2 * pairs, nonzero=2 * (2 * L + d) * pairs)


def scale_exponent(k: int, L: int) -> int:
    """k + k^2 + ... + k^L = k (k^L - 1)/(k - 1), the accumulated power of B."""
    return sum(k**i for i in range(1, L + 1))


def compile_deep(
    P: Polynomial,
    k: int,
    L: int,
    B: Fraction | int = 1,
    prune: bool = False,
) -> DeepNetwork:
    """Exact depth-L ReLU^k network realizing P (deg P <= k^L)."""
    if k < 2:
        raise ValueError(f"deep compilation requires k >= 2, got {k}")
    if L < 1:
        raise ValueError(f"depth must be >= 1, got {L}")
    B = Fraction(B)
    if B <= 0:
        raise ValueError(f"weight bound B must be positive, got {B}")
    K = k**L
    if P.degree > K:
        raise ValueError(f"degree exceeds k^L: deg P = {P.degree} > {K}")
    d = P.dimension

    stage = compile_shallow(P, K, B=1, prune=prune)
    width = stage.width

    layers = [Layer(A=[[B * w for w in row] for row in stage.A], b=[B * v for v in stage.b])]
    for _ in range(2, L + 1):
        diagonal = [[B if i == j else Fraction(0) for j in range(width)] for i in range(width)]
        layers.append(Layer(A=diagonal, b=zeros_vector(width)))

    unscale = B ** -scale_exponent(k, L)
    c = [unscale * w for w in stage.c]

    declared = None if prune else expected_deep_counts(k, L, d).nonzero
    return DeepNetwork(
        input_dim=d,
        k=k,
        layers=layers,
        c=c,
        declared_weight_bound=B,
        declared_output_bound=deep_output_bound(P, k, L, B),
        declared_nonzero=declared,
    )


def deep_output_bound(P: Polynomial, k: int, L: int, B: Fraction | int = 1) -> Fraction:
    """Guaranteed bound on the deep output weights:

    B^-(k (k^L - 1)/(k - 1)) (k^L/2 + 1)^(2(d+1)+k^L) * sum |a_alpha|.
    """
    B = Fraction(B)
    K = k**L
    coeff_sum = P.coefficient_l1()
    return (
        B ** -scale_exponent(k, L)
        * (Fraction(K, 2) + 1) ** (2 * (P.dimension + 1) + K)
        * coeff_sum
    )

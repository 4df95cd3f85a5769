"""Symbolic equality certificates for synthesized networks.

Point sampling can never prove that a piecewise-polynomial network equals a
polynomial, so certification is structural: the recognized constructions
(mirrored +/- unit pairs, positive diagonal power-raising chains,
expand / contract-expand identity blocks) are verified entry by entry, the
network is collapsed to the exact polynomial it realizes on all of R^d, and
the collapse is compared coefficient by coefficient against the target.
An exact evaluation at 128 deterministic rational points in the unit ball
runs as an independent backstop on every call.

Two identities drive the collapse, both valid for every real t and a > 0:

    t^k = sigma_k(t) + (-1)^k sigma_k(-t)        (pair collapse)
    sigma_k(a t) = a^k sigma_k(t)                (scale extraction)

Nonnegativity of power-raising inputs is established structurally (they
are sigma outputs times positive scales), never numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .embed import exponent_ladder, identity_combination, _contract_expand_layer, _expand_layer
from .network import (
    DeepNetwork,
    ExactEvaluator,
    Network,
    ShallowNetwork,
    _network_layers,
)
from .poly import MultiIndex, Polynomial, multinomial_expand

POINT_CHECK_COUNT = 128


class NotRecognizedError(ValueError):
    """The network does not exhibit a structure the certifier understands."""


@dataclass(frozen=True)
class CertificateReport:
    status: str  # "proven" | "refuted" | "not-recognized"
    residual: Optional[Polynomial]
    checked_structure: List[str] = field(default_factory=list)
    point_check: Tuple[int, int] = (0, 0)  # (count, failures)
    reason: Optional[str] = None

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "residual": None if self.residual is None else self.residual.to_json_dict(),
            "checked_structure": list(self.checked_structure),
            "point_check": {"count": self.point_check[0], "failures": self.point_check[1]},
            "reason": self.reason,
        }


def _van_der_corput(index: int, base: int) -> Fraction:
    value = Fraction(0)
    scale = Fraction(1, base)
    while index:
        index, digit = divmod(index, base)
        value += digit * scale
        scale /= base
    return value


_HALTON_BASES = (2, 3, 5, 7, 11, 13)


def rational_ball_points(d: int, count: int, seed: int = 0) -> List[List[Fraction]]:
    """Deterministic low-discrepancy rational points inside the unit ball.

    Halton points in [0,1)^d mapped to [-1,1]^d and shrunk by 1/d, which
    keeps the Euclidean norm at most 1/sqrt(d).  The seed offsets the
    sequence start so distinct checks use distinct points.
    """
    if d > len(_HALTON_BASES):
        raise ValueError(f"no Halton bases configured for dimension {d}")
    shrink = Fraction(1, d)
    points = []
    for i in range(count):
        index = seed * count + i + 1
        point = [
            (2 * _van_der_corput(index, _HALTON_BASES[j]) - 1) * shrink
            for j in range(d)
        ]
        points.append(point)
    return points


def reduce_to_polynomial(net: Network) -> Polynomial:
    """Collapse a compiled network to the exact polynomial it realizes.

    Recognized structure: first layer in adjacent mirrored pairs, interior
    layers strictly-positive diagonals with zero bias, output weights in the
    (gamma, (-1)^K gamma) pair ratio.  Raises NotRecognizedError otherwise.
    """
    layers = _network_layers(net)
    k = net.k
    first = layers[0]
    width = first.out_width
    if width % 2:
        raise NotRecognizedError(f"width {width} is odd; expected adjacent +/- pairs")

    for p in range(width // 2):
        top, bottom = first.A[2 * p], first.A[2 * p + 1]
        if any(x != -y for x, y in zip(top, bottom)) or first.b[2 * p] != -first.b[2 * p + 1]:
            raise NotRecognizedError(f"first-layer rows {2 * p} and {2 * p + 1} are not mirrored")

    scales = [Fraction(1)] * width
    for i, layer in enumerate(layers[1:], start=1):
        if layer.out_width != width or layer.in_width != width:
            raise NotRecognizedError(f"interior layer {i} is not square of width {width}")
        for r in range(width):
            for j, w in enumerate(layer.A[r]):
                if r != j and w != 0:
                    raise NotRecognizedError(f"interior layer {i} has off-diagonal weight at ({r}, {j})")
            if layer.A[r][r] <= 0:
                raise NotRecognizedError(f"interior layer {i} diagonal entry {r} is not positive")
            if layer.b[r] != 0:
                raise NotRecognizedError(f"interior layer {i} has a nonzero bias at {r}")
        for j in range(width):
            scales[j] = (layer.A[j][j] * scales[j]) ** k

    K = k ** len(layers)
    sign = (-1) ** K
    accumulated: Dict[MultiIndex, Fraction] = {}
    for p in range(width // 2):
        gamma_plus = net.c[2 * p] * scales[2 * p]
        gamma_minus = net.c[2 * p + 1] * scales[2 * p + 1]
        if gamma_minus != sign * gamma_plus:
            raise NotRecognizedError(
                f"output weights of pair {p} break the (-1)^K pairing ratio"
            )
        if gamma_plus == 0:
            continue
        expansion = multinomial_expand(first.A[2 * p], first.b[2 * p], K, cap=max(64, K))
        for mono, value in expansion.items():
            accumulated[mono] = accumulated.get(mono, Fraction(0)) + gamma_plus * value
    return Polynomial(net.input_dim, accumulated)


def _run_point_check(net: Network, target, count: int = POINT_CHECK_COUNT) -> Tuple[int, int]:
    points = rational_ball_points(net.input_dim, count, seed=0)
    net_eval = ExactEvaluator(net)
    if isinstance(target, Polynomial):
        reference = target.evaluate
    else:
        reference = ExactEvaluator(target)
    failures = sum(1 for x in points if net_eval(x) != reference(x))
    return count, failures


def _verify_identity_combination(k: int) -> None:
    combo = identity_combination(k)
    acc: Dict[MultiIndex, Fraction] = {}
    for shift, a_t in zip(combo.shifts, combo.a):
        for mono, value in multinomial_expand((1,), shift, k).items():
            acc[mono] = acc.get(mono, Fraction(0)) + a_t * value
    if Polynomial(1, acc) != Polynomial.variable(1, 0):
        raise NotRecognizedError(f"identity combination of degree {k} failed its expansion check")


def _certify_embedding(net: DeepNetwork, f: ShallowNetwork) -> List[str]:
    """Verify that net is the canonical depth-L embedding of f; returns facts."""
    facts: List[str] = []
    k, L = net.k, net.depth
    try:
        level = exponent_ladder(k, f.k, L)
    except ValueError as exc:
        raise NotRecognizedError(str(exc)) from None
    n = f.width
    width = 2 * (k + 1) * n
    if net.input_dim != f.input_dim:
        raise NotRecognizedError("input dimensions differ")
    if net.widths != [width] * L:
        raise NotRecognizedError(f"widths {net.widths} do not match the 2(k+1)n pattern {width}")

    _verify_identity_combination(k)
    combo = identity_combination(k)
    facts.append(f"identity combination for k={k} expands to the identity map")

    first = net.layers[0]
    for m in range(n):
        if first.A[m] != f.A[m] or first.b[m] != f.b[m]:
            raise NotRecognizedError(f"first-layer row {m} does not carry the unit's weights")
    for m in range(n, width):
        if any(w != 0 for w in first.A[m]) or first.b[m] != 0:
            raise NotRecognizedError(f"first-layer row {m} should be a zero slot")
    facts.append(f"first layer places the {n} unit pre-activations")

    for i in range(1, level):
        layer = net.layers[i]
        for r in range(width):
            expected_diag = Fraction(1) if r < n else Fraction(0)
            for j, w in enumerate(layer.A[r]):
                if w != (expected_diag if j == r else 0):
                    raise NotRecognizedError(f"raising layer {i} deviates at ({r}, {j})")
            if layer.b[r] != 0:
                raise NotRecognizedError(f"raising layer {i} has a nonzero bias at {r}")
    if level > 1:
        facts.append(
            f"{level - 1} power-raising layers lift sigma_{k} to sigma_{f.k} "
            "(inputs are sigma outputs, hence nonnegative)"
        )

    expanded = level < L
    if expanded:
        if net.layers[level] != _expand_layer(k, n, width, combo):
            raise NotRecognizedError(f"layer {level} is not the canonical expand layer")
        facts.append("expand layer fans each slot into the 2(k+1) shifted pair block")
        for i in range(level + 1, L):
            if net.layers[i] != _contract_expand_layer(k, n, width, combo):
                raise NotRecognizedError(f"layer {i} is not a contract+expand identity block")
        if L - level - 1:
            facts.append(
                f"{L - level - 1} contract+expand blocks restore each slot value pre-activation"
            )

    sign = (-1) ** k
    recovered: List[Fraction] = []
    if expanded:
        for m in range(n):
            base = 2 * (k + 1) * m
            pivot = next(t for t, a_t in enumerate(combo.a) if a_t != 0)
            c_m = net.c[base + 2 * pivot] / combo.a[pivot]
            for t, a_t in enumerate(combo.a):
                if net.c[base + 2 * t] != c_m * a_t or net.c[base + 2 * t + 1] != sign * c_m * a_t:
                    raise NotRecognizedError(f"readout block of unit {m} breaks the fan-in pattern")
            recovered.append(c_m)
        facts.append("readout contracts the expanded blocks with the identity coefficients")
    else:
        recovered = [net.c[m] for m in range(n)]
        for m in range(n, width):
            if net.c[m] != 0:
                raise NotRecognizedError(f"readout reads dead slot {m}")
        facts.append("readout reads the raised slots directly")
    if recovered != list(f.c):
        raise NotRecognizedError("recovered output weights differ from the target network")
    facts.append("surviving (w, u, c) triples match the target exactly")
    return facts


def certify_equal(
    net: Network,
    target: Union[Polynomial, ShallowNetwork],
) -> CertificateReport:
    """Prove or refute that net realizes the target, structurally + exactly."""
    if isinstance(target, Polynomial):
        if net.input_dim != target.dimension:
            return CertificateReport(
                status="not-recognized",
                residual=None,
                reason=f"network input dimension {net.input_dim} != polynomial dimension {target.dimension}",
            )
        count, failures = _run_point_check(net, target)
        try:
            reduced = reduce_to_polynomial(net)
        except NotRecognizedError as exc:
            return CertificateReport(
                status="not-recognized",
                residual=None,
                point_check=(count, failures),
                reason=str(exc),
            )
        residual = reduced - target
        facts = [
            "first layer consists of mirrored +/- unit pairs",
            "interior layers are positive diagonals with zero bias",
            "output weights obey the (-1)^K pairing ratio",
            "network collapsed to an explicit polynomial and compared exactly",
        ]
        if residual.is_zero and failures == 0:
            return CertificateReport("proven", residual, facts, (count, failures))
        return CertificateReport("refuted", residual, facts, (count, failures))

    if isinstance(target, ShallowNetwork):
        count, failures = _run_point_check(net, target)
        if isinstance(net, ShallowNetwork):
            same = (
                net.input_dim == target.input_dim
                and net.k == target.k
                and net.A == target.A
                and net.b == target.b
                and net.c == target.c
            )
            if same and failures == 0:
                return CertificateReport(
                    "proven", None, ["networks are identical unit for unit"], (count, failures)
                )
            return CertificateReport(
                "not-recognized",
                None,
                point_check=(count, failures),
                reason="shallow networks differ and no embedding structure applies",
            )
        try:
            facts = _certify_embedding(net, target)
        except NotRecognizedError as exc:
            return CertificateReport(
                status="not-recognized",
                residual=None,
                point_check=(count, failures),
                reason=str(exc),
            )
        if failures == 0:
            return CertificateReport("proven", None, facts, (count, failures))
        return CertificateReport(
            "refuted", None, facts, (count, failures), reason="exact point check failed"
        )

    raise TypeError(f"unsupported certify target {type(target).__name__}")

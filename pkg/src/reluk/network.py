"""Data model for shallow and deep ReLU^k networks with exact weights.

A network holds exact rational weight matrices, biases, and output weights,
plus the activation exponent k.  The activation is sigma_k(t) = t^k for
t >= 0 and 0 otherwise; a deep network computes

    h_0 = x,   h_{i+1} = sigma_k(A_i h_i + b_i),   output = c . h_L.

A shallow network is the one-layer case but is kept as its own type because
synthesis and embedding treat it as a unit (and it may carry an exponent
different from the repo-wide k).

Networks serialize to a strict JSON schema with rationals as "p/q" strings,
so round-trips are bit-exact.  Two bookkeeping fields never serialize: the
declared architectural parameter count (see count_parameters) and declared
weight/output bounds attached by the compilers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .linalg import ExactMatrix, ExactVector
from .poly import format_rational, parse_rational


def relu_power(t: Fraction | float, k: int):
    """sigma_k(t): t^k on the nonnegative side, 0 on the negative side."""
    if t > 0:
        return t**k
    return type(t)(0)


@dataclass
class Layer:
    """One affine stage: weights A (rows x cols) and bias b (rows)."""

    A: ExactMatrix
    b: ExactVector

    def __post_init__(self) -> None:
        if len(self.A) != len(self.b):
            raise ValueError(f"layer has {len(self.A)} weight rows but {len(self.b)} biases")
        if self.A and any(len(row) != len(self.A[0]) for row in self.A):
            raise ValueError("ragged weight rows in layer")

    @property
    def out_width(self) -> int:
        return len(self.A)

    @property
    def in_width(self) -> int:
        return len(self.A[0]) if self.A else 0


@dataclass
class ShallowNetwork:
    """x -> c . sigma_k(Ax + b) with exact rational parameters."""

    input_dim: int
    k: int
    A: ExactMatrix
    b: ExactVector
    c: ExactVector
    declared_weight_bound: Optional[Fraction] = field(default=None, compare=False)
    declared_output_bound: Optional[Fraction] = field(default=None, compare=False)
    declared_nonzero: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.input_dim < 1:
            raise ValueError("input dimension must be >= 1")
        if self.k < 1:
            raise ValueError("activation exponent must be >= 1")
        if not (len(self.A) == len(self.b) == len(self.c)):
            raise ValueError("A, b, c must share the unit count")
        if self.A and any(len(row) != self.input_dim for row in self.A):
            raise ValueError("weight row length must equal the input dimension")

    @property
    def width(self) -> int:
        return len(self.A)

    @property
    def layers(self) -> List[Layer]:
        return [Layer(self.A, self.b)]

    @property
    def depth(self) -> int:
        return 1


@dataclass
class DeepNetwork:
    """Fully general ReLU^k network: layers applied in order, then c."""

    input_dim: int
    k: int
    layers: List[Layer]
    c: ExactVector
    declared_weight_bound: Optional[Fraction] = field(default=None, compare=False)
    declared_output_bound: Optional[Fraction] = field(default=None, compare=False)
    declared_nonzero: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.input_dim < 1:
            raise ValueError("input dimension must be >= 1")
        if self.k < 1:
            raise ValueError("activation exponent must be >= 1")
        if not self.layers:
            raise ValueError("deep network needs at least one layer")
        widths = [self.input_dim] + [layer.out_width for layer in self.layers]
        for i, layer in enumerate(self.layers):
            if layer.in_width != widths[i]:
                raise ValueError(
                    f"layer {i} expects input width {layer.in_width}, got {widths[i]}"
                )
        if len(self.c) != widths[-1]:
            raise ValueError(f"output vector has {len(self.c)} entries, expected {widths[-1]}")

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def widths(self) -> List[int]:
        return [layer.out_width for layer in self.layers]


Network = Union[ShallowNetwork, DeepNetwork]


class ParameterCount(NamedTuple):
    dense: int
    nonzero: int


@dataclass(frozen=True)
class BoundsReport:
    """Exact max-norms of a network against declared bounds."""

    max_weight: Fraction
    max_output: Fraction
    declared_weight_bound: Fraction
    declared_output_bound: Fraction
    dense_count: int
    nonzero_count: int
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "max_weight": format_rational(self.max_weight),
            "max_output": format_rational(self.max_output),
            "declared_B": format_rational(self.declared_weight_bound),
            "declared_M": format_rational(self.declared_output_bound),
            "dense_count": self.dense_count,
            "nonzero_count": self.nonzero_count,
            "pass": self.passed,
        }


def _network_layers(net: Network) -> List[Layer]:
    return net.layers if isinstance(net, DeepNetwork) else [Layer(net.A, net.b)]


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


class ExactEvaluator:
    """Sparse prepared form of a network for fast exact forward passes.

    Synthesized networks are mostly zeros, so each layer keeps only its
    nonzero (column, weight) pairs per row.  The forward pass runs on
    integer numerators over one shared denominator per layer (weights are
    pre-scaled to integers), which avoids per-operation rational
    normalization; the result is reduced once at the end.
    """

    def __init__(self, net: Network):
        self.k = net.k
        self.input_dim = net.input_dim
        self.layers = []
        for layer in _network_layers(net):
            scale = 1
            for row in layer.A:
                for w in row:
                    scale = _lcm(scale, w.denominator)
            for v in layer.b:
                scale = _lcm(scale, v.denominator)
            rows = [
                [(j, int(w * scale)) for j, w in enumerate(row) if w != 0]
                for row in layer.A
            ]
            bias = [int(v * scale) for v in layer.b]
            self.layers.append((rows, bias, scale))
        out_scale = 1
        for w in net.c:
            out_scale = _lcm(out_scale, w.denominator)
        self.c = [(j, int(w * out_scale)) for j, w in enumerate(net.c) if w != 0]
        self.out_scale = out_scale

    def __call__(self, point: Sequence[Fraction | int]) -> Fraction:
        if len(point) != self.input_dim:
            raise ValueError(f"point has length {len(point)}, expected {self.input_dim}")
        xs = [Fraction(x) for x in point]
        den = 1
        for x in xs:
            den = _lcm(den, x.denominator)
        values = [int(x * den) for x in xs]
        k = self.k
        for rows, bias, scale in self.layers:
            z = [
                sum(w * values[j] for j, w in row) + bias[i] * den
                for i, row in enumerate(rows)
            ]
            values = [v**k if v > 0 else 0 for v in z]
            den = (scale * den) ** k
        total = sum(w * values[j] for j, w in self.c)
        return Fraction(total, self.out_scale * den)


def forward_trace(net: Network, point: Sequence[Fraction | int]) -> List[List[Fraction]]:
    """Exact hidden activation vectors h_1 .. h_L at one point."""
    if len(point) != net.input_dim:
        raise ValueError(f"point has length {len(point)}, expected {net.input_dim}")
    values = [Fraction(x) for x in point]
    trace: List[List[Fraction]] = []
    for layer in _network_layers(net):
        values = [
            relu_power(sum((w * x for w, x in zip(row, values) if w), layer.b[i]), net.k)
            for i, row in enumerate(layer.A)
        ]
        trace.append(values)
    return trace


def evaluate(net: Network, point: Sequence, mode: str = "exact"):
    """Forward pass at one point; mode "exact" (rational) or "float64"."""
    if mode == "exact":
        return ExactEvaluator(net)(point)
    if mode == "float64":
        values = np.asarray([float(x) for x in point], dtype=np.float64)
        if values.shape[0] != net.input_dim:
            raise ValueError(f"point has length {values.shape[0]}, expected {net.input_dim}")
        return float(batch_evaluate_float(net, values.reshape(1, -1))[0])
    raise ValueError(f"unknown evaluation mode {mode!r}")


def _float_stages(net: Network):
    width = net.input_dim
    for layer in _network_layers(net):
        A = np.zeros((layer.out_width, width), dtype=np.float64)
        for i, row in enumerate(layer.A):
            A[i] = [float(w) for w in row]
        b = np.array([float(v) for v in layer.b], dtype=np.float64)
        width = layer.out_width
        yield A, b


def batch_evaluate_float(net: Network, points: np.ndarray) -> np.ndarray:
    """float64 forward pass for an (m, d) array of points; returns (m,)."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != net.input_dim:
        raise ValueError(f"points must be (m, {net.input_dim}), got {points.shape}")
    h = points
    k = net.k
    for A, b in _float_stages(net):
        z = h @ A.T + b
        h = np.where(z > 0, z, 0.0) ** k
    c = np.array([float(w) for w in net.c], dtype=np.float64)
    return h @ c


def count_parameters(net: Network) -> ParameterCount:
    """(dense, nonzero) parameter counts.

    dense follows the fully-connected formula n_L + sum_i n_i (n_{i-1}+1).
    nonzero is the count of architectural parameters: compilers declare it
    (their sparsity pattern is part of the construction, including slots
    whose value happens to be zero for a particular input); for plain or
    deserialized networks it falls back to counting nonzero entries.
    """
    layers = _network_layers(net)
    widths = [net.input_dim] + [layer.out_width for layer in layers]
    dense = widths[-1] + sum(widths[i + 1] * (widths[i] + 1) for i in range(len(layers)))
    if net.declared_nonzero is not None:
        return ParameterCount(dense, net.declared_nonzero)
    nonzero = sum(
        sum(1 for row in layer.A for w in row if w != 0)
        + sum(1 for v in layer.b if v != 0)
        for layer in layers
    )
    nonzero += sum(1 for w in net.c if w != 0)
    return ParameterCount(dense, nonzero)


def check_bounds(net: Network, weight_bound: Fraction | int, output_bound: Fraction | int) -> BoundsReport:
    """Exact max-norm report: hidden weights/biases vs B, output weights vs M."""
    weight_bound = Fraction(weight_bound)
    output_bound = Fraction(output_bound)
    max_weight = Fraction(0)
    for layer in _network_layers(net):
        for row in layer.A:
            for w in row:
                if abs(w) > max_weight:
                    max_weight = abs(w)
        for v in layer.b:
            if abs(v) > max_weight:
                max_weight = abs(v)
    max_output = max((abs(w) for w in net.c), default=Fraction(0))
    counts = count_parameters(net)
    passed = max_weight <= weight_bound and max_output <= output_bound
    return BoundsReport(
        max_weight=max_weight,
        max_output=max_output,
        declared_weight_bound=weight_bound,
        declared_output_bound=output_bound,
        dense_count=counts.dense,
        nonzero_count=counts.nonzero,
        passed=passed,
    )


# -- serialization ----------------------------------------------------------


def _rational_grid(rows: ExactMatrix) -> List[List[str]]:
    return [[format_rational(w) for w in row] for row in rows]


def to_json_dict(net: Network) -> dict:
    doc = {
        "kind": "shallow" if isinstance(net, ShallowNetwork) else "deep",
        "k": net.k,
        "input_dim": net.input_dim,
        "layers": [
            {"A": _rational_grid(layer.A), "b": [format_rational(v) for v in layer.b]}
            for layer in _network_layers(net)
        ],
        "c": [format_rational(w) for w in net.c],
    }
    if net.declared_weight_bound is not None and net.declared_output_bound is not None:
        doc["declared_bounds"] = {
            "B": format_rational(net.declared_weight_bound),
            "M": format_rational(net.declared_output_bound),
        }
    return doc


def serialize(net: Network) -> bytes:
    return (json.dumps(to_json_dict(net), indent=2, sort_keys=True) + "\n").encode("utf-8")


def _parse_rational_at(value: object, path: str) -> Fraction:
    if not isinstance(value, str):
        raise ValueError(f"{path}: rational must be a string, got {type(value).__name__}")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def from_json_dict(doc: object) -> Network:
    if not isinstance(doc, dict):
        raise ValueError("network document must be a JSON object")
    allowed = {"kind", "k", "input_dim", "layers", "c", "declared_bounds"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown network fields: {sorted(unknown)}")
    for required in ("kind", "k", "input_dim", "layers", "c"):
        if required not in doc:
            raise ValueError(f'missing network field "{required}"')
    kind = doc["kind"]
    if kind not in ("shallow", "deep"):
        raise ValueError(f'kind: expected "shallow" or "deep", got {kind!r}')
    k = doc["k"]
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k: must be a positive integer, got {k!r}")
    input_dim = doc["input_dim"]
    if not isinstance(input_dim, int) or input_dim < 1:
        raise ValueError(f"input_dim: must be a positive integer, got {input_dim!r}")
    raw_layers = doc["layers"]
    if not isinstance(raw_layers, list) or not raw_layers:
        raise ValueError("layers: must be a non-empty list")
    if kind == "shallow" and len(raw_layers) != 1:
        raise ValueError(f"layers: a shallow network must have exactly 1 layer, got {len(raw_layers)}")

    layers: List[Layer] = []
    previous_width = input_dim
    for i, raw in enumerate(raw_layers):
        if not isinstance(raw, dict) or set(raw) != {"A", "b"}:
            raise ValueError(f'layers[{i}]: must be an object with fields "A" and "b"')
        raw_A, raw_b = raw["A"], raw["b"]
        if not isinstance(raw_A, list) or not isinstance(raw_b, list):
            raise ValueError(f"layers[{i}]: A must be a list of rows and b a list")
        if len(raw_A) != len(raw_b):
            raise ValueError(f"layers[{i}]: {len(raw_A)} weight rows vs {len(raw_b)} biases")
        A: ExactMatrix = []
        for r, raw_row in enumerate(raw_A):
            if not isinstance(raw_row, list) or len(raw_row) != previous_width:
                raise ValueError(
                    f"layers[{i}].A[{r}]: row must have {previous_width} entries"
                )
            A.append([_parse_rational_at(v, f"layers[{i}].A[{r}][{j}]") for j, v in enumerate(raw_row)])
        b = [_parse_rational_at(v, f"layers[{i}].b[{r}]") for r, v in enumerate(raw_b)]
        layers.append(Layer(A, b))
        previous_width = len(A)

    raw_c = doc["c"]
    if not isinstance(raw_c, list) or len(raw_c) != previous_width:
        raise ValueError(f"c: must be a list of {previous_width} rationals")
    c = [_parse_rational_at(v, f"c[{j}]") for j, v in enumerate(raw_c)]

    declared_weight = declared_output = None
    if "declared_bounds" in doc:
        bounds = doc["declared_bounds"]
        if not isinstance(bounds, dict) or set(bounds) != {"B", "M"}:
            raise ValueError('declared_bounds: must be an object with fields "B" and "M"')
        declared_weight = _parse_rational_at(bounds["B"], "declared_bounds.B")
        declared_output = _parse_rational_at(bounds["M"], "declared_bounds.M")

    if kind == "shallow":
        return ShallowNetwork(
            input_dim=input_dim,
            k=k,
            A=layers[0].A,
            b=layers[0].b,
            c=c,
            declared_weight_bound=declared_weight,
            declared_output_bound=declared_output,
        )
    return DeepNetwork(
        input_dim=input_dim,
        k=k,
        layers=layers,
        c=c,
        declared_weight_bound=declared_weight,
        declared_output_bound=declared_output,
    )


def deserialize(data: bytes | str) -> Network:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid network JSON: {exc}") from None
    return from_json_dict(doc)

"""Target functions for the approximation experiments.

Targets carry the ground truth the fitted competitors are measured
against, plus whatever reference quantity the experiment reports:

  * analytic targets know their geometric decay ratio (from the nearest
    complex singularity) or that they are entire;
  * smoothness-scale targets (|x|^r) know the reference slope -r;
  * variation targets are explicit convex combinations of ridge elements
    sigma_K(w . x + b), so their variation norm is bounded by the sum of
    |weights| by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class DictionaryElement:
    """One ridge function sigma_K(direction . x + offset), |direction|_2 = 1."""

    direction: Tuple[float, ...]
    offset: float
    exponent: int

    def __post_init__(self) -> None:
        norm = math.sqrt(sum(w * w for w in self.direction))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"direction must be a unit vector, |w| = {norm}")
        if not -1.0 <= self.offset <= 1.0:
            raise ValueError(f"offset must lie in [-1, 1], got {self.offset}")
        if self.exponent < 1:
            raise ValueError("exponent must be >= 1")

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        z = points @ np.asarray(self.direction) + self.offset
        return np.where(z > 0, z, 0.0) ** self.exponent


@dataclass(frozen=True)
class TargetFunction:
    """A named target: float evaluator plus experiment metadata."""

    kind: str  # "analytic" | "sobolev" | "variation"
    name: str
    dimension: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    metadata: Dict[str, object] = field(default_factory=dict)
    combination: Optional[List[Tuple[float, DictionaryElement]]] = None

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluator(np.asarray(points, dtype=np.float64))


def runge_target(a: float = 25.0) -> TargetFunction:
    """f(x) = 1/(1 + a x^2): analytic with poles at +-i/sqrt(a).

    The per-degree geometric decay ratio of its best polynomial
    approximation on [-1, 1] is 1/(t + sqrt(1 + t^2)) with t = 1/sqrt(a);
    for a = 25 that is 5/(1 + sqrt(26)) ~ 0.8198.
    """
    if a <= 0:
        raise ValueError("runge parameter must be positive")
    t = 1.0 / math.sqrt(a)
    ratio = 1.0 / (t + math.sqrt(1.0 + t * t))
    return TargetFunction(
        kind="analytic",
        name=f"runge(a={a:g})",
        dimension=1,
        evaluator=lambda x: 1.0 / (1.0 + a * x * x),
        metadata={"reference_ratio": ratio, "pole_imag": t, "entire": False},
    )


def exp_target() -> TargetFunction:
    """f(x) = exp(x): entire, so decay is super-geometric (no fixed ratio)."""
    return TargetFunction(
        kind="analytic",
        name="exp",
        dimension=1,
        evaluator=np.exp,
        metadata={"reference_ratio": None, "entire": True},
    )


def abs_power_target(r: int) -> TargetFunction:
    """f(x) = |x|^r: finite-smoothness scale; reference log-log slope is -r."""
    if r < 1:
        raise ValueError("power must be >= 1")
    return TargetFunction(
        kind="sobolev",
        name=f"|x|^{r}" if r != 1 else "|x|",
        dimension=1,
        evaluator=lambda x: np.abs(x) ** r,
        metadata={"reference_slope": -float(r), "smoothness": r},
    )


def polynomial_target(coeffs: Sequence[float]) -> TargetFunction:
    """A univariate polynomial given by power-basis float coefficients."""
    coeffs = [float(c) for c in coeffs]
    return TargetFunction(
        kind="sobolev",
        name=f"poly(degree={max(len(coeffs) - 1, 0)})",
        dimension=1,
        evaluator=lambda x, c=tuple(coeffs): np.polynomial.polynomial.polyval(x, c),
        metadata={"reference_slope": None, "polynomial_degree": max(len(coeffs) - 1, 0)},
    )


def variation_target(
    elements: Sequence[Tuple[float, DictionaryElement]],
    name: str = "variation-combination",
) -> TargetFunction:
    """Explicit combination sum_i weight_i * sigma_K(w_i . x + b_i).

    The variation norm is at most sum |weight_i|, recorded as norm_bound.
    """
    elements = [(float(w), e) for w, e in elements]
    if not elements:
        raise ValueError("variation target needs at least one element")
    dimension = len(elements[0][1].direction)
    exponent = elements[0][1].exponent
    if any(len(e.direction) != dimension or e.exponent != exponent for _, e in elements):
        raise ValueError("all elements must share dimension and exponent")

    def evaluate(points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        total = np.zeros(points.shape[0])
        for weight, element in elements:
            total += weight * element.evaluate(points)
        return total

    norm_bound = sum(abs(w) for w, _ in elements)
    return TargetFunction(
        kind="variation",
        name=name,
        dimension=dimension,
        evaluator=evaluate,
        metadata={"norm_bound": norm_bound, "exponent": exponent, "count": len(elements)},
        combination=list(elements),
    )


def random_variation_target(
    rng: np.random.Generator,
    exponent: int,
    dimension: int,
    count: int = 20,
    norm: float = 1.0,
) -> TargetFunction:
    """Convex combination of `count` random dictionary elements, sum |w| = norm."""
    weights = rng.dirichlet(np.ones(count)) * norm
    signs = rng.choice([-1.0, 1.0], size=count)
    elements = []
    for i in range(count):
        if dimension == 1:
            direction = (float(rng.choice([-1.0, 1.0])),)
        else:
            angle = float(rng.uniform(0.0, 2.0 * math.pi))
            direction = tuple(
                [math.cos(angle), math.sin(angle)] + [0.0] * (dimension - 2)
            )
        offset = float(rng.uniform(-1.0, 1.0))
        elements.append(
            (float(weights[i] * signs[i]), DictionaryElement(direction, offset, exponent))
        )
    return variation_target(elements, name=f"random-variation(K={exponent}, n={count})")


def make_target(spec: dict) -> TargetFunction:
    """Build a target from its config JSON description."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError('target spec must be an object with a "kind" field')
    kind = spec["kind"]
    if kind == "runge":
        return runge_target(float(spec.get("a", 25.0)))
    if kind == "exp":
        return exp_target()
    if kind == "abs_power":
        return abs_power_target(int(spec.get("r", 1)))
    if kind == "polynomial":
        return polynomial_target(spec.get("coeffs", [0.0]))
    if kind == "variation":
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        return random_variation_target(
            rng,
            exponent=int(spec["exponent"]),
            dimension=int(spec.get("d", 2)),
            count=int(spec.get("count", 20)),
            norm=float(spec.get("norm", 1.0)),
        )
    raise ValueError(f"unknown target kind {kind!r}")

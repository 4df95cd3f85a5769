"""Orthogonal greedy fitting over a discretized ridge dictionary.

The dictionary is a finite slice of {sigma_K(w . x + b) : |w|_2 = 1,
|b| <= 1}: a fixed set of quasi-uniform directions (the two signs in one
dimension, equi-angular directions in two) crossed with a uniform offset
grid.  Each greedy step selects the element whose normalized correlation
with the current residual is largest, then re-projects the target onto the
span of everything selected so far (least squares), so the sampled L2 error
is non-increasing in the width by construction.

Selected elements snapshot into exact-weight ShallowNetwork objects: every
float becomes its exact binary rational, so the embedding stage downstream
can certify and evaluate them exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from ..network import ShallowNetwork
from .targets import DictionaryElement

MAX_GREEDY_WIDTH = 64


def make_dictionary(
    exponent: int,
    dimension: int,
    directions: int = 64,
    offsets: int = 33,
) -> List[DictionaryElement]:
    """The finite dictionary: signs (d=1) or equi-angular directions (d=2)."""
    if dimension == 1:
        dirs: List[Tuple[float, ...]] = [(1.0,), (-1.0,)]
    elif dimension == 2:
        dirs = [
            (math.cos(2.0 * math.pi * j / directions), math.sin(2.0 * math.pi * j / directions))
            for j in range(directions)
        ]
    else:
        raise ValueError("dictionary supports d in {1, 2}")
    offs = np.linspace(-1.0, 1.0, offsets)
    return [
        DictionaryElement(direction, float(b), exponent)
        for direction in dirs
        for b in offs
    ]


@dataclass
class GreedyResult:
    """Fit trajectory: one snapshot network per requested width."""

    widths: List[int]
    networks: List[ShallowNetwork]
    errors: List[float]  # sampled L2 error at each snapshot width
    selected: List[DictionaryElement] = field(default_factory=list)
    dropped: List[str] = field(default_factory=list)  # rank-loss events


def _exact_network(
    elements: Sequence[DictionaryElement],
    coefficients: np.ndarray,
    dimension: int,
    exponent: int,
) -> ShallowNetwork:
    A = [[Fraction(float(w)) for w in e.direction] for e in elements]
    b = [Fraction(float(e.offset)) for e in elements]
    c = [Fraction(float(v)) for v in coefficients]
    return ShallowNetwork(input_dim=dimension, k=exponent, A=A, b=b, c=c)


def greedy_fit(
    points: np.ndarray,
    values: np.ndarray,
    exponent: int,
    widths: Sequence[int],
    dictionary: Sequence[DictionaryElement] | None = None,
) -> GreedyResult:
    """Orthogonal greedy approximation of sampled values over the dictionary.

    `points` is (m, d), `values` is (m,); `widths` lists the snapshot widths
    (each <= MAX_GREEDY_WIDTH).  Returns exact-weight shallow networks of
    exponent `exponent`, one per width, plus the sampled L2 errors.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    values = np.asarray(values, dtype=np.float64).ravel()
    if points.shape[0] != values.shape[0]:
        raise ValueError("points and values must have matching length")
    dimension = points.shape[1]
    widths = sorted(set(int(w) for w in widths))
    if not widths or widths[0] < 1:
        raise ValueError("widths must be positive")
    if widths[-1] > MAX_GREEDY_WIDTH:
        raise ValueError(f"width {widths[-1]} exceeds cap {MAX_GREEDY_WIDTH}")
    if dictionary is None:
        dictionary = make_dictionary(exponent, dimension)

    m = points.shape[0]
    features = np.column_stack([e.evaluate(points) for e in dictionary])
    norms = np.sqrt((features**2).mean(axis=0))
    usable = norms > 1e-14

    selected_idx: List[int] = []
    result = GreedyResult(widths=[], networks=[], errors=[])
    residual = values.copy()
    banned = np.zeros(len(dictionary), dtype=bool)
    coefficients = np.zeros(0)

    while len(selected_idx) < widths[-1]:
        correlations = np.abs(features.T @ residual) / m
        with np.errstate(invalid="ignore", divide="ignore"):
            scores = np.where(usable & ~banned, correlations / norms, -np.inf)
        for i in selected_idx:
            scores[i] = -np.inf
        pick = int(np.argmax(scores))
        if not np.isfinite(scores[pick]):
            result.dropped.append("dictionary exhausted before reaching the last width")
            break
        candidate = selected_idx + [pick]
        basis = features[:, candidate]
        solution, _, rank, _ = np.linalg.lstsq(basis, values, rcond=None)
        if rank < len(candidate):
            banned[pick] = True
            result.dropped.append(
                f"dropped element {pick} at width {len(candidate)}: projection rank loss"
            )
            continue
        selected_idx = candidate
        coefficients = solution
        residual = values - basis @ solution
        width = len(selected_idx)
        if width in widths:
            elements = [dictionary[i] for i in selected_idx]
            result.widths.append(width)
            result.networks.append(_exact_network(elements, coefficients, dimension, exponent))
            result.errors.append(float(np.sqrt((residual**2).mean())))
            result.selected = elements
    return result

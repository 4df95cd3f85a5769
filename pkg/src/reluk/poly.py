"""Exact multivariate polynomials over the rationals.

A polynomial in d variables is a sparse map from exponent multi-indices to
rational coefficients:

    x1^2 * x2 + 3   (d=2)   ->   {(2, 1): Fraction(1), (0, 0): Fraction(3)}

Coefficients are `fractions.Fraction`, so all arithmetic is exact and
identity testing is reliable.  Zero coefficients are never stored; the zero
polynomial has an empty term map.

Rationals serialize as strings "p/q" in lowest terms with q > 0 ("p" alone
when q == 1).  That string form is the interchange representation used by
every file format in this repo.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, gcd
from typing import Dict, Iterator, Mapping, Sequence, Tuple

MultiIndex = Tuple[int, ...]

#: Largest power multinomial_expand will expand without complaint.
DEFAULT_EXPANSION_CAP = 64


class ExpansionCapError(ValueError):
    """Raised when a requested power expansion would be too large."""


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" (or plain "p") into an exact rational.

    Rejects anything Fraction would silently accept but the interchange
    format forbids (floats, whitespace-embedded junk, zero denominators
    reported with a clear message).
    """
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string, got {type(text).__name__}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in rational {text!r}")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    """Render a rational as "p/q" in lowest terms, or "p" when integral."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def index_degree(alpha: MultiIndex) -> int:
    """Total degree |alpha|_1 of a multi-index."""
    return sum(alpha)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("dimension", "terms")

    def __init__(self, dimension: int, terms: Mapping[MultiIndex, Fraction] | None = None):
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        clean: Dict[MultiIndex, Fraction] = {}
        for alpha, coeff in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dimension:
                raise ValueError(f"multi-index {alpha} has length {len(alpha)}, expected {dimension}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in multi-index {alpha}")
            c = Fraction(coeff)
            if c != 0:
                clean[alpha] = c
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls, dimension: int) -> "Polynomial":
        return cls(dimension, {})

    @classmethod
    def constant(cls, dimension: int, value: Fraction | int) -> "Polynomial":
        return cls(dimension, {(0,) * dimension: Fraction(value)})

    @classmethod
    def variable(cls, dimension: int, index: int) -> "Polynomial":
        """The polynomial x_index (0-based)."""
        if not 0 <= index < dimension:
            raise ValueError(f"variable index {index} out of range for dimension {dimension}")
        alpha = [0] * dimension
        alpha[index] = 1
        return cls(dimension, {tuple(alpha): Fraction(1)})

    @classmethod
    def monomial(cls, alpha: MultiIndex, coeff: Fraction | int = 1) -> "Polynomial":
        return cls(len(alpha), {tuple(alpha): Fraction(coeff)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Max total degree of stored terms; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(sum(alpha) for alpha in self.terms)

    def coefficient(self, alpha: MultiIndex) -> Fraction:
        return self.terms.get(tuple(alpha), Fraction(0))

    def coefficient_l1(self) -> Fraction:
        """Sum of absolute values of all coefficients."""
        return sum((abs(c) for c in self.terms.values()), Fraction(0))

    def items(self) -> Iterator[Tuple[MultiIndex, Fraction]]:
        return iter(self.terms.items())

    def _check_same_dimension(self, other: "Polynomial") -> None:
        if self.dimension != other.dimension:
            raise ValueError(f"dimension mismatch: {self.dimension} vs {other.dimension}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_same_dimension(other)
        out = dict(self.terms)
        for alpha, c in other.terms.items():
            out[alpha] = out.get(alpha, Fraction(0)) + c
        return Polynomial(self.dimension, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dimension, {a: -c for a, c in self.terms.items()})

    def scale(self, factor: Fraction | int) -> "Polynomial":
        factor = Fraction(factor)
        if factor == 0:
            return Polynomial.zero(self.dimension)
        return Polynomial(self.dimension, {a: c * factor for a, c in self.terms.items()})

    def __mul__(self, other: "Polynomial | Fraction | int") -> "Polynomial":
        if isinstance(other, (Fraction, int)):
            return self.scale(other)
        self._check_same_dimension(other)
        out: Dict[MultiIndex, Fraction] = {}
        for a1, c1 in self.terms.items():
            for a2, c2 in other.terms.items():
                mono = tuple(e1 + e2 for e1, e2 in zip(a1, a2))
                out[mono] = out.get(mono, Fraction(0)) + c1 * c2
        return Polynomial(self.dimension, out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Polynomial":
        # Plain repeated multiplication; kept naive on purpose so it can
        # serve as an independent cross-check for multinomial_expand.
        if power < 0:
            raise ValueError("negative powers are not defined for polynomials")
        result = Polynomial.constant(self.dimension, 1)
        for _ in range(power):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dimension == other.dimension and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.dimension, frozenset(self.terms.items())))

    def evaluate(self, point: Sequence[Fraction | int]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.dimension:
            raise ValueError(f"point has length {len(point)}, expected {self.dimension}")
        xs = [Fraction(x) for x in point]
        total = Fraction(0)
        for alpha, coeff in self.terms.items():
            value = coeff
            for x, e in zip(xs, alpha):
                if e:
                    value *= x**e
            total += value
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        """float64 value at a point (coefficients rounded to float64)."""
        if len(point) != self.dimension:
            raise ValueError(f"point has length {len(point)}, expected {self.dimension}")
        total = 0.0
        for alpha, coeff in self.terms.items():
            value = float(coeff)
            for x, e in zip(point, alpha):
                if e:
                    value *= float(x) ** e
            total += value
        return total

    def __repr__(self) -> str:
        if self.is_zero:
            return f"Polynomial({self.dimension}, 0)"
        bits = []
        for alpha in sorted(self.terms):
            mono = "*".join(f"x{i + 1}^{e}" for i, e in enumerate(alpha) if e) or "1"
            bits.append(f"{format_rational(self.terms[alpha])}*{mono}")
        return f"Polynomial({self.dimension}, {' + '.join(bits)})"

    # -- interchange format ------------------------------------------------

    def to_json_dict(self) -> dict:
        """{"d": ..., "terms": [{"alpha": [...], "a": "p/q"}, ...]} with sorted terms."""
        return {
            "d": self.dimension,
            "terms": [
                {"alpha": list(alpha), "a": format_rational(self.terms[alpha])}
                for alpha in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: object) -> "Polynomial":
        if not isinstance(doc, dict):
            raise ValueError("polynomial document must be a JSON object")
        unknown = set(doc) - {"d", "terms"}
        if unknown:
            raise ValueError(f"unknown polynomial fields: {sorted(unknown)}")
        if "d" not in doc or "terms" not in doc:
            raise ValueError('polynomial document requires fields "d" and "terms"')
        dimension = doc["d"]
        if not isinstance(dimension, int) or dimension < 1:
            raise ValueError(f'"d" must be a positive integer, got {dimension!r}')
        terms: Dict[MultiIndex, Fraction] = {}
        if not isinstance(doc["terms"], list):
            raise ValueError('"terms" must be a list')
        for pos, entry in enumerate(doc["terms"]):
            if not isinstance(entry, dict) or set(entry) != {"alpha", "a"}:
                raise ValueError(f'terms[{pos}] must be an object with fields "alpha" and "a"')
            alpha = entry["alpha"]
            if (
                not isinstance(alpha, list)
                or len(alpha) != dimension
                or not all(isinstance(a, int) and a >= 0 for a in alpha)
            ):
                raise ValueError(f"terms[{pos}].alpha must be {dimension} non-negative integers")
            key = tuple(alpha)
            if key in terms:
                raise ValueError(f"terms[{pos}].alpha duplicates an earlier multi-index")
            try:
                terms[key] = parse_rational(entry["a"])
            except ValueError as exc:
                raise ValueError(f"terms[{pos}].a: {exc}") from None
        return cls(dimension, terms)


def _expand_integer(slopes: Sequence[int], constant: int, power: int) -> Dict[MultiIndex, int]:
    """Integer-coefficient expansion of (s1*x1 + ... + sd*xd + constant)^power.

    Only slots with nonzero slope are enumerated, which keeps sparse linear
    forms cheap.  Each monomial is produced exactly once.
    """
    d = len(slopes)
    if power == 0:
        return {(0,) * d: 1}
    live = [i for i, s in enumerate(slopes) if s != 0]
    fact = [factorial(i) for i in range(power + 1)]
    terms: Dict[MultiIndex, int] = {}
    exponents = [0] * d

    def descend(pos: int, remaining: int, coeff: int) -> None:
        if pos == len(live):
            if remaining:
                if constant == 0:
                    return
                coeff = coeff // fact[remaining] * constant**remaining
            terms[tuple(exponents)] = coeff
            return
        idx = live[pos]
        s = slopes[idx]
        power_of_s = 1
        for e in range(remaining + 1):
            exponents[idx] = e
            descend(pos + 1, remaining - e, coeff // fact[e] * power_of_s)
            power_of_s *= s
        exponents[idx] = 0

    descend(0, power, fact[power])
    return terms


def multinomial_expand(
    slopes: Sequence[int | Fraction],
    constant: int | Fraction,
    power: int,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> Polynomial:
    """Exact expansion of (slopes . x + constant)^power as a Polynomial.

    Rational slopes are handled by clearing denominators, expanding over the
    integers, and rescaling, so the inner loop stays in fast int arithmetic.
    """
    if power < 0:
        raise ValueError("power must be non-negative")
    if power > cap:
        raise ExpansionCapError(f"expansion too large: power {power} exceeds cap {cap}")
    rational_slopes = [Fraction(s) for s in slopes]
    rational_constant = Fraction(constant)
    scale = 1
    for value in (*rational_slopes, rational_constant):
        q = value.denominator
        scale = scale * q // gcd(scale, q)
    int_slopes = [int(s * scale) for s in rational_slopes]
    int_constant = int(rational_constant * scale)
    raw = _expand_integer(int_slopes, int_constant, power)
    if scale == 1:
        terms = {alpha: Fraction(c) for alpha, c in raw.items() if c}
    else:
        rescale = Fraction(1, scale**power)
        terms = {alpha: c * rescale for alpha, c in raw.items() if c}
    return Polynomial(len(slopes), terms)


def horner_univariate_batch(poly: Polynomial, xs: Sequence[Fraction]) -> list:
    """Exact values of a univariate polynomial at many rational points.

    Integer Horner over a shared coefficient denominator: much faster than
    per-term powering when the degree is large.
    """
    if poly.dimension != 1:
        raise ValueError("horner_univariate_batch requires a univariate polynomial")
    if poly.is_zero:
        return [Fraction(0)] * len(xs)
    degree = poly.degree
    common = 1
    for c in poly.terms.values():
        common = common * c.denominator // gcd(common, c.denominator)
    dense = [0] * (degree + 1)
    for (e,), c in poly.terms.items():
        dense[e] = int(c * common)
    values = []
    for x in xs:
        x = Fraction(x)
        p, s = x.numerator, x.denominator
        acc = dense[degree]
        s_power = 1
        for e in range(degree - 1, -1, -1):
            s_power *= s
            acc = acc * p + dense[e] * s_power
        values.append(Fraction(acc, common * s_power) if degree else Fraction(acc, common))
    return values


def iter_multi_indices(dimension: int, degree: int) -> Iterator[MultiIndex]:
    """All multi-indices of length `dimension` with total degree exactly `degree`."""
    if dimension == 1:
        yield (degree,)
        return
    for head in range(degree + 1):
        for tail in iter_multi_indices(dimension - 1, degree - head):
            yield (head, *tail)


def iter_multi_indices_up_to(dimension: int, max_degree: int) -> Iterator[MultiIndex]:
    """All multi-indices of length `dimension` with total degree <= max_degree."""
    for degree in range(max_degree + 1):
        yield from iter_multi_indices(dimension, degree)


def random_polynomial(
    rng,
    dimension: int,
    max_degree: int,
    density: float = 0.7,
    coeff_range: int = 9,
) -> Polynomial:
    """Random sparse polynomial with small rational coefficients (test helper).

    `rng` is a `random.Random`; coefficients are p/q with |p| <= coeff_range
    and 1 <= q <= 4.  At least one term of top degree is always present so
    the degree is exactly max_degree.
    """
    terms: Dict[MultiIndex, Fraction] = {}
    for alpha in iter_multi_indices_up_to(dimension, max_degree):
        if rng.random() < density:
            p = rng.randint(-coeff_range, coeff_range)
            if p == 0:
                continue
            terms[alpha] = Fraction(p, rng.randint(1, 4))
    if not any(sum(alpha) == max_degree for alpha in terms):
        top = rng.choice(list(iter_multi_indices(dimension, max_degree)))
        terms[top] = Fraction(rng.randint(1, coeff_range), rng.randint(1, 4))
    return Polynomial(dimension, terms)

"""Membership functions, linguistic variables and the Mamdani numeric helpers.

Everything here is immutable. Discrete fuzzy sets are stored as read-only
numpy arrays sampled on a uniform grid over a variable's universe.
"""
from __future__ import annotations

import json
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

DEFAULT_GRID = 101


class FuzzyError(ValueError):
    """Malformed fuzzy definitions."""


class EmptyAggregateError(FuzzyError):
    """Raised when defuzzifying a set with no nonzero membership."""

    def __init__(self):
        super().__init__("empty aggregate")


def _check_degree(d: float) -> float:
    if not (0.0 <= d <= 1.0):
        raise FuzzyError(f"membership degree {d!r} outside [0, 1]")
    return float(d)


# -- membership functions -------------------------------------------------


@dataclass(frozen=True)
class Triangular:
    a: float
    b: float
    c: float

    shape = "triangular"

    def __post_init__(self):
        if not (self.a <= self.b <= self.c):
            raise FuzzyError(f"triangular needs a <= b <= c, got {self.params}")
        if self.a == self.c:
            raise FuzzyError("triangular support has zero width")

    @property
    def params(self) -> tuple:
        return (self.a, self.b, self.c)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.c)

    def __call__(self, x: float) -> float:
        a, b, c = self.a, self.b, self.c
        if x < a or x > c:
            return 0.0
        if x == b:
            return 1.0
        if x < b:
            return (x - a) / (b - a)
        return (c - x) / (c - b)


@dataclass(frozen=True)
class Trapezoidal:
    a: float
    b: float
    c: float
    d: float

    shape = "trapezoidal"

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise FuzzyError(f"trapezoidal needs a <= b <= c <= d, got {self.params}")
        if self.a == self.d:
            raise FuzzyError("trapezoidal support has zero width")

    @property
    def params(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.d)

    def __call__(self, x: float) -> float:
        a, b, c, d = self.a, self.b, self.c, self.d
        if x < a or x > d:
            return 0.0
        if b <= x <= c:
            return 1.0
        if x < b:
            return (x - a) / (b - a)
        return (d - x) / (d - c)


_THRESHOLD_OPS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "=": operator.eq,
    "<>": operator.ne,
}


@dataclass(frozen=True)
class CrispThreshold:
    """0/1 indicator of ``x <op> bound``."""

    op: str
    bound: float

    shape = "crisp_threshold"

    def __post_init__(self):
        if self.op not in _THRESHOLD_OPS:
            raise FuzzyError(f"unknown threshold operator {self.op!r}")
        if not math.isfinite(self.bound):
            raise FuzzyError("threshold bound must be finite")

    @property
    def params(self) -> tuple:
        return (self.op, self.bound)

    @property
    def support(self) -> tuple[float, float]:
        return (self.bound, self.bound)

    def __call__(self, x: float) -> float:
        return 1.0 if _THRESHOLD_OPS[self.op](x, self.bound) else 0.0


MembershipFunction = Triangular | Trapezoidal | CrispThreshold

_SHAPES = {cls.shape: cls for cls in (Triangular, Trapezoidal, CrispThreshold)}


def make_mf(shape: str, params: Sequence) -> MembershipFunction:
    try:
        cls = _SHAPES[shape]
    except KeyError:
        raise FuzzyError(f"unknown membership shape {shape!r}") from None
    if cls is CrispThreshold:
        op, bound = params
        return CrispThreshold(str(op), float(bound))
    return cls(*(float(p) for p in params))


def membership(mf: MembershipFunction, x: float) -> float:
    return mf(x)


# -- sets and variables ---------------------------------------------------


@dataclass(frozen=True)
class FuzzySet:
    label: str
    mf: MembershipFunction

    def __post_init__(self):
        if not self.label:
            raise FuzzyError("fuzzy set label must be nonempty")

    def __call__(self, x: float) -> float:
        return self.mf(x)


@dataclass(frozen=True, eq=False)
class DiscreteFuzzySet:
    """Sampled fuzzy set: strictly increasing ``xs`` with degrees ``mus``."""

    xs: np.ndarray
    mus: np.ndarray

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        mus = np.array(self.mus, dtype=float)
        if xs.ndim != 1 or xs.shape != mus.shape or xs.size == 0:
            raise FuzzyError("xs and mus must be equal-length 1-D sequences")
        if np.any(np.diff(xs) <= 0):
            raise FuzzyError("xs must be strictly increasing")
        if np.any(mus < 0) or np.any(mus > 1):
            raise FuzzyError("degrees must lie in [0, 1]")
        xs.flags.writeable = False
        mus.flags.writeable = False
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "mus", mus)

    def __eq__(self, other):
        if not isinstance(other, DiscreteFuzzySet):
            return NotImplemented
        return np.array_equal(self.xs, other.xs) and np.array_equal(self.mus, other.mus)

    def __len__(self):
        return self.xs.size

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.mus.tolist()))

    def height(self) -> float:
        return float(self.mus.max())

    def union(self, other: DiscreteFuzzySet) -> DiscreteFuzzySet:
        """Pointwise max; both sets must share a grid."""
        if not np.array_equal(self.xs, other.xs):
            raise FuzzyError("cannot aggregate sets sampled on different grids")
        return DiscreteFuzzySet(self.xs, np.maximum(self.mus, other.mus))


@dataclass(frozen=True)
class Fuzzification:
    value: float
    clamped: bool
    degrees: tuple[tuple[str, float], ...]

    def as_dict(self) -> dict[str, float]:
        return dict(self.degrees)


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    universe: tuple[float, float]
    terms: tuple[FuzzySet, ...] = field(default_factory=tuple)

    def __post_init__(self):
        lo, hi = (float(v) for v in self.universe)
        object.__setattr__(self, "universe", (lo, hi))
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.name:
            raise FuzzyError("variable name must be nonempty")
        if not lo < hi:
            raise FuzzyError(f"{self.name}: universe needs lo < hi")
        if len(self.terms) < 2:
            raise FuzzyError(f"{self.name}: at least two terms required")
        labels = [t.label for t in self.terms]
        if len(set(labels)) != len(labels):
            raise FuzzyError(f"{self.name}: duplicate term labels")
        for t in self.terms:
            s0, s1 = t.mf.support
            if s0 < lo or s1 > hi:
                raise FuzzyError(
                    f"{self.name}.{t.label}: support [{s0}, {s1}] outside universe [{lo}, {hi}]"
                )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)

    def term(self, label: str) -> FuzzySet:
        for t in self.terms:
            if t.label == label:
                return t
        raise KeyError(label)

    def clamp(self, x: float) -> tuple[float, bool]:
        lo, hi = self.universe
        if x < lo:
            return lo, True
        if x > hi:
            return hi, True
        return float(x), False

    def grid(self, n: int = DEFAULT_GRID) -> np.ndarray:
        if n < 2:
            raise FuzzyError("grid needs at least 2 points")
        return np.linspace(self.universe[0], self.universe[1], n)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "universe": list(self.universe),
            "terms": [
                {"label": t.label, "shape": t.mf.shape, "params": list(t.mf.params)}
                for t in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> LinguisticVariable:
        try:
            terms = tuple(
                FuzzySet(t["label"], make_mf(t["shape"], t["params"])) for t in doc["terms"]
            )
            return cls(doc["name"], tuple(doc["universe"]), terms)
        except (KeyError, TypeError) as exc:
            raise FuzzyError(f"malformed variable document: {exc}") from exc


def fuzzify(var: LinguisticVariable, x: float) -> Fuzzification:
    v, clamped = var.clamp(x)
    return Fuzzification(v, clamped, tuple((t.label, t.mf(v)) for t in var.terms))


def and_degree(a: float, b: float) -> float:
    return min(_check_degree(a), _check_degree(b))


def or_degree(a: float, b: float) -> float:
    return max(_check_degree(a), _check_degree(b))


def not_degree(a: float) -> float:
    return 1.0 - _check_degree(a)


def sample(fs: FuzzySet, universe: tuple[float, float], grid: int = DEFAULT_GRID) -> DiscreteFuzzySet:
    xs = np.linspace(universe[0], universe[1], grid)
    return DiscreteFuzzySet(xs, np.array([fs.mf(x) for x in xs.tolist()]))


def clip(fs: FuzzySet, alpha: float, universe: tuple[float, float], grid: int = DEFAULT_GRID) -> DiscreteFuzzySet:
    """Mamdani implication: ``min(mu(x), alpha)`` sampled over ``universe``."""
    if grid < 2:
        raise FuzzyError("grid needs at least 2 points")
    alpha = _check_degree(alpha)
    s = sample(fs, universe, grid)
    return DiscreteFuzzySet(s.xs, np.minimum(s.mus, alpha))


def _trapezoid_weights(xs: np.ndarray) -> np.ndarray:
    w = np.zeros_like(xs)
    gaps = np.diff(xs)
    w[:-1] += gaps / 2
    w[1:] += gaps / 2
    return w


def defuzzify_centroid(s: DiscreteFuzzySet) -> float:
    """Centroid of the sampled set, integrating with the trapezoid rule.

    Interior samples carry their full grid spacing and the two end samples
    half of it, so on sets that vanish at both ends this is exactly
    ``sum(x * mu) / sum(mu)``.
    """
    if not np.any(s.mus > 0):
        raise EmptyAggregateError()
    nonzero = np.flatnonzero(s.mus)
    if nonzero.size == 1:
        return float(s.xs[nonzero[0]])
    wm = _trapezoid_weights(s.xs) * s.mus
    return float(np.dot(s.xs, wm) / np.sum(wm))


# -- persistence ----------------------------------------------------------


def load_variables(path: str | Path) -> list[LinguisticVariable]:
    """Read one variable document or ``{"variables": [...]}`` from JSON."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(doc, dict) and "variables" in doc:
        doc = doc["variables"]
    if isinstance(doc, dict):
        doc = [doc]
    return [LinguisticVariable.from_dict(d) for d in doc]


def dump_variables(variables: Iterable[LinguisticVariable]) -> str:
    return json.dumps({"variables": [v.to_dict() for v in variables]}, indent=2)

"""Scalar function catalog and the two-point synchrony / relative-monotonicity predicates.

Functions are immutable descriptors with vectorized, domain-checked
evaluation.  Classification runs over all ordered pairs of a uniform grid:
a verdict is evidence "on this grid", not a proof over the continuum.
"""

from __future__ import annotations

import dataclasses
from typing import Optional, Sequence

import numpy as np

from .errors import ArgumentOrder, ConfigInvalid, DomainViolation
from .spectral import SpectralInterval
from .tolerances import DEFAULT_GRID_N, tol_sync

__all__ = [
    "ScalarFunction",
    "SynchronyVerdict",
    "MonotonicityVerdict",
    "SYNCHRONOUS",
    "ASYNCHRONOUS",
    "MIXED",
    "H_INCREASING",
    "H_DECREASING",
    "GE",
    "LE",
    "constant",
    "identity",
    "power",
    "log_fn",
    "exp_fn",
    "affine",
    "neg_parabola",
    "tabulated",
    "pointwise_product",
    "linear_combination",
    "function_from_descriptor",
    "sync_product",
    "mono_defect",
    "classify_synchrony",
    "classify_monotonicity",
    "scan_tr_regions",
]

SYNCHRONOUS = "synchronous"
ASYNCHRONOUS = "asynchronous"
MIXED = "mixed"
H_INCREASING = "h-increasing"
H_DECREASING = "h-decreasing"

GE = ">="
LE = "<="

_KNOT_SLACK = 1e-12


@dataclasses.dataclass(frozen=True)
class ScalarFunction:
    """One catalog function: a kind tag plus kind-specific parameters.

    ``domain`` optionally restricts evaluation beyond the kind's natural
    domain (used by tabulated data and scenario files).
    """

    kind: str
    params: tuple = ()
    label: str = dataclasses.field(default="", compare=False)
    domain: Optional[SpectralInterval] = None

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        scalar = pts.ndim == 0
        pts = np.atleast_1d(pts)
        if not np.all(np.isfinite(pts)):
            raise DomainViolation(f"{self._name()} evaluated at non-finite points")
        self.check_domain(pts)
        out = self._eval(pts)
        if not np.all(np.isfinite(out)):
            raise DomainViolation(f"{self._name()} produced non-finite values")
        return out[0] if scalar else out

    __call__ = evaluate

    def at(self, point: float) -> float:
        """Scalar evaluation with the same domain checks."""
        return float(self.evaluate(np.asarray([float(point)]))[0])

    def check_domain(self, pts: np.ndarray) -> None:
        if self.domain is not None:
            if np.any(pts < self.domain.lo) or np.any(pts > self.domain.hi):
                raise DomainViolation(
                    f"{self._name()} evaluated outside its declared domain "
                    f"[{self.domain.lo}, {self.domain.hi}]"
                )
        kind = self.kind
        if kind == "power":
            p = self.params[0]
            if p < 0.0 and np.any(pts == 0.0):
                raise DomainViolation(f"{self._name()} is undefined at 0")
            if not float(p).is_integer() and np.any(pts < 0.0):
                bad = float(pts[pts < 0.0][0])
                raise DomainViolation(f"{self._name()} is undefined at negative point {bad!r}")
        elif kind == "log":
            if np.any(pts <= 0.0):
                bad = float(pts[pts <= 0.0][0])
                raise DomainViolation(f"log is undefined at point {bad!r} <= 0")
        elif kind == "tabulated":
            knots = self.params[0]
            slack = _KNOT_SLACK * (1.0 + max(abs(knots[0]), abs(knots[-1])))
            if np.any(pts < knots[0] - slack) or np.any(pts > knots[-1] + slack):
                raise DomainViolation(
                    f"tabulated function evaluated outside its knot range "
                    f"[{knots[0]}, {knots[-1]}]"
                )
        elif kind == "product":
            for child in self.params:
                child.check_domain(pts)
        elif kind == "sum":
            for _, child in self.params[0]:
                child.check_domain(pts)

    def _eval(self, pts: np.ndarray) -> np.ndarray:
        kind = self.kind
        if kind == "constant":
            return np.full(pts.shape, self.params[0])
        if kind == "identity":
            return pts + 0.0
        if kind == "power":
            return pts ** self.params[0]
        if kind == "log":
            return np.log(pts)
        if kind == "exp":
            return np.exp(pts)
        if kind == "affine":
            a, b = self.params
            return a * pts + b
        if kind == "neg_parabola":
            return pts * (1.0 - pts)
        if kind == "tabulated":
            knots, values = self.params
            return np.interp(pts, knots, values)
        if kind == "product":
            f, g = self.params
            return f._eval(pts) * g._eval(pts)
        if kind == "sum":
            out = np.zeros(pts.shape)
            for coef, child in self.params[0]:
                out = out + coef * child._eval(pts)
            return out
        raise ConfigInvalid(f"unknown function kind {self.kind!r}")

    def _name(self) -> str:
        return self.label or self.kind

    def descriptor(self) -> dict:
        """JSON-able literal; inverse of function_from_descriptor."""
        kind = self.kind
        doc: dict = {"kind": kind}
        if kind == "constant":
            doc["c"] = self.params[0]
        elif kind == "power":
            doc["p"] = self.params[0]
        elif kind == "affine":
            doc["a"], doc["b"] = self.params
        elif kind == "tabulated":
            doc["knots"] = list(self.params[0])
            doc["values"] = list(self.params[1])
        elif kind == "product":
            doc["factors"] = [child.descriptor() for child in self.params]
        elif kind == "sum":
            doc["terms"] = [{"coef": c, "fn": child.descriptor()} for c, child in self.params[0]]
        if self.domain is not None:
            doc["domain"] = [self.domain.lo, self.domain.hi]
        return doc


def _domain_of(doc: dict) -> Optional[SpectralInterval]:
    if "domain" in doc:
        lo, hi = doc["domain"]
        return SpectralInterval(float(lo), float(hi))
    return None


def constant(c: float) -> ScalarFunction:
    return ScalarFunction("constant", (float(c),), label=f"{float(c):g}")


def identity() -> ScalarFunction:
    return ScalarFunction("identity", (), label="s")


def power(p: float) -> ScalarFunction:
    return ScalarFunction("power", (float(p),), label=f"s^{float(p):g}")


def log_fn() -> ScalarFunction:
    return ScalarFunction("log", (), label="log(s)")


def exp_fn() -> ScalarFunction:
    return ScalarFunction("exp", (), label="exp(s)")


def affine(a: float, b: float) -> ScalarFunction:
    return ScalarFunction("affine", (float(a), float(b)), label=f"{float(a):g}*s{float(b):+g}")


def neg_parabola() -> ScalarFunction:
    return ScalarFunction("neg_parabola", (), label="s*(1-s)")


def tabulated(
    knots: Sequence[float], values: Sequence[float], domain: Optional[SpectralInterval] = None
) -> ScalarFunction:
    kn = tuple(float(k) for k in knots)
    va = tuple(float(v) for v in values)
    if len(kn) != len(va):
        raise ConfigInvalid(f"{len(kn)} knots vs {len(va)} values")
    if len(kn) < 2:
        raise ConfigInvalid("tabulated function needs at least 2 knots")
    if any(b <= a for a, b in zip(kn, kn[1:])):
        raise ConfigInvalid("tabulated knots must be strictly increasing")
    if domain is not None and (domain.lo < kn[0] or domain.hi > kn[-1]):
        raise ConfigInvalid("tabulated knots must span the declared domain")
    return ScalarFunction("tabulated", (kn, va), label="tabulated", domain=domain)


def pointwise_product(f: ScalarFunction, g: ScalarFunction) -> ScalarFunction:
    return ScalarFunction("product", (f, g), label=f"({f._name()})*({g._name()})")


def linear_combination(*terms: tuple[float, ScalarFunction]) -> ScalarFunction:
    tt = tuple((float(c), fn) for c, fn in terms)
    if not tt:
        raise ConfigInvalid("linear combination needs at least one term")
    label = " + ".join(f"{c:g}*({fn._name()})" for c, fn in tt)
    return ScalarFunction("sum", (tt,), label=label)


def function_from_descriptor(doc: dict) -> ScalarFunction:
    """Parse a function literal such as {"kind": "power", "p": 2.0}."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigInvalid(f"function literal must be an object with a 'kind', got {doc!r}")
    kind = doc["kind"]
    domain = _domain_of(doc)
    try:
        if kind == "constant":
            fn = constant(doc["c"])
        elif kind == "identity":
            fn = identity()
        elif kind == "power":
            fn = power(doc["p"])
        elif kind == "log":
            fn = log_fn()
        elif kind == "exp":
            fn = exp_fn()
        elif kind == "affine":
            fn = affine(doc["a"], doc["b"])
        elif kind == "neg_parabola":
            fn = neg_parabola()
        elif kind == "tabulated":
            return tabulated(doc["knots"], doc["values"], domain=domain)
        elif kind == "product":
            factors = doc["factors"]
            if len(factors) != 2:
                raise ConfigInvalid("product literal needs exactly 2 factors")
            fn = pointwise_product(
                function_from_descriptor(factors[0]), function_from_descriptor(factors[1])
            )
        elif kind == "sum":
            fn = linear_combination(
                *((term["coef"], function_from_descriptor(term["fn"])) for term in doc["terms"])
            )
        else:
            raise ConfigInvalid(f"unknown function kind {kind!r}")
    except KeyError as exc:
        raise ConfigInvalid(f"function literal {doc!r} is missing field {exc}") from None
    if domain is not None:
        fn = dataclasses.replace(fn, domain=domain)
    return fn


@dataclasses.dataclass(frozen=True)
class SynchronyVerdict:
    """Grid evidence for the pairwise sign of sync_product over an interval."""

    classification: str
    min_product: float
    max_product: float
    witness_pos: Optional[tuple[float, float]]
    witness_neg: Optional[tuple[float, float]]
    grid_size: int
    tol: float

    def supports(self, direction: str) -> bool:
        """Whether the evidence backs the >= (synchrony) or <= (asynchrony) conclusion."""
        if direction == GE:
            return self.min_product >= -self.tol
        if direction == LE:
            return self.max_product <= self.tol
        raise ConfigInvalid(f"direction must be '>=' or '<=', got {direction!r}")

    def implied_direction(self) -> Optional[str]:
        if self.classification == SYNCHRONOUS:
            return GE
        if self.classification == ASYNCHRONOUS:
            return LE
        return None

    def summary(self) -> dict:
        return {
            "kind": "synchrony",
            "classification": self.classification,
            "min_product": self.min_product,
            "max_product": self.max_product,
            "witness_pos": list(self.witness_pos) if self.witness_pos else None,
            "witness_neg": list(self.witness_neg) if self.witness_neg else None,
            "grid_size": self.grid_size,
            "tol": self.tol,
        }


@dataclasses.dataclass(frozen=True)
class MonotonicityVerdict:
    """Grid evidence for the sign of mono_defect over ordered pairs of an interval."""

    classification: str
    min_defect: float
    max_defect: float
    witness_pos: Optional[tuple[float, float]]
    witness_neg: Optional[tuple[float, float]]
    grid_size: int
    tol: float

    def summary(self) -> dict:
        return {
            "kind": "monotonicity",
            "classification": self.classification,
            "min_defect": self.min_defect,
            "max_defect": self.max_defect,
            "witness_pos": list(self.witness_pos) if self.witness_pos else None,
            "witness_neg": list(self.witness_neg) if self.witness_neg else None,
            "grid_size": self.grid_size,
            "tol": self.tol,
        }


def sync_product(
    f: ScalarFunction, g: ScalarFunction, h: ScalarFunction, x: float, y: float
) -> float:
    """(h(y)f(x) - h(x)f(y)) * (h(y)g(x) - h(x)g(y))."""
    pts = np.asarray([float(x), float(y)])
    fv, gv, hv = f.evaluate(pts), g.evaluate(pts), h.evaluate(pts)
    return float((hv[1] * fv[0] - hv[0] * fv[1]) * (hv[1] * gv[0] - hv[0] * gv[1]))


def mono_defect(f: ScalarFunction, h: ScalarFunction, x: float, t: float) -> float:
    """h(x)f(t) - h(t)f(x) for x <= t; nonnegative across pairs means f/h grows."""
    if x > t:
        raise ArgumentOrder(f"expected x <= t, got x={x!r} > t={t!r}")
    pts = np.asarray([float(x), float(t)])
    fv, hv = f.evaluate(pts), h.evaluate(pts)
    return float(hv[0] * fv[1] - hv[1] * fv[0])


def _pair_extremes(pts: np.ndarray, values: np.ndarray, i: np.ndarray, j: np.ndarray):
    mn_idx = int(np.argmin(values))
    mx_idx = int(np.argmax(values))
    mn = float(values[mn_idx])
    mx = float(values[mx_idx])
    tol = tol_sync(max(abs(mn), abs(mx)))
    pos = (float(pts[i[mx_idx]]), float(pts[j[mx_idx]])) if mx > tol else None
    neg = (float(pts[i[mn_idx]]), float(pts[j[mn_idx]])) if mn < -tol else None
    return mn, mx, pos, neg, tol


def classify_synchrony(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    interval: SpectralInterval,
    grid_n: int = DEFAULT_GRID_N,
) -> SynchronyVerdict:
    """Evaluate sync_product on all grid pairs (i < j) and classify the sign pattern."""
    pts = interval.grid(grid_n)
    fv, gv, hv = f.evaluate(pts), g.evaluate(pts), h.evaluate(pts)
    i, j = np.triu_indices(pts.size, k=1)
    prod = (hv[j] * fv[i] - hv[i] * fv[j]) * (hv[j] * gv[i] - hv[i] * gv[j])
    mn, mx, pos, neg, tol = _pair_extremes(pts, prod, i, j)
    if mn >= -tol:
        cls = SYNCHRONOUS
    elif mx <= tol:
        cls = ASYNCHRONOUS
    else:
        cls = MIXED
    return SynchronyVerdict(cls, mn, mx, pos, neg, int(pts.size), tol)


def classify_monotonicity(
    f: ScalarFunction,
    h: ScalarFunction,
    interval: SpectralInterval,
    grid_n: int = DEFAULT_GRID_N,
) -> MonotonicityVerdict:
    """Evaluate mono_defect on all ordered grid pairs x <= t; requires h > 0 throughout."""
    pts = interval.grid(grid_n)
    fv, hv = f.evaluate(pts), h.evaluate(pts)
    if np.any(hv <= 0.0):
        bad = float(pts[hv <= 0.0][0])
        raise DomainViolation(
            f"relative monotonicity needs h > 0 on the interval; h({bad!r}) <= 0"
        )
    i, j = np.triu_indices(pts.size, k=1)
    defect = hv[i] * fv[j] - hv[j] * fv[i]
    mn, mx, pos, neg, tol = _pair_extremes(pts, defect, i, j)
    if mn >= -tol:
        cls = H_INCREASING
    elif mx <= tol:
        cls = H_DECREASING
    else:
        cls = MIXED
    return MonotonicityVerdict(cls, mn, mx, pos, neg, int(pts.size), tol)


def scan_tr_regions(
    f: ScalarFunction,
    g: ScalarFunction,
    r_values: Sequence[float],
    interval: SpectralInterval,
    grid_n: int = DEFAULT_GRID_N,
) -> list[tuple[float, SynchronyVerdict]]:
    """Classify (f, g) against the weight family h(s) = s^r for each requested r."""
    return [
        (float(r), classify_synchrony(f, g, power(float(r)), interval, grid_n)) for r in r_values
    ]

"""Covariance-type functionals of one operator and the single-operator inequality checkers.

Report convention: ``lhs`` is always the side the inequality favors, so
``gap = lhs - rhs`` and a theorem predicts ``gap >= 0`` regardless of whether
the source statement reads ``>=`` or ``<=``.  The requested direction is kept
on the report as data.
"""

from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from .errors import ConfigInvalid, IntervalMismatch, NonPositiveSpectrum
from .functions import (
    GE,
    LE,
    MIXED,
    ScalarFunction,
    SynchronyVerdict,
    classify_synchrony,
    identity,
    power,
)
from .spectral import (
    HermitianOperator,
    SpectralInterval,
    StateVector,
    expectation,
    expectation_product,
)
from .tolerances import DEFAULT_GRID_N, TOL_SPEC, tol_ineq

__all__ = [
    "HOLDS",
    "VIOLATED",
    "HYPOTHESIS_NOT_MET",
    "InequalityReport",
    "cebysev",
    "pompeiu_cebysev",
    "check_sign_bound",
    "check_square_bound",
    "kantorovich_chain",
    "check_two_operator",
    "check_mean_point",
    "check_inverse_pair",
    "fmt",
]

HOLDS = "holds"
VIOLATED = "violated"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"

AUTOMATIC_HYPOTHESIS = {
    "kind": "automatic",
    "reason": "a function is always synchronous with itself relative to any weight",
}

REVERSED_NOTE = "direction '<=' evaluates the fully sign-reversed bound"


def fmt(x: float) -> str:
    """Decimal with 17 significant digits; used everywhere numbers reach text."""
    return format(float(x), ".17g")


@dataclasses.dataclass(frozen=True)
class InequalityReport:
    """Outcome of one inequality check.

    ``inputs`` is a scenario document: a JSON-able dict that the scenario
    loader can replay to reproduce this exact check.
    """

    theorem_id: str
    direction: str
    lhs: float
    rhs: float
    gap: float
    tolerance: float
    verdict: str
    hypothesis_evidence: Optional[dict]
    inputs_digest: dict
    notes: tuple[str, ...] = ()

    def to_record(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "direction": self.direction,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "hypothesis_evidence": self.hypothesis_evidence,
            "notes": list(self.notes),
            "inputs_digest": self.inputs_digest,
        }


def _build_report(
    theorem_id: str,
    direction: str,
    favored: float,
    other: float,
    *,
    hypothesis: Optional[dict],
    hypothesis_ok: bool,
    inputs: dict,
    tol_factor: float = 1.0,
    notes: tuple[str, ...] = (),
) -> InequalityReport:
    gap = favored - other
    tolerance = tol_factor * tol_ineq(favored, other)
    if not hypothesis_ok:
        verdict = HYPOTHESIS_NOT_MET
    elif gap >= -tolerance:
        verdict = HOLDS
    else:
        verdict = VIOLATED
    return InequalityReport(
        theorem_id=theorem_id,
        direction=direction,
        lhs=favored,
        rhs=other,
        gap=gap,
        tolerance=tolerance,
        verdict=verdict,
        hypothesis_evidence=hypothesis,
        inputs_digest=inputs,
        notes=notes,
    )


def _operator_doc(A: HermitianOperator) -> dict:
    return {
        "dim": A.dim,
        "eigenvalues": [float(v) for v in A.eigenvalues],
        "eigenvectors": [
            [[float(z.real), float(z.imag)] for z in row] for row in A.eigenvectors
        ],
        "interval": [A.interval.lo, A.interval.hi],
    }


def _state_doc(x: StateVector) -> dict:
    return {"components": [[float(z.real), float(z.imag)] for z in x.components]}


def _single_doc(
    theorem_id: str,
    direction: str,
    A: HermitianOperator,
    x: StateVector,
    functions: dict[str, ScalarFunction],
    grid_n: int,
    gate_hypothesis: bool,
    extra: Optional[dict] = None,
) -> dict:
    doc: dict = {
        "theorem": theorem_id,
        "direction": direction,
        "grid_n": grid_n,
        "operator": _operator_doc(A),
        "state": _state_doc(x),
        "functions": {name: fn.descriptor() for name, fn in functions.items()},
    }
    if not gate_hypothesis:
        doc["gate_hypothesis"] = False
    if extra:
        doc.update(extra)
    return doc


def cebysev(
    f: ScalarFunction, g: ScalarFunction, A: HermitianOperator, x: StateVector
) -> float:
    """<f(A)g(A)x,x> - <g(A)x,x><f(A)x,x> for a unit state x."""
    x.require_unit()
    return expectation_product(A, f, g, x) - expectation(A, g, x) * expectation(A, f, x)


def pompeiu_cebysev(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    A: HermitianOperator,
    x: StateVector,
) -> float:
    """<h^2(A)x,x><f(A)g(A)x,x> - <h(A)g(A)x,x><h(A)f(A)x,x> for a unit state x."""
    x.require_unit()
    return expectation_product(A, h, h, x) * expectation_product(A, f, g, x) - expectation_product(
        A, h, g, x
    ) * expectation_product(A, h, f, x)


def _resolve_direction(
    direction: Optional[str], evidence: SynchronyVerdict, gate_hypothesis: bool
) -> tuple[str, bool]:
    """Pick the dispatch direction and whether the hypothesis gate passes."""
    if direction is None:
        implied = evidence.implied_direction()
        if implied is None:
            return GE, not gate_hypothesis
        return implied, True
    if direction not in (GE, LE):
        raise ConfigInvalid(f"direction must be '>=' or '<=', got {direction!r}")
    return direction, (evidence.supports(direction) or not gate_hypothesis)


def check_sign_bound(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    A: HermitianOperator,
    x: StateVector,
    direction: Optional[str] = None,
    *,
    theorem_id: str = "pc-sign",
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
    evidence: Optional[SynchronyVerdict] = None,
    gate_hypothesis: bool = True,
) -> InequalityReport:
    """E[h^2]E[fg] vs E[hg]E[hf]: >= under h-synchrony of (f, g), <= under h-asynchrony.

    With ``direction=None`` the grid classification picks the direction; a
    mixed verdict yields ``hypothesis-not-met``.
    """
    x.require_unit()
    if evidence is None:
        evidence = classify_synchrony(f, g, h, A.interval, grid_n)
    direction, hypothesis_ok = _resolve_direction(direction, evidence, gate_hypothesis)
    term_hh = expectation_product(A, h, h, x)
    term_fg = expectation_product(A, f, g, x)
    term_hg = expectation_product(A, h, g, x)
    term_hf = expectation_product(A, h, f, x)
    product_main = term_hh * term_fg
    product_cross = term_hg * term_hf
    favored, other = (product_main, product_cross) if direction == GE else (product_cross, product_main)
    inputs = _single_doc(
        theorem_id, direction, A, x, {"f": f, "g": g, "h": h}, grid_n, gate_hypothesis
    )
    return _build_report(
        theorem_id,
        direction,
        favored,
        other,
        hypothesis=evidence.summary(),
        hypothesis_ok=hypothesis_ok,
        inputs=inputs,
        tol_factor=tol_factor,
    )


def check_square_bound(
    f: ScalarFunction,
    h: ScalarFunction,
    A: HermitianOperator,
    x: StateVector,
    *,
    theorem_id: str = "pc-square",
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
) -> InequalityReport:
    """E[hf]^2 <= E[h^2]E[f^2]; holds for every continuous f, no synchrony gate."""
    x.require_unit()
    term_hf = expectation_product(A, h, f, x)
    favored = expectation_product(A, h, h, x) * expectation_product(A, f, f, x)
    other = term_hf**2
    inputs = _single_doc(theorem_id, LE, A, x, {"f": f, "h": h}, grid_n, True)
    return _build_report(
        theorem_id,
        LE,
        favored,
        other,
        hypothesis=AUTOMATIC_HYPOTHESIS,
        hypothesis_ok=True,
        inputs=inputs,
        tol_factor=tol_factor,
    )


def kantorovich_chain(
    A: HermitianOperator,
    x: StateVector,
    *,
    bound_interval: Optional[SpectralInterval] = None,
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
) -> tuple[InequalityReport, InequalityReport]:
    """1 <= E[s]E[1/s] <= (lo+hi)^2 / (4*lo*hi) for a positive spectral interval.

    ``bound_interval`` overrides the interval used for the upper constant; the
    falsifier uses it to probe what happens when the declared interval lies.
    """
    x.require_unit()
    iv = bound_interval if bound_interval is not None else A.interval
    if A.interval.lo <= 0.0 or iv.lo <= 0.0:
        raise NonPositiveSpectrum(
            f"inversion needs 0 < lo; intervals {A.interval.as_pair()}, {iv.as_pair()}"
        )
    product = expectation(A, identity(), x) * expectation(A, power(-1.0), x)
    bound = (iv.lo + iv.hi) ** 2 / (4.0 * iv.lo * iv.hi)
    difference_form = (iv.hi - iv.lo) ** 2 / (4.0 * iv.lo * iv.hi)
    extra = None if bound_interval is None else {"bound_interval": [iv.lo, iv.hi]}
    containment = None
    if bound_interval is not None:
        lam = A.eigenvalues
        contained = bool(
            float(lam.min()) >= iv.lo - TOL_SPEC and float(lam.max()) <= iv.hi + TOL_SPEC
        )
        containment = {
            "kind": "spectral-containment",
            "declared": [iv.lo, iv.hi],
            "contained": contained,
        }
    inputs_lower = _single_doc("kantorovich-lower", GE, A, x, {}, grid_n, True, extra)
    inputs_upper = _single_doc("kantorovich-upper", GE, A, x, {}, grid_n, True, extra)
    lower = _build_report(
        "kantorovich-lower",
        GE,
        product,
        1.0,
        hypothesis=None,
        hypothesis_ok=True,
        inputs=inputs_lower,
        tol_factor=tol_factor,
    )
    upper = _build_report(
        "kantorovich-upper",
        GE,
        bound,
        product,
        hypothesis=containment,
        hypothesis_ok=True,
        inputs=inputs_upper,
        tol_factor=tol_factor,
        notes=(
            "upper constant (lo+hi)^2/(4*lo*hi) = " + fmt(bound),
            "difference-form constant (hi-lo)^2/(4*lo*hi) = "
            + fmt(difference_form)
            + " (source discrepancy; not used)",
        ),
    )
    return lower, upper


def check_two_operator(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    A: HermitianOperator,
    B: HermitianOperator,
    x: StateVector,
    y: StateVector,
    direction: Optional[str] = None,
    *,
    theorem_id: str = "pc-two-op",
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
    evidence: Optional[SynchronyVerdict] = None,
    gate_hypothesis: bool = True,
) -> InequalityReport:
    """Mixed two-operator bound: cross products of expectations over (A, x) and (B, y)."""
    x.require_unit()
    y.require_unit()
    if A.interval != B.interval:
        raise IntervalMismatch(
            f"operators declare intervals {A.interval.as_pair()} and {B.interval.as_pair()}"
        )
    if evidence is None:
        evidence = classify_synchrony(f, g, h, A.interval, grid_n)
    direction, hypothesis_ok = _resolve_direction(direction, evidence, gate_hypothesis)
    main = expectation_product(B, h, h, y) * expectation_product(A, f, g, x) + expectation_product(
        A, h, h, x
    ) * expectation_product(B, f, g, y)
    cross = expectation_product(B, h, g, y) * expectation_product(A, h, f, x) + expectation_product(
        A, h, g, x
    ) * expectation_product(B, h, f, y)
    favored, other = (main, cross) if direction == GE else (cross, main)
    inputs = _single_doc(
        theorem_id,
        direction,
        A,
        x,
        {"f": f, "g": g, "h": h},
        grid_n,
        gate_hypothesis,
        extra={"operator_b": _operator_doc(B), "state_b": _state_doc(y)},
    )
    return _build_report(
        theorem_id,
        direction,
        favored,
        other,
        hypothesis=evidence.summary(),
        hypothesis_ok=hypothesis_ok,
        inputs=inputs,
        tol_factor=tol_factor,
    )


def mean_point_sides(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    mean: float,
    e_h2: float,
    e_hf: float,
    e_hg: float,
    e_fg: float,
) -> tuple[float, float]:
    """Raw (>= orientation) sides of the mean-point bound from its scalar ingredients."""
    ha, fa, ga = h.at(mean), f.at(mean), g.at(mean)
    lhs_raw = ha**2 * e_fg - e_hf * e_hg
    rhs_raw = (ha * e_hf - e_h2 * fa) * ga + (ha * fa - e_hf) * e_hg
    return lhs_raw, rhs_raw


def check_mean_point(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    A: HermitianOperator,
    x: StateVector,
    direction: Optional[str] = None,
    *,
    theorem_id: str = "mean-point",
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
    evidence: Optional[SynchronyVerdict] = None,
    gate_hypothesis: bool = True,
    auto_hypothesis: bool = False,
) -> InequalityReport:
    """Bound anchored at the mean point <Ax,x>, with correction terms on the small side.

    ``auto_hypothesis`` marks the f = g parameterizations whose synchrony is
    structural, skipping the grid classification.
    """
    x.require_unit()
    if auto_hypothesis:
        hypothesis: dict = AUTOMATIC_HYPOTHESIS
        if direction is None:
            direction = GE
        hypothesis_ok = True
        if direction not in (GE, LE):
            raise ConfigInvalid(f"direction must be '>=' or '<=', got {direction!r}")
    else:
        if evidence is None:
            evidence = classify_synchrony(f, g, h, A.interval, grid_n)
        direction, hypothesis_ok = _resolve_direction(direction, evidence, gate_hypothesis)
        hypothesis = evidence.summary()
    mean = expectation(A, identity(), x)
    e_h2 = expectation_product(A, h, h, x)
    e_hf = expectation_product(A, h, f, x)
    e_hg = expectation_product(A, h, g, x)
    e_fg = expectation_product(A, f, g, x)
    lhs_raw, rhs_raw = mean_point_sides(f, g, h, mean, e_h2, e_hf, e_hg, e_fg)
    favored, other = (lhs_raw, rhs_raw) if direction == GE else (rhs_raw, lhs_raw)
    notes = () if direction == GE else (REVERSED_NOTE,)
    inputs = _single_doc(
        theorem_id, direction, A, x, {"f": f, "g": g, "h": h}, grid_n, gate_hypothesis
    )
    return _build_report(
        theorem_id,
        direction,
        favored,
        other,
        hypothesis=hypothesis,
        hypothesis_ok=hypothesis_ok,
        inputs=inputs,
        tol_factor=tol_factor,
        notes=notes,
    )


def inverse_pair_hull(interval: SpectralInterval) -> SpectralInterval:
    """Hull of the interval and its elementwise inverse.

    The two anchor points <Ax,x> and <A^{-1}x,x> live in [lo, hi] and
    [1/hi, 1/lo] respectively, so hypotheses are certified on the hull.
    """
    if interval.lo <= 0.0:
        raise NonPositiveSpectrum(f"inversion needs 0 < lo, interval is {interval.as_pair()}")
    return interval.hull(SpectralInterval(1.0 / interval.hi, 1.0 / interval.lo))


def check_inverse_pair(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    A: HermitianOperator,
    x: StateVector,
    direction: Optional[str] = None,
    *,
    theorem_id: str = "inverse-pair",
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
    evidence: Optional[SynchronyVerdict] = None,
    gate_hypothesis: bool = True,
    auto_hypothesis: bool = False,
) -> InequalityReport:
    """Two-point bound at the pair (<Ax,x>, <A^{-1}x,x>) for a positive spectrum."""
    x.require_unit()
    hull = inverse_pair_hull(A.interval)
    notes: tuple[str, ...] = (
        "synchrony certified on the hull of the interval and its inverse "
        f"[{fmt(hull.lo)}, {fmt(hull.hi)}]",
    )
    if auto_hypothesis:
        hypothesis: dict = AUTOMATIC_HYPOTHESIS
        if direction is None:
            direction = GE
        hypothesis_ok = True
        if direction not in (GE, LE):
            raise ConfigInvalid(f"direction must be '>=' or '<=', got {direction!r}")
    else:
        if evidence is None:
            evidence = classify_synchrony(f, g, h, hull, grid_n)
        direction, hypothesis_ok = _resolve_direction(direction, evidence, gate_hypothesis)
        hypothesis = evidence.summary()
    mean = expectation(A, identity(), x)
    inverse_mean = expectation(A, power(-1.0), x)
    pts = np.asarray([mean, inverse_mean])
    fv, gv, hv = f.evaluate(pts), g.evaluate(pts), h.evaluate(pts)
    lhs_raw = hv[0] ** 2 * fv[1] * gv[1] + hv[1] ** 2 * fv[0] * gv[0]
    rhs_raw = hv[0] * hv[1] * (fv[1] * gv[0] + fv[0] * gv[1])
    favored, other = (lhs_raw, rhs_raw) if direction == GE else (rhs_raw, lhs_raw)
    if direction == LE:
        notes = notes + (REVERSED_NOTE,)
    inputs = _single_doc(
        theorem_id, direction, A, x, {"f": f, "g": g, "h": h}, grid_n, gate_hypothesis
    )
    return _build_report(
        theorem_id,
        direction,
        favored,
        other,
        hypothesis=hypothesis,
        hypothesis_ok=hypothesis_ok,
        inputs=inputs,
        tol_factor=tol_factor,
        notes=notes,
    )

"""Registry of every checkable inequality: stable identifier, runner, input shape.

The registry order is canonical and never reordered: random suites derive
per-theorem substreams from each entry's ordinal, so adding ids at the end (or
selecting subsets) leaves existing trial streams unchanged.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional

from .errors import ConfigInvalid, UnknownTheorem
from .functions import ScalarFunction, constant, identity
from .functionals import (
    InequalityReport,
    check_inverse_pair,
    check_mean_point,
    check_sign_bound,
    check_square_bound,
    check_two_operator,
    kantorovich_chain,
)
from .ensembles import (
    PER_VECTOR,
    SUM_OF_SQUARES,
    check_ensemble_mean_point,
    check_ensemble_sign_bound,
    check_ensemble_square_bound,
    discrete_chebyshev,
    kantorovich_ensemble_chain,
)

__all__ = [
    "TheoremEntry",
    "REGISTRY",
    "REGISTRY_ORDER",
    "lookup",
    "run_scenario",
    "expectation_failures",
]

SINGLE = "single"
TWO_OP = "two_op"
ENSEMBLE = "ensemble"
TUPLES = "tuples"

CONVEXITY_NOTE = "stated for convex weight functions; convexity is unused and not enforced"


@dataclasses.dataclass(frozen=True)
class TheoremEntry:
    """One checkable inequality: its id, what inputs it takes, how to run it."""

    theorem_id: str
    ordinal: int
    summary: str
    inputs_kind: str
    slots: tuple[str, ...]
    ensemble_mode: Optional[str]
    needs_positive: bool
    run: Callable[..., InequalityReport]


def _fn(parsed: dict, name: str, theorem_id: str) -> ScalarFunction:
    fn = parsed.get("functions", {}).get(name)
    if fn is None:
        raise ConfigInvalid(f"{theorem_id} scenario needs function '{name}'")
    return fn


def _get(parsed: dict, key: str, theorem_id: str):
    value = parsed.get(key)
    if value is None:
        raise ConfigInvalid(f"{theorem_id} scenario needs '{key}'")
    return value


def _common(parsed: dict) -> dict:
    return {
        "grid_n": parsed.get("grid_n", 128),
        "gate_hypothesis": parsed.get("gate_hypothesis", True),
    }


def _sign_runner(theorem_id: str, *, fixed_h: bool = False, one_g: bool = False):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        f = _fn(parsed, "f", theorem_id)
        g = constant(1.0) if one_g else _fn(parsed, "g", theorem_id)
        h = identity() if fixed_h else _fn(parsed, "h", theorem_id)
        return check_sign_bound(
            f,
            g,
            h,
            _get(parsed, "operator", theorem_id),
            _get(parsed, "state", theorem_id),
            parsed.get("direction"),
            theorem_id=theorem_id,
            tol_factor=tol_factor,
            **_common(parsed),
        )

    return run


def _square_runner(theorem_id: str):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        return check_square_bound(
            _fn(parsed, "f", theorem_id),
            _fn(parsed, "h", theorem_id),
            _get(parsed, "operator", theorem_id),
            _get(parsed, "state", theorem_id),
            theorem_id=theorem_id,
            grid_n=parsed.get("grid_n", 128),
            tol_factor=tol_factor,
        )

    return run


def _kantorovich_runner(theorem_id: str, index: int):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        reports = kantorovich_chain(
            _get(parsed, "operator", theorem_id),
            _get(parsed, "state", theorem_id),
            bound_interval=parsed.get("bound_interval"),
            grid_n=parsed.get("grid_n", 128),
            tol_factor=tol_factor,
        )
        return reports[index]

    return run


def _two_op_runner(theorem_id: str):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        return check_two_operator(
            _fn(parsed, "f", theorem_id),
            _fn(parsed, "g", theorem_id),
            _fn(parsed, "h", theorem_id),
            _get(parsed, "operator", theorem_id),
            _get(parsed, "operator_b", theorem_id),
            _get(parsed, "state", theorem_id),
            _get(parsed, "state_b", theorem_id),
            parsed.get("direction"),
            theorem_id=theorem_id,
            tol_factor=tol_factor,
            **_common(parsed),
        )

    return run


def _mean_point_runner(theorem_id: str, *, square: bool = False, fixed_h: bool = False):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        f = _fn(parsed, "f", theorem_id)
        g = f if square else _fn(parsed, "g", theorem_id)
        h = identity() if fixed_h else _fn(parsed, "h", theorem_id)
        return check_mean_point(
            f,
            g,
            h,
            _get(parsed, "operator", theorem_id),
            _get(parsed, "state", theorem_id),
            parsed.get("direction"),
            theorem_id=theorem_id,
            tol_factor=tol_factor,
            auto_hypothesis=square,
            **_common(parsed),
        )

    return run


def _inverse_pair_runner(theorem_id: str, *, square: bool = False):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        f = _fn(parsed, "f", theorem_id)
        g = f if square else _fn(parsed, "g", theorem_id)
        h = _fn(parsed, "h", theorem_id)
        return check_inverse_pair(
            f,
            g,
            h,
            _get(parsed, "operator", theorem_id),
            _get(parsed, "state", theorem_id),
            parsed.get("direction"),
            theorem_id=theorem_id,
            tol_factor=tol_factor,
            auto_hypothesis=square,
            **_common(parsed),
        )

    return run


def _ensemble_sign_runner(theorem_id: str):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        return check_ensemble_sign_bound(
            _fn(parsed, "f", theorem_id),
            _fn(parsed, "g", theorem_id),
            _fn(parsed, "h", theorem_id),
            _get(parsed, "ensemble", theorem_id),
            parsed.get("direction"),
            theorem_id=theorem_id,
            tol_factor=tol_factor,
            **_common(parsed),
        )

    return run


def _ensemble_square_runner(theorem_id: str, *, fixed_h: bool = False):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        h = identity() if fixed_h else _fn(parsed, "h", theorem_id)
        return check_ensemble_square_bound(
            _fn(parsed, "f", theorem_id),
            h,
            _get(parsed, "ensemble", theorem_id),
            theorem_id=theorem_id,
            grid_n=parsed.get("grid_n", 128),
            tol_factor=tol_factor,
        )

    return run


def _ensemble_mean_runner(
    theorem_id: str,
    *,
    square: bool = False,
    fixed_h: bool = False,
    extra_notes: tuple[str, ...] = (),
):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        f = _fn(parsed, "f", theorem_id)
        g = f if square else _fn(parsed, "g", theorem_id)
        h = identity() if fixed_h else _fn(parsed, "h", theorem_id)
        return check_ensemble_mean_point(
            f,
            g,
            h,
            _get(parsed, "ensemble", theorem_id),
            parsed.get("direction"),
            theorem_id=theorem_id,
            tol_factor=tol_factor,
            auto_hypothesis=square,
            extra_notes=extra_notes,
            **_common(parsed),
        )

    return run


def _ensemble_chain_runner(theorem_id: str, index: int):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        reports = kantorovich_ensemble_chain(
            _get(parsed, "ensemble", theorem_id),
            parsed.get("per_op_intervals"),
            grid_n=parsed.get("grid_n", 128),
            tol_factor=tol_factor,
            gate=parsed.get("gate_hypothesis", True),
        )
        return reports[index]

    return run


def _tuples_runner(theorem_id: str):
    def run(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
        pairs = _get(parsed, "tuples", theorem_id)
        return discrete_chebyshev(
            pairs["a"],
            pairs["b"],
            tol_factor=tol_factor,
            gate=parsed.get("gate_hypothesis", True),
        )

    return run


def _entries() -> tuple[TheoremEntry, ...]:
    rows = [
        # (id, summary, kind, slots, mode, positive, runner)
        (
            "pc-sign",
            "weighted covariance product bound under grid-certified (a)synchrony",
            SINGLE,
            ("f", "g", "h"),
            None,
            False,
            _sign_runner("pc-sign"),
        ),
        (
            "pc-square",
            "square case of the sign bound; holds for every continuous function",
            SINGLE,
            ("f", "h"),
            None,
            False,
            _square_runner("pc-square"),
        ),
        (
            "pc-sign-t",
            "sign bound with the identity weight",
            SINGLE,
            ("f", "g"),
            None,
            False,
            _sign_runner("pc-sign-t", fixed_h=True),
        ),
        (
            "pc-moment",
            "sign bound with the second factor fixed to one",
            SINGLE,
            ("f", "h"),
            None,
            False,
            _sign_runner("pc-moment", one_g=True),
        ),
        (
            "pc-moment-t",
            "sign bound with identity weight and second factor one",
            SINGLE,
            ("f",),
            None,
            False,
            _sign_runner("pc-moment-t", fixed_h=True, one_g=True),
        ),
        (
            "kantorovich-lower",
            "product of mean and inverse mean is at least one",
            SINGLE,
            (),
            None,
            True,
            _kantorovich_runner("kantorovich-lower", 0),
        ),
        (
            "kantorovich-upper",
            "product of mean and inverse mean at most the interval constant",
            SINGLE,
            (),
            None,
            True,
            _kantorovich_runner("kantorovich-upper", 1),
        ),
        (
            "pc-two-op",
            "mixed bound over two operators and two states",
            TWO_OP,
            ("f", "g", "h"),
            None,
            False,
            _two_op_runner("pc-two-op"),
        ),
        (
            "mean-point",
            "bound anchored at the operator mean with correction terms",
            SINGLE,
            ("f", "g", "h"),
            None,
            False,
            _mean_point_runner("mean-point"),
        ),
        (
            "mean-point-square",
            "mean-point bound in its always-valid square case",
            SINGLE,
            ("f", "h"),
            None,
            False,
            _mean_point_runner("mean-point-square", square=True),
        ),
        (
            "mean-point-square-t",
            "square mean-point bound with the identity weight",
            SINGLE,
            ("f",),
            None,
            False,
            _mean_point_runner("mean-point-square-t", square=True, fixed_h=True),
        ),
        (
            "inverse-pair",
            "two-point bound at the mean and the inverse mean",
            SINGLE,
            ("f", "g", "h"),
            None,
            True,
            _inverse_pair_runner("inverse-pair"),
        ),
        (
            "inverse-pair-square",
            "inverse-pair bound in its always-valid square case",
            SINGLE,
            ("f", "h"),
            None,
            True,
            _inverse_pair_runner("inverse-pair-square", square=True),
        ),
        (
            "ensemble-pc-sign",
            "summed covariance product bound over an operator family",
            ENSEMBLE,
            ("f", "g", "h"),
            SUM_OF_SQUARES,
            False,
            _ensemble_sign_runner("ensemble-pc-sign"),
        ),
        (
            "ensemble-pc-square",
            "summed square bound; holds for every continuous function",
            ENSEMBLE,
            ("f", "h"),
            SUM_OF_SQUARES,
            False,
            _ensemble_square_runner("ensemble-pc-square"),
        ),
        (
            "ensemble-pc-square-t",
            "summed square bound with the identity weight",
            ENSEMBLE,
            ("f",),
            SUM_OF_SQUARES,
            False,
            _ensemble_square_runner("ensemble-pc-square-t", fixed_h=True),
        ),
        (
            "ensemble-mean-point",
            "summed mean-point bound over an operator family",
            ENSEMBLE,
            ("f", "g", "h"),
            SUM_OF_SQUARES,
            False,
            _ensemble_mean_runner("ensemble-mean-point"),
        ),
        (
            "ensemble-mean-point-square",
            "summed mean-point bound in its square case",
            ENSEMBLE,
            ("f", "h"),
            SUM_OF_SQUARES,
            False,
            _ensemble_mean_runner(
                "ensemble-mean-point-square", square=True, extra_notes=(CONVEXITY_NOTE,)
            ),
        ),
        (
            "ensemble-mean-point-square-t",
            "summed square mean-point bound with the identity weight",
            ENSEMBLE,
            ("f",),
            SUM_OF_SQUARES,
            False,
            _ensemble_mean_runner("ensemble-mean-point-square-t", square=True, fixed_h=True),
        ),
        (
            "ensemble-product-lower",
            "averaged mean/inverse-mean product is at least one (unit states)",
            ENSEMBLE,
            (),
            PER_VECTOR,
            True,
            _ensemble_chain_runner("ensemble-product-lower", 0),
        ),
        (
            "ensemble-chebyshev-link",
            "averaged pointwise products dominate the product of averages",
            ENSEMBLE,
            (),
            PER_VECTOR,
            True,
            _ensemble_chain_runner("ensemble-chebyshev-link", 1),
        ),
        (
            "ensemble-kantorovich-upper",
            "averaged interval constants dominate the averaged products",
            ENSEMBLE,
            (),
            PER_VECTOR,
            True,
            _ensemble_chain_runner("ensemble-kantorovich-upper", 2),
        ),
        (
            "discrete-chebyshev",
            "mean of products dominates product of means for similarly ordered tuples",
            TUPLES,
            (),
            None,
            False,
            _tuples_runner("discrete-chebyshev"),
        ),
    ]
    return tuple(
        TheoremEntry(
            theorem_id=tid,
            ordinal=k,
            summary=summary,
            inputs_kind=kind,
            slots=slots,
            ensemble_mode=mode,
            needs_positive=positive,
            run=runner,
        )
        for k, (tid, summary, kind, slots, mode, positive, runner) in enumerate(rows)
    )


REGISTRY_ORDER: tuple[TheoremEntry, ...] = _entries()
REGISTRY: dict[str, TheoremEntry] = {e.theorem_id: e for e in REGISTRY_ORDER}


def lookup(theorem_id: str) -> TheoremEntry:
    entry = REGISTRY.get(theorem_id)
    if entry is None:
        known = ", ".join(e.theorem_id for e in REGISTRY_ORDER)
        raise UnknownTheorem(f"unknown theorem id {theorem_id!r}; known ids: {known}")
    return entry


def run_scenario(parsed: dict, *, tol_factor: float = 1.0) -> InequalityReport:
    """Run one parsed scenario document through its theorem's checker."""
    entry = lookup(parsed["theorem"])
    provided = set(parsed.get("functions", {}))
    allowed = set(entry.slots)
    extra = provided - allowed
    if extra:
        raise ConfigInvalid(
            f"{entry.theorem_id} takes function slots {sorted(allowed) or 'none'}; "
            f"got unexpected {sorted(extra)}"
        )
    return entry.run(parsed, tol_factor=tol_factor)


def expectation_failures(report: InequalityReport, expect: dict) -> list[str]:
    """Mismatches between a report and a scenario's 'expect' block."""
    failures: list[str] = []
    atol = expect.get("atol", 1e-9)
    if "verdict" in expect and report.verdict != expect["verdict"]:
        failures.append(f"verdict {report.verdict!r} != expected {expect['verdict']!r}")
    for key in ("lhs", "rhs", "gap"):
        if key in expect:
            got = getattr(report, key)
            if abs(got - expect[key]) > atol:
                failures.append(f"{key} {got!r} differs from expected {expect[key]!r} by more than {atol!r}")
    return failures

"""Families of (operator, state) pairs: summed inequality checks, the discrete
Chebyshev sum inequality, and the averaged Kantorovich chain.

Every summed check must agree with the corresponding single-operator check on
the block-diagonal lift; the test suite enforces that equivalence.
"""

from __future__ import annotations

import dataclasses
from typing import Optional, Sequence

import numpy as np

from .errors import (
    ConfigInvalid,
    DimensionMismatch,
    IntervalMismatch,
    NonPositiveSpectrum,
    NormalizationViolation,
    NotSimilarlyOrdered,
    SpectrumOutOfInterval,
)
from .functions import GE, LE, ScalarFunction, SynchronyVerdict, classify_synchrony
from .functionals import (
    AUTOMATIC_HYPOTHESIS,
    REVERSED_NOTE,
    InequalityReport,
    _build_report,
    _operator_doc,
    _resolve_direction,
    _state_doc,
    fmt,
    mean_point_sides,
)
from .spectral import (
    HermitianOperator,
    SpectralInterval,
    StateVector,
    block_diagonal,
    expectation,
    expectation_product,
)
from .functions import identity, power
from .tolerances import DEFAULT_GRID_N, TOL_NORM, TOL_SPEC, tol_sync

__all__ = [
    "SUM_OF_SQUARES",
    "PER_VECTOR",
    "OperatorEnsemble",
    "ensemble_expectation",
    "ensemble_expectation_product",
    "lift_ensemble",
    "check_ensemble_sign_bound",
    "check_ensemble_square_bound",
    "check_ensemble_mean_point",
    "similarly_ordered",
    "discrete_chebyshev",
    "kantorovich_constant",
    "kantorovich_ensemble_chain",
]

SUM_OF_SQUARES = "sum_of_squares"
PER_VECTOR = "per_vector"
_MODES = (SUM_OF_SQUARES, PER_VECTOR)


@dataclasses.dataclass(frozen=True, eq=False)
class OperatorEnsemble:
    """n operators sharing one spectral interval, each paired with a state.

    ``normalization`` is either ``sum_of_squares`` (the squared norms add to 1,
    as the summed checks require) or ``per_vector`` (each state is a unit
    vector, as the averaged Kantorovich chain requires).
    """

    operators: tuple[HermitianOperator, ...]
    states: tuple[StateVector, ...]
    normalization: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "operators", tuple(self.operators))
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.operators) == 0 or len(self.operators) != len(self.states):
            raise ConfigInvalid("need equally many operators and states, at least one pair")
        if self.normalization not in _MODES:
            raise ConfigInvalid(
                f"normalization must be one of {_MODES}, got {self.normalization!r}"
            )
        interval = self.operators[0].interval
        for op in self.operators[1:]:
            if op.interval != interval:
                raise IntervalMismatch(
                    f"operators declare intervals {op.interval.as_pair()} "
                    f"and {interval.as_pair()}"
                )
        for k, (op, st) in enumerate(zip(self.operators, self.states)):
            if op.dim != st.dim:
                raise DimensionMismatch(
                    f"pair {k}: operator dim {op.dim} vs state dim {st.dim}"
                )
        if self.normalization == SUM_OF_SQUARES:
            total = float(sum(st.norm**2 for st in self.states))
            if abs(total - 1.0) > TOL_NORM:
                raise NormalizationViolation(
                    f"sum of squared state norms is {total!r}, expected 1"
                )
        else:
            for k, st in enumerate(self.states):
                if abs(st.norm - 1.0) > TOL_NORM:
                    raise NormalizationViolation(
                        f"state {k} has norm {st.norm!r}, expected 1"
                    )

    @property
    def n(self) -> int:
        return len(self.operators)

    @property
    def interval(self) -> SpectralInterval:
        return self.operators[0].interval


def ensemble_expectation(E: OperatorEnsemble, f: ScalarFunction) -> float:
    """sum_j <f(A_j) x_j, x_j>."""
    return float(sum(expectation(op, f, st) for op, st in zip(E.operators, E.states)))


def ensemble_expectation_product(
    E: OperatorEnsemble, f: ScalarFunction, g: ScalarFunction
) -> float:
    """sum_j <f(A_j) g(A_j) x_j, x_j>."""
    return float(
        sum(expectation_product(op, f, g, st) for op, st in zip(E.operators, E.states))
    )


def lift_ensemble(E: OperatorEnsemble) -> tuple[HermitianOperator, StateVector]:
    """Block-diagonal operator and stacked state equivalent to the summed checks.

    Only a sum-of-squares ensemble lifts to a unit state.
    """
    if E.normalization != SUM_OF_SQUARES:
        raise NormalizationViolation("only a sum_of_squares ensemble lifts to a unit state")
    return block_diagonal(list(E.operators), list(E.states))


def _ensemble_doc(
    theorem_id: str,
    direction: str,
    E: OperatorEnsemble,
    functions: dict[str, ScalarFunction],
    grid_n: int,
    gate_hypothesis: bool,
    extra: Optional[dict] = None,
) -> dict:
    doc: dict = {
        "theorem": theorem_id,
        "direction": direction,
        "grid_n": grid_n,
        "ensemble": {
            "operators": [_operator_doc(op) for op in E.operators],
            "states": [_state_doc(st) for st in E.states],
            "normalization": E.normalization,
        },
        "functions": {name: fn.descriptor() for name, fn in functions.items()},
    }
    if not gate_hypothesis:
        doc["gate_hypothesis"] = False
    if extra:
        doc.update(extra)
    return doc


def check_ensemble_sign_bound(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    E: OperatorEnsemble,
    direction: Optional[str] = None,
    *,
    theorem_id: str = "ensemble-pc-sign",
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
    evidence: Optional[SynchronyVerdict] = None,
    gate_hypothesis: bool = True,
) -> InequalityReport:
    """Summed form of the sign bound: S[h^2]S[fg] vs S[hg]S[hf] over the ensemble."""
    if E.normalization != SUM_OF_SQUARES:
        raise NormalizationViolation("summed checks need sum_of_squares normalization")
    if evidence is None:
        evidence = classify_synchrony(f, g, h, E.interval, grid_n)
    direction, hypothesis_ok = _resolve_direction(direction, evidence, gate_hypothesis)
    main = ensemble_expectation_product(E, h, h) * ensemble_expectation_product(E, f, g)
    cross = ensemble_expectation_product(E, h, g) * ensemble_expectation_product(E, h, f)
    favored, other = (main, cross) if direction == GE else (cross, main)
    inputs = _ensemble_doc(theorem_id, direction, E, {"f": f, "g": g, "h": h}, grid_n, gate_hypothesis)
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


def check_ensemble_square_bound(
    f: ScalarFunction,
    h: ScalarFunction,
    E: OperatorEnsemble,
    *,
    theorem_id: str = "ensemble-pc-square",
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
) -> InequalityReport:
    """Summed square bound S[hf]^2 <= S[h^2]S[f^2]; no synchrony gate needed."""
    if E.normalization != SUM_OF_SQUARES:
        raise NormalizationViolation("summed checks need sum_of_squares normalization")
    term_hf = ensemble_expectation_product(E, h, f)
    favored = ensemble_expectation_product(E, h, h) * ensemble_expectation_product(E, f, f)
    other = term_hf**2
    inputs = _ensemble_doc(theorem_id, LE, E, {"f": f, "h": h}, grid_n, True)
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


def check_ensemble_mean_point(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    E: OperatorEnsemble,
    direction: Optional[str] = None,
    *,
    theorem_id: str = "ensemble-mean-point",
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
    evidence: Optional[SynchronyVerdict] = None,
    gate_hypothesis: bool = True,
    auto_hypothesis: bool = False,
    extra_notes: tuple[str, ...] = (),
) -> InequalityReport:
    """Summed mean-point bound, anchored at sum_j <A_j x_j, x_j>."""
    if E.normalization != SUM_OF_SQUARES:
        raise NormalizationViolation("summed checks need sum_of_squares normalization")
    if auto_hypothesis:
        hypothesis: dict = AUTOMATIC_HYPOTHESIS
        if direction is None:
            direction = GE
        hypothesis_ok = True
        if direction not in (GE, LE):
            raise ConfigInvalid(f"direction must be '>=' or '<=', got {direction!r}")
    else:
        if evidence is None:
            evidence = classify_synchrony(f, g, h, E.interval, grid_n)
        direction, hypothesis_ok = _resolve_direction(direction, evidence, gate_hypothesis)
        hypothesis = evidence.summary()
    mean = ensemble_expectation(E, identity())
    e_h2 = ensemble_expectation_product(E, h, h)
    e_hf = ensemble_expectation_product(E, h, f)
    e_hg = ensemble_expectation_product(E, h, g)
    e_fg = ensemble_expectation_product(E, f, g)
    lhs_raw, rhs_raw = mean_point_sides(f, g, h, mean, e_h2, e_hf, e_hg, e_fg)
    favored, other = (lhs_raw, rhs_raw) if direction == GE else (rhs_raw, lhs_raw)
    notes = extra_notes if direction == GE else extra_notes + (REVERSED_NOTE,)
    inputs = _ensemble_doc(theorem_id, direction, E, {"f": f, "g": g, "h": h}, grid_n, gate_hypothesis)
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


def similarly_ordered(
    a: Sequence[float], b: Sequence[float]
) -> tuple[bool, Optional[tuple[int, int]], float]:
    """Whether (a_i - a_j)(b_i - b_j) >= 0 for every pair.

    Returns (ordered, witness pair or None, most negative pair product).
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape or av.ndim != 1 or av.size == 0:
        raise ConfigInvalid("need two equal-length nonempty tuples")
    ii, jj = np.triu_indices(av.size, k=1)
    if ii.size == 0:
        return True, None, 0.0
    prod = (av[ii] - av[jj]) * (bv[ii] - bv[jj])
    k = int(np.argmin(prod))
    worst = float(prod[k])
    tol = tol_sync(float(np.max(np.abs(prod))))
    if worst < -tol:
        return False, (int(ii[k]), int(jj[k])), worst
    return True, None, worst


def discrete_chebyshev(
    a: Sequence[float], b: Sequence[float], *, tol_factor: float = 1.0, gate: bool = True
) -> InequalityReport:
    """mean(a*b) >= mean(a)*mean(b) for similarly ordered tuples.

    With ``gate`` false an unordered pair is evaluated anyway (for hypothesis-
    dropping searches) instead of raising.
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    ordered, witness, worst = similarly_ordered(av, bv)
    if not ordered and gate:
        i, j = witness
        raise NotSimilarlyOrdered(
            f"pair (i={i}, j={j}) has (a_i-a_j)(b_i-b_j) = {fmt(worst)} < 0"
        )
    favored = float(np.mean(av * bv))
    other = float(np.mean(av)) * float(np.mean(bv))
    inputs = {
        "theorem": "discrete-chebyshev",
        "direction": GE,
        "tuples": {"a": [float(v) for v in av], "b": [float(v) for v in bv]},
    }
    if not gate:
        inputs["gate_hypothesis"] = False
    hypothesis = {"kind": "similarly-ordered", "ordered": ordered, "min_pair_product": worst}
    if witness is not None:
        hypothesis["witness"] = [int(witness[0]), int(witness[1])]
    return _build_report(
        "discrete-chebyshev",
        GE,
        favored,
        other,
        hypothesis=hypothesis,
        hypothesis_ok=True,
        inputs=inputs,
        tol_factor=tol_factor,
    )


def kantorovich_constant(lo: float, hi: float) -> float:
    """(lo + hi)^2 / (4 lo hi) for 0 < lo <= hi."""
    if lo <= 0.0:
        raise NonPositiveSpectrum(f"constant needs 0 < lo, got ({lo!r}, {hi!r})")
    return (lo + hi) ** 2 / (4.0 * lo * hi)


def kantorovich_ensemble_chain(
    E: OperatorEnsemble,
    per_op_intervals: Optional[Sequence[tuple[float, float]]] = None,
    *,
    grid_n: int = DEFAULT_GRID_N,
    tol_factor: float = 1.0,
    gate: bool = True,
) -> tuple[InequalityReport, InequalityReport, InequalityReport]:
    """Averaged chain 1 <= mean(a)mean(b) <= mean(ab) <= mean(K) with
    a_j = <A_j x_j, x_j>, b_j = <A_j^{-1} x_j, x_j>, K_j the per-operator constant.

    Needs unit states per vector: under sum-of-squares normalization the first
    link is simply false (n scaled copies of the identity already break it).
    The middle link additionally needs (a, b) similarly ordered and is reported
    ``hypothesis-not-met`` when they are not.  ``gate=False`` skips the
    normalization and containment preconditions so hypothesis-dropping
    searches can evaluate the raw sides.
    """
    if gate and E.normalization != PER_VECTOR:
        raise NormalizationViolation(
            "the averaged chain needs per_vector normalization; "
            "its first link is false under sum_of_squares"
        )
    n = E.n
    if per_op_intervals is None:
        pairs = [(op.interval.lo, op.interval.hi) for op in E.operators]
    else:
        pairs = [(float(lo), float(hi)) for lo, hi in per_op_intervals]
        if len(pairs) != n:
            raise ConfigInvalid(f"need {n} per-operator intervals, got {len(pairs)}")
    for k, ((lo, hi), op) in enumerate(zip(pairs, E.operators)):
        if lo <= 0.0 or op.interval.lo <= 0.0:
            raise NonPositiveSpectrum(
                f"operator {k}: inversion needs 0 < lo "
                f"(declared {op.interval.as_pair()}, chain uses ({lo!r}, {hi!r}))"
            )
        if lo > hi:
            raise ConfigInvalid(f"operator {k}: interval ({lo!r}, {hi!r}) is inverted")
        if gate and per_op_intervals is not None:
            ev = op.eigenvalues
            if float(ev[0]) < lo - TOL_SPEC or float(ev[-1]) > hi + TOL_SPEC:
                raise SpectrumOutOfInterval(
                    f"operator {k}: spectrum [{fmt(float(ev[0]))}, {fmt(float(ev[-1]))}] "
                    f"outside chain interval ({fmt(lo)}, {fmt(hi)})"
                )
    a = np.asarray(
        [expectation(op, identity(), st) for op, st in zip(E.operators, E.states)]
    )
    b = np.asarray(
        [expectation(op, power(-1.0), st) for op, st in zip(E.operators, E.states)]
    )
    constants = [kantorovich_constant(lo, hi) for lo, hi in pairs]
    mean_a, mean_b = float(np.mean(a)), float(np.mean(b))
    mean_ab = float(np.mean(a * b))
    mean_k = float(np.mean(constants))
    ordered, witness, worst = similarly_ordered(a, b)

    def doc(theorem_id: str) -> dict:
        extra: dict = {}
        if per_op_intervals is not None:
            extra["per_op_intervals"] = [[lo, hi] for lo, hi in pairs]
        return _ensemble_doc(theorem_id, GE, E, {}, grid_n, gate, extra or None)

    lower = _build_report(
        "ensemble-product-lower",
        GE,
        mean_a * mean_b,
        1.0,
        hypothesis={"kind": "normalization", "mode": E.normalization, "required": PER_VECTOR},
        hypothesis_ok=True,
        inputs=doc("ensemble-product-lower"),
        tol_factor=tol_factor,
        notes=(
            "sum form: (sum a)(sum b) = "
            + fmt(mean_a * mean_b * n * n)
            + " vs n^2 = "
            + fmt(float(n * n)),
            "stated for sum-of-squares normalization, where it fails; "
            "checked under per-vector normalization",
        ),
    )
    ordering_evidence = {
        "kind": "similarly-ordered",
        "min_pair_product": worst,
        "witness": None if witness is None else [witness[0], witness[1]],
    }
    middle = _build_report(
        "ensemble-chebyshev-link",
        GE,
        mean_ab,
        mean_a * mean_b,
        hypothesis=ordering_evidence,
        hypothesis_ok=ordered or not gate,
        inputs=doc("ensemble-chebyshev-link"),
        tol_factor=tol_factor,
    )
    diff_constants = [(hi - lo) ** 2 / (4.0 * lo * hi) for lo, hi in pairs]
    upper = _build_report(
        "ensemble-kantorovich-upper",
        GE,
        mean_k,
        mean_ab,
        hypothesis=None,
        hypothesis_ok=True,
        inputs=doc("ensemble-kantorovich-upper"),
        tol_factor=tol_factor,
        notes=(
            "per-operator constants (lo+hi)^2/(4 lo hi): "
            + ", ".join(fmt(c) for c in constants),
            "difference-form values (hi-lo)^2/(4 lo hi): "
            + ", ".join(fmt(c) for c in diff_constants)
            + " (source discrepancy; not used)",
        ),
    )
    return lower, middle, upper

"""Random instance generation, property suites, and hypothesis-dropping search.

Reproducibility contract: every suite trial draws from a fresh
``Generator(PCG64(SeedSequence([seed, check_ordinal, trial_index])))`` where
``check_ordinal`` is the registry ordinal of the check being exercised.  The
stream therefore depends only on (seed, check, trial): adding checks, selecting
subsets, or changing trial counts never perturbs other trials.  Falsification
searches use the fixed stream tag ``[seed, check_ordinal, FALSIFY_STREAM]``.

Within one trial the draw order is fixed: structural sizes first (dimensions,
block counts, tuple lengths), then function-pool indices, then operators, then
states.
"""

from __future__ import annotations

import dataclasses
import math
import time
from typing import Callable, Optional, Sequence

import numpy as np

from .ensembles import PER_VECTOR, OperatorEnsemble
from .errors import ConfigInvalid, OpineqError
from .functionals import HYPOTHESIS_NOT_MET, VIOLATED, InequalityReport, inverse_pair_hull
from .functions import ScalarFunction, classify_synchrony, function_from_descriptor
from .registry import (
    ENSEMBLE,
    REGISTRY,
    REGISTRY_ORDER,
    SINGLE,
    TUPLES,
    TWO_OP,
    TheoremEntry,
    lookup,
    run_scenario,
)
from .serialize import scenario_from_doc
from .spectral import HermitianOperator, SpectralInterval, StateVector
from .tolerances import DEFAULT_GRID_N, MAX_DIM, VIOLATION_FACTOR

__all__ = [
    "ASYNC_TRIPLE_POOL",
    "DEFAULT_FUNCTION_POOL",
    "DEFAULT_THEOREMS",
    "FalsifyResult",
    "SuiteSummary",
    "SYNC_TRIPLE_POOL",
    "TheoremTally",
    "TrialConfig",
    "config_from_doc",
    "falsify",
    "random_ensemble",
    "random_operator",
    "random_state",
    "run_suite",
    "trial_rng",
]

DEFAULT_THEOREMS: tuple[str, ...] = tuple(e.theorem_id for e in REGISTRY_ORDER)

FALSIFY_STREAM = 0x5EEDFA15

_ID = {"kind": "identity"}
_ONE = {"kind": "constant", "c": 1.0}
_SQ = {"kind": "power", "p": 2.0}
_CUBE = {"kind": "power", "p": 3.0}
_SQRT = {"kind": "power", "p": 0.5}
_INV = {"kind": "power", "p": -1.0}
_EXP = {"kind": "exp"}
_LOG = {"kind": "log"}

DEFAULT_FUNCTION_POOL: tuple[dict, ...] = (_ID, _ONE, _SQ, _CUBE, _SQRT, _INV, _EXP, _LOG)

# Triples (f, g, h) whose quotients f/h and g/h are monotone in the same
# direction on every positive interval, so grid certification always says
# "synchronous"; ASYNC lists the opposite-direction counterparts.
SYNC_TRIPLE_POOL: tuple[tuple[dict, dict, dict], ...] = (
    (_SQ, _CUBE, _ID),
    (_ID, _SQ, _SQRT),
    (_EXP, _EXP, _INV),
    (_SQRT, {"kind": "power", "p": 1.5}, {"kind": "power", "p": 0.25}),
    (_ONE, _SQ, _INV),
    (_INV, {"kind": "power", "p": -2.0}, {"kind": "power", "p": -3.0}),
)
ASYNC_TRIPLE_POOL: tuple[tuple[dict, dict, dict], ...] = (
    (_ID, _INV, _ONE),
    (_CUBE, _ID, _SQ),
    (_ONE, _ID, _SQRT),
    (_ONE, _INV, {"kind": "power", "p": -0.5}),
    (_ID, _INV, _SQRT),
)

_HULL_IDS = frozenset({"inverse-pair", "inverse-pair-square"})

_DIRECTION_AWARE = frozenset(
    {
        "pc-sign",
        "pc-sign-t",
        "pc-moment",
        "pc-moment-t",
        "pc-two-op",
        "mean-point",
        "inverse-pair",
        "ensemble-pc-sign",
        "ensemble-mean-point",
    }
)

DROP_SYNCHRONY = "synchrony"
DROP_CONTAINMENT = "spectral-containment"
DROP_NORMALIZATION = "normalization"

_DROP_IDS = {
    DROP_SYNCHRONY: frozenset(
        {
            "pc-sign",
            "pc-sign-t",
            "pc-moment",
            "pc-moment-t",
            "pc-two-op",
            "mean-point",
            "inverse-pair",
            "ensemble-pc-sign",
            "ensemble-mean-point",
            "ensemble-chebyshev-link",
            "discrete-chebyshev",
        }
    ),
    DROP_CONTAINMENT: frozenset({"kantorovich-upper", "ensemble-kantorovich-upper"}),
    DROP_NORMALIZATION: frozenset({"ensemble-product-lower"}),
}

# Certification-breaking triples per check with a free sign hypothesis; the
# slot layout is always the full (f, g, h) with fixed slots already at their
# forced values.
_DROP_SYNC_POOLS = {
    "pc-sign": ((_ONE, _ID, _SQRT), (_ID, _INV, _ONE), (_ID, _INV, _SQRT)),
    "pc-sign-t": ((_ID, _INV, _ID), (_SQ, _SQRT, _ID)),
    "pc-moment": ((_SQ, _ONE, _ID), (_CUBE, _ONE, _ID)),
    "pc-moment-t": ((_SQ, _ONE, _ID), (_CUBE, _ONE, _ID), (_EXP, _ONE, _ID)),
}
_SCALAR_SIGN_IDS = frozenset(_DROP_SYNC_POOLS)

_GENERIC_ASYNC_POOL = ((_ID, _INV, _ONE), (_ONE, _ID, _SQRT), (_ID, _INV, _SQRT))

_CHAIN_INDEX = {
    "ensemble-product-lower": 0,
    "ensemble-chebyshev-link": 1,
    "ensemble-kantorovich-upper": 2,
}


# ---------------------------------------------------------------------------
# random generators


def trial_rng(seed: int, ordinal: int, trial: int) -> np.random.Generator:
    """The per-trial generator; see the module docstring for the splitting rule."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, ordinal, trial])))


def _haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-style random unitary: QR of a complex Gaussian matrix, phases fixed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r).copy()
    mag = np.abs(d)
    phases = np.where(mag > 1e-300, d / np.where(mag > 1e-300, mag, 1.0), 1.0)
    return q * phases.conj()[None, :]


def random_operator(
    rng: np.random.Generator, dim: int, interval: SpectralInterval
) -> HermitianOperator:
    """Eigenvalues uniform on the interval, eigenbasis Haar-random."""
    if dim < 1:
        raise ConfigInvalid(f"dim must be >= 1, got {dim}")
    lam = rng.uniform(interval.lo, interval.hi, size=dim)
    return HermitianOperator(lam, _haar_unitary(rng, dim), interval)


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    """Unit vector with complex-Gaussian direction."""
    if dim < 1:
        raise ConfigInvalid(f"dim must be >= 1, got {dim}")
    while True:
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        norm = float(np.linalg.norm(z))
        if norm > 1e-6:
            return StateVector(z / norm)


def random_ensemble(
    rng: np.random.Generator,
    n: int,
    dims: Sequence[int],
    interval: SpectralInterval,
    mode: str,
) -> OperatorEnsemble:
    """Random operators plus states normalized for the requested mode."""
    if n < 1 or len(dims) != n:
        raise ConfigInvalid(f"need n >= 1 block dims, got n={n}, dims={list(dims)!r}")
    ops = tuple(random_operator(rng, d, interval) for d in dims)
    raw = []
    for d in dims:
        while True:
            z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            if float(np.linalg.norm(z)) > 1e-6:
                raw.append(z)
                break
    if mode == PER_VECTOR:
        states = tuple(StateVector(z / np.linalg.norm(z)) for z in raw)
    else:
        total = math.sqrt(sum(float(np.linalg.norm(z)) ** 2 for z in raw))
        states = tuple(StateVector(z / total) for z in raw)
    return OperatorEnsemble(ops, states, mode)


# ---------------------------------------------------------------------------
# configuration


@dataclasses.dataclass(frozen=True)
class TrialConfig:
    """Deterministic description of one property-suite run."""

    seed: int = 0
    trials: int = 10_000
    dim_range: tuple[int, int] = (1, 8)
    interval: SpectralInterval = SpectralInterval(1.0, 2.0)
    function_pool: tuple[dict, ...] = DEFAULT_FUNCTION_POOL
    triple_pool: Optional[tuple[tuple[dict, dict, dict], ...]] = None
    grid_n: int = DEFAULT_GRID_N
    theorem_ids: tuple[str, ...] = DEFAULT_THEOREMS

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigInvalid(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigInvalid(f"trials must be a positive integer, got {self.trials!r}")
        dr = tuple(int(v) for v in self.dim_range)
        if len(dr) != 2 or not 1 <= dr[0] <= dr[1] <= MAX_DIM:
            raise ConfigInvalid(
                f"dim_range must satisfy 1 <= min <= max <= {MAX_DIM}, got {self.dim_range!r}"
            )
        object.__setattr__(self, "dim_range", dr)
        if not isinstance(self.interval, SpectralInterval):
            raise ConfigInvalid("interval must be a SpectralInterval")
        pool = tuple(self.function_pool)
        if not pool:
            raise ConfigInvalid("function_pool must not be empty")
        for desc in pool:
            function_from_descriptor(desc)
        object.__setattr__(self, "function_pool", pool)
        if self.triple_pool is not None:
            triples = tuple(tuple(t) for t in self.triple_pool)
            if not triples or any(len(t) != 3 for t in triples):
                raise ConfigInvalid("triple_pool must be a nonempty list of (f, g, h) triples")
            for t in triples:
                for desc in t:
                    function_from_descriptor(desc)
            object.__setattr__(self, "triple_pool", triples)
        if not isinstance(self.grid_n, int) or self.grid_n < 2:
            raise ConfigInvalid(f"grid_n must be an integer >= 2, got {self.grid_n!r}")
        ids = tuple(self.theorem_ids)
        if not ids:
            raise ConfigInvalid("theorem_ids must not be empty")
        for tid in ids:
            lookup(tid)
        object.__setattr__(self, "theorem_ids", ids)

    def to_doc(self) -> dict:
        doc = {
            "seed": self.seed,
            "trials": self.trials,
            "dim_range": [self.dim_range[0], self.dim_range[1]],
            "interval": [self.interval.lo, self.interval.hi],
            "function_pool": [dict(d) for d in self.function_pool],
            "grid_n": self.grid_n,
            "theorems": list(self.theorem_ids),
        }
        if self.triple_pool is not None:
            doc["triple_pool"] = [[dict(d) for d in t] for t in self.triple_pool]
        return doc


_CONFIG_KEYS = {
    "seed",
    "trials",
    "dim_range",
    "interval",
    "function_pool",
    "triple_pool",
    "grid_n",
    "theorems",
}


def config_from_doc(doc: dict) -> TrialConfig:
    """Parse a suite-configuration document (the file ``opineq suite`` reads)."""
    if not isinstance(doc, dict):
        raise ConfigInvalid("suite config must be an object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown config fields: {sorted(unknown)}")
    kwargs: dict = {}
    if "seed" in doc:
        kwargs["seed"] = int(doc["seed"])
    if "trials" in doc:
        kwargs["trials"] = int(doc["trials"])
    if "dim_range" in doc:
        dr = doc["dim_range"]
        if not isinstance(dr, list) or len(dr) != 2:
            raise ConfigInvalid(f"dim_range must be [min, max], got {dr!r}")
        kwargs["dim_range"] = (int(dr[0]), int(dr[1]))
    if "interval" in doc:
        iv = doc["interval"]
        if not isinstance(iv, list) or len(iv) != 2:
            raise ConfigInvalid(f"interval must be [lo, hi], got {iv!r}")
        kwargs["interval"] = SpectralInterval(float(iv[0]), float(iv[1]))
    if "function_pool" in doc:
        kwargs["function_pool"] = tuple(doc["function_pool"])
    if "triple_pool" in doc and doc["triple_pool"] is not None:
        kwargs["triple_pool"] = tuple(tuple(t) for t in doc["triple_pool"])
    if "grid_n" in doc:
        kwargs["grid_n"] = int(doc["grid_n"])
    if "theorems" in doc:
        ids = doc["theorems"]
        if isinstance(ids, str):
            ids = [s.strip() for s in ids.split(",") if s.strip()]
        kwargs["theorem_ids"] = tuple(ids)
    return TrialConfig(**kwargs)


# ---------------------------------------------------------------------------
# pools and per-trial sampling


def _valid_entries(
    descriptors: Sequence[dict], lo: float, hi: float
) -> list[tuple[dict, ScalarFunction]]:
    """Resolve descriptors and keep only those finite on [lo, hi]."""
    probe = np.linspace(lo, hi, 9)
    out: list[tuple[dict, ScalarFunction]] = []
    for desc in descriptors:
        fn = function_from_descriptor(desc)
        try:
            with np.errstate(all="ignore"):
                vals = np.asarray(fn(probe), dtype=np.float64)
        except (OpineqError, ValueError, FloatingPointError, ZeroDivisionError):
            continue
        if vals.shape == probe.shape and bool(np.all(np.isfinite(vals))):
            out.append((desc, fn))
    return out


def _valid_triples(
    triples: Sequence[tuple[dict, dict, dict]], lo: float, hi: float
) -> list[tuple[tuple[dict, dict, dict], tuple[ScalarFunction, ScalarFunction, ScalarFunction]]]:
    out = []
    for t in triples:
        resolved = _valid_entries(t, lo, hi)
        if len(resolved) == 3:
            out.append((tuple(t), tuple(fn for _, fn in resolved)))
    return out


@dataclasses.dataclass
class _SamplerCtx:
    """Resolved pools shared by every trial of one suite or search."""

    dim_range: tuple[int, int]
    interval: SpectralInterval
    grid_n: int
    functions: list[tuple[dict, ScalarFunction]]
    hull_functions: Optional[list[tuple[dict, ScalarFunction]]]
    triples: Optional[list]
    hull_triples: Optional[list]


def _build_ctx(
    dim_range: tuple[int, int],
    interval: SpectralInterval,
    grid_n: int,
    function_pool: Sequence[dict],
    triple_pool: Optional[Sequence[tuple[dict, dict, dict]]],
    theorem_ids: Sequence[str],
) -> _SamplerCtx:
    needs_positive = [tid for tid in theorem_ids if REGISTRY[tid].needs_positive]
    if needs_positive and interval.lo <= 0.0:
        raise ConfigInvalid(
            f"checks {needs_positive} need a positive interval, got {interval.as_pair()}"
        )
    functions = _valid_entries(function_pool, interval.lo, interval.hi)
    if not functions:
        raise ConfigInvalid(
            f"no pool function is defined everywhere on {interval.as_pair()}"
        )
    hull_functions = None
    hull_triples = None
    if any(tid in _HULL_IDS for tid in theorem_ids):
        hull = inverse_pair_hull(interval)
        hull_functions = _valid_entries(function_pool, hull.lo, hull.hi)
        if not hull_functions:
            raise ConfigInvalid(
                f"no pool function is defined everywhere on the hull {hull.as_pair()}"
            )
        if triple_pool is not None:
            hull_triples = _valid_triples(triple_pool, hull.lo, hull.hi)
            if not hull_triples:
                raise ConfigInvalid("no pool triple is defined everywhere on the hull")
    triples = None
    if triple_pool is not None:
        triples = _valid_triples(triple_pool, interval.lo, interval.hi)
        if not triples:
            raise ConfigInvalid(
                f"no pool triple is defined everywhere on {interval.as_pair()}"
            )
    return _SamplerCtx(
        dim_range=dim_range,
        interval=interval,
        grid_n=grid_n,
        functions=functions,
        hull_functions=hull_functions,
        triples=triples,
        hull_triples=hull_triples,
    )


def _draw_functions(
    entry: TheoremEntry, ctx: _SamplerCtx, rng: np.random.Generator
) -> dict[str, ScalarFunction]:
    if not entry.slots:
        return {}
    hull = entry.theorem_id in _HULL_IDS
    triples = ctx.hull_triples if hull else ctx.triples
    if triples is not None and set(entry.slots) == {"f", "g", "h"}:
        _, fns = triples[int(rng.integers(len(triples)))]
        return {"f": fns[0], "g": fns[1], "h": fns[2]}
    pool = ctx.hull_functions if hull else ctx.functions
    return {slot: pool[int(rng.integers(len(pool)))][1] for slot in entry.slots}


def _trial_parsed(
    entry: TheoremEntry,
    ctx: _SamplerCtx,
    rng: np.random.Generator,
    *,
    overrides: Optional[dict] = None,
    tuples_opposite: bool = False,
) -> dict:
    """Draw one random instance as a parsed scenario for the entry's runner."""
    dmin, dmax = ctx.dim_range
    parsed: dict = {"theorem": entry.theorem_id, "grid_n": ctx.grid_n}
    if entry.inputs_kind == SINGLE:
        dim = int(rng.integers(dmin, dmax + 1))
        parsed["functions"] = _draw_functions(entry, ctx, rng)
        parsed["operator"] = random_operator(rng, dim, ctx.interval)
        parsed["state"] = random_state(rng, dim)
    elif entry.inputs_kind == TWO_OP:
        dim_a = int(rng.integers(dmin, dmax + 1))
        dim_b = int(rng.integers(dmin, dmax + 1))
        parsed["functions"] = _draw_functions(entry, ctx, rng)
        parsed["operator"] = random_operator(rng, dim_a, ctx.interval)
        parsed["operator_b"] = random_operator(rng, dim_b, ctx.interval)
        parsed["state"] = random_state(rng, dim_a)
        parsed["state_b"] = random_state(rng, dim_b)
    elif entry.inputs_kind == ENSEMBLE:
        n = int(rng.integers(1, 5))
        dims = [int(rng.integers(dmin, dmax + 1)) for _ in range(n)]
        parsed["functions"] = _draw_functions(entry, ctx, rng)
        parsed["ensemble"] = random_ensemble(rng, n, dims, ctx.interval, entry.ensemble_mode)
    elif entry.inputs_kind == TUPLES:
        n = int(rng.integers(dmin, dmax + 1))
        lo, hi = ctx.interval.lo, ctx.interval.hi
        a = np.sort(rng.uniform(lo, hi, n))
        b = np.sort(rng.uniform(lo, hi, n))
        if tuples_opposite:
            b = b[::-1]
        perm = rng.permutation(n)
        parsed["tuples"] = {"a": a[perm], "b": b[perm]}
    else:  # pragma: no cover - registry enforces the kinds
        raise ConfigInvalid(f"unknown inputs kind {entry.inputs_kind!r}")
    if overrides:
        parsed.update(overrides)
    return parsed


# ---------------------------------------------------------------------------
# suite execution


@dataclasses.dataclass
class TheoremTally:
    """Per-check verdict counts for one suite run."""

    holds: int = 0
    violated: int = 0
    hypothesis_not_met: int = 0
    dispatched_ge: int = 0
    dispatched_le: int = 0
    worst_gap: Optional[float] = None
    worst_trial: Optional[int] = None

    def record(self, trial: int, report: InequalityReport) -> None:
        if report.direction == ">=":
            self.dispatched_ge += 1
        else:
            self.dispatched_le += 1
        if report.verdict == HYPOTHESIS_NOT_MET:
            self.hypothesis_not_met += 1
            return
        if report.verdict == VIOLATED:
            self.violated += 1
        else:
            self.holds += 1
        if self.worst_gap is None or report.gap < self.worst_gap:
            self.worst_gap = report.gap
            self.worst_trial = trial

    def to_doc(self) -> dict:
        return {
            "holds": self.holds,
            "violated": self.violated,
            "hypothesis_not_met": self.hypothesis_not_met,
            "dispatched_ge": self.dispatched_ge,
            "dispatched_le": self.dispatched_le,
            "worst_gap": self.worst_gap,
            "worst_trial": self.worst_trial,
        }


@dataclasses.dataclass
class SuiteSummary:
    """Counts, the globally worst reproduction bundle, and the config that ran.

    Wall time is kept on the object for operators but deliberately left out of
    ``to_doc`` so serialized summaries are byte-stable across reruns.  The
    worst-gap bundle tracks verdicts that actually counted (gated-out trials
    carry no oriented claim).
    """

    config: TrialConfig
    tallies: dict[str, TheoremTally]
    worst: Optional[dict]
    wall_time_s: float

    def totals(self) -> dict:
        return {
            "holds": sum(t.holds for t in self.tallies.values()),
            "violated": sum(t.violated for t in self.tallies.values()),
            "hypothesis_not_met": sum(t.hypothesis_not_met for t in self.tallies.values()),
        }

    def to_doc(self) -> dict:
        return {
            "config": self.config.to_doc(),
            "theorems": {tid: tally.to_doc() for tid, tally in self.tallies.items()},
            "totals": self.totals(),
            "worst": self.worst,
        }

    def exit_code(self) -> int:
        return 1 if self.totals()["violated"] > 0 else 0


def run_suite(
    config: TrialConfig,
    *,
    on_report: Optional[Callable[[str, int, InequalityReport], None]] = None,
) -> SuiteSummary:
    """Run ``config.trials`` random trials against every selected check.

    Checks execute in registry order regardless of the order ids were listed.
    Violation verdicts use the 10x roundoff separation factor, so a "violated"
    row is a genuine counterexample candidate, never numerical noise.
    """
    start = time.monotonic()
    selected = [e for e in REGISTRY_ORDER if e.theorem_id in set(config.theorem_ids)]
    ctx = _build_ctx(
        config.dim_range,
        config.interval,
        config.grid_n,
        config.function_pool,
        config.triple_pool,
        [e.theorem_id for e in selected],
    )
    tallies: dict[str, TheoremTally] = {}
    worst: Optional[dict] = None
    for entry in selected:
        tally = TheoremTally()
        tallies[entry.theorem_id] = tally
        for trial in range(config.trials):
            rng = trial_rng(config.seed, entry.ordinal, trial)
            parsed = _trial_parsed(entry, ctx, rng)
            report = entry.run(parsed, tol_factor=VIOLATION_FACTOR)
            tally.record(trial, report)
            if report.verdict != HYPOTHESIS_NOT_MET and (
                worst is None or report.gap < worst["gap"]
            ):
                worst = {
                    "theorem": entry.theorem_id,
                    "trial": trial,
                    "gap": report.gap,
                    "scenario": report.inputs_digest,
                }
            if on_report is not None:
                on_report(entry.theorem_id, trial, report)
    return SuiteSummary(
        config=config,
        tallies=tallies,
        worst=worst,
        wall_time_s=time.monotonic() - start,
    )


# ---------------------------------------------------------------------------
# falsification search


@dataclasses.dataclass(frozen=True)
class FalsifyResult:
    """Outcome of a hypothesis-dropping (or intact) counterexample search."""

    theorem_id: str
    drop: Optional[str]
    budget: int
    seed: int
    examined: int
    found: bool
    gap: Optional[float]
    verdict: Optional[str]
    scenario: Optional[dict]

    def to_doc(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "drop": self.drop,
            "budget": self.budget,
            "seed": self.seed,
            "examined": self.examined,
            "found": self.found,
            "gap": self.gap,
            "verdict": self.verdict,
            "scenario": self.scenario,
        }


def _falsify_rng(seed: int, ordinal: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, ordinal, FALSIFY_STREAM]))
    )


def _certify(doc: dict) -> InequalityReport:
    """Replay a candidate through the real checker at violation tolerance."""
    return run_scenario(scenario_from_doc(doc), tol_factor=VIOLATION_FACTOR)


def _scalar_expectations(
    fns: Sequence[ScalarFunction],
    lam1: np.ndarray,
    lam2: np.ndarray,
    w: np.ndarray,
) -> list[np.ndarray]:
    return [w * fn(lam1) + (1.0 - w) * fn(lam2) for fn in fns]


def _scalar_sign_gap(
    fg_h: tuple[ScalarFunction, ScalarFunction, ScalarFunction],
    lam1: np.ndarray,
    lam2: np.ndarray,
    w: np.ndarray,
) -> np.ndarray:
    f, g, h = fg_h
    with np.errstate(all="ignore"):
        e_h2 = w * h(lam1) ** 2 + (1.0 - w) * h(lam2) ** 2
        e_fg = w * f(lam1) * g(lam1) + (1.0 - w) * f(lam2) * g(lam2)
        e_hf = w * h(lam1) * f(lam1) + (1.0 - w) * h(lam2) * f(lam2)
        e_hg = w * h(lam1) * g(lam1) + (1.0 - w) * h(lam2) * g(lam2)
    return e_h2 * e_fg - e_hf * e_hg


def _batched_argmin(
    rng: np.random.Generator,
    budget: int,
    reserve: int,
    lo: float,
    hi: float,
    gap_fns: Sequence[Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]],
) -> tuple[int, Optional[tuple[float, float, float, float, int]]]:
    """Random stage of the search over 2x2 diagonal instances (lam1, lam2, w).

    Returns (examined, best) with best = (gap, lam1, lam2, w, gap_fn_index).
    """
    examined = 0
    best: Optional[tuple[float, float, float, float, int]] = None
    target = max(1, budget - reserve)
    while examined < target:
        per_fn = max(1, min(4096, -(-(target - examined) // len(gap_fns))))
        lam1 = rng.uniform(lo, hi, per_fn)
        lam2 = rng.uniform(lo, hi, per_fn)
        w = rng.uniform(0.0, 1.0, per_fn)
        for idx, gap_fn in enumerate(gap_fns):
            gaps = gap_fn(lam1, lam2, w)
            gaps = np.where(np.isfinite(gaps), gaps, np.inf)
            j = int(np.argmin(gaps))
            if best is None or float(gaps[j]) < best[0]:
                best = (float(gaps[j]), float(lam1[j]), float(lam2[j]), float(w[j]), idx)
            examined += per_fn
            if examined >= target:
                break
    return examined, best


def _refine(
    rng: np.random.Generator,
    best: tuple[float, float, float, float, int],
    steps: int,
    lo: float,
    hi: float,
    gap_fns: Sequence[Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]],
) -> tuple[int, tuple[float, float, float, float, int]]:
    """Local perturbation stage: shrinking Gaussian steps around the incumbent."""
    gap, l1, l2, w, idx = best
    gap_fn = gap_fns[idx]
    span = max(hi - lo, 1e-9)
    for k in range(steps):
        scale = 0.1 * (0.985**k)
        c1 = float(np.clip(l1 + rng.normal() * scale * span, lo, hi))
        c2 = float(np.clip(l2 + rng.normal() * scale * span, lo, hi))
        cw = float(np.clip(w + rng.normal() * scale, 1e-9, 1.0 - 1e-9))
        val = float(gap_fn(np.array([c1]), np.array([c2]), np.array([cw]))[0])
        if math.isfinite(val) and val < gap:
            gap, l1, l2, w = val, c1, c2, cw
    return steps, (gap, l1, l2, w, idx)


def _diag_scenario(
    tid: str,
    lam: Sequence[float],
    w: Optional[float],
    interval: SpectralInterval,
    grid_n: int,
) -> dict:
    doc: dict = {
        "theorem": tid,
        "operator": {"diagonal": [float(v) for v in lam], "interval": [interval.lo, interval.hi]},
        "grid_n": grid_n,
    }
    if w is not None:
        doc["state"] = {"components": [math.sqrt(w), math.sqrt(1.0 - w)]}
    return doc


def falsify(
    theorem_id: str,
    drop: Optional[str] = None,
    *,
    budget: int = 100_000,
    seed: int = 0,
    interval: Optional[SpectralInterval] = None,
    grid_n: int = DEFAULT_GRID_N,
) -> FalsifyResult:
    """Search for the most negative oriented gap, optionally dropping a hypothesis.

    ``drop`` disables exactly one precondition: "synchrony" forces the >=
    orientation with the grid gate off, "spectral-containment" lets the
    declared interval lie about the spectrum, "normalization" feeds the
    averaged chain a sum-of-squares ensemble.  The best candidate is always
    replayed through the real checker at violation tolerance, and ``found`` is
    true only when that replay says "violated".  2x2-diagonal families run a
    vectorized random + local-perturbation search; other checks fall back to
    full random instance checking, which is slower per candidate.
    """
    entry = lookup(theorem_id)
    if drop is not None:
        if drop not in _DROP_IDS:
            raise ConfigInvalid(
                f"drop must be one of {sorted(_DROP_IDS)} or None, got {drop!r}"
            )
        if theorem_id not in _DROP_IDS[drop]:
            applicable = ", ".join(sorted(_DROP_IDS[drop]))
            raise ConfigInvalid(
                f"dropping {drop!r} does not apply to {theorem_id!r} (applies to: {applicable})"
            )
    if not isinstance(budget, int) or budget < 1:
        raise ConfigInvalid(f"budget must be a positive integer, got {budget!r}")
    iv = interval if interval is not None else SpectralInterval(1.0, 4.0)
    if entry.needs_positive and iv.lo <= 0.0:
        raise ConfigInvalid(
            f"{theorem_id!r} needs a positive interval, got {iv.as_pair()}"
        )
    rng = _falsify_rng(seed, entry.ordinal)

    if theorem_id in _SCALAR_SIGN_IDS:
        return _falsify_scalar_sign(entry, drop, budget, seed, iv, grid_n, rng)
    if theorem_id in ("kantorovich-lower", "kantorovich-upper") and drop in (
        None,
        DROP_CONTAINMENT,
    ):
        return _falsify_scalar_kantorovich(entry, drop, budget, seed, iv, grid_n, rng)
    if theorem_id == "ensemble-product-lower" and drop == DROP_NORMALIZATION:
        return _falsify_scalar_normalization(entry, budget, seed, iv, grid_n, rng)
    return _falsify_generic(entry, drop, budget, seed, iv, grid_n, rng)


def _falsify_scalar_sign(
    entry: TheoremEntry,
    drop: Optional[str],
    budget: int,
    seed: int,
    iv: SpectralInterval,
    grid_n: int,
    rng: np.random.Generator,
) -> FalsifyResult:
    tid = entry.theorem_id
    if drop == DROP_SYNCHRONY:
        raw_pool = _DROP_SYNC_POOLS[tid]
    else:
        # honor fixed slots: g collapses to 1, h to the identity, as the check does
        coerced = []
        for f_d, g_d, h_d in SYNC_TRIPLE_POOL + ASYNC_TRIPLE_POOL + _DROP_SYNC_POOLS[tid]:
            t = (
                f_d,
                g_d if "g" in entry.slots else _ONE,
                h_d if "h" in entry.slots else _ID,
            )
            if t not in coerced:
                coerced.append(t)
        raw_pool = tuple(coerced)
    triples = _valid_triples(raw_pool, iv.lo, iv.hi)
    if not triples:
        raise ConfigInvalid(f"no search triple is defined everywhere on {iv.as_pair()}")

    gap_fns = []
    kept: list[tuple[dict, dict, dict]] = []
    for descs, fns in triples:
        if drop == DROP_SYNCHRONY:
            sign = 1.0
        else:
            ev = classify_synchrony(fns[0], fns[1], fns[2], iv, grid_n)
            implied = ev.implied_direction()
            if implied is None:
                continue  # mixed pairs are gated out when hypotheses are intact
            sign = 1.0 if implied == ">=" else -1.0
        fg_h = fns

        def gap_fn(l1, l2, w, fg_h=fg_h, sign=sign):
            return sign * _scalar_sign_gap(fg_h, l1, l2, w)

        gap_fns.append(gap_fn)
        kept.append(descs)
    if not gap_fns:
        raise ConfigInvalid("every search triple classified as mixed; nothing to search")

    reserve = min(256, budget // 10) if drop == DROP_SYNCHRONY else 0
    examined, best = _batched_argmin(rng, budget, reserve, iv.lo, iv.hi, gap_fns)
    if best is not None and reserve:
        steps, best = _refine(rng, best, reserve, iv.lo, iv.hi, gap_fns)
        examined += steps
    if best is None:  # pragma: no cover - pools are never empty here
        return FalsifyResult(tid, drop, budget, seed, examined, False, None, None, None)

    _, l1, l2, w, idx = best
    descs = kept[idx]
    doc = _diag_scenario(tid, [l1, l2], w, iv, grid_n)
    doc["functions"] = {
        slot: dict(d) for slot, d in zip(("f", "g", "h"), descs) if slot in entry.slots
    }
    if drop == DROP_SYNCHRONY:
        doc["direction"] = ">="
        doc["gate_hypothesis"] = False
    report = _certify(doc)
    return FalsifyResult(
        tid,
        drop,
        budget,
        seed,
        examined,
        report.verdict == VIOLATED,
        report.gap,
        report.verdict,
        doc,
    )


def _falsify_scalar_kantorovich(
    entry: TheoremEntry,
    drop: Optional[str],
    budget: int,
    seed: int,
    iv: SpectralInterval,
    grid_n: int,
    rng: np.random.Generator,
) -> FalsifyResult:
    tid = entry.theorem_id
    widen = drop == DROP_CONTAINMENT
    draw_hi = iv.hi + max(iv.hi - iv.lo, 1.0) if widen else iv.hi
    bound = (iv.lo + iv.hi) ** 2 / (4.0 * iv.lo * iv.hi)

    def gap_fn(l1, l2, w):
        product = (w * l1 + (1.0 - w) * l2) * (w / l1 + (1.0 - w) / l2)
        if tid == "kantorovich-lower":
            return product - 1.0
        return bound - product

    reserve = min(256, budget // 10) if widen else 0
    examined, best = _batched_argmin(rng, budget, reserve, iv.lo, draw_hi, [gap_fn])
    if best is not None and reserve:
        steps, best = _refine(rng, best, reserve, iv.lo, draw_hi, [gap_fn])
        examined += steps
    if best is None:  # pragma: no cover
        return FalsifyResult(tid, drop, budget, seed, examined, False, None, None, None)
    _, l1, l2, w, _ = best
    doc = _diag_scenario(tid, [l1, l2], w, SpectralInterval(iv.lo, draw_hi), grid_n)
    if widen:
        doc["bound_interval"] = [iv.lo, iv.hi]
    report = _certify(doc)
    return FalsifyResult(
        tid,
        drop,
        budget,
        seed,
        examined,
        report.verdict == VIOLATED,
        report.gap,
        report.verdict,
        doc,
    )


def _falsify_scalar_normalization(
    entry: TheoremEntry,
    budget: int,
    seed: int,
    iv: SpectralInterval,
    grid_n: int,
    rng: np.random.Generator,
) -> FalsifyResult:
    tid = entry.theorem_id

    def gap_fn(l1, l2, w):
        # two 1x1 blocks under sum-of-squares weights w and 1-w
        mean_a = (w * l1 + (1.0 - w) * l2) / 2.0
        mean_b = (w / l1 + (1.0 - w) / l2) / 2.0
        return mean_a * mean_b - 1.0

    reserve = min(256, budget // 10)
    examined, best = _batched_argmin(rng, budget, reserve, iv.lo, iv.hi, [gap_fn])
    if best is not None and reserve:
        steps, best = _refine(rng, best, reserve, iv.lo, iv.hi, [gap_fn])
        examined += steps
    if best is None:  # pragma: no cover
        return FalsifyResult(
            tid, DROP_NORMALIZATION, budget, seed, examined, False, None, None, None
        )
    _, l1, l2, w, _ = best
    rw = math.sqrt(w)
    rv = math.sqrt(1.0 - w)
    doc = {
        "theorem": tid,
        "gate_hypothesis": False,
        "grid_n": grid_n,
        "ensemble": {
            "operators": [
                {"diagonal": [l1], "interval": [iv.lo, iv.hi]},
                {"diagonal": [l2], "interval": [iv.lo, iv.hi]},
            ],
            "states": [{"components": [rw]}, {"components": [rv]}],
            "normalization": "sum_of_squares",
        },
    }
    report = _certify(doc)
    return FalsifyResult(
        tid,
        DROP_NORMALIZATION,
        budget,
        seed,
        examined,
        report.verdict == VIOLATED,
        report.gap,
        report.verdict,
        doc,
    )


def _falsify_generic(
    entry: TheoremEntry,
    drop: Optional[str],
    budget: int,
    seed: int,
    iv: SpectralInterval,
    grid_n: int,
    rng: np.random.Generator,
) -> FalsifyResult:
    tid = entry.theorem_id
    overrides: dict = {}
    triple_pool = None
    tuples_opposite = False
    op_interval = iv
    if drop == DROP_SYNCHRONY:
        overrides["gate_hypothesis"] = False
        if tid in _DIRECTION_AWARE:
            overrides["direction"] = ">="
        if set(entry.slots) == {"f", "g", "h"}:
            triple_pool = _GENERIC_ASYNC_POOL
        tuples_opposite = entry.inputs_kind == TUPLES
    elif drop == DROP_CONTAINMENT:
        overrides["gate_hypothesis"] = False
        op_interval = SpectralInterval(iv.lo, iv.hi + max(iv.hi - iv.lo, 1.0))
    ctx = _build_ctx(
        (1, min(4, MAX_DIM)),
        op_interval,
        grid_n,
        DEFAULT_FUNCTION_POOL,
        triple_pool,
        [tid],
    )
    best_any: Optional[InequalityReport] = None
    best_violated: Optional[InequalityReport] = None
    examined = 0
    for _ in range(budget):
        parsed = _trial_parsed(entry, ctx, rng, overrides=None, tuples_opposite=tuples_opposite)
        if drop == DROP_CONTAINMENT and entry.inputs_kind == ENSEMBLE:
            n = parsed["ensemble"].n
            parsed["per_op_intervals"] = [(iv.lo, iv.hi)] * n
        parsed.update(overrides)
        report = entry.run(parsed, tol_factor=VIOLATION_FACTOR)
        examined += 1
        if report.verdict == VIOLATED and (
            best_violated is None or report.gap < best_violated.gap
        ):
            best_violated = report
        if report.verdict != HYPOTHESIS_NOT_MET and (
            best_any is None or report.gap < best_any.gap
        ):
            best_any = report
    best = best_violated if best_violated is not None else best_any
    if best is None:
        return FalsifyResult(tid, drop, budget, seed, examined, False, None, None, None)
    return FalsifyResult(
        tid,
        drop,
        budget,
        seed,
        examined,
        best_violated is not None,
        best.gap,
        best.verdict,
        best.inputs_digest,
    )

"""Pinned scenario library: hand-verified instances of every registered check.

Each scenario is a plain JSON-able document (the same format ``opineq check``
reads), carrying an ``expect`` block with the hand-computed verdict and, where
the arithmetic is exact, the sides and gap to 1e-12.
"""

from __future__ import annotations

import math

from .registry import REGISTRY_ORDER

__all__ = ["SCENARIOS", "SCENARIOS_BY_NAME", "COVERAGE", "coverage_gaps"]

RT2 = math.sqrt(2.0)
IR2 = 1.0 / RT2
ATOL = 1e-12

ID = {"kind": "identity"}
ONE = {"kind": "constant", "c": 1.0}
EXP = {"kind": "exp"}


def _pow(p: float) -> dict:
    return {"kind": "power", "p": float(p)}


DIAG12 = {"diagonal": [1.0, 2.0], "interval": [1.0, 2.0]}
EQ2 = {"components": [IR2, IR2]}
HALF2 = {"components": [0.5, 0.5]}

TWO_BLOCKS = {
    "operators": [DIAG12, DIAG12],
    "states": [HALF2, HALF2],
    "normalization": "sum_of_squares",
}
PV_12_13 = {
    "operators": [
        {"diagonal": [1.0, 2.0], "interval": [1.0, 3.0]},
        {"diagonal": [1.0, 3.0], "interval": [1.0, 3.0]},
    ],
    "states": [EQ2, EQ2],
    "normalization": "per_vector",
}

_E1 = math.exp(1.0)
_E2 = math.exp(2.0)
_E4 = math.exp(4.0)

# <A^{-1}x,x> for diag(1,3) with equal weights, as floating point computes it
_B13 = (1.0 + 1.0 / 3.0) / 2.0


def _sc(name: str, theorem: str, expect: dict, **fields) -> dict:
    doc: dict = {"name": name, "theorem": theorem}
    doc.update(fields)
    expect = dict(expect)
    if any(k in expect for k in ("lhs", "rhs", "gap")):
        expect.setdefault("atol", ATOL)
    doc["expect"] = expect
    return doc


SCENARIOS: tuple[dict, ...] = (
    # --- sign bound, general weight ---
    _sc(
        "pc-sign/square-pair",
        "pc-sign",
        {"verdict": "holds", "lhs": 21.25, "rhs": 20.25, "gap": 1.0},
        operator=DIAG12,
        state=EQ2,
        functions={"f": _pow(2), "g": _pow(2), "h": ID},
    ),
    _sc(
        "pc-sign/async-inverse",
        "pc-sign",
        {"verdict": "holds", "lhs": 1.125, "rhs": 1.0, "gap": 0.125},
        direction="<=",
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "g": _pow(-1), "h": ONE},
    ),
    _sc(
        "pc-sign/self",
        "pc-sign",
        {"verdict": "holds", "lhs": 6.25, "rhs": 6.25, "gap": 0.0},
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "g": ID, "h": ID},
    ),
    _sc(
        "pc-sign/inverse-weight",
        "pc-sign",
        {"verdict": "holds", "lhs": (3.0 + 2.5 * RT2) / 4.0, "rhs": 1.5},
        direction="<=",
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "g": _pow(-1), "h": _pow(0.5)},
    ),
    # --- square bound ---
    _sc(
        "pc-square/equal",
        "pc-square",
        {"verdict": "holds", "lhs": 6.25, "rhs": 6.25, "gap": 0.0},
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "h": ID},
    ),
    _sc(
        "pc-square/half-power",
        "pc-square",
        {"verdict": "holds", "lhs": 3.75, "rhs": (0.5 + RT2) ** 2},
        operator=DIAG12,
        state=EQ2,
        functions={"f": _pow(0.5), "h": ID},
    ),
    _sc(
        "pc-square/eigenvector",
        "pc-square",
        {"verdict": "holds", "gap": 0.0},
        operator=DIAG12,
        state={"components": [1.0, 0.0]},
        functions={"f": EXP, "h": _pow(2)},
    ),
    # --- sign bound, identity weight ---
    _sc(
        "pc-sign-t/cubic",
        "pc-sign-t",
        {"verdict": "holds", "lhs": 41.25, "rhs": 38.25, "gap": 3.0},
        operator=DIAG12,
        state=EQ2,
        functions={"f": _pow(2), "g": _pow(3)},
    ),
    _sc(
        "pc-sign-t/async",
        "pc-sign-t",
        {"verdict": "holds", "lhs": 4.5 * (0.5 + RT2), "rhs": 2.5 * (0.5 + 2.0 * RT2)},
        direction="<=",
        operator=DIAG12,
        state=EQ2,
        functions={"f": _pow(2), "g": _pow(0.5)},
    ),
    # --- sign bound with second factor one ---
    _sc(
        "pc-moment/base",
        "pc-moment",
        {"verdict": "holds", "lhs": 12.75, "rhs": 11.25, "gap": 1.5},
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "h": _pow(2)},
    ),
    _sc(
        "pc-moment-t/root",
        "pc-moment-t",
        {
            "verdict": "holds",
            "lhs": 2.5 * (1.0 + RT2) / 2.0,
            "rhs": 1.5 * (0.5 + RT2),
        },
        operator=DIAG12,
        state=EQ2,
        functions={"f": _pow(0.5)},
    ),
    _sc(
        # the p > 1 power case classifies as asynchronous, so the bound
        # dispatches with the opposite orientation and still holds
        "pc-moment-t/power-above-one",
        "pc-moment-t",
        {"verdict": "holds", "lhs": 6.75, "rhs": 6.25, "gap": 0.5},
        direction="<=",
        operator=DIAG12,
        state=EQ2,
        functions={"f": _pow(2)},
    ),
    # --- mean/inverse-mean product chain ---
    _sc(
        "kantorovich-lower/eigenvector",
        "kantorovich-lower",
        {"verdict": "holds", "lhs": 1.0, "rhs": 1.0, "gap": 0.0},
        operator=DIAG12,
        state={"components": [1.0, 0.0]},
    ),
    _sc(
        "kantorovich-lower/equal-weight",
        "kantorovich-lower",
        {"verdict": "holds", "lhs": 1.125, "rhs": 1.0, "gap": 0.125},
        operator=DIAG12,
        state=EQ2,
    ),
    _sc(
        "kantorovich-upper/equal-weight",
        "kantorovich-upper",
        {"verdict": "holds", "lhs": 1.125, "rhs": 1.125, "gap": 0.0},
        operator=DIAG12,
        state=EQ2,
    ),
    _sc(
        "kantorovich-lower/scalar",
        "kantorovich-lower",
        {"verdict": "holds", "lhs": 1.0, "rhs": 1.0, "gap": 0.0},
        operator={"diagonal": [1.5, 1.5], "interval": [1.5, 1.5]},
        state=EQ2,
    ),
    _sc(
        "kantorovich-upper/scalar",
        "kantorovich-upper",
        {"verdict": "holds", "lhs": 1.0, "rhs": 1.0, "gap": 0.0},
        operator={"diagonal": [1.5, 1.5], "interval": [1.5, 1.5]},
        state=EQ2,
    ),
    # --- two operators, two states ---
    _sc(
        "pc-two-op/self-reduction",
        "pc-two-op",
        {"verdict": "holds", "lhs": 42.5, "rhs": 40.5, "gap": 2.0},
        operator=DIAG12,
        operator_b=DIAG12,
        state=EQ2,
        state_b=EQ2,
        functions={"f": _pow(2), "g": _pow(2), "h": ID},
    ),
    _sc(
        "pc-two-op/distinct",
        "pc-two-op",
        {"verdict": "holds", "lhs": 21.390625, "rhs": 19.6875, "gap": 1.703125},
        operator=DIAG12,
        operator_b={"diagonal": [1.0, 1.5], "interval": [1.0, 2.0]},
        state=EQ2,
        state_b=EQ2,
        functions={"f": _pow(2), "g": _pow(2), "h": ID},
    ),
    _sc(
        "pc-two-op/exp",
        "pc-two-op",
        {"verdict": "holds"},
        operator=DIAG12,
        operator_b={"diagonal": [1.25, 1.75], "interval": [1.0, 2.0]},
        state=EQ2,
        state_b=EQ2,
        functions={"f": EXP, "g": EXP, "h": _pow(-1)},
    ),
    # --- mean-point bound ---
    _sc(
        "mean-point/base",
        "mean-point",
        {"verdict": "holds", "lhs": 0.25, "rhs": 0.0, "gap": 0.25},
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "g": ID, "h": ONE},
    ),
    _sc(
        "mean-point/self",
        "mean-point",
        {"verdict": "holds", "lhs": -0.625, "rhs": -0.625, "gap": 0.0},
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "g": ID, "h": ID},
    ),
    _sc(
        "mean-point/async",
        "mean-point",
        {"verdict": "holds", "lhs": 0.0, "rhs": -0.125, "gap": 0.125},
        direction="<=",
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "g": _pow(-1), "h": ONE},
    ),
    _sc(
        "mean-point-square/base",
        "mean-point-square",
        {"verdict": "holds", "lhs": 0.25, "rhs": 0.0, "gap": 0.25},
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "h": ONE},
    ),
    _sc(
        "mean-point-square/quartic-weight",
        "mean-point-square",
        {"verdict": "holds"},
        operator=DIAG12,
        state=EQ2,
        functions={"f": _pow(0.5), "h": _pow(2)},
    ),
    _sc(
        "mean-point-square-t/root",
        "mean-point-square-t",
        {"verdict": "holds"},
        operator=DIAG12,
        state=EQ2,
        functions={"f": _pow(0.5)},
    ),
    # --- two-point bound at the mean and inverse mean ---
    _sc(
        "inverse-pair/base",
        "inverse-pair",
        {"verdict": "holds", "lhs": 2.8125, "rhs": 2.25, "gap": 0.5625},
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "g": ID, "h": ONE},
    ),
    _sc(
        "inverse-pair/identity-op",
        "inverse-pair",
        {"verdict": "holds", "gap": 0.0},
        operator={"diagonal": [1.0, 1.0], "interval": [0.5, 1.5]},
        state=EQ2,
        functions={"f": ID, "g": _pow(-1), "h": _pow(0.5)},
    ),
    _sc(
        "inverse-pair-square/base",
        "inverse-pair-square",
        {"verdict": "holds", "lhs": 2.8125, "rhs": 2.25, "gap": 0.5625},
        operator=DIAG12,
        state=EQ2,
        functions={"f": ID, "h": ONE},
    ),
    # --- summed checks over operator families ---
    _sc(
        "ensemble-pc-sign/two-blocks",
        "ensemble-pc-sign",
        {"verdict": "holds", "lhs": 21.25, "rhs": 20.25, "gap": 1.0},
        ensemble=TWO_BLOCKS,
        functions={"f": _pow(2), "g": _pow(2), "h": ID},
    ),
    _sc(
        "ensemble-pc-sign/single",
        "ensemble-pc-sign",
        {"verdict": "holds", "lhs": 21.25, "rhs": 20.25, "gap": 1.0},
        ensemble={
            "operators": [DIAG12],
            "states": [EQ2],
            "normalization": "sum_of_squares",
        },
        functions={"f": _pow(2), "g": _pow(2), "h": ID},
    ),
    _sc(
        "ensemble-pc-square/base",
        "ensemble-pc-square",
        {"verdict": "holds", "lhs": 3.75, "rhs": (0.5 + RT2) ** 2},
        ensemble=TWO_BLOCKS,
        functions={"f": _pow(0.5), "h": ID},
    ),
    _sc(
        "ensemble-pc-square-t/exp",
        "ensemble-pc-square-t",
        {
            "verdict": "holds",
            "lhs": 2.5 * (_E2 + _E4) / 2.0,
            "rhs": ((_E1 + 2.0 * _E2) / 2.0) ** 2,
        },
        ensemble=TWO_BLOCKS,
        functions={"f": EXP},
    ),
    _sc(
        "ensemble-mean-point/base",
        "ensemble-mean-point",
        {"verdict": "holds", "lhs": 0.25, "rhs": 0.0, "gap": 0.25},
        ensemble=TWO_BLOCKS,
        functions={"f": ID, "g": ID, "h": ONE},
    ),
    _sc(
        "ensemble-mean-point-square/base",
        "ensemble-mean-point-square",
        {"verdict": "holds", "lhs": 0.25, "rhs": 0.0, "gap": 0.25},
        ensemble=TWO_BLOCKS,
        functions={"f": ID, "h": ONE},
    ),
    _sc(
        "ensemble-mean-point-square-t/root",
        "ensemble-mean-point-square-t",
        {"verdict": "holds"},
        ensemble=TWO_BLOCKS,
        functions={"f": _pow(0.5)},
    ),
    # --- averaged mean/inverse-mean chain ---
    _sc(
        # two identity blocks under sum-of-squares normalization break the
        # first chain link: the averaged product is 1/4, not at least 1
        "ensemble-product-lower/counterexample",
        "ensemble-product-lower",
        {"verdict": "violated", "lhs": 0.25, "rhs": 1.0, "gap": -0.75},
        gate_hypothesis=False,
        ensemble={
            "operators": [
                {"diagonal": [1.0, 1.0], "interval": [0.5, 1.5]},
                {"diagonal": [1.0, 1.0], "interval": [0.5, 1.5]},
            ],
            "states": [{"components": [IR2, 0.0]}, {"components": [IR2, 0.0]}],
            "normalization": "sum_of_squares",
        },
    ),
    _sc(
        "ensemble-product-lower/per-vector",
        "ensemble-product-lower",
        {
            "verdict": "holds",
            "lhs": 1.75 * ((0.75 + _B13) / 2.0),
            "rhs": 1.0,
        },
        ensemble=PV_12_13,
    ),
    _sc(
        "ensemble-product-lower/single",
        "ensemble-product-lower",
        {"verdict": "holds", "lhs": 1.125, "rhs": 1.0, "gap": 0.125},
        ensemble={
            "operators": [DIAG12],
            "states": [EQ2],
            "normalization": "per_vector",
        },
    ),
    _sc(
        "ensemble-chebyshev-link/hypothesis-not-met",
        "ensemble-chebyshev-link",
        {"verdict": "hypothesis-not-met"},
        ensemble=PV_12_13,
    ),
    _sc(
        "ensemble-chebyshev-link/ties",
        "ensemble-chebyshev-link",
        {"verdict": "holds", "lhs": 1.125, "rhs": 1.125, "gap": 0.0},
        ensemble={
            "operators": [DIAG12, DIAG12],
            "states": [EQ2, EQ2],
            "normalization": "per_vector",
        },
    ),
    _sc(
        "ensemble-chebyshev-link/ordered",
        "ensemble-chebyshev-link",
        {"verdict": "holds", "lhs": 1.2825, "rhs": 1.27875, "gap": 0.00375},
        ensemble={
            "operators": [
                {"diagonal": [1.0, 2.0], "interval": [1.0, 4.0]},
                {"diagonal": [1.0, 4.0], "interval": [1.0, 4.0]},
            ],
            "states": [
                EQ2,
                {"components": [math.sqrt(11.0 / 15.0), math.sqrt(4.0 / 15.0)]},
            ],
            "normalization": "per_vector",
        },
    ),
    _sc(
        "ensemble-chebyshev-link/single",
        "ensemble-chebyshev-link",
        {"verdict": "holds", "lhs": 1.125, "rhs": 1.125, "gap": 0.0},
        ensemble={
            "operators": [DIAG12],
            "states": [EQ2],
            "normalization": "per_vector",
        },
    ),
    _sc(
        # both pairs sit exactly at their own interval constants, so the
        # per-operator bound ties: mean(ab) = mean(K) = 59/48
        "ensemble-kantorovich-upper/per-op",
        "ensemble-kantorovich-upper",
        {"verdict": "holds", "lhs": 59.0 / 48.0, "rhs": 59.0 / 48.0, "gap": 0.0},
        ensemble=PV_12_13,
        per_op_intervals=[[1.0, 2.0], [1.0, 3.0]],
    ),
    _sc(
        "ensemble-kantorovich-upper/shared",
        "ensemble-kantorovich-upper",
        {"verdict": "holds", "lhs": 4.0 / 3.0, "rhs": 59.0 / 48.0},
        ensemble=PV_12_13,
    ),
    _sc(
        "ensemble-kantorovich-upper/single",
        "ensemble-kantorovich-upper",
        {"verdict": "holds", "lhs": 1.125, "rhs": 1.125, "gap": 0.0},
        ensemble={
            "operators": [DIAG12],
            "states": [EQ2],
            "normalization": "per_vector",
        },
    ),
    # --- discrete tuples ---
    _sc(
        "discrete-chebyshev/arith",
        "discrete-chebyshev",
        {"verdict": "holds", "lhs": 14.0 / 3.0, "rhs": 4.0, "gap": 14.0 / 3.0 - 4.0},
        tuples={"a": [1.0, 2.0, 3.0], "b": [1.0, 2.0, 3.0]},
    ),
    _sc(
        "discrete-chebyshev/constant",
        "discrete-chebyshev",
        {"verdict": "holds", "gap": 0.0},
        tuples={"a": [5.0, 5.0, 5.0], "b": [1.0, 7.0, 2.0]},
    ),
)

SCENARIOS_BY_NAME: dict[str, dict] = {s["name"]: s for s in SCENARIOS}

COVERAGE: dict[str, tuple[str, ...]] = {
    entry.theorem_id: tuple(
        s["name"] for s in SCENARIOS if s["theorem"] == entry.theorem_id
    )
    for entry in REGISTRY_ORDER
}


def coverage_gaps() -> list[str]:
    """Registered ids with no pinned scenario; must stay empty."""
    return [tid for tid, names in COVERAGE.items() if not names]

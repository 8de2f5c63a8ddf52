"""Scalar function library, synchrony/monotonicity classification, r-scans."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opineq import (
    ASYNCHRONOUS,
    ArgumentOrder,
    ConfigInvalid,
    DomainViolation,
    GE,
    H_DECREASING,
    H_INCREASING,
    LE,
    MIXED,
    SYNCHRONOUS,
    SpectralInterval,
    affine,
    classify_monotonicity,
    classify_synchrony,
    constant,
    exp_fn,
    function_from_descriptor,
    identity,
    linear_combination,
    log_fn,
    mono_defect,
    neg_parabola,
    pointwise_product,
    power,
    scan_tr_regions,
    sync_product,
    tabulated,
)

IV12 = SpectralInterval(1.0, 2.0)


# ---------------------------------------------------------------------------
# construction, evaluation, descriptors


class TestEvaluation:
    def test_basic_values(self):
        assert identity()(1.5) == 1.5
        assert constant(3.0)(10.0) == 3.0
        assert power(2.0)(3.0) == 9.0
        assert power(-1.0)(4.0) == 0.25
        assert power(0.5)(4.0) == 2.0
        assert exp_fn()(0.0) == 1.0
        assert log_fn()(np.e) == pytest.approx(1.0)
        assert affine(2.0, -1.0)(3.0) == 5.0
        assert neg_parabola()(0.5) == 0.25

    def test_at_matches_call(self):
        f = power(2.0)
        assert f.at(1.5) == f(1.5)

    def test_pointwise_product_and_linear_combination(self):
        fg = pointwise_product(power(2.0), identity())
        assert fg(2.0) == 8.0
        combo = linear_combination((2.0, identity()), (-1.0, constant(1.0)))
        assert combo(3.0) == 5.0

    def test_linear_combination_empty_rejected(self):
        with pytest.raises(ConfigInvalid):
            linear_combination()

    def test_tabulated_interpolates(self):
        f = tabulated([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        assert f(0.5) == pytest.approx(1.0)
        assert f(1.0) == pytest.approx(2.0)

    def test_tabulated_validation(self):
        with pytest.raises(ConfigInvalid):
            tabulated([0.0, 1.0], [1.0])
        with pytest.raises(ConfigInvalid):
            tabulated([0.0], [1.0])
        with pytest.raises(ConfigInvalid):
            tabulated([1.0, 0.0], [0.0, 1.0])

    def test_labels_are_readable(self):
        assert power(2.0).label
        assert identity().label


class TestDomainChecks:
    def test_log_rejects_nonpositive(self):
        with pytest.raises(DomainViolation):
            log_fn()(0.0)
        with pytest.raises(DomainViolation):
            log_fn()(-1.0)

    def test_negative_power_rejects_zero(self):
        with pytest.raises(DomainViolation):
            power(-1.0)(0.0)

    def test_fractional_power_rejects_negatives(self):
        with pytest.raises(DomainViolation):
            power(0.5)(-1.0)

    def test_integer_power_accepts_negatives(self):
        assert power(2.0)(-3.0) == 9.0
        assert power(-1.0)(-2.0) == -0.5

    def test_declared_domain_enforced(self):
        f = function_from_descriptor({"kind": "identity", "domain": [0.0, 1.0]})
        assert f(0.5) == 0.5
        with pytest.raises(DomainViolation):
            f(2.0)

    def test_tabulated_outside_knots(self):
        f = tabulated([0.0, 1.0], [0.0, 1.0])
        with pytest.raises(DomainViolation):
            f(1.5)

    def test_non_finite_point_rejected(self):
        with pytest.raises(DomainViolation):
            identity()(np.nan)

    def test_domain_check_recurses_into_composites(self):
        fg = pointwise_product(log_fn(), identity())
        with pytest.raises(DomainViolation):
            fg(-1.0)


class TestDescriptors:
    @pytest.mark.parametrize(
        "f",
        [
            identity(),
            constant(2.5),
            power(-1.0),
            function_from_descriptor({"kind": "power", "p": 0.5, "domain": [0.0, 4.0]}),
            log_fn(),
            exp_fn(),
            affine(2.0, 1.0),
            neg_parabola(),
            tabulated([0.0, 0.5, 1.0], [1.0, 0.0, 1.0]),
            pointwise_product(identity(), exp_fn()),
            linear_combination((1.0, identity()), (-2.0, power(2.0))),
        ],
    )
    def test_round_trip(self, f):
        g = function_from_descriptor(f.descriptor())
        assert g.descriptor() == f.descriptor()
        for s in (0.25, 0.5, 0.75, 1.0):
            try:
                expected = f(s)
            except DomainViolation:
                with pytest.raises(DomainViolation):
                    g(s)
            else:
                assert g(s) == pytest.approx(expected, abs=1e-15)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigInvalid):
            function_from_descriptor({"kind": "sinh"})

    def test_non_dict_rejected(self):
        with pytest.raises(ConfigInvalid):
            function_from_descriptor("identity")

    def test_missing_field_rejected(self):
        with pytest.raises(ConfigInvalid):
            function_from_descriptor({"kind": "power"})

    def test_product_needs_two_factors(self):
        with pytest.raises(ConfigInvalid):
            function_from_descriptor(
                {"kind": "product", "factors": [identity().descriptor()]}
            )


# ---------------------------------------------------------------------------
# sync_product / mono_defect


class TestSyncProduct:
    def test_pinned_value(self):
        assert sync_product(constant(1.0), identity(), power(0.5), 1.0, 4.0) == -2.0

    def test_zero_on_diagonal(self):
        assert sync_product(identity(), power(2.0), constant(1.0), 1.3, 1.3) == 0.0

    def test_symmetry_in_arguments(self):
        f, g, h = power(2.0), log_fn(), identity()
        a = sync_product(f, g, h, 1.2, 1.9)
        assert sync_product(g, f, h, 1.2, 1.9) == pytest.approx(a)
        assert sync_product(f, g, h, 1.9, 1.2) == pytest.approx(a)

    @given(
        x=st.floats(min_value=1.0, max_value=2.0),
        y=st.floats(min_value=1.0, max_value=2.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_equal_functions_never_negative(self, x, y):
        f = power(2.0)
        assert sync_product(f, f, identity(), x, y) >= 0.0

    def test_classical_case_reduces_to_plain_product(self):
        f, g = power(2.0), exp_fn()
        x, y = 1.2, 1.8
        plain = (f(x) - f(y)) * (g(x) - g(y))
        assert sync_product(f, g, constant(1.0), x, y) == pytest.approx(plain)


class TestMonoDefect:
    def test_pinned_value(self):
        value = mono_defect(neg_parabola(), identity(), 0.25, 0.75)
        assert value == pytest.approx(-0.09375, abs=1e-15)

    def test_zero_when_function_equals_weight(self):
        assert mono_defect(identity(), identity(), 1.1, 1.7) == 0.0

    def test_argument_order_enforced(self):
        with pytest.raises(ArgumentOrder):
            mono_defect(identity(), constant(1.0), 0.75, 0.25)

    def test_constant_function_identity_weight(self):
        # h(x) f(t) - h(t) f(x) with f = 1, h = s gives x - t <= 0.
        assert mono_defect(constant(1.0), identity(), 0.5, 2.0) == -1.5


# ---------------------------------------------------------------------------
# classification


class TestClassifySynchrony:
    def test_power_pair_synchronous(self):
        v = classify_synchrony(power(2.0), power(3.0), identity(), IV12, 64)
        assert v.classification == SYNCHRONOUS
        assert v.witness_neg is None

    def test_inverse_pair_asynchronous(self):
        v = classify_synchrony(identity(), power(-1.0), constant(1.0), IV12, 64)
        assert v.classification == ASYNCHRONOUS
        assert v.witness_pos is None

    def test_exp_pair_with_power_weight_synchronous(self):
        v = classify_synchrony(exp_fn(), exp_fn(), power(1.7), IV12, 64)
        assert v.classification == SYNCHRONOUS

    def test_mixed_pair(self):
        v = classify_synchrony(
            neg_parabola(), identity(), constant(1.0), SpectralInterval(0.1, 0.9), 64
        )
        assert v.classification == MIXED
        assert v.witness_pos is not None and v.witness_neg is not None

    def test_witnesses_reproduce_their_signs(self):
        v = classify_synchrony(
            neg_parabola(), identity(), constant(1.0), SpectralInterval(0.1, 0.9), 64
        )
        f, g, h = neg_parabola(), identity(), constant(1.0)
        xp, yp = v.witness_pos
        xn, yn = v.witness_neg
        assert sync_product(f, g, h, xp, yp) > v.tol
        assert sync_product(f, g, h, xn, yn) < -v.tol

    def test_extremes_bracket_the_classification(self):
        v = classify_synchrony(power(2.0), power(3.0), identity(), IV12, 64)
        assert v.min_product >= -v.tol
        assert v.max_product >= v.min_product
        assert v.grid_size == 64

    def test_supports_and_implied_direction(self):
        sync = classify_synchrony(power(2.0), power(3.0), identity(), IV12, 64)
        assert sync.supports(GE) and not sync.supports(LE)
        assert sync.implied_direction() == GE
        anti = classify_synchrony(identity(), power(-1.0), constant(1.0), IV12, 64)
        assert anti.supports(LE) and not anti.supports(GE)
        assert anti.implied_direction() == LE
        mixed = classify_synchrony(
            neg_parabola(), identity(), constant(1.0), SpectralInterval(0.1, 0.9), 64
        )
        assert not mixed.supports(GE) and not mixed.supports(LE)
        assert mixed.implied_direction() is None
        with pytest.raises(ConfigInvalid):
            sync.supports("≥")

    def test_summary_shape(self):
        v = classify_synchrony(power(2.0), power(3.0), identity(), IV12, 16)
        doc = v.summary()
        assert doc["kind"] == "synchrony"
        assert doc["classification"] == SYNCHRONOUS
        assert {"min_product", "max_product", "grid_size", "tol"} <= set(doc)

    def test_self_pair_always_synchronous(self):
        for f in (identity(), power(2.0), exp_fn(), neg_parabola()):
            for h in (constant(1.0), identity(), exp_fn()):
                v = classify_synchrony(f, f, h, SpectralInterval(0.2, 1.8), 32)
                assert v.classification == SYNCHRONOUS

    @given(c=st.floats(min_value=0.1, max_value=10.0))
    @settings(max_examples=25, deadline=None)
    def test_weight_scaling_invariance(self, c):
        f, g = power(2.0), log_fn()
        base = classify_synchrony(f, g, identity(), IV12, 32)
        scaled_h = linear_combination((c, identity()))
        scaled = classify_synchrony(f, g, scaled_h, IV12, 32)
        assert scaled.classification == base.classification

    def test_weight_sign_flip_preserves_class(self):
        f, g = power(2.0), log_fn()
        base = classify_synchrony(f, g, identity(), IV12, 32)
        flipped = classify_synchrony(
            f, g, linear_combination((-1.0, identity())), IV12, 32
        )
        assert flipped.classification == base.classification

    def test_unit_weight_matches_classical_ordering(self):
        # With h = 1 both increasing => synchronous, opposite => asynchronous.
        v = classify_synchrony(identity(), exp_fn(), constant(1.0), IV12, 48)
        assert v.classification == SYNCHRONOUS
        w = classify_synchrony(
            identity(), linear_combination((-1.0, identity())), constant(1.0), IV12, 48
        )
        assert w.classification == ASYNCHRONOUS


class TestClassifyMonotonicity:
    def test_constant_vs_square_weight(self):
        v = classify_monotonicity(constant(1.0), power(2.0), IV12, 64)
        assert v.classification == H_DECREASING

    def test_identity_vs_sqrt_weight(self):
        v = classify_monotonicity(identity(), power(0.5), IV12, 64)
        assert v.classification == H_INCREASING

    def test_inverse_vs_inverse_square_weight(self):
        v = classify_monotonicity(power(-1.0), power(-2.0), IV12, 64)
        assert v.classification == H_INCREASING

    def test_mixed_defect(self):
        v = classify_monotonicity(
            neg_parabola(), constant(1.0), SpectralInterval(0.1, 0.9), 64
        )
        assert v.classification == MIXED

    def test_weight_must_be_positive(self):
        with pytest.raises(DomainViolation):
            classify_monotonicity(identity(), affine(1.0, -1.5), IV12, 64)

    def test_summary_shape(self):
        v = classify_monotonicity(identity(), power(0.5), IV12, 16)
        doc = v.summary()
        assert doc["kind"] == "monotonicity"
        assert {"min_defect", "max_defect", "grid_size", "tol"} <= set(doc)

    def test_witnesses_reproduce_signs(self):
        v = classify_monotonicity(
            neg_parabola(), constant(1.0), SpectralInterval(0.1, 0.9), 64
        )
        f, h = neg_parabola(), constant(1.0)
        xp, tp = v.witness_pos
        xn, tn = v.witness_neg
        assert mono_defect(f, h, xp, tp) > v.tol
        assert mono_defect(f, h, xn, tn) < -v.tol


class TestRelativeMonotonicityScope:
    """Relative increase only transfers to plain increase under extra hypotheses."""

    def test_unscoped_transfer_fails(self):
        # f = 1/s is relatively increasing against h = 1/s^2 yet plainly decreasing.
        f, h = power(-1.0), power(-2.0)
        rel = classify_monotonicity(f, h, IV12, 64)
        assert rel.classification == H_INCREASING
        plain = classify_monotonicity(f, constant(1.0), IV12, 64)
        assert plain.classification == H_DECREASING

    def test_decreasing_transfer_fails(self):
        # f = s(1-s) with h = s is ratio-decreasing yet plainly mixed.
        iv = SpectralInterval(0.1, 0.9)
        rel = classify_monotonicity(neg_parabola(), identity(), iv, 64)
        assert rel.classification == H_DECREASING
        plain = classify_monotonicity(neg_parabola(), constant(1.0), iv, 64)
        assert plain.classification == MIXED

    def test_converse_fails(self):
        # f = s is plainly increasing but not increasing relative to h = s^2.
        plain = classify_monotonicity(identity(), constant(1.0), IV12, 64)
        assert plain.classification == H_INCREASING
        rel = classify_monotonicity(identity(), power(2.0), IV12, 64)
        assert rel.classification == H_DECREASING

    @pytest.mark.parametrize(
        "f,h",
        [
            (power(2.0), identity()),
            (exp_fn(), identity()),
            (power(2.0), power(0.5)),
            (power(3.0), identity()),
        ],
    )
    def test_scoped_transfer_holds(self, f, h):
        # For nonnegative f and positive increasing h, relative increase
        # does imply plain increase.
        rel = classify_monotonicity(f, h, IV12, 64)
        assert rel.classification == H_INCREASING
        plain = classify_monotonicity(f, constant(1.0), IV12, 64)
        assert plain.classification == H_INCREASING


# ---------------------------------------------------------------------------
# power-weight region scans


class TestScanTrRegions:
    def test_constant_identity_pattern(self):
        out = scan_tr_regions(constant(1.0), identity(), [-1.0, 0.5, 2.0], IV12, 64)
        assert [r for r, _ in out] == [-1.0, 0.5, 2.0]
        assert [v.classification for _, v in out] == [
            SYNCHRONOUS,
            ASYNCHRONOUS,
            SYNCHRONOUS,
        ]

    def test_identity_inverse_pattern(self):
        out = scan_tr_regions(identity(), power(-1.0), [-2.0, 0.0, 2.0], IV12, 64)
        assert [v.classification for _, v in out] == [
            SYNCHRONOUS,
            ASYNCHRONOUS,
            SYNCHRONOUS,
        ]

    def test_equal_functions_synchronous_everywhere(self):
        out = scan_tr_regions(power(2.0), power(2.0), [-2.0, -0.5, 1.0, 3.0], IV12, 32)
        assert all(v.classification == SYNCHRONOUS for _, v in out)

    def test_zero_exponent_matches_unit_weight(self):
        f, g = identity(), power(-1.0)
        (_, via_scan), = scan_tr_regions(f, g, [0.0], IV12, 64)
        direct = classify_synchrony(f, g, constant(1.0), IV12, 64)
        assert via_scan.classification == direct.classification

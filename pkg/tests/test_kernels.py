import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

import curveops as co
from curveops.kernels import (
    DEFAULT_MAX_WINDOW,
    DivergenceError,
    KernelValidationReport,
    PolynomialDecay,
    SamplingKernel,
    TruncationError,
    continuity_defect,
    support_defect,
    validate_kernel,
)


class TestSinc:
    def test_zero(self):
        assert co.sinc(0.0) == 1.0

    def test_integer_zero(self):
        assert abs(co.sinc(1.0)) < 1e-15

    def test_half(self):
        assert co.sinc(0.5) == pytest.approx(2 / math.pi, abs=1e-15)

    def test_even(self):
        ts = np.linspace(0.1, 7.3, 40)
        assert np.array_equal(co.sinc(ts), co.sinc(-ts))


class TestFejer:
    def test_zero(self):
        assert co.fejer(0.0) == 0.5

    def test_even_integer_zero(self):
        assert abs(co.fejer(2.0)) < 1e-30

    def test_one(self):
        assert co.fejer(1.0) == pytest.approx(2 / math.pi ** 2, abs=1e-15)

    def test_nonnegative(self):
        ts = np.linspace(-20, 20, 2001)
        assert np.all(co.fejer(ts) >= 0)

    @given(st.floats(-50, 50))
    @settings(max_examples=200, deadline=None)
    def test_symmetry_exact(self, t):
        assert co.fejer(-t) == co.fejer(t)


def _bspline_conv_oracle(m, t):
    """Numerical convolution of the order-(m-1) spline with the unit indicator.

    (f * M1)(t) is the integral of f over [t - 1/2, t + 1/2]; quadrature with
    the spline knots as breakpoints keeps the oracle at machine precision.
    """
    lo, hi = t - 0.5, t + 0.5
    knots = [-(m - 1) / 2 + j for j in range(m)]
    inner = [p for p in knots if lo < p < hi]
    total, _ = quad(lambda x: co.bspline(m - 1, x), lo, hi, points=inner or None,
                    limit=100)
    return total


class TestBspline:
    def test_order_one_closed_boundary(self):
        assert co.bspline(1, 0.5) == 1.0
        assert co.bspline(1, -0.5) == 1.0
        assert co.bspline(1, 0.5000001) == 0.0

    def test_rejects_order_zero(self):
        with pytest.raises(ValueError):
            co.bspline(0, 0.0)

    def test_center_values(self):
        # frozen from the convolution oracle: M1*M1 peaks at 1, (M1*M1)*M1 at 3/4
        assert co.bspline(2, 0.0) == pytest.approx(1.0, abs=1e-12)
        assert co.bspline(3, 0.0) == pytest.approx(0.75, abs=1e-12)

    def test_outside_support(self):
        assert co.bspline(4, 3.0) == 0.0
        assert co.bspline(2, -1.0000001) == 0.0

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_convolution_consistency(self, m):
        ts = np.linspace(-m / 2, m / 2, 41)
        oracle = np.array([_bspline_conv_oracle(m, t) for t in ts])
        assert np.max(np.abs(co.bspline(m, ts) - oracle)) < 1e-6

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    def test_unit_integral(self, m):
        knots = [-m / 2 + j for j in range(m + 1)]
        total, err = quad(lambda t: co.bspline(m, t), -m / 2, m / 2,
                          points=knots, limit=200)
        assert total == pytest.approx(1.0, abs=1e-8)
        assert err < 1e-8

    @given(st.floats(-5, 5), st.integers(1, 6))
    @settings(max_examples=200, deadline=None)
    def test_symmetry_exact(self, t, m):
        assert co.bspline(m, -t) == co.bspline(m, t)


class TestValidateKernel:
    def test_bspline3_exact_partition(self):
        report = validate_kernel(co.bspline_kernel(3), [0.0, 0.25, 0.5], 1e-10)
        assert report.max_partition_defect < 1e-10

    @pytest.mark.parametrize("m", [2, 4, 5])
    def test_bspline_partition_random_grid(self, m):
        rng = np.random.default_rng(7)
        report = validate_kernel(co.bspline_kernel(m), rng.uniform(-3, 3, 25), 1e-9)
        assert report.max_partition_defect < 1e-12
        assert report.abs_sum_sup == pytest.approx(1.0, abs=1e-12)

    def test_fejer_truncated_partition(self):
        # window certified for a 1e-8 tail; defect comfortably below 1e-6
        report = validate_kernel(co.fejer_kernel(), [0.0, 0.5], 1e-8, tail_probes=())
        assert report.max_partition_defect < 1e-6
        assert report.abs_sum_sup >= 1.0

    def test_fejer_tail_probes_decay(self):
        report = validate_kernel(co.fejer_kernel(), [0.0, 0.5], 1e-6,
                                 tail_probes=((0.25, 10), (0.25, 40)))
        assert report.tail_mass[(0.25, 40)] < report.tail_mass[(0.25, 10)]

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            validate_kernel(co.bspline_kernel(2), [], 1e-8)

    def test_divergence_signal(self):
        liar = SamplingKernel(
            name="liar",
            evaluate=lambda t: np.ones_like(np.asarray(t, dtype=np.float64)),
            support=PolynomialDecay(constant=1.0, exponent=2.0),
        )
        with pytest.raises(DivergenceError):
            validate_kernel(liar, [0.3], 1e-3, ceiling=100.0)

    def test_infeasible_tolerance_signals_truncation(self):
        with pytest.raises(TruncationError):
            validate_kernel(co.fejer_kernel(), [0.0], 1e-13)

    def test_report_rejects_negative_fields(self):
        with pytest.raises(ValueError):
            KernelValidationReport(max_partition_defect=-1.0, abs_sum_sup=1.0)


class TestMetadataProbes:
    @pytest.mark.parametrize("kernel", [co.fejer_kernel(), co.bspline_kernel(2),
                                        co.bspline_kernel(4)])
    def test_continuity(self, kernel):
        assert continuity_defect(kernel) < 0.01

    def test_order_one_is_discontinuous(self):
        assert continuity_defect(co.bspline_kernel(1)) == 1.0

    @pytest.mark.parametrize("m", [2, 3, 5])
    def test_compact_support_holds(self, m):
        assert support_defect(co.bspline_kernel(m)) == 0.0

    def test_fejer_decay_envelope_holds(self):
        assert support_defect(co.fejer_kernel()) < 1e-12


def test_custom_kernel_window_matches_builtin():
    # the generic (callable-driven) summation path agrees with the fast path
    custom = SamplingKernel(
        name="fejer-as-custom",
        evaluate=lambda t: 0.5 * np.sinc(0.5 * np.asarray(t, dtype=np.float64)) ** 2,
        support=PolynomialDecay(constant=2 / math.pi ** 2, exponent=2.0),
    )
    grid = [0.0, 0.3, 0.7]
    fast = validate_kernel(co.fejer_kernel(), grid, 1e-5, tail_probes=())
    slow = validate_kernel(custom, grid, 1e-5, tail_probes=())
    assert fast.max_partition_defect == pytest.approx(slow.max_partition_defect,
                                                      abs=1e-12)
    assert DEFAULT_MAX_WINDOW > 2 ** 20

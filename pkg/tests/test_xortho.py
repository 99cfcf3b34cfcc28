import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from direop.errors import DegenerateParameterError, InvalidArgumentError
from direop.potentials import PotentialSpec, jacobi_indices, validate
from direop.specialfn import jacobi, laguerre
from direop.verify import ci_specs
from direop.xortho import (
    XmJacobiSpec,
    XmLaguerreSpec,
    denominator_nonzero_scan,
    xm_derivative,
    xm_jacobi,
    xm_jacobi_denominator,
    xm_jacobi_numerator,
    xm_laguerre,
    xm_laguerre_denominator,
    xm_laguerre_numerator,
)

SAMPLES = [-1.3, -0.2, 0.4, 1.0, 2.7]


def central(f, z, h=1e-6):
    return (f(z + h) - f(z - h)) / (2 * h)


class TestLaguerre:
    @pytest.mark.parametrize("alpha", [0.5, 1.5, 3.25])
    def test_x1_closed_forms(self, alpha):
        spec = XmLaguerreSpec(1, alpha)
        for z in SAMPLES:
            assert xm_laguerre(spec, 0, z) == pytest.approx(1 + alpha + z, abs=1e-10)
            assert xm_laguerre(spec, 1, z) == pytest.approx(alpha * (alpha + 2) - z * z, abs=1e-10)

    def test_x1_examples(self):
        assert xm_laguerre(XmLaguerreSpec(1, 1.5), 0, 2.0) == pytest.approx(4.5, abs=1e-14)
        assert xm_laguerre(XmLaguerreSpec(1, 1.5), 1, 1.0) == pytest.approx(4.25, abs=1e-14)

    def test_x1_derivatives(self):
        spec = XmLaguerreSpec(1, 1.5)
        for z in SAMPLES:
            assert xm_derivative("laguerre", spec, 0, z) == pytest.approx(1.0, abs=1e-12)
            assert xm_derivative("laguerre", spec, 1, z) == pytest.approx(-2 * z, abs=1e-12)

    def test_denominator_examples(self):
        assert xm_laguerre_denominator(XmLaguerreSpec(0, 0.7), 3.0) == 1.0
        assert xm_laguerre_denominator(XmLaguerreSpec(1, 1.5), 1.0) == pytest.approx(2.5, abs=1e-14)
        z = np.linspace(0, 50, 101)
        assert np.all(xm_laguerre_denominator(XmLaguerreSpec(2, 1.5), z) > 0)

    def test_numerator_is_ground_state_polynomial(self):
        spec = XmLaguerreSpec(3, 1.5)
        z = np.linspace(0, 5, 11)
        assert np.allclose(xm_laguerre_numerator(spec, z), xm_laguerre(spec, 0, z), rtol=1e-13)

    def test_degree_is_n_plus_m(self):
        spec = XmLaguerreSpec(2, 1.5)
        z = np.linspace(-2, 2, 9)
        coeffs = np.polyfit(z, xm_laguerre(spec, 3, z), 8)
        assert np.allclose(coeffs[:3], 0, atol=1e-8)
        assert abs(coeffs[3]) > 1e-3

    @settings(max_examples=50)
    @given(st.integers(0, 8), st.floats(-2.5, 3), st.floats(-4, 6))
    def test_m0_reduces_to_classical(self, n, alpha, z):
        # L_n^(a-1) + L_{n-1}^(a) = L_n^(a): the m = 0 constant is exactly 1
        value = xm_laguerre(XmLaguerreSpec(0, alpha), n, z)
        assert value == pytest.approx(laguerre(n, alpha, z), rel=1e-10, abs=1e-10)

    @settings(max_examples=40)
    @given(st.integers(0, 3), st.integers(0, 4), st.floats(0.3, 3), st.floats(-3, 3))
    def test_derivative_matches_finite_difference(self, m, n, alpha, z):
        spec = XmLaguerreSpec(m, alpha)
        fd = central(lambda t: xm_laguerre(spec, n, t), z)
        assert abs(xm_derivative("laguerre", spec, n, z) - fd) <= 1e-7 * max(1.0, abs(fd))
        fd2 = central(lambda t: xm_derivative("laguerre", spec, n, t), z)
        assert abs(xm_derivative("laguerre", spec, n, z, order=2) - fd2) <= 1e-7 * max(1.0, abs(fd2))

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidArgumentError):
            XmLaguerreSpec(-1, 0.5)
        with pytest.raises(InvalidArgumentError):
            xm_laguerre(XmLaguerreSpec(1, 0.5), -1, 0.0)
        with pytest.raises(InvalidArgumentError):
            xm_derivative("hermite", XmLaguerreSpec(1, 0.5), 0, 0.0)


def display(a, b, m, n, z):
    """The exceptional Jacobi display evaluated term by term with scipy's classical polynomials."""
    pj = special.eval_jacobi
    p_prev = pj(n - 1, a + 2, b, z) if n >= 1 else 0.0
    first = (1 + a + b + n) / (2 * (1 + a + n)) * (z - 1) * pj(m, -a - 1, b - 1, z) * p_prev
    second = (1 + a - m) / (a + 1 + n) * pj(m, -a - 2, b, z) * pj(n, a + 1, b - 1, z)
    return (-1) ** m * (first + second)


class TestJacobi:
    def test_term_by_term_example(self):
        value = xm_jacobi(XmJacobiSpec(1, 2.5, 3.5), 1, 0.0)
        assert value == pytest.approx(display(2.5, 3.5, 1, 1, 0.0), rel=1e-13)
        assert value == pytest.approx(-14 / 9, rel=1e-13)

    @pytest.mark.parametrize("a,b", [(1.5, 2.5), (-2.5, -4.5), (0.25, 3.0)])
    def test_x1_ground_state(self, a, b):
        # n = 0 keeps only the second product: -(a/(a+1)) P_1^(-a-2, b)
        for z in SAMPLES:
            expected = -a / (a + 1) * special.eval_jacobi(1, -a - 2, b, z)
            assert xm_jacobi(XmJacobiSpec(1, a, b), 0, z) == pytest.approx(expected, rel=1e-12, abs=1e-13)

    def test_numerator_proportional_to_ground_state(self):
        spec = XmJacobiSpec(2, 1.5, 2.5)
        z = np.linspace(-0.9, 0.9, 7)
        ratio = xm_jacobi(spec, 0, z) / xm_jacobi_numerator(spec, z)
        assert np.allclose(ratio, ratio[0], rtol=1e-12)

    @settings(max_examples=50)
    @given(st.integers(0, 6), st.floats(-3, 3), st.floats(-3, 3), st.floats(-1, 1))
    def test_m0_reduces_to_classical(self, n, a, b, z):
        if abs(a + 1 + n) < 1e-3:
            return
        # the m = 0 display collapses to P_n^(a,b) with constant exactly 1
        value = xm_jacobi(XmJacobiSpec(0, a, b), n, z)
        assert value == pytest.approx(jacobi(n, a, b, z), rel=1e-9, abs=1e-9)

    @settings(max_examples=40)
    @given(st.integers(0, 3), st.integers(0, 4), st.floats(-3, 3), st.floats(-3, 3), st.floats(-1, 1))
    def test_matches_display(self, m, n, a, b, z):
        if abs(a + 1 + n) < 1e-3:
            return
        expected = display(a, b, m, n, z)
        if not np.isfinite(expected):
            return  # scipy gives up on some degenerate parameter sets
        assert xm_jacobi(XmJacobiSpec(m, a, b), n, z) == pytest.approx(expected, rel=1e-9, abs=1e-9)

    def test_scarf_x1_denominator_is_the_linear_factor(self):
        A, B = 3.0, 1.0
        idx = jacobi_indices(PotentialSpec.scarf(A, B, 1))
        spec = XmJacobiSpec(1, idx.alpha, idx.beta)
        for z in SAMPLES:
            assert xm_jacobi_denominator(spec, z) == pytest.approx(-(2 * A - 1 - 2 * B * z) / 2, abs=1e-13)

    def test_denominator_examples(self):
        assert xm_jacobi_denominator(XmJacobiSpec(0, 1.0, 2.0), 0.3) == 1.0
        value = xm_jacobi_denominator(XmJacobiSpec(2, 2.5, 3.5), 0.5)
        assert value == pytest.approx(special.eval_jacobi(2, -3.5, 2.5, 0.5), rel=1e-13)

    @settings(max_examples=40)
    @given(st.integers(0, 3), st.integers(0, 4), st.floats(0.5, 3), st.floats(0.5, 4), st.floats(-0.95, 0.95))
    def test_derivative_matches_finite_difference(self, m, n, a, b, z):
        spec = XmJacobiSpec(m, a, b)
        fd = central(lambda t: xm_jacobi(spec, n, t), z)
        assert abs(xm_derivative("jacobi", spec, n, z) - fd) <= 1e-7 * max(1.0, abs(fd))
        fd2 = central(lambda t: xm_derivative("jacobi", spec, n, t), z)
        assert abs(xm_derivative("jacobi", spec, n, z, order=2) - fd2) <= 1e-7 * max(1.0, abs(fd2))

    def test_degenerate_coefficient(self):
        with pytest.raises(DegenerateParameterError):
            xm_jacobi(XmJacobiSpec(1, -3.0, 1.0), 2, 0.0)


class TestScan:
    def test_positive_laguerre_denominator(self):
        spec = XmLaguerreSpec(2, 1.5)
        assert denominator_nonzero_scan(lambda z: xm_laguerre_denominator(spec, z), np.linspace(0, 50, 4096))

    def test_scarf_linear_factor(self):
        z = np.linspace(-1, 1, 4096)
        assert denominator_nonzero_scan(lambda t: 2 * 3 - 1 - 2 * 1 * t, z)
        # A=1, B=3: 1 - 6z changes sign inside (-1, 1)
        assert not denominator_nonzero_scan(lambda t: 2 * 1 - 1 - 2 * 3 * t, z)

    def test_threshold_and_non_finite(self):
        z = np.linspace(0, 1, 16)
        assert not denominator_nonzero_scan(lambda t: t, z)
        assert not denominator_nonzero_scan(lambda t: np.where(t > 0.5, np.inf, 1.0), z)
        assert denominator_nonzero_scan(lambda t: 2.0, z)

    def test_accepts_grid_like(self):
        class Nodes:
            nodes = np.linspace(1, 2, 32)

        assert denominator_nonzero_scan(lambda t: t, Nodes())

    def test_every_ci_spec_passes(self):
        # validate runs the scan for m >= 1 and raises if it fails
        for spec in ci_specs((1, 2)):
            assert validate(spec) is not None

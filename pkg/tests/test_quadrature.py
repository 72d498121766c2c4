from fractions import Fraction

import numpy as np
import pytest

from conftest import random_polynomial
from transdist import expr as ex
from transdist import quadrature as qd
from transdist.expr import Box


def exact_polynomial_integral(poly_expr, box: Box) -> Fraction:
    """Independent oracle: integrate the monomial dictionary exactly."""
    poly = ex.as_polynomial(poly_expr)
    assert poly is not None
    total = Fraction(0)
    for mono, c in poly.items():
        piece = c
        for n, (lo, hi) in zip(mono, box.intervals):
            lo_f, hi_f = Fraction(lo), Fraction(hi)
            piece *= (hi_f ** (n + 1) - lo_f ** (n + 1)) / (n + 1)
        total += piece
    return total


class TestIntegrate:
    def test_linear_is_exact_at_minimal_order(self):
        assert qd.integrate(ex.parse("x0", 1), Box.of([(0, 1)]), 2) == 0.5

    def test_degenerate_box_is_zero(self):
        assert qd.integrate(ex.parse("bump(x0)", 1), Box.of([(1, 1)]), 8) == 0.0

    def test_empty_box_is_zero(self):
        assert qd.integrate(ex.parse("x0", 1), Box.empty(1), 8) == 0.0

    def test_bump_reference_constant(self):
        i64 = qd.integrate(ex.parse("bump(x0)", 1), Box.of([(-1, 1)]), 64)
        i96 = qd.integrate(ex.parse("bump(x0)", 1), Box.of([(-1, 1)]), 96)
        assert abs(i64 - i96) < 1e-12
        assert i64 == qd.BUMP_INTEGRAL

    def test_callable_integrand(self):
        val = qd.integrate(lambda pts: pts[:, 0] ** 2, Box.of([(0, 2)]), 4)
        assert val == pytest.approx(8.0 / 3.0, rel=1e-15)

    @pytest.mark.parametrize("q", [2, 4, 8])
    def test_polynomial_exactness_up_to_degree_2q_minus_1(self, q):
        rng = np.random.default_rng(42 + q)
        box = Box.of([(-1.0, 1.5)])
        for _ in range(5):
            coeffs = rng.integers(-4, 5, size=2 * q)
            e = ex.add(*(ex.mul(ex.const(int(c), 1), ex.int_pow(ex.var(0, 1), n))
                         for n, c in enumerate(coeffs)))
            exact = float(exact_polynomial_integral(e, box))
            got = qd.integrate(e, box, q)
            assert got == pytest.approx(exact, rel=1e-12, abs=1e-12)

    def test_tensor_product_polynomial_exactness(self):
        rng = np.random.default_rng(3)
        box = Box.of([(-1, 1), (0, 2)])
        e = random_polynomial(rng, 2, max_degree=3)
        exact = float(exact_polynomial_integral(e, box))
        got = qd.integrate(e, box, 8)
        assert got == pytest.approx(exact, rel=1e-12, abs=1e-12)

    def test_self_convergence_decreases_monotonically(self):
        e = ex.parse("bump(x0)", 1)
        box = Box.of([(-1, 1)])
        gaps = []
        for q in (8, 16, 32, 64):
            gaps.append(abs(qd.integrate(e, box, q) - qd.integrate(e, box, 2 * q)))
        for a, b in zip(gaps, gaps[1:]):
            assert b <= a + 1e-13


class TestRule:
    def test_weights_sum_to_axis_lengths(self):
        rule = qd.QuadratureRule(Box.of([(0, 3), (-1, 1)]), 16)
        assert rule.weights.sum() == pytest.approx(6.0, rel=1e-13)
        assert np.all(rule.weights > 0)

    def test_unbounded_box_rejected(self):
        with pytest.raises(ValueError):
            qd.QuadratureRule(Box.whole(1), 8)

    def test_low_order_rejected(self):
        with pytest.raises(ValueError):
            qd.QuadratureRule(Box.of([(0, 1)]), 1)


class TestDefaultOrder:
    def test_override_and_restore(self):
        old = qd.default_order()
        try:
            qd.set_default_order(48)
            assert qd.default_order() == 48
        finally:
            qd.set_default_order(old)

    def test_invalid_order_rejected(self):
        with pytest.raises(ValueError):
            qd.set_default_order(1)

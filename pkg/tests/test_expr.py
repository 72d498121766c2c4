import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fd_derivative, grid_points
from transdist import expr as ex
from transdist.expr import Box, DimensionError, ExprSyntaxError


class TestParse:
    def test_product_of_base_and_fibre_variable(self):
        e = ex.parse("x0^2 * y0", 2, base_dim=1)
        assert isinstance(e, ex.Product)
        assert e.evaluate((3.0, 2.0)) == 18.0

    def test_bump_primitive(self):
        e = ex.parse("bump(x0)", 1)
        assert isinstance(e, ex.BumpRat)

    def test_syntax_error_position(self):
        with pytest.raises(ExprSyntaxError) as err:
            ex.parse("x0 +", 1)
        assert err.value.position == 4

    def test_unknown_identifier(self):
        with pytest.raises(ExprSyntaxError, match="unknown identifier"):
            ex.parse("foo(x0)", 1)

    def test_variable_out_of_range(self):
        with pytest.raises(ExprSyntaxError, match="out of range"):
            ex.parse("x2", 2)
        with pytest.raises(ExprSyntaxError, match="out of range"):
            ex.parse("y1", 2, base_dim=1)

    def test_decimal_literals_are_exact_rationals(self):
        e = ex.parse("0.1 + 0.2", 1)
        assert isinstance(e, ex.Const)
        assert e.value == Fraction(3, 10)

    def test_division_by_constant_folds(self):
        e = ex.parse("x0/2", 1)
        assert e.evaluate((3.0,)) == 1.5

    def test_division_by_variable_rejected(self):
        with pytest.raises(ExprSyntaxError, match="denominator"):
            ex.parse("1/(x0)", 1)

    def test_named_constant_pi(self):
        assert ex.parse("pi", 1).evaluate((0.0,)) == math.pi

    @pytest.mark.parametrize("text", [
        "x0^2 * y0", "bump(x0)", "1 + 2*x0 - x0^3", "sin(x0)*cos(y0) + exp(x0)",
        "bump(2*x0) * (y0 + 1/2)", "-x0 + (x0 - 3)^2",
    ])
    def test_print_parse_round_trip(self, text):
        e = ex.parse(text, 2, base_dim=1)
        again = ex.parse(str(e), 2, base_dim=1)
        pts = grid_points(Box.of([(-2, 2), (-2, 2)]), 7)
        assert np.allclose(e.eval_array(pts), again.eval_array(pts), rtol=0, atol=0)


class TestDifferentiate:
    def test_polynomial_mixed_partial(self):
        e = ex.parse("x0^2 * y0", 2, base_dim=1)
        d = ex.differentiate(e, (1, 1))
        for x in (-1.5, 0.0, 2.0):
            assert d.evaluate((x, 7.0)) == 2 * x

    def test_zero_order_is_identity(self):
        e = ex.parse("sin(x0)*bump(x0)", 1)
        assert ex.differentiate(e, (0,)) is e

    def test_bump_derivative_vanishes_at_zero(self):
        d = ex.differentiate(ex.parse("bump(x0)", 1), (1,))
        assert d.evaluate((0.0,)) == 0.0

    def test_bump_derivative_matches_finite_differences(self):
        b = ex.parse("bump(x0)", 1)
        d = ex.differentiate(b, (1,))
        oracle = fd_derivative(lambda p: b.evaluate(p), (0.5,), 0)
        assert d.evaluate((0.5,)) == pytest.approx(oracle, rel=1e-6)

    def test_derivative_composition_commutes(self):
        zoo = [
            ex.parse("bump(x0)*y0^2", 2, base_dim=1),
            ex.parse("sin(x0)*exp(y0/4)", 2, base_dim=1),
            ex.parse("x0^3*y0 + cos(x0*y0)", 2, base_dim=1),
        ]
        pts = grid_points(Box.of([(-2, 2), (-2, 2)]), 17)
        for e in zoo:
            for alpha, beta in (((1, 0), (0, 1)), ((1, 1), (1, 0)), ((2, 0), (0, 1))):
                lhs = ex.differentiate(ex.differentiate(e, alpha), beta)
                rhs = ex.differentiate(e, tuple(a + b for a, b in zip(alpha, beta)))
                diff = np.abs(lhs.eval_array(pts) - rhs.eval_array(pts))
                assert diff.max() < 1e-10

    def test_finite_difference_convergence_order(self):
        e = ex.parse("bump(x0)*sin(x0)", 1)
        d = ex.differentiate(e, (1,))
        for x in (-0.6, 0.1, 0.45):
            errs = []
            for h in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
                fd = (e.evaluate((x + h,)) - e.evaluate((x - h,))) / (2 * h)
                errs.append(abs(fd - d.evaluate((x,))))
            order = math.log(errs[0] / errs[-1]) / math.log(8.0)
            assert order >= 1.9

    def test_bump_derivatives_vanish_outside_support(self):
        e = ex.parse("bump(x0)", 1)
        for k in range(7):
            outside = [(-1.0,), (1.0,), (-1.5,), (2.0,), (-37.0,)]
            for p in outside:
                assert e.evaluate(p) == 0.0
            e = ex.differentiate(e, (1,))

    def test_bump_derivatives_continuous_across_boundary(self):
        e = ex.parse("bump(x0)", 1)
        for k in range(7):
            for side in (-1.0, 1.0):
                inner = e.evaluate((side - math.copysign(1e-4, side),))
                assert abs(inner) < 1e-8
            e = ex.differentiate(e, (1,))


class TestEvaluate:
    def test_bump_values(self):
        b = ex.parse("bump(x0)", 1)
        assert b.evaluate((0.0,)) == pytest.approx(math.exp(-1), abs=0)
        assert b.evaluate((1.0,)) == 0.0
        assert b.evaluate((0.5,)) == pytest.approx(math.exp(-4.0 / 3.0), abs=0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            ex.parse("x0", 1).evaluate((1.0, 2.0))

    def test_no_spurious_nan_from_overflow(self):
        # exp overflows to inf off-support; the zero bump factor must win
        e = ex.parse("exp(x0^2)*bump(x0)", 1)
        assert e.evaluate((40.0,)) == 0.0
        assert e.eval_array(np.array([[40.0], [0.0]]))[0] == 0.0

    def test_eval_array_matches_scalar(self):
        e = ex.parse("bump(x0)*sin(y0) + x0^2", 2, base_dim=1)
        pts = grid_points(Box.of([(-2, 2), (-2, 2)]), 9)
        arr = e.eval_array(pts)
        scalar = np.array([e.evaluate(tuple(p)) for p in pts])
        assert np.array_equal(arr, scalar)


class TestSubstitute:
    def test_basic_substitution(self):
        e = ex.parse("x0*y0", 2, base_dim=1)
        out = ex.substitute(e, {1: ex.var(0, 2, "x0")})
        pts = grid_points(Box.of([(-2, 2), (-2, 2)]), 5)
        target = ex.parse("x0^2", 2, base_dim=1)
        assert np.array_equal(out.eval_array(pts), target.eval_array(pts))

    def test_shifted_bump_hits_guard(self):
        e = ex.parse("bump(y0)", 2, base_dim=1)
        shifted = ex.substitute(e, {1: ex.parse("x0 + 1", 2, base_dim=1)})
        assert shifted.evaluate((0.0, 99.0)) == 0.0

    def test_chain_rule_against_finite_differences(self):
        e = ex.parse("bump(x0^2)", 1)
        d = ex.differentiate(e, (1,))
        oracle = fd_derivative(lambda p: e.evaluate(p), (0.6,), 0)
        assert d.evaluate((0.6,)) == pytest.approx(oracle, rel=1e-6)

    def test_dimension_mismatch(self):
        e = ex.parse("x0*y0", 2, base_dim=1)
        with pytest.raises(DimensionError):
            ex.substitute(e, {1: ex.var(0, 1)})


class TestSupportBox:
    def test_bump_support(self):
        assert ex.support_box(ex.parse("bump(x0)", 1)).intervals == ((-1.0, 1.0),)

    def test_affine_preimage(self):
        assert ex.support_box(ex.parse("bump(2*x0)", 1)).intervals == ((-0.5, 0.5),)

    def test_unbounded(self):
        box = ex.support_box(ex.parse("x0^2", 1))
        assert not box.is_bounded

    def test_shifted_argument(self):
        box = ex.support_box(ex.parse("bump(x0 - 3)", 1))
        assert box.intervals == ((2.0, 4.0),)

    def test_soundness_on_random_outside_points(self):
        rng = np.random.default_rng(7)
        exprs = [
            ex.parse("bump(x0)*exp(x0)", 1),
            ex.parse("bump(2*x0 - 1)*(x0^3 + 2)", 1),
            ex.parse("bump(x0)*bump(y0)*sin(x0*y0)", 2, base_dim=1),
            ex.parse("bump(x0/2) + bump(x0 - 1)", 1),
        ]
        for e in exprs:
            box = ex.support_box(e)
            assert box.is_bounded
            hits = 0
            while hits < 64:
                p = tuple(rng.uniform(-8, 8) for _ in range(e.dim))
                if box.contains(p):
                    continue
                hits += 1
                assert e.evaluate(p) == 0.0

    def test_zero_constant_has_empty_support(self):
        assert ex.support_box(ex.const(0, 1)).is_empty

    def test_sum_takes_hull_product_takes_intersection(self):
        s = ex.support_box(ex.parse("bump(x0) + bump(x0 - 1)", 1))
        assert s.intervals == ((-1.0, 2.0),)
        p = ex.support_box(ex.parse("bump(x0) * bump(x0 - 1)", 1))
        assert p.intervals == ((0.0, 1.0),)


class TestBoxArithmetic:
    def test_intersect_disjoint_is_empty(self):
        a = Box.of([(0, 1)])
        b = Box.of([(2, 3)])
        assert a.intersect(b).is_empty

    def test_hull(self):
        a = Box.of([(0, 1)])
        b = Box.of([(2, 3)])
        assert a.hull(b).intervals == ((0.0, 3.0),)

    def test_invalid_interval_rejected(self):
        with pytest.raises(ex.ExprError):
            Box.of([(1, 0)])

    def test_project_and_times(self):
        b = Box.of([(0, 1), (2, 3)])
        assert b.project([1]).intervals == ((2.0, 3.0),)
        assert b.project([0]).times(b.project([1])) == b


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=-2.0, max_value=2.0),
       st.floats(min_value=-2.0, max_value=2.0))
def test_evaluation_is_deterministic_and_finite(x, y):
    e = ex.parse("bump(x0)*y0^2 + sin(x0*y0)", 2, base_dim=1)
    v1 = e.evaluate((x, y))
    v2 = e.evaluate((x, y))
    assert v1 == v2
    assert math.isfinite(v1)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
def test_derivative_orders_add(m, n):
    e = ex.parse("x0^4 + bump(x0)", 1)
    lhs = ex.differentiate(ex.differentiate(e, (m,)), (n,))
    rhs = ex.differentiate(e, (m + n,))
    for x in (-0.7, 0.0, 0.3, 0.9):
        assert lhs.evaluate((x,)) == pytest.approx(rhs.evaluate((x,)), abs=1e-10)

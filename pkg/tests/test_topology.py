import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transdist import bundle as bd
from transdist import distribution as dist
from transdist import expr as ex
from transdist import topology as tp
from transdist.expr import Box
from transdist.quadrature import BUMP_INTEGRAL


class TestSeminorm:
    def test_bump_sup_attained_at_zero(self):
        p = tp.Seminorm(Box.of([(-1, 1)]), 0)
        assert tp.seminorm_eval(p, ex.parse("bump(x0)", 1)) == math.exp(-1)

    def test_zero_function(self):
        p = tp.Seminorm(Box.of([(-1, 1)]), 3)
        assert tp.seminorm_eval(p, ex.parse("0", 1)) == 0.0

    def test_affine_first_order(self):
        p = tp.Seminorm(Box.of([(0, 1)]), 1)
        assert tp.seminorm_eval(p, ex.parse("x0", 1)) == 1.0

    def test_triangle_inequality(self):
        p = tp.Seminorm(Box.of([(-1, 1)]), 2)
        F = ex.parse("bump(x0)*x0", 1)
        G = ex.parse("sin(x0)", 1)
        assert tp.seminorm_eval(p, ex.add(F, G)) <= (
            tp.seminorm_eval(p, F) + tp.seminorm_eval(p, G) + 1e-12)

    def test_monotone_in_box_and_order(self):
        F = ex.parse("sin(3*x0)*exp(x0/2)", 1)
        small = tp.seminorm_eval(tp.Seminorm(Box.of([(-1, 1)]), 1), F)
        bigger_box = tp.seminorm_eval(tp.Seminorm(Box.of([(-2, 2)]), 1), F)
        higher_order = tp.seminorm_eval(tp.Seminorm(Box.of([(-1, 1)]), 3), F)
        assert small <= bigger_box
        assert small <= higher_order

    def test_nested_lattice_grids(self):
        pitch = tp.lattice_pitch()
        inner = tp.lattice_points(Box.of([(-0.3, 0.7)]))
        outer = tp.lattice_points(Box.of([(-1, 1)]))
        outer_set = {round(v / pitch) for v in outer[:, 0]}
        assert all(round(v / pitch) in outer_set for v in inner[:, 0])

    def test_grid_density_override(self):
        old = tp.default_grid_density()
        try:
            tp.set_default_grid_density(65)
            assert len(tp.lattice_points(Box.of([(-1, 1)]))) == 65
        finally:
            tp.set_default_grid_density(old)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-8, max_value=8, allow_nan=False))
def test_seminorm_absolute_homogeneity(lam):
    p = tp.Seminorm(Box.of([(-1, 1)]), 1)
    F = ex.parse("bump(x0) + x0^2/9", 1)
    scaled = ex.mul(ex.const(lam, 1), F)
    assert tp.seminorm_eval(p, scaled) == abs(lam) * tp.seminorm_eval(p, F)


class TestFamilySeminorm:
    def test_dirac_family(self, line_bundle):
        fam = tp.BoundedFamily(1, (line_bundle.parse_fibre("y0^2"),
                                   line_bundle.parse_fibre("y0 + 1")))
        v = dist.dirac_at((0.0,), 1)
        assert tp.pB_eval(fam, v) == 1.0

    def test_zero_distribution(self, line_bundle):
        fam = tp.BoundedFamily(1, (line_bundle.parse_fibre("y0"),))
        v = dist.PointDistribution(1)
        assert tp.pB_eval(fam, v) == 0.0

    def test_density_member(self, line_bundle):
        fam = tp.BoundedFamily(1, (line_bundle.parse_fibre("1"),))
        v = dist.PointDistribution(1, (), line_bundle.parse_fibre("bump(y0)"))
        assert tp.pB_eval(fam, v) == pytest.approx(BUMP_INTEGRAL, abs=1e-12)


class TestLFMembership:
    def test_zero_function_accepted(self, line_bundle):
        prof = tp.LFProfile(1, orders=(0,), epsilons=(0.1,))
        f = dist.base_function_from_expr(line_bundle, line_bundle.parse_base("0"))
        assert tp.lf_membership(prof, f).accepted

    def test_bump_against_half(self, line_bundle):
        prof = tp.LFProfile(1, orders=(0, 0), epsilons=(0.5, 0.25))
        f = dist.base_function_from_expr(line_bundle,
                                         line_bundle.parse_base("bump(x0)"))
        assert tp.lf_membership(prof, f).accepted

    def test_scaled_function_rejected_with_witness(self, line_bundle):
        prof = tp.LFProfile(1, orders=(0,), epsilons=(1e-6,))
        f = dist.base_function_from_expr(
            line_bundle, line_bundle.parse_base("1000000*bump(x0)"))
        res = tp.lf_membership(prof, f)
        assert not res.accepted
        assert res.witness is not None
        assert abs(res.witness["value"]) >= res.witness["epsilon"]
        assert res.witness["shell"] == 1

    def test_monotone_in_epsilons(self, line_bundle):
        f = dist.base_function_from_expr(line_bundle,
                                         line_bundle.parse_base("bump(x0)*x0"))
        eps_values = (0.01, 0.05, 0.2, 1.0)
        accepted = [tp.lf_membership(
            tp.LFProfile(1, orders=(1,), epsilons=(e,)), f).accepted
            for e in eps_values]
        # once accepted at some epsilon, stays accepted for larger ones
        assert accepted == sorted(accepted)

    def test_far_support_beyond_depth_is_vacuous(self, line_bundle):
        prof = tp.LFProfile(1, orders=(0,), epsilons=(1e-9,))
        f = dist.base_function_from_expr(
            line_bundle, line_bundle.parse_base("bump(x0 - 10)"))
        # the single shell [-1, 1] misses the support entirely
        assert tp.lf_membership(prof, f).accepted


class TestLFBMembership:
    @pytest.fixture
    def families(self, line_bundle):
        fam = tp.BoundedFamily(1, (line_bundle.parse_fibre("1"),
                                   line_bundle.parse_fibre("y0"),
                                   line_bundle.parse_fibre("y0^2")))
        return (fam, fam)

    def test_zero_distribution(self, line_bundle, families):
        prof = tp.LFProfile(1, orders=(0, 1), epsilons=(0.5, 0.25))
        assert tp.lfB_membership(prof, families,
                                 dist.zero_distribution(line_bundle)).accepted

    def test_generous_epsilon_accepts(self, line_bundle, families):
        prof = tp.LFProfile(1, orders=(0, 0), epsilons=(10.0, 5.0))
        diag = bd.section_from_strings(line_bundle, ["x0"])
        T = dist.dirac_section(diag, line_bundle.parse_base("bump(x0)"))
        assert tp.lfB_membership(prof, families, T).accepted

    def test_tight_epsilon_rejects_with_witness(self, line_bundle, families):
        prof = tp.LFProfile(1, orders=(0,), epsilons=(1e-6,))
        diag = bd.section_from_strings(line_bundle, ["x0"])
        T = dist.dirac_section(diag, line_bundle.parse_base("bump(x0)"))
        res = tp.lfB_membership(prof, families[:1], T)
        assert not res.accepted
        assert res.witness["alpha"] == (0,)

    def test_uses_family_derivatives(self, line_bundle, families):
        # order-1 shells see the derivative family, which is larger here
        diag = bd.section_from_strings(line_bundle, ["x0"])
        T = dist.dirac_section(diag, line_bundle.parse_base("bump(x0)"))
        loose = tp.LFProfile(1, orders=(0,), epsilons=(0.4,))
        tight = tp.LFProfile(1, orders=(1,), epsilons=(0.4,))
        assert tp.lfB_membership(loose, families, T).accepted
        assert not tp.lfB_membership(tight, families, T).accepted


class TestProfileValidation:
    def test_orders_must_be_nondecreasing(self):
        with pytest.raises(ValueError):
            tp.LFProfile(1, orders=(2, 1), epsilons=(0.5, 0.25))

    def test_epsilons_must_decrease(self):
        with pytest.raises(ValueError):
            tp.LFProfile(1, orders=(0, 1), epsilons=(0.25, 0.25))

    def test_epsilons_must_be_positive(self):
        with pytest.raises(ValueError):
            tp.LFProfile(1, orders=(0,), epsilons=(0.0,))

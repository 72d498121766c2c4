import math

import numpy as np
import pytest

from transdist import bundle as bd
from transdist import expr as ex
from transdist import operators as op
from transdist import quadrature as qd
from transdist.expr import Box, ExprError

PROBE_XS = [(-0.8,), (-0.4,), (0.0,), (0.4,), (0.8,)]


@pytest.fixture
def pair_bundle():
    return bd.TrivialBundle(1, 1)


@pytest.fixture
def K_shift_a(pair_bundle):
    s = bd.section_from_strings(pair_bundle, ["x0 + 1/2"])
    return op.graph_kernel(s, pair_bundle.parse_base("exp(1)*bump(x0/3)"))


@pytest.fixture
def K_shift_b(pair_bundle):
    s = bd.section_from_strings(pair_bundle, ["x0 - 1/4"])
    return op.graph_kernel(s, pair_bundle.parse_base("exp(1)*bump(x0/4)"))


@pytest.fixture
def K_density(pair_bundle):
    return op.density_kernel(pair_bundle,
                             pair_bundle.parse_total("bump(x0)*bump(y0)"))


def crosscheck_composition(K1, K2, g, xs=PROBE_XS, tol=1e-8):
    K = op.compose(K1, K2)
    lhs = op.apply(K, g)
    inner = op.apply(K2, g)
    rhs = op.apply_to_values(K1, lambda y: inner.value(y), inner.support_box())
    return max(abs(lhs.value(x) - rhs(x)) for x in xs), K


class TestApply:
    def test_graph_kernel_is_weighted_pullback(self, pair_bundle):
        s = bd.section_from_strings(pair_bundle, ["x0 + 1"])
        f = pair_bundle.parse_base("exp(1)*bump(x0/3)")
        K = op.graph_kernel(s, f)
        g = pair_bundle.parse_fibre("y0^2")
        bf = op.apply(K, g)
        # value at 0: f(0) * g(1); the normalized cutoff gives f(0) = e * e^-1
        assert bf.value((0.0,)) == pytest.approx(f.evaluate((0.0,)) * 1.0, rel=1e-15)
        assert bf.value((0.0,)) == pytest.approx(1.0, rel=1e-14)

    def test_diagonal_derivative_kernel(self, pair_bundle):
        s = bd.section_from_strings(pair_bundle, ["x0"])
        f = pair_bundle.parse_base("exp(1)*bump((x0 - 1)/3)")  # f(1) = 1
        K = op.graph_kernel(s, f, beta=(1,))
        g = pair_bundle.parse_fibre("y0^2")
        bf = op.apply(K, g)
        assert bf.value((1.0,)) == pytest.approx(2.0, rel=1e-14)

    def test_density_kernel_integrates(self, pair_bundle, K_density):
        bf = op.apply(K_density, pair_bundle.parse_fibre("1"))
        b = ex.parse("bump(x0)", 1)
        for x in (-0.5, 0.0, 0.5):
            assert bf.value((x,)) == pytest.approx(
                b.evaluate((x,)) * qd.BUMP_INTEGRAL, abs=1e-12)


class TestCompose:
    def test_translation_graphs_compose_to_sum(self, pair_bundle, K_shift_a,
                                               K_shift_b):
        K = op.compose(K_shift_a, K_shift_b)
        section = K.terms[0].section
        expected = pair_bundle.parse_base("x0 + 1/4")
        for x in np.linspace(-2, 2, 9):
            assert section.components[0].evaluate((x,)) == expected.evaluate((x,))

    def test_identity_section_preserved(self, pair_bundle, K_shift_a):
        ident = bd.section_from_strings(pair_bundle, ["x0"])
        K_id = op.graph_kernel(ident, pair_bundle.parse_base("exp(1)*bump(x0/4)"))
        K = op.compose(K_shift_a, K_id)
        section = K.terms[0].section
        shifted = K_shift_a.terms[0].section
        for x in np.linspace(-2, 2, 9):
            assert section.components[0].evaluate((x,)) == \
                shifted.components[0].evaluate((x,))

    def test_two_sided_contract_all_combinations(self, pair_bundle, K_shift_a,
                                                 K_density):
        g = pair_bundle.parse_fibre("y0^2 + y0")
        for K1, K2, label in ((K_shift_a, K_shift_a, "dirac,dirac"),
                              (K_shift_a, K_density, "dirac,density"),
                              (K_density, K_shift_a, "density,dirac"),
                              (K_density, K_density, "density,density")):
            err, _ = crosscheck_composition(K1, K2, g)
            assert err < 1e-8, label

    def test_two_sided_contract_numeric_level(self, pair_bundle, K_shift_a,
                                              K_density):
        g = pair_bundle.parse_fibre("y0^2")
        K_dd = op.compose(K_density, K_density)
        for K1, K2, label in ((K_dd, K_shift_a, "numeric,dirac"),
                              (K_shift_a, K_dd, "dirac,numeric"),
                              (K_dd, K_density, "numeric,density")):
            err, _ = crosscheck_composition(K1, K2, g)
            assert err < 1e-8, label

    def test_density_density_pointwise_value(self, pair_bundle, K_density):
        K = op.compose(K_density, K_density)
        val = K.terms[0].values((0.0,), np.array([[0.0]]))[0]
        ibump2 = qd.integrate(ex.parse("bump(x0)^2", 1), Box.of([(-1, 1)]), 64)
        assert val == pytest.approx(math.exp(-2) * ibump2, abs=1e-8)

    def test_associativity_on_dirac_kernels(self, pair_bundle, K_shift_a,
                                            K_shift_b):
        ident = bd.section_from_strings(pair_bundle, ["2*x0"])
        K_c = op.graph_kernel(ident, pair_bundle.parse_base("exp(1)*bump(x0/5)"))
        left = op.compose(op.compose(K_shift_a, K_shift_b), K_c)
        right = op.compose(K_shift_a, op.compose(K_shift_b, K_c))
        g = pair_bundle.parse_fibre("y0^2 + 1")
        a, b = op.apply(left, g), op.apply(right, g)
        for x in PROBE_XS:
            assert abs(a.value(x) - b.value(x)) < 1e-8

    def test_pullback_contravariance(self, pair_bundle):
        # graph kernels pull back: K_Phi o K_Psi acts by g(psi(phi(x)))
        phi = bd.section_from_strings(pair_bundle, ["x0 + 1/2"])
        psi = bd.section_from_strings(pair_bundle, ["2*x0"])
        w = pair_bundle.parse_base("exp(1)*bump(x0/5)")
        K_phi = op.graph_kernel(phi, w)
        K_psi = op.graph_kernel(psi, w)
        K = op.compose(K_phi, K_psi)
        g = pair_bundle.parse_fibre("y0^3")
        bf = op.apply(K, g)
        for x in PROBE_XS:
            expected = (w.evaluate(x) * w.evaluate((x[0] + 0.5,))
                        * g.evaluate((2 * (x[0] + 0.5),)))
            assert bf.value(x) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_affine_inversion_in_two_dimensions(self):
        b = bd.TrivialBundle(2, 2)
        phi = b.parse_total("bump(x0)*bump(x1)*bump(y0)*bump(y1)")
        K1 = op.density_kernel(b, phi)
        sec = bd.section_from_strings(b, ["x0 + x1", "x0 - x1"])
        w = b.parse_base("exp(1)^2*bump(x0/2)*bump(x1/2)")
        K2 = op.graph_kernel(sec, w)
        g = b.parse_fibre("y0*y1 + 1")
        err, K = crosscheck_composition(K1, K2, g,
                                        xs=[(0.0, 0.0), (0.3, -0.2), (-0.4, 0.1)])
        # wider tolerance: the rotated slab spreads the integrand over a
        # [-4, 4]^2 box, costing the fixed-order rule about a digit
        assert err < 1e-7
        assert isinstance(K.terms[0], (op.DensityTerm, op.NumericKernelTerm))

    def test_nonaffine_section_rejected(self, pair_bundle, K_density):
        sq = bd.section_from_strings(pair_bundle, ["x0^2"])
        K_sq = op.graph_kernel(sq, pair_bundle.parse_base("bump(x0)"))
        with pytest.raises(ExprError, match="affine"):
            op.compose(K_density, K_sq)

    def test_derivative_kernels_rejected(self, pair_bundle, K_shift_a):
        diag = bd.section_from_strings(pair_bundle, ["x0"])
        K_d = op.graph_kernel(diag, pair_bundle.parse_base("bump(x0)"), beta=(1,))
        with pytest.raises(ExprError, match="fibre derivatives"):
            op.compose(K_d, K_shift_a)
        with pytest.raises(ExprError, match="fibre derivatives"):
            op.compose(K_shift_a, K_d)

    def test_depth_limit(self, pair_bundle, K_density):
        K_dd = op.compose(K_density, K_density)
        K_ddd = op.compose(K_dd, K_density)
        with pytest.raises(ExprError, match="depth"):
            op.compose(K_ddd, K_density)


class TestOperatorCorrespondence:
    def test_homomorphism_on_probe_grid(self, pair_bundle, K_shift_a, K_density):
        # 9 base points x 5 probe functions
        xs = [(x,) for x in np.linspace(-1, 1, 9)]
        probes = [pair_bundle.parse_fibre(t)
                  for t in ("1", "y0", "y0^2", "bump(y0)", "y0^3 + y0")]
        K = op.compose(K_shift_a, K_density)
        for g in probes:
            lhs = op.apply(K, g)
            inner = op.apply(K_density, g)
            rhs = op.apply_to_values(K_shift_a, lambda y: inner.value(y),
                                     inner.support_box())
            for x in xs:
                assert abs(lhs.value(x) - rhs(x)) < 1e-8


class TestValidation:
    def test_pair_bundle_required(self):
        b = bd.TrivialBundle(1, 2)
        with pytest.raises(ex.DimensionError):
            op.KernelOperator(b, ())

    def test_distribution_round_trip(self, pair_bundle, K_shift_a):
        T = K_shift_a.distribution()
        K = op.KernelOperator.from_distribution(T)
        assert K.kinds == ("dirac",)

    def test_numeric_kernel_has_no_distribution(self, pair_bundle, K_density):
        K = op.compose(K_density, K_density)
        with pytest.raises(ExprError):
            K.distribution()

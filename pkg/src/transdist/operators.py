"""Schwartz-kernel operators on the pair bundle R^l x R^l -> R^l.

A kernel operator acts on a function g of the fibre by pairing its
distribution with (x, y) -> g(y).  Composition is kernel convolution,
with compose(K1, K2) meaning "K1 after K2": apply(compose(K1, K2), g)
agrees with apply(K1, apply(K2, g)).

Term-by-term composition rules:

* graph(sigma1, f1) o graph(sigma2, f2) = graph(sigma2 o sigma1,
  f1 * (f2 o sigma1)); sections compose in reversed operator order, the
  pullback contravariance of graph kernels.
* graph o density substitutes sigma1 into the base argument of phi2.
* density o graph needs the inverse of sigma2, so it is supported for
  affine invertible sections only (exact rational inversion, constant
  Jacobian) and rejected otherwise.
* density o density has no closed form here and becomes a
  quadrature-backed numeric kernel; one further composition with such a
  kernel is allowed, after which composition is rejected.

Dirac terms carrying fibre derivatives (beta != 0) are applied but never
composed; the jet expansion that composition would need is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import expr as ex
from . import quadrature
from .bundle import Section, TrivialBundle, extend_base_function, extend_function
from .distribution import (BaseFunction, DensityTerm, DiracSectionTerm,
                           TransversalDistribution, evaluate)
from .expr import Box, DimensionError, Expr, ExprError

MAX_NUMERIC_DEPTH = 2


@dataclass(frozen=True, eq=False)
class NumericKernelTerm:
    """Quadrature-backed kernel: pointwise values, no symbolic form."""

    bundle: TrivialBundle
    base_box: Box
    fibre_box: Box
    depth: int
    values_fn: object  # callable (x, Z: (N, l)) -> (N,) kernel values

    def values(self, x, Z: np.ndarray) -> np.ndarray:
        return self.values_fn(tuple(float(c) for c in x), np.asarray(Z, dtype=float))


def _classify(term) -> str:
    if isinstance(term, DiracSectionTerm):
        return "dirac" if not any(term.beta) else "dirac_derivative"
    if isinstance(term, DensityTerm):
        return "density"
    return "numeric"


@dataclass(frozen=True, eq=False)
class KernelOperator:
    bundle: TrivialBundle
    terms: tuple

    def __post_init__(self):
        if self.bundle.base_dim != self.bundle.fibre_dim:
            raise DimensionError("kernel operators need equal base and fibre dimensions")
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "kinds", tuple(_classify(t) for t in self.terms))

    @classmethod
    def from_distribution(cls, T: TransversalDistribution) -> "KernelOperator":
        return cls(T.bundle, T.terms)

    def distribution(self) -> TransversalDistribution:
        """The underlying distribution; defined for symbolic terms only."""
        if any(k == "numeric" for k in self.kinds):
            raise ExprError("composed numeric kernels have no symbolic distribution")
        return TransversalDistribution(self.bundle, self.terms)

    @property
    def composable(self) -> bool:
        return all(k in ("dirac", "density", "numeric") for k in self.kinds)


def graph_kernel(section: Section, weight: Expr, beta=None) -> KernelOperator:
    b = section.bundle
    beta = b.zero_fibre_beta() if beta is None else beta
    return KernelOperator(b, (DiracSectionTerm(section, weight, beta),))


def density_kernel(bundle: TrivialBundle, phi: Expr) -> KernelOperator:
    return KernelOperator(bundle, (DensityTerm(bundle, phi),))


def apply(K: KernelOperator, g: Expr, order: int | None = None) -> BaseFunction:
    """The operator applied to a function of the fibre: evaluate on g o pr2."""
    b = K.bundle
    if g.dim != b.fibre_dim:
        raise DimensionError("apply expects a function of the fibre variables")
    symbolic_terms = tuple(t for t in K.terms if not isinstance(t, NumericKernelTerm))
    out = evaluate(TransversalDistribution(b, symbolic_terms),
                   extend_function(b, g), order=order)
    numeric_fns = []
    for term in K.terms:
        if isinstance(term, NumericKernelTerm):
            numeric_fns.append(_numeric_apply_fn(term, g, order))
    if numeric_fns:
        out = BaseFunction(b, out.symbolic, out.quad_parts,
                           out.numeric_parts + tuple(numeric_fns), order)
    return out


def _numeric_apply_fn(term: NumericKernelTerm, g: Expr, order: int | None):
    box = term.fibre_box.intersect(g.support_box())
    if box.is_empty or box.volume() == 0.0:
        fn = lambda x: 0.0  # noqa: E731
        fn.support_box = Box.empty(term.bundle.base_dim)
        return fn
    rule = quadrature.QuadratureRule(box, order if order else quadrature.default_order())
    g_vals = g.eval_array(rule.points)

    def fn(x):
        return float(rule.weights @ (term.values(x, rule.points) * g_vals))

    fn.support_box = term.base_box
    return fn


def apply_to_values(K: KernelOperator, fn, fn_support: Box,
                    order: int | None = None):
    """Apply the operator to a pointwise-evaluable fibre function.

    ``fn`` maps a fibre point tuple to a float and vanishes outside
    ``fn_support``.  Only derivative-free terms are supported; this is the
    reinterpretation step of the composition contract, where the inner
    operator value is not symbolic.
    """
    b = K.bundle
    if any(k == "dirac_derivative" for k in K.kinds):
        raise ExprError("pointwise application needs derivative-free terms")

    def value(x):
        x = tuple(float(c) for c in x)
        total = 0.0
        for term in K.terms:
            if isinstance(term, DiracSectionTerm):
                w = term.weight.evaluate(x)
                if w != 0.0:
                    total += w * fn(term.section.value(x))
            elif isinstance(term, DensityTerm):
                phi_box = term.phi.support_box().project(b.fibre_slots)
                box = phi_box.intersect(fn_support)
                if box.is_empty or box.volume() == 0.0:
                    continue
                rule = quadrature.QuadratureRule(
                    box, order if order else quadrature.default_order())
                pts = np.empty((rule.points.shape[0], b.total_dim))
                pts[:, :b.base_dim] = x
                pts[:, b.base_dim:] = rule.points
                phi_vals = term.phi.eval_array(pts)
                f_vals = np.array([fn(tuple(z)) for z in rule.points])
                total += float(rule.weights @ (phi_vals * f_vals))
            else:
                box = term.fibre_box.intersect(fn_support)
                if box.is_empty or box.volume() == 0.0:
                    continue
                rule = quadrature.QuadratureRule(
                    box, order if order else quadrature.default_order())
                k_vals = term.values(x, rule.points)
                f_vals = np.array([fn(tuple(z)) for z in rule.points])
                total += float(rule.weights @ (k_vals * f_vals))
        return total

    return value


def compose(K1: KernelOperator, K2: KernelOperator,
            order: int | None = None) -> KernelOperator:
    """Kernel convolution; K1 acts after K2."""
    if K1.bundle != K2.bundle:
        raise DimensionError("cannot compose kernels on different bundles")
    for K in (K1, K2):
        if not K.composable:
            raise ExprError("composition of Dirac terms with fibre derivatives "
                            "is not supported")
    out_terms = []
    for t1 in K1.terms:
        for t2 in K2.terms:
            out_terms.append(_compose_terms(t1, t2, K1.bundle, order))
    return KernelOperator(K1.bundle, tuple(out_terms))


def _compose_terms(t1, t2, b: TrivialBundle, order):
    if isinstance(t1, DiracSectionTerm) and isinstance(t2, DiracSectionTerm):
        section = _compose_sections(t2.section, t1.section)
        weight = ex.mul(t1.weight, _pull_base(b, t2.weight, t1.section))
        return DiracSectionTerm(section, weight, b.zero_fibre_beta())
    if isinstance(t1, DiracSectionTerm) and isinstance(t2, DensityTerm):
        # psi(x, z) = f1(x) * phi2(sigma1(x), z)
        lifted = {i: extend_base_function(b, c)
                  for i, c in enumerate(t1.section.components)}
        phi = t2.phi.substitute(lifted)
        try:
            return DensityTerm(b, ex.mul(extend_base_function(b, t1.weight), phi))
        except ExprError:
            return _compose_numeric(t1, t2, b, order)
    if isinstance(t1, DensityTerm) and isinstance(t2, DiracSectionTerm):
        # psi(x, z) = phi1(x, S(z)) * f2(S(z)) / |det A| with S the inverse
        # of the affine section sigma2
        inverse, jac = _invert_affine_section(t2.section)
        subs = {b.base_dim + j: extend_function(b, Sj) for j, Sj in enumerate(inverse)}
        phi = t1.phi.substitute(subs)
        f2_fibre = t2.weight.remap({s: s for s in t2.weight.free_slots}, b.fibre_dim)
        f2_of_S = f2_fibre.substitute({j: inverse[j] for j in range(b.fibre_dim)})
        factor = extend_function(b, f2_of_S)
        try:
            return DensityTerm(b, ex.mul(phi, factor, ex.const(1 / jac, b.total_dim)))
        except ExprError:
            # support analysis of multi-variable bump arguments lost the
            # bound; keep the kernel with explicit geometric boxes instead
            return _compose_numeric(t1, t2, b, order)
    return _compose_numeric(t1, t2, b, order)


def _compose_sections(outer: Section, inner: Section) -> Section:
    """x -> outer(inner(x)); domains are left global, weights localize."""
    b = inner.bundle
    subs = {i: c for i, c in enumerate(inner.components)}
    comps = tuple(c.substitute(subs) for c in outer.components)
    return Section(b, comps, None)


def _pull_base(b: TrivialBundle, f: Expr, section: Section) -> Expr:
    """f o sigma for a base function f along a section of the pair bundle."""
    return f.substitute({i: c for i, c in enumerate(section.components)})


def _invert_affine_section(section: Section):
    """Exact inverse of an affine section, plus |det| of its linear part."""
    b = section.bundle
    k = b.fibre_dim
    rows = []
    offset = []
    for comp in section.components:
        aff = ex.as_affine(comp)
        if aff is None:
            raise ExprError("density o graph composition needs an affine section")
        rows.append([aff.get(i, Fraction(0)) for i in range(k)])
        offset.append(aff.get(-1, Fraction(0)))
    inv, det = _invert_matrix(rows)
    if det == 0:
        raise ExprError("density o graph composition needs an invertible section")
    # S(z) = A^-1 (z - b), expressed in fibre variables z0..z(k-1)
    comps = []
    for i in range(k):
        terms = [ex.const(-sum(inv[i][j] * offset[j] for j in range(k)), k)]
        for j in range(k):
            if inv[i][j] != 0:
                terms.append(ex.mul(ex.const(inv[i][j], k),
                                    ex.var(j, k, name=f"y{j}")))
        comps.append(ex.add(*terms))
    return tuple(comps), abs(det)


def _invert_matrix(rows):
    """Gauss-Jordan over Fractions; returns (inverse, determinant)."""
    n = len(rows)
    a = [list(r) for r in rows]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return inv, Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
            det = -det
        p = a[col][col]
        det *= p
        a[col] = [v / p for v in a[col]]
        inv[col] = [v / p for v in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
                inv[r] = [v - factor * w for v, w in zip(inv[r], inv[col])]
    return inv, det


def _term_boxes(term, b: TrivialBundle):
    if isinstance(term, DiracSectionTerm):
        from .bundle import section_graph_support
        box = section_graph_support(term.section, term.weight.support_box())
        return box.project(b.base_slots), box.project(b.fibre_slots)
    if isinstance(term, DensityTerm):
        box = term.phi.support_box()
        return box.project(b.base_slots), box.project(b.fibre_slots)
    return term.base_box, term.fibre_box


def _values_fn(term, b: TrivialBundle):
    """Pointwise kernel values of a density or numeric term."""
    if isinstance(term, NumericKernelTerm):
        return term.values
    phi = term.phi

    def dens_values(x, Z, _phi=phi):
        pts = np.empty((Z.shape[0], b.total_dim))
        pts[:, :b.base_dim] = np.asarray(x, dtype=float)
        pts[:, b.base_dim:] = Z
        return _phi.eval_array(pts)

    return dens_values


def _compose_numeric(t1, t2, b: TrivialBundle, order):
    depth1 = t1.depth if isinstance(t1, NumericKernelTerm) else 0
    depth2 = t2.depth if isinstance(t2, NumericKernelTerm) else 0
    if isinstance(t1, DiracSectionTerm):
        # f1(x) * psi2(sigma1(x), z): reindex, no extra quadrature level
        section, weight = t1.section, t1.weight
        v2 = _values_fn(t2, b)

        def fn(x, Z, _v2=v2, _section=section, _weight=weight):
            w = _weight.evaluate(x)
            if w == 0.0:
                return np.zeros(Z.shape[0])
            return w * _v2(_section.value(x), Z)

        base1, _ = _term_boxes(t1, b)
        _, fibre2 = _term_boxes(t2, b)
        return NumericKernelTerm(b, base1, fibre2, depth2, fn)
    if isinstance(t2, DiracSectionTerm):
        inverse, jac = _invert_affine_section(t2.section)
        f2_fibre = t2.weight.remap({s: s for s in t2.weight.free_slots}, b.fibre_dim)
        scale = 1.0 / float(jac)
        v1 = _values_fn(t1, b)

        def fn(x, Z, _v1=v1, _inv=inverse, _f2=f2_fibre, _scale=scale):
            S = np.stack([np.asarray([c.evaluate(z) for z in Z])
                          for c in _inv], axis=-1)
            w = np.array([_f2.evaluate(s) for s in S])
            return _scale * w * _v1(x, S)

        base1, fibre1 = _term_boxes(t1, b)
        from .bundle import section_graph_support
        pre_image = t2.weight.support_box().intersect(fibre1)
        if pre_image.is_empty:
            fibre2 = Box.empty(b.fibre_dim)
        else:
            fibre2 = section_graph_support(t2.section, pre_image).project(b.fibre_slots)
        return NumericKernelTerm(b, base1, fibre2, depth1, fn)
    # density-like o density-like: one more quadrature level
    depth = max(depth1, depth2) + 1
    if depth > MAX_NUMERIC_DEPTH:
        raise ExprError("composition depth of numeric kernels exceeded")
    _, fibre1 = _term_boxes(t1, b)
    base2, fibre2 = _term_boxes(t2, b)
    mid_box = fibre1.intersect(base2)
    base1, _ = _term_boxes(t1, b)
    if mid_box.is_empty or mid_box.volume() == 0.0:
        def zero_fn(x, Z):
            return np.zeros(Z.shape[0])
        return NumericKernelTerm(b, base1, fibre2, depth, zero_fn)
    rule = quadrature.QuadratureRule(mid_box, order if order else quadrature.default_order())
    v1, v2 = _values_fn(t1, b), _values_fn(t2, b)

    def fn(x, Z, _v1=v1, _v2=v2, _rule=rule):
        left = _v1(x, _rule.points)  # psi1(x, y_i)
        right = np.stack([_v2(tuple(y), Z) for y in _rule.points])  # psi2(y_i, z_j)
        return (_rule.weights * left) @ right

    return NumericKernelTerm(b, base1, fibre2, depth, fn)

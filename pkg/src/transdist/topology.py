"""Seminorms and neighbourhood-basis membership checks.

Suprema are taken over a global lattice of pitch 2/(density-1), so the
grid of a box is literally a subset of the grid of any enclosing box and
the monotonicity of the seminorms in (K, m) holds as implemented, not
just in the limit.  Grid suprema are lower bounds of the true suprema;
failed membership checks come with an exact witness (point, multi-index,
shell index).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .distribution import (BaseFunction, PointDistribution, TransversalDistribution,
                           base_support, family_derivative, pair, restrict)
from .expr import Box, DimensionError, Expr

DEFAULT_GRID_DENSITY = 33

_default_density = DEFAULT_GRID_DENSITY


def default_grid_density() -> int:
    return _default_density


def set_default_grid_density(n: int) -> None:
    """Override the global points-per-axis default (--grid-density flag)."""
    global _default_density
    if n < 3:
        raise ValueError("grid density must be at least 3")
    _default_density = int(n)


def lattice_pitch(density: int | None = None) -> float:
    d = density if density else _default_density
    return 2.0 / (d - 1)


def lattice_axis(lo: float, hi: float, pitch: float) -> np.ndarray:
    """Lattice multiples of pitch inside [lo, hi]; midpoint fallback if none."""
    i_min = math.ceil(lo / pitch - 1e-9)
    i_max = math.floor(hi / pitch + 1e-9)
    if i_min > i_max:
        return np.array([0.5 * (lo + hi)])
    return np.arange(i_min, i_max + 1) * pitch


def lattice_points(box: Box, density: int | None = None) -> np.ndarray:
    """All lattice points of a box, shape (N, dim)."""
    if box.is_empty:
        return np.empty((0, box.dim))
    pitch = lattice_pitch(density)
    axes = [lattice_axis(lo, hi, pitch) for lo, hi in box.intervals]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def multi_indices_up_to(dim: int, m: int):
    """All multi-indices of length dim with |alpha| <= m, lexicographically."""
    out = []
    for total in range(m + 1):
        for alpha in itertools.product(range(total + 1), repeat=dim):
            if sum(alpha) == total:
                out.append(alpha)
    return out


@dataclass(frozen=True)
class Seminorm:
    """sup over K of all partial derivatives up to order m."""

    box: Box
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("seminorm order must be nonnegative")
        if self.box.is_empty:
            raise ValueError("seminorm box must be nonempty")
        if not self.box.is_bounded:
            raise ValueError("seminorm box must be compact")


def seminorm_eval(p: Seminorm, F: Expr, density: int | None = None) -> float:
    """Grid supremum realizing the seminorm; a lower bound of the true sup."""
    if F.dim != p.box.dim:
        raise DimensionError("expression and box dimensions differ")
    pts = lattice_points(p.box, density)
    best = 0.0
    for alpha in multi_indices_up_to(F.dim, p.order):
        vals = np.abs(F.diff(alpha).eval_array(pts))
        m = float(vals.max(initial=0.0))
        if m > best:
            best = m
    return best


@dataclass(frozen=True)
class BoundedFamily:
    """Finite family of fibre functions standing in for a bounded set."""

    fibre_dim: int
    members: tuple

    def __post_init__(self):
        if not self.members:
            raise ValueError("bounded family must be nonempty")
        for g in self.members:
            if g.dim != self.fibre_dim:
                raise DimensionError("family member has the wrong fibre dimension")


def pB_eval(B: BoundedFamily, v: PointDistribution, order: int | None = None) -> float:
    """sup over the family of |v(g)|."""
    if B.fibre_dim != v.fibre_dim:
        raise DimensionError("family and point distribution dimensions differ")
    best = 0.0
    for g in B.members:
        val = abs(pair(v, g, order))
        if val > best:
            best = val
    return best


@dataclass(frozen=True)
class LFProfile:
    """Finite truncation of an LF neighbourhood: shells K_n = [-n, n]^l.

    Orders m must be nondecreasing and tolerances eps decreasing positive,
    one entry per shell up to the truncation depth.
    """

    base_dim: int
    orders: tuple  # m_1 <= m_2 <= ...
    epsilons: tuple  # eps_1 > eps_2 > ... > 0

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(m) for m in self.orders))
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        if len(self.orders) != len(self.epsilons) or not self.orders:
            raise ValueError("profile needs matching nonempty order/epsilon sequences")
        if any(m < 0 for m in self.orders):
            raise ValueError("orders must be nonnegative")
        if any(a > b for a, b in zip(self.orders, self.orders[1:])):
            raise ValueError("orders must be nondecreasing")
        if any(e <= 0 for e in self.epsilons):
            raise ValueError("epsilons must be positive")
        if any(a <= b for a, b in zip(self.epsilons, self.epsilons[1:])):
            raise ValueError("epsilons must be strictly decreasing")

    @property
    def depth(self) -> int:
        return len(self.orders)

    def shell(self, n: int) -> Box:
        return Box.cube(float(n), self.base_dim)


@dataclass(frozen=True)
class MembershipResult:
    accepted: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.accepted


def _shell_points(profile: LFProfile, n: int, supp: Box,
                  density: int | None) -> np.ndarray:
    """Lattice points of (K_n minus K_{n-1}) intersected with the support box."""
    region = profile.shell(n).intersect(supp)
    if region.is_empty:
        return np.empty((0, profile.base_dim))
    pts = lattice_points(region, density)
    if n > 1:
        inner = float(n - 1)
        outside = np.max(np.abs(pts), axis=1) > inner + 1e-12
        pts = pts[outside]
    return pts


def lf_membership(profile: LFProfile, f: BaseFunction,
                  density: int | None = None) -> MembershipResult:
    """Grid-certified membership of f in the LF neighbourhood V_{m, e}."""
    supp = f.support_box()
    if supp.is_empty:
        return MembershipResult(True)
    if f.bundle.base_dim != profile.base_dim:
        raise DimensionError("profile and function base dimensions differ")
    for n in range(1, profile.depth + 1):
        pts = _shell_points(profile, n, supp, density)
        if pts.shape[0] == 0:
            continue
        eps = profile.epsilons[n - 1]
        for alpha in multi_indices_up_to(profile.base_dim, profile.orders[n - 1]):
            df = f.derivative(alpha)
            for pt in pts:
                val = df.value(tuple(pt))
                if not abs(val) < eps:
                    return MembershipResult(False, {
                        "shell": n, "point": tuple(float(c) for c in pt),
                        "alpha": alpha, "value": val, "epsilon": eps})
    return MembershipResult(True)


def lfB_membership(profile: LFProfile, families, u: TransversalDistribution,
                   density: int | None = None,
                   order: int | None = None) -> MembershipResult:
    """Membership of a distribution in V_{B, m, e} via family seminorms.

    ``families`` lists one BoundedFamily per shell (n-th entry used on the
    n-th shell); derivatives of the family are formed with
    family_derivative and restricted pointwise.
    """
    families = tuple(families)
    if len(families) < profile.depth:
        raise ValueError("need one bounded family per shell")
    supp = base_support(u)
    if supp.is_empty:
        return MembershipResult(True)
    derivatives = {}
    for n in range(1, profile.depth + 1):
        pts = _shell_points(profile, n, supp, density)
        if pts.shape[0] == 0:
            continue
        eps = profile.epsilons[n - 1]
        B = families[n - 1]
        for alpha in multi_indices_up_to(profile.base_dim, profile.orders[n - 1]):
            if alpha not in derivatives:
                derivatives[alpha] = family_derivative(u, alpha)
            du = derivatives[alpha]
            for pt in pts:
                val = pB_eval(B, restrict(du, tuple(pt)), order)
                if not val < eps:
                    return MembershipResult(False, {
                        "shell": n, "point": tuple(float(c) for c in pt),
                        "alpha": alpha, "value": val, "epsilon": eps})
    return MembershipResult(True)

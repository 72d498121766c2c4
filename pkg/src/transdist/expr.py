"""Symbolic scalar expressions on R^n, closed under exact differentiation.

The node vocabulary is deliberately small: exact rational constants, the
named constant pi, indexed coordinates, sums, products, integer powers,
exp, sin, cos, and a compactly supported bump primitive

    bump(t) = exp(-1/(1 - t^2))  for |t| < 1,   0 otherwise.

Derivatives of bump stay inside the class because every derivative has the
shape bump(t) * p(t) / (1 - t^2)^q with p a polynomial; the ``BumpRat``
node stores that shape and guards the whole product to 0 for |t| >= 1, so
evaluation is total and exactly zero outside the support.

Division is accepted by the surface grammar but desugared at construction:
a denominator must fold to a nonzero rational constant, which is absorbed
as an exact reciprocal factor.  There is therefore no quotient node that
could ever divide by zero.

Expression equality is structural only in the trivial sense (identical
trees compare equal); semantic equality is always tested extensionally on
grids, since simplification beyond constant folding is out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

MultiIndex = tuple  # tuple[int, ...], one derivative order per coordinate

_INF = float("inf")


class ExprError(ValueError):
    """Base class for expression construction and evaluation errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class DimensionError(ExprError):
    pass


def order(alpha) -> int:
    """|alpha| of a multi-index."""
    return sum(alpha)


def check_multi_index(alpha, dim: int) -> MultiIndex:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != dim:
        raise DimensionError(f"multi-index length {len(alpha)} != ambient dimension {dim}")
    if any(a < 0 for a in alpha):
        raise ExprError(f"multi-index entries must be nonnegative: {alpha}")
    return alpha


def add_multi_indices(alpha, beta) -> MultiIndex:
    return tuple(a + b for a, b in zip(alpha, beta))


# ---------------------------------------------------------------------------
# Boxes


@dataclass(frozen=True)
class Box:
    """Axis-aligned product of closed intervals, possibly empty or infinite.

    ``intervals is None`` represents the empty set.  Individual bounds may
    be +-inf; ``is_bounded`` tells whether the box is compact.
    """

    dim: int
    intervals: tuple | None

    def __post_init__(self):
        if self.intervals is not None:
            if len(self.intervals) != self.dim:
                raise DimensionError("box interval count mismatched with dimension")
            for lo, hi in self.intervals:
                if not lo <= hi:
                    raise ExprError(f"invalid interval [{lo}, {hi}]")

    @classmethod
    def of(cls, intervals) -> "Box":
        ivs = tuple((float(lo), float(hi)) for lo, hi in intervals)
        return cls(len(ivs), ivs)

    @classmethod
    def empty(cls, dim: int) -> "Box":
        return cls(dim, None)

    @classmethod
    def whole(cls, dim: int) -> "Box":
        return cls(dim, tuple((-_INF, _INF) for _ in range(dim)))

    @classmethod
    def cube(cls, radius: float, dim: int) -> "Box":
        return cls.of([(-radius, radius)] * dim)

    @property
    def is_empty(self) -> bool:
        return self.intervals is None

    @property
    def is_bounded(self) -> bool:
        if self.is_empty:
            return True
        return all(lo > -_INF and hi < _INF for lo, hi in self.intervals)

    def contains(self, point, tol: float = 0.0) -> bool:
        if self.is_empty:
            return False
        if len(point) != self.dim:
            raise DimensionError("point dimension mismatched with box")
        return all(lo - tol <= p <= hi + tol for p, (lo, hi) in zip(point, self.intervals))

    def hull(self, other: "Box") -> "Box":
        if self.dim != other.dim:
            raise DimensionError("box dimensions differ")
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Box(self.dim, tuple(
            (min(a[0], b[0]), max(a[1], b[1]))
            for a, b in zip(self.intervals, other.intervals)))

    def intersect(self, other: "Box") -> "Box":
        if self.dim != other.dim:
            raise DimensionError("box dimensions differ")
        if self.is_empty or other.is_empty:
            return Box.empty(self.dim)
        ivs = []
        for a, b in zip(self.intervals, other.intervals):
            lo, hi = max(a[0], b[0]), min(a[1], b[1])
            if lo > hi:
                return Box.empty(self.dim)
            ivs.append((lo, hi))
        return Box(self.dim, tuple(ivs))

    def project(self, slots) -> "Box":
        slots = tuple(slots)
        if self.is_empty:
            return Box.empty(len(slots))
        return Box(len(slots), tuple(self.intervals[s] for s in slots))

    def times(self, other: "Box") -> "Box":
        if self.is_empty or other.is_empty:
            return Box.empty(self.dim + other.dim)
        return Box(self.dim + other.dim, self.intervals + other.intervals)

    def pad(self, margin: float) -> "Box":
        if self.is_empty:
            return self
        return Box(self.dim, tuple((lo - margin, hi + margin) for lo, hi in self.intervals))

    def volume(self) -> float:
        if self.is_empty:
            return 0.0
        v = 1.0
        for lo, hi in self.intervals:
            v *= hi - lo
        return v


# ---------------------------------------------------------------------------
# Polynomial helpers on coefficient tuples (low degree first, Fractions)


def _poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return _poly_trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_diff(a):
    return _poly_trim(a[i] * i for i in range(1, len(a)))


def _poly_eval_float(coeffs_float, u):
    acc = 0.0
    for c in reversed(coeffs_float):
        acc = acc * u + c
    return acc


# ---------------------------------------------------------------------------
# Expression nodes


@dataclass(frozen=True)
class Expr:
    dim: int

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, point) -> float:
        if len(point) != self.dim:
            raise DimensionError(f"point has {len(point)} coordinates, ambient is {self.dim}")
        return self._eval(tuple(float(c) for c in point))

    def eval_array(self, pts: np.ndarray) -> np.ndarray:
        """Evaluate on an (N, dim) array of points, returning shape (N,)."""
        pts = np.asarray(pts, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise DimensionError(f"expected points of shape (N, {self.dim})")
        return self._eval_arr(pts)

    def _eval(self, point):
        raise NotImplementedError

    def _eval_arr(self, pts):
        raise NotImplementedError

    # -- calculus -----------------------------------------------------------

    def diff1(self, slot: int) -> "Expr":
        raise NotImplementedError

    def diff(self, alpha) -> "Expr":
        alpha = check_multi_index(alpha, self.dim)
        out = self
        for slot, n in enumerate(alpha):
            for _ in range(n):
                out = out.diff1(slot)
        return out

    def substitute(self, mapping) -> "Expr":
        """Replace coordinates by expressions; keys are slots."""
        for slot, repl in mapping.items():
            if not 0 <= slot < self.dim:
                raise DimensionError(f"substituted slot {slot} outside ambient {self.dim}")
            if repl.dim != self.dim:
                raise DimensionError(
                    f"replacement for slot {slot} has ambient {repl.dim}, expected {self.dim}")
        return self._subst(mapping)

    def _subst(self, mapping):
        raise NotImplementedError

    def remap(self, slot_map, new_dim: int) -> "Expr":
        """Re-index free coordinates; every free slot must appear in slot_map."""
        missing = self.free_slots - set(slot_map)
        if missing:
            raise DimensionError(f"remap misses slots {sorted(missing)}")
        return self._remap(slot_map, new_dim)

    def _remap(self, slot_map, new_dim):
        raise NotImplementedError

    # -- structure ----------------------------------------------------------

    @cached_property
    def free_slots(self) -> frozenset:
        return self._free()

    def _free(self):
        raise NotImplementedError

    def support_box(self) -> Box:
        """A box outside of which the expression is identically zero.

        Conservative: may overestimate the support, never underestimates.
        Unbounded directions are reported as infinite intervals.
        """
        return self._support()

    def _support(self) -> Box:
        return Box.whole(self.dim)

    def interval(self, box: Box):
        """Crude interval enclosure of the range over a box (outward rounded)."""
        if box.dim != self.dim:
            raise DimensionError("box dimension mismatched with expression")
        if box.is_empty:
            return (0.0, 0.0)
        return self._interval(box)

    def _interval(self, box):
        raise NotImplementedError

    def bump_boundary_distance(self, point) -> float:
        """Distance of the point to the nearest bump transition |arg| = 1.

        Used to exclude evaluation points where finite differences of bump
        expressions degrade; returns inf when no bump node is present.
        """
        d = _INF
        for node in self._walk():
            if isinstance(node, BumpRat):
                u = node.arg.evaluate(point)
                d = min(d, abs(abs(u) - 1.0))
        return d

    def _walk(self):
        yield self
        for child in self._children():
            yield from child._walk()

    def _children(self):
        return ()

    # -- operator sugar -----------------------------------------------------

    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            return other
        if isinstance(other, (int, Fraction, float)):
            return const(other, self.dim)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return add(self, other) if other is not NotImplemented else NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return sub(self, other) if other is not NotImplemented else NotImplemented

    def __rsub__(self, other):
        other = self._coerce(other)
        return sub(other, self) if other is not NotImplemented else NotImplemented

    def __mul__(self, other):
        other = self._coerce(other)
        return mul(self, other) if other is not NotImplemented else NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return div(self, other) if other is not NotImplemented else NotImplemented

    def __pow__(self, n):
        return int_pow(self, n)

    def __neg__(self):
        return neg(self)

    def __str__(self):
        return self._text(0)

    def _text(self, prec: int) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    @cached_property
    def _float(self):
        return float(self.value)

    def _eval(self, point):
        return self._float

    def _eval_arr(self, pts):
        return np.full(pts.shape[0], self._float)

    def diff1(self, slot):
        return Const(self.dim, Fraction(0))

    def _subst(self, mapping):
        return self

    def _remap(self, slot_map, new_dim):
        return Const(new_dim, self.value)

    def _free(self):
        return frozenset()

    def _support(self):
        return Box.empty(self.dim) if self.value == 0 else Box.whole(self.dim)

    def _interval(self, box):
        return (self._float, self._float)

    def _text(self, prec):
        v = self.value
        if v.denominator == 1:
            s = str(v.numerator)
        else:
            s = f"{v.numerator}/{v.denominator}"
        if v < 0 and prec > 0:
            return f"({s})"
        return s


@dataclass(frozen=True)
class NamedConst(Expr):
    name: str  # only "pi" currently

    @cached_property
    def _float(self):
        return math.pi

    def _eval(self, point):
        return self._float

    def _eval_arr(self, pts):
        return np.full(pts.shape[0], self._float)

    def diff1(self, slot):
        return Const(self.dim, Fraction(0))

    def _subst(self, mapping):
        return self

    def _remap(self, slot_map, new_dim):
        return NamedConst(new_dim, self.name)

    def _free(self):
        return frozenset()

    def _interval(self, box):
        return _round_out(self._float, self._float)

    def _text(self, prec):
        return self.name


@dataclass(frozen=True)
class Var(Expr):
    slot: int
    name: str

    def __post_init__(self):
        if not 0 <= self.slot < self.dim:
            raise DimensionError(f"variable slot {self.slot} outside ambient {self.dim}")

    def _eval(self, point):
        return point[self.slot]

    def _eval_arr(self, pts):
        return pts[:, self.slot]

    def diff1(self, slot):
        return Const(self.dim, Fraction(1 if slot == self.slot else 0))

    def _subst(self, mapping):
        return mapping.get(self.slot, self)

    def _remap(self, slot_map, new_dim):
        return Var(new_dim, slot_map[self.slot], self.name)

    def _free(self):
        return frozenset((self.slot,))

    def _interval(self, box):
        return box.intervals[self.slot]

    def _text(self, prec):
        return self.name


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple

    def _eval(self, point):
        return math.fsum(t._eval(point) for t in self.terms)

    def _eval_arr(self, pts):
        acc = np.zeros(pts.shape[0])
        for t in self.terms:
            acc = acc + t._eval_arr(pts)
        return acc

    def diff1(self, slot):
        return add(*(t.diff1(slot) for t in self.terms))

    def _subst(self, mapping):
        return add(*(t._subst(mapping) for t in self.terms))

    def _remap(self, slot_map, new_dim):
        return add(*(t._remap(slot_map, new_dim) for t in self.terms))

    def _free(self):
        return frozenset().union(*(t.free_slots for t in self.terms))

    def _support(self):
        box = Box.empty(self.dim)
        for t in self.terms:
            box = box.hull(t._support())
        return box

    def _interval(self, box):
        lo, hi = 0.0, 0.0
        for t in self.terms:
            a, b = t._interval(box)
            lo, hi = lo + a, hi + b
        return _round_out(lo, hi)

    def _children(self):
        return self.terms

    def _text(self, prec):
        parts = [self.terms[0]._text(1)]
        for t in self.terms[1:]:
            sign, mag = _split_sign(t)
            parts.append(f" - {mag._text(1)}" if sign < 0 else f" + {mag._text(1)}")
        s = "".join(parts)
        return f"({s})" if prec > 1 else s


@dataclass(frozen=True)
class Product(Expr):
    factors: tuple

    def _eval(self, point):
        vals = [f._eval(point) for f in self.factors]
        # exact zero factors annihilate, even alongside overflowed ones
        if any(v == 0.0 for v in vals):
            return 0.0
        acc = 1.0
        for v in vals:
            acc *= v
        return acc

    def _eval_arr(self, pts):
        vals = [f._eval_arr(pts) for f in self.factors]
        # inf * 0 from saturated factors is overridden by the zero mask
        with np.errstate(invalid="ignore", over="ignore"):
            acc = np.ones(pts.shape[0])
            for v in vals:
                acc = acc * v
        zero = np.zeros(pts.shape[0], dtype=bool)
        for v in vals:
            zero |= v == 0.0
        acc[zero] = 0.0
        return acc

    def diff1(self, slot):
        terms = []
        for i, f in enumerate(self.factors):
            df = f.diff1(slot)
            terms.append(mul(*self.factors[:i], df, *self.factors[i + 1:]))
        return add(*terms)

    def _subst(self, mapping):
        return mul(*(f._subst(mapping) for f in self.factors))

    def _remap(self, slot_map, new_dim):
        return mul(*(f._remap(slot_map, new_dim) for f in self.factors))

    def _free(self):
        return frozenset().union(*(f.free_slots for f in self.factors))

    def _support(self):
        box = Box.whole(self.dim)
        for f in self.factors:
            box = box.intersect(f._support())
        return box

    def _interval(self, box):
        lo, hi = 1.0, 1.0
        for f in self.factors:
            a, b = f._interval(box)
            cands = (lo * a, lo * b, hi * a, hi * b)
            lo, hi = min(cands), max(cands)
        return _round_out(lo, hi)

    def _children(self):
        return self.factors

    def _text(self, prec):
        s = "*".join(f._text(2) for f in self.factors)
        return f"({s})" if prec > 2 else s


@dataclass(frozen=True)
class IntPow(Expr):
    base: Expr
    exponent: int

    def _eval(self, point):
        try:
            return self.base._eval(point) ** self.exponent
        except OverflowError:
            v = self.base._eval(point)
            sign = -1.0 if (v < 0 and self.exponent % 2 == 1) else 1.0
            return sign * _INF

    def _eval_arr(self, pts):
        return self.base._eval_arr(pts) ** self.exponent

    def diff1(self, slot):
        n = self.exponent
        return mul(const(n, self.dim), int_pow(self.base, n - 1), self.base.diff1(slot))

    def _subst(self, mapping):
        return int_pow(self.base._subst(mapping), self.exponent)

    def _remap(self, slot_map, new_dim):
        return int_pow(self.base._remap(slot_map, new_dim), self.exponent)

    def _free(self):
        return self.base.free_slots

    def _support(self):
        return self.base._support()

    def _interval(self, box):
        a, b = self.base._interval(box)
        n = self.exponent
        if n % 2 == 1:
            return _round_out(a**n, b**n)
        hi = max(a**n, b**n)
        lo = 0.0 if a <= 0.0 <= b else min(a**n, b**n)
        return _round_out(lo, hi)

    def _children(self):
        return (self.base,)

    def _text(self, prec):
        return f"{self.base._text(3)}^{self.exponent}"


class _Unary(Expr):
    _fn = None
    _np_fn = None
    _name = ""

    def _eval(self, point):
        return type(self)._fn(self.arg._eval(point))

    def _eval_arr(self, pts):
        with np.errstate(over="ignore"):
            return type(self)._np_fn(self.arg._eval_arr(pts))

    def _subst(self, mapping):
        return type(self)(self.dim, self.arg._subst(mapping))

    def _remap(self, slot_map, new_dim):
        return type(self)(new_dim, self.arg._remap(slot_map, new_dim))

    def _free(self):
        return self.arg.free_slots

    def _children(self):
        return (self.arg,)

    def _text(self, prec):
        return f"{self._name}({self.arg._text(0)})"


def _exp_saturating(u: float) -> float:
    # mathematically finite; saturate instead of raising on float overflow
    return math.exp(u) if u < 709.0 else _INF


@dataclass(frozen=True)
class Exp(_Unary):
    arg: Expr
    _fn = _exp_saturating
    _np_fn = np.exp
    _name = "exp"

    def diff1(self, slot):
        return mul(self, self.arg.diff1(slot))

    def _interval(self, box):
        a, b = self.arg._interval(box)
        return _round_out(math.exp(a) if a > -_INF else 0.0,
                          math.exp(min(b, 709.0)) if b < _INF else _INF)


@dataclass(frozen=True)
class Sin(_Unary):
    arg: Expr
    _fn = math.sin
    _np_fn = np.sin
    _name = "sin"

    def diff1(self, slot):
        return mul(Cos(self.dim, self.arg), self.arg.diff1(slot))

    def _interval(self, box):
        return (-1.0, 1.0)


@dataclass(frozen=True)
class Cos(_Unary):
    arg: Expr
    _fn = math.cos
    _np_fn = np.cos
    _name = "cos"

    def diff1(self, slot):
        return mul(const(-1, self.dim), Sin(self.dim, self.arg), self.arg.diff1(slot))

    def _interval(self, box):
        return (-1.0, 1.0)


@dataclass(frozen=True)
class BumpRat(Expr):
    """bump(u) * p(u) / (1 - u^2)^q at u = arg, guarded to 0 for |u| >= 1."""

    arg: Expr
    coeffs: tuple  # polynomial p, Fractions, low degree first
    pole_order: int  # q

    @cached_property
    def _coeffs_float(self):
        return tuple(float(c) for c in self.coeffs)

    def _eval(self, point):
        u = self.arg._eval(point)
        return self._value(u)

    def _value(self, u: float) -> float:
        if abs(u) >= 1.0:
            return 0.0
        s = 1.0 - u * u
        r = math.exp(-1.0 / s)
        for _ in range(self.pole_order):
            r /= s
        return r * _poly_eval_float(self._coeffs_float, u)

    def _eval_arr(self, pts):
        u = self.arg._eval_arr(pts)
        inside = np.abs(u) < 1.0
        s = np.where(inside, 1.0 - u * u, 1.0)
        r = np.exp(-1.0 / s)
        for _ in range(self.pole_order):
            r = r / s
        p = np.zeros_like(u)
        for c in reversed(self._coeffs_float):
            p = p * u + c
        out = r * p
        out[~inside] = 0.0
        return out

    def diff1(self, slot):
        # d/du [bump(u) p(u) (1-u^2)^-q]
        #   = bump(u) [p'(u)(1-u^2)^2 - 2u p(u) + 2qu(1-u^2)p(u)] (1-u^2)^-(q+2)
        p = self.coeffs
        one_minus_u2 = (Fraction(1), Fraction(0), Fraction(-1))
        term1 = _poly_mul(_poly_diff(p), _poly_mul(one_minus_u2, one_minus_u2))
        term2 = _poly_mul((Fraction(0), Fraction(-2)), p)
        term3 = _poly_mul((Fraction(0), Fraction(2 * self.pole_order)),
                          _poly_mul(one_minus_u2, p))
        ptilde = _poly_add(_poly_add(term1, term2), term3)
        dself = bump_rat(self.arg, ptilde, self.pole_order + 2)
        return mul(dself, self.arg.diff1(slot))

    def _subst(self, mapping):
        return bump_rat(self.arg._subst(mapping), self.coeffs, self.pole_order)

    def _remap(self, slot_map, new_dim):
        return bump_rat(self.arg._remap(slot_map, new_dim), self.coeffs, self.pole_order)

    def _free(self):
        return self.arg.free_slots

    def _support(self):
        if not self.coeffs:
            return Box.empty(self.dim)
        affine = as_affine(self.arg)
        if affine is not None:
            slots = [s for s in affine if s >= 0 and affine[s] != 0]
            if len(slots) == 1:
                s = slots[0]
                a, b = affine[s], affine.get(-1, Fraction(0))
                lo, hi = sorted(((-1 - b) / a, (1 - b) / a))
                ivs = [(-_INF, _INF)] * self.dim
                ivs[s] = (float(lo), float(hi))
                return Box(self.dim, tuple(ivs))
        return Box.whole(self.dim)

    def _interval(self, box):
        a, b = self.arg._interval(box)
        if b <= -1.0 or a >= 1.0:
            return (0.0, 0.0)
        q = self.pole_order
        envelope = math.exp(-1.0) if q == 0 else (q / math.e) ** q
        m = sum(abs(c) for c in self._coeffs_float) * envelope
        return (-m, m)

    def _children(self):
        return (self.arg,)

    def _text(self, prec):
        if self.coeffs == (Fraction(1),) and self.pole_order == 0:
            return f"bump({self.arg._text(0)})"
        # debug form: not part of the surface grammar
        poly = " + ".join(f"{c}*u^{i}" for i, c in enumerate(self.coeffs) if c != 0)
        return f"bumprat({self.arg._text(0)}; {poly or '0'}; {self.pole_order})"


def _round_out(lo: float, hi: float):
    return (math.nextafter(lo, -_INF), math.nextafter(hi, _INF))


def _split_sign(e: Expr):
    """Split off a leading minus sign for printing purposes."""
    if isinstance(e, Const) and e.value < 0:
        return -1, Const(e.dim, -e.value)
    if isinstance(e, Product):
        f0 = e.factors[0]
        if isinstance(f0, Const) and f0.value < 0:
            if f0.value == -1 and len(e.factors) > 1:
                return -1, mul(*e.factors[1:])
            return -1, mul(Const(e.dim, -f0.value), *e.factors[1:])
    return 1, e


# ---------------------------------------------------------------------------
# Smart constructors (the only supported way to build nodes)


def const(value, dim: int) -> Expr:
    if isinstance(value, float) and not value.is_integer():
        value = Fraction(value)  # exact binary value
    return Const(dim, Fraction(value))


def var(slot: int, dim: int, name: str | None = None) -> Expr:
    return Var(dim, slot, name if name is not None else f"x{slot}")


def pi(dim: int) -> Expr:
    return NamedConst(dim, "pi")


def add(*terms) -> Expr:
    if not terms:
        raise ExprError("empty sum")
    dim = terms[0].dim
    flat, const_acc = [], Fraction(0)
    for t in terms:
        if t.dim != dim:
            raise DimensionError("sum over mixed ambient dimensions")
        if isinstance(t, Sum):
            items = t.terms
        else:
            items = (t,)
        for item in items:
            if isinstance(item, Const):
                const_acc += item.value
            else:
                flat.append(item)
    if const_acc != 0 or not flat:
        flat.append(Const(dim, const_acc))
    if len(flat) == 1:
        return flat[0]
    return Sum(dim, tuple(flat))


def neg(e: Expr) -> Expr:
    return mul(const(-1, e.dim), e)


def sub(a: Expr, b: Expr) -> Expr:
    return add(a, neg(b))


def mul(*factors) -> Expr:
    if not factors:
        raise ExprError("empty product")
    dim = factors[0].dim
    flat, const_acc = [], Fraction(1)
    for f in factors:
        if f.dim != dim:
            raise DimensionError("product over mixed ambient dimensions")
        items = f.factors if isinstance(f, Product) else (f,)
        for item in items:
            if isinstance(item, Const):
                const_acc *= item.value
            else:
                flat.append(item)
    if const_acc == 0:
        return Const(dim, Fraction(0))
    if const_acc != 1 or not flat:
        flat.insert(0, Const(dim, const_acc))
    if len(flat) == 1:
        return flat[0]
    return Product(dim, tuple(flat))


def div(num: Expr, den: Expr) -> Expr:
    c = constant_value(den)
    if c is None:
        raise ExprError("denominator must fold to a constant (nonvanishing by construction)")
    if c == 0:
        raise ExprError("division by zero constant")
    return mul(Const(num.dim, 1 / c), num)


def int_pow(base: Expr, n) -> Expr:
    if not isinstance(n, int):
        raise ExprError(f"exponents must be integers, got {n!r}")
    c = constant_value(base)
    if c is not None:
        if n < 0 and c == 0:
            raise ExprError("zero raised to a negative power")
        return Const(base.dim, c ** n)
    if n < 0:
        raise ExprError("negative powers require a nonzero constant base")
    if n == 0:
        return Const(base.dim, Fraction(1))
    if n == 1:
        return base
    if isinstance(base, IntPow):
        return IntPow(base.dim, base.base, base.exponent * n)
    return IntPow(base.dim, base, n)


def exp(arg: Expr) -> Expr:
    return Exp(arg.dim, arg)


def sin(arg: Expr) -> Expr:
    return Sin(arg.dim, arg)


def cos(arg: Expr) -> Expr:
    return Cos(arg.dim, arg)


def bump(arg: Expr) -> Expr:
    return bump_rat(arg, (Fraction(1),), 0)


def bump_rat(arg: Expr, coeffs, pole_order: int) -> Expr:
    coeffs = _poly_trim(Fraction(c) for c in coeffs)
    if not coeffs:
        return Const(arg.dim, Fraction(0))
    c = constant_value(arg)
    if c is not None and abs(c) >= 1:
        return Const(arg.dim, Fraction(0))
    return BumpRat(arg.dim, arg, coeffs, pole_order)


def constant_value(e: Expr):
    """The exact rational value of a constant expression, else None."""
    if isinstance(e, Const):
        return e.value
    return None


# ---------------------------------------------------------------------------
# Module-level operation entry points


def differentiate(e: Expr, alpha) -> Expr:
    """Exact mixed partial derivative D^alpha."""
    return e.diff(alpha)


def evaluate(e: Expr, point) -> float:
    return e.evaluate(point)


def substitute(e: Expr, assignments) -> Expr:
    return e.substitute(assignments)


def support_box(e: Expr) -> Box:
    return e.support_box()


# ---------------------------------------------------------------------------
# Polynomial view (used by Hadamard factorization)


def as_affine(e: Expr):
    """Write e as sum of coeff * x_slot plus constant; None if not affine.

    Returned dict maps slot -> Fraction coefficient, with key -1 for the
    constant term.
    """
    p = as_polynomial(e)
    if p is None:
        return None
    out = {}
    for mono, c in p.items():
        if order(mono) == 0:
            out[-1] = out.get(-1, Fraction(0)) + c
        elif order(mono) == 1:
            slot = mono.index(1)
            out[slot] = out.get(slot, Fraction(0)) + c
        else:
            return None
    return out


def as_polynomial(e: Expr):
    """Exact dict {exponent tuple: Fraction} for polynomial expressions, else None."""
    if isinstance(e, Const):
        return {(0,) * e.dim: e.value} if e.value != 0 else {}
    if isinstance(e, Var):
        mono = tuple(1 if i == e.slot else 0 for i in range(e.dim))
        return {mono: Fraction(1)}
    if isinstance(e, Sum):
        out = {}
        for t in e.terms:
            p = as_polynomial(t)
            if p is None:
                return None
            for mono, c in p.items():
                out[mono] = out.get(mono, Fraction(0)) + c
        return {m: c for m, c in out.items() if c != 0}
    if isinstance(e, Product):
        out = {(0,) * e.dim: Fraction(1)}
        for f in e.factors:
            p = as_polynomial(f)
            if p is None:
                return None
            nxt = {}
            for m1, c1 in out.items():
                for m2, c2 in p.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    nxt[m] = nxt.get(m, Fraction(0)) + c1 * c2
            out = nxt
        return {m: c for m, c in out.items() if c != 0}
    if isinstance(e, IntPow):
        p = as_polynomial(e.base)
        if p is None:
            return None
        out = {(0,) * e.dim: Fraction(1)}
        base = p
        for _ in range(e.exponent):
            nxt = {}
            for m1, c1 in out.items():
                for m2, c2 in base.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    nxt[m] = nxt.get(m, Fraction(0)) + c1 * c2
            out = nxt
        return {m: c for m, c in out.items() if c != 0}
    return None


def polynomial_to_expr(poly, dim: int, names=None) -> Expr:
    if not poly:
        return Const(dim, Fraction(0))
    terms = []
    for mono, c in sorted(poly.items()):
        factors = [Const(dim, c)]
        for slot, n in enumerate(mono):
            if n:
                name = names[slot] if names else f"x{slot}"
                factors.append(int_pow(Var(dim, slot, name), n))
        terms.append(mul(*factors))
    return add(*terms)


# ---------------------------------------------------------------------------
# Parser for the surface grammar
#
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := base ('^' INT)?
#   base   := NUMBER | VAR | FUNC '(' expr ')' | '(' expr ')' | 'pi'
#   VAR    := ('x'|'y') INT        FUNC := 'exp'|'sin'|'cos'|'bump'

_FUNCS = {"exp": exp, "sin": sin, "cos": cos, "bump": bump}


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def next(self):
        self._skip_ws()
        start = self.pos
        if self.pos >= len(self.text):
            return ("end", "", start)
        ch = self.text[self.pos]
        if ch in "+-*/^()":
            self.pos += 1
            return ("op", ch, start)
        if ch.isdigit() or ch == ".":
            while self.pos < len(self.text) and (self.text[self.pos].isdigit()
                                                 or self.text[self.pos] == "."):
                self.pos += 1
            lit = self.text[start:self.pos]
            if lit.count(".") > 1:
                raise ExprSyntaxError(f"malformed number {lit!r}", start)
            return ("number", lit, start)
        if ch.isalpha():
            while self.pos < len(self.text) and self.text[self.pos].isalpha():
                self.pos += 1
            letters = self.text[start:self.pos]
            dstart = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            digits = self.text[dstart:self.pos]
            return ("ident", letters + digits, start)
        raise ExprSyntaxError(f"unexpected character {ch!r}", start)


class _Parser:
    def __init__(self, text: str, ambient_dim: int, base_dim):
        self.tok = _Tokenizer(text)
        self.ambient = ambient_dim
        self.base_dim = base_dim
        self.current = self.tok.next()

    def advance(self):
        self.current = self.tok.next()

    def expect_op(self, op: str):
        kind, val, pos = self.current
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> Expr:
        e = self.parse_expr()
        kind, val, pos = self.current
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {val!r}", pos)
        return e

    def parse_expr(self) -> Expr:
        negate_head = False
        kind, val, _ = self.current
        if kind == "op" and val == "-":
            negate_head = True
            self.advance()
        e = self.parse_term()
        if negate_head:
            e = neg(e)
        while True:
            kind, val, _ = self.current
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.parse_term()
                e = add(e, rhs) if val == "+" else sub(e, rhs)
            else:
                return e

    def parse_term(self) -> Expr:
        e = self.parse_factor()
        while True:
            kind, val, pos = self.current
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.parse_factor()
                try:
                    e = mul(e, rhs) if val == "*" else div(e, rhs)
                except ExprError as err:
                    raise ExprSyntaxError(str(err), pos) from err
            else:
                return e

    def parse_factor(self) -> Expr:
        e = self.parse_base()
        kind, val, pos = self.current
        if kind == "op" and val == "^":
            self.advance()
            kind, val, pos = self.current
            sign = 1
            if kind == "op" and val == "-":
                sign = -1
                self.advance()
                kind, val, pos = self.current
            if kind != "number" or "." in val:
                raise ExprSyntaxError("expected an integer exponent", pos)
            self.advance()
            try:
                return int_pow(e, sign * int(val))
            except ExprError as err:
                raise ExprSyntaxError(str(err), pos) from err
        return e

    def parse_base(self) -> Expr:
        kind, val, pos = self.current
        if kind == "number":
            self.advance()
            lit = "0" + val if val.startswith(".") else val
            return Const(self.ambient, Fraction(lit))
        if kind == "op" and val == "(":
            self.advance()
            e = self.parse_expr()
            self.expect_op(")")
            return e
        if kind == "ident":
            letters = val.rstrip("0123456789")
            digits = val[len(letters):]
            if letters in _FUNCS and not digits:
                self.advance()
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                return _FUNCS[letters](arg)
            if letters == "pi" and not digits:
                self.advance()
                return NamedConst(self.ambient, "pi")
            if letters in ("x", "y") and digits:
                self.advance()
                return self._make_var(letters, int(digits), pos)
            raise ExprSyntaxError(f"unknown identifier {val!r}", pos)
        raise ExprSyntaxError("expected a term", pos)

    def _make_var(self, kind: str, index: int, pos: int) -> Expr:
        base_dim = self.ambient if self.base_dim is None else self.base_dim
        if kind == "x":
            if index >= base_dim:
                raise ExprSyntaxError(
                    f"variable x{index} out of range (base dimension {base_dim})", pos)
            slot = index
        else:
            fibre_dim = self.ambient - base_dim
            if index >= fibre_dim:
                raise ExprSyntaxError(
                    f"variable y{index} out of range (fibre dimension {fibre_dim})", pos)
            slot = base_dim + index
        return Var(self.ambient, slot, f"{kind}{index}")


def parse(text: str, ambient_dim: int, base_dim: int | None = None) -> Expr:
    """Parse the surface grammar into an expression on R^ambient_dim.

    ``base_dim`` splits the coordinates between x-variables (slots
    0..base_dim-1) and y-variables (slots base_dim..ambient_dim-1); by
    default every coordinate is an x-variable.
    """
    if ambient_dim < 0:
        raise DimensionError("ambient dimension must be nonnegative")
    if base_dim is not None and not 0 <= base_dim <= ambient_dim:
        raise DimensionError("base dimension must lie within the ambient dimension")
    return _Parser(text, ambient_dim, base_dim).parse()

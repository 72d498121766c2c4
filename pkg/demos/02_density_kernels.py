"""Density families: fibre integration against a compactly supported kernel.

A density term phi acts by T(F)(x) = integral of phi(x, y) F(x, y) dy, and
its restriction at x is the smooth fibre density phi(x, -).  Everything
here is driven by fixed-order Gauss-Legendre quadrature on the support box
of the integrand.
"""

from transdist import (BUMP_INTEGRAL, TrivialBundle, density, evaluate, pair,
                       restrict, total_support)

b = TrivialBundle(1, 1)
phi = b.parse_total("bump(x0)*bump(y0)")
T = density(b, phi)

print("T_phi with phi(x, y) = bump(x) * bump(y)")
print(f"support box: {total_support(T).intervals}")
print()

one = b.parse_total("1")
TF = evaluate(T, one)
bump = b.parse_base("bump(x0)")
print("applying to F = 1 gives bump(x) times the bump integral "
      f"({BUMP_INTEGRAL:.15f}):")
for x in (-0.8, -0.3, 0.0, 0.3, 0.8):
    print(f"  x = {x:5.2f}:  T(1)(x) = {TF.value((x,)):.15f}   "
          f"bump(x)*I = {bump.evaluate((x,)) * BUMP_INTEGRAL:.15f}")

print()
print("restriction at x = 0.5 is the fibre density bump(0.5)*bump(y):")
v = restrict(T, (0.5,))
print(f"  density expression: {v.density}")
print(f"  paired with 1:     {pair(v, b.parse_fibre('1')):.15f}")
print(f"  bump(0.5)*I:       {bump.evaluate((0.5,)) * BUMP_INTEGRAL:.15f}")

print()
print("derivatives pass under the integral sign:")
dTF = TF.derivative((1,))
h = 1e-5
for x in (-0.4, 0.2):
    fd = (TF.value((x + h,)) - TF.value((x - h,))) / (2 * h)
    print(f"  x = {x:5.2f}:  exact {dTF.value((x,)):.12f}   "
          f"finite difference {fd:.12f}")

"""Dirac families supported on a section: build, evaluate, restrict.

A weighted Dirac family assigns to each base point x the point mass
f(x) * delta_{sigma(x)} on the fibre.  Applying it to a function F of the
total space produces the compactly supported base function
x -> f(x) * F(x, sigma(x)); restricting it at x recovers the point mass.
"""

import math

from transdist import TrivialBundle, dirac_section, evaluate, pair, restrict
from transdist.bundle import restrict_function, section_from_strings

b = TrivialBundle(1, 1)
diag = section_from_strings(b, ["x0"])          # sigma(x) = x
weight = b.parse_base("bump(x0)")               # supported on [-1, 1]
T = dirac_section(diag, weight)

F = b.parse_total("2 + x0*y0")
TF = evaluate(T, F)

print("T = bump-weighted Dirac family on the diagonal section")
print("F(x, y) = 2 + x*y")
print()
print(" x      T(F)(x)          closed form bump(x)*(2 + x^2)")
for x in (-1.5, -0.5, 0.0, 0.5, 1.0):
    closed = weight.evaluate((x,)) * (2 + x * x)
    print(f"{x:5.2f}   {TF.value((x,)):.12f}   {closed:.12f}")

print()
print("restriction at x = 0.5 (one atom, coefficient bump(0.5) = e^(-4/3)):")
v = restrict(T, (0.5,))
for point, beta, c in v.atoms:
    print(f"  atom at {point}, derivative order {beta}, coefficient {c:.12f}")
print(f"  e^(-4/3)      = {math.exp(-4/3):.12f}")

print()
print("compatibility: pairing the restriction with F|_x reproduces T(F)(x)")
for x in (-0.5, 0.25, 0.75):
    lhs = pair(restrict(T, (x,)), restrict_function(b, F, (x,)))
    rhs = TF.value((x,))
    print(f"  x = {x:5.2f}:  pair = {lhs:.15f}   T(F)(x) = {rhs:.15f}")

# a family carrying a fibre derivative: pairs with the derivative of F
Td = dirac_section(diag, weight, beta=(1,))
G = b.parse_total("y0^2")
TdG = evaluate(Td, G)
x = 0.25
print()
print("derivative-carrying family (beta = 1) applied to y^2:")
print(f"  T'(y^2)(0.25) = {TdG.value((x,)):.12f}")
print(f"  bump(0.25)*2*0.25 = {weight.evaluate((x,)) * 2 * x:.12f}")

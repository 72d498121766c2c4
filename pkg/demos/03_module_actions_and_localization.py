"""Module actions, Hadamard factorization, and localization at a point.

Base functions act on distributions through the projection, total-space
functions act through multiplication (expanding fibre derivatives by the
Leibniz rule), and a distribution whose restriction at x vanishes factors
through the maximal ideal of x: T = sum of f_i . T_i with f_i(x) = 0.
"""

from transdist import (TrivialBundle, dirac_section, evaluate, hadamard_factor,
                       localize_decompose, module_action_base,
                       module_action_total, restrict)
from transdist.bundle import section_from_strings
from transdist.distribution import recompose

b = TrivialBundle(1, 1)
diag = section_from_strings(b, ["x0"])

print("Hadamard factorization: f = f(a) + sum (x_i - a_i) g_i, exactly")
f = b.parse_base("x0^2")
for a in (0.0, 1.0):
    constant, factors = hadamard_factor(f, (a,))
    pretty = ", ".join(f"slot {s}: {g}" for s, g in factors)
    print(f"  x^2 at a = {a}: constant {constant}, factors [{pretty}]")

print()
T = dirac_section(diag, b.parse_base("x0*bump(x0)"))
print("T = (x * bump(x))-weighted diagonal Dirac family; its restriction")
print(f"at 0 vanishes: atoms of T_0 = {restrict(T, (0.0,)).atoms}")

pieces = localize_decompose(T, (0.0,))
print("localization at 0:")
for f_i, T_i in pieces:
    term = T_i.terms[0]
    print(f"  factor {f_i}  times Dirac family with weight {term.weight}")

R = recompose(pieces, b)
G = b.parse_total("y0^2 + x0*y0 + 1")
print("recomposition agrees with T extensionally:")
for x in (-0.5, 0.2, 0.8):
    print(f"  x = {x:5.2f}:  T(G) = {evaluate(T, G).value((x,)):.15f}   "
          f"recomposed = {evaluate(R, G).value((x,)):.15f}")

print()
print("module actions: (f . T)(G) = T((f o pi) G) and (F . T)(G) = T(F G)")
T0 = dirac_section(diag, b.parse_base("bump(x0)"))
fT = module_action_base(b.parse_base("x0"), T0)
F = b.parse_total("y0")
FT = module_action_total(F, T0)
G = b.parse_total("2 + x0*y0")
for x in (0.3, 0.6):
    lhs = evaluate(fT, G).value((x,))
    rhs = x * evaluate(T0, G).value((x,))
    print(f"  base action at {x}: {lhs:.15f} vs x*T(G)(x) = {rhs:.15f}")
for x in (0.3, 0.6):
    lhs = evaluate(FT, G).value((x,))
    rhs = evaluate(T0, b.parse_total("y0*(2 + x0*y0)")).value((x,))
    print(f"  total action at {x}: {lhs:.15f} vs T(F*G)(x) = {rhs:.15f}")

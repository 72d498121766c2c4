"""Kernel operators on the pair bundle and their convolution.

A distribution on R x R -> R acts on functions of the second factor:
graph kernels pull the argument back along a map, derivative kernels
differentiate it, density kernels integrate against it.  Composition is
kernel convolution with compose(K1, K2) acting as K1 after K2, checked
here against applying the two operators in sequence.
"""

import numpy as np

from transdist import TrivialBundle, apply, compose, density_kernel, graph_kernel
from transdist.bundle import section_from_strings
from transdist.operators import apply_to_values

b = TrivialBundle(1, 1)
w3 = b.parse_base("exp(1)*bump(x0/3)")   # normalized cutoff, w3(0) = 1
w4 = b.parse_base("exp(1)*bump(x0/4)")

K_a = graph_kernel(section_from_strings(b, ["x0 + 1/2"]), w3)
K_b = graph_kernel(section_from_strings(b, ["x0 - 1/4"]), w4)
K_phi = density_kernel(b, b.parse_total("bump(x0)*bump(y0)"))

g = b.parse_fibre("y0^2 + y0")

print("graph kernel: apply(K_a, g)(x) = w(x) * g(x + 1/2)")
bf = apply(K_a, g)
for x in (-0.5, 0.0, 0.5):
    manual = w3.evaluate((x,)) * g.evaluate((x + 0.5,))
    print(f"  x = {x:5.2f}:  {bf.value((x,)):.15f}   manual {manual:.15f}")

print()
print("translation graphs compose to the summed translation:")
K_ab = compose(K_a, K_b)
section = K_ab.terms[0].section.components[0]
print(f"  composite section: {section}")

print()
print("the composition contract apply(compose(K1, K2), g) = "
      "apply(K1, apply(K2, g)):")
for K1, K2, label in ((K_a, K_phi, "graph o density"),
                      (K_phi, K_a, "density o graph"),
                      (K_phi, K_phi, "density o density")):
    K = compose(K1, K2)
    lhs = apply(K, g)
    inner = apply(K2, g)
    rhs = apply_to_values(K1, lambda y: inner.value(y), inner.support_box())
    err = max(abs(lhs.value((x,)) - rhs((x,))) for x in np.linspace(-1, 1, 9))
    print(f"  {label:18s} kinds {K.kinds}: max deviation {err:.3e}")

print()
print("derivative kernels differentiate along the fibre:")
K_d = graph_kernel(section_from_strings(b, ["x0"]),
                   b.parse_base("exp(1)*bump((x0 - 1)/3)"), beta=(1,))
bf = apply(K_d, b.parse_fibre("y0^2"))
print(f"  kernel with unit weight at 1 applied to y^2, at x = 1: "
      f"{bf.value((1.0,)):.12f} (the derivative 2x at x = 1)")

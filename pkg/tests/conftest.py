import numpy as np
import pytest

from transdist import expr as ex
from transdist.bundle import TrivialBundle
from transdist.expr import Box


@pytest.fixture
def line_bundle():
    return TrivialBundle(1, 1)


@pytest.fixture
def plane_bundle():
    return TrivialBundle(2, 1)


def grid_points(box: Box, per_axis: int) -> np.ndarray:
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in box.intervals]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def fd_derivative(f, x, slot: int, h: float = 1e-4) -> float:
    """Richardson-extrapolated central difference, independent of symbolics."""
    def central(step):
        xp = list(x)
        xm = list(x)
        xp[slot] += step
        xm[slot] -= step
        return (f(tuple(xp)) - f(tuple(xm))) / (2 * step)
    return (4.0 * central(h / 2) - central(h)) / 3.0


def random_polynomial(rng: np.random.Generator, dim: int, max_degree: int = 2,
                      names=None) -> ex.Expr:
    """Small random polynomial with integer coefficients in [-3, 3]."""
    terms = [ex.const(int(rng.integers(-3, 4)), dim)]
    for _ in range(int(rng.integers(1, 4))):
        factors = [ex.const(int(rng.integers(-3, 4)), dim)]
        for slot in range(dim):
            n = int(rng.integers(0, max_degree + 1))
            if n:
                name = names[slot] if names else f"x{slot}"
                factors.append(ex.int_pow(ex.var(slot, dim, name), n))
        terms.append(ex.mul(*factors))
    return ex.add(*terms)

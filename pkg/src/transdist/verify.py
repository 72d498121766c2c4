"""Named invariant suites with pass/fail reports and failure witnesses.

Each suite is deterministic: fixed grids, fixed seeds, index-ordered
accumulation.  Every check accepts an injectable primitive (the function
being checked against) with the library implementation as default, so a
test can hand in a deliberately broken one and confirm the suite notices;
a suite that cannot fail verifies nothing.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import distribution as dist
from . import expr as ex
from .bundle import TrivialBundle, restrict_function
from .distribution import TransversalDistribution, total_support
from .expr import Box, Expr, ExprError


@dataclass
class CaseResult:
    case_id: str
    max_error: float
    tolerance: float
    passed: bool
    witness: dict | None = None
    skipped: bool = False


@dataclass
class CheckReport:
    suite: str
    cases: list = field(default_factory=list)
    duration_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed or c.skipped for c in self.cases)

    def add(self, case_id: str, max_error: float, tolerance: float,
            witness: dict | None = None, skipped: bool = False) -> None:
        ok = bool(max_error < tolerance)
        self.cases.append(CaseResult(case_id, float(max_error), float(tolerance),
                                     ok, None if ok else witness, skipped))

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "duration_seconds": self.duration_seconds,
            "cases": [
                {
                    "id": c.case_id,
                    "max_error": c.max_error,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                    "skipped": c.skipped,
                    "witness": c.witness,
                }
                for c in self.cases
            ],
        }

    def to_table(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'} "
                 f"({self.duration_seconds:.3f}s)"]
        for c in self.cases:
            status = "skip" if c.skipped else ("pass" if c.passed else "FAIL")
            line = f"  [{status}] {c.case_id}: max_error={c.max_error:.3e} tol={c.tolerance:.1e}"
            if c.witness:
                line += f" witness={c.witness}"
            lines.append(line)
        return "\n".join(lines)


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.duration_seconds = time.perf_counter() - start
        return report
    return wrapper


# ---------------------------------------------------------------------------
# Restriction compatibility: T_x applied to F|_{P_x} equals T(F) at x


@_timed
def check_restriction_compat(T: TransversalDistribution, F: Expr, grid,
                             tolerance: float = 1e-10,
                             restrict_fn=dist.restrict) -> CheckReport:
    report = CheckReport("restriction_compat")
    bf = dist.evaluate(T, F)
    worst, witness = 0.0, None
    for x in grid:
        lhs = dist.pair(restrict_fn(T, x), restrict_function(T.bundle, F, x))
        rhs = bf.value(x)
        err = abs(lhs - rhs)
        if err > worst:
            worst, witness = err, {"x": tuple(map(float, x)), "lhs": lhs, "rhs": rhs}
    report.add("pair(T_x, F|x) == T(F)(x)", worst, tolerance, witness)
    return report


# ---------------------------------------------------------------------------
# Leibniz identity for derivatives of x -> T_x(F|x)


def _relative_error(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)


def _splittings(alpha):
    """All (beta, gamma) with beta + gamma = alpha, componentwise."""
    ranges = [range(a + 1) for a in alpha]
    for beta in itertools.product(*ranges):
        gamma = tuple(a - b for a, b in zip(alpha, beta))
        yield beta, gamma


@_timed
def check_leibniz(T: TransversalDistribution, F: Expr, alpha_max: int, grid,
                  tolerance: float = 1e-8, binomial: bool = True) -> CheckReport:
    """D^alpha of T(F) against the family/function derivative expansion.

    With ``binomial=False`` the expansion drops the binomial coefficients
    (the bare sum over splittings); that variant is expected to fail for
    mixed repeated derivatives and exists to document the difference.
    """
    report = CheckReport("leibniz")
    b = T.bundle
    bf = dist.evaluate(T, F)
    family_cache = {}
    for alpha in sorted(_alphas_up_to(b.base_dim, alpha_max), key=sum):
        direct = bf.derivative(alpha)
        worst, witness = 0.0, None
        for x in grid:
            lhs = direct.value(x)
            rhs = 0.0
            for beta, gamma in _splittings(alpha):
                coeff = 1
                if binomial:
                    for a_i, b_i in zip(alpha, beta):
                        coeff *= math.comb(a_i, b_i)
                if beta not in family_cache:
                    family_cache[beta] = dist.family_derivative(T, beta)
                dT = family_cache[beta]
                dF = F.diff(b.base_alpha_to_total(gamma))
                rhs += coeff * dist.pair(dist.restrict(dT, x),
                                         restrict_function(b, dF, x))
            err = _relative_error(lhs, rhs)
            if err > worst:
                worst, witness = err, {"x": tuple(map(float, x)), "alpha": alpha,
                                       "lhs": lhs, "rhs": rhs}
        report.add(f"alpha={alpha}", worst, tolerance, witness)
    return report


def _alphas_up_to(dim: int, m: int):
    out = []
    for total in range(m + 1):
        for alpha in itertools.product(range(total + 1), repeat=dim):
            if sum(alpha) == total:
                out.append(alpha)
    return out


# ---------------------------------------------------------------------------
# Smoothness of T(F): finite differences converge at second order


def _central_difference(fn, x, alpha, h: float) -> float:
    """Mixed central difference of order |alpha| with O(h^2) error."""
    stencils = []
    for a in alpha:
        if a == 0:
            stencils.append(((0.0, 1.0),))
        elif a == 1:
            stencils.append(((-1.0, -0.5), (1.0, 0.5)))
        elif a == 2:
            stencils.append(((-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)))
        else:
            raise ExprError("finite-difference stencils support orders 0..2 per axis")
    total = 0.0
    for combo in itertools.product(*stencils):
        offsets = [c[0] for c in combo]
        weight = 1.0
        for c in combo:
            weight *= c[1]
        pt = tuple(xi + h * o for xi, o in zip(x, offsets))
        total += weight * fn(pt)
    return total / h ** sum(alpha)


@_timed
def check_smoothness(T: TransversalDistribution, F: Expr, alpha, grid,
                     h_sequence=(1e-2, 5e-3, 2.5e-3, 1.25e-3),
                     min_order: float = 1.9, terminal_tolerance: float = 1e-5,
                     boundary_margin: float = 0.05,
                     derivative_scale: float = 1.0) -> CheckReport:
    """Central differences of T(F) against its exact derivative.

    Points whose symbolic part sits within ``boundary_margin`` of a bump
    transition are reported as skipped: finite differences straddling the
    cutover do not see a smooth function at these step sizes.
    ``derivative_scale`` rescales the exact derivative (sensitivity hook).
    """
    report = CheckReport("smoothness")
    bf = dist.evaluate(T, F)
    alpha = ex.check_multi_index(alpha, T.bundle.base_dim)
    exact_fn = bf.derivative(alpha)
    for x in grid:
        case = f"alpha={alpha} x={tuple(map(float, x))}"
        margin = min(bf.bump_boundary_distance(x),
                     exact_fn.bump_boundary_distance(x))
        if margin < boundary_margin:
            report.add(case + " (bump boundary)", 0.0, 1.0, skipped=True)
            continue
        exact = derivative_scale * exact_fn.value(x)
        errors = [abs(_central_difference(bf.value, x, alpha, h) - exact)
                  for h in h_sequence]
        terminal = errors[-1]
        if errors[0] < 1e-13:
            # derivative is numerically zero at every step: converged outright
            observed = float("inf") if terminal < terminal_tolerance else 0.0
        elif terminal == 0.0:
            observed = float("inf")
        else:
            observed = (math.log(errors[0] / terminal)
                        / math.log(h_sequence[0] / h_sequence[-1]))
        err_metric = terminal if observed >= min_order else 1.0
        report.add(case, err_metric, terminal_tolerance,
                   {"x": tuple(map(float, x)), "observed_order": observed,
                    "errors": errors})
    return report


# ---------------------------------------------------------------------------
# Duality pairing algebra


@_timed
def check_duality(F_list, T_list, grid, cutoff: Expr | None = None,
                  tolerance: float = 1e-10, probe_grid=None,
                  pair_scale: float = 1.0) -> CheckReport:
    """Bilinearity, two-sided module linearity, and probe injectivity.

    ``pair_scale`` rescales one side of the module-linearity identities
    (sensitivity hook); 1.0 is the honest value.
    """
    report = CheckReport("duality")
    if not F_list or not T_list:
        report.add("empty input", 0.0, tolerance)
        return report
    b = T_list[0].bundle
    f = cutoff if cutoff is not None else b.parse_base("bump(x0/2)")

    worst_add, witness_add = 0.0, None
    for (F1, F2), T in itertools.product(itertools.combinations(F_list, 2), T_list):
        lhs = dist.hat_pair(ex.add(F1, F2), T)
        a1, a2 = dist.hat_pair(F1, T), dist.hat_pair(F2, T)
        for x in grid:
            err = abs(lhs.value(x) - (a1.value(x) + a2.value(x)))
            if err > worst_add:
                worst_add, witness_add = err, {"x": tuple(map(float, x))}
    report.add("additivity in F", worst_add, tolerance, witness_add)

    worst, witness = 0.0, None
    for F, (T1, T2) in itertools.product(F_list, itertools.combinations(T_list, 2)):
        lhs = dist.hat_pair(F, T1 + T2)
        a1, a2 = dist.hat_pair(F, T1), dist.hat_pair(F, T2)
        for x in grid:
            err = abs(lhs.value(x) - (a1.value(x) + a2.value(x)))
            if err > worst:
                worst, witness = err, {"x": tuple(map(float, x))}
    report.add("additivity in T", worst, tolerance, witness)

    worst, witness = 0.0, None
    for F, T in itertools.product(F_list, T_list):
        base = dist.hat_pair(F, T)
        via_T = dist.hat_pair(F, dist.module_action_base(f, T))
        via_F = dist.hat_pair(ex.mul(_extend(b, f), F), T)
        for x in grid:
            want = pair_scale * f.evaluate(x) * base.value(x)
            e1 = abs(via_T.value(x) - want)
            e2 = abs(via_F.value(x) - want)
            err = max(e1, e2)
            if err > worst:
                worst, witness = err, {"x": tuple(map(float, x)),
                                       "f*F^(T)": want, "F^(f*T)": via_T.value(x),
                                       "(f*F)^(T)": via_F.value(x)}
    report.add("module linearity both sides", worst, tolerance, witness)

    if probe_grid is None:
        probe_grid = [(x, tuple(0.1 * (j + 1) for j in range(b.fibre_dim)))
                      for x in grid]
    for i, F1 in enumerate(F_list):
        for j, F2 in enumerate(F_list):
            if j <= i:
                continue
            same = dist.separating_probe(F1, F2, probe_grid, bundle=b)
            agree_on_grid = all(
                abs(F1.evaluate(tuple(x) + tuple(p)) - F2.evaluate(tuple(x) + tuple(p)))
                <= 1e-12 for x, p in probe_grid)
            report.add(f"probe injectivity F{i} vs F{j}",
                       0.0 if same == agree_on_grid else 1.0, 0.5,
                       {"separating_probe": same, "grid_agreement": agree_on_grid})
    report.add("probe self-agreement", 0.0 if dist.separating_probe(
        F_list[0], F_list[0], probe_grid, bundle=b) else 1.0, 0.5)
    return report


def _extend(b: TrivialBundle, f: Expr) -> Expr:
    from .bundle import extend_base_function
    return extend_base_function(b, f)


# ---------------------------------------------------------------------------
# Support soundness


def _probe_centres_outside(box: Box, count: int, rng: np.random.Generator,
                           radius: float):
    """Deterministic points whose radius-balls avoid the box."""
    centres = []
    dim = box.dim
    ivs = box.intervals if not box.is_empty else tuple((0.0, 0.0) for _ in range(dim))
    for i in range(count):
        c = [rng.uniform(lo - 3.0, hi + 3.0) for lo, hi in ivs]
        axis = i % dim
        lo, hi = ivs[axis]
        side = rng.uniform(radius + 0.05, 2.5)
        c[axis] = (lo - side) if i % 2 == 0 else (hi + side)
        centres.append(tuple(c))
    return centres


def _bump_probe(bundle: TrivialBundle, centre, radius: float) -> Expr:
    factors = []
    dim = bundle.total_dim
    names = [f"x{i}" for i in range(bundle.base_dim)] + \
            [f"y{j}" for j in range(bundle.fibre_dim)]
    r = Fraction(radius)
    for slot, c in enumerate(centre):
        arg = ex.mul(ex.const(1 / r, dim),
                     ex.sub(ex.var(slot, dim, names[slot]),
                            ex.const(Fraction(float(c)), dim)))
        factors.append(ex.bump(arg))
    return ex.mul(*factors)


@_timed
def check_support(T: TransversalDistribution, probe_count: int = 50,
                  tolerance: float = 1e-12, seed: int = 20240501,
                  support_fn=total_support) -> CheckReport:
    """Probes supported outside the support box must evaluate to zero,
    and the base support must equal the base projection of the total one."""
    report = CheckReport("support")
    b = T.bundle
    box = support_fn(T)
    rng = np.random.default_rng(seed)
    radius = 0.25
    worst, witness = 0.0, None
    if probe_count:
        for centre in _probe_centres_outside(box, probe_count, rng, radius):
            probe = _bump_probe(b, centre, radius)
            bf = dist.evaluate(T, probe)
            xs = [centre[:b.base_dim],
                  tuple(0.5 * c for c in centre[:b.base_dim]),
                  (0.0,) * b.base_dim]
            for x in xs:
                val = abs(bf.value(x))
                if val > worst:
                    worst, witness = val, {"centre": centre,
                                           "x": tuple(map(float, x)), "value": val}
        report.add("probes outside support vanish", worst, tolerance, witness)
    projected = box.project(b.base_slots)
    structural = dist.base_support(T)
    report.add("base support equals base projection",
               0.0 if projected == structural else 1.0, 0.5,
               {"projected": projected, "base_support": structural})
    return report


# ---------------------------------------------------------------------------
# Localization


@_timed
def check_localization(T: TransversalDistribution, x,
                       tolerance: float = 1e-10,
                       probe_functions=None,
                       decompose_fn=dist.localize_decompose) -> CheckReport:
    """When T_x = 0, the decomposition exists, every factor vanishes at x,
    and the recomposition agrees with T extensionally on probes."""
    report = CheckReport("localization")
    b = T.bundle
    vx = dist.restrict(T, x)
    if not vx.is_numerically_zero():
        report.add(f"precondition not met at x={tuple(map(float, x))}",
                   0.0, 1.0, skipped=True)
        return report
    try:
        pieces = decompose_fn(T, x)
    except ExprError as err:
        report.add("decomposition failed", 1.0, tolerance, {"error": str(err)})
        return report
    worst_factor = 0.0
    for f_i, _ in pieces:
        worst_factor = max(worst_factor, abs(f_i.evaluate(x)))
    report.add("factors vanish at x", worst_factor, max(tolerance, 1e-14))
    R = dist.recompose(pieces, b)
    if probe_functions is None:
        probe_functions = [b.parse_total("1"),
                           b.parse_total("x0*y0 + y0^2"),
                           b.parse_total("bump(x0)*bump(y0)")]
    worst, witness = 0.0, None
    grid = [tuple(x), tuple(0.4 + xi for xi in x), tuple(-0.3 + xi for xi in x)]
    for G in probe_functions:
        bfT = dist.evaluate(T, G)
        bfR = dist.evaluate(R, G)
        for pt in grid:
            err = abs(bfT.value(pt) - bfR.value(pt))
            if err > worst:
                worst, witness = err, {"x": pt, "G": str(G)}
    report.add("recomposition matches T on probes", worst, tolerance, witness)
    vzero = dist.restrict(R, x)
    g_probes = [b.parse_fibre("1"), b.parse_fibre("y0"), b.parse_fibre("y0^2")]
    worst = max(abs(dist.pair(vzero, g)) for g in g_probes)
    report.add("recomposed restriction vanishes at x", worst, max(tolerance, 1e-12))
    return report

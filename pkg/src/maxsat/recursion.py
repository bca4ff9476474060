"""Scalar systems and their uncoupled, coupled, modified, and translated
recursions.

A system is a pair (f, g) with f non-decreasing on [0, y_max], g strictly
increasing on [0, x_max], and y_max = g(x_max). The uncoupled update is
h(x) = f(g(x)); the coupled update places M = N + w - 1 copies on a line and
averages over a width-w window with an implicit zero boundary:

    x_i <- sum_j A_ji f( sum_k A_jk g(x_k) ),   A_jk = 1/w for 0 <= k-j < w.

All callables attached to a system must accept scalars and numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConstructionError,
    DomainError,
    NonConvergenceError,
    ShapeError,
)
from .numerics import adaptive_simpson, bisect_root, golden_min

__all__ = [
    "ScalarSystem",
    "CouplingSpec",
    "CoupledProfile",
    "CoupledRun",
    "IterationConfig",
    "make_system",
    "validate_system",
    "uncoupled_step",
    "uncoupled_fixed_point",
    "apply_A",
    "apply_At",
    "coupled_step",
    "coupled_fixed_point",
    "modified_coupled_fixed_point",
    "copy_midpoint_tail",
    "midpoint_index",
    "translate_system",
    "enumerate_fixed_points",
]

# Absolute slack allowed before a clamp is treated as a real domain violation.
_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class ScalarSystem:
    """The pair (f, g) with derivatives, domain bounds, and antiderivatives.

    F and G are antiderivatives of f and g with F(0) = G(0) = 0, either in
    closed form or quadrature-backed. The *_sup fields are optional exact
    suprema of |f'|, |g'|, |g''| over their domains; when absent a grid
    maximum (inflated by 1%) is used by consumers that need them.
    """

    f: Callable
    g: Callable
    x_max: float
    y_max: float
    f_prime: Callable
    g_prime: Callable
    g_second: Optional[Callable]
    F: Callable
    G: Callable
    f_prime_sup: Optional[float] = None
    g_prime_sup: Optional[float] = None
    g_second_sup: Optional[float] = None
    strictly_increasing_f: bool = False
    name: str = ""

    def h(self, x):
        """One uncoupled update f(g(x)) without domain checks."""
        return self.f(_clamp(self.g(x), 0.0, self.y_max))


@dataclass(frozen=True)
class CouplingSpec:
    """Coupling layout: N window positions, width w, M = N + w - 1 states."""

    N: int
    w: int

    def __post_init__(self):
        if self.N < 1 or self.w < 1:
            raise ConstructionError(f"need N >= 1 and w >= 1, got N={self.N}, w={self.w}")

    @property
    def M(self) -> int:
        return self.N + self.w - 1


@dataclass(frozen=True)
class IterationConfig:
    tol: float = 1e-12
    max_iters: int = 10**6
    record_trajectory: bool = False

    def __post_init__(self):
        if self.tol <= 0:
            raise ConstructionError("tol must be > 0")
        if self.max_iters < 1:
            raise ConstructionError("max_iters must be >= 1")


@dataclass(frozen=True)
class CoupledProfile:
    """Length-M state vector together with its coupling layout."""

    values: np.ndarray
    spec: CouplingSpec

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.spec.M,):
            raise ShapeError(f"profile length {vals.shape} does not match M={self.spec.M}")
        object.__setattr__(self, "values", vals)

    @property
    def max(self) -> float:
        return float(np.max(self.values))

    @property
    def midpoint(self) -> float:
        return float(self.values[midpoint_index(self.spec.M)])


@dataclass(frozen=True)
class CoupledRun:
    profile: CoupledProfile
    iters: int
    trajectory: Optional[list] = None


def _clamp(values, lo, hi, what: str = "value"):
    arr = np.asarray(values, dtype=float)
    over = float(np.max(arr - hi, initial=0.0))
    under = float(np.max(lo - arr, initial=0.0))
    if over > _CLAMP_TOL or under > _CLAMP_TOL:
        raise DomainError(f"{what} escapes [{lo}, {hi}] by {max(over, under):.3e}")
    clipped = np.clip(arr, lo, hi)
    return float(clipped) if np.ndim(values) == 0 else clipped


def _fd_derivative(fn, lo, hi, step=1e-7):
    """Central finite difference, shrinking to one-sided at the endpoints."""

    def deriv(x):
        arr = np.asarray(x, dtype=float)
        hl = np.minimum(step, arr - lo)
        hr = np.minimum(step, hi - arr)
        num = np.asarray(fn(arr + hr), dtype=float) - np.asarray(fn(arr - hl), dtype=float)
        out = num / (hr + hl)
        return float(out) if arr.ndim == 0 else out

    return deriv


def _quad_antiderivative(fn, tol=1e-11):
    """Antiderivative with value 0 at 0, via adaptive Simpson per call."""

    def anti(y):
        arr = np.asarray(y, dtype=float)
        if arr.ndim == 0:
            return adaptive_simpson(fn, 0.0, float(arr), tol).value
        flat = [adaptive_simpson(fn, 0.0, float(v), tol).value for v in arr.ravel()]
        return np.asarray(flat).reshape(arr.shape)

    return anti


def make_system(f, g, x_max, *, f_prime=None, g_prime=None, g_second=None,
                F=None, G=None, f_prime_sup=None, g_prime_sup=None,
                g_second_sup=None, strictly_increasing_f=False, name="",
                validate=True) -> ScalarSystem:
    """Assemble a ScalarSystem, filling gaps with finite differences and
    quadrature-backed antiderivatives, then grid-check the invariants."""
    y_max = float(g(x_max))
    sys = ScalarSystem(
        f=f,
        g=g,
        x_max=float(x_max),
        y_max=y_max,
        f_prime=f_prime if f_prime is not None else _fd_derivative(f, 0.0, y_max),
        g_prime=g_prime if g_prime is not None else _fd_derivative(g, 0.0, x_max),
        g_second=g_second,
        F=F if F is not None else _quad_antiderivative(f),
        G=G if G is not None else _quad_antiderivative(g),
        f_prime_sup=f_prime_sup,
        g_prime_sup=g_prime_sup,
        g_second_sup=g_second_sup,
        strictly_increasing_f=strictly_increasing_f,
        name=name,
    )
    if validate:
        validate_system(sys)
    return sys


def validate_system(sys: ScalarSystem, grid_n: int = 1000) -> None:
    """Grid checks of the system invariants; raises ConstructionError."""
    problems = []
    xs = np.linspace(0.0, sys.x_max, grid_n)
    ys = np.linspace(0.0, sys.y_max, grid_n)
    gx = np.asarray(sys.g(xs), dtype=float)
    fy = np.asarray(sys.f(ys), dtype=float)

    if abs(sys.y_max - float(sys.g(sys.x_max))) > 1e-12:
        problems.append("y_max != g(x_max)")
    if np.min(np.diff(fy)) < -1e-9:
        problems.append("f is decreasing somewhere on [0, y_max]")
    if np.min(np.diff(gx)) < -1e-9:
        problems.append("g is decreasing somewhere on [0, x_max]")
    # strict increase via the analytic slope, whose zeros may only sit at
    # the domain endpoints
    if np.min(np.asarray(sys.g_prime(xs[1:-1]), dtype=float)) <= 0.0:
        problems.append("g' is not positive on the interior of [0, x_max]")
    if np.min(fy) < -_CLAMP_TOL or np.max(fy) > sys.x_max + _CLAMP_TOL:
        problems.append("f does not map [0, y_max] into [0, x_max]")
    if np.min(gx) < -_CLAMP_TOL or np.max(gx) > sys.y_max + _CLAMP_TOL:
        problems.append("g does not map [0, x_max] into [0, y_max]")

    # F' = f and G' = g, relative tolerance 1e-6 with an absolute floor.
    def check_anti(anti, fn, hi, label):
        pts = np.linspace(hi * 0.05, hi * 0.95, 19)
        step = hi * 1e-6
        fd = (np.asarray(anti(pts + step)) - np.asarray(anti(pts - step))) / (2 * step)
        ref = np.asarray(fn(pts), dtype=float)
        err = np.abs(fd - ref) / np.maximum(np.abs(ref), 1e-3)
        if np.max(err) > 1e-5:
            problems.append(f"{label} mismatch: max rel err {np.max(err):.2e}")

    if sys.y_max > 0:
        check_anti(sys.F, sys.f, sys.y_max, "F' vs f")
    check_anti(sys.G, sys.g, sys.x_max, "G' vs g")

    if problems:
        raise ConstructionError(f"system {sys.name or '<anonymous>'}: " + "; ".join(problems))


def uncoupled_step(sys: ScalarSystem, x):
    """One update of the uncoupled recursion, h(x) = f(g(x))."""
    x = _clamp(x, 0.0, sys.x_max, "x")
    return sys.h(x)


def uncoupled_fixed_point(sys: ScalarSystem, x0: float,
                          cfg: IterationConfig = IterationConfig()):
    """Iterate h from x0 until the step is below cfg.tol.

    Returns (x_inf, iterations). Raises NonConvergenceError carrying the
    last iterate when the cap is hit.
    """
    x = float(_clamp(x0, 0.0, sys.x_max, "x0"))
    for it in range(1, cfg.max_iters + 1):
        xn = float(sys.h(x))
        if abs(xn - x) <= cfg.tol:
            return xn, it
        x = xn
    raise NonConvergenceError(
        f"uncoupled recursion did not converge in {cfg.max_iters} iterations",
        last=x, iters=cfg.max_iters,
    )


def _kernel(w: int) -> np.ndarray:
    return np.full(w, 1.0 / w)


def apply_A(spec: CouplingSpec, v) -> np.ndarray:
    """Window average: [Av]_j = (1/w) sum_{k=j..j+w-1} v_k, length N."""
    v = np.asarray(v, dtype=float)
    if v.shape != (spec.M,):
        raise ShapeError(f"apply_A expects length M={spec.M}, got {v.shape}")
    return np.convolve(v, _kernel(spec.w), mode="valid")


def apply_At(spec: CouplingSpec, u) -> np.ndarray:
    """Adjoint window average with the zero boundary, length M."""
    u = np.asarray(u, dtype=float)
    if u.shape != (spec.N,):
        raise ShapeError(f"apply_At expects length N={spec.N}, got {u.shape}")
    return np.convolve(u, _kernel(spec.w), mode="full")


def _coupled_step_values(sys: ScalarSystem, x: np.ndarray, kern: np.ndarray) -> np.ndarray:
    y = np.asarray(sys.g(x), dtype=float)
    z = np.convolve(y, kern, mode="valid")
    z = _clamp(z, 0.0, sys.y_max, "averaged g-value")
    u = np.asarray(sys.f(z), dtype=float)
    return np.convolve(u, kern, mode="full")


def coupled_step(sys: ScalarSystem, profile: CoupledProfile) -> CoupledProfile:
    """One synchronous update of the coupled recursion."""
    x = _clamp(profile.values, 0.0, sys.x_max, "profile")
    out = _coupled_step_values(sys, x, _kernel(profile.spec.w))
    return CoupledProfile(out, profile.spec)


def midpoint_index(M: int) -> int:
    """0-based index of the spatial midpoint ceil(M/2) (1-based)."""
    return (M + 1) // 2 - 1


def copy_midpoint_tail(values: np.ndarray) -> np.ndarray:
    """Overwrite every entry past the midpoint with the midpoint value."""
    out = np.array(values, dtype=float)
    i0 = midpoint_index(out.shape[0])
    out[i0 + 1:] = out[i0]
    return out


def _run_coupled(sys: ScalarSystem, spec: CouplingSpec, cfg: IterationConfig,
                 pin_tail: bool) -> CoupledRun:
    kern = _kernel(spec.w)
    x = np.full(spec.M, sys.x_max, dtype=float)
    trajectory = [x.copy()] if cfg.record_trajectory else None
    for it in range(1, cfg.max_iters + 1):
        xn = _coupled_step_values(sys, x, kern)
        if pin_tail:
            xn = copy_midpoint_tail(xn)
        step = float(np.max(np.abs(xn - x)))
        x = xn
        if trajectory is not None:
            trajectory.append(x.copy())
        if step <= cfg.tol:
            return CoupledRun(CoupledProfile(x, spec), it, trajectory)
    raise NonConvergenceError(
        f"coupled recursion did not converge in {cfg.max_iters} iterations",
        last=CoupledProfile(x, spec), iters=cfg.max_iters,
    )


def coupled_fixed_point(sys: ScalarSystem, spec: CouplingSpec,
                        cfg: IterationConfig = IterationConfig()) -> CoupledRun:
    """Run the coupled recursion from the all-x_max start to its fixed point."""
    return _run_coupled(sys, spec, cfg, pin_tail=False)


def modified_coupled_fixed_point(sys: ScalarSystem, spec: CouplingSpec,
                                 cfg: IterationConfig = IterationConfig()) -> CoupledRun:
    """Coupled recursion with the midpoint value copied over the right half
    after each step; dominates the plain recursion entrywise."""
    return _run_coupled(sys, spec, cfg, pin_tail=True)


def translate_system(sys: ScalarSystem, x_tilde: float) -> ScalarSystem:
    """Shift a fixed point x~ of the uncoupled recursion to the origin.

    The translated pair is f~(y) = f(y + g(x~)) - x~ and
    g~(x) = g(x + x~) - g(x~) on [0, x_max - x~], with antiderivatives fixed
    up so that the translated potential is U_s(x + x~) - U_s(x~).
    """
    x_tilde = float(x_tilde)
    if not 0.0 <= x_tilde <= sys.x_max:
        raise DomainError(f"x_tilde={x_tilde} outside [0, {sys.x_max}]")
    if abs(x_tilde - float(sys.h(x_tilde))) > 1e-10:
        raise DomainError(f"x_tilde={x_tilde} is not a fixed point")
    g_shift = float(sys.g(x_tilde))
    F_shift = float(sys.F(g_shift))
    G_shift = float(sys.G(x_tilde))
    new_x_max = sys.x_max - x_tilde
    new_y_max = sys.y_max - g_shift

    def f(y):
        return sys.f(y + g_shift) - x_tilde

    def g(x):
        return sys.g(x + x_tilde) - g_shift

    def F(y):
        return sys.F(y + g_shift) - y * x_tilde - F_shift

    def G(x):
        return sys.G(x + x_tilde) - x * g_shift - G_shift

    return ScalarSystem(
        f=f,
        g=g,
        x_max=new_x_max,
        y_max=new_y_max,
        f_prime=lambda y: sys.f_prime(y + g_shift),
        g_prime=lambda x: sys.g_prime(x + x_tilde),
        g_second=(lambda x: sys.g_second(x + x_tilde)) if sys.g_second is not None else None,
        F=F,
        G=G,
        f_prime_sup=sys.f_prime_sup,
        g_prime_sup=sys.g_prime_sup,
        g_second_sup=sys.g_second_sup,
        strictly_increasing_f=sys.strictly_increasing_f,
        name=f"{sys.name}~{x_tilde:g}" if sys.name else "",
    )


def _refine_tangential(d, lo, hi, tol=1e-12) -> float:
    return golden_min(lambda x: abs(float(d(x))), lo, hi, tol)


def fixed_points_of(h, x_max: float, grid_n: int = 10**4,
                    tangent_tol: float = 1e-9):
    """Scan x - h(x) on a grid for roots.

    Sign changes are refined by bisection to 1e-12; local minima of |x - h(x)|
    below tangent_tol that do not bracket a sign change are refined by
    golden section and flagged tangential. Returns a list of
    (x, is_tangential), sorted and deduplicated.
    """
    if grid_n < 2:
        raise DomainError("grid_n must be >= 2")
    xs = np.linspace(0.0, x_max, int(grid_n))
    d = np.asarray(h(xs), dtype=float)
    d = xs - d
    found: list[tuple[float, bool]] = []

    def dfun(x):
        return float(x - h(x))

    zero_nodes = np.where(d == 0.0)[0]
    for i in zero_nodes:
        found.append((float(xs[i]), False))

    prod = d[:-1] * d[1:]
    for i in np.where(prod < 0.0)[0]:
        root = bisect_root(dfun, float(xs[i]), float(xs[i + 1]), tol=1e-12)
        found.append((root, False))

    crossing_cells = set(np.where(prod <= 0.0)[0])
    absd = np.abs(d)
    interior = np.arange(1, len(xs) - 1)
    local_min = interior[(absd[interior] <= absd[interior - 1])
                         & (absd[interior] <= absd[interior + 1])
                         & (absd[interior] < tangent_tol)
                         & (absd[interior] > 0.0)]
    for i in local_min:
        if (i - 1) in crossing_cells or i in crossing_cells:
            continue
        x = _refine_tangential(dfun, float(xs[i - 1]), float(xs[i + 1]))
        if abs(dfun(x)) < tangent_tol:
            found.append((x, True))

    found.sort()
    out: list[tuple[float, bool]] = []
    for x, tang in found:
        if out and abs(x - out[-1][0]) <= 1e-9:
            continue
        out.append((x, tang))
    return out


def enumerate_fixed_points(sys: ScalarSystem, grid_n: int = 10**4,
                           with_flags: bool = False):
    """All fixed points of h(x) = f(g(x)) on [0, x_max], sorted ascending.

    With with_flags=True each entry is (x, is_tangential); tangential points
    are grazing roots that bisection cannot bracket.
    """
    pts = fixed_points_of(sys.h, sys.x_max, grid_n)
    if with_flags:
        return pts
    return [x for x, _ in pts]

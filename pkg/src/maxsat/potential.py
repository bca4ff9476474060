"""Potential functions of scalar and coupled recursions.

The single-system potential is

    U_s(x) = x g(x) - G(x) - F(g(x)),        U_s'(x) = (x - f(g(x))) g'(x),

so its local minima sit at fixed points of h = f o g and the update never
increases it. The coupled potential U_c extends this to length-M profiles
and its gradient is g'(x) * (x - A^T f(A g(x))) componentwise. The energy
gap Delta (potential excess of fixed points above the global minimizer) and
the Hessian constant K control the coupling width at which the coupled
recursion collapses to the minimizer:  w0 = K * x_max^2 / (2 Delta).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, ShapeError, UnsupportedOperationError
from .numerics import golden_min
from .recursion import (
    CouplingSpec,
    ScalarSystem,
    apply_A,
    apply_At,
    fixed_points_of,
)

__all__ = [
    "F_of",
    "G_of",
    "U_s",
    "U_s_prime",
    "V_s",
    "MinimizeResult",
    "minimize_Us",
    "minimize_potential",
    "U_c",
    "grad_Uc",
    "K_fg_bound",
    "energy_gap_delta",
    "w0_bound",
    "FiniteWCondition",
    "check_finite_w_conditions",
    "PotentialReport",
    "potential_report",
]

#: two minimizers are tied when their potential values differ by less
VALUE_TOL = 1e-10


def F_of(sys: ScalarSystem, y):
    """Antiderivative of f with F(0) = 0."""
    return sys.F(y)


def G_of(sys: ScalarSystem, x):
    """Antiderivative of g with G(0) = 0."""
    return sys.G(x)


def U_s(sys: ScalarSystem, x):
    """Single-system potential x g(x) - G(x) - F(g(x))."""
    gx = sys.g(x)
    return x * gx - sys.G(x) - sys.F(gx)


def U_s_prime(sys: ScalarSystem, x):
    """Derivative (x - f(g(x))) g'(x) of the single-system potential."""
    return (x - sys.h(x)) * sys.g_prime(x)


def V_s(sys: ScalarSystem, y):
    """Half-iteration potential y f(y) - F(y) - G(f(y)).

    Defined for systems whose f is strictly increasing (flagged on the
    system); the swapped recursion y <- g(f(y)) shares its fixed points and
    minimizers with the original through g.
    """
    if not sys.strictly_increasing_f:
        raise UnsupportedOperationError(
            "half-iteration potential needs the strictly-increasing-f flag")
    fy = sys.f(y)
    return y * fy - sys.F(y) - sys.G(fy)


@dataclass(frozen=True)
class MinimizeResult:
    x_lower: float
    x_upper: float
    value: float
    minimizers: tuple


def minimize_potential(u_vec: Callable, h_vec: Callable, x_max: float,
                       grid_n: int = 10**4, value_tol: float = VALUE_TOL,
                       x_tol: float = 1e-12) -> MinimizeResult:
    """Global minimum of a potential on [0, x_max].

    Scans a grid, golden-refines every grid-local minimum, and seeds the
    candidate set with all fixed points of h (every local minimum of the
    potential is one, so narrow basins between grid nodes are still found)
    plus both endpoints. Minimizers are all candidates whose value is within
    value_tol of the best.
    """
    xs = np.linspace(0.0, x_max, int(grid_n))
    us = np.asarray(u_vec(xs), dtype=float)

    cands = [0.0, float(x_max)]
    interior = np.arange(1, len(xs) - 1)
    # strict decrease on the left picks one entry per flat bottom and keeps
    # rounding plateaus from spawning refinements
    local = interior[(us[interior] < us[interior - 1]) & (us[interior] <= us[interior + 1])]
    # only near-minimal grid minima are worth refining: anything farther
    # than refine_margin above the grid minimum cannot become the global
    # minimum, and basins the grid misses entirely are still reached
    # through the fixed-point seeds below (all local minima are fixed
    # points). Plateau jitter on flat stretches is excluded the same way.
    refine_margin = 1e-6
    grid_min = float(np.min(us))
    local = [i for i in local if us[i] <= grid_min + refine_margin]
    local.sort(key=lambda i: us[i])
    for i in local[:256]:
        cands.append(golden_min(lambda t: float(u_vec(t)), float(xs[i - 1]),
                                float(xs[i + 1]), x_tol))
    for x, _tang in fixed_points_of(h_vec, x_max, grid_n):
        cands.append(x)

    cand_arr = np.asarray(sorted(set(cands)), dtype=float)
    vals = np.asarray(u_vec(cand_arr), dtype=float)
    vmin = float(np.min(vals))
    mins: list[float] = []
    for x, v in zip(cand_arr, vals):
        if v <= vmin + value_tol:
            if mins and abs(x - mins[-1]) <= 1e-9:
                continue
            mins.append(float(x))
    return MinimizeResult(mins[0], mins[-1], vmin, tuple(mins))


def minimize_Us(sys: ScalarSystem, grid_n: int = 10**4) -> MinimizeResult:
    """Minimize the single-system potential over [0, x_max]."""
    return minimize_potential(lambda x: U_s(sys, x), sys.h, sys.x_max, grid_n)


def _check_profile(spec: CouplingSpec, values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (spec.M,):
        raise ShapeError(f"profile length {arr.shape} does not match M={spec.M}")
    return arr


def U_c(sys: ScalarSystem, spec: CouplingSpec, values) -> float:
    """Coupled potential sum_i (g(x_i) x_i - G(x_i)) - sum_j F([A g(x)]_j)."""
    x = _check_profile(spec, values)
    gx = np.asarray(sys.g(x), dtype=float)
    z = apply_A(spec, gx)
    return float(np.sum(gx * x - np.asarray(sys.G(x), dtype=float))
                 - np.sum(np.asarray(sys.F(z), dtype=float)))


def grad_Uc(sys: ScalarSystem, spec: CouplingSpec, values) -> np.ndarray:
    """Gradient of U_c: entry k is g'(x_k) (x_k - [A^T f(A g(x))]_k)."""
    x = _check_profile(spec, values)
    gx = np.asarray(sys.g(x), dtype=float)
    hx = apply_At(spec, np.asarray(sys.f(apply_A(spec, gx)), dtype=float))
    return np.asarray(sys.g_prime(x), dtype=float) * (x - hx)


def _sup_abs(fn, lo: float, hi: float, n: int = 10**5) -> float:
    xs = np.linspace(lo, hi, n)
    return float(np.max(np.abs(np.asarray(fn(xs), dtype=float))))


def K_fg_bound(sys: ScalarSystem) -> float:
    """Uniform bound ||g''|| x_max + ||g'|| + ||f'|| ||g'||^2 on the coupled
    Hessian norm. Exact per-system suprema are used when the system carries
    them; otherwise a 1e5-point grid maximum inflated by 1% (the grid can
    only under-estimate a supremum)."""
    if sys.g_second is None and sys.g_second_sup is None:
        raise UnsupportedOperationError("K_fg_bound needs g'' or a closed-form sup")
    infl = 1.01
    fp = sys.f_prime_sup if sys.f_prime_sup is not None else \
        infl * _sup_abs(sys.f_prime, 0.0, sys.y_max)
    gp = sys.g_prime_sup if sys.g_prime_sup is not None else \
        infl * _sup_abs(sys.g_prime, 0.0, sys.x_max)
    gpp = sys.g_second_sup if sys.g_second_sup is not None else \
        infl * _sup_abs(sys.g_second, 0.0, sys.x_max)
    return gpp * sys.x_max + gp + fp * gp * gp


def energy_gap_delta(sys: ScalarSystem, delta_offset: float = 0.0,
                     grid_n: int = 10**4) -> float:
    """Minimum of U_s(x) - U_s(x_upper*) over fixed points x > x_upper* +
    delta_offset; +inf when that set is empty."""
    if delta_offset < 0:
        raise DomainError("delta_offset must be >= 0")
    res = minimize_Us(sys, grid_n)
    xbar = res.x_upper
    base = float(U_s(sys, xbar))
    # refinement noise: a fixed point within 1e-9 of the minimizer is the
    # minimizer itself, not a point strictly above it
    cut = xbar + max(delta_offset, 1e-9)
    gaps = [float(U_s(sys, x)) - base
            for x, _tang in fixed_points_of(sys.h, sys.x_max, grid_n)
            if x > cut]
    return min(gaps) if gaps else math.inf


def w0_bound(sys: ScalarSystem, delta_offset: float = 0.0) -> float:
    """Coupling width beyond which the coupled fixed point collapses:
    K * x_max^2 / (2 Delta). Returns +inf when Delta = 0 and 0 when
    Delta = +inf (the bound is vacuous with no fixed point above)."""
    delta = energy_gap_delta(sys, delta_offset)
    if math.isinf(delta):
        return 0.0
    if delta <= 0.0:
        return math.inf
    return K_fg_bound(sys) * sys.x_max**2 / (2.0 * delta)


class FiniteWCondition(enum.Enum):
    FINITE_BY_GAP = "finite-by-gap"
    FINITE_BY_STRICT_DESCENT = "finite-by-strict-descent"
    FINITE_BY_STABILITY = "finite-by-stability"
    UNKNOWN = "unknown"


def check_finite_w_conditions(sys: ScalarSystem, gamma: float = 1e-3,
                              grid_n: int = 10**4) -> FiniteWCondition:
    """Classify whether a finite coupling width provably suffices at the
    potential minimizer x_upper*.

    Checks, in order: a tie-guard (a multi-valued minimizer set means the
    gap vanishes and nothing can be concluded), the derivative condition
    h'(0) < 1 when the minimizer is the origin, strict descent h(x) < x on
    (x_upper*, x_upper* + gamma], and finally isolation of x_upper* in the
    enumerated fixed-point set. Analyticity-style arguments are not
    decidable numerically and fall through to UNKNOWN.
    """
    res = minimize_Us(sys, grid_n)
    if res.x_upper - res.x_lower > 1e-6:
        return FiniteWCondition.UNKNOWN
    xbar = res.x_upper

    if xbar <= 1e-9:
        slope = float(sys.f_prime(sys.g(xbar))) * float(sys.g_prime(xbar))
        if slope < 1.0 - 1e-9:
            return FiniteWCondition.FINITE_BY_STABILITY

    hi = min(xbar + gamma, sys.x_max)
    if hi > xbar:
        xs = np.linspace(xbar, hi, 1001)[1:]
        if np.all(np.asarray(sys.h(xs), dtype=float) < xs):
            return FiniteWCondition.FINITE_BY_STRICT_DESCENT

    above = [x for x, _tang in fixed_points_of(sys.h, sys.x_max, grid_n)
             if x > xbar + 1e-9]
    if not above or min(above) > xbar + gamma:
        return FiniteWCondition.FINITE_BY_GAP
    return FiniteWCondition.UNKNOWN


@dataclass(frozen=True)
class PotentialReport:
    x_lower_star: float
    x_upper_star: float
    min_value: float
    minimizers: tuple
    delta_gap: float
    K_fg: float
    w0: float


def potential_report(sys: ScalarSystem, delta_offset: float = 0.0,
                     grid_n: int = 10**4) -> PotentialReport:
    """Bundle the minimizer set, energy gap, Hessian constant, and w0."""
    res = minimize_Us(sys, grid_n)
    delta = energy_gap_delta(sys, delta_offset, grid_n)
    k = K_fg_bound(sys)
    if math.isinf(delta):
        w0 = 0.0
    elif delta <= 0.0:
        w0 = math.inf
    else:
        w0 = k * sys.x_max**2 / (2.0 * delta)
    return PotentialReport(res.x_lower, res.x_upper, res.value, res.minimizers,
                           delta, k, w0)

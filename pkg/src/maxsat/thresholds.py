"""Parameter-dependent analysis: the potential envelope Psi(eps), the
single-system / stability / coupled / Maxwell thresholds, the fixed-point
curve (eps(x), Q(x)), and EXIT-style curves.

A parameterized family supplies f(x; eps), g(x; eps), their x- and
eps-partials, and antiderivatives F, G (in x, with F(0) = G(0) = 0) plus
eps-partials of those. All callables must broadcast elementwise over numpy
arrays in both arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConstructionError, DomainError, ThresholdUndefinedError
from .numerics import adaptive_simpson, bisect_root, bisect_sup
from .potential import MinimizeResult, minimize_potential
from .recursion import ScalarSystem, make_system

__all__ = [
    "ParamSystem",
    "validate_param_system",
    "minimize_us_at",
    "Psi",
    "x_bar_star",
    "x_lower_star",
    "eps_single",
    "eps_stab",
    "eps_c",
    "eps_of_x",
    "eps_of_x_vec",
    "eps_prime_of_x",
    "Q_of_x",
    "Q_integral_check",
    "xf_intervals",
    "maxwell_threshold",
    "psi_exit",
    "psi_integral",
    "find_xbar_jumps",
    "FixedPointCurve",
    "ebp_curve",
    "MapExitCurve",
    "map_exit_curve",
    "inverse_Psi_threshold",
    "ThresholdReport",
    "threshold_report",
]


@dataclass(frozen=True)
class ParamSystem:
    """Family of scalar systems indexed by a parameter eps in [0, eps_max].

    Flags describe structural facts the caller asserts (and the builders
    grid-check): ``proper`` means the update h = f(g(.)) is strictly
    increasing in eps on the open x-domain, ``zero_is_fixed_point`` means
    h(0; eps) = 0 for every eps.
    """

    f: Callable
    g: Callable
    f_x: Callable
    g_x: Callable
    g_xx: Callable
    f_eps: Callable
    g_eps: Callable
    F: Callable
    G: Callable
    F_eps: Callable
    G_eps: Callable
    x_max: float = 1.0
    eps_max: float = 1.0
    proper: bool = False
    strict_stability: bool = False
    unconditionally_stable: bool = False
    zero_is_fixed_point: bool = False
    exit_fn: Optional[Callable] = None
    eps_of_x_closed: Optional[Callable] = None
    h_prime0: Optional[Callable] = None
    trial_entropy: Optional[Callable] = None
    trial_entropy_prime: Optional[Callable] = None
    sup_f_x: Optional[Callable] = None
    sup_g_x: Optional[Callable] = None
    sup_g_xx: Optional[Callable] = None
    slice_strict_f: Optional[Callable] = None
    name: str = ""

    def h(self, x, eps):
        return self.f(self.g(x, eps), eps)

    def h_x(self, x, eps):
        return self.f_x(self.g(x, eps), eps) * self.g_x(x, eps)

    def h_eps(self, x, eps):
        g = self.g(x, eps)
        return self.f_x(g, eps) * self.g_eps(x, eps) + self.f_eps(g, eps)

    def u(self, x, eps):
        """Potential slice U_s(x; eps)."""
        g = self.g(x, eps)
        return x * g - self.G(x, eps) - self.F(g, eps)

    def u_eps(self, x, eps):
        """eps-partial of the potential at fixed x."""
        g = self.g(x, eps)
        return ((x - self.f(g, eps)) * self.g_eps(x, eps)
                - self.G_eps(x, eps) - self.F_eps(g, eps))

    def exit_value(self, x, eps):
        """EXIT functional along the recursion state.

        Families override with their conventional normalization; the
        fallback is G_eps + F_eps(g(.)), the magnitude of the potential's
        eps-slope at a fixed point.
        """
        if self.exit_fn is not None:
            return self.exit_fn(x, eps)
        return self.G_eps(x, eps) + self.F_eps(self.g(x, eps), eps)

    def at_eps(self, eps: float, validate: bool = False) -> ScalarSystem:
        """Freeze the parameter and return the scalar system slice."""
        e = float(eps)
        if not 0.0 <= e <= self.eps_max:
            raise DomainError(f"eps={e} outside [0, {self.eps_max}]")
        strict_f = bool(self.slice_strict_f(e)) if self.slice_strict_f else False
        return make_system(
            f=lambda y, _e=e: self.f(y, _e),
            g=lambda x, _e=e: self.g(x, _e),
            x_max=self.x_max,
            f_prime=lambda y, _e=e: self.f_x(y, _e),
            g_prime=lambda x, _e=e: self.g_x(x, _e),
            g_second=lambda x, _e=e: self.g_xx(x, _e),
            F=lambda y, _e=e: self.F(y, _e),
            G=lambda x, _e=e: self.G(x, _e),
            f_prime_sup=self.sup_f_x(e) if self.sup_f_x else None,
            g_prime_sup=self.sup_g_x(e) if self.sup_g_x else None,
            g_second_sup=self.sup_g_xx(e) if self.sup_g_xx else None,
            strictly_increasing_f=strict_f,
            name=f"{self.name}@eps={e:g}" if self.name else f"@eps={e:g}",
            validate=validate,
        )


def validate_param_system(psys: ParamSystem, nx: int = 201, ne: int = 9) -> None:
    """Grid admissibility checks for a family; raises ConstructionError.

    Monotonicity in x and eps, strict increase of g in x, non-negative and
    x-non-decreasing F_eps / G_eps, and (when flagged proper) positivity of
    the eps-partial of the update on the open domain. eps = 0 is excluded
    from the properness grid since several families are degenerate exactly
    at zero.
    """
    problems = []
    xs = np.linspace(0.0, psys.x_max, nx)
    es = np.linspace(0.0, psys.eps_max, ne)
    X, E = np.meshgrid(xs, es, indexing="ij")

    gx = np.asarray(psys.g(X, E), dtype=float)
    fx = np.asarray(psys.f(X, E), dtype=float)
    if np.min(np.diff(gx, axis=0)) < -1e-9:
        problems.append("g decreasing in x")
    # strict increase via the analytic slope at interior points; the slope
    # may vanish at the x-endpoints and exactly at eps_max (e.g. a fully
    # erased channel), so those are excluded
    gxp = np.asarray(psys.g_x(X[1:-1, :-1], E[1:-1, :-1]), dtype=float)
    if np.min(gxp) <= 0.0:
        problems.append("g' not positive on the interior grid")
    if np.min(np.diff(fx, axis=0)) < -1e-9:
        problems.append("f decreasing in x")
    if ne > 1:
        if np.min(np.diff(gx, axis=1)) < -1e-9:
            problems.append("g decreasing in eps")
        if np.min(np.diff(fx, axis=1)) < -1e-9:
            problems.append("f decreasing in eps")

    fe = np.asarray(psys.F_eps(X, E), dtype=float)
    ge = np.asarray(psys.G_eps(X, E), dtype=float)
    if np.min(fe) < -1e-9 or np.min(ge) < -1e-9:
        problems.append("F_eps or G_eps negative")
    if np.min(np.diff(fe, axis=0)) < -1e-9 or np.min(np.diff(ge, axis=0)) < -1e-9:
        problems.append("F_eps or G_eps decreasing in x")

    if psys.proper:
        xi = xs[xs > 0]
        ei = es[es > 0]
        Xi, Ei = np.meshgrid(xi, ei, indexing="ij")
        he = np.asarray(psys.h_eps(Xi, Ei), dtype=float)
        if np.min(he) <= 0.0:
            problems.append("proper flag set but h_eps not positive on the interior grid")

    if problems:
        raise ConstructionError(f"family {psys.name or '<anonymous>'}: " + "; ".join(problems))


def minimize_us_at(psys: ParamSystem, eps: float, grid_n: int = 10**4) -> MinimizeResult:
    """Minimize the potential slice at one parameter value."""
    e = float(eps)
    return minimize_potential(lambda x: psys.u(x, e), lambda x: psys.h(x, e),
                              psys.x_max, grid_n)


def Psi(psys: ParamSystem, eps: float, grid_n: int = 10**4) -> float:
    """Minimum of the potential slice, min_x U_s(x; eps)."""
    return minimize_us_at(psys, eps, grid_n).value


def x_bar_star(psys: ParamSystem, eps: float, grid_n: int = 10**4) -> float:
    """Largest minimizer of the potential slice."""
    return minimize_us_at(psys, eps, grid_n).x_upper


def x_lower_star(psys: ParamSystem, eps: float, grid_n: int = 10**4) -> float:
    """Smallest minimizer of the potential slice."""
    return minimize_us_at(psys, eps, grid_n).x_lower


_X_TINY = 1e-9


def eps_single(psys: ParamSystem, tol: float = 1e-9, grid_n: int = 10**4) -> float:
    """Largest eps below which the uncoupled recursion converges to zero:
    sup{eps : h(x; eps) < x on (0, x_max]}, located by bisection over a
    grid predicate."""
    xs = np.linspace(_X_TINY, psys.x_max, grid_n)

    def pred(e: float) -> bool:
        return bool(np.all(np.asarray(psys.h(xs, e), dtype=float) < xs))

    if not pred(0.0):
        raise ThresholdUndefinedError("h(x; 0) >= x somewhere; single-system threshold undefined")
    return bisect_sup(pred, 0.0, psys.eps_max, tol)


def eps_stab(psys: ParamSystem, tol: float = 1e-9) -> float:
    """Stability threshold of the zero fixed point.

    Uses the root of h'(0; eps) = 1 when the family supplies that slope;
    otherwise falls back to a small-x grid scan of h(x; eps) < x with
    deltas 1e-3, 1e-6, 1e-9.
    """
    if not psys.zero_is_fixed_point:
        raise ThresholdUndefinedError("0 is not a fixed point; stability threshold undefined")
    if psys.h_prime0 is not None:
        if float(psys.h_prime0(psys.eps_max)) < 1.0:
            return psys.eps_max
        if float(psys.h_prime0(0.0)) >= 1.0:
            raise ThresholdUndefinedError("0 unstable already at eps = 0")
        return bisect_root(lambda e: float(psys.h_prime0(e)) - 1.0, 0.0,
                           psys.eps_max, tol)

    # sampling the top of each window keeps h(x) - x above the rounding
    # noise of the update near x = 0
    grids = [np.linspace(d / 4, d, 24) for d in (1e-3, 1e-6, 1e-9)]

    def pred(e: float) -> bool:
        return any(bool(np.all(np.asarray(psys.h(xs, e), dtype=float) < xs))
                   for xs in grids)

    if not pred(0.0):
        raise ThresholdUndefinedError("0 unstable already at eps = 0")
    return bisect_sup(pred, 0.0, psys.eps_max, tol)


def eps_c(psys: ParamSystem, tol: float = 1e-9, grid_n: int = 10**4) -> float:
    """Coupled (potential) threshold: sup{eps : min_x U_s(x; eps) >= 0}.

    Valid because the envelope is non-increasing and identically zero below
    the threshold when 0 stays a fixed point. Cross-checked against the
    largest-minimizer criterion sup{eps : x_upper*(eps) = 0}.
    """
    if not psys.zero_is_fixed_point:
        raise ThresholdUndefinedError(
            "0 is not a fixed point for all eps; use inverse_Psi_threshold instead")

    def pred(e: float) -> bool:
        return Psi(psys, e, grid_n) >= -1e-12

    if not pred(0.0):
        raise ThresholdUndefinedError("potential already negative at eps = 0")
    ec = bisect_sup(pred, 0.0, psys.eps_max, tol)
    if ec < psys.eps_max:
        lo = max(ec - 10 * tol, 0.0)
        hi = min(ec + 10 * tol, psys.eps_max)
        res_lo = minimize_us_at(psys, lo, grid_n)
        res_hi = minimize_us_at(psys, hi, grid_n)
        if not (res_lo.value >= -1e-12 and res_lo.x_lower <= 1e-6
                and res_hi.value < -1e-12 and res_hi.x_upper > 1e-6):
            raise ThresholdUndefinedError(
                "potential-threshold cross-check failed around eps_c "
                f"({res_lo.value:.3e}, {res_hi.value:.3e})")
    return ec


def _eps_bracket_check(psys: ParamSystem, xs: np.ndarray) -> None:
    lo_ok = np.asarray(psys.h(xs, 0.0), dtype=float) <= xs + 1e-12
    hi_ok = np.asarray(psys.h(xs, psys.eps_max), dtype=float) >= xs - 1e-12
    if not (np.all(lo_ok) and np.all(hi_ok)):
        bad = xs[~(lo_ok & hi_ok)]
        raise DomainError(f"x not in the fixed-point domain: {bad[:4]}...")


def eps_of_x_vec(psys: ParamSystem, xs, tol: float = 1e-12) -> np.ndarray:
    """Parameter supporting a fixed point at each x (vectorized)."""
    arr = np.asarray(xs, dtype=float)
    flat = np.atleast_1d(arr).astype(float)
    if np.any(flat <= 0.0) or np.any(flat > psys.x_max):
        raise DomainError("eps_of_x needs x in (0, x_max]")
    if psys.eps_of_x_closed is not None:
        out = np.asarray(psys.eps_of_x_closed(flat), dtype=float)
        if np.any(out < -1e-9) or np.any(out > psys.eps_max + 1e-9):
            raise DomainError("closed-form eps(x) leaves [0, eps_max]")
        out = np.clip(out, 0.0, psys.eps_max)
    else:
        _eps_bracket_check(psys, flat)
        lo = np.zeros_like(flat)
        hi = np.full_like(flat, psys.eps_max)
        while float(np.max(hi - lo)) > tol:
            mid = 0.5 * (lo + hi)
            above = np.asarray(psys.h(flat, mid), dtype=float) >= flat
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        out = 0.5 * (lo + hi)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def eps_of_x(psys: ParamSystem, x: float, tol: float = 1e-12) -> float:
    """Smallest parameter supporting a fixed point at x (unique when proper)."""
    return float(eps_of_x_vec(psys, float(x), tol))


def eps_prime_of_x(psys: ParamSystem, x: float) -> float:
    """Derivative of eps(x) from the implicit fixed-point equation:
    (1 - h_x(x; eps(x))) / h_eps(x; eps(x))."""
    e = eps_of_x(psys, x)
    denom = float(psys.h_eps(x, e))
    if denom <= 0.0:
        raise DomainError("h_eps <= 0: the family is not proper at this point")
    return (1.0 - float(psys.h_x(x, e))) / denom


def Q_of_x(psys: ParamSystem, x):
    """Fixed-point potential Q(x) = U_s(x; eps(x))."""
    e = eps_of_x_vec(psys, x)
    return psys.u(x, e)


def Q_integral_check(psys: ParamSystem, x1: float, x2: float,
                     quad_tol: float = 1e-9):
    """Return (direct, integral) evaluations of Q(x2) - Q(x1).

    The integral form is -int (G_eps(x; eps(x)) + F_eps(g(x; eps(x)); eps(x)))
    eps'(x) dx, which must match the direct difference on any interval of
    the fixed-point domain.
    """
    if not x1 <= x2:
        raise DomainError("need x1 <= x2")
    xs = np.linspace(x1, x2, 257)
    _eps_bracket_check(psys, xs)
    direct = float(Q_of_x(psys, x2) - Q_of_x(psys, x1))

    def integrand(x: float) -> float:
        e = eps_of_x(psys, x)
        depsdx = (1.0 - float(psys.h_x(x, e))) / float(psys.h_eps(x, e))
        return -(float(psys.G_eps(x, e))
                 + float(psys.F_eps(psys.g(x, e), e))) * depsdx

    integral = adaptive_simpson(integrand, x1, x2, quad_tol).value
    return direct, integral


def xf_intervals(psys: ParamSystem, grid_n: int = 10**4):
    """Intervals of (0, x_max] that support a fixed point for some eps.

    Returns (intervals, touches_zero) where touches_zero reports whether the
    domain extends down to the first grid cell above 0.
    """
    xs = np.linspace(0.0, psys.x_max, grid_n)[1:]
    mask = ((np.asarray(psys.h(xs, 0.0), dtype=float) <= xs + 1e-12)
            & (np.asarray(psys.h(xs, psys.eps_max), dtype=float) >= xs - 1e-12))
    intervals = []
    start = None
    for i, ok in enumerate(mask):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            intervals.append((float(xs[start]), float(xs[i - 1])))
            start = None
    if start is not None:
        intervals.append((float(xs[start]), float(xs[-1])))
    touches_zero = bool(intervals and intervals[0][0] <= float(xs[1]))
    return intervals, touches_zero


def maxwell_threshold(psys: ParamSystem, tol: float = 1e-9,
                      grid_n: int = 10**4) -> float:
    """Smallest eps(x) over roots of the fixed-point potential Q on the
    closure of the fixed-point domain; the boundary value at x -> 0 is the
    stability threshold when the domain reaches down to zero."""
    if not psys.proper:
        raise ThresholdUndefinedError("Maxwell threshold needs a proper family")
    intervals, touches_zero = xf_intervals(psys, grid_n)
    if not intervals:
        raise ThresholdUndefinedError("empty fixed-point domain")
    if touches_zero and not (psys.strict_stability or psys.unconditionally_stable):
        raise ThresholdUndefinedError(
            "fixed-point domain reaches 0 but the stability threshold is not strict")

    candidates: list[float] = []
    if touches_zero:
        candidates.append(eps_stab(psys))
    for lo, hi in intervals:
        xs = np.linspace(lo, hi, grid_n)
        q = np.asarray(Q_of_x(psys, xs), dtype=float)
        for i in np.where(q[:-1] * q[1:] < 0.0)[0]:
            xr = bisect_root(lambda x: float(Q_of_x(psys, x)),
                             float(xs[i]), float(xs[i + 1]), tol=1e-12)
            candidates.append(eps_of_x(psys, xr))
        for i in np.where(q == 0.0)[0]:
            candidates.append(eps_of_x(psys, float(xs[i])))
    if not candidates:
        raise ThresholdUndefinedError("fixed-point potential has no root")
    return min(candidates)


def psi_exit(psys: ParamSystem, eps: float, grid_n: int = 10**4) -> float:
    """Derivative of the potential envelope:
    -G_eps(x*; eps) - F_eps(g(x*; eps); eps) at the largest minimizer x*."""
    xb = x_bar_star(psys, eps, grid_n)
    return -(float(psys.G_eps(xb, eps))
             + float(psys.F_eps(psys.g(xb, eps), eps)))


def find_xbar_jumps(psys: ParamSystem, lo: float = 0.0, hi: Optional[float] = None,
                    coarse_step: float = 1e-3, jump_tol: float = 0.01,
                    eps_tol: float = 1e-6, grid_n: int = 3000):
    """Locate discontinuities of the largest minimizer on [lo, hi].

    Scans with the coarse step, then bisects each detected jump of size
    above jump_tol down to eps_tol.
    """
    hi = psys.eps_max if hi is None else hi
    n = max(int(math.ceil((hi - lo) / coarse_step)) + 1, 2)
    es = np.linspace(lo, hi, n)
    xbars = [x_bar_star(psys, float(e), grid_n) for e in es]
    jumps = []
    for i in range(len(es) - 1):
        if abs(xbars[i + 1] - xbars[i]) > jump_tol:
            a, b = float(es[i]), float(es[i + 1])
            xa = xbars[i]
            while b - a > eps_tol:
                m = 0.5 * (a + b)
                if abs(x_bar_star(psys, m, grid_n) - xa) > jump_tol:
                    b = m
                else:
                    a = m
            # a steep but continuous stretch shrinks to nothing under
            # bisection; only a genuine discontinuity survives
            if abs(x_bar_star(psys, b, grid_n) - x_bar_star(psys, a, grid_n)) > jump_tol:
                jumps.append(0.5 * (a + b))
    return jumps


def psi_integral(psys: ParamSystem, eps: float, n: int = 1000,
                 grid_n: int = 3000) -> float:
    """Trapezoid integral of the envelope derivative from 0 to eps, split at
    minimizer jumps (located by bisection) so the integrand is smooth on
    each piece."""
    if eps <= 0.0:
        return 0.0
    cuts = [0.0] + [j for j in find_xbar_jumps(psys, 0.0, eps, grid_n=grid_n)
                    if 0.0 < j < eps] + [eps]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0:
            continue
        m = max(int(round(n * (b - a) / eps)), 8)
        shrink = min(1e-9, (b - a) * 1e-6)
        es = np.linspace(a + shrink, b - shrink, m)
        vals = np.array([psi_exit(psys, float(e), grid_n) for e in es])
        total += float(np.trapezoid(vals, es))
    return total


@dataclass(frozen=True)
class FixedPointCurve:
    """Samples of (x, eps(x), Q(x), exit(x)) along the fixed-point manifold."""

    xs: np.ndarray
    eps: np.ndarray
    q: np.ndarray
    exit_values: np.ndarray
    domain_Xf: tuple


def ebp_curve(psys: ParamSystem, x_grid) -> FixedPointCurve:
    """Parametric fixed-point curve over the given x-grid (points outside
    the fixed-point domain are dropped)."""
    intervals, _ = xf_intervals(psys)
    xs = np.asarray(x_grid, dtype=float)
    keep = np.zeros(xs.shape, dtype=bool)
    for lo, hi in intervals:
        keep |= (xs >= lo) & (xs <= hi)
    xs = xs[keep]
    eps = np.asarray(eps_of_x_vec(psys, xs), dtype=float)
    q = np.asarray(psys.u(xs, eps), dtype=float)
    ex = np.asarray(psys.exit_value(xs, eps), dtype=float)
    return FixedPointCurve(xs, eps, q, ex, tuple(intervals))


@dataclass(frozen=True)
class MapExitCurve:
    eps: np.ndarray
    exit_values: np.ndarray
    x_stars: np.ndarray
    jumps: tuple


def map_exit_curve(psys: ParamSystem, eps_grid, grid_n: int = 3000) -> MapExitCurve:
    """EXIT functional at the largest potential minimizer over an eps-grid,
    with jump locations refined to 1e-6 between adjacent grid points."""
    es = np.asarray(eps_grid, dtype=float)
    xbars = np.array([x_bar_star(psys, float(e), grid_n) for e in es])
    ex = np.array([float(psys.exit_value(x, float(e)))
                   for x, e in zip(xbars, es)])
    jumps = []
    for i in range(len(es) - 1):
        if abs(xbars[i + 1] - xbars[i]) > 0.01:
            a, b = float(es[i]), float(es[i + 1])
            xa = xbars[i]
            while b - a > 1e-6:
                m = 0.5 * (a + b)
                if abs(x_bar_star(psys, m, grid_n) - xa) > 0.01:
                    b = m
                else:
                    a = m
            if abs(x_bar_star(psys, b, grid_n) - x_bar_star(psys, a, grid_n)) > 0.01:
                jumps.append(0.5 * (a + b))
    return MapExitCurve(es, ex, xbars, tuple(jumps))


def inverse_Psi_threshold(psys: ParamSystem, x: float, tol: float = 1e-9,
                          grid_n: int = 10**4) -> float:
    """Parameter below which the largest minimizer stays at or below x,
    computed as the eps where the envelope equals Q(x). Needs a strictly
    decreasing envelope (proper family)."""
    if not psys.proper:
        raise ThresholdUndefinedError("inverse envelope threshold needs a proper family")
    target = float(Q_of_x(psys, x))
    lo_val = Psi(psys, 0.0, grid_n)
    hi_val = Psi(psys, psys.eps_max, grid_n)
    if not (hi_val - 1e-12 <= target <= lo_val + 1e-12):
        raise DomainError(
            f"Q(x)={target:.6g} outside the envelope range [{hi_val:.6g}, {lo_val:.6g}]")
    return bisect_sup(lambda e: Psi(psys, e, grid_n) >= target - 1e-12,
                      0.0, psys.eps_max, tol)


@dataclass(frozen=True)
class ThresholdReport:
    eps_single: Optional[float]
    eps_stab: Optional[float]
    eps_c: Optional[float]
    eps_maxwell: Optional[float]
    notes: tuple


def threshold_report(psys: ParamSystem, tol: float = 1e-9) -> ThresholdReport:
    """Compute the four thresholds, tagging undefined ones instead of
    raising; asserts the potential threshold does not exceed the stability
    threshold whenever the family's stability structure guarantees that
    ordering."""
    values = {}
    notes = []

    def attempt(name, fn, how):
        try:
            values[name] = fn()
            notes.append((name, how))
        except ThresholdUndefinedError as exc:
            values[name] = None
            notes.append((name, f"undefined: {exc}"))

    attempt("eps_single", lambda: eps_single(psys, tol),
            "bisection on h(x;eps)<x over a 1e4 grid")
    attempt("eps_stab", lambda: eps_stab(psys, tol),
            "root of h'(0;eps)=1" if psys.h_prime0 is not None else "small-x scan bisection")
    attempt("eps_c", lambda: eps_c(psys, tol),
            "bisection on min_x U_s(x;eps) >= 0")
    attempt("eps_maxwell", lambda: maxwell_threshold(psys, tol),
            "min eps(x) over roots of the fixed-point potential")

    ec, es_ = values["eps_c"], values["eps_stab"]
    if (psys.strict_stability or psys.unconditionally_stable) and \
            ec is not None and es_ is not None and ec > es_ + 10 * tol:
        raise ThresholdUndefinedError(
            f"eps_c={ec} exceeds eps_stab={es_} on a stability-structured family")
    return ThresholdReport(values["eps_single"], values["eps_stab"],
                           values["eps_c"], values["eps_maxwell"], tuple(notes))

"""Numeric kernels: polynomials, the regularized incomplete Beta function,
adaptive Simpson quadrature, bracketing solvers, and Gauss-Hermite nodes.

Everything here is stateless and deterministic: identical inputs give
bit-identical outputs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError

__all__ = [
    "Polynomial",
    "parse_polynomial",
    "QuadratureResult",
    "adaptive_simpson",
    "reg_inc_beta",
    "reg_inc_beta_prime",
    "bisect_root",
    "bisect_sup",
    "golden_min",
    "gauss_hermite",
]


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial stored as ascending-degree coefficients.

    Evaluation is Horner's rule and works elementwise on numpy arrays;
    derivative and antiderivative are exact in the coefficients.
    """

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            object.__setattr__(self, "coeffs", (0.0,))
        else:
            object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    def __call__(self, x):
        r = 0.0
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial((0.0,))
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def antiderivative(self) -> "Polynomial":
        """Antiderivative with value 0 at 0."""
        return Polynomial((0.0,) + tuple(c / (i + 1) for i, c in enumerate(self.coeffs)))

    def trimmed(self) -> "Polynomial":
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        return Polynomial(tuple(coeffs))


_TERM_RE = re.compile(
    r"""^\s*
        (?P<coef>[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?(?:\s*/\s*[0-9]+(?:\.[0-9]*)?)?
               |\.[0-9]+)?
        \s*\*?\s*
        (?P<var>x)?
        \s*(?:\^\s*(?P<exp>[0-9]+))?
        \s*$""",
    re.VERBOSE,
)


def _parse_coef(text: str) -> float:
    if "/" in text:
        num, den = text.split("/")
        return float(Fraction(num.strip()) / Fraction(den.strip()))
    return float(text)


def parse_polynomial(text: str) -> Polynomial:
    """Parse strings like ``"0.2 x + 0.25 x^2 + 0.45 x^20"`` or ``"2/45 + 2/45 x"``.

    Terms are '+'-separated; each is ``coef``, ``coef x^k``, or ``x^k`` with an
    optional '*'. Fractions ``a/b`` are accepted for exact ratios.
    """
    if not isinstance(text, str) or not text.strip():
        raise DomainError("empty polynomial string")
    coeffs: dict[int, float] = {}
    for raw in text.split("+"):
        m = _TERM_RE.match(raw)
        if m is None or (m.group("coef") is None and m.group("var") is None):
            raise DomainError(f"cannot parse polynomial term {raw!r}")
        coef = _parse_coef(m.group("coef")) if m.group("coef") else 1.0
        if m.group("var") is None:
            if m.group("exp") is not None:
                raise DomainError(f"exponent without variable in term {raw!r}")
            deg = 0
        else:
            deg = int(m.group("exp")) if m.group("exp") else 1
        coeffs[deg] = coeffs.get(deg, 0.0) + coef
    out = [0.0] * (max(coeffs) + 1)
    for d, c in coeffs.items():
        out[d] = c
    return Polynomial(tuple(out))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    evaluations: int


def adaptive_simpson(fn: Callable[[float], float], lo: float, hi: float,
                     tol: float = 1e-11, max_depth: int = 60) -> QuadratureResult:
    """Adaptive Simpson quadrature with Richardson error control.

    Panels are bisected until the Richardson estimate meets the (absolute)
    tolerance split across subintervals. Raises :class:`NumericError` with
    the partial value if the depth cap is exceeded.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if lo == hi:
        return QuadratureResult(0.0, 0.0, 0)
    if lo > hi:
        r = adaptive_simpson(fn, hi, lo, tol, max_depth)
        return QuadratureResult(-r.value, r.est_error, r.evaluations)

    nev = [0]

    def f(x: float) -> float:
        nev[0] += 1
        return float(fn(x))

    def simp(fa: float, fm: float, fb: float, width: float) -> float:
        return width * (fa + 4.0 * fm + fb) / 6.0

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simp(fa, flm, fm, m - a)
        right = simp(fm, frm, fb, b - m)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0, abs(delta) / 15.0
        if depth <= 0:
            raise NumericError(
                f"adaptive_simpson: depth cap reached on [{a}, {b}]",
                partial=left + right,
            )
        lv, le = recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        rv, re_ = recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        return lv + rv, le + re_

    fa, fm, fb = f(lo), f(0.5 * (lo + hi)), f(hi)
    whole = simp(fa, fm, fb, hi - lo)
    value, err = recurse(lo, hi, fa, fm, fb, whole, tol, max_depth)
    return QuadratureResult(value, err, nev[0])


_LENTZ_TINY = 1e-300
_LENTZ_EPS = 1e-15
_LENTZ_MAX_ITERS = 200


def _betacf(a: float, b: float, x: float) -> float:
    # Continued fraction for I_x(a,b), modified Lentz iteration.
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _LENTZ_TINY:
        d = _LENTZ_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _LENTZ_MAX_ITERS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _LENTZ_TINY:
            d = _LENTZ_TINY
        c = 1.0 + aa / c
        if abs(c) < _LENTZ_TINY:
            c = _LENTZ_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _LENTZ_TINY:
            d = _LENTZ_TINY
        c = 1.0 + aa / c
        if abs(c) < _LENTZ_TINY:
            c = _LENTZ_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _LENTZ_EPS:
            return h
    raise NumericError(f"incomplete Beta continued fraction stalled for a={a}, b={b}, x={x}")


def _log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete Beta function I_x(a, b).

    Continued-fraction evaluation (modified Lentz) with the symmetry switch
    at x > (a+1)/(a+b+2); the Beta prefactor goes through log-Gamma so large
    integer parameters do not overflow.

    :param float x: evaluation point in [0, 1]
    :param float a: first shape parameter, > 0
    :param float b: second shape parameter, > 0
    :returns: I_x(a, b)
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"reg_inc_beta needs a, b > 0, got a={a}, b={b}")
    if x < 0.0 or x > 1.0:
        raise DomainError(f"reg_inc_beta needs x in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_bt = a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b)
    bt = math.exp(log_bt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def reg_inc_beta_prime(x: float, a: float, b: float):
    """Derivative of I_x(a, b) in x: x^(a-1) (1-x)^(b-1) / B(a, b).

    Accepts scalars or numpy arrays in x.
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"reg_inc_beta_prime needs a, b > 0, got a={a}, b={b}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("reg_inc_beta_prime needs x in [0, 1]")
    inv_beta = math.exp(-_log_beta(a, b))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = inv_beta * arr ** (a - 1.0) * (1.0 - arr) ** (b - 1.0)
    if arr.ndim == 0:
        return float(out)
    return out


def bisect_root(fn: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-12) -> float:
    """Bisection root of fn on [lo, hi]; requires a sign change (or a zero
    endpoint). Deterministic midpoint splitting; returns the final midpoint.
    """
    if not lo <= hi:
        raise DomainError(f"invalid bracket [{lo}, {hi}]")
    flo = float(fn(lo))
    fhi = float(fn(hi))
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise DomainError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = float(fn(mid))
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def bisect_sup(pred: Callable[[float], bool], lo: float, hi: float,
               tol: float = 1e-9) -> float:
    """Supremum of {t : pred(t)} for a predicate that is true on [lo, t*) and
    false after. pred(lo) must hold; returns hi if pred(hi) holds.
    """
    if not lo <= hi:
        raise DomainError(f"invalid bracket [{lo}, {hi}]")
    if not pred(lo):
        raise DomainError("bisect_sup: predicate false at the lower end")
    if pred(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def golden_min(fn: Callable[[float], float], lo: float, hi: float,
               tol: float = 1e-12) -> float:
    """Golden-section minimizer of a unimodal function on [lo, hi]."""
    if not lo <= hi:
        raise DomainError(f"invalid bracket [{lo}, {hi}]")
    dist = hi - lo
    if dist <= tol:
        return 0.5 * (lo + hi)
    n = int(math.ceil(math.log(tol / dist) / math.log(_INV_PHI)))
    c = lo + _INV_PHI_SQ * dist
    d = lo + _INV_PHI * dist
    yc, yd = float(fn(c)), float(fn(d))
    for _ in range(max(n - 1, 0)):
        if yc < yd:
            hi, d, yd = d, c, yc
            dist *= _INV_PHI
            c = lo + _INV_PHI_SQ * dist
            yc = float(fn(c))
        else:
            lo, c, yc = c, d, yd
            dist *= _INV_PHI
            d = lo + _INV_PHI * dist
            yd = float(fn(d))
    return 0.5 * (lo + d) if yc < yd else 0.5 * (c + hi)


@lru_cache(maxsize=8)
def gauss_hermite(order: int = 61):
    """Gauss-Hermite nodes and weights for integrals against exp(-u^2)."""
    nodes, weights = np.polynomial.hermite.hermgauss(order)
    return nodes, weights

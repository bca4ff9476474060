"""Built-in recursion families.

Erasure-decoding families over a channel parameter eps:

  * ldpc_system:  f(x;eps) = eps lam(x),       g(x;eps) = 1 - rho(1-x)
  * ldgm_system:  f(x;eps) = lam(x),           g(x;eps) = 1 - (1-eps) rho(1-x)
  * gldpc_system: f(x;eps) = eps x,            g(x) the bounded-distance
                  component-decoder transfer, a regularized incomplete Beta
  * isi_system:   f(x;eps) = phi(L(x);eps) lam(x), g as LDPC, for joint
                  detection/decoding over a channel with memory

plus a compressed-sensing state-evolution pair built from a prior's mmse
curve, and three fixed demo systems (two decodable families frozen at one
parameter and a pathological potential with minima accumulating at 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import ConstructionError, DomainError
from .numerics import Polynomial, gauss_hermite, parse_polynomial
from .recursion import ScalarSystem, make_system
from .thresholds import ParamSystem, validate_param_system

__all__ = [
    "DegreeDistribution",
    "ldpc_system",
    "ldgm_system",
    "GldpcParams",
    "gldpc_system",
    "dec_phi",
    "isi_system",
    "GaussianPrior",
    "TwoPointPrior",
    "CsParams",
    "mmse_two_point",
    "cs_system",
    "example1_system",
    "example2_system",
    "pathological_system",
]

PolyLike = Union[Polynomial, str, Sequence[float]]


def _as_poly(obj: PolyLike) -> Polynomial:
    if isinstance(obj, Polynomial):
        return obj
    if isinstance(obj, str):
        return parse_polynomial(obj)
    return Polynomial(tuple(obj))


@dataclass(frozen=True)
class DegreeDistribution:
    """Node-perspective degree distribution L with L(1) = 1 and L(0) = 0.

    The edge perspective lam = L'/L'(1) is derived; build from either side
    with :meth:`from_node` / :meth:`from_edge`.
    """

    node: Polynomial

    def __post_init__(self):
        coeffs = self.node.coeffs
        if any(c < -1e-15 for c in coeffs):
            raise ConstructionError("degree distribution needs non-negative coefficients")
        if coeffs[0] != 0.0:
            raise ConstructionError("degree distribution needs a zero constant term")
        if abs(self.node(1.0) - 1.0) > 1e-12:
            raise ConstructionError(f"coefficients sum to {self.node(1.0)!r}, not 1")
        if self.lp1 <= 0.0:
            raise ConstructionError("degenerate distribution: L'(1) = 0")

    @classmethod
    def from_node(cls, obj: PolyLike) -> "DegreeDistribution":
        return cls(_as_poly(obj).trimmed())

    @classmethod
    def from_edge(cls, obj: PolyLike) -> "DegreeDistribution":
        """Recover the node form by integration: L = int(edge)/int_0^1(edge)."""
        edge = _as_poly(obj).trimmed()
        if abs(edge(1.0) - 1.0) > 1e-12:
            raise ConstructionError(f"edge coefficients sum to {edge(1.0)!r}, not 1")
        anti = edge.antiderivative()
        total = anti(1.0)
        return cls(Polynomial(tuple(c / total for c in anti.coeffs)))

    @property
    def lp1(self) -> float:
        """Average node degree L'(1)."""
        return float(self.node.derivative()(1.0))

    @property
    def edge(self) -> Polynomial:
        d = self.node.derivative()
        return Polynomial(tuple(c / self.lp1 for c in d.coeffs))


def _zero_like(x, eps):
    return 0.0 * x + 0.0 * eps


def ldpc_system(L: Union[DegreeDistribution, PolyLike],
                R: Union[DegreeDistribution, PolyLike]) -> ParamSystem:
    """Bit-erasure decoding family f(x;eps) = eps lam(x), g = 1 - rho(1-x).

    Carries closed-form antiderivatives F = eps L(x)/L'(1) and
    G = x - (1 - R(1-x))/R'(1), the closed-form fixed-point parameter
    eps(x) = x / lam(1 - rho(1-x)), the node-perspective EXIT functional
    L(1 - rho(1-x)), and the trial entropy -L'(1) Q(x).
    """
    L = L if isinstance(L, DegreeDistribution) else DegreeDistribution.from_node(L)
    R = R if isinstance(R, DegreeDistribution) else DegreeDistribution.from_node(R)
    lam, rho = L.edge, R.edge
    lam_p, rho_p = lam.derivative(), rho.derivative()
    rho_pp = rho_p.derivative()
    Lp1, Rp1 = L.lp1, R.lp1
    Ln, Rn = L.node, R.node
    lam2 = float(lam_p(0.0))
    rp1 = float(rho_p(1.0))

    def eps_closed(x):
        return x / lam(1.0 - rho(1.0 - x))

    def trial_entropy(x):
        g = 1.0 - rho(1.0 - x)
        u = x * g - (x - (1.0 - Rn(1.0 - x)) / Rp1) - eps_closed(x) * Ln(g) / Lp1
        return -Lp1 * u

    psys = ParamSystem(
        f=lambda x, e: e * lam(x),
        g=lambda x, e: 1.0 - rho(1.0 - x) + _zero_like(x, e),
        f_x=lambda x, e: e * lam_p(x),
        g_x=lambda x, e: rho_p(1.0 - x) + _zero_like(x, e),
        g_xx=lambda x, e: -rho_pp(1.0 - x) + _zero_like(x, e),
        f_eps=lambda x, e: lam(x) + 0.0 * e,
        g_eps=_zero_like,
        F=lambda x, e: e * Ln(x) / Lp1,
        G=lambda x, e: x - (1.0 - Rn(1.0 - x)) / Rp1 + _zero_like(x, e),
        F_eps=lambda x, e: Ln(x) / Lp1 + 0.0 * e,
        G_eps=_zero_like,
        proper=True,
        strict_stability=lam2 > 0.0,
        unconditionally_stable=lam2 == 0.0,
        zero_is_fixed_point=float(lam(0.0)) == 0.0,
        exit_fn=lambda x, e: Ln(1.0 - rho(1.0 - x)) + _zero_like(x, e),
        eps_of_x_closed=eps_closed,
        h_prime0=lambda e: e * lam2 * rp1,
        trial_entropy=trial_entropy,
        sup_f_x=lambda e: e * float(lam_p(1.0)),
        sup_g_x=lambda e: rp1,
        sup_g_xx=lambda e: float(rho_pp(1.0)),
        slice_strict_f=lambda e: e > 0.0,
        name="ldpc",
    )
    validate_param_system(psys)
    return psys


def _poly_inverse(p: Polynomial):
    """Inverse of a strictly increasing polynomial on [0, 1], by bisection."""

    def inv(y):
        arr = np.atleast_1d(np.asarray(y, dtype=float))
        lo = np.zeros_like(arr)
        hi = np.ones_like(arr)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            below = np.asarray(p(mid), dtype=float) < arr
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out = 0.5 * (lo + hi)
        return float(out[0]) if np.ndim(y) == 0 else out.reshape(np.shape(y))

    return inv


def ldgm_system(L: Union[DegreeDistribution, PolyLike],
                R: Union[DegreeDistribution, PolyLike]) -> ParamSystem:
    """Generator-matrix-code family f(x;eps) = lam(x), g = 1 - (1-eps) rho(1-x).

    Zero is not a fixed point for eps > 0 (no perfect-decoding state), so
    the potential threshold is reported undefined and the inverse-envelope
    threshold is the meaningful quantity. eps(x) is closed-form through the
    inverse of lam.
    """
    L = L if isinstance(L, DegreeDistribution) else DegreeDistribution.from_node(L)
    R = R if isinstance(R, DegreeDistribution) else DegreeDistribution.from_node(R)
    lam, rho = L.edge, R.edge
    lam_p, rho_p = lam.derivative(), rho.derivative()
    rho_pp = rho_p.derivative()
    Lp1, Rp1 = L.lp1, R.lp1
    Ln, Rn = L.node, R.node
    lam_inv = _poly_inverse(lam)
    rp1 = float(rho_p(1.0))

    def eps_closed(x):
        denom = rho(1.0 - x)
        return 1.0 - (1.0 - lam_inv(x)) / denom

    psys = ParamSystem(
        f=lambda x, e: lam(x) + 0.0 * e,
        g=lambda x, e: 1.0 - (1.0 - e) * rho(1.0 - x),
        f_x=lambda x, e: lam_p(x) + 0.0 * e,
        g_x=lambda x, e: (1.0 - e) * rho_p(1.0 - x),
        g_xx=lambda x, e: -(1.0 - e) * rho_pp(1.0 - x),
        f_eps=_zero_like,
        g_eps=lambda x, e: rho(1.0 - x) + _zero_like(x, e),
        F=lambda x, e: Ln(x) / Lp1 + 0.0 * e,
        G=lambda x, e: x - (1.0 - e) * (1.0 - Rn(1.0 - x)) / Rp1,
        F_eps=_zero_like,
        G_eps=lambda x, e: (1.0 - Rn(1.0 - x)) / Rp1 + _zero_like(x, e),
        proper=True,
        strict_stability=False,
        unconditionally_stable=False,
        zero_is_fixed_point=False,
        exit_fn=lambda x, e: 1.0 - Rn(1.0 - x) + _zero_like(x, e),
        eps_of_x_closed=eps_closed if float(rho(0.0)) > 0.0 else None,
        h_prime0=lambda e: float(lam_p(e)) * (1.0 - e) * rp1,
        sup_f_x=lambda e: float(lam_p(1.0 - (1.0 - e) * float(rho(0.0)))),
        sup_g_x=lambda e: (1.0 - e) * rp1,
        sup_g_xx=lambda e: (1.0 - e) * float(rho_pp(1.0)),
        slice_strict_f=lambda e: True,
        name="ldgm",
    )
    validate_param_system(psys)
    return psys


@dataclass(frozen=True)
class GldpcParams:
    """Component BCH code of blocklength n correcting t erasures/errors."""

    n: int
    t: int

    def __post_init__(self):
        if not (2 <= self.t <= (self.n - 1) // 2):
            raise ConstructionError(f"need 2 <= t <= (n-1)//2, got n={self.n}, t={self.t}")

    @property
    def rate_bsc(self) -> float:
        return 1.0 - 2.0 * self.t * math.log2(self.n + 1) / self.n

    @property
    def rate_bec(self) -> float:
        return 1.0 - self.t * math.log2(self.n + 1) / self.n


def _bch_transfer(n: int, t: int):
    """Bounded-distance decoder transfer g(x) = I_x(t, n-t) and derivatives.

    Evaluated in the Bernstein (binomial-tail) form
    sum_{i=t..n-1} C(n-1,i) x^i (1-x)^(n-1-i), whose non-negative terms are
    numerically stable and vectorize; identical to the regularized
    incomplete Beta function.
    """
    combs = [float(math.comb(n - 1, i)) for i in range(t, n)]
    combs_arr = np.array(combs)
    inv_beta = math.exp(math.lgamma(n) - math.lgamma(t) - math.lgamma(n - t))

    def _g_scalar(x: float) -> float:
        omx = 1.0 - x
        omx_pow = [1.0]
        for _ in range(1, n - t):
            omx_pow.append(omx_pow[-1] * omx)
        total = 0.0
        xi = x ** t
        for k, i in enumerate(range(t, n)):
            total += combs[k] * xi * omx_pow[n - 1 - i]
            xi = xi * x
        return total

    def g(x):
        if np.ndim(x) == 0:
            return _g_scalar(float(x))
        arr = np.asarray(x, dtype=float)
        omx = 1.0 - arr
        omx_pow = np.ones((n - t,) + arr.shape)
        for j in range(1, n - t):
            omx_pow[j] = omx_pow[j - 1] * omx
        total = np.zeros_like(arr)
        xi = arr ** t
        for k, i in enumerate(range(t, n)):
            total += combs_arr[k] * xi * omx_pow[n - 1 - i]
            xi = xi * arr
        return total

    def g_prime(x):
        arr = np.asarray(x, dtype=float)
        out = inv_beta * arr ** (t - 1) * (1.0 - arr) ** (n - t - 1)
        return float(out) if arr.ndim == 0 else out

    def g_second(x):
        arr = np.asarray(x, dtype=float)
        out = inv_beta * ((t - 1) * arr ** (t - 2) * (1.0 - arr) ** (n - t - 1)
                          - (n - t - 1) * arr ** (t - 1) * (1.0 - arr) ** (n - t - 2))
        return float(out) if arr.ndim == 0 else out

    def G(x):
        arr = np.asarray(x, dtype=float)
        out = (arr - t / n) * g(arr) + inv_beta / n * arr ** t * (1.0 - arr) ** (n - t)
        return float(out) if arr.ndim == 0 else out

    return g, g_prime, g_second, G, inv_beta


def gldpc_system(params: GldpcParams) -> ParamSystem:
    """Degree-2-bit code family with bounded-distance component decoding:
    f(x;eps) = eps x and g(x) = I_x(t, n-t).

    The fixed-point potential collapses to Q(x) = x g(x)/2 - G(x), the trial
    entropy is P = -2Q with P'(x) = g(x) - x g'(x), and the zero state is
    unconditionally stable for t >= 2 (the update has zero slope at 0).
    """
    n, t = params.n, params.t
    g, g_prime, g_second, G, inv_beta = _bch_transfer(n, t)
    xpk = (t - 1) / (n - 2)
    gp_sup = float(g_prime(xpk))

    psys = ParamSystem(
        f=lambda x, e: e * x,
        g=lambda x, e: g(x) + _zero_like(x, e),
        f_x=lambda x, e: e + 0.0 * x,
        g_x=lambda x, e: g_prime(x) + _zero_like(x, e),
        g_xx=lambda x, e: g_second(x) + _zero_like(x, e),
        f_eps=lambda x, e: x + 0.0 * e,
        g_eps=_zero_like,
        F=lambda x, e: 0.5 * e * x * x,
        G=lambda x, e: G(x) + _zero_like(x, e),
        F_eps=lambda x, e: 0.5 * x * x + 0.0 * e,
        G_eps=_zero_like,
        proper=True,
        strict_stability=False,
        unconditionally_stable=True,
        zero_is_fixed_point=True,
        exit_fn=lambda x, e: g(x) ** 2 + _zero_like(x, e),
        eps_of_x_closed=lambda x: x / g(x),
        h_prime0=lambda e: 0.0,
        trial_entropy=lambda x: 2.0 * G(x) - x * g(x),
        trial_entropy_prime=lambda x: g(x) - x * g_prime(x),
        sup_f_x=lambda e: e,
        sup_g_x=lambda e: gp_sup,
        slice_strict_f=lambda e: e > 0.0,
        name=f"gldpc(n={n},t={t})",
    )
    validate_param_system(psys)
    return psys


def dec_phi(x, eps):
    """Erasure transfer function of a two-tap partial-response detector,
    phi(x; eps) = 4 eps^2 / (2 - (1-eps) x)^2.

    Shipped as the default channel for isi_system with provenance flagged
    as external; satisfies phi(x;0) = 0 and phi(1;1) = 1.
    """
    return 4.0 * eps**2 / (2.0 - (1.0 - eps) * x) ** 2


def _dec_phi_x(x, eps):
    return 8.0 * eps**2 * (1.0 - eps) / (2.0 - (1.0 - eps) * x) ** 3


def _dec_phi_eps(x, eps):
    return 8.0 * eps * (2.0 - x) / (2.0 - (1.0 - eps) * x) ** 3


def _dec_Phi(z, eps):
    # antiderivative of dec_phi in its first argument, 0 at 0
    return 2.0 * eps**2 * z / (2.0 - (1.0 - eps) * z)


def _dec_Phi_eps(z, eps):
    return 2.0 * eps * z * (4.0 - 2.0 * z + eps * z) / (2.0 - (1.0 - eps) * z) ** 2


def isi_system(L: Union[DegreeDistribution, PolyLike],
               R: Union[DegreeDistribution, PolyLike],
               phi: Optional[Callable] = None,
               phi_x: Optional[Callable] = None,
               phi_eps: Optional[Callable] = None,
               Phi: Optional[Callable] = None,
               Phi_eps: Optional[Callable] = None) -> ParamSystem:
    """Joint detection/decoding family f(x;eps) = phi(L(x);eps) lam(x) with
    the LDPC check side g = 1 - rho(1-x).

    phi maps the code's a-priori erasure rate and the channel parameter to
    the detector's extrinsic erasure rate; it must be C^1, non-decreasing
    in both arguments, and satisfy phi(1;1) = 1 (grid-checked). When phi is
    omitted the shipped two-tap detector dec_phi is used with closed-form
    antiderivatives; a custom phi needs Phi (and Phi_eps) or they are left
    to quadrature-free failure.
    """
    L = L if isinstance(L, DegreeDistribution) else DegreeDistribution.from_node(L)
    R = R if isinstance(R, DegreeDistribution) else DegreeDistribution.from_node(R)
    if phi is None:
        phi, phi_x, phi_eps = dec_phi, _dec_phi_x, _dec_phi_eps
        Phi, Phi_eps = _dec_Phi, _dec_Phi_eps
    if Phi is None or Phi_eps is None or phi_x is None or phi_eps is None:
        raise ConstructionError("custom phi needs phi_x, phi_eps, Phi, and Phi_eps")

    zs = np.linspace(0.0, 1.0, 101)
    Z, Ei = np.meshgrid(zs, zs, indexing="ij")
    pv = np.asarray(phi(Z, Ei), dtype=float)
    if abs(float(phi(1.0, 1.0)) - 1.0) > 1e-12:
        raise ConstructionError("phi(1; 1) != 1")
    if np.min(np.diff(pv, axis=0)) < -1e-9 or np.min(np.diff(pv, axis=1)) < -1e-9:
        raise ConstructionError("phi decreasing in one of its arguments")

    lam, rho = L.edge, R.edge
    lam_p, rho_p = lam.derivative(), rho.derivative()
    rho_pp = rho_p.derivative()
    Lp1, Rp1 = L.lp1, R.lp1
    Ln, Rn = L.node, R.node
    lam2 = float(lam_p(0.0))
    rp1 = float(rho_p(1.0))

    psys = ParamSystem(
        f=lambda x, e: phi(Ln(x), e) * lam(x),
        g=lambda x, e: 1.0 - rho(1.0 - x) + _zero_like(x, e),
        f_x=lambda x, e: (phi_x(Ln(x), e) * Lp1 * lam(x) ** 2
                          + phi(Ln(x), e) * lam_p(x)),
        g_x=lambda x, e: rho_p(1.0 - x) + _zero_like(x, e),
        g_xx=lambda x, e: -rho_pp(1.0 - x) + _zero_like(x, e),
        f_eps=lambda x, e: phi_eps(Ln(x), e) * lam(x),
        g_eps=_zero_like,
        F=lambda x, e: Phi(Ln(x), e) / Lp1,
        G=lambda x, e: x - (1.0 - Rn(1.0 - x)) / Rp1 + _zero_like(x, e),
        F_eps=lambda x, e: Phi_eps(Ln(x), e) / Lp1,
        G_eps=_zero_like,
        proper=True,
        strict_stability=lam2 > 0.0,
        unconditionally_stable=lam2 == 0.0,
        zero_is_fixed_point=float(lam(0.0)) == 0.0,
        exit_fn=lambda x, e: Phi_eps(Ln(1.0 - rho(1.0 - x)), e),
        h_prime0=lambda e: float(phi(0.0, e)) * lam2 * rp1,
        slice_strict_f=lambda e: e > 0.0,
        name="isi",
    )
    validate_param_system(psys)
    return psys


def _sigmoid(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    ex = np.exp(t[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass(frozen=True)
class GaussianPrior:
    """Zero-mean Gaussian signal prior; mmse(s) = v / (1 + v s)."""

    variance: float

    def __post_init__(self):
        if self.variance <= 0:
            raise ConstructionError("variance must be positive")

    @property
    def second_moment(self) -> float:
        return self.variance

    def mmse(self, snr):
        return self.variance / (1.0 + self.variance * snr)

    def mmse_prime(self, snr):
        return -self.variance**2 / (1.0 + self.variance * snr) ** 2

    def mutual_information(self, snr):
        """I(X; sqrt(snr) X + Z) in nats."""
        return 0.5 * np.log1p(self.variance * snr)


@dataclass(frozen=True)
class TwoPointPrior:
    """Sparse prior: X = mass with probability rho_s, else 0.

    The conditional mean under a scaled Gaussian observation is a logistic
    function of the observation, so the estimator quadrature runs entirely
    in the log domain and cannot overflow.
    """

    mass: float
    rho_s: float

    def __post_init__(self):
        if not 0.0 <= self.rho_s <= 1.0:
            raise ConstructionError("rho_s must lie in [0, 1]")

    @property
    def second_moment(self) -> float:
        return self.mass**2 * self.rho_s

    def mmse(self, snr):
        arr = np.asarray(snr, dtype=float)
        if np.any(arr < 0):
            raise DomainError("snr must be >= 0")
        a, rho = self.mass, self.rho_s
        if a == 0.0 or rho in (0.0, 1.0):
            return 0.0 * arr if arr.ndim else 0.0
        s = np.atleast_1d(arr)[..., None]
        nodes, weights = gauss_hermite(61)
        z = math.sqrt(2.0) * nodes
        logit = math.log(rho / (1.0 - rho))
        root_s = np.sqrt(s)
        shift = -0.5 * s * a * a + logit
        m_on = a * _sigmoid(root_s * a * (root_s * a + z) + shift)
        m_off = a * _sigmoid(root_s * a * z + shift)
        est2 = (rho * np.sum(weights * m_on**2, axis=-1)
                + (1.0 - rho) * np.sum(weights * m_off**2, axis=-1)) / math.sqrt(math.pi)
        out = np.maximum(a * a * rho - est2, 0.0)
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


@dataclass(frozen=True)
class CsParams:
    """Compressed-sensing model: prior, noise variance, measurement rate."""

    prior: Union[GaussianPrior, TwoPointPrior]
    sigma2: float
    delta: float

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ConstructionError("sigma2 must be positive")
        if self.delta <= 0:
            raise ConstructionError("delta must be positive")


def mmse_two_point(params: Union[CsParams, TwoPointPrior], snr):
    """Minimum mean-square error of the two-point prior at the given snr."""
    prior = params.prior if isinstance(params, CsParams) else params
    if not isinstance(prior, TwoPointPrior):
        raise DomainError("mmse_two_point needs a two-point prior")
    return prior.mmse(snr)


def cs_system(params: CsParams, use_closed_form_F: bool = False) -> ScalarSystem:
    """State-evolution pair for the per-component MSE:
    f(y) = mmse(1/sigma2 - y), g(x) = 1/sigma2 - 1/(sigma2 + x/delta).

    The fixed point of f(g(x)) is the MSE of the estimator; x_max is
    mmse(0). F comes from quadrature of f by default (exact up to tolerance
    through the I-MMSE identity); for the Gaussian prior
    use_closed_form_F swaps in the mutual-information expression.
    """
    prior, s2, delta = params.prior, params.sigma2, params.delta
    x_max = float(prior.mmse(0.0))
    if x_max <= 0.0:
        raise ConstructionError("degenerate prior: mmse(0) = 0")

    def g(x):
        return 1.0 / s2 - 1.0 / (s2 + x / delta)

    def g_prime(x):
        return (1.0 / delta) / (s2 + x / delta) ** 2

    def g_second(x):
        return (-2.0 / delta**2) / (s2 + x / delta) ** 3

    def G(x):
        return x / s2 - delta * np.log1p(x / (delta * s2))

    def f(y):
        return prior.mmse(1.0 / s2 - y)

    f_prime = None
    F = None
    if isinstance(prior, GaussianPrior):
        def f_prime(y):
            return -prior.mmse_prime(1.0 / s2 - y)

        if use_closed_form_F:
            base = prior.mutual_information(1.0 / s2)

            def F(y):
                return 2.0 * (base - prior.mutual_information(1.0 / s2 - y))
    elif use_closed_form_F:
        raise ConstructionError("closed-form F is only available for the Gaussian prior")

    return make_system(
        f=f, g=g, x_max=x_max,
        f_prime=f_prime, g_prime=g_prime, g_second=g_second,
        F=F, G=G,
        g_prime_sup=(1.0 / delta) / s2**2,
        g_second_sup=(2.0 / delta**2) / s2**3,
        strictly_increasing_f=isinstance(prior, GaussianPrior)
        or (isinstance(prior, TwoPointPrior) and 0.0 < prior.rho_s < 1.0
            and prior.mass != 0.0),
        name="cs-gaussian" if isinstance(prior, GaussianPrior) else "cs-two-point",
    )


def example1_system() -> ScalarSystem:
    """Quadratic demo pair f(y) = 0.97 y^2, g(x) = 1 - (1-x)^2 on [0, 1].

    Equals the erasure-decoding slice of the (3,3)-regular code family at
    parameter 0.97; everything is closed-form, including the derivative
    suprema (1.94, 2, 2).
    """
    return make_system(
        f=lambda y: 0.97 * y * y,
        g=lambda x: 1.0 - (1.0 - x) ** 2,
        x_max=1.0,
        f_prime=lambda y: 1.94 * y,
        g_prime=lambda x: 2.0 * (1.0 - x),
        g_second=lambda x: -2.0 + 0.0 * x,
        F=lambda y: (97.0 / 300.0) * y**3,
        G=lambda x: x + ((1.0 - x) ** 3 - 1.0) / 3.0,
        f_prime_sup=1.94,
        g_prime_sup=2.0,
        g_second_sup=2.0,
        strictly_increasing_f=True,
        name="example1",
    )


_EX2_R = Polynomial((0.0, 2.0 / 15.0, 1.0 / 15.0, 7.0 / 15.0, 1.0 / 3.0))
_EX2_RP1 = 3.0


def example2_system() -> ScalarSystem:
    """Quintic demo pair f(y) = y^5 with the generator-code check side
    frozen at parameter 1/2: g(x) = 1 - rho(1-x)/2 for the degree profile
    R = 2/15 x + 1/15 x^2 + 7/15 x^3 + 1/3 x^4."""
    rho = Polynomial(tuple(c / _EX2_RP1 for c in _EX2_R.derivative().coeffs))
    rho_p = rho.derivative()
    rho_pp = rho_p.derivative()
    y_max = 1.0 - 0.5 * float(rho(0.0))
    return make_system(
        f=lambda y: y**5,
        g=lambda x: 1.0 - 0.5 * rho(1.0 - x),
        x_max=1.0,
        f_prime=lambda y: 5.0 * y**4,
        g_prime=lambda x: 0.5 * rho_p(1.0 - x),
        g_second=lambda x: -0.5 * rho_pp(1.0 - x),
        F=lambda y: y**6 / 6.0,
        G=lambda x: x - 0.5 * (1.0 - _EX2_R(1.0 - x)) / _EX2_RP1,
        f_prime_sup=5.0 * y_max**4,
        g_prime_sup=0.5 * float(rho_p(1.0)),
        g_second_sup=0.5 * float(rho_pp(1.0)),
        strictly_increasing_f=True,
        name="example2",
    )


def pathological_system() -> ScalarSystem:
    """Identity g with f chosen so the potential is
    x^5 sin^4(pi/x)/25 + x^6/30: its local minima (all fixed points)
    accumulate at 0, so no finite coupling width is certified."""

    def trig(x):
        arr = np.asarray(x, dtype=float)
        safe = np.where(arr > 0.0, arr, 1.0)
        s = np.where(arr > 0.0, np.sin(np.pi / safe), 0.0)
        c = np.where(arr > 0.0, np.cos(np.pi / safe), 1.0)
        return arr, s, c

    def f(x):
        arr, s, c = trig(x)
        out = (arr - 0.2 * arr**4 * s**4 + (4.0 * math.pi / 25.0) * arr**3 * s**3 * c
               - 0.2 * arr**5)
        return float(out) if np.ndim(x) == 0 else out

    def f_prime(x):
        arr, s, c = trig(x)
        out = (1.0 - 0.8 * arr**3 * s**4 + (32.0 * math.pi / 25.0) * arr**2 * s**3 * c
               - (4.0 * math.pi**2 / 25.0) * arr * (3.0 * s**2 * c**2 - s**4)
               - arr**4)
        return float(out) if np.ndim(x) == 0 else out

    def F(x):
        arr, s, _ = trig(x)
        out = 0.5 * arr**2 - arr**5 * s**4 / 25.0 - arr**6 / 30.0
        return float(out) if np.ndim(x) == 0 else out

    return make_system(
        f=f,
        g=lambda x: 1.0 * x,
        x_max=1.0,
        f_prime=f_prime,
        g_prime=lambda x: 1.0 + 0.0 * x,
        g_second=lambda x: 0.0 * x,
        F=F,
        G=lambda x: 0.5 * x**2,
        g_prime_sup=1.0,
        g_second_sup=0.0,
        name="pathological",
    )

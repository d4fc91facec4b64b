"""Jacobi and Gegenbauer polynomials.

Values are computed with the classical three-term recurrence in the degree,
which is stable in the forward direction on [-1, 1].  Every Gamma quotient
goes through ``scipy.special.gammaln`` so that degrees in the tens of
thousands do not overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DegreeCapExceeded

__all__ = [
    "MAX_DEGREE",
    "JacobiParams",
    "jacobi_table",
    "eval_jacobi",
    "jacobi_at_one",
    "eval_normalized",
    "reflect",
    "addition_constant",
    "ratio_at_one",
    "eval_gegenbauer",
    "gegenbauer_at_one",
    "derivative_jacobi",
    "norm_squared",
    "weight_mass",
]

MAX_DEGREE = 10**6

# points this close outside [-1, 1] are clipped, anything further is an error
_T_SLACK = 1e-12


@dataclass(frozen=True)
class JacobiParams:
    """Exponent pair (alpha, beta) of the weight (1 - t)^alpha (1 + t)^beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise ValueError(f"Jacobi parameters must be finite, got ({a}, {b})")
        if a <= -1:
            raise ValueError(f"alpha must be > -1, got {a}")
        if b <= -1:
            raise ValueError(f"beta must be > -1, got {b}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.beta, self.alpha)

    def shifted(self, da: float = 0.0, db: float = 0.0) -> "JacobiParams":
        return JacobiParams(self.alpha + da, self.beta + db)

    def __iter__(self):
        yield self.alpha
        yield self.beta


def _as_params(p) -> JacobiParams:
    if isinstance(p, JacobiParams):
        return p
    alpha, beta = p
    return JacobiParams(alpha, beta)


def _check_degree(k) -> int:
    if int(k) != k or k < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {k!r}")
    k = int(k)
    if k > MAX_DEGREE:
        raise DegreeCapExceeded(f"degree {k} exceeds the supported cap {MAX_DEGREE}")
    return k


def _check_t(t):
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(np.abs(arr) > 1.0 + _T_SLACK):
        raise ValueError("argument t must lie in [-1, 1]")
    return np.clip(arr, -1.0, 1.0)


def _scalar_or_array(out, t_in):
    if np.ndim(t_in) == 0:
        return float(out)
    return out


def jacobi_table(p, kmax: int, t, normalized: bool = False) -> np.ndarray:
    """All values P_0(t), ..., P_kmax(t) as an array of shape (kmax + 1, *t.shape).

    With ``normalized=True`` the rows are R_k = P_k / P_k(1) instead; the
    recurrence is then run directly on R_k so nothing grows with k.
    """
    p = _as_params(p)
    kmax = _check_degree(kmax)
    t = _check_t(t)
    a, b = p.alpha, p.beta
    ab = a + b
    out = np.empty((kmax + 1,) + t.shape)
    out[0] = 1.0
    if kmax == 0:
        return out
    p1 = 0.5 * (a - b) + 0.5 * (ab + 2.0) * t
    out[1] = p1 / (a + 1.0) if normalized else p1
    for k in range(2, kmax + 1):
        c = 2.0 * k + ab
        a1 = 2.0 * k * (k + ab) * (c - 2.0)
        a2 = (c - 1.0) * (a * a - b * b)
        a3 = (c - 2.0) * (c - 1.0) * c
        a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c
        if normalized:
            # R_k = P_k / h_k with h_k / h_{k-1} = (k + a) / k
            s1 = k / (k + a)
            s2 = s1 * (k - 1.0) / (k - 1.0 + a)
            out[k] = ((a2 + a3 * t) * s1 * out[k - 1] - a4 * s2 * out[k - 2]) / a1
        else:
            out[k] = ((a2 + a3 * t) * out[k - 1] - a4 * out[k - 2]) / a1
    return out


def eval_jacobi(p, k: int, t):
    """P_k^{alpha,beta}(t); ``t`` may be a scalar or an array."""
    k = _check_degree(k)
    return _scalar_or_array(jacobi_table(p, k, t)[k], t)


def jacobi_at_one(p, k: int) -> float:
    """P_k(1) = Gamma(k + alpha + 1) / (k! Gamma(alpha + 1))."""
    p = _as_params(p)
    k = _check_degree(k)
    return float(np.exp(gammaln(k + p.alpha + 1.0) - gammaln(k + 1.0) - gammaln(p.alpha + 1.0)))


def eval_normalized(p, k: int, t):
    """R_k(t) = P_k(t) / P_k(1), so that R_k(1) = 1."""
    k = _check_degree(k)
    return _scalar_or_array(jacobi_table(p, k, t, normalized=True)[k], t)


def reflect(p, k: int, t):
    """(-1)^k P_k^{beta,alpha}(t), which equals P_k^{alpha,beta}(-t)."""
    p = _as_params(p)
    k = _check_degree(k)
    sign = -1.0 if k % 2 else 1.0
    return sign * eval_jacobi(p.swapped(), k, t)


def addition_constant(p, k: int) -> float:
    """Constant c_k in the addition formula for the degree-k eigenspace.

    c_k * P_k(1) is the dimension of that eigenspace.  c_0 = 1 exactly, which
    also sidesteps the 0 * Gamma(0) form that appears when alpha + beta = -1.
    """
    p = _as_params(p)
    k = _check_degree(k)
    if k == 0:
        return 1.0
    a, b = p.alpha, p.beta
    log_c = (
        gammaln(b + 1.0)
        + np.log(2.0 * k + a + b + 1.0)
        + gammaln(k + a + b + 1.0)
        - gammaln(a + b + 2.0)
        - gammaln(k + b + 1.0)
    )
    return float(np.exp(log_c))


def ratio_at_one(p, k: int) -> float:
    """P_k^{beta,alpha}(1) / P_k^{alpha,beta}(1) as a Gamma quotient."""
    p = _as_params(p)
    k = _check_degree(k)
    a, b = p.alpha, p.beta
    return float(
        np.exp(gammaln(a + 1.0) - gammaln(b + 1.0) + gammaln(k + b + 1.0) - gammaln(k + a + 1.0))
    )


def _gegenbauer_factor(lam: float, n: int) -> float:
    # C_n^lam = factor * P_n^{lam-1/2, lam-1/2}
    return float(
        np.exp(
            gammaln(lam + 0.5) + gammaln(n + 2.0 * lam) - gammaln(2.0 * lam) - gammaln(n + lam + 0.5)
        )
    )


def _check_lambda(lam) -> float:
    lam = float(lam)
    if not np.isfinite(lam) or lam <= 0:
        raise ValueError(f"Gegenbauer index must be > 0, got {lam}")
    return lam


def eval_gegenbauer(lam: float, n: int, t):
    """Gegenbauer polynomial C_n^lam(t), normalized so C_n^lam(1) = binom(n + 2 lam - 1, n)."""
    lam = _check_lambda(lam)
    n = _check_degree(n)
    p = JacobiParams(lam - 0.5, lam - 0.5)
    return _gegenbauer_factor(lam, n) * eval_jacobi(p, n, t)


def gegenbauer_at_one(lam: float, n: int) -> float:
    lam = _check_lambda(lam)
    n = _check_degree(n)
    return float(np.exp(gammaln(n + 2.0 * lam) - gammaln(2.0 * lam) - gammaln(n + 1.0)))


def derivative_jacobi(p, k: int, t):
    """d/dt P_k^{alpha,beta}(t) = (k + alpha + beta + 1)/2 * P_{k-1}^{alpha+1,beta+1}(t).

    By convention the derivative of the degree-0 polynomial is returned as 0
    rather than raising, so that series can be differentiated term by term.
    """
    p = _as_params(p)
    k = _check_degree(k)
    if k == 0:
        t = _check_t(t)
        return _scalar_or_array(np.zeros_like(t), t)
    scale = 0.5 * (k + p.alpha + p.beta + 1.0)
    return scale * eval_jacobi(p.shifted(1.0, 1.0), k - 1, t)


def weight_mass(p) -> float:
    """Integral of (1 - t)^alpha (1 + t)^beta over [-1, 1]."""
    p = _as_params(p)
    a, b = p.alpha, p.beta
    return float(
        np.exp(
            (a + b + 1.0) * np.log(2.0)
            + gammaln(a + 1.0)
            + gammaln(b + 1.0)
            - gammaln(a + b + 2.0)
        )
    )


def norm_squared(p, k: int) -> float:
    """Weighted squared norm h_k of P_k^{alpha,beta} on [-1, 1]."""
    p = _as_params(p)
    k = _check_degree(k)
    if k == 0:
        return weight_mass(p)
    a, b = p.alpha, p.beta
    log_h = (
        (a + b + 1.0) * np.log(2.0)
        - np.log(2.0 * k + a + b + 1.0)
        + gammaln(k + a + 1.0)
        + gammaln(k + b + 1.0)
        - gammaln(k + a + b + 1.0)
        - gammaln(k + 1.0)
    )
    return float(np.exp(log_h))

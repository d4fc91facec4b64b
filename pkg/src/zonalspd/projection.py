"""Gauss-Jacobi quadrature, coefficient recovery and derivative checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .jacobi import JacobiParams, jacobi_table, norm_squared, weight_mass
from .kernels import KernelExpansion, eval_kernel, truncation_degree, value_at_one
from .spaces import Family, Space

__all__ = [
    "QuadratureRule",
    "MAX_NODES",
    "gauss_jacobi_rule",
    "project_coefficient",
    "project_all",
    "Recovery",
    "recover_expansion",
    "BasisProjection",
    "DerivativeReport",
    "derivative_bases",
    "derivative_series",
    "derivative_check",
    "ANALYTIC_RULES",
]

MAX_NODES = 512
FD_STEP = 1e-5
NEGATIVE_FLAG = -1e-8
VANISH_TOL = 1e-9


@dataclass(frozen=True)
class QuadratureRule:
    params: JacobiParams
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def _recurrence_coefficients(a: float, b: float, n: int):
    """Diagonal and squared off-diagonal of the Jacobi matrix for monic P_k^{a,b}."""
    k = np.arange(n, dtype=float)
    s = 2.0 * k + a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (a + b + 2.0)
    if n > 1:
        diag[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2.0))
    kk = np.arange(1, n, dtype=float)
    s = 2.0 * kk + a + b
    with np.errstate(invalid="ignore", divide="ignore"):
        off2 = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s * s * (s + 1.0) * (s - 1.0))
    if n > 1:
        # k = 1 closed form, cancelling the (1 + a + b) factor that vanishes for a + b = -1
        off2[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
    return diag, off2


@lru_cache(maxsize=256)
def _rule(alpha: float, beta: float, n: int) -> QuadratureRule:
    diag, off2 = _recurrence_coefficients(alpha, beta, n)
    if n == 1:
        nodes, vecs = diag.copy(), np.ones((1, 1))
    else:
        nodes, vecs = eigh_tridiagonal(diag, np.sqrt(off2))
    p = JacobiParams(alpha, beta)
    weights = weight_mass(p) * vecs[0] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(p, nodes, weights)


def gauss_jacobi_rule(p, n: int) -> QuadratureRule:
    """n-point Gauss rule for the weight (1 - t)^alpha (1 + t)^beta (Golub-Welsch).

    Exact for polynomials of degree <= 2n - 1.
    """
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= MAX_NODES:
        raise ValueError(f"node count must be in [1, {MAX_NODES}], got {n!r}")
    p = p if isinstance(p, JacobiParams) else JacobiParams(*p)
    return _rule(p.alpha, p.beta, int(n))


def _sample(f, nodes):
    vals = np.asarray(f(nodes), dtype=float)
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape)
    return vals


def project_all(f, p, kmax: int, n: int) -> np.ndarray:
    """Coefficients c_0..c_kmax of f in the basis P_k^{alpha,beta}, by n-point quadrature."""
    if n < kmax + 1:
        raise ValueError(f"need at least {kmax + 1} nodes for degree {kmax}, got {n}")
    rule = gauss_jacobi_rule(p, n)
    fw = rule.weights * _sample(f, rule.nodes)
    table = jacobi_table(rule.params, kmax, rule.nodes)
    h = np.array([norm_squared(rule.params, k) for k in range(kmax + 1)])
    return table @ fw / h


def project_coefficient(f, p, k: int, n: int) -> float:
    """<f, P_k> / <P_k, P_k> in the Jacobi weight, computed with n nodes.

    Exact when f is a polynomial of degree <= 2n - 1 - k.
    """
    if n < k + 1:
        raise ValueError(f"need at least {k + 1} nodes for degree {k}, got {n}")
    return float(project_all(f, p, k, n)[k])


def _weighted_l2(f, g, p, n: int) -> float:
    rule = gauss_jacobi_rule(p, min(n, MAX_NODES))
    diff = _sample(f, rule.nodes) - _sample(g, rule.nodes)
    return math.sqrt(max(rule.integrate(diff * diff), 0.0))


def _series(coeffs, p):
    def g(t):
        return np.tensordot(coeffs, jacobi_table(p, len(coeffs) - 1, t), axes=1)

    return g


@dataclass(frozen=True)
class Recovery:
    space: Space
    coeffs: np.ndarray
    residual: float
    negative: tuple[int, ...]

    @property
    def positive_definite(self) -> bool:
        """False when some coefficient is negative beyond round-off."""
        return not self.negative


def recover_expansion(f, s: Space, N: int, n: int | None = None) -> Recovery:
    """Recover a_0..a_N of a zonal function on ``s`` by Gauss-Jacobi projection.

    ``residual`` is the weighted L2 distance between f and the truncated
    reconstruction, measured on a finer rule.  Coefficients below -1e-8 are
    listed in ``negative``: such an f is not positive definite on ``s``.
    """
    n = N + 1 if n is None else n
    if n < N + 1:
        raise ValueError(f"need at least {N + 1} nodes to recover degree {N}, got {n}")
    p = s.params
    coeffs = project_all(f, p, N, n)
    residual = _weighted_l2(f, _series(coeffs, p), p, 2 * n + 8)
    negative = tuple(int(k) for k in np.flatnonzero(coeffs < NEGATIVE_FLAG))
    return Recovery(s, coeffs, residual, negative)


ANALYTIC_RULES = {
    "constant": lambda t: np.ones_like(t),
    "linear": lambda t: t,
    "neg-linear": lambda t: -t,
    "exp": np.exp,
    "cosh": np.cosh,
    "inverse-multiquadric": lambda t: 1.0 / np.sqrt(2.0 - t),
}


# -- differentiability -------------------------------------------------------

@dataclass(frozen=True)
class BasisProjection:
    """Projections of g(t) = (1 - t^2) K'(t) onto one Jacobi basis."""

    label: str
    params: JacobiParams | None
    coeffs: np.ndarray | None = None
    degree_bound: int | None = None
    tail_max: float | None = None
    tail_ok: bool | None = None
    residual: float | None = None
    note: str = ""

    @property
    def available(self) -> bool:
        return self.params is not None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "params": None if self.params is None else [self.params.alpha, self.params.beta],
            "coeffs": None if self.coeffs is None else [float(c) for c in self.coeffs],
            "degree_bound": self.degree_bound,
            "tail_max": self.tail_max,
            "tail_ok": self.tail_ok,
            "residual": self.residual,
            "note": self.note,
        }


@dataclass(frozen=True)
class DerivativeReport:
    grid: np.ndarray
    series: np.ndarray
    finite_difference: np.ndarray
    fd_gap: float
    bases: tuple[BasisProjection, ...]

    @property
    def ok(self) -> bool:
        return all(b.tail_ok is not False for b in self.bases)

    def to_dict(self) -> dict:
        return {
            "fd_gap": self.fd_gap,
            "grid": [float(v) for v in self.grid],
            "bases": [b.to_dict() for b in self.bases],
        }


def derivative_bases(s: Space) -> list[tuple[str, JacobiParams | None, str]]:
    """Bases in which (1 - t^2) K' is decomposed, with availability notes.

    (alpha - 1, beta) is always used.  (alpha - 1, beta - 1) is added when
    beta - 1 > -1, and listed as unavailable for complex projective spaces,
    where both bases are named for the same case.  Needs d >= 3, so that
    alpha - 1 > -1.
    """
    if s.d < 3:
        raise ValueError(f"derivative bases need d >= 3, got {s}")
    a, b = s.params
    out = [("(alpha-1, beta)", JacobiParams(a - 1.0, b), "")]
    if b - 1.0 > -1.0:
        out.append(("(alpha-1, beta-1)", JacobiParams(a - 1.0, b - 1.0), ""))
    elif s.family is Family.COMPLEX_PROJECTIVE:
        out.append(("(alpha-1, beta-1)", None, "beta - 1 = -1: weight not integrable, no Gauss rule"))
    return out


def derivative_series(e: KernelExpansion, t, eps: float = 1e-12):
    """Term-wise derivative sum_k a_k P_k'(t), with certified truncation for infinite supports."""
    a, b = e.params
    exponent = max(0, math.ceil(a)) + 2
    prefactor = max(1.0, (a + b + 1.0) / 2.0)
    K, _ = truncation_degree(e, eps, exponent=exponent, prefactor=prefactor)
    coeffs = e.coefficient_vector(K)
    t = np.asarray(t, dtype=float)
    if K == 0:
        return np.zeros_like(t)
    ks = np.arange(1, K + 1)
    scale = 0.5 * (ks + a + b + 1.0) * coeffs[1:]
    table = jacobi_table(e.params.shifted(1.0, 1.0), K - 1, t)
    return np.tensordot(scale, table, axes=1)


def derivative_check(e: KernelExpansion, grid=None, eps: float = 1e-12) -> DerivativeReport:
    """Differentiability checks for a kernel on a space of dimension d >= 3.

    (a) term-wise derivative against central differences (step 1e-5) of the
        kernel; the gap is relative to max(max |K'|, K(1));
    (b) for finite expansions with top index M, the projections of
        g(t) = (1 - t^2) K'(t) vanish beyond degree M + 1 in every basis;
    (c) weighted L2 residual of g against its truncated projection series.
    """
    s = e.space
    if s.d < 3:
        raise ValueError(f"differentiability check needs d >= 3, got {s}")
    grid = np.linspace(-0.9, 0.9, 37) if grid is None else np.asarray(grid, dtype=float)
    if np.any(np.abs(grid) > 0.9):
        raise ValueError("grid must lie inside [-0.9, 0.9]")
    series = derivative_series(e, grid, eps)
    fd_eps = min(eps, 1e-14 * max(1.0, value_at_one(e)))
    hi, _ = eval_kernel(e, grid + FD_STEP, fd_eps)
    lo, _ = eval_kernel(e, grid - FD_STEP, fd_eps)
    fd = (hi - lo) / (2.0 * FD_STEP)
    scale = max(float(np.max(np.abs(series), initial=0.0)), value_at_one(e))
    fd_gap = float(np.max(np.abs(series - fd))) / scale if scale > 0 else 0.0

    def g(t):
        return (1.0 - t * t) * derivative_series(e, t, eps)

    if e.is_finite:
        M = max(e.support.max_index, 0)
        top = M + 5
        degree_bound = M + 1
    else:
        K, _ = truncation_degree(e, eps)
        top = min(K + 1, MAX_NODES - 16)
        degree_bound = None
    nodes = min(top + 8, MAX_NODES)

    bases = []
    for label, p, note in derivative_bases(s):
        if p is None:
            bases.append(BasisProjection(label, None, note=note))
            continue
        coeffs = project_all(g, p, top, nodes)
        residual = _weighted_l2(g, _series(coeffs, p), p, nodes + 16)
        tail_max = tail_ok = None
        if degree_bound is not None:
            tail = coeffs[degree_bound + 1 :]
            tail_max = float(np.max(np.abs(tail), initial=0.0))
            tail_ok = tail_max <= VANISH_TOL * max(1.0, float(np.max(np.abs(coeffs))))
        bases.append(BasisProjection(label, p, coeffs, degree_bound, tail_max, tail_ok, residual, note))
    return DerivativeReport(grid, series, fd, fd_gap, tuple(bases))

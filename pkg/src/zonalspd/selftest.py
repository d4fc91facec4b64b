"""Numerical identity suite for the Jacobi and space modules.

Each check returns the largest residual it saw and compares it with a fixed
tolerance.  ``fast`` keeps degrees at or below 40; ``full`` adds the
large-degree limit checks (k up to 10^4).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import jacobi
from .jacobi import JacobiParams, jacobi_at_one, jacobi_table
from .spaces import catalog, embed_circle, random_points, zonal_argument, zonal_matrix

__all__ = ["Check", "catalog_pairs", "run", "CHECKS_FAST", "CHECKS_FULL"]

T_GRID = np.linspace(-1.0, 1.0, 201)
DECAY_T = (-0.9, 0.5, 0.9)


@dataclass(frozen=True)
class Check:
    name: str
    max_residual: float
    tolerance: float
    seconds: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_residual)) and self.max_residual <= self.tolerance

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (
            f"{mark}  {self.name:<28} max residual {self.max_residual:.3e}"
            f"  (tol {self.tolerance:.0e}, {self.seconds:.2f}s){extra}"
        )


def catalog_pairs(min_d: int = 1, max_d: int = 16) -> list[JacobiParams]:
    """Distinct Jacobi pairs of the catalog spaces with min_d <= d <= max_d."""
    seen = {}
    for s in catalog(max_d):
        if s.d >= min_d:
            seen.setdefault((s.params.alpha, s.params.beta), s.params)
    return list(seen.values())


def _timed(name, tol, fn):
    t0 = time.perf_counter()
    res, detail = fn()
    return Check(name, float(res), tol, time.perf_counter() - t0, detail)


def check_reflection(kmax: int = 40) -> Check:
    def run_():
        worst = 0.0
        for p in catalog_pairs():
            scale_p = p if p.alpha >= p.beta else p.swapped()
            lhs = jacobi_table(p, kmax, -T_GRID)
            for k in range(kmax + 1):
                rhs = jacobi.reflect(p, k, T_GRID)
                scale = max(1.0, jacobi_at_one(scale_p, k))
                worst = max(worst, float(np.max(np.abs(lhs[k] - rhs))) / scale)
        return worst, ""

    return _timed("reflection", 1e-9, run_)


def check_recurrence(kmax: int = 40) -> Check:
    """(1 - t) R_k^{a,b} = 2a/(2k + a + b + 1) [R_k^{a-1,b} - R_{k+1}^{a-1,b}] for a >= 1."""
    t = np.linspace(-0.99, 0.99, 199)

    def run_():
        worst = 0.0
        for p in catalog_pairs():
            a, b = p
            if a < 1:
                continue
            R = jacobi_table(p, kmax, t, normalized=True)
            Rm = jacobi_table(p.shifted(-1.0, 0.0), kmax + 1, t, normalized=True)
            k = np.arange(kmax + 1)[:, None]
            rhs = 2.0 * a / (2.0 * k + a + b + 1.0) * (Rm[:-1] - Rm[1:])
            worst = max(worst, float(np.max(np.abs((1.0 - t) * R - rhs))))
        return worst, ""

    return _timed("recurrence (1-t)R_k", 1e-9, run_)


def check_c0() -> Check:
    def run_():
        return max(abs(jacobi.addition_constant(p, 0) - 1.0) for p in catalog_pairs()), ""

    return _timed("c_0 = 1", 0.0, run_)


def check_gegenbauer_bridge(kmax: int = 30) -> Check:
    """C_{2k}^{(d-1)/2}(t) against C_{2k}(1)/P_k(1) * P_k^{(d-2)/2,-1/2}(2t^2 - 1), relative to C_{2k}(1)."""

    def run_():
        worst = 0.0
        for d in (2, 3, 5):
            lam = (d - 1) / 2
            p = JacobiParams((d - 2) / 2, -0.5)
            jac = jacobi_table(p, kmax, 2.0 * T_GRID**2 - 1.0)
            for k in range(kmax + 1):
                g1 = jacobi.gegenbauer_at_one(lam, 2 * k)
                geg = jacobi.eval_gegenbauer(lam, 2 * k, T_GRID)
                bridge = g1 / jacobi_at_one(p, k) * jac[k]
                worst = max(worst, float(np.max(np.abs(geg - bridge))) / max(1.0, g1))
        return worst, "d in {2,3,5}"

    return _timed("gegenbauer bridge", 1e-9, run_)


def check_boundedness(kmax: int = 40) -> Check:
    def run_():
        worst = 0.0
        for p in catalog_pairs():
            R = jacobi_table(p, kmax, T_GRID, normalized=True)
            worst = max(worst, float(np.max(np.abs(R))) - 1.0)
        return max(worst, 0.0), f"k <= {kmax}"

    return _timed("boundedness |R_k| <= 1", 1e-12, run_)


def check_addition_psd(kmax: int = 25, n: int = 12, seed: int = 0) -> Check:
    """[P_k(t(x_mu, x_nu))] is positive semidefinite on random points."""

    def run_():
        worst = 0.0
        for s in catalog(16, include_cayley=False):
            T = zonal_matrix(s, random_points(s, n, seed))
            tab = jacobi_table(s.params, kmax, T)
            for k in range(kmax + 1):
                lo = float(np.linalg.eigvalsh(tab[k])[0])
                worst = max(worst, -lo / (n * jacobi_at_one(s.params, k)))
        return worst, f"{n} points, k <= {kmax}"

    return _timed("addition-formula PSD", 1e-8, run_)


def check_embedding(pairs: int = 50, seed: int = 0) -> Check:
    def run_():
        rng = np.random.default_rng(seed)
        th = rng.uniform(0.0, 2 * np.pi, size=(pairs, 2))
        worst = 0.0
        for s in catalog(16, include_cayley=False):
            for a, b in th:
                t = zonal_argument(s, embed_circle(s, a), embed_circle(s, b))
                worst = max(worst, abs(t - np.cos(a - b)))
        return worst, ""

    return _timed("circle embedding isometry", 1e-12, run_)


def check_decay(kmin: int = 5000, kmax: int = 10_000) -> Check:
    """max over kmin <= k <= kmax of |R_k(t)| for t in {-0.9, 0.5, 0.9}, d >= 2."""

    def run_():
        worst = 0.0
        where = ""
        t = np.array(DECAY_T)
        for p in catalog_pairs(min_d=2):
            R = jacobi_table(p, kmax, t, normalized=True)[kmin:]
            m = float(np.max(np.abs(R)))
            if m > worst:
                worst, where = m, f"worst at (alpha, beta) = ({p.alpha:g}, {p.beta:g})"
        return worst, where

    return _timed("decay |R_k(t)|", 0.05, run_)


def check_ratio_decay(k: int = 10_000) -> Check:
    """ratio_at_one(k) for pairs with alpha >= beta + 1; also checks monotone decrease."""

    def run_():
        worst = 0.0
        for p in catalog_pairs(min_d=2):
            if p.alpha < p.beta + 1:
                continue
            ks = np.unique(np.geomspace(1, k, 60).astype(int))
            r = np.array([jacobi.ratio_at_one(p, int(j)) for j in ks])
            if np.any(np.diff(r) >= 0):
                return np.inf, f"not decreasing for ({p.alpha:g}, {p.beta:g})"
            worst = max(worst, float(r[-1]))
        return worst, f"k = {k}"

    return _timed("ratio P_k^(b,a)(1)/P_k^(a,b)(1)", 1e-2, run_)


CHECKS_FAST = (
    check_reflection,
    check_recurrence,
    check_c0,
    check_gegenbauer_bridge,
    check_boundedness,
    check_addition_psd,
    check_embedding,
)
CHECKS_FULL = CHECKS_FAST + (check_decay, check_ratio_decay)


def run(level: str = "fast") -> list[Check]:
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    checks = CHECKS_FAST if level == "fast" else CHECKS_FULL
    out = [c() for c in checks]
    if level == "full":
        out[4] = check_boundedness(200)
    return out

"""Gram matrices of zonal kernels and explicit degeneracy constructions.

The constructors here build finite point sets and coefficient vectors c with
c^T A c = 0 for kernels that are positive definite but not strictly so:

* finite support: points on an embedded great circle, where the Gram matrix
  has rank bounded independently of the number of points;
* spheres with finitely many even (or odd) coefficients: antipodal pairs;
* the circle with a support missing a progression nZ + j: n-th roots of unity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, DuplicatePoint
from .kernels import (
    FiniteCoefficients,
    FiniteSupport,
    KernelExpansion,
    eval_kernel,
    progression_avoids_support,
    value_at_one,
)
from .spaces import (
    Family,
    GeometryUnsupported,
    Point,
    Space,
    antipodal_sample,
    embed_circle,
    make_point,
    random_point,
    zonal_matrix,
)

__all__ = [
    "GramReport",
    "Degeneracy",
    "CONFIG_CAP",
    "RANK_TOL",
    "build_gram",
    "psd_report",
    "numerical_rank",
    "quadratic_form",
    "finite_support_degeneracy",
    "parity_degeneracy",
    "antipodal_rank_degeneracy",
    "roots_of_unity_degeneracy",
    "empirical_strictness_probe",
]

CONFIG_CAP = 4096
RANK_TOL = 1e-8
_SYM_TOL = 1e-12


@dataclass(frozen=True)
class GramReport:
    n: int
    min_eig: float
    max_eig: float
    psd: bool
    tol: float
    near_null: np.ndarray | None = None
    residual: float | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "min_eig": self.min_eig,
            "max_eig": self.max_eig,
            "psd": self.psd,
            "tol": self.tol,
            "residual": self.residual,
            "c": None if self.near_null is None else [float(v) for v in self.near_null],
        }


@dataclass(frozen=True)
class Degeneracy:
    """Points and a unit vector c whose Gram quadratic form vanishes."""

    kind: str
    points: list
    c: np.ndarray
    residual: float
    bound: float
    gram: np.ndarray = field(repr=False)

    @property
    def ok(self) -> bool:
        return abs(self.residual) <= self.bound

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": len(self.points),
            "points": [p.as_row().tolist() if isinstance(p, Point) else float(p) for p in self.points],
            "c": [float(v) for v in self.c],
            "residual": self.residual,
            "bound": self.bound,
            "ok": self.ok,
        }


def _check_distinct(s: Space, points, T):
    # only pairs with t near 1 can coincide; confirm with canonical coordinates
    close = np.argwhere(np.triu(T > 1.0 - 1e-9, k=1))
    for i, j in close:
        if points[i] == points[j]:
            raise DuplicatePoint(int(i), int(j))


def build_gram(e: KernelExpansion, points, eps: float = 1e-10) -> np.ndarray:
    """A[mu, nu] = K(t(x_mu, x_nu)); symmetric, with K(1) on the diagonal."""
    if not points:
        raise ValueError("need at least one point")
    s = e.space
    for p in points:
        if p.space != s:
            raise ValueError(f"point on {p.space} does not belong to {s}")
    T = zonal_matrix(s, points)
    _check_distinct(s, points, T)
    iu = np.triu_indices(len(points))
    vals, _ = eval_kernel(e, T[iu], eps)
    A = np.empty_like(T)
    A[iu] = vals
    A.T[iu] = vals
    return A


def quadratic_form(A: np.ndarray, c) -> float:
    c = np.asarray(c, dtype=float)
    return float(c @ A @ c)


def psd_report(A, tol: float = 1e-8) -> GramReport:
    """Spectral summary of a symmetric matrix.

    ``psd`` holds when min_eig >= -tol * max(1, max_eig).  When the smallest
    eigenvalue is that small in absolute value its unit eigenvector is
    returned as ``near_null`` together with the residual c^T A c.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    if np.max(np.abs(A - A.T), initial=0.0) > _SYM_TOL * scale:
        raise ValueError("matrix is not symmetric")
    w, V = np.linalg.eigh(0.5 * (A + A.T))
    lo, hi = float(w[0]), float(w[-1])
    thresh = tol * max(1.0, hi)
    near_null = residual = None
    if abs(lo) <= thresh:
        near_null = V[:, 0]
        residual = quadratic_form(A, near_null)
    return GramReport(A.shape[0], lo, hi, lo >= -thresh, tol, near_null, residual)


def numerical_rank(A, rel_tol: float = RANK_TOL) -> int:
    w = np.linalg.eigvalsh(A)
    return int(np.sum(w > rel_tol * max(w[-1], 0.0)))


def _smallest_eigvec(A):
    w, V = np.linalg.eigh(A)
    return V[:, 0]


def finite_support_degeneracy(e: KernelExpansion, eps: float = 1e-10) -> Degeneracy:
    """2^(N+1) points on an embedded circle whose Gram matrix is singular.

    N is the largest index with a_N > 0.  On the circle the Gram matrix of
    the polynomial kernel has rank at most 2^(N+1) - 1, so one more point
    forces a null vector.
    """
    s = e.space
    if s.family in (Family.CIRCLE, Family.CAYLEY_PLANE):
        raise GeometryUnsupported(f"circle-embedding construction not available on {s}")
    if e.support.is_infinite:
        raise ValueError("expansion has infinite support")
    if e.support.is_empty:
        raise ValueError("expansion is identically zero")
    N = e.support.max_index
    if N + 1 >= 13:
        raise CapExceeded(f"2^(N+1) points with N={N} exceeds the cap of {CONFIG_CAP}")
    n = 2 ** (N + 1)
    points = [embed_circle(s, 2 * np.pi * mu / n) for mu in range(n)]
    A = build_gram(e, points, eps)
    c = _smallest_eigvec(A)
    residual = quadratic_form(A, c)
    bound = 1e-8 * value_at_one(e)
    return Degeneracy("finite_support", points, c, residual, bound, A)


def parity_degeneracy(e: KernelExpansion, parity: str, seed=None, eps: float = 1e-10) -> Degeneracy:
    """Antipodal pair {x, -x} on a sphere for a support of a single parity.

    Even support: K(x, -x) = K(x, x), so c = (1, -1)/sqrt(2) kills the form.
    Odd support: K(x, -x) = -K(x, x), so c = (1, 1)/sqrt(2) does.
    """
    s = e.space
    if s.family is not Family.SPHERE:
        raise ValueError(f"parity construction needs a sphere, got {s}")
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    sup = e.support
    want = 0 if parity == "even" else 1
    if sup.is_empty:
        raise ValueError("expansion is identically zero")
    bad = [k for k in sup.added if k % 2 != want]
    bad += [(m, r) for m, r in sup.aps if m % 2 == 1 or r % 2 != want]
    if bad:
        raise ValueError(f"support is not entirely {parity}: {bad[:3]}")
    x = random_point(s, seed)
    y = antipodal_sample(s, x)
    c = np.array([1.0, -1.0 if parity == "even" else 1.0]) / np.sqrt(2.0)
    A = build_gram(e, [x, y], eps)
    residual = quadratic_form(A, c)
    bound = 1e-10 * value_at_one(e)
    return Degeneracy(f"parity_{parity}", [x, y], c, residual, bound, A)


def antipodal_rank_degeneracy(e: KernelExpansion, missing: str, eps: float = 1e-10) -> Degeneracy:
    """Sphere kernel with finitely many indices of parity ``missing``.

    Uses n great-circle points in [0, pi) together with their antipodes.
    For c = (u, -u) (missing odd) or c = (u, u) (missing even) the infinite
    part cancels between a point and its antipode, leaving 4 u^T B u with B
    the Gram matrix of the finite part on the n points.  n = 2^(M+1), M the
    largest index of the finite parity, makes B singular.
    """
    s = e.space
    if s.family is not Family.SPHERE:
        raise ValueError(f"antipodal construction needs a sphere, got {s}")
    if missing not in ("even", "odd"):
        raise ValueError(f"missing must be 'even' or 'odd', got {missing!r}")
    sup = e.support
    want = 0 if missing == "even" else 1
    if any(m % 2 == 1 or r % 2 == want for m, r in sup.aps):
        raise ValueError(f"support has infinitely many {missing} indices")
    finite = [k for k in sup.added if k % 2 == want and k in sup]
    if isinstance(sup, FiniteSupport):
        finite = [k for k in sup.indices if k % 2 == want]
    M = max(finite, default=-1)
    if M + 1 >= 12:
        raise CapExceeded(f"2^(M+2) points with M={M} exceeds the cap of {CONFIG_CAP}")
    n = 2 ** (M + 1) if M >= 0 else 1
    half = [embed_circle(s, np.pi * mu / n) for mu in range(n)]
    points = half + [make_point(s, -np.asarray(p.coords)) for p in half]
    sign = -1.0 if missing == "odd" else 1.0
    if M >= 0:
        vals = [(k, e.coefficient(k)) for k in finite]
        part = KernelExpansion(s, FiniteCoefficients(tuple(sorted(vals))))
        u = _smallest_eigvec(build_gram(part, half, eps))
    else:
        u = np.ones(1)
    c = np.concatenate([u, sign * u]) / np.sqrt(2.0)
    A = build_gram(e, points, eps)
    residual = quadratic_form(A, c)
    bound = 1e-8 * value_at_one(e)
    return Degeneracy(f"antipodal_{missing}", points, c, residual, bound, A)


def roots_of_unity_degeneracy(e: KernelExpansion, ap, eps: float = 1e-10) -> Degeneracy:
    """n-th roots of unity on the circle for a support missing nZ + j.

    With c_mu = cos(2 pi mu j / n), sum_mu c_mu exp(i 2 pi mu k / n) vanishes
    unless k = +-j mod n, which the support never hits.
    """
    s = e.space
    if s.family is not Family.CIRCLE:
        raise ValueError(f"roots-of-unity construction needs the circle, got {s}")
    n, j = (int(v) for v in ap)
    if n < 2:
        raise ValueError(f"need a modulus n >= 2, got {n}")
    if n > CONFIG_CAP:
        raise CapExceeded(f"{n} points exceeds the cap of {CONFIG_CAP}")
    if not progression_avoids_support(e.support, n, j):
        raise ValueError(f"support meets the progression {n}Z + {j % n}")
    mu = np.arange(1, n + 1)
    angles = 2 * np.pi * mu / n
    c = np.cos(2 * np.pi * mu * (j % n) / n)
    c /= np.linalg.norm(c)
    points = [make_point(s, a) for a in angles]
    A = build_gram(e, points, eps)
    residual = quadratic_form(A, c)
    bound = 1e-9 * n**2 * value_at_one(e)
    return Degeneracy("roots_of_unity", points, c, residual, bound, A)


def empirical_strictness_probe(
    e: KernelExpansion,
    n: int,
    seed=None,
    eps: float = 1e-10,
    tol: float = 1e-8,
    include_antipodal: bool = False,
) -> GramReport:
    """Gram report on n seeded random points.

    Corroborates a strict verdict (the smallest eigenvalue stays clear of 0);
    it does not prove it.  With ``include_antipodal`` the last point is
    replaced by an antipode of the first.
    """
    if not 1 <= n <= 64:
        raise ValueError(f"probe size must be in [1, 64], got {n}")
    s = e.space
    rng = np.random.default_rng(seed)
    points = [random_point(s, rng) for _ in range(n)]
    if include_antipodal and n >= 2:
        points[-1] = antipodal_sample(s, points[0], rng)
    return psd_report(build_gram(e, points, eps), tol)

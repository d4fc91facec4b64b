"""Two-point homogeneous spaces: catalog, point models and the zonal argument.

Every kernel formula only consumes t = cos(|xy|/2), so the models here are
built to produce that number directly: t = 1 at coincidence and t = -1
exactly on the antipodal manifold of a point.

Coordinate models
-----------------
circle                 angle theta in [0, 2 pi)
sphere(d)              unit vector in R^(d+1)
real_projective(d)     unit vector in R^(d+1) modulo sign
complex_projective(d)  unit vector in C^(d/2+1) modulo a global phase
quaternion_projective  unit vector in H^(d/4+1) modulo right multiplication
                       by a unit quaternion; stored as an (m, 4) real array
cayley_plane           catalog only, no coordinates
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .jacobi import JacobiParams

__all__ = [
    "Family",
    "Space",
    "Point",
    "GeometryUnsupported",
    "space_params",
    "catalog",
    "make_point",
    "zonal_argument",
    "zonal_matrix",
    "embed_circle",
    "antipodal_sample",
    "random_point",
    "random_points",
]

_NORM_TOL = 1e-12


class Family(str, enum.Enum):
    CIRCLE = "circle"
    SPHERE = "sphere"
    REAL_PROJECTIVE = "real_projective"
    COMPLEX_PROJECTIVE = "complex_projective"
    QUATERNION_PROJECTIVE = "quaternion_projective"
    CAYLEY_PLANE = "cayley_plane"


_BETA = {
    Family.REAL_PROJECTIVE: -0.5,
    Family.COMPLEX_PROJECTIVE: 0.0,
    Family.QUATERNION_PROJECTIVE: 1.0,
    Family.CAYLEY_PLANE: 3.0,
}


class GeometryUnsupported(ValueError):
    """The space has no point model for the requested operation."""


@dataclass(frozen=True)
class Space:
    """A compact two-point homogeneous space, identified by family and real dimension.

    ``Space("sphere", 1)`` is routed to the circle.
    """

    family: Family
    d: int

    def __post_init__(self):
        try:
            family = Family(self.family)
        except ValueError:
            raise ValueError(f"unknown space family {self.family!r}") from None
        if isinstance(self.d, bool) or int(self.d) != self.d:
            raise ValueError(f"dimension must be an integer, got {self.d!r}")
        d = int(self.d)
        if family is Family.SPHERE and d == 1:
            family = Family.CIRCLE
        ok = {
            Family.CIRCLE: d == 1,
            Family.SPHERE: d >= 2,
            Family.REAL_PROJECTIVE: d >= 2,
            Family.COMPLEX_PROJECTIVE: d >= 4 and d % 2 == 0,
            Family.QUATERNION_PROJECTIVE: d >= 8 and d % 4 == 0,
            Family.CAYLEY_PLANE: d == 16,
        }[family]
        if not ok:
            raise ValueError(f"invalid dimension d={d} for {family.value}")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "d", d)

    @property
    def params(self) -> JacobiParams:
        return space_params(self)

    @property
    def has_geometry(self) -> bool:
        return self.family is not Family.CAYLEY_PLANE

    @property
    def coord_shape(self) -> tuple[int, ...]:
        f, d = self.family, self.d
        if f is Family.CIRCLE:
            return ()
        if f in (Family.SPHERE, Family.REAL_PROJECTIVE):
            return (d + 1,)
        if f is Family.COMPLEX_PROJECTIVE:
            return (d // 2 + 1,)
        if f is Family.QUATERNION_PROJECTIVE:
            return (d // 4 + 1, 4)
        raise GeometryUnsupported("the Cayley plane has no coordinate model")

    def __str__(self):
        return f"{self.family.value}({self.d})"


def space_params(s: Space) -> JacobiParams:
    """Jacobi pair attached to the space: alpha = (d - 2)/2, beta by family."""
    alpha = (s.d - 2) / 2
    beta = alpha if s.family in (Family.CIRCLE, Family.SPHERE) else _BETA[s.family]
    return JacobiParams(alpha, beta)


def catalog(max_d: int = 16, include_cayley: bool = True) -> list[Space]:
    """All admissible spaces with d <= max_d, circle first."""
    out = [Space(Family.CIRCLE, 1)]
    out += [Space(Family.SPHERE, d) for d in range(2, max_d + 1)]
    out += [Space(Family.REAL_PROJECTIVE, d) for d in range(2, max_d + 1)]
    out += [Space(Family.COMPLEX_PROJECTIVE, d) for d in range(4, max_d + 1, 2)]
    out += [Space(Family.QUATERNION_PROJECTIVE, d) for d in range(8, max_d + 1, 4)]
    if include_cayley and max_d >= 16:
        out.append(Space(Family.CAYLEY_PLANE, 16))
    return out


# -- quaternion helpers on (..., 4) arrays ---------------------------------

def _qmul(p, q):
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def _qconj(q):
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def _quaternion_inner(x, y):
    """sum_i conj(x_i) y_i for (m, 4) arrays."""
    return _qmul(_qconj(x), y).sum(axis=-2)


class Point:
    """A point of a space, stored as a canonical coordinate representative."""

    __slots__ = ("space", "coords")

    def __init__(self, space: Space, coords):
        self.space = space
        self.coords = coords

    def __repr__(self):
        return f"Point({self.space}, {np.array2string(np.asarray(self.coords), precision=6)})"

    def __eq__(self, other):
        if not isinstance(other, Point) or other.space != self.space:
            return NotImplemented
        if self.space.family is Family.CIRCLE:
            diff = abs(self.coords - other.coords)
            return min(diff, 2 * np.pi - diff) <= _NORM_TOL
        return bool(np.allclose(self.coords, other.coords, rtol=0.0, atol=_NORM_TOL))

    __hash__ = None

    def as_row(self) -> np.ndarray:
        """Flat real row for the point CSV format."""
        c = self.coords
        if self.space.family is Family.CIRCLE:
            return np.array([c])
        if self.space.family is Family.COMPLEX_PROJECTIVE:
            return np.column_stack([c.real, c.imag]).ravel()
        return np.asarray(c, dtype=float).ravel()


def _canonical(s: Space, c):
    f = s.family
    if f is Family.CIRCLE:
        return float(np.mod(c, 2 * np.pi))
    if f is Family.SPHERE:
        return c
    if f is Family.QUATERNION_PROJECTIVE:
        mags = np.linalg.norm(c, axis=-1)
        i = int(np.argmax(mags > _NORM_TOL))
        q = c[i] / mags[i]
        out = _qmul(c, _qconj(q))
        out[i] = [mags[i], 0.0, 0.0, 0.0]
        return out
    mags = np.abs(c)
    i = int(np.argmax(mags > _NORM_TOL))
    if f is Family.REAL_PROJECTIVE:
        return c if c[i] > 0 else -c
    out = c * (np.conj(c[i]) / mags[i])
    out[i] = mags[i]
    return out


def make_point(s: Space, coords) -> Point:
    """Validate coordinates for ``s`` and return the canonical point."""
    if not s.has_geometry:
        raise GeometryUnsupported("the Cayley plane has no coordinate model")
    if s.family is Family.CIRCLE:
        theta = float(np.asarray(coords, dtype=float).reshape(()))
        if not np.isfinite(theta):
            raise ValueError("angle must be finite")
        return Point(s, _canonical(s, theta))
    dtype = complex if s.family is Family.COMPLEX_PROJECTIVE else float
    c = np.array(coords, dtype=dtype)
    if c.shape != s.coord_shape:
        raise ValueError(f"{s} expects coordinates of shape {s.coord_shape}, got {c.shape}")
    norm = np.sqrt(np.sum(np.abs(c) ** 2))
    if abs(norm - 1.0) > _NORM_TOL:
        raise ValueError(f"coordinates must have unit norm, got {norm!r}")
    c = _canonical(s, c)
    c.setflags(write=False)
    return Point(s, c)


def _check_same_space(s: Space, *points: Point):
    if not s.has_geometry:
        raise GeometryUnsupported("the Cayley plane has no coordinate model")
    for x in points:
        if x.space != s:
            raise ValueError(f"point lives on {x.space}, expected {s}")


def _gram_of_coords(s: Space, X, Y):
    """Matrix of t-values between coordinate stacks X (n, ...) and Y (m, ...)."""
    f = s.family
    if f is Family.CIRCLE:
        return np.cos(X[:, None] - Y[None, :])
    if f is Family.SPHERE:
        return X @ Y.T
    if f is Family.REAL_PROJECTIVE:
        return 2.0 * (X @ Y.T) ** 2 - 1.0
    if f is Family.COMPLEX_PROJECTIVE:
        return 2.0 * np.abs(np.conj(X) @ Y.T) ** 2 - 1.0
    # quaternions: |sum_i conj(x_i) y_i|^2
    ip = _quaternion_inner(X[:, None], Y[None, :])
    return 2.0 * np.sum(ip**2, axis=-1) - 1.0


def zonal_argument(s: Space, x: Point, y: Point) -> float:
    """t = cos(|xy|/2) in the point model of ``s``."""
    _check_same_space(s, x, y)
    if x == y:
        return 1.0
    X = np.asarray(x.coords)[None]
    Y = np.asarray(y.coords)[None]
    return float(np.clip(_gram_of_coords(s, X, Y)[0, 0], -1.0, 1.0))


def zonal_matrix(s: Space, points) -> np.ndarray:
    """Symmetric matrix of zonal arguments with an exact unit diagonal."""
    _check_same_space(s, *points)
    X = np.array([p.coords for p in points])
    T = np.clip(_gram_of_coords(s, X, X), -1.0, 1.0)
    T = 0.5 * (T + T.T)
    np.fill_diagonal(T, 1.0)
    return T


def embed_circle(s: Space, theta: float) -> Point:
    """Image of the circle point ``theta`` under the embedding S^1 -> s.

    The embedding is isometric in the t coordinate: the zonal argument of two
    images is cos(theta1 - theta2).
    """
    if not s.has_geometry:
        raise GeometryUnsupported("no circle embedding model for the Cayley plane")
    theta = float(theta)
    f = s.family
    if f is Family.CIRCLE:
        return make_point(s, theta)
    if f is Family.SPHERE:
        c = np.zeros(s.coord_shape)
        c[0], c[1] = np.cos(theta), np.sin(theta)
        return make_point(s, c)
    # projective: the half-angle great circle doubles the angle in t
    half = 0.5 * np.mod(theta, 2 * np.pi)
    c = np.zeros(s.coord_shape, dtype=complex if f is Family.COMPLEX_PROJECTIVE else float)
    if f is Family.QUATERNION_PROJECTIVE:
        c[0, 0], c[1, 0] = np.cos(half), np.sin(half)
    else:
        c[0], c[1] = np.cos(half), np.sin(half)
    return make_point(s, c)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _gaussian_coords(s: Space, rng):
    if s.family is Family.COMPLEX_PROJECTIVE:
        shape = s.coord_shape
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return rng.standard_normal(s.coord_shape)


def _normalize(c):
    return c / np.sqrt(np.sum(np.abs(c) ** 2))


def random_point(s: Space, seed=None) -> Point:
    """Uniform random point (normalized Gaussian), deterministic in ``seed``."""
    if not s.has_geometry:
        raise GeometryUnsupported("cannot sample the Cayley plane")
    rng = _rng(seed)
    if s.family is Family.CIRCLE:
        return make_point(s, rng.uniform(0.0, 2 * np.pi))
    return make_point(s, _normalize(_gaussian_coords(s, rng)))


def random_points(s: Space, n: int, seed=None) -> list[Point]:
    rng = _rng(seed)
    return [random_point(s, rng) for _ in range(n)]


def antipodal_sample(s: Space, x: Point, seed=None) -> Point:
    """A point y with zonal_argument(s, x, y) == -1.

    On a sphere this is -x.  On projective spaces the antipodal manifold is
    a whole projective subspace; a random unit vector orthogonal to x (in the
    appropriate real, complex or quaternionic sense) is returned.
    """
    _check_same_space(s, x)
    f = s.family
    if f is Family.CIRCLE:
        raise GeometryUnsupported("antipodal sampling is not provided for the circle")
    if f is Family.SPHERE:
        return make_point(s, -np.asarray(x.coords))
    rng = _rng(seed)
    xc = np.asarray(x.coords)
    for _ in range(16):
        v = _gaussian_coords(s, rng)
        if f is Family.QUATERNION_PROJECTIVE:
            q = _quaternion_inner(xc, v)
            v = v - _qmul(xc, q[None, :])
        else:
            v = v - xc * np.vdot(xc, v)
        norm = np.sqrt(np.sum(np.abs(v) ** 2))
        if norm > 1e-6:
            return make_point(s, v / norm)
    raise RuntimeError("failed to sample an orthogonal direction")  # pragma: no cover

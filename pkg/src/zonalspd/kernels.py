"""Kernel expansions sum_k a_k P_k^{alpha,beta}(t) and their strictness classification.

Two coefficient rules are supported:

* finite: an explicit list of (k, a_k) pairs;
* geometric: a_k = C * rho**k on a support described by finitely many
  arithmetic progressions, plus finitely many added and removed indices.

Both are automatically summable against the polynomial growth of P_k(1),
which is what makes the truncation bounds in :func:`eval_kernel` possible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import (
    DuplicateIndex,
    InvalidField,
    LcmOverflow,
    NegativeCoefficient,
    NonSummable,
    TruncationError,
)
from .jacobi import MAX_DEGREE, gegenbauer_at_one, jacobi_at_one, jacobi_table
from .spaces import Family, Space

__all__ = [
    "FiniteSupport",
    "StructuredSupport",
    "FiniteCoefficients",
    "GeometricCoefficients",
    "KernelExpansion",
    "Status",
    "FiniteSupportWitness",
    "ParityWitness",
    "MissedProgression",
    "Verdict",
    "GegenbauerView",
    "LCM_CAP",
    "validate_expansion",
    "expansion_to_dict",
    "truncation_degree",
    "tail_bound",
    "eval_kernel",
    "partial_sum",
    "meets_all_arithmetic_progressions",
    "progression_avoids_support",
    "classify_spd",
    "rp_gegenbauer_view",
]

LCM_CAP = 2**32

# residues are scanned in blocks of this size when the lcm is large
_CHUNK = 1 << 22


# -- support descriptors ----------------------------------------------------

@dataclass(frozen=True)
class FiniteSupport:
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted({int(k) for k in self.indices}))
        if idx and idx[0] < 0:
            raise InvalidField("support", f"negative index {idx[0]}")
        object.__setattr__(self, "indices", idx)

    aps = ()
    added = property(lambda self: self.indices)
    removed = ()

    def __contains__(self, k) -> bool:
        return k in self.indices

    @property
    def is_infinite(self) -> bool:
        return False

    @property
    def is_empty(self) -> bool:
        return not self.indices

    @property
    def max_index(self) -> int:
        return self.indices[-1] if self.indices else -1

    def indices_upto(self, kmax: int) -> np.ndarray:
        return np.array([k for k in self.indices if k <= kmax], dtype=int)


@dataclass(frozen=True)
class StructuredSupport:
    """Union of progressions {k >= 0 : k = r mod m}, plus ``added``, minus ``removed``."""

    aps: tuple[tuple[int, int], ...] = ()
    added: tuple[int, ...] = ()
    removed: tuple[int, ...] = ()

    def __post_init__(self):
        aps = []
        for i, ap in enumerate(self.aps):
            try:
                m, r = (int(v) for v in ap)
            except (TypeError, ValueError):
                raise InvalidField(f"support.aps[{i}]", "expected [modulus, residue]") from None
            if m < 1 or not 0 <= r < m:
                raise InvalidField(f"support.aps[{i}]", f"need m >= 1 and 0 <= r < m, got ({m}, {r})")
            aps.append((m, r))
        aps = tuple(sorted(set(aps)))
        added = tuple(sorted({int(k) for k in self.added}))
        removed = tuple(sorted({int(k) for k in self.removed}))
        for name, ks in (("added", added), ("removed", removed)):
            if ks and ks[0] < 0:
                raise InvalidField(f"support.{name}", f"negative index {ks[0]}")
        both = set(added) & set(removed)
        if both:
            raise InvalidField("support", f"indices both added and removed: {sorted(both)}")
        for k in removed:
            if not any(k % m == r for m, r in aps):
                raise InvalidField("support.removed", f"index {k} is not in any listed progression")
        object.__setattr__(self, "aps", aps)
        object.__setattr__(self, "added", added)
        object.__setattr__(self, "removed", removed)

    def in_progressions(self, k: int) -> bool:
        return any(k % m == r for m, r in self.aps)

    def __contains__(self, k) -> bool:
        k = int(k)
        if k < 0 or k in self.removed:
            return False
        return k in self.added or self.in_progressions(k)

    @property
    def is_infinite(self) -> bool:
        return bool(self.aps)

    @property
    def is_empty(self) -> bool:
        return not self.aps and not self.added

    @property
    def lcm(self) -> int:
        return math.lcm(*(m for m, _ in self.aps)) if self.aps else 1

    @property
    def max_index(self) -> int:
        """Largest index, only meaningful when the support is finite."""
        if self.aps:
            raise ValueError("support is infinite")
        return self.added[-1] if self.added else -1

    def indices_upto(self, kmax: int) -> np.ndarray:
        ks = np.arange(kmax + 1)
        mask = np.zeros(kmax + 1, dtype=bool)
        for m, r in self.aps:
            mask[r::m] = True
        for k in self.added:
            if k <= kmax:
                mask[k] = True
        for k in self.removed:
            if k <= kmax:
                mask[k] = False
        return ks[mask]


SupportDescriptor = Union[FiniteSupport, StructuredSupport]


# -- coefficient rules -------------------------------------------------------

@dataclass(frozen=True)
class FiniteCoefficients:
    values: tuple[tuple[int, float], ...]

    @property
    def support(self) -> FiniteSupport:
        return FiniteSupport(tuple(k for k, _ in self.values))

    def coefficient(self, k: int) -> float:
        return dict(self.values).get(int(k), 0.0)


@dataclass(frozen=True)
class GeometricCoefficients:
    scale: float
    ratio: float
    support: SupportDescriptor

    def coefficient(self, k: int) -> float:
        return self.scale * self.ratio ** int(k) if int(k) in self.support else 0.0


@dataclass(frozen=True)
class KernelExpansion:
    space: Space
    coeffs: Union[FiniteCoefficients, GeometricCoefficients]

    @property
    def params(self):
        return self.space.params

    @property
    def support(self) -> SupportDescriptor:
        return self.coeffs.support

    @property
    def is_finite(self) -> bool:
        return not self.support.is_infinite

    def coefficient(self, k: int) -> float:
        return self.coeffs.coefficient(k)

    def coefficient_vector(self, kmax: int) -> np.ndarray:
        """Dense a_0..a_kmax."""
        a = np.zeros(kmax + 1)
        if isinstance(self.coeffs, FiniteCoefficients):
            for k, v in self.coeffs.values:
                if k <= kmax:
                    a[k] = v
        else:
            ks = self.support.indices_upto(kmax)
            a[ks] = self.coeffs.scale * self.coeffs.ratio ** ks.astype(float)
        return a

    def scaled(self, factor: float) -> "KernelExpansion":
        if factor <= 0:
            raise ValueError("scaling factor must be positive")
        if isinstance(self.coeffs, FiniteCoefficients):
            vals = tuple((k, factor * v) for k, v in self.coeffs.values)
            return KernelExpansion(self.space, FiniteCoefficients(vals))
        c = self.coeffs
        return KernelExpansion(self.space, GeometricCoefficients(factor * c.scale, c.ratio, c.support))


# -- parsing -----------------------------------------------------------------

def _parse_space(raw) -> Space:
    if not isinstance(raw, dict):
        raise InvalidField("space", "expected an object with 'family' and 'd'")
    if "family" not in raw:
        raise InvalidField("space.family", "missing")
    if "d" not in raw:
        raise InvalidField("space.d", "missing")
    try:
        return Space(raw["family"], raw["d"])
    except ValueError as exc:
        raise InvalidField("space", str(exc)) from None


def _as_index(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
        raise InvalidField(where, f"expected a nonnegative integer index, got {v!r}")
    if v < 0:
        raise InvalidField(where, f"index must be nonnegative, got {v!r}")
    return int(v)


def _as_real(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise InvalidField(where, f"expected a finite real number, got {v!r}")
    return float(v)


def _parse_support(raw) -> StructuredSupport:
    if not isinstance(raw, dict):
        raise InvalidField("coeffs.support", "expected an object with 'aps', 'added', 'removed'")
    unknown = set(raw) - {"aps", "added", "removed"}
    if unknown:
        raise InvalidField("coeffs.support", f"unknown fields {sorted(unknown)}")
    aps = []
    for i, ap in enumerate(raw.get("aps", [])):
        if not isinstance(ap, (list, tuple)) or len(ap) != 2:
            raise InvalidField(f"coeffs.support.aps[{i}]", "expected [modulus, residue]")
        aps.append((_as_index(ap[0], f"coeffs.support.aps[{i}][0]"), _as_index(ap[1], f"coeffs.support.aps[{i}][1]")))
    added = [_as_index(v, f"coeffs.support.added[{i}]") for i, v in enumerate(raw.get("added", []))]
    removed = [_as_index(v, f"coeffs.support.removed[{i}]") for i, v in enumerate(raw.get("removed", []))]
    return StructuredSupport(tuple(aps), tuple(added), tuple(removed))


def validate_expansion(raw) -> KernelExpansion:
    """Build a :class:`KernelExpansion` from its JSON form.

    Zero coefficients are dropped.  Raises ``NegativeCoefficient``,
    ``DuplicateIndex``, ``NonSummable`` or ``InvalidField``.
    """
    if isinstance(raw, KernelExpansion):
        return raw
    if not isinstance(raw, dict):
        raise InvalidField("spec", "expected a JSON object")
    space = _parse_space(raw.get("space"))
    coeffs = raw.get("coeffs")
    if not isinstance(coeffs, dict):
        raise InvalidField("coeffs", "expected an object with a 'type' field")
    kind = coeffs.get("type")
    if kind == "finite":
        values = coeffs.get("values")
        if not isinstance(values, list):
            raise InvalidField("coeffs.values", "expected a list of [k, a_k] pairs")
        seen = set()
        kept = []
        for i, pair in enumerate(values):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise InvalidField(f"coeffs.values[{i}]", "expected a [k, a_k] pair")
            k = _as_index(pair[0], f"coeffs.values[{i}][0]")
            a = _as_real(pair[1], f"coeffs.values[{i}][1]")
            if k in seen:
                raise DuplicateIndex(k)
            seen.add(k)
            if a < 0:
                raise NegativeCoefficient(k)
            if a > 0:
                kept.append((k, a))
        return KernelExpansion(space, FiniteCoefficients(tuple(sorted(kept))))
    if kind == "geometric":
        for key in ("scale", "ratio", "support"):
            if key not in coeffs:
                raise InvalidField(f"coeffs.{key}", "missing")
        scale = _as_real(coeffs["scale"], "coeffs.scale")
        ratio = _as_real(coeffs["ratio"], "coeffs.ratio")
        if scale <= 0:
            raise InvalidField("coeffs.scale", f"must be > 0, got {scale}")
        if ratio <= 0:
            raise InvalidField("coeffs.ratio", f"must be > 0, got {ratio}")
        if ratio >= 1:
            raise NonSummable(ratio)
        support = _parse_support(coeffs["support"])
        return KernelExpansion(space, GeometricCoefficients(scale, ratio, support))
    raise InvalidField("coeffs.type", f"expected 'finite' or 'geometric', got {kind!r}")


def expansion_to_dict(e: KernelExpansion) -> dict:
    out = {"space": {"family": e.space.family.value, "d": e.space.d}}
    c = e.coeffs
    if isinstance(c, FiniteCoefficients):
        out["coeffs"] = {"type": "finite", "values": [[k, a] for k, a in c.values]}
    else:
        sup = c.support
        out["coeffs"] = {
            "type": "geometric",
            "scale": c.scale,
            "ratio": c.ratio,
            "support": {
                "aps": [list(ap) for ap in sup.aps],
                "added": list(sup.added),
                "removed": list(sup.removed),
            },
        }
    return out


# -- evaluation --------------------------------------------------------------

def _growth_exponent(e: KernelExpansion) -> int:
    # P_k(1) = binom(k + alpha, k) <= (k + 1)^ceil(alpha)
    return max(0, math.ceil(e.params.alpha))


def tail_bound(scale: float, ratio: float, exponent: int, kmax: int, prefactor: float = 1.0) -> float:
    """Upper bound on sum_{k > kmax} prefactor * scale * ratio^k * (k + 1)^exponent.

    Consecutive terms past kmax shrink at least by the factor
    q = ratio * ((kmax + 3) / (kmax + 2))^exponent, so the tail is bounded by a
    geometric series once q < 1.
    """
    log_q = math.log(ratio) + exponent * math.log((kmax + 3) / (kmax + 2))
    if log_q >= 0:
        return math.inf
    log_first = math.log(prefactor * scale) + (kmax + 1) * math.log(ratio) + exponent * math.log(kmax + 2)
    return math.exp(log_first) / -math.expm1(log_q)


def truncation_degree(e: KernelExpansion, eps: float, exponent: int | None = None, prefactor: float = 1.0) -> tuple[int, float]:
    """Smallest-ish degree K whose certified tail bound is <= eps, with that bound.

    Finite expansions return their maximal index and a bound of 0.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if e.is_finite:
        return max(e.support.max_index, 0), 0.0
    c = e.coeffs
    if exponent is None:
        exponent = _growth_exponent(e)

    def bound(K):
        return tail_bound(c.scale, c.ratio, exponent, K, prefactor)

    hi = 1
    while bound(hi) > eps:
        if hi >= MAX_DEGREE:
            raise TruncationError(eps, bound(MAX_DEGREE), MAX_DEGREE)
        hi = min(2 * hi, MAX_DEGREE)
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= eps:
            hi = mid
        else:
            lo = mid
    if bound(lo) <= eps:
        hi = lo
    return hi, bound(hi)


def partial_sum(e: KernelExpansion, t, kmax: int):
    """sum_{k <= kmax} a_k P_k(t) with no truncation bookkeeping."""
    a = e.coefficient_vector(kmax)
    nz = np.flatnonzero(a)
    if nz.size == 0:
        return np.zeros_like(np.asarray(t, dtype=float)) + 0.0
    top = int(nz[-1])
    table = jacobi_table(e.params, top, t)
    return np.tensordot(a[: top + 1], table, axes=1)


def eval_kernel(e: KernelExpansion, t, eps: float = 1e-10):
    """Evaluate the kernel's isotropic part at ``t`` (scalar or array).

    Returns ``(value, bound)`` where ``bound`` certifies the truncation error
    |value - exact| <= bound <= eps; finite expansions are summed exactly and
    report a bound of 0.  Floating point rounding is not part of the bound.
    """
    K, bound = truncation_degree(e, eps)
    value = partial_sum(e, t, K)
    if np.ndim(t) == 0:
        value = float(value)
    return value, bound


def value_at_one(e: KernelExpansion, eps: float = 1e-12) -> float:
    """K(1) = sum_k a_k P_k(1), the largest value the kernel takes."""
    return eval_kernel(e, 1.0, eps)[0]


# -- arithmetic progressions -------------------------------------------------

def _symmetrized_aps(sup: StructuredSupport) -> list[tuple[int, int]]:
    out = set()
    for m, r in sup.aps:
        out.add((m, r))
        out.add((m, (-r) % m))
    return sorted(out)


def _uncovered_residue(aps, L: int):
    """First residue mod L outside every progression, or None if they cover Z."""
    for start in range(0, L, _CHUNK):
        size = min(_CHUNK, L - start)
        covered = np.zeros(size, dtype=bool)
        for m, r in aps:
            covered[(r - start) % m :: m] = True
        if not covered.all():
            return start + int(np.argmin(covered))
    return None


def _avoiding_subprogression(n: int, j: int, finite) -> tuple[int, int]:
    """A progression inside nZ + j that misses every element of ``finite``."""
    hits = [(f - j) // n for f in finite if (f - j) % n == 0]
    if not hits:
        return n, j
    b = max(abs(h) for h in hits)
    modulus = n * (2 * b + 2)
    return modulus, (j + n * (b + 1)) % modulus


def meets_all_arithmetic_progressions(sup: SupportDescriptor):
    """Does {k in Z : |k| in sup} meet every progression nZ + j?

    Returns ``(True, None)`` or ``(False, (n, j))`` with a progression the
    symmetrized support misses.  The progressions in the descriptor decide
    the answer: their symmetrized union must cover every residue modulo the
    lcm L of their moduli.  Finitely many extra indices cannot help, because
    a progression met only finitely often contains a sub-progression that is
    not met at all.
    """
    if isinstance(sup, FiniteSupport):
        aps, finite, L = [], sup.indices, 1
    else:
        aps, finite = _symmetrized_aps(sup), sup.added
        moduli = [m for m, _ in aps]
        L = 1
        for m in moduli:
            L = math.lcm(L, m)
            if L > LCM_CAP:
                raise LcmOverflow(f"lcm of the moduli exceeds {LCM_CAP}")
    j = _uncovered_residue(aps, L) if aps else 0
    if j is None:
        return True, None
    sym_finite = sorted({f for k in finite for f in (k, -k)})
    return False, _avoiding_subprogression(L, j, sym_finite)


def progression_avoids_support(sup: SupportDescriptor, n: int, j: int) -> bool:
    """True iff no k with |k| in the support lies in nZ + j."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    j %= n
    finite = sup.indices if isinstance(sup, FiniteSupport) else sup.added
    for k in finite:
        if k in sup and (k % n == j or (-k) % n == j):
            return False
    if isinstance(sup, StructuredSupport):
        for m, r in _symmetrized_aps(sup):
            # {x = r mod m} meets {x = j mod n} iff gcd(m, n) | (r - j); the
            # intersection is then infinite, so finitely many removals cannot empty it
            if (r - j) % math.gcd(m, n) == 0:
                return False
    return True


# -- classification ----------------------------------------------------------

class Status(str, enum.Enum):
    ZERO_KERNEL = "ZeroKernel"
    NOT_STRICT = "PositiveDefiniteNotStrict"
    STRICT = "StrictlyPositiveDefinite"


@dataclass(frozen=True)
class FiniteSupportWitness:
    max_index: int
    kind: str = field(default="finite_support", init=False)

    def describe(self) -> str:
        return f"finite support (max index {self.max_index})"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "max_index": self.max_index}


@dataclass(frozen=True)
class ParityWitness:
    missing: str  # "even" or "odd": the parity with only finitely many indices
    kind: str = field(default="parity", init=False)

    def describe(self) -> str:
        return f"finitely many {self.missing} indices"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "missing": self.missing}


@dataclass(frozen=True)
class MissedProgression:
    modulus: int
    residue: int
    kind: str = field(default="missed_progression", init=False)

    def describe(self) -> str:
        return f"support misses the progression {self.modulus}Z + {self.residue}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "modulus": self.modulus, "residue": self.residue}


Witness = Union[FiniteSupportWitness, ParityWitness, MissedProgression]


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: str = ""
    witness: Witness | None = None

    @property
    def strict(self) -> bool:
        return self.status is Status.STRICT

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "reason": self.reason,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


def _parities(sup: SupportDescriptor) -> tuple[bool, bool]:
    """(infinitely many even, infinitely many odd) indices."""
    even = any(m % 2 == 1 or r % 2 == 0 for m, r in sup.aps)
    odd = any(m % 2 == 1 or r % 2 == 1 for m, r in sup.aps)
    return even, odd


def classify_spd(e: KernelExpansion) -> Verdict:
    """Decide strict positive definiteness from the support of the coefficients.

    * circle: the symmetrized support must meet every arithmetic progression;
    * spheres, d >= 2: infinitely many even and infinitely many odd indices;
    * every other space: infinitely many indices.
    """
    sup = e.support
    if sup.is_empty:
        return Verdict(Status.ZERO_KERNEL, "all coefficients vanish")
    fam = e.space.family
    if fam is Family.CIRCLE:
        ok, ap = meets_all_arithmetic_progressions(sup)
        if ok:
            return Verdict(Status.STRICT, "support meets every arithmetic progression")
        w = MissedProgression(*ap)
        return Verdict(Status.NOT_STRICT, w.describe(), w)
    if not sup.is_infinite:
        w = FiniteSupportWitness(sup.max_index)
        return Verdict(Status.NOT_STRICT, w.describe(), w)
    if fam is Family.SPHERE:
        even, odd = _parities(sup)
        if even and odd:
            return Verdict(Status.STRICT, "infinitely many even and odd indices")
        w = ParityWitness("odd" if even else "even")
        return Verdict(Status.NOT_STRICT, w.describe(), w)
    return Verdict(Status.STRICT, "infinitely many indices")


# -- real projective spaces through Gegenbauer polynomials -------------------

@dataclass(frozen=True)
class GegenbauerView:
    """An expansion on P^d(R) rewritten as sum_k b_{2k} C_{2k}^{(d-1)/2}(cos(|xy|/4))."""

    expansion: KernelExpansion

    @property
    def lam(self) -> float:
        return (self.expansion.space.d - 1) / 2

    def multiplier(self, k: int) -> float:
        """Positive factor turning a_k into the Gegenbauer coefficient of degree 2k."""
        return jacobi_at_one(self.expansion.params, k) / gegenbauer_at_one(self.lam, 2 * k)

    def coefficient(self, two_k: int) -> float:
        if two_k % 2:
            return 0.0
        k = two_k // 2
        return self.expansion.coefficient(k) * self.multiplier(k)

    @property
    def support(self) -> SupportDescriptor:
        sup = self.expansion.support
        if isinstance(sup, FiniteSupport):
            return FiniteSupport(tuple(2 * k for k in sup.indices))
        return StructuredSupport(
            tuple((2 * m, 2 * r) for m, r in sup.aps),
            tuple(2 * k for k in sup.added),
            tuple(2 * k for k in sup.removed),
        )

    @property
    def infinitely_many_positive(self) -> bool:
        return self.support.is_infinite

    def describe(self) -> str:
        if self.infinitely_many_positive:
            return "a_{2k} > 0 infinitely often"
        return "a_{2k} > 0 only finitely often"


def rp_gegenbauer_view(e: KernelExpansion) -> GegenbauerView:
    if e.space.family is not Family.REAL_PROJECTIVE:
        raise ValueError(f"Gegenbauer reindexing needs a real projective space, got {e.space}")
    return GegenbauerView(e)

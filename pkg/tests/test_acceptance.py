"""Acceptance criteria 1-8, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section at the end of the pytest run.  Running this
file directly prints them as well.
"""

import math
import time

import numpy as np
import pytest

from zonalspd import selftest
from zonalspd.gram import (
    build_gram,
    finite_support_degeneracy,
    numerical_rank,
    parity_degeneracy,
    psd_report,
    roots_of_unity_degeneracy,
)
from zonalspd.jacobi import jacobi_at_one, jacobi_table
from zonalspd.kernels import (
    Status,
    classify_spd,
    eval_kernel,
    meets_all_arithmetic_progressions,
    validate_expansion,
    value_at_one,
)
from zonalspd.projection import derivative_check, gauss_jacobi_rule, recover_expansion
from zonalspd.spaces import Family, Space, catalog, random_points, zonal_matrix

from conftest import SPACES, finite_spec, geometric_spec, record
from oracles import ap_search, random_structured
from test_projection import beta_moment

# pinned tolerances
IDENTITY_TOL = 1e-9
IDENTITY_SECONDS = 5.0
DECAY_LIMIT = 0.05
RATIO_LIMIT = 1e-2
LIMIT_SECONDS = 30.0
PSD_SLACK = 1e-8
DEGENERACY_REL = 1e-8
SMALL_RESIDUAL_REL = 1e-9
PROBE_MIN_EIG = 1e-10
PROBE_EPS = 1e-12
QUADRATURE_REL = 1e-12
ROUND_TRIP_ABS = 1e-8
FD_REL = 1e-6
VANISH = 1e-9


def test_criterion_1_identity_suite():
    t0 = time.perf_counter()
    checks = [
        selftest.check_reflection(40),
        selftest.check_recurrence(40),
        selftest.check_c0(),
        selftest.check_gegenbauer_bridge(40),
    ]
    elapsed = time.perf_counter() - t0
    worst = max(c.max_residual for c in checks)
    ok = worst <= IDENTITY_TOL and elapsed < IDENTITY_SECONDS
    record(1, ok, f"identity suite max residual {worst:.2e} (<= {IDENTITY_TOL:g}), {elapsed:.2f}s (< {IDENTITY_SECONDS:g}s)")
    assert ok


def test_criterion_2_limit_properties():
    t0 = time.perf_counter()
    ts = np.array([-0.9, 0.5, 0.9])
    worst_decay = 0.0
    worst_ratio = 0.0
    for p in selftest.catalog_pairs(min_d=2):
        R = jacobi_table(p, 10_000, ts, normalized=True)[5000:]
        worst_decay = max(worst_decay, float(np.max(np.abs(R))))
        if p.alpha >= p.beta + 1:
            # P_k^{beta,alpha}(1) / P_k^{alpha,beta}(1) straight from the table values
            num = jacobi_table(p.swapped(), 10_000, 1.0)[-1]
            worst_ratio = max(worst_ratio, float(num / jacobi_at_one(p, 10_000)))
    elapsed = time.perf_counter() - t0
    ok = worst_decay <= DECAY_LIMIT and worst_ratio < RATIO_LIMIT and elapsed < LIMIT_SECONDS
    record(2, ok, f"max |R_k| on [5000, 10^4] = {worst_decay:.3e} (<= {DECAY_LIMIT}); max ratio at 10^4 = {worst_ratio:.2e} (< {RATIO_LIMIT:g}); {elapsed:.1f}s")
    assert ok


def test_criterion_3_addition_formula_psd():
    worst = -math.inf
    for s in catalog(16, include_cayley=False):
        T = zonal_matrix(s, random_points(s, 12, seed=2024))
        tab = jacobi_table(s.params, 25, T)
        for k in range(26):
            lo = float(np.linalg.eigvalsh(tab[k])[0])
            worst = max(worst, -lo / (12 * jacobi_at_one(s.params, k)))
    ok = worst <= PSD_SLACK
    record(3, ok, f"worst -min_eig / (12 P_k(1)) = {worst:.2e} (<= {PSD_SLACK:g}) over {len(catalog(16, False))} spaces, k <= 25")
    assert ok


def test_criterion_4_constructive_degeneracies():
    rng = np.random.default_rng(4)
    failures = []
    worst = 0.0
    families = [Space("sphere", 3), Space("real_projective", 4), Space("complex_projective", 6), Space("quaternion_projective", 8)]
    for s in families:
        for N in range(0, 6):
            vals = [(k, float(rng.uniform(0.2, 2.0))) for k in range(N + 1)]
            e = validate_expansion(finite_spec(s, vals))
            deg = finite_support_degeneracy(e)
            scale = sum(a * jacobi_at_one(s.params, k) for k, a in vals)
            rel = abs(deg.residual) / scale
            worst = max(worst, rel / DEGENERACY_REL)
            if classify_spd(e).status is not Status.NOT_STRICT:
                failures.append(f"{s} N={N} not classified as not strict")
            if rel > DEGENERACY_REL:
                failures.append(f"{s} N={N} residual {rel:.2e}")
            if numerical_rank(deg.gram) > 2 ** (N + 1) - 1:
                failures.append(f"{s} N={N} rank {numerical_rank(deg.gram)}")
    for d in (2, 3, 5):
        s = Space("sphere", d)
        for parity, aps in (("even", [(2, 0)]), ("odd", [(2, 1)])):
            e = validate_expansion(geometric_spec(s, 0.7, aps))
            if classify_spd(e).status is not Status.NOT_STRICT:
                failures.append(f"{s} {parity} not classified as not strict")
            deg = parity_degeneracy(e, parity, seed=d)
            rel = abs(deg.residual) / value_at_one(e)
            worst = max(worst, rel / SMALL_RESIDUAL_REL)
            if rel > SMALL_RESIDUAL_REL:
                failures.append(f"{s} parity {parity} residual {rel:.2e}")
    circle = Space("circle", 1)
    for aps, added in (([(2, 0)], []), ([(3, 0)], []), ([(4, 0), (4, 1), (4, 3)], []), ([(5, 0), (5, 2)], [1])):
        e = validate_expansion(geometric_spec(circle, 0.6, aps, added))
        v = classify_spd(e)
        if v.status is not Status.NOT_STRICT:
            failures.append(f"circle {aps} not classified as not strict")
            continue
        deg = roots_of_unity_degeneracy(e, (v.witness.modulus, v.witness.residue))
        rel = abs(deg.residual) / value_at_one(e)
        worst = max(worst, rel / SMALL_RESIDUAL_REL)
        if rel > SMALL_RESIDUAL_REL:
            failures.append(f"circle {aps} residual {rel:.2e}")
    ok = not failures
    record(4, ok, f"worst residual / allowed = {worst:.2e}" + ("" if ok else f"; {failures[:3]}"))
    assert ok, failures


def test_criterion_5_classifier_matches_oracle():
    rng = np.random.default_rng(5)
    disagreements = 0
    strict = 0
    for _ in range(100):
        sup = random_structured(rng, max_product=10_000)
        assert math.prod(m for m, _ in sup.aps) <= 10_000
        ours = meets_all_arithmetic_progressions(sup)[0]
        strict += ours
        disagreements += ours != ap_search(sup)
    ok = disagreements == 0
    record(5, ok, f"100 descriptors ({strict} covering), {disagreements} disagreements with the brute-force search")
    assert ok


def _random_strict(s: Space, rng):
    ratio = float(rng.uniform(0.4, 0.9))
    while True:
        if rng.random() < 0.5:
            aps = [(1, 0)]
        else:
            aps = [(int(m), int(rng.integers(m))) for m in rng.choice([2, 3, 4], size=int(rng.integers(1, 4)))]
        e = validate_expansion(geometric_spec(s, ratio, aps, added=[0]))
        if classify_spd(e).strict:
            return e


def test_criterion_6_strictness_probes():
    rng = np.random.default_rng(6)
    trials = 0
    worst = math.inf
    bad = []
    for s in SPACES:
        for _ in range(20):
            e = _random_strict(s, rng)
            pts = random_points(s, 10, rng)
            r = psd_report(build_gram(e, pts, PROBE_EPS))
            trials += 1
            worst = min(worst, r.min_eig)
            if not r.min_eig > PROBE_MIN_EIG:
                bad.append((str(s), r.min_eig))
    ok = not bad and trials == 200
    record(6, ok, f"{trials} strict trials, smallest min_eig {worst:.3e} (> {PROBE_MIN_EIG:g}), {len(bad)} singular probes")
    assert ok, bad


def test_criterion_7_quadrature_and_recovery():
    worst_q = 0.0
    for p in selftest.catalog_pairs():
        a, b = p
        for n in (4, 16, 64):
            rule = gauss_jacobi_rule(p, n)
            for j in range(2 * n):
                for side, base in (("minus", 1 - rule.nodes), ("plus", 1 + rule.nodes)):
                    ref = beta_moment(a, b, j, side)
                    worst_q = max(worst_q, abs(rule.integrate(base**j) - ref) / ref)
    rng = np.random.default_rng(7)
    worst_r = 0.0
    for s in SPACES:
        for _ in range(100):
            M = int(rng.integers(0, 41))
            ks = sorted(set(rng.integers(0, M + 1, size=int(rng.integers(1, 6))).tolist()) | {M})
            e = validate_expansion(finite_spec(s, [(k, float(rng.uniform(0.05, 3.0))) for k in ks]))
            rec = recover_expansion(lambda t: eval_kernel(e, t)[0], s, M)
            worst_r = max(worst_r, float(np.max(np.abs(rec.coeffs - e.coefficient_vector(M)))))
    ok = worst_q <= QUADRATURE_REL and worst_r <= ROUND_TRIP_ABS
    record(7, ok, f"quadrature rel error {worst_q:.2e} (<= {QUADRATURE_REL:g}); round-trip error {worst_r:.2e} (<= {ROUND_TRIP_ABS:g}) over {len(SPACES)} x 100 expansions")
    assert ok


def test_criterion_8_differentiability():
    rng = np.random.default_rng(8)
    worst_fd = 0.0
    worst_tail = 0.0
    count = 0
    for s in catalog(16):
        if s.d < 3:
            continue
        for _ in range(3):
            M = int(rng.integers(1, 16))
            ks = sorted(set(rng.integers(0, M, size=3).tolist()) | {M})
            e = validate_expansion(finite_spec(s, [(k, float(rng.uniform(0.1, 2.0))) for k in ks]))
            r = derivative_check(e)
            count += 1
            worst_fd = max(worst_fd, r.fd_gap)
            for b in r.bases:
                if b.available:
                    scale = max(1.0, float(np.max(np.abs(b.coeffs))))
                    worst_tail = max(worst_tail, b.tail_max / scale)
    ok = worst_fd <= FD_REL and worst_tail <= VANISH
    record(8, ok, f"{count} expansions: finite-difference gap {worst_fd:.2e} (<= {FD_REL:g}); projections beyond M+1 {worst_tail:.2e} (<= {VANISH:g})")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from zonalspd.jacobi import JacobiParams
from zonalspd.kernels import eval_kernel, validate_expansion
from zonalspd.projection import (
    ANALYTIC_RULES,
    MAX_NODES,
    derivative_bases,
    derivative_check,
    gauss_jacobi_rule,
    project_all,
    project_coefficient,
    recover_expansion,
)
from zonalspd.spaces import Space, catalog

from conftest import SPACES, finite_spec, geometric_spec

PAIRS = sorted({tuple(s.params) for s in catalog(16)})
S2 = Space("sphere", 2)
RP3 = Space("real_projective", 3)


def beta_moment(a, b, j, side):
    """Closed form of int (1-t)^a (1+t)^b (1 -/+ t)^j dt over [-1, 1]."""
    if side == "minus":
        a = a + j
    else:
        b = b + j
    return 2.0 ** (a + b + 1) * special.beta(a + 1, b + 1)


@pytest.mark.parametrize("a,b", PAIRS)
@pytest.mark.parametrize("n", [4, 16, 64])
def test_exactness_degree(a, b, n):
    rule = gauss_jacobi_rule((a, b), n)
    for j in range(2 * n):
        for side, base in (("minus", 1 - rule.nodes), ("plus", 1 + rule.nodes)):
            ref = beta_moment(a, b, j, side)
            assert rule.integrate(base**j) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("a,b", PAIRS[::3])
def test_rule_matches_scipy(a, b):
    x, w = special.roots_jacobi(20, a, b)
    rule = gauss_jacobi_rule((a, b), 20)
    assert np.allclose(rule.nodes, x, atol=1e-13)
    assert np.allclose(rule.weights, w, rtol=1e-11)


def test_rule_validation():
    with pytest.raises(ValueError):
        gauss_jacobi_rule((0, 0), 0)
    with pytest.raises(ValueError):
        gauss_jacobi_rule((0, 0), MAX_NODES + 1)
    r = gauss_jacobi_rule((0.5, -0.5), 1)
    assert r.nodes.shape == (1,) and r.integrate(np.ones(1)) == pytest.approx(np.pi, rel=1e-14)


def test_project_coefficient_example():
    e = validate_expansion(finite_spec(S2, [(0, 1), (3, 2)]))
    c = project_coefficient(lambda t: eval_kernel(e, t)[0], S2.params, 3, 8)
    assert c == pytest.approx(2.0, abs=1e-10)
    with pytest.raises(ValueError):
        project_coefficient(np.cos, S2.params, 5, 4)


def test_recover_examples():
    rec = recover_expansion(ANALYTIC_RULES["linear"], S2, 1)
    assert np.allclose(rec.coeffs, [0, 1], atol=1e-14) and rec.positive_definite
    rec = recover_expansion(ANALYTIC_RULES["neg-linear"], S2, 1)
    assert rec.coeffs[1] == pytest.approx(-1) and rec.negative == (1,)
    assert not rec.positive_definite
    with pytest.raises(ValueError):
        recover_expansion(np.cos, S2, 5, 3)


@pytest.mark.parametrize("s", catalog(16), ids=str)
def test_round_trip(s, rng):
    for _ in range(5):
        M = int(rng.integers(0, 41))
        ks = sorted(set(rng.integers(0, M + 1, size=4).tolist()) | {M})
        vals = [(k, float(rng.uniform(0.1, 2.0))) for k in ks]
        e = validate_expansion(finite_spec(s, vals))
        rec = recover_expansion(lambda t: eval_kernel(e, t)[0], s, M + 2)
        assert np.max(np.abs(rec.coeffs - e.coefficient_vector(M + 2))) <= 1e-8
        assert rec.residual <= 1e-10 * max(1.0, sum(v for _, v in vals))


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.sampled_from(PAIRS))
def test_projection_linearity(c1, c2, p):
    f, g = np.exp, lambda t: 1.0 / np.sqrt(2.0 - t)
    n = 40
    pf = project_all(f, p, 20, n)
    pg = project_all(g, p, 20, n)
    both = project_all(lambda t: c1 * f(t) + c2 * g(t), p, 20, n)
    assert np.max(np.abs(both - (c1 * pf + c2 * pg))) <= 1e-10 * max(1.0, abs(c1) + abs(c2))


@pytest.mark.parametrize("s", SPACES, ids=str)
def test_analytic_rules_reconstruct(s):
    for name in ("exp", "cosh", "inverse-multiquadric"):
        rec = recover_expansion(ANALYTIC_RULES[name], s, 30, 64)
        assert rec.residual <= 1e-9


def test_geometric_recovery():
    e = validate_expansion(geometric_spec(RP3, 0.4))
    rec = recover_expansion(lambda t: eval_kernel(e, t, 1e-14)[0], RP3, 20, 48)
    assert np.max(np.abs(rec.coeffs - e.coefficient_vector(20))) <= 1e-9


# -- differentiability -------------------------------------------------------

def test_derivative_examples():
    e = validate_expansion(finite_spec(RP3, [(0, 1)]))
    r = derivative_check(e)
    assert np.all(r.series == 0) and r.fd_gap <= 1e-6
    for b in r.bases:
        if b.available:
            assert np.max(np.abs(b.coeffs)) <= 1e-12
    e = validate_expansion(finite_spec(RP3, [(1, 1)]))
    r = derivative_check(e)
    assert r.ok
    for b in r.bases:
        if b.available:
            assert b.degree_bound == 2 and b.tail_max <= 1e-9
    e = validate_expansion(geometric_spec(RP3, 0.5))
    assert derivative_check(e).fd_gap <= 1e-6


def test_derivative_guards():
    with pytest.raises(ValueError):
        derivative_check(validate_expansion(finite_spec(S2, [(1, 1)])))
    e = validate_expansion(finite_spec(RP3, [(1, 1)]))
    with pytest.raises(ValueError):
        derivative_check(e, grid=np.array([0.95]))


def test_derivative_bases():
    labels = {str(s): [(lab, p) for lab, p, _ in derivative_bases(s)] for s in catalog(12) if s.d >= 3}
    with pytest.raises(ValueError):
        derivative_bases(S2)
    cp = labels["complex_projective(4)"]
    assert cp[0][1] == JacobiParams(0.0, 0.0) and cp[1][1] is None
    qp = labels["quaternion_projective(8)"]
    assert [p for _, p in qp] == [JacobiParams(2.0, 1.0), JacobiParams(2.0, 0.0)]
    rp = labels["real_projective(5)"]
    assert len(rp) == 1


@pytest.mark.parametrize("s", [s for s in catalog(16) if s.d >= 3], ids=str)
def test_derivative_degree_bound(s, rng):
    M = int(rng.integers(1, 12))
    vals = [(k, float(rng.uniform(0.1, 1.0))) for k in range(0, M + 1, 2)] + ([(M, 1.0)] if M % 2 else [])
    e = validate_expansion(finite_spec(s, vals))
    r = derivative_check(e)
    assert r.fd_gap <= 1e-6
    for b in r.bases:
        if b.available:
            assert b.tail_ok and b.tail_max <= 1e-9
    assert r.ok

import math

import numpy as np
import pytest
from scipy.optimize import minimize

from contact_delta.curvature import (
    CurvaturePoint, delta_gaps, delta_report, inequality_rhs, riemann, scalar_curvature,
    sectional, xi_jacobi_operator,
)
from contact_delta.frame import CanonicalForm, canonical_shape_operator, ruled_shape_operator, shape_operator
from contact_delta.numerics import InvalidInputError, min_eigenvalue

SQRT5 = math.sqrt(5)
R_STAR = 0.5 * math.log((1 + SQRT5 + math.sqrt(2 + 2 * SQRT5)) / 2)


def point(A, c, n=None):
    return CurvaturePoint(shape_operator(A, n), c)


def sphere():
    return point(np.diag([0.0, 1.0, 1.0]), 1)


def horosphere():
    return point(np.diag([2.0, 1.0, 1.0]), -1)


def type_b_rstar():
    t = math.tanh(R_STAR)
    return point(np.diag([2 * math.tanh(2 * R_STAR), t, 1 / t]), -1)


def random_point(rng, n):
    m = 2 * n - 1
    a = rng.uniform(-2, 2, size=(m, m))
    return point((a + a.T) / 2, rng.choice([-1, 1]), n)


def test_riemann_antisymmetric_diagonal():
    e = np.eye(3)
    assert np.allclose(riemann(sphere(), e[1], e[1], e[2]), 0)


def test_riemann_hand_values():
    e = np.eye(3)
    assert np.allclose(riemann(sphere(), e[1], e[2], e[2]), 5 * e[1])
    assert np.allclose(riemann(horosphere(), e[1], e[2], e[2]), -3 * e[1])


def test_sectional_hand_values():
    e = np.eye(3)
    assert math.isclose(sectional(sphere(), e[0], e[1]), 1.0)
    assert math.isclose(sectional(sphere(), e[1], e[2]), 5.0)
    for c in (-1, 1):
        for beta in (0.3, 1.7):
            p = CurvaturePoint(ruled_shape_operator(beta), c)
            assert math.isclose(sectional(p, e[0], e[1]), c - beta ** 2)


def test_sectional_rejects_non_orthonormal():
    e = np.eye(3)
    with pytest.raises(InvalidInputError):
        sectional(sphere(), e[0], 2 * e[1])
    with pytest.raises(InvalidInputError):
        sectional(sphere(), e[0], e[0])


def test_scalar_curvature_hand_values():
    assert math.isclose(scalar_curvature(sphere()), 7.0)
    assert math.isclose(scalar_curvature(horosphere()), -1.0)
    for c in (-1, 1):
        p = CurvaturePoint(ruled_shape_operator(0.8), c)
        assert math.isclose(scalar_curvature(p), 6 * c - 0.64)


def test_tau_convention_calibration():
    """Pair sum without a factor 2: the r = pi/4 sphere in CP^2 lands on the bound."""
    rep = delta_report(sphere())
    assert (rep.tau, rep.inf_k_xi, rep.delta_c2, rep.rhs) == pytest.approx((7, 1, 6, 6), abs=1e-14)
    # a doubled pair sum would miss the bound by a wide margin
    assert abs(2 * rep.tau - rep.inf_k_xi - rep.rhs) > 1


def test_xi_jacobi_values():
    assert np.allclose(xi_jacobi_operator(sphere()), np.eye(2))
    for c in (-1, 1):
        p = CurvaturePoint(ruled_shape_operator(1.3), c)
        assert np.allclose(np.sort(np.linalg.eigvalsh(xi_jacobi_operator(p))), [c - 1.69, c])
    assert math.isclose(float(min_eigenvalue(xi_jacobi_operator(type_b_rstar()))), 2 - SQRT5, abs_tol=1e-12)


def test_xi_jacobi_matches_riemann():
    rng = np.random.default_rng(1)
    for n in (2, 3):
        p = random_point(rng, n)
        e = np.eye(2 * n - 1)
        J = np.array([[riemann(p, e[i], e[0], e[0]) @ e[j] for j in range(1, 2 * n - 1)]
                      for i in range(1, 2 * n - 1)])
        assert np.allclose(J, xi_jacobi_operator(p), atol=1e-12)


def test_delta_reports():
    rep = delta_report(horosphere())
    assert (rep.delta_c2, rep.rhs, rep.gap, rep.ideal) == (-2.0, -1.0, 1.0, False)
    rep = delta_report(type_b_rstar())
    assert abs(rep.delta_c2 - (SQRT5 - 3)) <= 1e-12
    assert abs(rep.gap) <= 1e-10 and rep.ideal
    assert set(rep.to_json()) == {"tau", "inf_k_xi", "delta", "rhs", "gap", "ideal"}


def test_rhs_formula():
    assert inequality_rhs(2.0, 2, 1) == pytest.approx(9 / 4 * 4 / 9 + 5)
    assert inequality_rhs(0.0, 3, -1) == -15


@pytest.mark.parametrize("n", [2, 3, 4])
def test_curvature_tensor_symmetries(n):
    rng = np.random.default_rng(10 + n)
    m = 2 * n - 1
    for _ in range(1000 // 3):
        p = random_point(rng, n)
        X, Y, Z, W = rng.normal(size=(4, m))
        r = riemann(p, X, Y, Z) @ W
        assert abs(r + riemann(p, Y, X, Z) @ W) <= 1e-10
        assert abs(r - riemann(p, Z, W, X) @ Y) <= 1e-10
        # first Bianchi identity
        b = riemann(p, X, Y, Z) + riemann(p, Y, Z, X) + riemann(p, Z, X, Y)
        assert np.abs(b).max() <= 1e-10


@pytest.mark.parametrize("n", [2, 3, 4])
def test_vectorised_gap_matches_loop(n):
    rng = np.random.default_rng(n)
    pts = [random_point(rng, n) for _ in range(50)]
    for c in (-1, 1):
        loop = np.array([delta_report(CurvaturePoint(p.S, c)).gap for p in pts])
        vec = delta_gaps(np.stack([p.S.A for p in pts]), n, c)
        assert np.allclose(loop, vec, atol=1e-12)


def _sampled_inf(p, rng, samples=10000):
    m = p.S.frame.m
    X = rng.normal(size=(samples, m - 1))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    full = np.hstack([np.zeros((samples, 1)), X])
    xi = np.eye(m)[0]
    ks = np.array([sectional(p, xi, x) for x in full])
    best = full[ks.argmin(), 1:]

    def k(v):
        v = v / np.linalg.norm(v)
        return sectional(p, xi, np.concatenate([[0.0], v]))

    res = minimize(k, best, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000})
    return ks.min(), float(res.fun)


@pytest.mark.parametrize("n", [2, 3])
def test_inf_k_against_sampling_oracle(n):
    rng = np.random.default_rng(77 + n)
    for _ in range(5):
        p = random_point(rng, n)
        exact = delta_report(p).inf_k_xi
        raw, refined = _sampled_inf(p, rng)
        assert raw >= exact - 1e-12
        assert refined >= exact - 1e-12
        assert refined - exact <= 1e-8


@pytest.mark.parametrize("n", [2, 3, 4])
def test_inequality_random_audit(n):
    rng = np.random.default_rng(1234 + n)
    m = 2 * n - 1
    a = rng.uniform(-2, 2, size=(10000, m, m))
    A = (a + np.swapaxes(a, 1, 2)) / 2
    for c in (-1, 1):
        assert delta_gaps(A, n, c).min() >= -1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_canonical_forms_attain_equality(n):
    rng = np.random.default_rng(n)
    A = np.stack([canonical_shape_operator(CanonicalForm(*rng.uniform(-3, 3, size=3), n)).A
                  for _ in range(1000)])
    for c in (-1, 1):
        assert np.abs(delta_gaps(A, n, c)).max() <= 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_perturbed_canonical_forms_leave_equality(n):
    """Off-canonical perturbations of the mu-block (size >= 1e-3) give a positive gap."""
    rng = np.random.default_rng(9 + n)
    m = 2 * n - 1
    for _ in range(500):
        A = canonical_shape_operator(CanonicalForm(*rng.uniform(-3, 3, size=3), n)).A.copy()
        eps = 10 ** rng.uniform(-3, -1)
        # break mu*Id on the complement of span{xi, e2}, or break alpha + gamma = mu
        if m > 3 and rng.random() < 0.5:
            i = rng.integers(2, m)
            A[i, i] += eps
        else:
            A[1, 1] += eps
        for c in (-1, 1):
            assert float(delta_gaps(A, n, c)) > 0


@pytest.mark.parametrize("c", [-1, 1])
def test_minimal_ruled_equality(c):
    for beta in np.linspace(-4, 4, 101):
        if beta == 0:
            continue
        for n in (2, 3):
            assert abs(delta_report(CurvaturePoint(ruled_shape_operator(beta, n=n), c)).gap) <= 1e-12


def test_curvature_point_rejects_flat():
    with pytest.raises(InvalidInputError):
        CurvaturePoint(shape_operator(np.eye(3)), 0)

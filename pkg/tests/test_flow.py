import math

import numpy as np
import pytest

from contact_delta.flow import (
    CmcPoint, FlowState, beta_sq_from_eq1, case2_residuals, case2_residuals_sq, cd9_residual,
    cmc_evolution, cmc_kappas, integrate_remark, kappa_system_residuals, observed_order,
    remark_rhs, remark_vs_cmc, ruled_beta, ruled_locus_invariance_check,
)
from contact_delta.numerics import InvalidInputError, SingularityError


def test_remark_rhs_examples():
    assert remark_rhs(FlowState(0, 0, 0.5, 0), -1) == pytest.approx((0, -0.75, 0))
    assert remark_rhs(FlowState(0, 0, 0.5, 0), 1) == pytest.approx((0, 1.25, 0))
    assert remark_rhs(FlowState(0, 1, 1, 0), -1) == pytest.approx((-2, 1, 0))


def test_remark_rhs_singular():
    with pytest.raises(SingularityError):
        remark_rhs(FlowState(0, 1, 0, 1), 1)


def test_ruled_locus_stationary():
    for beta in np.linspace(-3, 3, 13):
        if beta == 0:
            continue
        for c in (-1, 1):
            da, db, dg = remark_rhs(FlowState(0, 0, beta, 0), c)
            assert da == 0 and dg == 0 and db == beta * beta + c


def test_mu_is_derived():
    tr = integrate_remark(FlowState(0, 0.3, 0.8, -0.1), -1, 0.5)
    for st in tr.states:
        assert st.mu == st.alpha + st.gamma


@pytest.mark.parametrize("c,beta0,s_max", [(-1, 0.5, 1.0), (-1, 0.99, 3.0), (1, 0.2, 1.0)])
def test_ruled_invariance_seeds(c, beta0, s_max):
    chk = ruled_locus_invariance_check(c, beta0, s_max)
    assert chk.passed
    assert chk.max_alpha + chk.max_gamma <= 1e-9
    assert chk.max_beta_error <= 1e-7
    assert chk.final.s == s_max


def test_ruled_final_values():
    chk = ruled_locus_invariance_check(-1, 0.5, 1.0)
    assert abs(chk.final.beta - math.tanh(math.atanh(0.5) - 1)) <= 1e-8
    chk = ruled_locus_invariance_check(-1, 0.99, 3.0)
    assert abs(chk.final.beta - math.tanh(math.atanh(0.99) - 3)) <= 1e-7
    chk = ruled_locus_invariance_check(1, 0.2, 1.0)
    assert abs(chk.final.beta - math.tan(math.atan(0.2) + 1)) <= 1e-7


def _tracks_closed_form_before(traj, beta0, c, pole):
    arr = traj.array()
    safe = arr[:, 0] < pole - 0.1
    err = np.abs(arr[safe, 2] - ruled_beta(beta0, c, arr[safe, 0]))
    return err.max()


def test_blow_up_coth_branch():
    pole = math.atanh(0.5)
    chk = ruled_locus_invariance_check(-1, 2.0, 1.0)
    assert chk.halt is not None and "blow-up" in chk.halt
    assert chk.final.s < pole < chk.final.s + 0.01
    assert chk.max_alpha == chk.max_gamma == 0
    traj = integrate_remark(FlowState(0, 0, 2.0, 0), -1, 1.0)
    assert _tracks_closed_form_before(traj, 2.0, -1, pole) <= 1e-7


def test_blow_up_tan_branch():
    pole = math.pi / 4
    chk = ruled_locus_invariance_check(1, 1.0, 1.0)
    assert chk.halt is not None
    assert chk.final.s < pole < chk.final.s + 0.01
    traj = integrate_remark(FlowState(0, 0, 1.0, 0), 1, 1.0)
    assert _tracks_closed_form_before(traj, 1.0, 1, pole) <= 1e-7


def test_ruled_beta_closed_forms():
    s = np.linspace(0, 0.5, 6)
    for beta0, c in ((0.5, -1), (2.0, -1), (-3.0, -1), (0.2, 1), (-1.0, 1)):
        b = ruled_beta(beta0, c, s)
        assert b[0] == pytest.approx(beta0)
        db = np.gradient(b, s, edge_order=2)
        h = 1e-6
        fd = (ruled_beta(beta0, c, s + h) - ruled_beta(beta0, c, s - h)) / (2 * h)
        assert np.allclose(fd, b * b + c, rtol=1e-6)
        assert db.shape == b.shape


def test_observed_order():
    for st0, c in ((FlowState(0, 0.3, 0.8, -0.1), -1), (FlowState(0, 0.2, 1.1, 0.4), 1),
                   (FlowState(0, 0, 0.5, 0), -1)):
        assert observed_order(st0, c, 0.5, 0.0025) >= 3.8


def test_integrate_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        integrate_remark(FlowState(0, 0, 0, 0), 1, 1.0)
    with pytest.raises(InvalidInputError):
        integrate_remark(FlowState(0, 0, 1, 0), 1, 1.0, h=0)


def test_beta_floor_halts():
    # beta passes through 0 near s = artanh 0.5; a coarse floor catches a step landing there
    tr = integrate_remark(FlowState(0, 0, 0.5, 0), -1, 1.0, beta_min=1e-2)
    assert tr.halt is not None and "beta" in tr.halt
    assert abs(tr.final.s - math.atanh(0.5)) < 0.02


def test_mu_sign_change_is_logged_not_halted(caplog):
    st0 = FlowState(0, 0.5, 1.0, -0.45)
    tr = integrate_remark(st0, -1, 2.0)
    mus = [s.mu for s in tr.states]
    if any(a * b < 0 for a, b in zip(mus, mus[1:])):
        assert tr.mu_sign_changes
        assert "mu changes sign" in caplog.text


def test_kappa_examples():
    assert cmc_kappas(CmcPoint(1, 0, 0, -1)) == pytest.approx((2, 0))
    assert cmc_kappas(CmcPoint(0.6, 0.8, 0, -1)) == pytest.approx((1.2, -1.6), abs=1e-12)
    assert cmc_kappas(CmcPoint(1, 1, 2, 1)) == pytest.approx((0.5, 0.5))


def test_kappa_linear_system_random():
    rng = np.random.default_rng(2)
    for _ in range(10000):
        b, g, mu = rng.uniform(-3, 3, size=3)
        if abs(b) < 1e-3:
            continue
        r1, r2 = kappa_system_residuals(CmcPoint(b, g, mu, rng.choice([-1, 1])))
        assert abs(r1) <= 1e-12 * (1 + b * b + g * g) and abs(r2) <= 1e-12 * (1 + b * b + g * g)


def test_evolution_examples():
    assert cmc_evolution(CmcPoint(0.6, 0.8, 0, -1)) == pytest.approx((-1.92, 1.44), abs=1e-12)
    assert cmc_evolution(CmcPoint(1, 0, 0, -1)) == pytest.approx((0, 0), abs=1e-15)
    assert cmc_evolution(CmcPoint(1, 1, 2, 1)) == pytest.approx((1.5, 4.5))


def test_circle_locus():
    for th in np.linspace(0.1, 2 * math.pi, 40):
        b, g = math.cos(th), math.sin(th)
        if abs(b) < 1e-6:
            continue
        p = CmcPoint(b, g, 0.0, -1)
        k1, k3 = cmc_kappas(p)
        e3b, e3g = cmc_evolution(p)
        assert abs(k1 - 2 * b) <= 1e-12 and abs(k3 + 2 * g) <= 1e-12
        assert abs(e3b - 3 * (b * b - 1)) <= 1e-12 and abs(e3g - 3 * b * g) <= 1e-12
        # the circle is invariant: e3 (beta^2 + gamma^2) = 0
        assert abs(2 * b * e3b + 2 * g * e3g) <= 1e-12


def test_cd9_difference_is_minus_two_mu_gamma():
    rng = np.random.default_rng(4)
    for _ in range(200):
        b, g, mu = rng.uniform(-2, 2, size=3)
        c = rng.choice([-1, 1])
        assert abs(cd9_residual(CmcPoint(b, g, mu, c)) + 2 * mu * g) <= 1e-10
    assert abs(cd9_residual(CmcPoint(0.7, 0.0, 1.3, -1))) <= 1e-12
    assert abs(cd9_residual(CmcPoint(0.7, 0.4, 0.0, 1))) <= 1e-12


def test_remark_vs_cmc_is_reported():
    d = remark_vs_cmc(FlowState(0, 0.3, 0.8, -0.1), -1)
    assert len(d) == 2 and all(math.isfinite(x) for x in d)


def test_case2_examples():
    for c in (-1, 1):
        for b in (0.3, 1.0, 2.5):
            e1, _, e4 = case2_residuals(CmcPoint(b, 0, 0, c))
            assert e1 == 0 and e4 == 0
    assert case2_residuals(CmcPoint(1, 1, 1, 1))[0] == 1


def test_case2_elimination_consistency():
    """Eliminating beta^2 through Eq1 leaves Eq3 vanishing exactly on the Eq4 factors."""
    mu, c = 0.5, -1
    gammas = np.linspace(-3, 3, 601)
    e3 = np.array([case2_residuals_sq(beta_sq_from_eq1(g, mu, c), g, mu, c)[1] for g in gammas])
    sign = np.sign(e3)
    crossings = gammas[1:][sign[1:] * sign[:-1] < 0]
    # roots of (gamma - mu)(c gamma - mu^3)(2 mu gamma - mu^2 - c)
    roots = sorted([mu, mu ** 3 / c, (mu ** 2 + c) / (2 * mu)])
    for r in roots:
        assert abs(case2_residuals_sq(beta_sq_from_eq1(r, mu, c), r, mu, c)[1]) <= 1e-10
    for x in crossings:
        assert min(abs(x - r) for r in roots) <= 0.011


def test_case2_eliminated_eq3_is_twice_eq4():
    """With beta^2 taken from Eq1, mu * Eq3 = 2 * Eq4 identically."""
    rng = np.random.default_rng(6)
    for _ in range(200):
        g, mu = rng.uniform(-2, 2, size=2)
        c = rng.choice([-1, 1])
        _, e3, e4 = case2_residuals_sq(beta_sq_from_eq1(g, mu, c), g, mu, c)
        assert abs(mu * e3 - 2 * e4) <= 1e-10 * (1 + abs(e4))

"""Non-Hopf structure equations along e3 for the ideal shape-operator form.

Two pieces: the ODE system in (alpha, beta, gamma) with mu = alpha + gamma,
and the constant-mean-curvature structure functions (kappa1, kappa3, e3 beta,
e3 gamma) with the algebraic constraints left after eliminating them.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .numerics import TOL, InvalidInputError, SingularityError, rk4_step

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowState:
    s: float
    alpha: float
    beta: float
    gamma: float

    @property
    def mu(self) -> float:
        return self.alpha + self.gamma

    def as_row(self) -> tuple[float, float, float, float, float]:
        return (self.s, self.alpha, self.beta, self.gamma, self.mu)


def remark_rhs(st: FlowState, c: float) -> tuple[float, float, float]:
    """(d alpha/ds, d beta/ds, d gamma/ds) with mu := alpha + gamma substituted."""
    a, b, g = st.alpha, st.beta, st.gamma
    if b == 0:
        raise SingularityError("beta = 0")
    mu = a + g
    da = b * (a + g - 3 * mu)
    db = b * b + g * g + mu * (a - 2 * g) + c
    dg = (g - mu) * (g * g - a * g - c) / b + b * (2 * g + mu)
    return da, db, dg


@dataclass
class Trajectory:
    states: list[FlowState]
    c: float
    halt: Optional[str] = None
    mu_sign_changes: list[float] = field(default_factory=list)

    @property
    def final(self) -> FlowState:
        return self.states[-1]

    def array(self) -> np.ndarray:
        """Rows of (s, alpha, beta, gamma, mu)."""
        return np.array([st.as_row() for st in self.states])


def integrate_remark(st0: FlowState, c: float, s_max: float, h: float = TOL.flow_step,
                     beta_min: float = TOL.flow_beta_min, blowup: float = TOL.flow_blowup) -> Trajectory:
    """RK4 from ``st0`` to ``s_max`` with fixed step ``h`` (last step shortened).

    Halts early, recording the reason, if |beta| drops below ``beta_min`` at a
    step, any component exceeds ``blowup`` or goes non-finite. mu = 0 is only
    logged: the ruled solutions live there.
    """
    if st0.beta == 0 or abs(st0.beta) < beta_min:
        raise InvalidInputError("initial beta must be nonzero")
    if not h > 0 or not s_max > st0.s:
        raise InvalidInputError("need h > 0 and s_max > s0")

    def field_(y):
        return np.array(remark_rhs(FlowState(0.0, y[0], y[1], y[2]), c))

    traj = Trajectory([st0], c)
    y = np.array([st0.alpha, st0.beta, st0.gamma])
    s = st0.s
    n_steps = int(math.ceil((s_max - st0.s) / h - 1e-9))
    for i in range(n_steps):
        step = min(h, s_max - s)
        try:
            y_new = rk4_step(field_, y, step)
        except SingularityError as exc:
            traj.halt = f"singular derivative near s={s:.6g}: {exc}"
            break
        if not np.all(np.isfinite(y_new)):
            traj.halt = f"non-finite state near s={s + step:.6g}"
            break
        if np.max(np.abs(y_new)) > blowup:
            traj.halt = f"blow-up |state|>{blowup:g} near s={s + step:.6g}"
            break
        s = st0.s + (i + 1) * h if i + 1 < n_steps else s_max
        prev_mu = y[0] + y[2]
        y = y_new
        st = FlowState(s, float(y[0]), float(y[1]), float(y[2]))
        traj.states.append(st)
        if prev_mu * st.mu < 0:
            traj.mu_sign_changes.append(s)
            log.warning("mu changes sign near s=%.6g", s)
        if abs(st.beta) < beta_min:
            traj.halt = f"|beta|<{beta_min:g} at s={s:.6g}"
            break
    return traj


def ruled_beta(beta0: float, c: float, s):
    """Closed form of beta' = beta^2 + c from beta(0) = beta0."""
    s = np.asarray(s, dtype=float)
    if c > 0:
        rc = math.sqrt(c)
        return rc * np.tan(rc * s + math.atan(beta0 / rc))
    rc = math.sqrt(-c)
    if abs(beta0) < rc:
        return rc * np.tanh(math.atanh(beta0 / rc) - rc * s)
    # |beta0| > sqrt(-c): coth branch, blows up at s = arcoth(beta0/rc)/rc
    return rc / np.tanh(math.atanh(rc / beta0) - rc * s)


@dataclass(frozen=True)
class RuledCheck:
    passed: bool
    max_alpha: float
    max_gamma: float
    max_beta_error: float
    final: FlowState
    halt: Optional[str]


def ruled_locus_invariance_check(c: float, beta0: float, s_max: float, h: float = TOL.flow_step,
                                 locus_tol: float = 1e-9, beta_tol: float = 1e-7) -> RuledCheck:
    """Integrate from (0, beta0, 0): alpha and gamma must stay zero and beta
    must follow beta' = beta^2 + c."""
    traj = integrate_remark(FlowState(0.0, 0.0, beta0, 0.0), c, s_max, h)
    arr = traj.array()
    max_a = float(np.max(np.abs(arr[:, 1])))
    max_g = float(np.max(np.abs(arr[:, 3])))
    err = float(np.max(np.abs(arr[:, 2] - ruled_beta(beta0, c, arr[:, 0]))))
    passed = max_a + max_g <= locus_tol and err <= beta_tol
    return RuledCheck(passed, max_a, max_g, err, traj.final, traj.halt)


def observed_order(st0: FlowState, c: float, s_max: float, h: float) -> float:
    """Convergence order from step halving: log2 |y_h - y_h/2| / |y_h/2 - y_h/4|."""
    ends = []
    for hh in (h, h / 2, h / 4):
        tr = integrate_remark(st0, c, s_max, hh)
        if tr.halt:
            raise SingularityError(tr.halt)
        f = tr.final
        ends.append(np.array([f.alpha, f.beta, f.gamma]))
    e1 = np.linalg.norm(ends[0] - ends[1])
    e2 = np.linalg.norm(ends[1] - ends[2])
    return math.log2(e1 / e2)


@dataclass(frozen=True)
class CmcPoint:
    beta: float
    gamma: float
    mu: float
    c: float

    def __post_init__(self):
        if self.beta == 0:
            raise InvalidInputError("beta must be nonzero")

    @property
    def denom(self) -> float:
        return (self.mu - self.gamma) ** 2 + self.beta ** 2

    @property
    def common(self) -> float:
        return self.beta ** 2 + self.gamma ** 2 - self.c


def cmc_kappas(p: CmcPoint) -> tuple[float, float]:
    """kappa1 = g(nabla_{e2} e2, e3) and kappa3 = g(nabla_xi e2, e3) solved from
    the two linear Codazzi relations."""
    d, f = p.denom, p.common
    return p.beta * f / d, (p.mu - p.gamma) * f / d


def kappa_system_residuals(p: CmcPoint) -> tuple[float, float]:
    k1, k3 = cmc_kappas(p)
    b, g, mu = p.beta, p.gamma, p.mu
    r1 = b * k1 + (mu - g) * k3 - p.common
    r2 = (mu - g) * k1 - b * k3
    return r1, r2


def cmc_evolution(p: CmcPoint) -> tuple[float, float]:
    """(e3 beta, e3 gamma) for constant mu."""
    b, g, mu, c = p.beta, p.gamma, p.mu, p.c
    d, f = p.denom, p.common
    e3b = (mu - 2 * g) * mu + b * b + c - (mu - g) ** 2 * f / d
    e3g = b * (g + 2 * mu) + (g - mu) * b * f / d
    return e3b, e3g


def cd9_residual(p: CmcPoint) -> float:
    """e3 beta minus the alternative form kappa1*beta + mu^2 - gamma^2 + 2c.

    The two expressions differ by exactly -2*mu*gamma, so they agree on the
    loci the classification actually reaches (mu = 0 or gamma = 0)."""
    k1, _ = cmc_kappas(p)
    return cmc_evolution(p)[0] - (k1 * p.beta + p.mu ** 2 - p.gamma ** 2 + 2 * p.c)


def remark_vs_cmc(st: FlowState, c: float) -> tuple[float, float]:
    """Differences (ODE - CMC) in d beta/ds and d gamma/ds at the same point.

    The ODE system does not assume constant mu, so no agreement is implied."""
    _, db, dg = remark_rhs(st, c)
    e3b, e3g = cmc_evolution(CmcPoint(st.beta, st.gamma, st.mu, c))
    return db - e3b, dg - e3g


def case2_residuals(p: CmcPoint) -> tuple[float, float, float]:
    """Left-hand sides of the n > 2 constraints Eq1, Eq3 and Eq4."""
    return case2_residuals_sq(p.beta ** 2, p.gamma, p.mu, p.c)


def case2_residuals_sq(beta_sq: float, g: float, mu: float, c: float) -> tuple[float, float, float]:
    """Same as :func:`case2_residuals`, taking beta^2 directly (it may be negative
    when probing the elimination off the real locus)."""
    eq1 = (c - mu * g) * (mu - g) + mu * beta_sq
    pref = 2 * mu * g - mu * mu - c
    eq3 = pref * ((2 * g + mu) * beta_sq + 2 * g ** 3 - mu * g * g - (3 * mu * mu + c) * g + (2 * mu * mu + c) * mu)
    eq4 = (g - mu) * (c * g - mu ** 3) * pref
    return eq1, eq3, eq4


def beta_sq_from_eq1(gamma: float, mu: float, c: float) -> float:
    """beta^2 solving Eq1 = 0 for mu != 0."""
    return -(c - mu * gamma) * (mu - gamma) / mu

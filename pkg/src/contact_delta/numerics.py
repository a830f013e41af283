"""Small dense numerical kernel.

Cyclic Jacobi eigensolver for symmetric matrices (batched over leading
axes), bracketed root finding and classical RK4 stepping. Matrices here
never exceed 64x64, so everything favours accuracy over asymptotics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

MAX_DIM = 64


class InvalidInputError(ValueError):
    pass


class BracketError(ValueError):
    pass


class SingularityError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Tolerances:
    eig_residual: float = 1e-12
    eig_offdiag: float = 1e-15
    eig_max_sweeps: int = 60
    root_tol: float = 1e-14
    root_max_iter: int = 400
    ideal_gap: float = 1e-9
    canonical: float = 1e-8
    orthonormal: float = 1e-10
    flow_step: float = 1e-3
    flow_beta_min: float = 1e-8
    flow_blowup: float = 1e6


TOL = Tolerances()


def symmetrize(a, *, lower: bool = True) -> np.ndarray:
    """Return a float copy of ``a`` with the upper triangle mirrored from the lower
    (or the reverse when ``lower=False``), so symmetry holds exactly."""
    a = np.array(a, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InvalidInputError(f"expected square matrices, got shape {a.shape}")
    m = a.shape[-1]
    if not 1 <= m <= MAX_DIM:
        raise InvalidInputError(f"dimension {m} outside 1..{MAX_DIM}")
    il = np.tril_indices(m, -1)
    if lower:
        a[..., il[1], il[0]] = a[..., il[0], il[1]]
    else:
        a[..., il[0], il[1]] = a[..., il[1], il[0]]
    return a


def sym_eigen(s, tol: Tolerances = TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of symmetric matrices by cyclic Jacobi rotations.

    ``s`` may be a single ``(m, m)`` matrix or a stack ``(..., m, m)``; the
    rotations are applied to the whole stack at once.  Returns ascending
    eigenvalues and orthonormal eigenvectors as columns, like ``numpy.linalg.eigh``.
    Only the lower triangle of ``s`` is read.
    """
    a = symmetrize(s)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("non-finite matrix entries")
    m = a.shape[-1]
    batch_shape = a.shape[:-2]
    a = a.reshape((-1, m, m))
    v = np.broadcast_to(np.eye(m), a.shape).copy()

    scale = np.sqrt(np.sum(a * a, axis=(1, 2)))
    thresh = tol.eig_offdiag * np.maximum(scale, np.finfo(float).tiny)
    for _ in range(tol.eig_max_sweeps):
        off = np.sqrt(np.maximum(np.sum(a * a, axis=(1, 2)) - np.sum(np.diagonal(a, axis1=1, axis2=2) ** 2, axis=1), 0.0))
        if np.all(off <= thresh):
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[:, p, q]
                # entries this small cannot move the eigenvalues at double precision
                active = np.abs(apq) > 1e-3 * thresh
                if not active.any():
                    continue
                app = a[:, p, p]
                aqq = a[:, q, q]
                safe_apq = np.where(active, apq, 1.0)
                theta = (aqq - app) / (2.0 * safe_apq)
                t = np.where(theta < 0.0, -1.0, 1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(active, t, 0.0)
                cs = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * cs

                cs_, sn_ = cs[:, None], sn[:, None]
                col_p = a[:, :, p].copy()
                col_q = a[:, :, q]
                a[:, :, p] = cs_ * col_p - sn_ * col_q
                a[:, :, q] = sn_ * col_p + cs_ * col_q
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :]
                a[:, p, :] = cs_ * row_p - sn_ * row_q
                a[:, q, :] = sn_ * row_p + cs_ * row_q
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0

                vp = v[:, :, p].copy()
                vq = v[:, :, q]
                v[:, :, p] = cs_ * vp - sn_ * vq
                v[:, :, q] = sn_ * vp + cs_ * vq

    w = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w.reshape(batch_shape + (m,)), v.reshape(batch_shape + (m, m))


def min_eigenvalue(s, tol: Tolerances = TOL) -> np.ndarray:
    return sym_eigen(s, tol)[0][..., 0]


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"empty bracket [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0:
            raise BracketError(f"no sign change on [{self.lo}, {self.hi}]")

    @classmethod
    def around(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, f(lo), f(hi))


def find_root(f: Callable[[float], float], b: Bracket, tol: float = TOL.root_tol,
              max_iter: int = TOL.root_max_iter) -> float:
    """Bisection with a secant step whenever the secant point lands strictly
    inside the current bracket. Deterministic; returns the endpoint with the
    smaller residual once the bracket is narrower than ``tol``."""
    lo, hi, flo, fhi = b.lo, b.hi, b.f_lo, b.f_hi
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        width = hi - lo
        x = lo - flo * (hi - lo) / (fhi - flo)
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        # secant stalls on one side of a convex function; force a halving then
        if hi - lo > 0.5 * width:
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if fm == 0.0:
                return mid
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi, fhi = mid, fm
    return lo if abs(flo) <= abs(fhi) else hi


def scan_brackets(f: Callable[[float], float], lo: float, hi: float, points: int = 2000) -> list[Bracket]:
    """Sign-change brackets of ``f`` on a uniform grid; non-finite samples break
    the chain so poles are not reported twice."""
    xs = np.linspace(lo, hi, points)
    out = []
    prev_x, prev_f = None, None
    for x in xs:
        with np.errstate(all="ignore"):
            fx = float(f(float(x)))
        if not math.isfinite(fx):
            prev_x, prev_f = None, None
            continue
        if fx == 0.0:
            # exact grid hit: keep the previous sample so the bracket stays strict
            continue
        if prev_f is not None and prev_f * fx < 0:
            out.append(Bracket(prev_x, float(x), prev_f, fx))
        prev_x, prev_f = float(x), fx
    return out


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: Sequence[float], h: float) -> np.ndarray:
    """One classical Runge-Kutta step for the autonomous system y' = f(y)."""
    if not h > 0:
        raise InvalidInputError("step size must be positive")
    y = np.asarray(y, dtype=float)
    k1 = np.asarray(f(y), dtype=float)
    k2 = np.asarray(f(y + 0.5 * h * k1), dtype=float)
    k3 = np.asarray(f(y + 0.5 * h * k2), dtype=float)
    k4 = np.asarray(f(y + h * k3), dtype=float)
    for k in (k1, k2, k3, k4):
        if not np.all(np.isfinite(k)):
            raise SingularityError("non-finite derivative")
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

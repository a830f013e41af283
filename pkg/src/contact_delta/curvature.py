"""Gauss-equation curvature of a real hypersurface at a point, and the
contact delta-invariant delta^c(2) with its upper bound.

The scalar curvature is the plain sum of sectional curvatures over pairs
i < j of an orthonormal frame (no factor 2). With that convention the
geodesic sphere of radius pi/4 in CP^2(4) sits exactly on the bound.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .frame import ShapeOperator
from .numerics import TOL, InvalidInputError, min_eigenvalue


@dataclass(frozen=True)
class CurvaturePoint:
    S: ShapeOperator
    c: float

    def __post_init__(self):
        if self.c == 0:
            raise InvalidInputError("holomorphic curvature parameter must be nonzero")

    @property
    def n(self) -> int:
        return self.S.n


@dataclass(frozen=True)
class DeltaReport:
    tau: float
    inf_k_xi: float
    delta_c2: float
    rhs: float
    gap: float
    ideal: bool

    def to_json(self) -> dict:
        d = asdict(self)
        d["delta"] = d.pop("delta_c2")
        return {k: d[k] for k in ("tau", "inf_k_xi", "delta", "rhs", "gap", "ideal")}


def _vec(p: CurvaturePoint, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (p.S.frame.m,):
        raise InvalidInputError(f"tangent vector must have length {p.S.frame.m}, got shape {x.shape}")
    return x


def riemann(p: CurvaturePoint, X, Y, Z) -> np.ndarray:
    """R(X, Y)Z from the Gauss equation."""
    X, Y, Z = (_vec(p, v) for v in (X, Y, Z))
    phi = p.S.frame.phi
    A = p.S.A
    pX, pY, pZ = phi @ X, phi @ Y, phi @ Z
    ambient = (Y @ Z) * X - (X @ Z) * Y + (pY @ Z) * pX - (pX @ Z) * pY - 2.0 * (pX @ Y) * pZ
    AX, AY = A @ X, A @ Y
    return p.c * ambient + (AY @ Z) * AX - (AX @ Z) * AY


def sectional(p: CurvaturePoint, X, Y, tol: float = TOL.orthonormal) -> float:
    X, Y = _vec(p, X), _vec(p, Y)
    if abs(X @ X - 1) > tol or abs(Y @ Y - 1) > tol or abs(X @ Y) > tol:
        raise InvalidInputError("sectional curvature needs an orthonormal pair")
    return float(riemann(p, X, Y, Y) @ X)


def scalar_curvature(p: CurvaturePoint) -> float:
    e = np.eye(p.S.frame.m)
    m = len(e)
    return sum(sectional(p, e[i], e[j]) for i in range(m) for j in range(i + 1, m))


def xi_jacobi_operator(p: CurvaturePoint) -> np.ndarray:
    """Matrix of X -> R(X, xi)xi on xi-perp in the basis e2..em.

    Because phi xi = 0 this is c*Id + alpha*A - (A xi)(A xi)^T restricted to
    xi-perp, and its smallest eigenvalue is inf K over planes containing xi.
    """
    A = p.S.A
    a_xi = A[1:, 0]
    return p.c * np.eye(p.S.frame.m - 1) + A[0, 0] * A[1:, 1:] - np.outer(a_xi, a_xi)


def inequality_rhs(trace_A, n: int, c: float):
    """Upper bound for delta^c(2): (2n-1)^2 (2n-3)/(4(n-1)) |H|^2 + (2n^2-3) c."""
    h2 = (np.asarray(trace_A) / (2 * n - 1)) ** 2
    return (2 * n - 1) ** 2 * (2 * n - 3) / (4 * (n - 1)) * h2 + (2 * n * n - 3) * c


def delta_report(p: CurvaturePoint, tol: float = TOL.ideal_gap) -> DeltaReport:
    tau = scalar_curvature(p)
    inf_k = float(min_eigenvalue(xi_jacobi_operator(p)))
    delta = tau - inf_k
    rhs = float(inequality_rhs(p.S.trace, p.n, p.c))
    gap = rhs - delta
    return DeltaReport(tau, inf_k, delta, rhs, gap, abs(gap) <= tol)


def delta_gaps(A, n: int, c: float) -> np.ndarray:
    """Vectorised gap ``rhs - delta^c(2)`` for a stack of shape operators in the
    standard frame, shape ``(..., 2n-1, 2n-1)``.

    Uses the closed form of the pair sum: sum_{i<j} c(1 + 3 g(phi e_i, e_j)^2)
    is c(m(m-1)/2 + 3(n-1)) in an adapted frame, and the A-part is
    ((tr A)^2 - |A|_F^2)/2.
    """
    A = np.asarray(A, dtype=float)
    m = 2 * n - 1
    if A.shape[-2:] != (m, m):
        raise InvalidInputError(f"expected (..., {m}, {m}) stack")
    tr = np.trace(A, axis1=-2, axis2=-1)
    tau = c * (m * (m - 1) / 2 + 3 * (n - 1)) + 0.5 * (tr ** 2 - np.sum(A * A, axis=(-2, -1)))
    a_xi = A[..., 1:, 0]
    jac = (c * np.eye(m - 1) + A[..., :1, :1] * A[..., 1:, 1:]
           - a_xi[..., :, None] * a_xi[..., None, :])
    inf_k = min_eigenvalue(jac)
    return inequality_rhs(tr, n, c) - (tau - inf_k)

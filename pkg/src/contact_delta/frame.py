"""Adapted frames with the induced almost contact structure, and the shape
operator forms that characterise ideal and ruled hypersurfaces.

Everything lives in the standard adapted basis ``(xi, e2, e3=phi e2, e4,
e5=phi e4, ...)``; index 0 is always ``xi``. An operator given in some other
adapted basis is conjugated into this one before use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .numerics import TOL, InvalidInputError, sym_eigen, symmetrize

XI = 0


@dataclass(frozen=True)
class ContactFrame:
    n: int
    phi: np.ndarray = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return 2 * self.n - 1

    @property
    def xi(self) -> np.ndarray:
        return np.eye(self.m)[XI]

    def eta(self, x) -> float:
        return float(np.asarray(x)[..., XI])

    def g(self, x, y) -> float:
        return float(np.dot(x, y))


def standard_frame(n: int) -> ContactFrame:
    if int(n) != n or n < 2:
        raise InvalidInputError(f"complex dimension must be an integer >= 2, got {n}")
    n = int(n)
    m = 2 * n - 1
    phi = np.zeros((m, m))
    # columns are images: phi e_{2i} = e_{2i+1}, phi e_{2i+1} = -e_{2i}
    for p in range(1, m, 2):
        phi[p + 1, p] = 1.0
        phi[p, p + 1] = -1.0
    phi.setflags(write=False)
    return ContactFrame(n, phi)


@dataclass(frozen=True)
class ShapeOperator:
    frame: ContactFrame
    A: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = symmetrize(self.A)
        if a.shape != (self.frame.m, self.frame.m):
            raise InvalidInputError(f"shape operator must be {self.frame.m}x{self.frame.m}, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("non-finite shape operator")
        a.setflags(write=False)
        object.__setattr__(self, "A", a)

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def trace(self) -> float:
        return float(np.trace(self.A))

    @property
    def mean_curvature(self) -> float:
        return self.trace / self.frame.m


def shape_operator(A, n: Optional[int] = None) -> ShapeOperator:
    A = np.asarray(A, dtype=float)
    if n is None:
        n = (A.shape[0] + 1) // 2
    return ShapeOperator(standard_frame(n), A)


@dataclass(frozen=True)
class CanonicalForm:
    """alpha, beta, gamma, mu of the ideal form; mu is always alpha + gamma."""
    alpha: float
    beta: float
    gamma: float
    n: int
    mu: float = field(init=False)

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInputError("n must be >= 2")
        object.__setattr__(self, "mu", self.alpha + self.gamma)

    @classmethod
    def from_mu(cls, beta: float, gamma: float, mu: float, n: int) -> "CanonicalForm":
        return cls(mu - gamma, beta, gamma, n)


def canonical_shape_operator(cf: CanonicalForm) -> ShapeOperator:
    frame = standard_frame(cf.n)
    A = cf.mu * np.eye(frame.m)
    A[0, 0] = cf.alpha
    A[0, 1] = A[1, 0] = cf.beta
    A[1, 1] = cf.gamma
    return ShapeOperator(frame, A)


def ruled_shape_operator(beta: float, alpha: float = 0.0, n: int = 2) -> ShapeOperator:
    """A xi = alpha xi + beta U, A U = beta xi, A X = 0 otherwise, with U = e2."""
    if beta == 0:
        raise InvalidInputError("ruled form needs beta != 0")
    frame = standard_frame(n)
    A = np.zeros((frame.m, frame.m))
    A[0, 0] = alpha
    A[0, 1] = A[1, 0] = beta
    return ShapeOperator(frame, A)


def detect_canonical_form(S: ShapeOperator, tol: float = TOL.canonical) -> Optional[CanonicalForm]:
    """Recover (alpha, |beta|, gamma, mu) when ``S`` has the ideal block form
    in some adapted basis, else ``None``.

    With beta > tol the second basis vector is forced to be the normalised
    xi-orthogonal part of A xi. At beta = 0 it is free, so the xi-orthogonal
    block is diagonalised and the split gamma + mu*Id with the smallest
    |alpha + gamma - mu| is taken.
    """
    A = S.A
    m = S.frame.m
    scale = 1.0 + float(np.max(np.abs(A)))
    alpha = float(A[0, 0])
    w = A[:, 0].copy()
    w[0] = 0.0
    beta = float(np.linalg.norm(w))

    if beta > tol * scale:
        e2 = w / beta
        Ae2 = A @ e2
        gamma = float(e2 @ Ae2)
        # A must preserve span{xi, e2}
        if np.linalg.norm(Ae2 - beta * np.eye(m)[0] - gamma * e2) > tol * scale:
            return None
        # projector onto the complement of span{xi, e2}
        P = np.eye(m) - np.outer(e2, e2)
        P[0, 0] = 0.0
        PAP = P @ A @ P
        mu = float(np.trace(PAP)) / (m - 2)
        if np.max(np.abs(PAP - mu * P)) > tol * scale:
            return None
    else:
        beta = 0.0
        if np.max(np.abs(A[1:, 0])) > tol * scale:
            return None
        lam = sym_eigen(A[1:, 1:])[0]
        best = None
        for i in range(len(lam)):
            others = np.delete(lam, i)
            mu_i = float(others.mean())
            if np.max(np.abs(others - mu_i)) > tol * scale:
                continue
            miss = abs(alpha + lam[i] - mu_i)
            if best is None or miss < best[0]:
                best = (miss, float(lam[i]), mu_i)
        if best is None:
            return None
        gamma, mu = best[1], best[2]

    if abs(mu - (alpha + gamma)) > tol * scale:
        return None
    return CanonicalForm(alpha, beta, gamma, S.n)


def unitary_on_xi_perp(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random orthogonal matrix fixing xi and commuting with phi (a U(n-1) element
    written in real coordinates). Conjugating A by it preserves every contact
    invariant, so it moves operators between adapted bases."""
    k = n - 1
    z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    m = 2 * n - 1
    Q = np.zeros((m, m))
    Q[0, 0] = 1.0
    # complex coordinate z_i = x_{e_{2i}} + i x_{e_{2i+1}}; phi acts as i
    re, im = q.real, q.imag
    for a in range(k):
        for b in range(k):
            ra, rb = 1 + 2 * a, 1 + 2 * b
            Q[ra, rb] = re[a, b]
            Q[ra, rb + 1] = -im[a, b]
            Q[ra + 1, rb] = im[a, b]
            Q[ra + 1, rb + 1] = re[a, b]
    return Q


def conjugate(S: ShapeOperator, Q: np.ndarray) -> ShapeOperator:
    return ShapeOperator(S.frame, Q @ S.A @ Q.T)


def frame_defects(frame: ContactFrame) -> dict[str, float]:
    """Max-entry defects of the almost contact identities for ``frame``."""
    phi = frame.phi
    m = frame.m
    xi = frame.xi
    eye = np.eye(m)
    return {
        "phi_skew": float(np.max(np.abs(phi + phi.T))),
        "phi_squared": float(np.max(np.abs(phi @ phi - (-eye + np.outer(xi, xi))))),
        "phi_xi": float(np.max(np.abs(phi @ xi))),
        "metric_compat": float(np.max(np.abs(phi.T @ phi - (eye - np.outer(xi, xi))))),
        "adapted": float(max((abs(phi[p + 1, p] - 1.0) for p in range(1, m, 2)), default=0.0)),
    }


def is_minimal(S: ShapeOperator, tol: float = 1e-12) -> bool:
    return math.isclose(S.trace, 0.0, abs_tol=tol)

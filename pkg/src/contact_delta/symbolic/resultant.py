"""Sylvester resultants by fraction-free (Bareiss) elimination."""
from __future__ import annotations

from .mpoly import MPoly


def sylvester_matrix(p: MPoly, q: MPoly, var: str) -> list[list[MPoly]]:
    """Rows of p's coefficients (leading first) shifted deg(q) times, then q's
    shifted deg(p) times."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    dp, dq = p.degree(var), q.degree(var)
    if dp < 1 or dq < 1:
        raise ValueError(f"both polynomials need positive degree in {var}")
    cp = list(reversed(p.coeffs_in(var)))
    cq = list(reversed(q.coeffs_in(var)))
    size = dp + dq
    zero = MPoly({}, ())
    rows = []
    for i in range(dq):
        rows.append([zero] * i + cp + [zero] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([zero] * i + cq + [zero] * (size - dq - 1 - i))
    return rows


def bareiss_det(matrix: list[list[MPoly]]) -> MPoly:
    """Determinant over Z[gens]; every division in the recurrence is exact."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return MPoly.const(1)
    sign = 1
    prev = MPoly.const(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MPoly({}, ())
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]).exquo(prev)
            m[i][k] = MPoly({}, ())
        prev = pivot
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_resultant(p: MPoly, q: MPoly, var: str) -> MPoly:
    return bareiss_det(sylvester_matrix(p, q, var))

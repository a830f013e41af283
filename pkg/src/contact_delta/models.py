"""Hopf model hypersurfaces in CP^n(4) and CH^n(-4).

Principal curvatures for the CH^n types come from the standard classification
(horosphere A0, geodesic sphere A1_0, tubes A1_1 and A2 around complex
totally geodesic submanifolds, tube B around totally real RH^n). For CP^n
only the two families that can be ideal are catalogued: geodesic spheres and
tubes around the complex quadric.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .curvature import CurvaturePoint, DeltaReport, delta_gaps, delta_report
from .frame import ShapeOperator, standard_frame
from .numerics import TOL, InvalidInputError, find_root, scan_brackets


class Space(enum.Enum):
    CP = 1
    CH = -1

    @property
    def c(self) -> int:
        return self.value


class Kind(enum.Enum):
    A0 = "A0"
    A1_0 = "A1_0"
    A1_1 = "A1_1"
    A2 = "A2"
    B = "B"
    CP_GEODESIC_SPHERE = "CP_GeodesicSphere"
    CP_TYPE_B_TUBE = "CP_TypeB_Tube"


CP_KINDS = {Kind.CP_GEODESIC_SPHERE, Kind.CP_TYPE_B_TUBE}

# open radius ranges on which each family is a distinct embedded hypersurface;
# past pi/4 the quadric tube repeats itself with the opposite normal
RADIUS_RANGE = {
    Kind.A1_0: (0.0, math.inf),
    Kind.A1_1: (0.0, math.inf),
    Kind.A2: (0.0, math.inf),
    Kind.B: (0.0, math.inf),
    Kind.CP_GEODESIC_SPHERE: (0.0, math.pi / 2),
    Kind.CP_TYPE_B_TUBE: (0.0, math.pi / 4),
}

SEARCH_INTERVAL = {
    Space.CH: (1e-3, 5.0),
    Kind.CP_GEODESIC_SPHERE: (1e-3, math.pi / 2 - 1e-3),
    Kind.CP_TYPE_B_TUBE: (1e-3, math.pi / 4 - 1e-3),
}


@dataclass(frozen=True)
class ModelSpec:
    space: Space
    kind: Kind
    n: int
    r: Optional[float] = None
    k: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInputError("complex dimension n must be >= 2")
        if self.kind is Kind.A0:
            if self.space is not Space.CH:
                raise InvalidInputError("horospheres exist only in CH^n")
            if self.r is not None:
                raise InvalidInputError("horospheres take no radius")
            return
        if (self.kind in CP_KINDS) != (self.space is Space.CP):
            raise InvalidInputError(f"{self.kind.value} is not a model in {self.space.name}^n")
        if self.kind is Kind.A2:
            if self.n < 3:
                raise InvalidInputError("type A2 needs n >= 3")
            if self.k is None or not 1 <= self.k <= self.n - 2:
                raise InvalidInputError("type A2 needs 1 <= k <= n-2")
        elif self.k is not None:
            raise InvalidInputError("k applies to type A2 only")
        if self.r is None:
            raise InvalidInputError(f"{self.kind.value} needs a radius")
        lo, hi = RADIUS_RANGE[self.kind]
        if not lo < self.r < hi:
            raise InvalidInputError(f"radius {self.r} outside ({lo}, {hi}) for {self.kind.value}")

    @property
    def c(self) -> int:
        return self.space.c

    def at(self, r: float) -> "ModelSpec":
        return ModelSpec(self.space, self.kind, self.n, r, self.k)


@dataclass(frozen=True)
class Lambda:
    value: float
    multiplicity: int
    cross_paired: bool = False


@dataclass(frozen=True)
class PrincipalData:
    nu: float
    lambdas: tuple[Lambda, ...]

    def multiset(self) -> list[float]:
        out = [self.nu]
        for lam in self.lambdas:
            out += [lam.value] * lam.multiplicity
        return sorted(out)


def _cot(x: float) -> float:
    return math.cos(x) / math.sin(x)


def _coth(x: float) -> float:
    return 1.0 / math.tanh(x)


def principal_curvatures(spec: ModelSpec) -> PrincipalData:
    n, r, kind = spec.n, spec.r, spec.kind
    if kind is Kind.A0:
        return PrincipalData(2.0, (Lambda(1.0, 2 * n - 2),))
    if kind is Kind.A1_0:
        return PrincipalData(2 * _coth(2 * r), (Lambda(_coth(r), 2 * n - 2),))
    if kind is Kind.A1_1:
        return PrincipalData(2 * _coth(2 * r), (Lambda(math.tanh(r), 2 * n - 2),))
    if kind is Kind.A2:
        k = spec.k
        return PrincipalData(2 * _coth(2 * r),
                             (Lambda(_coth(r), 2 * n - 2 * k - 2), Lambda(math.tanh(r), 2 * k)))
    if kind is Kind.B:
        return PrincipalData(2 * math.tanh(2 * r),
                             (Lambda(_coth(r), n - 1, True), Lambda(math.tanh(r), n - 1, True)))
    if kind is Kind.CP_GEODESIC_SPHERE:
        return PrincipalData(2 * _cot(2 * r), (Lambda(_cot(r), 2 * n - 2),))
    if kind is Kind.CP_TYPE_B_TUBE:
        u = r - math.pi / 4
        return PrincipalData(2 * _cot(2 * r),
                             (Lambda(_cot(u), n - 1, True), Lambda(-math.tan(u), n - 1, True)))
    raise AssertionError(kind)


def hopf_relation_residual(nu: float, l1: float, l2: float, c: float) -> float:
    """2 l1 l2 - (l1 + l2) nu - 2c; vanishes when A X = l1 X and A phi X = l2 phi X."""
    return 2 * l1 * l2 - (l1 + l2) * nu - 2 * c


def phi_pairs(pd: PrincipalData) -> list[tuple[float, float]]:
    """Curvature pairs (l1, l2) with A X = l1 X, A phi X = l2 phi X."""
    cross = [lam for lam in pd.lambdas if lam.cross_paired]
    pairs = [(lam.value, lam.value) for lam in pd.lambdas if not lam.cross_paired]
    if cross:
        assert len(cross) == 2 and cross[0].multiplicity == cross[1].multiplicity
        pairs.append((cross[0].value, cross[1].value))
    return pairs


def to_shape_operator(spec: ModelSpec) -> ShapeOperator:
    """Diagonal A in the standard frame. Self-paired curvatures fill whole
    phi-blocks; a cross-paired couple (l1, l2) fills each block as
    diag(l2, l1), so e2 carries the second listed curvature."""
    pd = principal_curvatures(spec)
    frame = standard_frame(spec.n)
    diag = [pd.nu]
    cross = [lam for lam in pd.lambdas if lam.cross_paired]
    for lam in pd.lambdas:
        if not lam.cross_paired:
            assert lam.multiplicity % 2 == 0
            diag += [lam.value] * lam.multiplicity
    if cross:
        first, second = cross
        diag += [second.value, first.value] * first.multiplicity
    assert len(diag) == frame.m, "multiplicity bookkeeping"
    return ShapeOperator(frame, np.diag(diag))


def classify_ideal(spec: ModelSpec, tol: float = TOL.ideal_gap) -> DeltaReport:
    return delta_report(CurvaturePoint(to_shape_operator(spec), spec.c), tol)


@dataclass(frozen=True)
class IdealCondition:
    """nu + gamma = mu, with gamma/mu picked from the xi-perp curvatures."""
    label: str
    gamma_index: int
    mu_index: int


@dataclass(frozen=True)
class RadiusSolution:
    radius: float
    residual: float
    condition: str
    closed_form: Optional[float] = None

    @property
    def closed_form_error(self) -> Optional[float]:
        return None if self.closed_form is None else abs(self.radius - self.closed_form)


GOLDEN_ROOT = math.sqrt(2 + 2 * math.sqrt(5))
R_CH_TYPE_B = 0.5 * math.log((1 + math.sqrt(5) + GOLDEN_ROOT) / 2)
R_CP_QUADRIC_TUBE = math.atan((1 + math.sqrt(5) - GOLDEN_ROOT) / 2)
R_CP_SPHERE = math.pi / 4
R_CH_B_TRIPLE = 0.5 * math.log(2 + math.sqrt(3))

CLOSED_FORMS = {
    (Space.CH, Kind.B): R_CH_TYPE_B,
    (Space.CP, Kind.CP_TYPE_B_TUBE): R_CP_QUADRIC_TUBE,
    (Space.CP, Kind.CP_GEODESIC_SPHERE): R_CP_SPHERE,
}

_LAMBDA_NAMES = ("lambda1", "lambda2")


def _conditions(spec: ModelSpec) -> list[IdealCondition]:
    """Admissible gamma/mu assignments: gamma simple (or equal to mu) and mu
    filling the remaining 2n-3 directions of xi-perp."""
    pd = principal_curvatures(spec)
    need = 2 * spec.n - 3
    out = []
    for i, gi in enumerate(pd.lambdas):
        for j, mj in enumerate(pd.lambdas):
            if i == j:
                ok = gi.multiplicity == need + 1
            else:
                ok = gi.multiplicity == 1 and mj.multiplicity == need and len(pd.lambdas) == 2
            if ok:
                label = f"nu+{_LAMBDA_NAMES[i]}={_LAMBDA_NAMES[j]}"
                out.append(IdealCondition(label, i, j))
    return out


def condition_function(spec: ModelSpec, cond: IdealCondition) -> Callable[[float], float]:
    def f(r: float) -> float:
        try:
            pd = principal_curvatures(spec.at(r))
        except (ZeroDivisionError, InvalidInputError):
            return math.nan
        return pd.nu + pd.lambdas[cond.gamma_index].value - pd.lambdas[cond.mu_index].value
    return f


def all_conditions(spec: ModelSpec) -> list[IdealCondition]:
    """Both orderings of the matching condition, ignoring multiplicities."""
    pd = principal_curvatures(spec)
    k = len(pd.lambdas)
    return [IdealCondition(f"nu+{_LAMBDA_NAMES[i]}={_LAMBDA_NAMES[j]}", i, j)
            for i in range(k) for j in range(k) if k == 1 or i != j]


def search_interval(space: Space, kind: Kind) -> tuple[float, float]:
    return SEARCH_INTERVAL.get(kind, SEARCH_INTERVAL.get(space))


def ideal_radii(space: Space, kind: Kind, n: int, points: int = 2000,
                residual_tol: float = 1e-8) -> list[RadiusSolution]:
    """All radii in the search interval where some admissible matching
    condition nu + gamma = mu holds. Sign changes across poles are dropped by
    the residual check."""
    if kind is Kind.A0:
        return []
    lo, hi = search_interval(space, kind)
    probe = ModelSpec(space, kind, n, 0.5 * (lo + hi), 1 if kind is Kind.A2 else None)
    closed = CLOSED_FORMS.get((space, kind))
    out = []
    for cond in _conditions(probe):
        f = condition_function(probe, cond)
        for br in scan_brackets(f, lo, hi, points):
            r = find_root(f, br)
            res = f(r)
            if abs(res) <= residual_tol:
                out.append(RadiusSolution(r, res, cond.label, closed))
    return sorted(out, key=lambda s: s.radius)


def condition_roots(spec: ModelSpec, cond: IdealCondition, points: int = 2000,
                    residual_tol: float = 1e-8) -> list[float]:
    lo, hi = search_interval(spec.space, spec.kind)
    f = condition_function(spec, cond)
    roots = []
    for br in scan_brackets(f, lo, hi, points):
        r = find_root(f, br)
        if abs(f(r)) <= residual_tol:
            roots.append(r)
    return roots


def radius_grid(space: Space, kind: Kind, r_min: float, r_max: float, steps: int) -> np.ndarray:
    if steps < 1 or not r_min < r_max:
        raise InvalidInputError("need r_min < r_max and steps >= 1")
    return np.linspace(r_min, r_max, steps + 1)


def sweep_gaps(space: Space, kind: Kind, n: int, radii, k: Optional[int] = None) -> np.ndarray:
    """Inequality gap along a radius grid, one batched eigen-solve."""
    ops = np.stack([to_shape_operator(ModelSpec(space, kind, n, float(r), k)).A for r in radii])
    return delta_gaps(ops, n, space.c)

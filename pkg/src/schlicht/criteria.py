"""Checkable predicates for every univalence and extension criterion.

Each check evaluates its inequality field on a polar grid, refines around
the running maximum, and reports the worst margin together with a witness
point.  A passing report means "certified on this grid", never "proved":
the tool is a falsifier and strong-evidence engine, not a proof assistant.

Strict inequalities require a margin above 1e-12; non-strict ones allow a
margin down to -1e-12.  All extremal behaviour of these fields lives near
the boundary, so reports also carry the LHS maxima at the three largest
base radii as a boundary trend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivisionByZero, ParameterError, UnknownPreset
from .expr import (
    AnalyticTriple,
    Expr,
    Var,
    _ev,
    add,
    const,
    differentiate,
    div,
    eval_expr,
    log_derivative_field,
)
from .operators import continued_gz_log

__all__ = [
    "CriterionParams", "DiskGrid", "ConditionReport", "CriterionReport",
    "in_uk", "check_alpha_condition", "check_h_condition", "check_main_t2",
    "check_simplified_t21", "check_becker", "check_t3", "check_qc_t5",
    "check_t6", "check_log_derivative_condition", "disk_maximize",
    "apply_preset", "PresetApplication", "PRESET_NAMES", "CRITERION_IDS",
    "bracket_field",
]

STRICT_SLACK = 1e-12

CRITERION_IDS = ("T2", "T21", "becker", "T3", "T5-qc", "T6", "logderiv-Uk")


@dataclass(frozen=True)
class CriterionParams:
    """Parameter bundle (alpha, c, s = a+ib, m, k) shared by the criteria."""

    alpha: complex
    c: complex
    s: complex
    m: float
    k: float = 0.0

    @property
    def a(self) -> float:
        return self.s.real

    @property
    def b(self) -> float:
        return self.s.imag

    def validate(self) -> "CriterionParams":
        if not self.a > 0:
            raise ParameterError(f"Re(s)={self.a} must be positive")
        if not self.m > 0:
            raise ParameterError(f"m={self.m} must be positive")
        if not (0 <= self.k < 1):
            raise ParameterError(f"k={self.k} must lie in [0, 1)")
        if self.c.imag == 0 and self.c.real >= 0:
            raise ParameterError(f"c={self.c!r} must avoid [0, inf)")
        if abs(self.alpha) < 1e-9:
            raise ParameterError("alpha too close to 0")
        return self


@dataclass(frozen=True)
class DiskGrid:
    """Polar sampling grid; points enumerate radius-major, then angle."""

    n_radial: int = 64
    n_angular: int = 128
    r_max: float = 0.999
    refinement_levels: int = 3

    def __post_init__(self):
        if not (0 < self.r_max <= 1 - 1e-6):
            raise ParameterError("r_max must lie in (0, 1 - 1e-6]")
        if self.n_radial < 1 or self.n_angular < 1:
            raise ParameterError("grid dimensions must be positive")

    def radii(self) -> np.ndarray:
        return self.r_max * np.arange(1, self.n_radial + 1) / self.n_radial

    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_angular) / self.n_angular

    def points(self) -> np.ndarray:
        return self.radii()[:, None] * np.exp(1j * self.angles())[None, :]


@dataclass(frozen=True)
class ConditionReport:
    name: str
    satisfied: bool
    strict: bool
    margin: float
    rhs: float
    witness: complex | None = None


@dataclass(frozen=True)
class CriterionReport:
    criterion_id: str
    satisfied: bool
    margin: float
    witness: complex | None
    conditions: tuple[ConditionReport, ...]
    grid_used: DiskGrid
    boundary_trend: tuple[tuple[float, float], ...] = field(default=())


def _margin_ok(margin: float, strict: bool) -> bool:
    return margin > STRICT_SLACK if strict else margin >= -STRICT_SLACK


def in_uk(w, k: float) -> tuple[bool, float]:
    """Membership of w in U(k) = {|(w-1)/(w+1)| <= k} plus that distance."""
    w = complex(w)
    if w == -1:
        return False, math.inf
    dist = abs((w - 1) / (w + 1))
    return dist <= k, dist


def _uk_distance_field(w: np.ndarray) -> np.ndarray:
    out = np.full(w.shape, np.inf)
    okd = w != -1
    out[okd] = np.abs((w[okd] - 1) / (w[okd] + 1))
    return out


def disk_maximize(objective, grid: DiskGrid) -> tuple[float, complex]:
    """Maximize a scalar field over the disk grid with local refinement.

    ``objective(radii, angles)`` must return the field on the outer product
    of its arguments.  The cell around the running argmax is re-sampled on
    an 8 x 8 sub-grid ``refinement_levels`` times, never extending past
    r_max.  Ties break to the lowest enumeration index (radius-major).
    """
    radii = grid.radii()
    angles = grid.angles()
    vals = np.asarray(objective(radii, angles), dtype=float)
    flat = int(np.argmax(vals))
    i, j = divmod(flat, len(angles))
    best = float(vals[i, j])
    best_r, best_th = float(radii[i]), float(angles[j])
    dr = grid.r_max / grid.n_radial
    dth = 2 * np.pi / grid.n_angular
    for _ in range(grid.refinement_levels):
        r_lo = max(best_r - dr, 1e-9)
        r_hi = min(best_r + dr, grid.r_max)
        sub_r = np.linspace(r_lo, r_hi, 8)
        sub_th = np.linspace(best_th - dth, best_th + dth, 8)
        sub = np.asarray(objective(sub_r, sub_th), dtype=float)
        flat = int(np.argmax(sub))
        i, j = divmod(flat, 8)
        if float(sub[i, j]) > best:
            best = float(sub[i, j])
            best_r, best_th = float(sub_r[i]), float(sub_th[j])
        dr = (r_hi - r_lo) / 7
        dth = (sub_th[-1] - sub_th[0]) / 7
    return best, best_r * np.exp(1j * best_th)


def _pointwise(field_fn):
    """Adapt a field over complex points to the (radii, angles) signature."""
    def objective(radii, angles):
        zz = np.asarray(radii)[:, None] * np.exp(1j * np.asarray(angles))[None, :]
        return field_fn(zz)
    return objective


def _grid_condition(name: str, strict: bool, rhs: float, field_fn,
                    grid: DiskGrid, polar: bool = False):
    obj = field_fn if polar else _pointwise(field_fn)
    radii = grid.radii()
    base = np.asarray(obj(radii, grid.angles()), dtype=float)
    max_base = float(np.max(base))
    max_ref, witness = disk_maximize(obj, grid)
    lhs_max = max(max_base, max_ref)
    if max_ref < max_base:
        flat = int(np.argmax(base))
        i, j = divmod(flat, grid.n_angular)
        witness = radii[i] * np.exp(1j * grid.angles()[j])
    margin = rhs - lhs_max
    trend = tuple(
        (float(radii[i]), float(np.max(base[i])))
        for i in range(max(0, grid.n_radial - 3), grid.n_radial)
    )
    report = ConditionReport(
        name=name, satisfied=_margin_ok(margin, strict), strict=strict,
        margin=float(margin), rhs=float(rhs), witness=complex(witness),
    )
    return report, trend


def _assemble(criterion_id: str, conditions: list[ConditionReport],
              grid: DiskGrid, trend) -> CriterionReport:
    satisfied = all(c.satisfied for c in conditions)
    # on ties prefer a grid-backed witness over a scalar parameter check
    worst = min(conditions, key=lambda c: (c.margin, c.witness is None))
    return CriterionReport(
        criterion_id=criterion_id, satisfied=satisfied,
        margin=float(worst.margin), witness=worst.witness,
        conditions=tuple(conditions), grid_used=grid,
        boundary_trend=tuple(trend),
    )


def check_alpha_condition(p: CriterionParams) -> bool:
    """|alpha - m/(2a)| < m/(2a); equivalently Re(m/alpha) > a."""
    r = p.m / (2 * p.a)
    return abs(p.alpha - r) < r


def _eq1_report(p: CriterionParams) -> ConditionReport:
    r = p.m / (2 * p.a)
    margin = r - abs(p.alpha - r)
    return ConditionReport("eq-alpha", _margin_ok(margin, True), True,
                           float(margin), float(r), None)


def _h_values(triple: AnalyticTriple, zz: np.ndarray) -> np.ndarray:
    hv = _ev(triple.h, zz)
    bad = hv == 0
    if np.any(bad):
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise DivisionByZero(complex(zz.ravel()[idx]), triple.h)
    return hv


def check_h_condition(triple: AnalyticTriple, p: CriterionParams,
                      grid: DiskGrid) -> CriterionReport:
    """|c/h(z) + m/(2 alpha)| < m/(2 |alpha|) over the grid."""
    p.validate()
    shift = p.m / (2 * p.alpha)
    rhs = p.m / (2 * abs(p.alpha))

    def fld(zz):
        return np.abs(p.c / _h_values(triple, zz) + shift)

    rep, trend = _grid_condition("eq-h", True, rhs, fld, grid)
    return _assemble("eq-h", [rep], grid, trend)


def bracket_field(triple: AnalyticTriple, alpha: complex, zz: np.ndarray) -> np.ndarray:
    """(alpha-1) z g'/g + 1 + z f''/f' + z h'/h with removable limits at 0."""
    t1 = (alpha - 1) * log_derivative_field(triple.g, zz, triple.gp)
    t2 = log_derivative_field(triple.fp, zz, triple.fpp)
    t3 = log_derivative_field(triple.h, zz, triple.hp)
    return t1 + 1 + t2 + t3


def _operator_lhs(triple: AnalyticTriple, p: CriterionParams, zz: np.ndarray,
                  exponent: float) -> np.ndarray:
    lam = np.abs(zz) ** exponent
    lead = (-p.c * p.alpha) / (p.a * _h_values(triple, zz))
    br = bracket_field(triple, p.alpha, zz)
    return np.abs(lead * lam + (1 - lam) * br - p.m / (2 * p.a))


def _checked_h_report(triple, p, grid) -> tuple[ConditionReport, tuple]:
    shift = p.m / (2 * p.alpha)
    rhs = p.m / (2 * abs(p.alpha))

    def fld(zz):
        return np.abs(p.c / _h_values(triple, zz) + shift)

    return _grid_condition("eq-h", True, rhs, fld, grid)


def check_main_t2(triple: AnalyticTriple, p: CriterionParams,
                  grid: DiskGrid) -> CriterionReport:
    """The main criterion: exponent m/a, together with its two side conditions."""
    p.validate()
    conds = [_eq1_report(p)]
    eq2, _ = _checked_h_report(triple, p, grid)
    conds.append(eq2)
    rhs = p.m / (2 * p.a)
    main, trend = _grid_condition(
        "main", False, rhs,
        lambda zz: _operator_lhs(triple, p, zz, p.m / p.a), grid)
    conds.append(main)
    return _assemble("T2", conds, grid, trend)


def check_simplified_t21(triple: AnalyticTriple, p: CriterionParams,
                         grid: DiskGrid) -> CriterionReport:
    """Radius-free form: |bracket - m/(2a)| <= m/(2a) plus the side conditions."""
    p.validate()
    conds = [_eq1_report(p)]
    eq2, _ = _checked_h_report(triple, p, grid)
    conds.append(eq2)
    rhs = p.m / (2 * p.a)
    main, trend = _grid_condition(
        "main", False, rhs,
        lambda zz: np.abs(bracket_field(triple, p.alpha, zz) - rhs), grid)
    conds.append(main)
    return _assemble("T21", conds, grid, trend)


def becker_lhs(f: Expr, m: float, zz: np.ndarray,
               fp: Expr | None = None, fpp: Expr | None = None) -> np.ndarray:
    fp = fp if fp is not None else differentiate(f)
    fpp = fpp if fpp is not None else differentiate(fp)
    lam = np.abs(zz) ** m
    return np.abs((m - 2) / 2 - (1 - lam) * log_derivative_field(fp, zz, fpp))


def check_becker(f: Expr, m: float, grid: DiskGrid) -> CriterionReport:
    """|(m-2)/2 - (1-|z|^m) z f''/f'| <= m/2 for m > 1."""
    if not m > 1:
        raise ParameterError(f"m={m} must exceed 1")
    fp = differentiate(f)
    fpp = differentiate(fp)
    main, trend = _grid_condition(
        "main", False, m / 2,
        lambda zz: becker_lhs(f, m, zz, fp, fpp), grid)
    return _assemble("becker", [main], grid, trend)


def check_t3(triple: AnalyticTriple, p: CriterionParams,
             grid: DiskGrid) -> CriterionReport:
    """Variant for Re(s) >= 1: exponent m instead of m/a."""
    p.validate()
    if p.a < 1:
        raise ParameterError(f"Re(s)={p.a} must be >= 1 for this criterion")
    conds = [_eq1_report(p)]
    eq2, _ = _checked_h_report(triple, p, grid)
    conds.append(eq2)
    rhs = p.m / (2 * p.a)
    main, trend = _grid_condition(
        "main", False, rhs,
        lambda zz: _operator_lhs(triple, p, zz, float(p.m)), grid)
    conds.append(main)
    return _assemble("T3", conds, grid, trend)


def check_qc_t5(triple: AnalyticTriple, p: CriterionParams,
                grid: DiskGrid) -> tuple[CriterionReport, float | None]:
    """Quasiconformal refinement: k-scaled right-hand sides, returns K on success."""
    from .chains import qc_bound_k  # local import to avoid a cycle

    p.validate()
    conds = [_eq1_report(p)]
    rhs_h = p.k * p.m / 2

    def fld_h(zz):
        return np.abs(p.c * p.alpha / _h_values(triple, zz) + p.m / 2)

    eq_h, _ = _grid_condition("qc-h", True, rhs_h, fld_h, grid)
    conds.append(eq_h)
    rhs_main = p.k * p.m / (2 * p.a)
    main, trend = _grid_condition(
        "qc-main", False, rhs_main,
        lambda zz: _operator_lhs(triple, p, zz, p.m / p.a), grid)
    conds.append(main)
    rep = _assemble("T5-qc", conds, grid, trend)
    bound = qc_bound_k(p.s, p.k).K if rep.satisfied else None
    return rep, bound


def t6_field(f: Expr, g: Expr, alpha: float, zz: np.ndarray,
             fp: Expr | None = None) -> np.ndarray:
    """z^(1-alpha) g^(alpha-1) f' as the branch-continued (g/z)^(alpha-1) f'."""
    fp = fp if fp is not None else differentiate(f)
    logphi = continued_gz_log(g, zz.ravel()).reshape(zz.shape)
    return np.exp((alpha - 1) * logphi) * _ev(fp, zz)


def check_t6(f: Expr, g: Expr, alpha: float, k: float,
             grid: DiskGrid) -> CriterionReport:
    """Membership of z^(1-alpha) g^(alpha-1) f' in U(k) over the grid."""
    alpha = float(alpha)
    if not alpha > 0:
        raise ParameterError("alpha must be a positive real number here")
    if not (0 <= k < 1):
        raise ParameterError(f"k={k} must lie in [0, 1)")
    fp = differentiate(f)
    main, trend = _grid_condition(
        "uk-distance", False, k,
        lambda zz: _uk_distance_field(t6_field(f, g, alpha, zz, fp)), grid)
    return _assemble("T6", [main], grid, trend)


def _sampled_log_derivative(fn, zz: np.ndarray) -> np.ndarray:
    """z G'/G for a sampled operator via Richardson central differences."""
    h = 1e-5 * (1 - np.abs(zz))
    vals = fn(zz)
    d1 = (fn(zz + h) - fn(zz - h)) / (2 * h)
    d2 = (fn(zz + h / 2) - fn(zz - h / 2)) / h
    deriv = (4 * d2 - d1) / 3
    bad = vals == 0
    if np.any(bad):
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise DivisionByZero(complex(zz.ravel()[idx]))
    return zz * deriv / vals


def check_log_derivative_condition(G, k: float, grid: DiskGrid) -> CriterionReport:
    """z G'/G in U(k); G may be an expression or a sampled operator callable."""
    if not (0 <= k < 1):
        raise ParameterError(f"k={k} must lie in [0, 1)")
    if isinstance(G, Expr):
        gp = differentiate(G)

        def fld(zz):
            return _uk_distance_field(log_derivative_field(G, zz, gp))
    else:
        def fld(zz):
            shape = zz.shape
            w = _sampled_log_derivative(lambda q: np.asarray(G(q.ravel())).reshape(q.shape), zz)
            return _uk_distance_field(w.reshape(shape))

    main, trend = _grid_condition("uk-logderiv", False, k, fld, grid)
    return _assemble("logderiv-Uk", [main], grid, trend)


@dataclass(frozen=True)
class PresetApplication:
    f: Expr
    g: Expr
    h: Expr
    params: CriterionParams
    check_id: str
    notes: tuple[str, ...] = ()


PRESET_NAMES = (
    "ruscheweyh", "moldoveanu-pascu-remark", "singh-chichra",
    "lewandowski", "ovesea", "becker",
)


def apply_preset(name: str, f: Expr, g: Expr | None = None, h: Expr | None = None,
                 params: CriterionParams | None = None,
                 k_fn: Expr | None = None) -> PresetApplication:
    """Classical parameter reductions; each returns the routed criterion id.

    ruscheweyh:              m=2, h=1, g=f, alpha=1/s
    moldoveanu-pascu-remark: m=2, h=1, g=z, Re(s)=1, c=-1/alpha
    singh-chichra:           m=2, g=f, alpha=1/s, h replaced by 1/h, h(0)=1
    lewandowski:             m=2, g=f, s=alpha=1, c=-1, h=(k_fn+1)/2
    ovesea:                  m=2, h(0)=1 required
    becker:                  s=alpha=1, h=-c, routed to the (m-2)/2 check
    """
    if name not in PRESET_NAMES:
        raise UnknownPreset(name, PRESET_NAMES)
    g = g if g is not None else Var()
    h = h if h is not None else const(1)
    if params is None:
        params = CriterionParams(alpha=1, c=-1, s=1, m=2.0)
    notes: list[str] = []

    if name == "ruscheweyh":
        alpha = 1 / params.s
        params = CriterionParams(alpha=alpha, c=params.c, s=params.s, m=2.0, k=params.k)
        return PresetApplication(f, f, const(1), params, "T3", tuple(notes))

    if name == "moldoveanu-pascu-remark":
        s = complex(1, params.s.imag)
        c = -1 / params.alpha
        params = CriterionParams(alpha=params.alpha, c=c, s=s, m=2.0, k=params.k)
        return PresetApplication(f, Var(), const(1), params, "T3", tuple(notes))

    if name == "singh-chichra":
        h0 = eval_expr(h, 0j)
        if abs(h0 - 1) > 1e-9:
            raise ParameterError(f"singh-chichra requires h(0)=1, got {h0!r}")
        alpha = 1 / params.s
        params = CriterionParams(alpha=alpha, c=params.c, s=params.s, m=2.0, k=params.k)
        return PresetApplication(f, f, div(const(1), h), params, "T3", tuple(notes))

    if name == "lewandowski":
        if k_fn is None:
            raise ParameterError("lewandowski requires a positive-real-part k_fn")
        k0 = eval_expr(k_fn, 0j)
        if abs(k0 - 1) > 1e-9:
            raise ParameterError(f"lewandowski requires k_fn(0)=1, got {k0!r}")
        hh = div(add(k_fn, const(1)), const(2))
        params = CriterionParams(alpha=1, c=-1, s=1, m=2.0, k=params.k)
        notes.append("positive real part of k_fn is assumed, not verified symbolically")
        return PresetApplication(f, f, hh, params, "T3", tuple(notes))

    if name == "ovesea":
        h0 = eval_expr(h, 0j)
        if abs(h0 - 1) > 1e-9:
            raise ParameterError(f"ovesea requires h(0)=1, got {h0!r}")
        params = CriterionParams(alpha=params.alpha, c=params.c, s=params.s,
                                 m=2.0, k=params.k)
        return PresetApplication(f, g, h, params, "T2", tuple(notes))

    # becker
    params = CriterionParams(alpha=1, c=params.c, s=1, m=params.m, k=params.k)
    return PresetApplication(f, Var(), const(-params.c), params, "becker", tuple(notes))

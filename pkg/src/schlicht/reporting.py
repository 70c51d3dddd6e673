"""Config resolution, criterion runs and JSON report assembly for the CLI.

Reports are deterministic: with a fixed config and seed (and timings
suppressed) repeated runs serialize to identical bytes.  Files are written
atomically, temp-then-rename.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .chains import chain_callable, chain_t6_callable, qc_bound_k
from .criteria import (
    CRITERION_IDS,
    CriterionParams,
    CriterionReport,
    DiskGrid,
    apply_preset,
    check_becker,
    check_log_derivative_condition,
    check_main_t2,
    check_qc_t5,
    check_simplified_t21,
    check_t3,
    check_t6,
)
from .dsl import parse
from .errors import ParameterError
from .expr import AnalyticTriple, Expr, Var, const, eval_expr
from .operators import QuadratureConfig, operator_values
from .oracle import derivative_nonvanishing, injectivity_test, preimage_count

__all__ = ["ResolvedConfig", "load_config", "run_check", "report_json",
           "atomic_write", "oracle_block", "subject_function", "build_chain"]


@dataclass
class ResolvedConfig:
    f: Expr
    g: Expr
    h: Expr
    params: CriterionParams
    check: str
    preset: str | None
    grid: DiskGrid
    quadrature: QuadratureConfig
    seed: int
    sources: dict


def _to_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ParameterError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def load_config(raw: dict, overrides: dict | None = None) -> ResolvedConfig:
    """Resolve a config mapping; flags in ``overrides`` win over the file."""
    overrides = overrides or {}
    merged = dict(raw)
    for key in ("grid", "quadrature", "params"):
        section = dict(raw.get(key) or {})
        section.update(overrides.get(key) or {})
        merged[key] = section
    for key in ("check", "preset", "seed", "f", "g", "h", "k_fn"):
        if overrides.get(key) is not None:
            merged[key] = overrides[key]

    f = parse(merged.get("f", "z"))
    g = parse(merged.get("g", "z"))
    h = parse(merged.get("h", "1"))
    k_fn = parse(merged["k_fn"]) if merged.get("k_fn") else None

    pr = merged.get("params") or {}
    params = CriterionParams(
        alpha=_to_complex(pr.get("alpha", 1)),
        c=_to_complex(pr.get("c", -1)),
        s=_to_complex(pr.get("s", 1)),
        m=float(pr.get("m", 2.0)),
        k=float(pr.get("k", 0.0)),
    )

    gr = merged.get("grid") or {}
    grid = DiskGrid(
        n_radial=int(gr.get("n_radial", 64)),
        n_angular=int(gr.get("n_angular", 128)),
        r_max=float(gr.get("r_max", 0.999)),
        refinement_levels=int(gr.get("refinement_levels", 3)),
    )
    qd = merged.get("quadrature") or {}
    quad = QuadratureConfig(
        nodes_per_panel=int(qd.get("nodes_per_panel", 16)),
        abs_tolerance=float(qd.get("abs_tolerance", 1e-10)),
        max_subdivision_depth=int(qd.get("max_subdivision_depth", 60)),
    )

    preset = merged.get("preset")
    check = merged.get("check")
    if preset:
        applied = apply_preset(preset, f, g, h, params, k_fn)
        f, g, h, params = applied.f, applied.g, applied.h, applied.params
        check = check or applied.check_id
        if check is None:
            check = applied.check_id
    if not check:
        raise ParameterError("config must name a check (or a preset that routes one)")
    if check not in CRITERION_IDS:
        raise ParameterError(f"unknown check {check!r}; known: {', '.join(CRITERION_IDS)}")
    params.validate()

    sources = {
        "f": merged.get("f", "z"), "g": merged.get("g", "z"),
        "h": merged.get("h", "1"), "k_fn": merged.get("k_fn"),
        "preset": preset,
    }
    return ResolvedConfig(f=f, g=g, h=h, params=params, check=check,
                          preset=preset, grid=grid, quadrature=quad,
                          seed=int(merged.get("seed", 0)), sources=sources)


def _cplx(v) -> list[float] | None:
    if v is None:
        return None
    v = complex(v)
    return [v.real, v.imag]


def _grid_dict(grid: DiskGrid) -> dict:
    return asdict(grid)


def _params_dict(p: CriterionParams) -> dict:
    return {"alpha": _cplx(p.alpha), "c": _cplx(p.c), "s": _cplx(p.s),
            "m": p.m, "k": p.k}


def _report_dict(rep: CriterionReport) -> dict:
    return {
        "criterion": rep.criterion_id,
        "satisfied": rep.satisfied,
        "margin": rep.margin,
        "witness": _cplx(rep.witness),
        "conditions": [
            {
                "name": c.name, "satisfied": c.satisfied, "strict": c.strict,
                "margin": c.margin, "rhs": c.rhs, "witness": _cplx(c.witness),
            }
            for c in rep.conditions
        ],
        "boundary_trend": [[r, v] for r, v in rep.boundary_trend],
        "grid": _grid_dict(rep.grid_used),
    }


def subject_function(rc: ResolvedConfig):
    """The function a criterion speaks about: f itself, or the operator."""
    if rc.check == "becker":
        return rc.f
    def op(zz):
        vals, _, _ = operator_values(rc.f, rc.g, rc.params.alpha,
                                     np.asarray(zz).ravel(), rc.quadrature)
        return vals.reshape(np.shape(zz))
    return op


def build_chain(rc: ResolvedConfig):
    """Loewner chain matching the configured criterion."""
    if rc.check == "T6":
        return chain_t6_callable(rc.f, rc.g, float(rc.params.alpha.real),
                                 rc.quadrature)
    if rc.check == "becker":
        # classical chain: the s = alpha = 1, h = -c reduction
        params = CriterionParams(alpha=1, c=rc.params.c, s=1,
                                 m=rc.params.m, k=rc.params.k)
        triple = AnalyticTriple.build(rc.f, Var(), const(-rc.params.c))
        return chain_callable(triple, params, rc.quadrature)
    if rc.check == "logderiv-Uk":
        op = subject_function(rc)

        def chain(z, t):
            return np.exp(np.asarray(t, dtype=float)) * np.asarray(op(z))
        return chain
    triple = AnalyticTriple.build(rc.f, rc.g, rc.h)
    return chain_callable(triple, rc.params, rc.quadrature)


def oracle_block(rc: ResolvedConfig, n_probes: int = 20) -> dict:
    """Injectivity, winding-count and derivative evidence for the subject."""
    fn = subject_function(rc)
    inj = injectivity_test(fn, rc.grid)
    rng = np.random.default_rng(rc.seed)
    zz = 0.85 * np.sqrt(rng.uniform(0, 1, n_probes)) * np.exp(
        2j * np.pi * rng.uniform(0, 1, n_probes))
    if isinstance(fn, Expr):
        targets = [eval_expr(fn, complex(z)) for z in zz]
    else:
        targets = list(np.asarray(fn(zz)))
    counts = [preimage_count(fn, complex(w0), r=0.9) for w0 in targets]
    deriv = derivative_nonvanishing(fn, rc.grid)
    return {
        "injective_on_grid": inj.injective_on_grid,
        "collision_pair": ([_cplx(inj.collision_pair[0]), _cplx(inj.collision_pair[1])]
                           if inj.collision_pair else None),
        "min_separation_ratio": inj.min_separation_ratio,
        "n_points": inj.n_points,
        "collision_tol": inj.tol,
        "preimage_counts": counts,
        "preimage_counts_ok": all(c in (0, 1) for c in counts),
        "n_probes": n_probes,
        "derivative_min_abs": deriv.min_abs,
        "derivative_flagged": deriv.flagged,
    }


def run_check(rc: ResolvedConfig, with_oracle: bool = True,
              with_timings: bool = True) -> tuple[dict, int]:
    """Run the configured criterion plus the oracle cross-check."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    qc_bound = None
    if rc.check == "T2":
        triple = AnalyticTriple.build(rc.f, rc.g, rc.h)
        rep = check_main_t2(triple, rc.params, rc.grid)
    elif rc.check == "T21":
        triple = AnalyticTriple.build(rc.f, rc.g, rc.h)
        rep = check_simplified_t21(triple, rc.params, rc.grid)
    elif rc.check == "T3":
        triple = AnalyticTriple.build(rc.f, rc.g, rc.h)
        rep = check_t3(triple, rc.params, rc.grid)
    elif rc.check == "becker":
        rep = check_becker(rc.f, rc.params.m, rc.grid)
    elif rc.check == "T5-qc":
        triple = AnalyticTriple.build(rc.f, rc.g, rc.h)
        rep, bound = check_qc_t5(triple, rc.params, rc.grid)
        if bound is not None:
            qb = qc_bound_k(rc.params.s, rc.params.k)
            qc_bound = {"s": _cplx(qb.s), "k": qb.k, "l1": qb.l1,
                        "l2": qb.l2, "l3": qb.l3, "K": qb.K}
    elif rc.check == "T6":
        if rc.params.alpha.imag != 0:
            raise ParameterError("this criterion needs real alpha > 0")
        rep = check_t6(rc.f, rc.g, rc.params.alpha.real, rc.params.k, rc.grid)
    elif rc.check == "logderiv-Uk":
        rep = check_log_derivative_condition(subject_function(rc),
                                             rc.params.k, rc.grid)
    else:  # pragma: no cover - guarded in load_config
        raise ParameterError(f"unknown check {rc.check!r}")
    timings["check_s"] = time.perf_counter() - t0

    report = {
        "version": __version__,
        "config": {
            **rc.sources,
            "check": rc.check,
            "params": _params_dict(rc.params),
            "grid": _grid_dict(rc.grid),
            "quadrature": asdict(rc.quadrature),
            "seed": rc.seed,
        },
        "check": _report_dict(rep),
        "qc_bound": qc_bound,
        "certified_on_grid": rep.satisfied,
    }
    if with_oracle:
        t0 = time.perf_counter()
        report["oracle"] = oracle_block(rc)
        timings["oracle_s"] = time.perf_counter() - t0
    if with_timings:
        report["timings"] = timings
    return report, (0 if rep.satisfied else 1)


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def atomic_write(path: str, data) -> None:
    """Write text or bytes via a temp file and rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".schlicht-")
    try:
        with os.fdopen(fd, mode) as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

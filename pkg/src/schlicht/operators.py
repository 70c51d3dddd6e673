"""Radial quadrature for the integral operators and their branch algebra.

Everything reduces to one bracket

    V(z) = alpha * int_0^1 t^(alpha-1) * Phi(z t)^beta * w(z t) dt,

where Phi(u) = g(u)/u (equal to 1 at the origin) and w is f' or 1.  The
full integral is then alpha * int_0^z g^(alpha-1) f' du = z^alpha V(z) and
the operator value is z * V(z)^(1/alpha).

Two branch continuations are maintained along the radial segment:

* Phi(u)^beta uses the continued argument of Phi from its value 1 at
  u = 0, unwrapped over a ladder of shared t anchors.  A gap whose
  principal argument jump reaches pi/2 is bisected; if bisection cannot
  resolve it the run is rejected.
* the outer 1/alpha power uses the continued logarithm of V along the
  partial integrals at panel edges, again starting from V = 1 at the
  origin.

Panels are Gauss-Legendre with a fixed node count; the error of each panel
is estimated by doubling the node count, and panels are bisected until the
estimate fits into the panel's share of the absolute tolerance.  For
Re(alpha) < 1 the substitution t = tau^q with q = ceil(1/Re(alpha))
removes the endpoint singularity of t^(alpha-1) before panels are laid
down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import (
    AlphaTooSmall,
    IntegrandSingular,
    NonvanishingViolation,
    ParameterError,
    ToleranceNotMet,
)
from .expr import Expr, Var, _ev, differentiate

__all__ = [
    "QuadratureConfig", "OperatorValue", "RadialBracket", "BracketFinal",
    "iter_radial_brackets", "bracket_final", "operator_values",
    "operator_g_alpha", "operator_pascu", "operator_moldoveanu_pascu",
    "operator_mocanu", "continued_gz_log", "DEFAULT_QUADRATURE",
]

_HALF_PI = math.pi / 2
_ZERO_RADIUS = 1e-100
_CHUNK = 2048


@dataclass(frozen=True)
class QuadratureConfig:
    nodes_per_panel: int = 16
    abs_tolerance: float = 1e-10
    max_subdivision_depth: int = 60

    def __post_init__(self):
        if self.nodes_per_panel < 4:
            raise ParameterError("nodes_per_panel must be >= 4")
        if not self.abs_tolerance > 0:
            raise ParameterError("abs_tolerance must be positive")
        if self.max_subdivision_depth < 1:
            raise ParameterError("max_subdivision_depth must be >= 1")


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class OperatorValue:
    value: complex
    estimated_error: float
    branch_ok: bool


@dataclass
class RadialBracket:
    """Bracket data for one batch of rays sharing a panel layout.

    ``sigmas`` are fractions of |z|; column j of ``values`` holds
    V(sigmas[j] * z).  ``logs`` and ``logphi_edges`` are the continued
    logarithms of V and of Phi = g(u)/u at the edge points.
    """

    z: np.ndarray
    sigmas: np.ndarray
    values: np.ndarray
    logs: np.ndarray
    logphi_edges: np.ndarray
    error: np.ndarray
    branch_ok: np.ndarray

    @property
    def value(self) -> np.ndarray:
        return self.values[:, -1]

    @property
    def log_value(self) -> np.ndarray:
        return self.logs[:, -1]

    @property
    def logphi_end(self) -> np.ndarray:
        return self.logphi_edges[:, -1]


@dataclass
class BracketFinal:
    """Flat per-point bracket results (prefix columns dropped)."""

    value: np.ndarray
    log_value: np.ndarray
    logphi_end: np.ndarray
    error: np.ndarray
    branch_ok: np.ndarray


@lru_cache(maxsize=None)
def _leg(n: int):
    return np.polynomial.legendre.leggauss(n)


def _first_bad(arr_points, mask) -> complex:
    idx = int(np.flatnonzero(mask.ravel())[0])
    return complex(arr_points.ravel()[idx])


class _RayLadder:
    """Anchor ladder carrying the continued log of Phi = g(u)/u per ray.

    All rays share the anchor fractions t of their own |z|, so the ladder
    state is a matrix indexed (ray, anchor).  Phi(0) = 1 anchors the
    continuation.  Queries resolve against the nearest anchor to the left;
    an argument jump >= pi/2, between anchors or from anchor to query,
    inserts new anchors, and failure to resolve it is an error.
    """

    def __init__(self, g: Expr, z: np.ndarray, ts: np.ndarray,
                 max_rounds: int = 64):
        self.g = g
        self.z = z
        self.max_rounds = max_rounds
        self.ts = np.asarray(ts, dtype=float)
        self.phi = None
        self.logphi = None
        self._rebuild()

    def _eval(self, ts: np.ndarray) -> np.ndarray:
        u = self.z[:, None] * ts[None, :]
        gu = _ev(self.g, u)
        bad = (gu == 0) | ~np.isfinite(gu.real) | ~np.isfinite(gu.imag)
        if np.any(bad):
            raise IntegrandSingular(_first_bad(u, bad))
        return gu / u

    def _rebuild(self) -> None:
        for _ in range(self.max_rounds):
            phi = self._eval(self.ts)
            left = np.concatenate(
                [np.ones((len(self.z), 1), dtype=complex), phi[:, :-1]], axis=1
            )
            dlog = np.log(phi / left)
            bad_gaps = np.any(np.abs(dlog.imag) >= _HALF_PI, axis=0)
            if not np.any(bad_gaps):
                self.phi = phi
                self.logphi = np.cumsum(dlog, axis=1)
                return
            lefts = np.concatenate([[0.0], self.ts[:-1]])
            mids = 0.5 * (lefts[bad_gaps] + self.ts[bad_gaps])
            merged = np.unique(np.concatenate([self.ts, mids]))
            if len(merged) == len(self.ts):
                break
            self.ts = merged
        raise ToleranceNotMet(
            "argument of g(u)/u jumps >= pi/2 between anchors; branch unresolved"
        )

    def logphi_at(self, ts: np.ndarray, phi_q: np.ndarray) -> np.ndarray:
        """Continued log of Phi at query fractions, given Phi there."""
        for _ in range(self.max_rounds):
            idx = np.searchsorted(self.ts, ts, side="right") - 1
            has_anchor = idx >= 0
            anchor_phi = np.where(has_anchor[None, :],
                                  self.phi[:, np.maximum(idx, 0)], 1.0)
            anchor_log = np.where(has_anchor[None, :],
                                  self.logphi[:, np.maximum(idx, 0)], 0.0)
            dlog = np.log(phi_q / anchor_phi)
            bad = np.any(np.abs(dlog.imag) >= _HALF_PI, axis=0)
            if not np.any(bad):
                return anchor_log + dlog
            self.ts = np.unique(np.concatenate([self.ts, ts[bad]]))
            self._rebuild()
        raise ToleranceNotMet(
            "argument of g(u)/u jumps >= pi/2 from anchor to node; branch unresolved"
        )


def _unwrap_prefix(vals: np.ndarray, start_log) -> tuple[np.ndarray, np.ndarray]:
    """Continued log along axis 1 of ``vals`` from exp(start_log) on the left.

    Returns (logs, ok); ok flags rows whose every principal step stayed
    below pi/2 in argument.
    """
    start = np.broadcast_to(np.asarray(start_log, dtype=complex), (vals.shape[0],))
    left = np.concatenate([np.exp(start)[:, None], vals[:, :-1]], axis=1)
    dlog = np.log(vals / left)
    ok = np.all(np.abs(dlog.imag) < _HALF_PI, axis=1)
    logs = start[:, None] + np.cumsum(dlog, axis=1)
    return logs, ok


def _substitution_order(alpha: complex) -> int:
    if alpha.real >= 1.0:
        return 1
    return min(16, int(math.ceil(1.0 / alpha.real)))


def _initial_tau_edges() -> np.ndarray:
    geom = [2.0 ** -j for j in range(10, 2, -1)]  # 2^-10 .. 2^-3
    lin = list(np.arange(0.25, 1.0 + 1e-12, 1.0 / 16.0))
    return np.array([0.0] + geom + lin, dtype=float)


def _bracket_chunk(g: Expr, weight: Expr | None, alpha: complex, beta: complex,
                   q: int, zc: np.ndarray, cfg: QuadratureConfig) -> RadialBracket:
    n = cfg.nodes_per_panel
    xlo, wlo = _leg(n)
    xhi, whi = _leg(2 * n)
    qa = q * alpha
    nz = len(zc)

    g_arg = None if isinstance(g, Var) else g
    ladder = (None if g_arg is None
              else _RayLadder(g_arg, zc, _initial_tau_edges()[1:] ** q))

    def phi_power(t: np.ndarray) -> np.ndarray:
        """Branch-continued Phi(z t)^beta at shared fractions t, per ray."""
        if ladder is None:
            return np.ones((nz, len(t)), dtype=complex)
        phi_q = ladder._eval(t)
        return np.exp(beta * ladder.logphi_at(t, phi_q))

    def rule_values(tau_nodes: np.ndarray) -> np.ndarray:
        # tau_nodes is (panels, nodes); result is (nz, panels, nodes)
        k, nn = tau_nodes.shape
        t = (tau_nodes ** q).ravel()
        vals = phi_power(t)
        if weight is not None:
            u = zc[:, None] * t[None, :]
            wt = _ev(weight, u)
            bad = ~np.isfinite(wt.real) | ~np.isfinite(wt.imag)
            if np.any(bad):
                raise IntegrandSingular(_first_bad(u, bad))
            vals = vals * wt
        vals = vals.reshape(nz, k, nn)
        tpow = np.exp((qa - 1) * np.log(tau_nodes))[None, :, :]
        return q * tpow * vals

    edges = _initial_tau_edges()
    panels = [(edges[i], edges[i + 1], 0) for i in range(len(edges) - 1)]
    accepted: list[tuple[float, float, int, np.ndarray, np.ndarray]] = []

    for _outer in range(8):
        while panels:
            a_arr = np.array([p[0] for p in panels])
            b_arr = np.array([p[1] for p in panels])
            depths = [p[2] for p in panels]
            mid = 0.5 * (a_arr + b_arr)
            half = 0.5 * (b_arr - a_arr)
            f_lo = rule_values(mid[:, None] + half[:, None] * xlo[None, :])
            f_hi = rule_values(mid[:, None] + half[:, None] * xhi[None, :])
            i_lo = half[None, :] * np.einsum("zkn,n->zk", f_lo, wlo)
            i_hi = half[None, :] * np.einsum("zkn,n->zk", f_hi, whi)
            err = np.abs(i_hi - i_lo)
            scale = 1.0 / max(1.0, abs(alpha))
            thresh = 0.25 * cfg.abs_tolerance * scale * (b_arr - a_arr)
            # the cascade toward the endpoint singularity at 0 converges
            # slower than panel length shrinks, so it gets a geometric
            # budget (summable, and beaten by the 2^-Re(q alpha) decay)
            at_zero = a_arr == 0.0
            depth_arr = np.array(depths, dtype=float)
            thresh[at_zero] = (0.1 * cfg.abs_tolerance * scale
                               * 0.75 ** depth_arr[at_zero])
            # rule differences bottom out at rounding noise of the panel sums
            noise = 100 * np.finfo(float).eps * (np.abs(i_lo) + np.abs(i_hi))
            converged = np.all(err <= np.maximum(thresh[None, :], noise), axis=0)
            splits = []
            for j, okp in enumerate(converged):
                if okp:
                    accepted.append((a_arr[j], b_arr[j], depths[j],
                                     i_hi[:, j], err[:, j]))
                    continue
                if depths[j] >= cfg.max_subdivision_depth:
                    raise ToleranceNotMet(
                        f"panel [{a_arr[j]:.3g},{b_arr[j]:.3g}] above tolerance "
                        f"at depth {depths[j]}"
                    )
                splits.append((a_arr[j], mid[j], depths[j] + 1))
                splits.append((mid[j], b_arr[j], depths[j] + 1))
            panels = splits

        accepted.sort(key=lambda p: p[0])
        b_edges = np.array([p[1] for p in accepted])
        partial = np.stack([p[3] for p in accepted], axis=1)
        err_panels = np.stack([p[4] for p in accepted], axis=1)
        sigmas = b_edges ** q
        prefix = np.cumsum(partial, axis=1)
        v_pref = alpha * prefix * np.exp(-alpha * np.log(sigmas))[None, :]
        bad = (v_pref == 0) | ~np.isfinite(v_pref.real) | ~np.isfinite(v_pref.imag)
        if np.any(bad):
            j = int(np.flatnonzero(np.any(bad, axis=0))[0])
            i = int(np.flatnonzero(bad[:, j])[0])
            raise NonvanishingViolation(complex(zc[i] * sigmas[j]))
        logs, ok = _unwrap_prefix(v_pref, 0j)
        if np.all(ok):
            break
        # outer continuation needs denser prefix edges: halve every panel
        panels = []
        for a, b, depth, _, _ in accepted:
            m_ = 0.5 * (a + b)
            panels.append((a, m_, depth + 1))
            panels.append((m_, b, depth + 1))
        accepted = []
    else:
        raise ToleranceNotMet("outer branch continuation unresolved")

    if ladder is None:
        logphi_edges = np.zeros((nz, len(sigmas)), dtype=complex)
    else:
        logphi_edges = ladder.logphi_at(sigmas, ladder._eval(sigmas))
    err_total = abs(alpha) * np.sum(err_panels, axis=1)
    branch_ok = ok & (err_total <= cfg.abs_tolerance)
    return RadialBracket(
        z=zc, sigmas=sigmas, values=v_pref, logs=logs,
        logphi_edges=logphi_edges, error=err_total, branch_ok=branch_ok,
    )


def _validate_alpha(alpha) -> complex:
    alpha = complex(alpha)
    if abs(alpha) < 1e-9:
        raise AlphaTooSmall(alpha)
    if alpha.real <= 0:
        raise AlphaTooSmall(alpha, reason="Re(alpha) <= 0 makes the integral diverge")
    return alpha


def _prepare(z) -> np.ndarray:
    zarr = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    if np.any(np.abs(zarr) > 1 + 1e-9):
        raise ParameterError("quadrature endpoints must satisfy |z| <= 1")
    return zarr


def iter_radial_brackets(g: Expr, alpha, z, cfg: QuadratureConfig | None = None,
                         phi_exponent=None, weight: Expr | None = None,
                         ) -> Iterator[tuple[np.ndarray, RadialBracket]]:
    """Yield (flat indices, RadialBracket) per processing chunk.

    Endpoints with |z| below 1e-100 are skipped; there V = 1 exactly.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    alpha = _validate_alpha(alpha)
    beta = complex(phi_exponent) if phi_exponent is not None else alpha - 1
    zarr = _prepare(z)
    q = _substitution_order(alpha)
    idx_nonzero = np.flatnonzero(np.abs(zarr) > _ZERO_RADIUS)
    for start in range(0, len(idx_nonzero), _CHUNK):
        sel = idx_nonzero[start:start + _CHUNK]
        yield sel, _bracket_chunk(g, weight, alpha, beta, q, zarr[sel], cfg)


def bracket_final(g: Expr, alpha, z, cfg: QuadratureConfig | None = None,
                  phi_exponent=None, weight: Expr | None = None) -> BracketFinal:
    """Flat bracket values over a batch of endpoints, zeros filled with V = 1."""
    zarr = _prepare(z)
    nz = len(zarr)
    out = BracketFinal(
        value=np.ones(nz, dtype=complex),
        log_value=np.zeros(nz, dtype=complex),
        logphi_end=np.zeros(nz, dtype=complex),
        error=np.zeros(nz, dtype=float),
        branch_ok=np.ones(nz, dtype=bool),
    )
    for sel, br in iter_radial_brackets(g, alpha, zarr, cfg, phi_exponent, weight):
        out.value[sel] = br.value
        out.log_value[sel] = br.log_value
        out.logphi_end[sel] = br.logphi_end
        out.error[sel] = br.error
        out.branch_ok[sel] = br.branch_ok
    return out


def operator_values(f: Expr, g: Expr, alpha, z,
                    cfg: QuadratureConfig | None = None):
    """Vectorized operator evaluation; returns (values, errors, branch_ok)."""
    alpha = _validate_alpha(alpha)
    zarr = _prepare(z)
    fin = bracket_final(g, alpha, zarr, cfg, phi_exponent=alpha - 1,
                        weight=differentiate(f))
    vals = zarr * np.exp(fin.log_value / alpha)
    scale = np.abs(vals) / np.maximum(np.abs(alpha * fin.value), 1e-300)
    return vals, fin.error * scale, fin.branch_ok


def _scalar_operator(vals, errs, ok) -> OperatorValue:
    return OperatorValue(complex(vals[0]), float(errs[0]), bool(ok[0]))


def operator_g_alpha(f: Expr, g: Expr, alpha, z,
                     cfg: QuadratureConfig | None = None) -> OperatorValue:
    """[alpha * int_0^z g^(alpha-1)(u) f'(u) du]^(1/alpha), branch continued."""
    return _scalar_operator(*operator_values(f, g, alpha, complex(z), cfg))


def operator_pascu(f: Expr, alpha, z,
                   cfg: QuadratureConfig | None = None) -> OperatorValue:
    """The g = z specialization."""
    return operator_g_alpha(f, Var(), alpha, z, cfg)


def _weightless(g: Expr, alpha, z, cfg, phi_exponent) -> OperatorValue:
    alpha = _validate_alpha(alpha)
    zc = np.atleast_1d(np.asarray(complex(z)))
    fin = bracket_final(g, alpha, zc, cfg, phi_exponent=phi_exponent, weight=None)
    vals = zc * np.exp(fin.log_value / alpha)
    scale = np.abs(vals) / np.maximum(np.abs(alpha * fin.value), 1e-300)
    return _scalar_operator(vals, fin.error * scale, fin.branch_ok)


def operator_moldoveanu_pascu(g: Expr, alpha, z,
                              cfg: QuadratureConfig | None = None) -> OperatorValue:
    """The f = z specialization (f' identically 1)."""
    return _weightless(g, alpha, z, cfg, phi_exponent=complex(alpha) - 1)


def operator_mocanu(g: Expr, alpha, z,
                    cfg: QuadratureConfig | None = None) -> OperatorValue:
    """[alpha * int_0^z g^alpha(u)/u du]^(1/alpha); g^alpha/u = u^(alpha-1)(g/u)^alpha."""
    return _weightless(g, alpha, z, cfg, phi_exponent=complex(alpha))


def continued_gz_log(g: Expr, z, max_rounds: int = 64) -> np.ndarray:
    """Continued log of g(z)/z along each radial segment, 0 at the origin.

    Vectorized over ``z``; the value at z = 0 is exactly 0.
    """
    zarr = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    out = np.zeros(zarr.shape, dtype=complex)
    if isinstance(g, Var):
        return out
    nonzero = np.flatnonzero(np.abs(zarr) > _ZERO_RADIUS)
    ts = np.unique(np.concatenate([_initial_tau_edges()[1:], [1.0]]))
    one = np.array([1.0])
    for start in range(0, len(nonzero), 8192):
        sel = nonzero[start:start + 8192]
        ladder = _RayLadder(g, zarr[sel], ts, max_rounds=max_rounds)
        logs = ladder.logphi_at(one, ladder._eval(one))
        out[sel] = logs[:, 0]
    return out

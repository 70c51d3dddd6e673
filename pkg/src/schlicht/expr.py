"""Expression trees for analytic functions of one complex variable.

Nodes are immutable dataclasses, so structural equality and hashing come
for free.  Evaluation accepts Python scalars or numpy arrays and always
uses principal branches: Im(Log) in (-pi, pi] for log and for non-integer
powers.  Differentiation is symbolic tree rewriting; the only
simplification performed anywhere is folding of constant subtrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchPointHit, DivisionByZero, NonFiniteValue, ParameterError

__all__ = [
    "Expr", "Var", "Const", "Neg", "Add", "Sub", "Mul", "Div", "Pow", "Exp", "Log",
    "Z", "var", "const", "neg", "add", "sub", "mul", "div", "pow_", "exp_", "log_",
    "eval_expr", "differentiate", "principal_power", "log_derivative_at",
    "log_derivative_field", "AnalyticTriple",
]


@dataclass(frozen=True)
class Expr:
    """Base node; concrete kinds subclass this."""


@dataclass(frozen=True)
class Var(Expr):
    """The variable z."""


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Neg(Expr):
    a: Expr


@dataclass(frozen=True)
class Add(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Mul(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    expo: Expr


@dataclass(frozen=True)
class Exp(Expr):
    a: Expr


@dataclass(frozen=True)
class Log(Expr):
    a: Expr


Z = Var()


def var() -> Var:
    return Z


def const(v) -> Const:
    return Const(complex(v))


def _finite(v: complex) -> bool:
    return math.isfinite(v.real) and math.isfinite(v.imag)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    return Neg(a)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        v = a.value + b.value
        if _finite(v):
            return Const(v)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        v = a.value - b.value
        if _finite(v):
            return Const(v)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        v = a.value * b.value
        if _finite(v):
            return Const(v)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        v = a.value / b.value
        if _finite(v):
            return Const(v)
    return Div(a, b)


def pow_(base: Expr, expo: Expr) -> Expr:
    if isinstance(base, Const) and isinstance(expo, Const) and base.value != 0:
        v = principal_power(base.value, expo.value)
        if _finite(v):
            return Const(v)
    return Pow(base, expo)


def exp_(a: Expr) -> Expr:
    if isinstance(a, Const):
        v = np.exp(complex(a.value))
        if _finite(complex(v)):
            return Const(complex(v))
    return Exp(a)


def log_(a: Expr) -> Expr:
    if isinstance(a, Const) and a.value != 0:
        return Const(complex(np.log(complex(a.value))))
    return Log(a)


_MAX_INT_POW = 64


def principal_power(w, exponent):
    """exp(exponent * Log w) with the principal logarithm.

    0**e is 0 for Re e > 0 and a BranchPointHit otherwise.  Integer
    exponents of small magnitude use repeated multiplication, which agrees
    with the principal branch and avoids transcendental round-off.
    Accepts scalars or arrays in ``w``; ``exponent`` is a scalar.
    """
    e = complex(exponent)
    scalar_in = np.isscalar(w) or isinstance(w, complex)
    arr = np.asarray(w, dtype=complex)
    if e == 1:
        out = arr.copy()
    elif e == 0:
        if np.any(arr == 0):
            raise BranchPointHit(0j)
        out = np.ones_like(arr)
    elif e.imag == 0 and float(e.real).is_integer() and abs(e.real) <= _MAX_INT_POW:
        n = int(e.real)
        if n < 0 and np.any(arr == 0):
            raise BranchPointHit(0j)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = arr ** n
    else:
        zero = arr == 0
        if np.any(zero):
            if e.real <= 0:
                raise BranchPointHit(0j)
            out = np.zeros_like(arr)
            nz = ~zero
            out[nz] = np.exp(e * np.log(arr[nz]))
        else:
            out = np.exp(e * np.log(arr))
    if scalar_in:
        return complex(out)
    return out


def _ev(e: Expr, z: np.ndarray) -> np.ndarray:
    if isinstance(e, Var):
        return z
    if isinstance(e, Const):
        return np.full(z.shape, e.value, dtype=complex)
    if isinstance(e, Neg):
        return -_ev(e.a, z)
    if isinstance(e, Add):
        return _ev(e.a, z) + _ev(e.b, z)
    if isinstance(e, Sub):
        return _ev(e.a, z) - _ev(e.b, z)
    if isinstance(e, Mul):
        return _ev(e.a, z) * _ev(e.b, z)
    if isinstance(e, Div):
        den = _ev(e.b, z)
        bad = den == 0
        if np.any(bad):
            raise DivisionByZero(complex(z.flat[int(np.flatnonzero(bad.ravel())[0])]), e.b)
        return _ev(e.a, z) / den
    if isinstance(e, Exp):
        return np.exp(_ev(e.a, z))
    if isinstance(e, Log):
        v = _ev(e.a, z)
        bad = v == 0
        if np.any(bad):
            raise BranchPointHit(complex(z.flat[int(np.flatnonzero(bad.ravel())[0])]))
        return np.log(v)
    if isinstance(e, Pow):
        base = _ev(e.base, z)
        if isinstance(e.expo, Const):
            return principal_power(base, e.expo.value)
        expo = _ev(e.expo, z)
        bad = base == 0
        if np.any(bad):
            raise BranchPointHit(complex(z.flat[int(np.flatnonzero(bad.ravel())[0])]))
        return np.exp(expo * np.log(base))
    raise TypeError(f"unknown expression node {e!r}")


def eval_expr(e: Expr, z):
    """Evaluate ``e`` at ``z`` (scalar or ndarray) under principal branches.

    Raises NonFiniteValue if any component of the result is NaN or inf.
    """
    scalar_in = np.isscalar(z) or isinstance(z, complex)
    arr = np.asarray(z, dtype=complex)
    out = _ev(e, arr)
    bad = ~np.isfinite(out.real) | ~np.isfinite(out.imag)
    if np.any(bad):
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise NonFiniteValue(complex(arr.flat[idx]))
    if scalar_in:
        return complex(out)
    return out


def differentiate(e: Expr) -> Expr:
    """Exact symbolic d/dz; the result is again an Expr."""
    if isinstance(e, Var):
        return Const(1.0 + 0j)
    if isinstance(e, Const):
        return Const(0j)
    if isinstance(e, Neg):
        return neg(differentiate(e.a))
    if isinstance(e, Add):
        return add(differentiate(e.a), differentiate(e.b))
    if isinstance(e, Sub):
        return sub(differentiate(e.a), differentiate(e.b))
    if isinstance(e, Mul):
        return add(mul(differentiate(e.a), e.b), mul(e.a, differentiate(e.b)))
    if isinstance(e, Div):
        num = sub(mul(differentiate(e.a), e.b), mul(e.a, differentiate(e.b)))
        return div(num, mul(e.b, e.b))
    if isinstance(e, Exp):
        return mul(Exp(e.a), differentiate(e.a))
    if isinstance(e, Log):
        return div(differentiate(e.a), e.a)
    if isinstance(e, Pow):
        if isinstance(e.expo, Const):
            c = e.expo.value
            if c == 0:
                return Const(0j)
            if c == 1:
                return differentiate(e.base)
            if c == 2:
                return mul(mul(const(2), e.base), differentiate(e.base))
            inner = mul(const(c), pow_(e.base, const(c - 1)))
            return mul(inner, differentiate(e.base))
        # u^v = exp(v log u); derivative via the chain on the exponent form
        du, dv = differentiate(e.base), differentiate(e.expo)
        return mul(e, add(mul(dv, log_(e.base)), mul(e.expo, div(du, e.base))))
    raise TypeError(f"unknown expression node {e!r}")


def log_derivative_field(e: Expr, z, deriv: Expr | None = None):
    """z * e'(z) / e(z) with the removable singularity resolved at z = 0.

    For an expression vanishing at the origin (a normalized member of the
    class A with a simple zero) the limit is 1; for e(0) != 0 the value at
    0 is exactly 0.  Vectorized over ``z``.
    """
    d = deriv if deriv is not None else differentiate(e)
    scalar_in = np.isscalar(z) or isinstance(z, complex)
    arr = np.asarray(z, dtype=complex)
    vals = _ev(e, arr)
    dvals = _ev(d, arr)
    at0 = arr == 0
    den_bad = (vals == 0) & ~at0
    if np.any(den_bad):
        idx = int(np.flatnonzero(den_bad.ravel())[0])
        raise DivisionByZero(complex(arr.flat[idx]), e)
    out = np.empty(arr.shape, dtype=complex)
    nz = ~at0
    out[nz] = arr[nz] * dvals[nz] / vals[nz]
    if np.any(at0):
        v0 = complex(_ev(e, np.zeros(1, dtype=complex))[0])
        out[at0] = 1.0 if abs(v0) <= 1e-14 else 0.0
    bad = ~np.isfinite(out.real) | ~np.isfinite(out.imag)
    if np.any(bad):
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise NonFiniteValue(complex(arr.flat[idx]))
    if scalar_in:
        return complex(out)
    return out


def log_derivative_at(e: Expr, z, deriv: Expr | None = None) -> complex:
    """Scalar convenience wrapper around :func:`log_derivative_field`."""
    return complex(log_derivative_field(e, complex(z), deriv))


_NORM_TOL = 1e-12


@dataclass(frozen=True)
class AnalyticTriple:
    """The data (f, g, h) entering the operator criteria.

    f and g are normalized (value 0 and derivative 1 at the origin); h is
    any analytic function whose value h0 at the origin avoids (-inf, 0].
    First and second derivatives needed by the inequality fields are cached
    as expression trees.
    """

    f: Expr
    g: Expr
    h: Expr
    h0: complex
    fp: Expr
    fpp: Expr
    gp: Expr
    hp: Expr

    @staticmethod
    def build(f: Expr, g: Expr, h: Expr) -> "AnalyticTriple":
        for name, e in (("f", f), ("g", g)):
            v0 = eval_expr(e, 0j)
            d0 = eval_expr(differentiate(e), 0j)
            if abs(v0) > _NORM_TOL or abs(d0 - 1) > _NORM_TOL:
                raise ParameterError(
                    f"{name} is not normalized: {name}(0)={v0!r}, {name}'(0)={d0!r}"
                )
        h0 = eval_expr(h, 0j)
        if h0.imag == 0 and h0.real <= 0:
            raise ParameterError(f"h(0)={h0!r} lies on (-inf, 0]")
        fp = differentiate(f)
        return AnalyticTriple(
            f=f, g=g, h=h, h0=h0,
            fp=fp, fpp=differentiate(fp),
            gp=differentiate(g), hp=differentiate(h),
        )

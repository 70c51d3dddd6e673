"""Exception hierarchy shared by all schlicht modules."""

from __future__ import annotations


class SchlichtError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteValue(SchlichtError):
    """An evaluation produced NaN or infinity."""

    def __init__(self, z, detail=""):
        self.z = z
        super().__init__(f"non-finite value at z={z!r} {detail}".rstrip())


class DivisionByZero(SchlichtError):
    """A subexpression divided by zero during evaluation."""

    def __init__(self, z, subexpr=None):
        self.z = z
        self.subexpr = subexpr
        what = f" in {subexpr!r}" if subexpr is not None else ""
        super().__init__(f"division by zero at z={z!r}{what}")


class BranchPointHit(SchlichtError):
    """log or a non-positive power was taken at 0."""

    def __init__(self, z):
        self.z = z
        super().__init__(f"branch point hit at z={z!r}")


class DslSyntaxError(SchlichtError):
    """Malformed DSL input; carries a ParseDiagnostic."""

    def __init__(self, diagnostic):
        self.diagnostic = diagnostic
        super().__init__(
            f"parse error at offset {diagnostic.position}: {diagnostic.message}"
        )


class ParameterError(SchlichtError):
    """Parameters violate a documented precondition."""


class UnknownPreset(SchlichtError):
    def __init__(self, name, known):
        self.name = name
        super().__init__(f"unknown preset {name!r}; known: {', '.join(sorted(known))}")


class AlphaTooSmall(SchlichtError):
    """alpha is too close to 0, or its real part makes the integral diverge."""

    def __init__(self, alpha, reason="modulus below 1e-9"):
        self.alpha = alpha
        super().__init__(f"alpha={alpha!r} rejected: {reason}")


class IntegrandSingular(SchlichtError):
    """g vanished (or blew up) at a quadrature node away from the origin."""

    def __init__(self, node):
        self.node = node
        super().__init__(f"integrand singular at node u={node!r}")


class ToleranceNotMet(SchlichtError):
    """Adaptive subdivision exhausted its depth before reaching tolerance."""


class NonvanishingViolation(SchlichtError):
    """A chain bracket vanished where the construction needs it nonzero."""

    def __init__(self, where):
        self.where = where
        super().__init__(f"chain bracket vanished at {where!r}")


class DenominatorZero(SchlichtError):
    """The Moebius transfer denominator (1-s)A+m vanished."""


class PoleAtOne(SchlichtError):
    """w = 1 has no finite Caratheodory transform p = (1+w)/(1-w)."""


class DegenerateJacobian(SchlichtError):
    """|F_z| is numerically zero; the Beltrami quotient is undefined."""

    def __init__(self, z):
        self.z = z
        super().__init__(f"degenerate Jacobian at z={z!r}")


class OnCurve(SchlichtError):
    """f(z) - w0 vanishes on the probe circle even after perturbing r."""


class UnresolvedWinding(SchlichtError):
    """Adjacent phase steps stayed >= pi/2 after maximal refinement."""

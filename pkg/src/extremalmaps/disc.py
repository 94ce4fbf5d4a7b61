"""Weighted composition operators on the disc and boundary extremality.

The commutative counterpart of the matrix-block story: evaluation functionals
at boundary points are the extremal functionals of the disc setting, and a
weighted composition operator ``f -> m(z) * f(s(z))`` pulls the evaluation at
``z`` back to ``m(z)`` times the evaluation at ``s(z)``.  That pullback stays
extremal exactly when both the multiplier and the symbol are inner, which for
the rational case means finite Blaschke products.

:func:`boundary_extremality_check` samples the unit circle on a uniform grid
and reports the worst deviation of ``|m|`` and ``|s|`` from 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOUNDARY_TOL = 1e-12
MAX_POLY_DEGREE = 256


class InvalidZero(ValueError):
    """A Blaschke zero must lie strictly inside the unit disc."""


class OutsideDisc(ValueError):
    """Evaluation point lies outside the closed unit disc."""


class NotBoundary(ValueError):
    """Point is not on the unit circle."""


class NotUnimodular(ValueError):
    """A value that must have modulus one does not."""


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product ``phase * prod (z - a_i) / (1 - conj(a_i) z)``.

    :param phase: unimodular constant in front of the product.
    :param zeros: zeros inside the open disc, each of modulus < 1 - 1e-12.
    """

    phase: complex = 1.0
    zeros: tuple[complex, ...] = ()

    def __post_init__(self):
        phase = complex(self.phase)
        if abs(abs(phase) - 1.0) > BOUNDARY_TOL:
            raise NotUnimodular(f"phase has modulus {abs(phase):.6f}")
        zs = tuple(complex(a) for a in self.zeros)
        for a in zs:
            if abs(a) >= 1.0 - 1e-12:
                raise InvalidZero(f"zero {a} is not strictly inside the disc")
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "zeros", zs)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        return blaschke_eval(self, z)


def blaschke_eval(b: BlaschkeProduct, z):
    """Evaluate a Blaschke product on the closed disc (scalar or array).

    :raises OutsideDisc: if any point has modulus above ``1 + 1e-12``.
    """
    zv = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(zv) > 1.0 + BOUNDARY_TOL):
        raise OutsideDisc("evaluation point outside the closed unit disc")
    out = np.full_like(zv, b.phase)
    for a in b.zeros:
        out = out * (zv - a) / (1.0 - np.conj(a) * zv)
    return complex(out) if np.isscalar(z) or zv.ndim == 0 else out


@dataclass(frozen=True)
class DiscCompositionOp:
    """Weighted composition operator ``f -> multiplier * (f o symbol)``.

    The symbol must be a Blaschke product (it has to map the disc to itself);
    the multiplier may be any callable on the closed disc, with Blaschke
    products as the extremality-preserving case.
    """

    multiplier: object
    symbol: BlaschkeProduct

    def multiplier_values(self, z):
        if isinstance(self.multiplier, BlaschkeProduct):
            return blaschke_eval(self.multiplier, z)
        return self.multiplier(np.asarray(z, dtype=np.complex128))

    def symbol_values(self, z):
        return blaschke_eval(self.symbol, z)


def comp_op_apply(op: DiscCompositionOp, coeffs, points):
    """Apply the operator to the polynomial with ascending ``coeffs`` at ``points``.

    :raises ValueError: for polynomials of degree above 256.
    :raises OutsideDisc: if a point leaves the closed disc.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must form a nonempty 1-d sequence")
    if c.size > MAX_POLY_DEGREE + 1:
        raise ValueError(f"polynomial degree exceeds {MAX_POLY_DEGREE}")
    pts = np.asarray(points, dtype=np.complex128)
    if np.any(np.abs(pts) > 1.0 + BOUNDARY_TOL):
        raise OutsideDisc("evaluation point outside the closed unit disc")
    inner = op.symbol_values(pts)
    return op.multiplier_values(pts) * np.polynomial.polynomial.polyval(inner, c)


@dataclass(frozen=True)
class EvaluationPullback:
    """Adjoint image of a boundary evaluation: ``weight * (evaluation at point)``."""

    weight: complex
    point: complex


def comp_op_adjoint_on_evaluation(op: DiscCompositionOp, point: complex,
                                  tol: float = BOUNDARY_TOL) -> EvaluationPullback:
    """Pull a boundary evaluation functional back through the operator.

    :raises NotBoundary: if ``point`` is not on the unit circle.
    :raises NotUnimodular: if the weight or the image point leaves the circle,
        in which case the pullback is not extremal.
    """
    zeta = complex(point)
    if abs(abs(zeta) - 1.0) > tol:
        raise NotBoundary(f"|point| = {abs(zeta):.15f}")
    w = complex(np.asarray(op.multiplier_values(zeta)))
    x = complex(np.asarray(op.symbol_values(zeta)))
    if abs(abs(w) - 1.0) > tol:
        raise NotUnimodular(f"multiplier value has modulus {abs(w):.15f}")
    if abs(abs(x) - 1.0) > tol:
        raise NotUnimodular(f"symbol value has modulus {abs(x):.15f}")
    return EvaluationPullback(weight=w, point=x)


@dataclass(frozen=True)
class BoundaryReport:
    """Grid survey of boundary extremality for a composition operator."""

    accepted: bool
    deviation: float
    worst_t: float
    multiplier_deviation: float
    symbol_deviation: float
    grid: int
    tol: float


def boundary_extremality_check(op: DiscCompositionOp, grid: int = 4096,
                               tol: float = 1e-10) -> BoundaryReport:
    """Sample ``|multiplier|`` and ``|symbol|`` on a uniform boundary grid.

    The operator's adjoint preserves boundary evaluations exactly when both
    stay unimodular on the circle; the report records the largest deviation
    and the angle where it occurs.
    """
    if grid < 1:
        raise ValueError("grid must be positive")
    t = 2.0 * np.pi * np.arange(grid) / grid
    zeta = np.exp(1j * t)
    mdev = np.abs(np.abs(np.asarray(op.multiplier_values(zeta))) - 1.0)
    sdev = np.abs(np.abs(np.asarray(op.symbol_values(zeta))) - 1.0)
    dev = np.maximum(mdev, sdev)
    idx = int(np.argmax(dev))
    return BoundaryReport(accepted=bool(dev[idx] <= tol),
                          deviation=float(dev[idx]),
                          worst_t=float(t[idx]),
                          multiplier_deviation=float(mdev.max()),
                          symbol_deviation=float(sdev.max()),
                          grid=grid,
                          tol=tol)

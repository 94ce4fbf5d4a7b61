"""Dense complex matrix helpers: rank-one certification, unitary completion, trace norms.

Everything here works on plain ``numpy`` arrays with ``complex128`` entries.
The SVD-backed certifications take an explicit tolerance so callers can
tighten or relax acceptance without touching global state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Default certification tolerance used across the package.
DEFAULT_TOL = 1e-8

#: Tolerance for structural invariants of certificates (orthonormal columns,
#: orthonormal frame rows, unitarity of completions).
STRUCTURE_TOL = 1e-10


class ZeroMatrix(ValueError):
    """A matrix that must be nonzero is numerically zero."""


class NotUnit(ValueError):
    """A vector that must have norm one fails the check."""


class ShapeMismatch(ValueError):
    """Array dimensions are inconsistent with the requested operation."""


def as_cmatrix(m) -> np.ndarray:
    """Coerce ``m`` to a 2-D complex128 array with finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def as_cvector(x) -> np.ndarray:
    """Coerce ``x`` to a 1-D complex128 array with finite entries."""
    v = np.asarray(x, dtype=np.complex128).reshape(-1)
    if v.size and not np.all(np.isfinite(v)):
        raise ValueError("vector contains non-finite entries")
    return v


def frobenius(m) -> float:
    """Frobenius norm of a matrix."""
    return float(np.linalg.norm(np.asarray(m)))


def operator_norm(m) -> float:
    """Largest singular value."""
    a = as_cmatrix(m)
    return float(np.linalg.svd(a, compute_uv=False)[0])


def trace_norm(m) -> float:
    """Sum of singular values of ``m``."""
    a = as_cmatrix(m)
    return float(np.linalg.svd(a, compute_uv=False).sum())


@dataclass(frozen=True)
class RankOneFactor:
    """Top singular triple of a matrix, certified (or not) as rank-one-unit.

    ``left`` and ``right`` are unit vectors with ``M ~ sigma1 * left @ right^H``.
    The phase gauge is canonical: the first component of ``right`` with modulus
    above the certification tolerance is real positive, and the compensating
    phase sits in ``left``.  ``accepted`` is True iff ``|sigma1 - 1| <= tol``
    and ``sigma2 <= tol`` at the tolerance the factorization was computed with.
    """

    left: np.ndarray
    right: np.ndarray
    sigma1: float
    sigma2: float
    accepted: bool


def rank_one_factor(m, tol: float = DEFAULT_TOL) -> RankOneFactor:
    """Certify ``m`` as a norm-one rank-one matrix via its SVD.

    :param m: complex matrix.
    :param tol: certification tolerance.
    :raises ZeroMatrix: if the Frobenius norm of ``m`` is <= tol.
    """
    a = as_cmatrix(m)
    if frobenius(a) <= tol:
        raise ZeroMatrix("matrix is numerically zero")
    u, s, vh = np.linalg.svd(a)
    sigma1 = float(s[0])
    sigma2 = float(s[1]) if s.size > 1 else 0.0
    left = u[:, 0].copy()
    right = vh[0].conj().copy()
    # Canonical phase: first significant entry of `right` made real positive.
    idx = np.flatnonzero(np.abs(right) > tol)
    if idx.size == 0:  # pragma: no cover - right is a unit vector
        idx = np.array([int(np.argmax(np.abs(right)))])
    pivot = right[idx[0]]
    c = np.conj(pivot) / abs(pivot)
    # Multiplying both factors by the same unimodular c leaves left@right^H fixed.
    left *= c
    right *= c
    accepted = abs(sigma1 - 1.0) <= tol and sigma2 <= tol
    return RankOneFactor(left=left, right=right, sigma1=sigma1, sigma2=sigma2,
                         accepted=accepted)


def complete_to_unitary(x, y, dim: int | None = None,
                        tol: float = DEFAULT_TOL) -> np.ndarray:
    """Deterministic unitary ``V`` with ``V @ x = y`` for unit vectors x, y.

    ``V`` rotates within span{x, y} and acts as the identity on the orthogonal
    complement (a product of two reflections).  If ``y`` is a unimodular
    multiple ``lambda * x``, returns ``lambda * I``.

    :param dim: expected ambient dimension (defaults to ``len(x)``).
    :raises NotUnit: if either vector is not norm one within ``tol``.
    :raises ShapeMismatch: on inconsistent lengths.
    """
    xv = as_cvector(x)
    yv = as_cvector(y)
    n = xv.size if dim is None else int(dim)
    if xv.size != n or yv.size != n:
        raise ShapeMismatch(f"expected vectors of length {n}")
    if abs(np.linalg.norm(xv) - 1.0) > tol:
        raise NotUnit("x is not a unit vector")
    if abs(np.linalg.norm(yv) - 1.0) > tol:
        raise NotUnit("y is not a unit vector")

    c = np.vdot(xv, yv)  # <y, x> coefficient of y along x
    f = yv - c * xv
    # Second orthogonalization pass keeps the complement accurate when x and y
    # are almost parallel.
    f -= np.vdot(xv, f) * xv
    s = np.linalg.norm(f)
    if s <= 1e-13:
        lam = c / abs(c)
        return lam * np.eye(n, dtype=np.complex128)
    e2 = f / s
    basis = np.stack([xv, e2], axis=1)  # n x 2
    g = np.array([[c, -s], [s, np.conj(c)]], dtype=np.complex128)
    v = np.eye(n, dtype=np.complex128) + basis @ (g - np.eye(2)) @ basis.conj().T
    return v


def nearest_isometry(m) -> np.ndarray:
    """Polar factor of ``m``: the closest matrix with orthonormal columns."""
    a = as_cmatrix(m)
    if a.shape[0] < a.shape[1]:
        raise ShapeMismatch("no isometry with more columns than rows")
    u, _, vh = np.linalg.svd(a, full_matrices=False)
    return u @ vh

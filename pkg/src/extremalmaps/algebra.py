"""Block matrix algebras, trace-duality functionals, and extreme-point tests.

A finite block algebra is a direct sum of full complex matrix blocks.  A
functional on it is stored through trace duality: one representative matrix
per block, acting as ``rho(A) = sum_i tr(S_i A_i)``.  The functional norm is
then the sum of blockwise trace norms, extreme points of the unit ball are
exactly the norm-one rank-one single-block functionals, and pure states are
the positive ones among them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numkit import (DEFAULT_TOL, NotUnit, ShapeMismatch, ZeroMatrix,
                     as_cmatrix, as_cvector, complete_to_unitary, frobenius,
                     rank_one_factor, trace_norm)

# Reasons a functional can fail the extreme-point test.
MULTI_BLOCK_SUPPORT = "multi_block_support"
RANK_EXCEEDS_ONE = "rank_exceeds_one"
NORM_NOT_ONE = "norm_not_one"


class NotProjection(ValueError):
    """The compression element is not an orthogonal projection."""


class NotExtremal(ValueError):
    """A functional that must be an extreme point of the dual ball is not."""


@dataclass(frozen=True)
class BlockShape:
    """Dimensions of the square blocks of a direct-sum algebra."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a block algebra needs at least one block")
        if any(d < 1 for d in dims):
            raise ValueError(f"block dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    @property
    def total(self) -> int:
        return sum(self.dims)


def _coerce_blocks(shape: BlockShape, blocks) -> tuple[np.ndarray, ...]:
    mats = [as_cmatrix(b) for b in blocks]
    if len(mats) != len(shape):
        raise ShapeMismatch(f"expected {len(shape)} blocks, got {len(mats)}")
    for d, m in zip(shape, mats):
        if m.shape != (d, d):
            raise ShapeMismatch(f"block of shape {m.shape} does not fit dim {d}")
    return tuple(mats)


@dataclass(frozen=True)
class BlockElement:
    """An element of a direct-sum matrix algebra, one square matrix per block."""

    shape: BlockShape
    blocks: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", _coerce_blocks(self.shape, self.blocks))

    @classmethod
    def zeros(cls, shape: BlockShape) -> "BlockElement":
        return cls(shape, tuple(np.zeros((d, d), dtype=np.complex128) for d in shape))

    @classmethod
    def identity(cls, shape: BlockShape) -> "BlockElement":
        return cls(shape, tuple(np.eye(d, dtype=np.complex128) for d in shape))

    @classmethod
    def matrix_unit(cls, shape: BlockShape, block: int, p: int, q: int) -> "BlockElement":
        mats = [np.zeros((d, d), dtype=np.complex128) for d in shape]
        mats[block][p, q] = 1.0
        return cls(shape, tuple(mats))

    @classmethod
    def single_block(cls, shape: BlockShape, block: int, m) -> "BlockElement":
        mats = [np.zeros((d, d), dtype=np.complex128) for d in shape]
        mats[block] = as_cmatrix(m)
        return cls(shape, tuple(mats))

    def adjoint(self) -> "BlockElement":
        return BlockElement(self.shape, tuple(b.conj().T for b in self.blocks))

    def __add__(self, other: "BlockElement") -> "BlockElement":
        self._check_same_shape(other)
        return BlockElement(self.shape, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "BlockElement") -> "BlockElement":
        self._check_same_shape(other)
        return BlockElement(self.shape, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, scalar) -> "BlockElement":
        return BlockElement(self.shape, tuple(scalar * b for b in self.blocks))

    __rmul__ = __mul__

    def __matmul__(self, other: "BlockElement") -> "BlockElement":
        self._check_same_shape(other)
        return BlockElement(self.shape, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def frobenius(self) -> float:
        return float(np.sqrt(sum(frobenius(b) ** 2 for b in self.blocks)))

    def _check_same_shape(self, other: "BlockElement") -> None:
        if self.shape.dims != other.shape.dims:
            raise ShapeMismatch("block shapes differ")


@dataclass(frozen=True)
class Functional:
    """A functional on a block algebra, given by trace-pairing representatives.

    ``rho(A) = sum_i tr(reps[i] @ A.blocks[i])`` and the norm of ``rho`` is the
    sum of the trace norms of the representatives.
    """

    shape: BlockShape
    reps: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "reps", _coerce_blocks(self.shape, self.reps))

    @classmethod
    def zero(cls, shape: BlockShape) -> "Functional":
        return cls(shape, tuple(np.zeros((d, d), dtype=np.complex128) for d in shape))

    @classmethod
    def single_block(cls, shape: BlockShape, block: int, rep) -> "Functional":
        reps = [np.zeros((d, d), dtype=np.complex128) for d in shape]
        reps[block] = as_cmatrix(rep)
        return cls(shape, tuple(reps))

    @classmethod
    def rank_one(cls, shape: BlockShape, block: int, left, right) -> "Functional":
        """Functional with representative ``left @ right^H`` on one block."""
        l = as_cvector(left)
        r = as_cvector(right)
        return cls.single_block(shape, block, np.outer(l, r.conj()))

    def apply(self, a: BlockElement) -> complex:
        if self.shape.dims != a.shape.dims:
            raise ShapeMismatch("functional and element shapes differ")
        return complex(sum(np.trace(s @ b) for s, b in zip(self.reps, a.blocks)))

    def norm(self) -> float:
        return float(sum(trace_norm(s) for s in self.reps))

    def __add__(self, other: "Functional") -> "Functional":
        if self.shape.dims != other.shape.dims:
            raise ShapeMismatch("block shapes differ")
        return Functional(self.shape, tuple(a + b for a, b in zip(self.reps, other.reps)))

    def __sub__(self, other: "Functional") -> "Functional":
        if self.shape.dims != other.shape.dims:
            raise ShapeMismatch("block shapes differ")
        return Functional(self.shape, tuple(a - b for a, b in zip(self.reps, other.reps)))

    def __mul__(self, scalar) -> "Functional":
        return Functional(self.shape, tuple(scalar * s for s in self.reps))

    __rmul__ = __mul__


def functional_apply(rho: Functional, a: BlockElement) -> complex:
    """Evaluate ``rho`` at ``a`` through trace pairing."""
    return rho.apply(a)


@dataclass(frozen=True)
class Extreme:
    """Verdict: extreme point of the dual unit ball, with its rank-one factors."""

    block: int
    left: np.ndarray
    right: np.ndarray

    @property
    def is_extreme(self) -> bool:
        return True


@dataclass(frozen=True)
class NotExtreme:
    """Verdict: not an extreme point, with the failure reason."""

    reason: str

    @property
    def is_extreme(self) -> bool:
        return False


def functional_extremity(rho: Functional, tol: float = DEFAULT_TOL):
    """Decide whether ``rho`` is an extreme point of the dual unit ball.

    Extreme iff exactly one block carries a representative above tolerance and
    that representative is rank one with unit top singular value.  Returns an
    :class:`Extreme` with the certified factors, or :class:`NotExtreme` with
    reason ``multi_block_support``, ``rank_exceeds_one`` or ``norm_not_one``.
    """
    masses = [trace_norm(s) for s in rho.reps]
    live = [i for i, m in enumerate(masses) if m > tol]
    if len(live) > 1:
        return NotExtreme(MULTI_BLOCK_SUPPORT)
    if not live:
        return NotExtreme(NORM_NOT_ONE)
    b = live[0]
    try:
        factor = rank_one_factor(rho.reps[b], tol)
    except ZeroMatrix:
        # Trace norm barely above tol with Frobenius norm below it: the top
        # singular value is then certainly far from one.
        return NotExtreme(NORM_NOT_ONE)
    if factor.sigma2 > tol:
        return NotExtreme(RANK_EXCEEDS_ONE)
    if abs(factor.sigma1 - 1.0) > tol:
        return NotExtreme(NORM_NOT_ONE)
    return Extreme(block=b, left=factor.left, right=factor.right)


def is_state(rho: Functional, tol: float = DEFAULT_TOL) -> bool:
    """True iff every representative is hermitian PSD and traces sum to one."""
    total = 0.0
    for s in rho.reps:
        if frobenius(s - s.conj().T) > tol:
            return False
        w = np.linalg.eigvalsh(0.5 * (s + s.conj().T))
        if w.size and w[0] < -tol:
            return False
        total += float(np.trace(s).real)
    return abs(total - 1.0) <= tol


@dataclass(frozen=True)
class PureStateVerdict:
    """Outcome of the pure-state test; ``vector`` is the witness eigenvector."""

    pure: bool
    block: int | None = None
    vector: np.ndarray | None = None
    reason: str | None = None


def is_pure_state(rho: Functional, tol: float = DEFAULT_TOL) -> PureStateVerdict:
    """Test for a pure state: single-block, hermitian PSD, trace one, rank one."""
    masses = [trace_norm(s) for s in rho.reps]
    live = [i for i, m in enumerate(masses) if m > tol]
    if len(live) != 1:
        reason = MULTI_BLOCK_SUPPORT if len(live) > 1 else NORM_NOT_ONE
        return PureStateVerdict(pure=False, reason=reason)
    b = live[0]
    s = rho.reps[b]
    if frobenius(s - s.conj().T) > tol:
        return PureStateVerdict(pure=False, block=b, reason="not_hermitian")
    herm = 0.5 * (s + s.conj().T)
    w, vecs = np.linalg.eigh(herm)
    if w[0] < -tol:
        return PureStateVerdict(pure=False, block=b, reason="not_positive")
    if abs(float(np.trace(herm).real) - 1.0) > tol:
        return PureStateVerdict(pure=False, block=b, reason="trace_not_one")
    if w.size > 1 and w[-2] > tol:
        return PureStateVerdict(pure=False, block=b, reason=RANK_EXCEEDS_ONE)
    return PureStateVerdict(pure=True, block=b, vector=vecs[:, -1].copy())


@dataclass(frozen=True)
class PolarFactorization:
    """Pure state plus rotation realizing an extremal functional.

    With ``omega(A) = <A_b x, x>`` the vector state at ``state_vector`` on the
    supporting block, the rotation satisfies ``rho(V.A) = omega(A)`` and
    ``rho(A) = omega(V^H.A) = <A_b x, V x>``.
    """

    block: int
    state_vector: np.ndarray
    rotation: np.ndarray


def polar_factorize(rho: Functional, tol: float = DEFAULT_TOL) -> PolarFactorization:
    """Factor an extremal functional into a pure state and a block rotation.

    The representative on the supporting block is ``left @ right^H``; the pure
    state vector is ``left`` and the rotation is the deterministic unitary
    sending ``left`` to ``right``.
    :raises NotExtremal: if ``rho`` is not extremal at ``tol``.
    """
    verdict = functional_extremity(rho, tol)
    if not verdict.is_extreme:
        raise NotExtremal(f"functional is not extremal: {verdict.reason}")
    x = verdict.left
    v = complete_to_unitary(x, verdict.right, x.size, tol)
    return PolarFactorization(block=verdict.block, state_vector=x, rotation=v)


def compress_functional(rho: Functional, e: BlockElement,
                        tol: float = DEFAULT_TOL) -> Functional:
    """Pull ``rho`` back along the corner embedding ``A -> E A E``.

    Representatives map as ``S -> E S E`` per block.  Intended for functionals
    supported in the range of ``e`` (not enforced).
    :raises NotProjection: if ``e`` is not an orthogonal projection within tol.
    """
    if rho.shape.dims != e.shape.dims:
        raise ShapeMismatch("functional and projection shapes differ")
    for p in e.blocks:
        if frobenius(p - p.conj().T) > tol or frobenius(p @ p - p) > tol:
            raise NotProjection("compression element is not a projection")
    return Functional(rho.shape, tuple(p @ s @ p for s, p in zip(rho.reps, e.blocks)))


def extremal_distance(rho1: Functional, rho2: Functional) -> float:
    """Dual-norm distance: sum of blockwise trace norms of the differences."""
    if rho1.shape.dims != rho2.shape.dims:
        raise ShapeMismatch("functional shapes differ")
    return float(sum(trace_norm(a - b) for a, b in zip(rho1.reps, rho2.reps)))


def pure_state_chain(omega, z, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Three-step chain of unit vectors from ``omega`` towards ``z``.

    Returns ``[w1, w2, w3]`` with ``w1 = omega``, ``w3 = z`` phase-adjusted so
    ``<w3, omega> >= 0``, and ``w2 = (omega + x)/sqrt(2)`` for the normalized
    component ``x`` of ``w3`` orthogonal to ``omega``.  Both squared step
    lengths are at most ``2 - sqrt(2)``; the first step attains it exactly
    whenever the pair is not parallel.  For parallel inputs the chain is
    ``[omega, omega, w3]``.
    """
    w1 = as_cvector(omega)
    zv = as_cvector(z)
    if w1.size != zv.size:
        raise ShapeMismatch("vectors live in different dimensions")
    if abs(np.linalg.norm(w1) - 1.0) > tol or abs(np.linalg.norm(zv) - 1.0) > tol:
        raise NotUnit("chain endpoints must be unit vectors")
    c = np.vdot(w1, zv)  # <z, omega>
    if abs(c) > tol:
        w3 = zv * (np.conj(c) / abs(c))
    else:
        w3 = zv.copy()
    overlap = np.vdot(w1, w3).real  # now >= 0
    f = w3 - overlap * w1
    f -= np.vdot(w1, f) * w1
    s = np.linalg.norm(f)
    if s <= 1e-13:
        return [w1.copy(), w1.copy(), w3]
    if w1.size < 2:  # pragma: no cover - unit vectors in C^1 are parallel
        raise ValueError("ambient dimension too small for a non-parallel pair")
    x = f / s
    w2 = (w1 + x) / np.sqrt(2.0)
    return [w1.copy(), w2, w3]

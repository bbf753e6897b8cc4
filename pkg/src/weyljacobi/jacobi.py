"""Jacobi coefficients, dense truncations and the 2x2 block embedding.

A finite coefficient set stores ``len(b) == len(a) + 1`` so that the
``(len(a)+1)``-truncation is always well formed::

    J = [[b0, a0,  0, ...],
         [a0, b1, a1, ...],
         [ 0, a1, b2, ...],
         ...]

Both off-diagonals carry ``a`` unconjugated; ``J`` is complex symmetric,
not Hermitian.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionTooLarge, IndexOutOfRange, InputError
from .matops import GAUGE_TOL, RANK_TOL, SIGMA1, TOL_HERM, as_matrix2, dagger


@dataclass(frozen=True, eq=False)
class JacobiCoefficients:
    """Finite prefix of Jacobi parameters ``a_n > 0``, ``b_n`` complex."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(-1)
        b = np.array(self.b, dtype=complex).reshape(-1)
        if b.size != a.size + 1:
            raise InputError(f"need len(b) == len(a) + 1, got {b.size} and {a.size}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InputError("coefficients must be finite")
        if np.any(a <= 0.0):
            raise InputError("off-diagonal coefficients a_n must be > 0")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def size(self) -> int:
        """Dimension of the largest truncation, ``len(b)``."""
        return self.b.size

    def truncated(self, n: int) -> "JacobiCoefficients":
        if not 1 <= n <= self.size:
            raise DimensionTooLarge(f"cannot truncate {self.size} coefficients to {n}")
        return JacobiCoefficients(self.a[: n - 1], self.b[:n])

    def stripped(self) -> "JacobiCoefficients":
        """Coefficients of the once-shifted operator, ``(a_1, ...), (b_1, ...)``."""
        if self.size < 2:
            raise DimensionTooLarge("nothing left after stripping a 1x1 matrix")
        return JacobiCoefficients(self.a[1:], self.b[1:])

    def conjugate(self) -> "JacobiCoefficients":
        return JacobiCoefficients(self.a, np.conj(self.b))

    def __eq__(self, other):
        if not isinstance(other, JacobiCoefficients):
            return NotImplemented
        return np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)

    def __repr__(self):
        return f"JacobiCoefficients(a={self.a.tolist()}, b={self.b.tolist()})"


@dataclass(frozen=True, eq=False)
class BlockCoefficients:
    """Blocks of a 2x2 block Jacobi matrix.

    ``A[j]`` sits at block position ``(j, j+1)`` and ``A[j]^*`` at
    ``(j+1, j)``.  ``len(B) == len(A) + 1`` for a finite matrix;
    `terminated` records that a construction stopped because no further
    block was supported.
    """

    A: tuple
    B: tuple
    terminated: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        A = tuple(as_matrix2(x) for x in self.A)
        B = tuple(as_matrix2(x) for x in self.B)
        if len(B) != len(A) + 1:
            raise InputError(f"need len(B) == len(A) + 1, got {len(B)} and {len(A)}")
        for j, Aj in enumerate(A):
            if abs(np.linalg.det(Aj)) <= RANK_TOL * max(1.0, np.linalg.norm(Aj) ** 2):
                raise InputError(f"A[{j}] is singular")
        for j, Bj in enumerate(B):
            if np.linalg.norm(Bj - dagger(Bj)) > TOL_HERM * max(1.0, np.linalg.norm(Bj)):
                raise InputError(f"B[{j}] is not Hermitian")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def depth(self) -> int:
        return len(self.B)

    def is_canonical(self, tol: float = GAUGE_TOL) -> bool:
        """True if every block has the antidiagonal form of an embedded J."""
        for Aj in self.A:
            a = Aj[0, 1]
            if (abs(Aj[0, 0]) + abs(Aj[1, 1]) > tol * abs(a) or abs(Aj[1, 0] - a) > tol * abs(a)
                    or abs(a.imag) > tol * abs(a) or a.real <= 0.0):
                return False
        for Bj in self.B:
            scale = max(1.0, abs(Bj[0, 1]))
            if abs(Bj[0, 0]) + abs(Bj[1, 1]) > tol * scale or abs(Bj[1, 0] - np.conj(Bj[0, 1])) > tol * scale:
                return False
        return True

    def conjugated(self, W: Sequence) -> "BlockCoefficients":
        """Blocks of ``W^* J W`` for a block-diagonal unitary ``diag(W_0, W_1, ...)``."""
        if len(W) < self.depth:
            raise InputError("need one unitary per diagonal block")
        A = [dagger(W[j]) @ Aj @ W[j + 1] for j, Aj in enumerate(self.A)]
        B = [dagger(W[j]) @ Bj @ W[j] for j, Bj in enumerate(self.B)]
        return BlockCoefficients(tuple(A), tuple(B), self.terminated, dict(self.meta))


class Properness(NamedTuple):
    proper: bool
    prefix_only: bool


def dense_truncation(c: JacobiCoefficients, n: int | None = None) -> np.ndarray:
    """The ``n x n`` tridiagonal matrix J built from `c` (default: all of it)."""
    n = c.size if n is None else int(n)
    if n > c.size:
        raise DimensionTooLarge(f"requested dimension {n} exceeds {c.size} stored coefficients")
    if n < 1:
        raise InputError("dimension must be >= 1")
    J = np.diag(c.b[:n]).astype(complex)
    off = c.a[: n - 1]
    J[np.arange(n - 1), np.arange(1, n)] = off
    J[np.arange(1, n), np.arange(n - 1)] = off
    return J


def block_embed(c: JacobiCoefficients) -> BlockCoefficients:
    """Canonical blocks ``A_j = a_j sigma_1``, ``B_j = [[0, b_j], [conj(b_j), 0]]``."""
    A = tuple(a * SIGMA1 for a in c.a)
    B = tuple(np.array([[0.0, b], [np.conj(b), 0.0]], dtype=complex) for b in c.b)
    return BlockCoefficients(A, B)


def block_dense(bc: BlockCoefficients, nblocks: int | None = None) -> np.ndarray:
    """Dense ``2n x 2n`` realization of the block Jacobi matrix."""
    n = bc.depth if nblocks is None else int(nblocks)
    if not 1 <= n <= bc.depth:
        raise DimensionTooLarge(f"requested {n} blocks, have {bc.depth}")
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        M[2 * j:2 * j + 2, 2 * j:2 * j + 2] = bc.B[j]
    for j in range(n - 1):
        M[2 * j:2 * j + 2, 2 * j + 2:2 * j + 4] = bc.A[j]
        M[2 * j + 2:2 * j + 4, 2 * j:2 * j + 2] = dagger(bc.A[j])
    return M


def hermitian_embedding(c: JacobiCoefficients, n: int | None = None) -> np.ndarray:
    """``[[0, J], [J^*, 0]]`` for the n-truncation J."""
    J = dense_truncation(c, n)
    n = J.shape[0]
    E = np.zeros((2 * n, 2 * n), dtype=complex)
    E[:n, n:] = J
    E[n:, :n] = dagger(J)
    return E


def interleave(n: int) -> np.ndarray:
    """Unitary V with ``V delta_{2j} = delta_j + 0`` and ``V delta_{2j+1} = 0 + delta_j``."""
    V = np.zeros((2 * n, 2 * n))
    V[np.arange(n), 2 * np.arange(n)] = 1.0
    V[n + np.arange(n), 2 * np.arange(n) + 1] = 1.0
    return V


def wronskian(u, v, c: JacobiCoefficients, n: int) -> complex:
    """``W_n(u, v) = a_n (u_{n+1} v_n - u_n v_{n+1})``."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if n < 0 or n + 1 >= min(u.size, v.size) or n >= c.a.size:
        raise IndexOutOfRange(f"Wronskian index {n} out of range")
    return complex(c.a[n] * (u[n + 1] * v[n] - u[n] * v[n + 1]))


def properness_sufficient(c: JacobiCoefficients, declared_sup_a: float | None = None) -> Properness:
    """Check the bounded-``a`` sufficient condition for properness.

    Only the stored prefix is visible, so without a declared bound the answer
    is flagged ``prefix_only``.
    """
    if declared_sup_a is not None:
        return Properness(bool(math.isfinite(declared_sup_a)), False)
    top = float(np.max(c.a)) if c.a.size else 0.0
    return Properness(math.isfinite(top), True)


def random_coefficients(n: int, rng: np.random.Generator, a_range=(0.5, 2.0),
                        b_box: float = 2.0) -> JacobiCoefficients:
    """Random ``n``-truncation: ``a`` uniform on `a_range`, ``Re b`` and ``Im b`` on ``[-b_box, b_box]``."""
    if n < 1:
        raise InputError("dimension must be >= 1")
    a = rng.uniform(a_range[0], a_range[1], n - 1)
    b = rng.uniform(-b_box, b_box, n) + 1j * rng.uniform(-b_box, b_box, n)
    return JacobiCoefficients(a, b)

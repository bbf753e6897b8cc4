"""Discrete 2x2 matrix measures and their Stieltjes transforms.

The spectral data ``(nu, psi)`` of a Jacobi matrix lifts to the even/odd
symmetric measure

    dmu = [[1, psi_o], [conj(psi_o), 1]] dnu_e

on the real line, where ``nu_e`` is the even extension of ``nu`` and
``psi_o`` the odd extension of ``psi``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .direct import SpectralData
from .errors import InputError, PoleProximity
from .matops import RANK_TOL, dagger, hermitian_eig

POLE_TOL = 1e-8
PSD_TOL = 1e-12
PAIR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteMatrixMeasure:
    """Atoms ``(x_j, W_j)`` with ``W_j`` Hermitian positive semidefinite."""

    x: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        W = np.array(self.W, dtype=complex).reshape(-1, 2, 2)
        if W.shape[0] != x.size:
            raise InputError("need one weight per atom")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(W))):
            raise InputError("measure must be finite")
        if np.any(np.diff(x) <= 0.0):
            raise InputError("atom positions must be strictly increasing")
        for j in range(x.size):
            tr = W[j, 0, 0].real + W[j, 1, 1].real
            if np.max(np.abs(W[j] - dagger(W[j]))) > PSD_TOL * max(tr, 1.0):
                raise InputError(f"weight {j} is not Hermitian")
            if _min_eig2(W[j]) < -PSD_TOL * max(tr, 1.0):
                raise InputError(f"weight {j} is not positive semidefinite")
        x.setflags(write=False)
        W.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "W", W)

    def __len__(self):
        return self.x.size

    @property
    def mass(self) -> np.ndarray:
        return self.W.sum(axis=0) if len(self) else np.zeros((2, 2), dtype=complex)

    def is_normalized(self, tol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(self.mass - np.eye(2))) <= tol)


def _min_eig2(W: np.ndarray) -> float:
    half_tr = 0.5 * (W[0, 0].real + W[1, 1].real)
    rad = np.hypot(0.5 * (W[0, 0].real - W[1, 1].real), abs(W[0, 1]))
    return float(half_tr - rad)


class SymmetryReport(NamedTuple):
    even_defect: float
    odd_defect: float
    diagonal_equality_defect: float


class NondegeneracyReport(NamedTuple):
    ok: bool
    min_eig: float


class DeterminacyReport(NamedTuple):
    ok: bool
    value: float
    overflow: bool


def to_matrix_measure(sd: SpectralData) -> DiscreteMatrixMeasure:
    """Lift ``(nu, psi)`` to the symmetric matrix measure on the real line."""
    xs, Ws = [], []
    for s, w, psi in zip(sd.s, sd.weight, sd.psi):
        if s == 0.0:
            xs.append(0.0)
            Ws.append(w * np.eye(2, dtype=complex))
            continue
        for sign in (-1.0, 1.0):
            xs.append(sign * s)
            Ws.append(0.5 * w * np.array([[1.0, sign * psi], [sign * np.conj(psi), 1.0]]))
    order = np.argsort(xs, kind="stable")
    return DiscreteMatrixMeasure(np.array(xs)[order], np.array(Ws)[order])


def moments(m: DiscreteMatrixMeasure, k: int) -> np.ndarray:
    """Matrix moment ``sum_j x_j^k W_j``."""
    return np.einsum("j,jab->ab", m.x ** k, m.W) if len(m) else np.zeros((2, 2), dtype=complex)


def stieltjes(m: DiscreteMatrixMeasure, z: complex, *, pole_tol: float = POLE_TOL) -> np.ndarray:
    """``F(z) = sum_j W_j / (x_j - z)``."""
    z = complex(z)
    if not len(m):
        return np.zeros((2, 2), dtype=complex)
    d = m.x - z
    if np.min(np.abs(d)) < pole_tol * (1.0 + abs(z)):
        raise PoleProximity(f"z = {z} is too close to an atom")
    return np.einsum("j,jab->ab", 1.0 / d, m.W)


def _partner_indices(x: np.ndarray) -> np.ndarray:
    """Index of the atom at ``-x_j`` for each j, or -1 if none."""
    out = np.full(x.size, -1)
    if not x.size:
        return out
    neg = -x
    pos = np.clip(np.searchsorted(x, neg), 0, x.size - 1)
    for j in range(x.size):
        for cand in (pos[j] - 1, pos[j], pos[j] + 1):
            if 0 <= cand < x.size and abs(x[cand] - neg[j]) <= PAIR_TOL * (1.0 + abs(x[j])):
                out[j] = cand
                break
    return out


def symmetry_check(m: DiscreteMatrixMeasure) -> SymmetryReport:
    """Defects of the even diagonal / odd off-diagonal / equal-diagonal structure.

    Each defect is a maximum over atoms; an atom without a mirror partner
    is compared against zero weight.
    """
    if not len(m):
        return SymmetryReport(0.0, 0.0, 0.0)
    partner = _partner_indices(m.x)
    mirrored = np.where(partner[:, None, None] >= 0, m.W[np.maximum(partner, 0)], 0.0)
    diag = np.array([[1, 0], [0, 1]], dtype=bool)
    even = np.abs(m.W - mirrored)[:, diag]
    odd = np.abs(m.W + mirrored)[:, ~diag]
    eq = np.abs(m.W[:, 0, 0] - m.W[:, 1, 1])
    return SymmetryReport(float(even.max()), float(odd.max()), float(eq.max()))


def gram_matrix(m: DiscreteMatrixMeasure, d: int) -> np.ndarray:
    """Block Hankel Gram matrix ``G[i, j] = m_{i+j}`` of the monomials ``x^i e_k``."""
    mom = [moments(m, k) for k in range(2 * d + 1)]
    G = np.zeros((2 * (d + 1), 2 * (d + 1)), dtype=complex)
    for i in range(d + 1):
        for j in range(d + 1):
            G[2 * i:2 * i + 2, 2 * j:2 * j + 2] = mom[i + j]
    return G


def nondegeneracy_rank(m: DiscreteMatrixMeasure, d: int, *, rank_tol: float = RANK_TOL) -> NondegeneracyReport:
    """Positivity of the matrix inner product on block polynomials of degree <= d."""
    if d < 0:
        raise InputError("degree must be >= 0")
    G = gram_matrix(m, d)
    lam = hermitian_eig(G).eigenvalues
    trace = float(np.trace(G).real)
    return NondegeneracyReport(bool(lam[0] > rank_tol * trace), float(lam[0]))


def determinacy_sufficient(m: DiscreteMatrixMeasure, eps: float) -> DeterminacyReport:
    """Exponential-moment criterion ``sum_j exp(eps |x_j|) tr W_j < inf``.

    A finite atom set is always determinate, so `ok` is True; the value is
    still computed and an overflow is reported in the result.
    """
    if eps <= 0.0:
        raise InputError("eps must be positive")
    if not len(m):
        return DeterminacyReport(True, 0.0, False)
    tr = (m.W[:, 0, 0] + m.W[:, 1, 1]).real
    with np.errstate(over="ignore"):
        value = float(np.sum(np.exp(eps * np.abs(m.x)) * tr))
    return DeterminacyReport(True, value, not np.isfinite(value))

"""Small dense complex linear-algebra kernel.

Everything here works on plain numpy arrays.  A ``Matrix2`` is a complex
array of shape ``(2, 2)``; a ``DenseMatrix`` is a square complex array.
"""
from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import (
    InputError,
    NoConvergence,
    NotHermitian,
    NotScalarPolar,
    OnCut,
    SingularBlock,
)

TOL_HERM = 1e-12
EIG_TOL = 1e-10
GAUGE_TOL = 1e-8
RANK_TOL = 1e-10
CLUSTER_TOL = 1e-9

MAX_SWEEPS = 64
OFF_TOL = 1e-14

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA1.setflags(write=False)

# widest complex type numpy offers here (80-bit on x86-64 Linux, else float64)
EXTENDED = np.clongdouble


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix2(x) -> np.ndarray:
    """Return `x` as a fresh finite complex 2x2 array."""
    m = np.array(x, dtype=complex)
    if m.shape != (2, 2):
        raise InputError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    return m


def _complex_dtype(x):
    kind = np.asarray(x).dtype
    return EXTENDED if kind in (np.longdouble, np.clongdouble) else complex


def as_dense(x) -> np.ndarray:
    """`x` as a fresh square complex array, keeping extended precision."""
    m = np.array(x, dtype=_complex_dtype(x))
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InputError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


@lru_cache(maxsize=None)
def _round_robin(n: int):
    # Circle-method tournament: every index pair exactly once per sweep,
    # in n-1 (or n) rounds of disjoint pairs.
    k = n + (n % 2)
    players = list(range(k))
    rounds = []
    for _ in range(k - 1):
        pairs = [(players[i], players[k - 1 - i]) for i in range(k // 2)]
        pairs = [(min(i, j), max(i, j)) for i, j in pairs if i < n and j < n]
        p = np.array([i for i, _ in pairs], dtype=np.intp)
        q = np.array([j for _, j in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _jacobi_sweep(a: np.ndarray, v: np.ndarray, rounds) -> None:
    """One cyclic sweep of complex Jacobi rotations, in place."""
    for p, q in rounds:
        h = a[p, q]
        ah = np.abs(h)
        active = ah > 0.0
        safe = np.where(active, ah, 1.0)
        phase = np.where(active, h / safe, 1.0)
        tau = (a[q, q].real - a[p, p].real) / (2.0 * safe)
        t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
        t = np.where(active, t, 0.0)
        c = 1.0 / np.hypot(1.0, t)
        s = t * c
        # G = [[c, s], [-s conj(e), c conj(e)]] on the (p, q) plane
        g_qp = -s * np.conj(phase)
        g_qq = c * np.conj(phase)

        cp, cq = a[:, p], a[:, q]
        a[:, p], a[:, q] = cp * c + cq * g_qp, cp * s + cq * g_qq
        rp, rq = a[p, :], a[q, :]
        a[p, :], a[q, :] = (c[:, None] * rp + np.conj(g_qp)[:, None] * rq,
                            s[:, None] * rp + np.conj(g_qq)[:, None] * rq)
        a[p, q] = 0.0
        a[q, p] = 0.0
        vp, vq = v[:, p], v[:, q]
        v[:, p], v[:, q] = vp * c + vq * g_qp, vp * s + vq * g_qq


def hermitian_eig(H, *, tol_herm: float = TOL_HERM, max_sweeps: int = MAX_SWEEPS,
                  off_tol: float = OFF_TOL) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Rotations are applied in round-robin order so that each round acts on
    disjoint index pairs and can be vectorized.

    Parameters
    ----------
    H : array_like, shape (n, n)
        Hermitian matrix.
    tol_herm : float
        Relative tolerance for the Hermitian check.
    max_sweeps : int
        Sweep budget.
    off_tol : float
        Convergence threshold on the off-diagonal Frobenius mass, relative
        to the Frobenius norm of `H`.  It is floored at ``2 n eps`` of the
        working precision, which follows the dtype of `H` (extended
        precision input gives extended precision output).

    Returns
    -------
    HermitianEig
        Ascending eigenvalues and the matrix of orthonormal eigenvectors
        (columns).

    Raises
    ------
    NotHermitian
        If ``max |H_ij - conj(H_ji)| > tol_herm * ||H||``.
    NoConvergence
        If the sweep budget is exhausted.
    """
    a = as_dense(H)
    n = a.shape[0]
    norm = float(np.linalg.norm(a))
    if np.max(np.abs(a - dagger(a))) > tol_herm * norm:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + dagger(a))
    v = np.eye(n, dtype=a.dtype)
    # off_tol alone is below the rounding floor of a single sweep for large n
    eps = float(np.finfo(a.real.dtype).eps)
    threshold = max(off_tol, 2.0 * n * eps) * norm

    rounds = _round_robin(n) if n > 1 else ()
    converged = _off_norm(a) <= threshold
    sweeps = 0
    while not converged:
        if sweeps == max_sweeps:
            raise NoConvergence(f"Jacobi eigensolver exceeded {max_sweeps} sweeps")
        _jacobi_sweep(a, v, rounds)
        sweeps += 1
        converged = _off_norm(a) <= threshold
    if sweeps:
        # convergence is quadratic: one more sweep takes the eigenvectors
        # from ~threshold/gap to rounding level
        _jacobi_sweep(a, v, rounds)

    lam = np.diagonal(a).real.copy()
    order = np.argsort(lam, kind="stable")
    return HermitianEig(lam[order], v[:, order])


def cluster_indices(values: np.ndarray, gap: float) -> list[np.ndarray]:
    """Split sorted `values` into runs whose consecutive gaps are <= `gap`."""
    values = np.asarray(values)
    if values.size == 0:
        return []
    breaks = np.nonzero(np.diff(values) > gap)[0] + 1
    return np.split(np.arange(values.size), breaks)


def polar_scalar_unitary(C, *, gauge_tol: float = GAUGE_TOL,
                         rank_tol: float = RANK_TOL) -> tuple[float, np.ndarray]:
    """Factor ``C = c U`` with ``c >= 0`` and ``U`` unitary.

    Only valid when ``C C^*`` is a multiple of the identity, which is what a
    symmetric block recursion produces.

    Raises
    ------
    SingularBlock
        If ``c < rank_tol``.
    NotScalarPolar
        If ``||C C^* - c^2 I|| > gauge_tol * c^2``.
    """
    C = as_matrix2(C)
    cc = C @ dagger(C)
    c = float(np.sqrt(max(cc[0, 0].real, 0.0)))
    if c < rank_tol:
        raise SingularBlock(f"block is singular (c = {c:.3e})")
    defect = np.linalg.norm(cc - c * c * np.eye(2), 2)
    if defect > gauge_tol * c * c:
        raise NotScalarPolar(f"C C^* is not scalar (relative defect {defect / (c * c):.3e})")
    return c, C / c


def quarter_power_scaling(w: complex, *, tol: float = 1e-14) -> np.ndarray:
    """``diag(w**(1/4), w**(-1/4))`` with ``arg(w**(1/4))`` in ``(0, pi/2)``.

    The branch cut is ``[0, +inf)``; `w` must stay off it.
    """
    w = complex(w)
    r = abs(w)
    if r == 0.0 or (w.real >= 0.0 and abs(w.imag) <= tol * r):
        raise OnCut(f"w = {w} lies on the cut [0, +inf)")
    theta = np.angle(w)
    if theta <= 0.0:
        theta += 2.0 * np.pi
    q = r ** 0.25 * np.exp(0.25j * theta)
    return np.array([[q, 0.0], [0.0, 1.0 / q]], dtype=complex)


def spectral_norm_2x2(A) -> float:
    """Largest singular value of a 2x2 matrix, in closed form."""
    A = np.asarray(A, dtype=complex)
    scale = float(np.max(np.abs(A)))
    if scale == 0.0 or not np.isfinite(scale):
        return scale
    B = A / scale
    g = dagger(B) @ B
    half_tr = 0.5 * (g[0, 0].real + g[1, 1].real)
    rad = np.hypot(0.5 * (g[0, 0].real - g[1, 1].real), abs(g[0, 1]))
    return scale * float(np.sqrt(half_tr + rad))

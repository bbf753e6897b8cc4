"""Inverse spectral map ``(nu, psi) -> J``.

The symmetric matrix measure is tridiagonalized by block Lanczos into some
block Jacobi matrix; block-diagonal unitary conjugation then brings every
block into the antidiagonal form

    A_n = [[0, a_n], [a_n, 0]],   B_n = [[0, b_n], [conj(b_n), 0]],

from which ``a_n > 0`` and ``b_n`` are read off.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._fit import loglog_fit
from .direct import SpectralData
from .errors import InvalidMeasure, SingularBlock, SingularWeylValue, InputError
from .jacobi import BlockCoefficients, JacobiCoefficients, block_dense, block_embed
from .matops import EXTENDED, GAUGE_TOL, RANK_TOL, SIGMA1, dagger, hermitian_eig, polar_scalar_unitary
from .measure import DiscreteMatrixMeasure, moments, stieltjes, to_matrix_measure

POLE_TOL = 1e-8
NORM_TOL = 1e-10


@dataclass
class GaugeTrace:
    """Block-diagonal gauge produced by :func:`gauge_fix` and its residuals."""

    W: list = field(default_factory=list)
    polar_defects: list = field(default_factory=list)
    antidiagonal_defects: list = field(default_factory=list)
    conjugacy_defects: list = field(default_factory=list)
    singular_at: int | None = None

    def max_residual(self) -> float:
        vals = self.polar_defects + self.antidiagonal_defects + self.conjugacy_defects
        return float(max(vals)) if vals else 0.0


class ExpansionFit(NamedTuple):
    slope: float
    intercept: float
    max_deviation: float
    wide_confidence: bool


def _weight_factors(m: DiscreteMatrixMeasure):
    """Rows ``L_j^*`` with ``W_j = L_j L_j^*`` stacked over atoms, and their abscissae."""
    rows, xs = [], []
    for x, W in zip(m.x, m.W):
        lam, U = hermitian_eig(W.astype(EXTENDED))
        cut = 1e-14 * max(lam[-1], 0.0)
        for k in range(2):
            if lam[k] > cut and lam[k] > 0.0:
                rows.append(np.sqrt(lam[k]) * np.conj(U[:, k]))
                xs.append(x)
    return np.array(rows, dtype=EXTENDED).reshape(-1, 2), np.array(xs, dtype=np.longdouble)


def block_lanczos(m: DiscreteMatrixMeasure, depth: int | None = None, *,
                  rank_tol: float = RANK_TOL) -> BlockCoefficients:
    """Recurrence blocks of the right orthonormal matrix polynomials of `m`.

    The polynomials ``p_n`` are carried as their values at the atoms, in the
    factored form ``L_j^* p_n(x_j)``, which makes the matrix inner product an
    ordinary Euclidean one.  Each step is reorthogonalized against all
    previous blocks.  The recursion runs in extended precision because deep
    blocks are very sensitive to the light atoms; the blocks are returned
    in double precision.

    Parameters
    ----------
    m : DiscreteMatrixMeasure
        Normalized measure (total mass ``I``).
    depth : int, optional
        Maximum number of diagonal blocks ``B_n``; default is as many as
        the measure supports.
    rank_tol : float
        The run stops when the smallest eigenvalue of a residual Gram matrix
        drops below ``rank_tol * max(1, max x^2)``.

    Returns
    -------
    BlockCoefficients
        ``terminated`` is True when the measure ran out of rank before
        `depth` blocks were produced.
    """
    if not m.is_normalized(NORM_TOL):
        raise InvalidMeasure("block Lanczos needs a measure with total mass I")
    L, xr = _weight_factors(m)
    dim = L.shape[0]
    max_depth = dim // 2
    depth = max_depth if depth is None else min(int(depth), max(max_depth, 1))
    scale = max(1.0, float(np.max(xr ** 2)) if xr.size else 1.0)

    Q = [L]
    A, B = [], []
    terminated = False
    min_gram = []
    for n in range(depth):
        Xq = xr[:, None] * Q[n]
        Bn = dagger(Q[n]) @ Xq
        B.append(0.5 * (Bn + dagger(Bn)))
        if n == depth - 1:
            terminated = depth == max_depth
            break
        R = Xq - Q[n] @ B[n]
        if n:
            R -= Q[n - 1] @ A[n - 1]
        basis = np.hstack(Q)
        for _ in range(2):
            R -= basis @ (dagger(basis) @ R)
        G = dagger(R) @ R
        lam, U = hermitian_eig(0.5 * (G + dagger(G)))
        min_gram.append(float(lam[0]))
        if lam[0] < rank_tol * scale:
            terminated = True
            break
        C = (U * np.sqrt(lam)) @ dagger(U)
        Q.append(R @ ((U / np.sqrt(lam)) @ dagger(U)))
        A.append(dagger(C))
    A = [blk.astype(complex) for blk in A]
    B = [blk.astype(complex) for blk in B]
    return BlockCoefficients(tuple(A), tuple(B), terminated,
                             {"rank": dim, "residual_gram_min": min_gram})


def gauge_fix(bc: BlockCoefficients, *, gauge_tol: float = GAUGE_TOL,
              rank_tol: float = RANK_TOL) -> tuple[JacobiCoefficients, GaugeTrace]:
    """Conjugate `bc` to antidiagonal form and read off ``(a, b)``.

    With ``W_0 = I``, step n writes ``W_n^* A_n = a_n V_n`` with ``V_n``
    unitary and picks ``W_{n+1} = V_n^* sigma_1`` so that
    ``W_n^* A_n W_{n+1} = a_n sigma_1``; ``b_n`` is the upper off-diagonal
    entry of ``W_n^* B_n W_n``.

    Raises
    ------
    NotScalarPolar
        If a block is incompatible with a symmetric measure.

    Notes
    -----
    A singular ``A_n`` ends the recursion; the coefficients found up to that
    point are returned and ``trace.singular_at`` is set.
    """
    trace = GaugeTrace(W=[np.eye(2, dtype=complex)])
    a, b = [], []
    for n, Bn in enumerate(bc.B):
        Wn = trace.W[n]
        Bp = dagger(Wn) @ Bn @ Wn
        bn = complex(Bp[0, 1])
        b.append(bn)
        scale = max(1.0, abs(bn))
        trace.antidiagonal_defects.append(float(abs(Bp[0, 0]) + abs(Bp[1, 1])) / scale)
        trace.conjugacy_defects.append(float(abs(Bp[1, 0] - np.conj(bn))) / scale)
        if n == len(bc.A):
            break
        C = dagger(Wn) @ bc.A[n]
        try:
            an, Vn = polar_scalar_unitary(C, gauge_tol=gauge_tol, rank_tol=rank_tol)
        except SingularBlock:
            trace.singular_at = n
            break
        trace.polar_defects.append(float(np.linalg.norm(C @ dagger(C) - an * an * np.eye(2), 2)) / an ** 2)
        a.append(an)
        trace.W.append(dagger(Vn) @ SIGMA1)
    return JacobiCoefficients(np.array(a), np.array(b)), trace


def inverse_map(sd: SpectralData, depth: int | None = None, *, full_output: bool = False,
                rank_tol: float = RANK_TOL, gauge_tol: float = GAUGE_TOL):
    """Jacobi coefficients whose spectral data is `sd`.

    Returns as many coefficients as the atoms support (``len(sd)`` for the
    data of a finite truncation).  With ``full_output=True`` returns
    ``(c, trace, blocks)``.
    """
    m = to_matrix_measure(sd)
    bc = block_lanczos(m, depth, rank_tol=rank_tol)
    c, trace = gauge_fix(bc, gauge_tol=gauge_tol, rank_tol=rank_tol)
    if full_output:
        return c, trace, bc
    return c


def leading_from_moments(m: DiscreteMatrixMeasure) -> tuple[complex, float]:
    """``(b_0, a_0)`` from the first two moments of a symmetric measure."""
    m1 = moments(m, 1)
    m2 = moments(m, 2)
    b0 = complex(m1[0, 1])
    rad = float(m2[0, 0].real) - abs(b0) ** 2
    if rad < -1e-10 * max(1.0, float(m2[0, 0].real)):
        raise InvalidMeasure(f"a_0^2 = {rad:.3e} < 0: |psi| <= 1 is violated")
    return b0, float(np.sqrt(max(rad, 0.0)))


def weyl_R(m: DiscreteMatrixMeasure, z: complex, *, pole_tol: float = POLE_TOL) -> np.ndarray:
    """Weyl matrix ``R(z) = int dmu(x) / (x - z)`` of the block Jacobi matrix."""
    return stieltjes(m, z, pole_tol=pole_tol)


def dense_weyl_R(c, z: complex, nblocks: int | None = None) -> np.ndarray:
    """Top-left 2x2 block of ``(JJ - z)^{-1}`` for the dense block Jacobi matrix.

    `c` is either :class:`JacobiCoefficients` (embedded canonically) or
    :class:`BlockCoefficients`.
    """
    bc = block_embed(c) if isinstance(c, JacobiCoefficients) else c
    M = block_dense(bc, nblocks)
    rhs = np.zeros((M.shape[0], 2), dtype=complex)
    rhs[0, 0] = rhs[1, 1] = 1.0
    return np.linalg.solve(M - complex(z) * np.eye(M.shape[0]), rhs)[:2]


def strip_weyl(R_value, z: complex, b0: complex, a0: float, *, pole_tol: float = POLE_TOL) -> np.ndarray:
    """Weyl matrix of the once-stripped operator, pointwise in `z`.

    Entrywise form of ``-A_0^{-1} (R^{-1} - B_0 + z) (A_0^*)^{-1}`` for
    ``A_0 = a_0 sigma_1`` and antidiagonal ``B_0``.
    """
    R = np.asarray(R_value, dtype=complex)
    if not a0 > 0.0:
        raise InputError("a0 must be positive")
    z = complex(z)
    det = R[0, 0] * R[1, 1] - R[0, 1] * R[1, 0]
    if abs(det) <= pole_tol * np.max(np.abs(R)) ** 2:
        raise SingularWeylValue("Weyl matrix value is numerically singular")
    d = 1.0 / det
    out = np.array([[d * R[0, 0] + z, -d * R[1, 0] - np.conj(b0)],
                    [-d * R[0, 1] - b0, d * R[1, 1] + z]], dtype=complex)
    return -out / a0 ** 2


def expansion_remainder(m: DiscreteMatrixMeasure, b0: complex, a0: float, z: complex) -> np.ndarray:
    """``R(z) + I/z + B_0/z^2 + (A_0 A_0^* + B_0^2)/z^3`` for the given ``(b_0, a_0)``.

    Evaluated as the moment mismatches plus the exact geometric-series tail,
    which avoids cancelling four terms of size ``1/|z|``.
    """
    z = complex(z)
    B0 = np.array([[0.0, b0], [np.conj(b0), 0.0]], dtype=complex)
    third = a0 ** 2 * np.eye(2) + B0 @ B0
    tail = -np.einsum("j,jab->ab", m.x ** 3 / (z ** 3 * (m.x - z)), m.W)
    return ((np.eye(2) - moments(m, 0)) / z + (B0 - moments(m, 1)) / z ** 2
            + (third - moments(m, 2)) / z ** 3 + tail)


def expansion_check(m: DiscreteMatrixMeasure, b0: complex, a0: float, radii=None,
                    angle: float = np.pi / 2) -> ExpansionFit:
    """Decay order of the three-term nontangential expansion of ``R``.

    Fits ``log ||E(r e^{i angle})||`` against ``log r``; a correct
    ``(b_0, a_0)`` gives a slope of about -4 or steeper.
    """
    radii = np.logspace(1, 4, 9) if radii is None else np.asarray(radii, dtype=float)
    if radii.size < 2 or np.any(np.diff(radii) <= 0.0):
        raise InputError("radii must be increasing with at least two entries")
    norms = np.array([np.linalg.norm(expansion_remainder(m, b0, a0, r * np.exp(1j * angle)), 2)
                      for r in radii])
    norms = np.maximum(norms, np.finfo(float).tiny)
    slope, intercept, dev = loglog_fit(radii, norms)
    return ExpansionFit(slope, intercept, dev, bool(np.log10(radii[-1] / radii[0]) < 2.0))


def roundtrip_error(c: JacobiCoefficients, recovered: JacobiCoefficients) -> float:
    """Largest relative coefficient error; absolute where the reference is 0.

    A size mismatch counts as an infinite error.
    """
    if recovered.size != c.size:
        return float("inf")
    ref = np.concatenate([c.a, np.abs(c.b)])
    err = np.concatenate([np.abs(recovered.a - c.a), np.abs(recovered.b - c.b)])
    rel = np.where(ref > 0.0, err / np.where(ref > 0.0, ref, 1.0), err)
    return float(np.max(rel))

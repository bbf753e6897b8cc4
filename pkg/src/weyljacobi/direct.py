"""Direct spectral map ``J -> (nu, psi)`` on finite truncations.

``nu`` is the spectral measure of ``|J| = sqrt(J^* J)`` at ``delta_0`` and
``psi`` the phase function defined by

    <delta_0, J f(|J|) delta_0> = sum_k s_k f(s_k) psi_k w_k

for every function ``f``.  Both are read off the eigendecomposition of the
Hermitian embedding ``[[0, J], [J^*, 0]]`` whose eigenvalues are ``+-s_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import InputError, PoleProximity, TruncationTooSmall
from .jacobi import JacobiCoefficients, dense_truncation, hermitian_embedding
from .matops import CLUSTER_TOL, EXTENDED, RANK_TOL, as_dense, cluster_indices, dagger, hermitian_eig

ATOM_TOL = 1e-13
POLE_TOL = 1e-8
MASS_TOL = 1e-10
PHASE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Finitely many atoms ``(s_k, w_k, psi_k)`` of the pair ``(nu, psi)``."""

    s: np.ndarray
    weight: np.ndarray
    psi: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.array(self.s, dtype=float).reshape(-1)
        w = np.array(self.weight, dtype=float).reshape(-1)
        psi = np.array(self.psi, dtype=complex).reshape(-1)
        if not s.size == w.size == psi.size:
            raise InputError("s, weight and psi must have equal length")
        if s.size == 0:
            raise InputError("spectral data needs at least one atom")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(w)) and np.all(np.isfinite(psi))):
            raise InputError("spectral data must be finite")
        if np.any(s < 0.0) or np.any(np.diff(s) <= 0.0):
            raise InputError("atom positions must be >= 0 and strictly increasing")
        if np.any(w <= 0.0):
            raise InputError("atom weights must be positive")
        if abs(w.sum() - 1.0) > MASS_TOL:
            raise InputError(f"weights must sum to 1 (got {w.sum():.17g})")
        if np.any(np.abs(psi) > 1.0 + PHASE_TOL):
            raise InputError("|psi| must not exceed 1")
        if np.any(psi[s == 0.0] != 0.0):
            raise InputError("psi must vanish at s = 0")
        for arr in (s, w, psi):
            arr.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "psi", psi)

    def __len__(self):
        return self.s.size

    def atoms(self):
        return list(zip(self.s.tolist(), self.weight.tolist(), self.psi.tolist()))

    def integrate(self, h) -> tuple[complex, complex]:
        """``(int h dnu, int h psi dnu)`` for a vectorized function `h`."""
        hv = np.asarray(h(self.s), dtype=complex)
        return complex(np.sum(hv * self.weight)), complex(np.sum(hv * self.psi * self.weight))

    def __repr__(self):
        return f"SpectralData(atoms={self.atoms()})"


def direct_map(c: JacobiCoefficients, n: int | None = None, *, cluster_tol: float = CLUSTER_TOL,
               atom_tol: float = ATOM_TOL, rank_tol: float = RANK_TOL) -> SpectralData:
    """Spectral data ``(nu, psi)`` of the ``n``-truncation of ``J(a, b)``.

    Parameters
    ----------
    c : JacobiCoefficients
    n : int, optional
        Truncation dimension, default ``c.size``.
    cluster_tol : float
        Singular values closer than ``cluster_tol * ||J||`` form one atom.
    atom_tol : float
        Atoms of degenerate singular values lighter than this are dropped
        and the mass renormalized.  Simple singular values get refined
        weights and phases with small relative error and are kept down to
        underflow.
    rank_tol : float
        Singular values below ``rank_tol * max(1, ||J||)`` are treated as 0,
        where ``psi`` is set to 0.

    Returns
    -------
    SpectralData
        With ``meta`` recording dropped atoms and the zero-crossover
        threshold that was applied.
    """
    n = c.size if n is None else int(n)
    if n < 1:
        raise InputError("truncation dimension must be >= 1")
    # deep coefficients are very sensitive to the phases and weights of
    # light atoms, so the data is computed in extended precision
    E = hermitian_embedding(c, n).astype(EXTENDED)
    lam, V = hermitian_eig(E)
    x, y = V[:n], V[n:]
    norm = float(np.max(np.abs(lam)))
    order = np.argsort(np.abs(lam), kind="stable")
    lam, x0, y0 = lam[order], x[0, order], y[0, order]
    absl = np.abs(lam)
    zero_cut = rank_tol * max(1.0, norm)

    s_out, w_out, psi_out, refined = [], [], [], []
    for idx in cluster_indices(absl, cluster_tol * max(norm, np.finfo(float).tiny)):
        sk = np.mean(absl[idx])
        w = np.sum(np.abs(y0[idx]) ** 2)
        # <delta_0, J P delta_0> with J y = lambda x on each eigenvector
        num = np.sum(lam[idx] * x0[idx] * np.conj(y0[idx]))
        psi = num / (sk * w) if sk >= zero_cut and w > 0.0 else 0.0
        if idx.size == 2 and sk >= zero_cut:
            # simple singular value of a complex symmetric J: |psi| = 1
            v = V[:, order[idx[np.argmax(lam[idx])]]]
            sk = np.vdot(v, E @ v).real / np.vdot(v, v).real
            lx, ly = _leading_components(c, sk, v[:n], v[n:])
            w = 2.0 * abs(ly) ** 2
            psi = lx / ly / abs(lx / ly)
        refined.append(idx.size == 2 and sk >= zero_cut)
        s_out.append(sk)
        w_out.append(w)
        psi_out.append(psi)
    s_arr = np.array(s_out, dtype=np.longdouble)
    w_arr = np.array(w_out, dtype=np.longdouble)
    psi = np.array(psi_out, dtype=EXTENDED)
    refined = np.array(refined)

    zero = s_arr < zero_cut
    smallest = float(s_arr.min())
    if np.count_nonzero(zero) > 1:
        # all numerically-zero singular values form a single atom at 0
        keep = ~zero
        s_arr = np.concatenate([[0.0], s_arr[keep]])
        w_arr = np.concatenate([[w_arr[zero].sum()], w_arr[keep]])
        psi = np.concatenate([[0.0], psi[keep]])
        refined = np.concatenate([[False], refined[keep]])
        zero = s_arr == 0.0
    s_arr = np.where(zero, 0.0, s_arr)
    psi = np.where(zero, 0.0, psi)

    # refined weights carry small relative error, so only unrefined ones are
    # at risk of being rounding noise
    kept = (w_arr > 0.0) & (refined | (w_arr >= atom_tol))
    dropped_mass = float(w_arr[~kept].sum())
    s_arr, w_arr, psi, zero = s_arr[kept], w_arr[kept], psi[kept], zero[kept]
    excess = float(np.max(np.abs(psi) - 1.0, initial=0.0))
    if excess > 0.0:
        psi = psi / np.maximum(np.abs(psi), 1.0)
    w_arr = w_arr / w_arr.sum()

    meta = {
        "dimension": n,
        "dropped_atoms": int(np.count_nonzero(~kept)),
        "dropped_mass": dropped_mass,
        "zero_threshold": zero_cut,
        "smallest_singular_value": smallest,
        "zero_atom": bool(np.any(zero)),
        "near_zero_singular_value": bool(zero_cut <= smallest < 1e3 * zero_cut),
        "phase_excess_clipped": excess,
    }
    return SpectralData(s_arr.astype(float), w_arr.astype(float), psi.astype(complex), meta)


def _leading_components(c: JacobiCoefficients, s, x: np.ndarray, y: np.ndarray):
    """Refined ``(x_0, y_0)`` of the computed eigenvector ``(x, y)`` at a simple `s`.

    Eigenvectors of the embedding at ``lambda = s`` solve ``s x_j = (J y)_j``
    and ``s y_j = (J^* x)_j``, a recurrence fixed by ``(x_0, y_0)``.  Running
    it from site 0 up to the peak of the eigenvector (the growing direction)
    and matching the large, accurately computed components there recovers
    ``(x_0, y_0)`` with small relative error even when it is tiny.  Works in
    the precision of `x` and `y`.
    """
    r = int(np.argmax(np.abs(x) ** 2 + np.abs(y) ** 2))
    if r == 0:
        return x[0], y[0]
    dt = x.dtype
    a = c.a.astype(dt.type(0).real.dtype)
    b = c.b.astype(dt)
    prev = np.zeros((2, 2), dtype=dt)
    cur = np.eye(2, dtype=dt)
    a_prev = 0.0
    for j in range(r):
        xj, yj = cur
        nxt = np.array([s * yj - np.conj(b[j]) * xj - a_prev * prev[0],
                        s * xj - b[j] * yj - a_prev * prev[1]]) / a[j]
        prev, cur, a_prev = cur, nxt, a[j]
    M = np.vstack([cur, prev])
    rhs = np.array([x[r], y[r], x[r - 1], y[r - 1]])
    # 4x2 least squares by Gram-Schmidt with reorthogonalization, which
    # (unlike numpy.linalg) runs in any precision
    q1 = M[:, 0] / np.linalg.norm(M[:, 0])
    r12 = np.vdot(q1, M[:, 1])
    u = M[:, 1] - r12 * q1
    u = u - np.vdot(q1, u) * q1
    r22 = np.linalg.norm(u)
    q2 = u / r22
    y0 = np.vdot(q2, rhs) / r22
    x0 = (np.vdot(q1, rhs) - r12 * y0) / np.linalg.norm(M[:, 0])
    return x0, y0


def weyl_M(sd: SpectralData, z: complex, *, pole_tol: float = POLE_TOL) -> np.ndarray:
    """Weyl matrix ``M(z)`` of ``J^* J`` against ``delta_0, J^* delta_0``.

    ``M_00 = int dnu/(x^2 - z)``, ``M_01 = int x psi dnu/(x^2 - z)``,
    ``M_10 = int x conj(psi) dnu/(x^2 - z)``, ``M_11 = int x^2 dnu/(x^2 - z)``.
    """
    z = complex(z)
    d = sd.s ** 2 - z
    if np.min(np.abs(d)) < pole_tol * (1.0 + abs(z)):
        raise PoleProximity(f"z = {z} is too close to an atom")
    w = sd.weight / d
    sw = sd.s * w
    return np.array([[np.sum(w), np.sum(sw * sd.psi)],
                     [np.sum(sw * np.conj(sd.psi)), np.sum(sd.s * sw)]], dtype=complex)


def coefficient_scale(c: JacobiCoefficients) -> float:
    return float(max(np.max(c.a, initial=0.0), np.max(np.abs(c.b))))


def moment_check(c: JacobiCoefficients, sd: SpectralData, k: int, n: int | None = None):
    """Residuals of the even and odd moment identities at order `k`.

    Compares ``int x^{2k} dnu`` with ``((J^*J)^k)_00`` and
    ``int x^{2k+1} psi dnu`` with ``(J (J^*J)^k)_00`` on the dense
    ``n``-truncation (default ``c.size``), which must have ``n >= 2k + 2``.
    """
    n = c.size if n is None else int(n)
    if k < 0:
        raise InputError("moment order must be >= 0")
    if n < 2 * k + 2:
        raise TruncationTooSmall(f"order {k} needs a truncation of size >= {2 * k + 2}, got {n}")
    J = dense_truncation(c, n)
    H = dagger(J) @ J
    e0 = np.zeros(n, dtype=complex)
    e0[0] = 1.0
    v = np.linalg.matrix_power(H, k) @ e0
    even_op = v[0]
    odd_op = (J @ v)[0]
    even_meas = np.sum(sd.s ** (2 * k) * sd.weight)
    odd_meas = np.sum(sd.s ** (2 * k + 1) * sd.psi * sd.weight)
    return float(abs(even_meas - even_op)), float(abs(odd_meas - odd_op))


def _function_of_hermitian(H: np.ndarray, f) -> np.ndarray:
    lam, V = hermitian_eig(H)
    vals = f(np.sqrt(np.clip(lam, 0.0, None)))
    return (V * vals) @ dagger(V)


def intertwining_check(c: JacobiCoefficients, n: int, f) -> float:
    """Spectral norm of ``J f(|J|) - f(|J^*|) J`` on the first ``n - deg f`` columns.

    `f` is a :class:`numpy.polynomial.Polynomial` or an ascending coefficient
    sequence.
    """
    poly = f if isinstance(f, Polynomial) else Polynomial(np.asarray(f, dtype=complex))
    deg = poly.degree()
    if n <= deg:
        raise TruncationTooSmall(f"polynomial of degree {deg} needs n > {deg}")
    J = dense_truncation(c, n)
    left = J @ _function_of_hermitian(dagger(J) @ J, poly)
    right = _function_of_hermitian(J @ dagger(J), poly) @ J
    diff = (left - right)[:, : n - deg]
    return float(np.linalg.norm(diff, 2))


def cyclicity_check(c: JacobiCoefficients, n: int, *, rank_tol: float = RANK_TOL) -> int:
    """How far ``{delta_0, J^* delta_0}`` is from cyclic for ``J^* J`` at size `n`.

    Builds an orthonormal basis of the block Krylov space generated by
    ``J^*J`` from the two start vectors and returns ``n - dim``; 0 means
    cyclic.
    """
    J = as_dense(dense_truncation(c, n))
    H = dagger(J) @ J
    scale = max(1.0, float(np.linalg.norm(H, 2)))
    start = np.zeros((n, 2), dtype=complex)
    start[0, 0] = 1.0
    start[:, 1] = dagger(J)[:, 0]

    basis = np.zeros((n, 0), dtype=complex)

    def extend(block):
        nonlocal basis
        ref = float(np.max(np.linalg.norm(block, axis=0)))
        for _ in range(2):
            block = block - basis @ (dagger(basis) @ block)
        u, sv, _ = np.linalg.svd(block, full_matrices=False)
        new = u[:, sv > rank_tol * ref][:, : n - basis.shape[1]]
        basis = np.hstack([basis, new])
        return new

    block = extend(start)
    while block.shape[1] and basis.shape[1] < n:
        block = extend(H @ block / scale)
    return n - basis.shape[1]

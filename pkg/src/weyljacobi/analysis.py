"""Comparisons built on spectral data.

* Borg-Marchenko decay: if two coefficient sets agree through index k
  and their diagonals differ at k+1, the quarter-power-scaled difference
  of their Weyl matrices decays like ``|w|^{-(k+2)}`` along a
  nontangential ray.  A first difference in ``a_{k+1}`` gives
  ``|w|^{-(k+5/2)}``.
* Continuity: coefficient convergence on each ``delta_k`` implies weak
  convergence of ``nu`` and ``psi dnu``, probed on a fixed test bank.
* Classification: ``J`` is self-adjoint iff ``psi`` is real, and ``b = 0``
  iff ``psi = 0``.
"""
from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np

from ._fit import loglog_fit
from .direct import SpectralData, direct_map, weyl_M
from .errors import InputError
from .jacobi import JacobiCoefficients, dense_truncation
from .matops import quarter_power_scaling, spectral_norm_2x2

NOISE_MARGIN = 30.0
MIN_FIT_POINTS = 3
TEST_BANK_VERSION = "bumps3/1"
BANK_CENTERS = (0.0, 1.0, 2.0)


class DecayFit(NamedTuple):
    """Least-squares fit of ``log D`` against ``log r``.

    `radii` holds the radii actually used after the noise-floor cut.
    A slope of ``-inf`` is the sentinel for identical data.
    """

    slope: float
    intercept: float
    max_deviation: float
    ray_angle: float
    radii: tuple

    @property
    def identical(self) -> bool:
        return self.slope == -np.inf


class Classification(NamedTuple):
    self_adjoint: bool
    free_diagonal: bool
    max_im_psi: float
    max_abs_psi: float


class ContinuityReport(NamedTuple):
    """Residual series, one entry per sequence member."""

    nu_residuals: np.ndarray
    psi_residuals: np.ndarray
    strong_residuals: np.ndarray
    test_bank: str


def default_radii() -> np.ndarray:
    return np.logspace(1.0, 5.0, 9)


def scaled_difference(sd1: SpectralData, sd2: SpectralData, w: complex) -> tuple[float, float]:
    """``||Q (M1 - M2) Q||`` at `w` and the rounding floor of that difference."""
    Q = quarter_power_scaling(w)
    M1 = Q @ weyl_M(sd1, w) @ Q
    M2 = Q @ weyl_M(sd2, w) @ Q
    floor = np.finfo(float).eps * max(spectral_norm_2x2(M1), spectral_norm_2x2(M2))
    return spectral_norm_2x2(M1 - M2), floor


def borg_marchenko_fit(sd1: SpectralData, sd2: SpectralData, ray_angle: float = np.pi,
                       radii=None) -> DecayFit:
    """Decay exponent of the scaled Weyl-matrix difference along a ray.

    Parameters
    ----------
    sd1, sd2 : SpectralData
    ray_angle : float
        ``arg w`` in ``(0, 2 pi)``; the default is the negative real axis.
    radii : array_like, optional
        Increasing radii, at least 4 spanning 2 decades; default
        ``logspace(1, 5, 9)``.

    Returns
    -------
    DecayFit
        Radii where the difference has sunk into rounding noise are
        dropped from the fit.  If fewer than three remain, the fit uses the
        leading radii down to the noise floor; identical data gives the
        ``-inf`` sentinel.
    """
    radii = default_radii() if radii is None else np.asarray(radii, dtype=float)
    if not 0.0 < ray_angle < 2.0 * np.pi:
        raise InputError("ray angle must lie in (0, 2 pi)")
    if radii.size < 4 or np.any(np.diff(radii) <= 0.0) or radii[0] <= 0.0:
        raise InputError("need at least 4 increasing positive radii")
    if np.log10(radii[-1] / radii[0]) < 2.0:
        raise InputError("radii must span at least two decades")

    phase = np.exp(1j * ray_angle)
    pairs = [scaled_difference(sd1, sd2, r * phase) for r in radii]
    d = np.array([p[0] for p in pairs])
    floor = np.array([p[1] for p in pairs])
    if np.all(d <= floor):
        return DecayFit(-np.inf, -np.inf, 0.0, float(ray_angle), tuple(radii.tolist()))
    above = d > NOISE_MARGIN * floor
    # the signal only falls with r, so keep the leading run above the floor
    stop = int(np.argmin(above)) if not above.all() else radii.size
    stop = max(stop, MIN_FIT_POINTS)
    used = radii[:stop]
    slope, intercept, dev = loglog_fit(used, np.maximum(d[:stop], np.finfo(float).tiny))
    return DecayFit(slope, intercept, dev, float(ray_angle), tuple(used.tolist()))


def classify(sd: SpectralData, tol: float = 1e-10) -> Classification:
    """Self-adjointness and vanishing diagonal read off from ``psi``."""
    psi = sd.psi[sd.s > 0.0]
    im = float(np.max(np.abs(psi.imag), initial=0.0))
    ab = float(np.max(np.abs(psi), initial=0.0))
    return Classification(im <= tol, ab <= tol, im, ab)


def default_test_bank() -> list[Callable[[np.ndarray], np.ndarray]]:
    """Fixed bank of ``C_0`` test functions, versioned as ``TEST_BANK_VERSION``.

    Rational bumps ``1/(1 + (x - c)^2)`` for ``c = 0, 1, 2``.
    """
    return [lambda x, c=c: 1.0 / (1.0 + (x - c) ** 2) for c in BANK_CENTERS]


def _bank_integrals(sd: SpectralData, bank) -> np.ndarray:
    return np.array([sd.integrate(h) for h in bank])


def continuity_check(sequence: Sequence[JacobiCoefficients], limit: JacobiCoefficients,
                     test_bank=None, n: int | None = None) -> ContinuityReport:
    """Weak-convergence residuals of ``(nu_N, psi_N)`` towards the limit's data.

    For each member, the residuals are ``sum_h |int h dnu_N - int h dnu|``
    and ``sum_h |int h psi_N dnu_N - int h psi dnu|`` over the test bank,
    all computed on ``n``-truncations (default: the limit's size).  The
    strong residual is ``max_k ||(J_N - J) delta_k||`` over ``k < n - 1``.
    """
    bank = default_test_bank() if test_bank is None else list(test_bank)
    n = limit.size if n is None else int(n)
    ref = _bank_integrals(direct_map(limit, n), bank)
    J = dense_truncation(limit, n)
    nu_res, psi_res, strong = [], [], []
    for c in sequence:
        got = _bank_integrals(direct_map(c, n), bank)
        nu_res.append(float(np.sum(np.abs(got[:, 0] - ref[:, 0]))))
        psi_res.append(float(np.sum(np.abs(got[:, 1] - ref[:, 1]))))
        diff = dense_truncation(c, n) - J
        # the last column sees the truncation boundary, so it is left out
        cols = diff[:, : max(n - 1, 1)]
        strong.append(float(np.max(np.linalg.norm(cols, axis=0))))
    name = TEST_BANK_VERSION if test_bank is None else "custom"
    return ContinuityReport(np.array(nu_res), np.array(psi_res), np.array(strong), name)

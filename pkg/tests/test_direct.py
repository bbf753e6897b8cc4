import numpy as np
import pytest
from hypothesis import given

from weyljacobi import (InputError, JacobiCoefficients, PoleProximity, SpectralData, TruncationTooSmall,
                        coefficient_scale, cyclicity_check, dense_truncation, direct_map, intertwining_check,
                        moment_check, random_coefficients, weyl_M)

from conftest import PHI, coefficients


def _oracle(c):
    """Atoms of (nu, psi) from numpy's eigh of J^*J; valid for simple singular values."""
    J = dense_truncation(c)
    lam, U = np.linalg.eigh(J.conj().T @ J)
    s = np.sqrt(np.clip(lam, 0, None))
    w = np.abs(U[0]) ** 2
    # J u_k = s_k psi_k-weighted: (J u_k)_0 conj(u_k)_0 = s_k psi_k w_k
    num = (J @ U)[0] * np.conj(U[0])
    psi = np.where(s > 0, num / np.where(s > 0, s * w, 1.0), 0.0)
    return s, w, psi


def test_single_atom():
    sd = direct_map(JacobiCoefficients([], [1j]))
    assert sd.atoms() == [(1.0, 1.0, 1j)]


def test_free_two_by_two_has_phase_zero():
    sd = direct_map(JacobiCoefficients([1.0], [0, 0]))
    assert len(sd) == 1
    assert sd.s[0] == pytest.approx(1.0) and sd.weight[0] == pytest.approx(1.0) and sd.psi[0] == 0


def test_golden_example(golden):
    sd = direct_map(golden)
    np.testing.assert_allclose(sd.s, [1 / PHI, PHI], rtol=1e-14)
    np.testing.assert_allclose(sd.weight, [(5 - np.sqrt(5)) / 10, (5 + np.sqrt(5)) / 10], rtol=1e-14)
    np.testing.assert_allclose(sd.psi, [-1j, 1j], atol=1e-14)


def test_zero_singular_value_gets_zero_phase():
    sd = direct_map(JacobiCoefficients([], [0.0]))
    assert sd.atoms() == [(0.0, 1.0, 0j)]
    assert sd.meta["zero_atom"]


@given(coefficients(max_n=12))
def test_against_eigh_oracle(c):
    s0, w0, psi0 = _oracle(c)
    sd = direct_map(c)
    gaps = np.diff(s0)
    if gaps.size and np.min(gaps) < 1e-4:
        return  # oracle phases are ill-conditioned near degenerate singular values
    keep = w0 > 1e-10
    assert len(sd) == s0.size
    np.testing.assert_allclose(sd.s, s0, atol=1e-12 * max(1, s0[-1]))
    np.testing.assert_allclose(sd.weight, w0, atol=1e-12)
    np.testing.assert_allclose(sd.psi[keep], psi0[keep], atol=1e-6)


@given(coefficients(max_n=16))
def test_spectral_data_invariants(c):
    sd = direct_map(c)
    assert abs(sd.weight.sum() - 1.0) <= 1e-12
    assert np.all(np.abs(sd.psi) <= 1.0 + 1e-10)
    assert np.all(np.diff(sd.s) > 0) and np.all(sd.s >= 0)
    assert np.all(sd.psi[sd.s == 0] == 0)


@given(coefficients(min_n=2, max_n=16))
def test_simple_singular_values_have_unit_phase(c):
    sd = direct_map(c)
    positive = sd.s > 0
    np.testing.assert_allclose(np.abs(sd.psi[positive]), 1.0, atol=1e-12)


def test_free_matrix_degenerate_clusters():
    sd = direct_map(JacobiCoefficients(np.ones(5), np.zeros(6)))
    assert len(sd) == 3
    np.testing.assert_array_equal(sd.psi, 0)


def test_spectral_data_validation():
    with pytest.raises(InputError):
        SpectralData([1.0, 0.5], [0.5, 0.5], [0, 0])
    with pytest.raises(InputError):
        SpectralData([1.0], [0.9], [0])
    with pytest.raises(InputError):
        SpectralData([1.0], [1.0], [1.1])
    with pytest.raises(InputError):
        SpectralData([0.0], [1.0], [0.5])
    with pytest.raises(InputError):
        SpectralData([], [], [])


def test_weyl_M_examples(golden):
    sd = SpectralData([1.0], [1.0], [1j])
    for z in (2j, -3.0, 1 + 1j):
        np.testing.assert_allclose(weyl_M(sd, z), np.array([[1, 1j], [-1j, 1]]) / (1 - z), rtol=1e-15)
    M = weyl_M(SpectralData([1.0], [1.0], [0]), 0.5j)
    assert M[0, 1] == 0 and M[1, 0] == 0
    expected = (5 - np.sqrt(5)) / 10 / (1 / PHI ** 2 + 1) + (5 + np.sqrt(5)) / 10 / (PHI ** 2 + 1)
    assert weyl_M(direct_map(golden), -1)[0, 0] == pytest.approx(expected, rel=1e-14)
    with pytest.raises(PoleProximity):
        weyl_M(sd, 1.0)


@given(coefficients(max_n=10))
def test_weyl_M_against_resolvent(c):
    # M_ij = <x_j, (J^*J - z)^{-1} x_i> with x_0 = delta_0, x_1 = J^* delta_0
    J = dense_truncation(c)
    n = c.size
    z = -0.7 + 1.3j
    e0 = np.eye(n)[:, 0]
    X = np.column_stack([e0, J.conj().T @ e0])
    dense = (X.conj().T @ np.linalg.solve(J.conj().T @ J - z * np.eye(n), X)).T
    np.testing.assert_allclose(weyl_M(direct_map(c), z), dense, atol=1e-10 * max(1, coefficient_scale(c) ** 2))


def test_moment_check_examples(golden):
    c = JacobiCoefficients([1.0], [1 + 1j, 0])
    sd = direct_map(c)
    even, odd = moment_check(c, sd, 0)
    assert even <= 1e-15
    c4 = JacobiCoefficients([1.0, 0.5, 0.5], [1 + 1j, 0, 0, 0])
    sd4 = direct_map(c4)
    assert np.sum(sd4.s ** 2 * sd4.weight) == pytest.approx(3.0)
    assert moment_check(c4, sd4, 1)[0] <= 1e-13
    g = direct_map(golden)
    assert np.sum(g.s * g.psi * g.weight) == pytest.approx(1j)
    assert moment_check(golden, g, 0)[1] <= 1e-15
    with pytest.raises(TruncationTooSmall):
        moment_check(c, sd, 1)


@given(coefficients(min_n=12, max_n=16))
def test_moment_identities(c):
    sd = direct_map(c)
    scale = coefficient_scale(c)
    for k in range(min(5, (c.size - 2) // 2) + 1):
        even, odd = moment_check(c, sd, k)
        bound = 1e-10 * (1 + scale) ** (2 * k)
        assert even <= bound and odd <= bound * (1 + scale)


def test_intertwining(golden):
    rng = np.random.default_rng(5)
    c = random_coefficients(12, rng)
    assert intertwining_check(c, 12, [1.0]) <= 1e-12
    assert intertwining_check(c, 12, [0, 0, 1.0]) <= 1e-12 * coefficient_scale(c) ** 3
    assert intertwining_check(c, 12, [0, 0, 0, 0, 1.0]) <= 1e-9 * coefficient_scale(c) ** 5
    with pytest.raises(TruncationTooSmall):
        intertwining_check(golden, 2, [0, 0, 1.0])


def test_cyclicity(golden):
    assert cyclicity_check(golden, 2) == 0
    assert cyclicity_check(JacobiCoefficients([], [0.3]), 1) == 0
    assert cyclicity_check(JacobiCoefficients(np.ones(5), np.zeros(6)), 6) == 0


@given(coefficients(max_n=14))
def test_cyclicity_random(c):
    assert cyclicity_check(c, c.size) == 0

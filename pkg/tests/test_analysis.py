import numpy as np
import pytest

from weyljacobi import (InputError, JacobiCoefficients, SpectralData, borg_marchenko_fit, classify,
                        continuity_check, default_test_bank, direct_map, random_coefficients, scaled_difference)
from weyljacobi.analysis import TEST_BANK_VERSION


def decay_pair(k, seed, where="b", n=8, scale=0.3):
    """Coefficient pair equal through index k that differs at index k + 1."""
    rng = np.random.default_rng(seed)
    a = scale * rng.uniform(0.5, 1.0, n - 1)
    b = scale * (rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(-0.5, 0.5, n))
    a2, b2 = a.copy(), b.copy()
    if where == "b":
        b2[k + 1] += scale
    else:
        a2[k + 1] += scale
    return direct_map(JacobiCoefficients(a, b)), direct_map(JacobiCoefficients(a2, b2))


@pytest.mark.parametrize("k", [-1, 0, 1, 2, 3])
@pytest.mark.parametrize("seed", [0, 1])
def test_decay_order_for_diagonal_difference(k, seed):
    fit = borg_marchenko_fit(*decay_pair(k, seed))
    assert fit.slope == pytest.approx(-(k + 2), abs=0.2)
    assert len(fit.radii) >= 3


@pytest.mark.parametrize("k", [-1, 0, 1])
def test_decay_order_for_off_diagonal_difference(k):
    fit = borg_marchenko_fit(*decay_pair(k, 0, where="a"))
    assert fit.slope == pytest.approx(-(k + 2.5), abs=0.2)


def test_worked_pair_from_two_matrices():
    sd1 = direct_map(JacobiCoefficients([1, 1], [1j, 0, 0]))
    sd2 = direct_map(JacobiCoefficients([1, 1], [1j, 0, 1]))
    assert borg_marchenko_fit(sd1, sd2).slope == pytest.approx(-3.0, abs=0.2)
    sd3 = direct_map(JacobiCoefficients([1, 1], [0, 0, 0]))
    assert borg_marchenko_fit(sd1, sd3).slope == pytest.approx(-1.0, abs=0.2)


def test_identical_data_gives_sentinel(golden):
    sd = direct_map(golden)
    fit = borg_marchenko_fit(sd, sd)
    assert fit.identical and fit.slope == -np.inf


def test_other_rays():
    sd1, sd2 = decay_pair(0, 3)
    for angle in (np.pi / 2, 3 * np.pi / 2, 2.5):
        assert borg_marchenko_fit(sd1, sd2, ray_angle=angle).slope == pytest.approx(-2.0, abs=0.2)


def test_fit_input_validation(golden):
    sd = direct_map(golden)
    with pytest.raises(InputError):
        borg_marchenko_fit(sd, sd, ray_angle=0.0)
    with pytest.raises(InputError):
        borg_marchenko_fit(sd, sd, radii=[10, 100, 1000])
    with pytest.raises(InputError):
        borg_marchenko_fit(sd, sd, radii=np.logspace(1, 2, 6))
    with pytest.raises(InputError):
        borg_marchenko_fit(sd, sd, radii=[10, 1000, 100, 1e5])


def test_scaled_difference_floor(golden):
    sd = direct_map(golden)
    d, floor = scaled_difference(sd, sd, -100.0)
    assert d == 0.0 and 0 < floor < 1e-14


def test_classify_examples(golden):
    rng = np.random.default_rng(4)
    real = JacobiCoefficients(rng.uniform(0.5, 2, 7), rng.uniform(-2, 2, 8))
    cl = classify(direct_map(real))
    assert cl.self_adjoint and not cl.free_diagonal and cl.max_im_psi <= 1e-10
    cl = classify(direct_map(JacobiCoefficients(np.ones(7), np.zeros(8))))
    assert cl.free_diagonal and cl.self_adjoint and cl.max_abs_psi <= 1e-10
    cl = classify(direct_map(golden))
    assert not cl.self_adjoint and not cl.free_diagonal
    assert cl.max_im_psi == pytest.approx(1.0)


def test_classify_ignores_zero_atom():
    assert classify(SpectralData([0.0], [1.0], [0])).free_diagonal


def test_continuity_constant_sequence():
    c = random_coefficients(6, np.random.default_rng(0))
    rep = continuity_check([c, c], c)
    assert np.all(rep.nu_residuals == 0) and np.all(rep.psi_residuals == 0)
    assert np.all(rep.strong_residuals == 0)
    assert rep.test_bank == TEST_BANK_VERSION


@pytest.mark.parametrize("seed", range(4))
def test_continuity_decreasing_with_first_order_rate(seed):
    c = random_coefficients(8, np.random.default_rng(seed))
    Ns = np.array([5, 10, 20, 40, 80, 160, 320, 640])
    seq = [JacobiCoefficients(c.a, c.b + np.eye(8)[0] / N) for N in Ns]
    rep = continuity_check(seq, c)
    for res in (rep.nu_residuals, rep.psi_residuals):
        assert np.all(np.diff(res) < 0)
        # the rate is at least first order in 1/N
        assert res[-1] * Ns[-1] <= 1.2 * res[-2] * Ns[-2]
    np.testing.assert_allclose(rep.strong_residuals, 1.0 / Ns, rtol=1e-12)


def test_strong_residual_skips_boundary_column():
    c = JacobiCoefficients([1.0, 1.0], [0, 0, 0])
    far = JacobiCoefficients([1.0, 1.0], [0, 0, 5.0])
    assert continuity_check([far], c).strong_residuals[0] == 0.0


def test_custom_bank():
    c = random_coefficients(4, np.random.default_rng(1))
    rep = continuity_check([c], c, test_bank=[np.cos])
    assert rep.test_bank == "custom"
    assert all(np.isfinite(h(np.linspace(-5, 5, 11))).all() for h in default_test_bank())

import numpy as np
import pytest
from hypothesis import given

from weyljacobi import (BlockCoefficients, DimensionTooLarge, IndexOutOfRange, InputError, JacobiCoefficients,
                        block_dense, block_embed, dense_truncation, hermitian_embedding, interleave,
                        properness_sufficient, wronskian)
from weyljacobi.matops import SIGMA1

from conftest import coefficients, random_unitary


def test_construction_checks():
    with pytest.raises(InputError):
        JacobiCoefficients([1.0], [0.0])
    with pytest.raises(InputError):
        JacobiCoefficients([0.0], [0.0, 0.0])
    with pytest.raises(InputError):
        JacobiCoefficients([1.0], [np.nan, 0.0])
    c = JacobiCoefficients([], [1j])
    assert c.size == 1
    with pytest.raises(ValueError):
        c.b[0] = 0.0


def test_dense_truncation_examples(golden):
    np.testing.assert_array_equal(dense_truncation(golden), [[1j, 1], [1, 0]])
    np.testing.assert_array_equal(dense_truncation(golden, 1), [[1j]])
    J = dense_truncation(JacobiCoefficients([2.0, 3.0], [0, 0, 0]))
    np.testing.assert_array_equal(J, [[0, 2, 0], [2, 0, 3], [0, 3, 0]])
    with pytest.raises(DimensionTooLarge):
        dense_truncation(golden, 3)


def test_truncated_and_stripped(golden):
    assert golden.truncated(1) == JacobiCoefficients([], [1j])
    assert golden.stripped() == JacobiCoefficients([], [0.0])
    with pytest.raises(DimensionTooLarge):
        JacobiCoefficients([], [0.0]).stripped()


def test_block_embed_example(golden):
    bc = block_embed(golden)
    np.testing.assert_array_equal(bc.A[0], SIGMA1)
    np.testing.assert_array_equal(bc.B[0], [[0, 1j], [-1j, 0]])
    np.testing.assert_array_equal(bc.B[1], np.zeros((2, 2)))
    assert bc.is_canonical()


def test_real_b_blocks_are_real():
    bc = block_embed(JacobiCoefficients([1.0, 2.0], [0.5, -1.0, 2.0]))
    assert all(np.all(B.imag == 0) for B in bc.B)


@given(coefficients())
def test_block_dense_hermitian(c):
    M = block_dense(block_embed(c))
    np.testing.assert_array_equal(M, M.conj().T)


@given(coefficients())
def test_embeddings_are_unitarily_equivalent(c):
    # both Hermitian forms describe the same operator up to a permutation
    n = c.size
    V = interleave(n)
    np.testing.assert_array_equal(V @ V.T, np.eye(2 * n))
    M = block_dense(block_embed(c))
    E = hermitian_embedding(c)
    np.testing.assert_allclose(np.linalg.eigvalsh(M), np.linalg.eigvalsh(E), atol=1e-12)


def test_block_coefficients_validation():
    with pytest.raises(InputError):
        BlockCoefficients((), ())
    with pytest.raises(InputError):
        BlockCoefficients((np.zeros((2, 2)),), (np.zeros((2, 2)), np.zeros((2, 2))))
    with pytest.raises(InputError):
        BlockCoefficients((), ([[0, 1], [2, 0]],))


def test_conjugated_preserves_spectrum():
    rng = np.random.default_rng(3)
    c = JacobiCoefficients([1.0, 0.7], [1j, 0.5, -1.0])
    bc = block_embed(c)
    W = [np.eye(2)] + [random_unitary(rng) for _ in range(2)]
    bc2 = bc.conjugated(W)
    np.testing.assert_allclose(np.linalg.eigvalsh(block_dense(bc2)), np.linalg.eigvalsh(block_dense(bc)),
                               atol=1e-13)
    assert not bc2.is_canonical()


def test_wronskian_examples():
    c = JacobiCoefficients([2.0, 1.0, 1.0], np.zeros(4))
    u = np.array([1, 1, 0, 0])
    v = np.array([1, 0, 0, 0])
    assert wronskian(u, v, c, 0) == 2.0
    assert wronskian(u, u, c, 0) == 0.0
    assert wronskian(u, v, c, 2) == 0.0
    assert wronskian(u, v, c, 1) == -wronskian(v, u, c, 1)
    with pytest.raises(IndexOutOfRange):
        wronskian(u, v, c, 3)


def test_wronskian_constant_for_solutions():
    # two solutions of J u = z u on the interior have a constant Wronskian
    c = JacobiCoefficients([1.0, 0.5, 2.0, 1.5, 1.0], [1j, 0.3, -0.2, 1.0, 0.0, 0.5])
    z = 0.3 + 0.7j

    def solve(u0, u1):
        u = [u0, u1]
        for n in range(1, 5):
            u.append(((z - c.b[n]) * u[n] - c.a[n - 1] * u[n - 1]) / c.a[n])
        return np.array(u)

    u, v = solve(1.0, 0.0), solve(0.0, 1.0)
    w = [wronskian(u, v, c, n) for n in range(5)]
    np.testing.assert_allclose(w, w[0], rtol=1e-12)


def test_properness():
    assert properness_sufficient(JacobiCoefficients([1, 1, 1], np.zeros(4))) == (True, True)
    assert properness_sufficient(JacobiCoefficients([1], [0, 0]), np.inf) == (False, False)
    res = properness_sufficient(JacobiCoefficients([1, 2, 4, 8], np.zeros(5)))
    assert res.proper and res.prefix_only

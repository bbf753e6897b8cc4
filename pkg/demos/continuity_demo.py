"""Weak convergence of (nu, psi) under b_0 -> b_0 + 1/N.

The residuals against the limit decay like 1/N on the fixed bump test bank.
"""
import numpy as np

from weyljacobi import JacobiCoefficients, continuity_check


def main():
    base = JacobiCoefficients([1.0], [1j, 0.0])
    Ns = [1, 4, 16, 64, 256, 1000]
    seq = [JacobiCoefficients(base.a, base.b + np.array([1.0 / N, 0.0])) for N in Ns]
    rep = continuity_check(seq, base)
    print(f"test bank: {rep.test_bank}")
    print("     N   nu residual  psi residual  N * psi residual")
    for N, nu, psi in zip(Ns, rep.nu_residuals, rep.psi_residuals):
        print(f"{N:6d}   {nu:.3e}    {psi:.3e}     {N * psi:.3f}")


if __name__ == "__main__":
    main()

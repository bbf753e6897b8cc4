"""Decay of the scaled Weyl-matrix difference for pairs agreeing to depth k.

Each pair shares a_j, b_j for j <= k and differs in b_{k+1}.  The fitted
log-log slope along the negative real axis is -(k+2).  A pair differing
only in a_{k+1} decays one half order faster.
"""
import numpy as np

from weyljacobi import JacobiCoefficients, borg_marchenko_fit, direct_map


def pair(k, which, seed=0, n=8, scale=0.3):
    rng = np.random.default_rng(seed)
    a = scale * rng.uniform(0.5, 1.0, n - 1)
    b = scale * (rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(-0.5, 0.5, n))
    a2, b2 = a.copy(), b.copy()
    if which == "b":
        b2[k + 1] += scale
    else:
        a2[k + 1] += scale
    return direct_map(JacobiCoefficients(a, b)), direct_map(JacobiCoefficients(a2, b2))


def main():
    print(" k  differs   slope    radii used")
    for which in ("b", "a"):
        for k in range(-1, 4 if which == "b" else 3):
            fit = borg_marchenko_fit(*pair(k, which))
            print(f"{k:2d}  {which}_{k + 1:<6d} {fit.slope:7.3f}  {len(fit.radii)}")
    sd = pair(0, "b")[0]
    print("identical data:", borg_marchenko_fit(sd, sd).slope)


if __name__ == "__main__":
    main()

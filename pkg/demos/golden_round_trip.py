"""Walk the golden example through both transforms.

J = [[i, 1], [1, 0]] has singular values 1/phi and phi.  The direct map
reads off their weights and phases; the inverse map rebuilds J from them.
"""
import numpy as np

from weyljacobi import JacobiCoefficients, direct_map, inverse_map, to_matrix_measure, moments


def main():
    c = JacobiCoefficients([1.0], [1j, 0.0])
    sd = direct_map(c)
    print("atoms (s, weight, psi):")
    for s, w, psi in sd.atoms():
        print(f"  s = {s:.15f}  weight = {w:.15f}  psi = {psi:.3g}")
    phi = (1 + np.sqrt(5)) / 2
    print(f"expected s = {1 / phi:.15f}, {phi:.15f}")

    m = to_matrix_measure(sd)
    print("first moment of the lifted measure (B_0):")
    print(np.round(moments(m, 1), 15))

    back = inverse_map(sd)
    print(f"recovered a = {back.a}, b = {np.round(back.b, 15)}")


if __name__ == "__main__":
    main()

"""Tour of the angular discretizations and quadrature rules.

Shows the two angle families (uniform six-direction set and the L1-circle
set), their quasi-uniformity, and how the trapezoid and Simpson rules
behave on a smooth periodic integrand with a known integral.

Run:  python3 demos/angles_and_quadrature.py
"""

import numpy as np

from quadma import (hex_angles, integrate, l1_angles, simpson_weights,
                    trapezoid_weights, uniform_angles)


def main():
    print("=== Uniform six-direction set (hexagonal backend) ===")
    d = hex_angles()
    print("angles (multiples of pi/6):", np.round(d.angles / (np.pi / 6)).astype(int))
    print(f"resolution dtheta = {d.resolution:.6f} (pi/6 = {np.pi/6:.6f}), "
          f"Q = {d.quasi_uniformity:.3f}")
    print("trapezoid weights:", trapezoid_weights(d).weights, "(all pi/6)")

    print("\n=== L1-circle angle sets (Cartesian backend) ===")
    print(f"{'K':>4} {'angles':>7} {'resolution':>11} {'Q':>7} {'min simpson w':>14}")
    for K in (2, 4, 8, 16, 32, 64):
        d = l1_angles(K)
        w = simpson_weights(d).weights
        print(f"{K:>4} {len(d):>7} {d.resolution:>11.5f} {d.quasi_uniformity:>7.4f} "
              f"{w.min():>14.6f}")
    print("Q stays below 2, which is what keeps the Simpson weights positive.")

    print("\n=== Quadrature accuracy on f(t) = 1/(2 cos^2 t + 3 sin^2 t) ===")
    exact = np.pi / np.sqrt(6.0)
    print(f"exact integral over [0, pi): pi/sqrt(6) = {exact:.12f}\n")
    print("Simpson on L1-circle angles (4th order in dtheta):")
    prev = None
    for K in (8, 16, 32, 64):
        d = l1_angles(K)
        fs = 1.0 / (2 * np.cos(d.angles) ** 2 + 3 * np.sin(d.angles) ** 2)
        err = abs(integrate(simpson_weights(d), fs) - exact)
        rate = "" if prev is None else f"  ratio vs previous: {prev / err:6.1f}"
        print(f"  K={K:3d}: error = {err:.3e}{rate}")
        prev = err
    print("\nTrapezoid on uniform angles (spectral -- error collapses):")
    for m in (6, 12, 24):
        d = uniform_angles(m)
        fs = 1.0 / (2 * np.cos(d.angles) ** 2 + 3 * np.sin(d.angles) ** 2)
        err = abs(integrate(trapezoid_weights(d), fs) - exact)
        print(f"  {m:3d} angles: error = {err:.3e}")


if __name__ == "__main__":
    main()

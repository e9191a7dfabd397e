"""
Laurent coefficients from torus quadrature
==========================================

On a torus |z| = rho the Cauchy integral for c_alpha is a Fourier
coefficient, so an m-point trapezoid rule is one FFT.  We compare against
the closed-form coefficients of 1/(3 - z) + 1/(z - 0.1) on the annulus
0.5 < |z| < 2 and watch aliasing shrink as the grid doubles.
"""

import numpy as np

from laurentseries import Polyannulus, aliasing_estimate, coefficients_dft, geometric, reciprocal

ring = Polyannulus.annuli([0.5], [2.0])
f = geometric(3.0, ring) + reciprocal(0.1, ring)

# one table on the unit torus, 64 nodes, indices -16..16
table = coefficients_dft(f, radii=[1.0], m=64, N=16)
print(f"{'alpha':>6} {'computed':>24} {'oracle':>12} {'error':>9}")
for alpha in [(-3,), (-2,), (-1,), (0,), (1,), (2,), (16,)]:
    c, exact = table[alpha], f.oracle_coeff(alpha)
    print(f"{alpha[0]:>6} {c.real:>24.16e} {exact.real:>12.4e} {abs(c - exact):>9.1e}")

# the coefficient does not depend on the torus; only its error bound does
for rho in (0.8, 1.0, 1.25):
    t = coefficients_dft(f, radii=[rho], m=64, N=16)
    print(f"rho={rho:<5} c_5 = {t[(5,)].real:.16e}  aliasing bound {t.aliasing_bound:.1e}")

# aliasing for the pole at 3 on the unit torus falls like 3^-(m - N)
for m in (16, 32, 64):
    print(f"m={m:<3} m-vs-2m discrepancy {aliasing_estimate(f, [1.0], m, N=4):.2e}")

# negative exponents vanish identically on a disc axis; the table knows it
disc_table = coefficients_dft(geometric(3.0), N=6)
print("largest |c_alpha| with alpha < 0 on the disc:",
      max(abs(disc_table[(a,)]) for a in range(-6, 0)), "-> cleaned to", disc_table.coefficient((-3,)))

"""Boundary calculus on the circle: transforms, projections, factorizations.

Walks through the low-level toolkit: Fourier analysis on power-of-two grids,
the analytic projection, Toeplitz application, outer functions recovered from
boundary log-modulus, and Fejer-Riesz factorization of nonnegative
trigonometric polynomials.
"""

import numpy as np

from hbspace import (
    CircleGrid,
    FourierSeries,
    PowerOuter,
    blaschke_eval,
    fejer_riesz,
    fourier_analyze,
    outer_from_log_modulus,
    riesz_project,
    toeplitz_apply,
)
from hbspace.circle import grid_angles
from hbspace.functions import modulus_squared_coeffs

print("== Fourier analysis ==")
t = grid_angles(16)
series = fourier_analyze(CircleGrid((1.0 + np.exp(1j * t)) / 2.0))
print("coefficients of (1+z)/2:", series.coefficient(0), series.coefficient(1))

print("\n== Riesz projection ==")
sym = fourier_analyze(CircleGrid(np.conj((1.0 + np.exp(1j * t)) / 2.0)))
proj = riesz_project(sym)
print("P+ conj((1+z)/2) keeps only the constant:", proj.coefficient(0))

print("\n== Toeplitz operator with co-analytic symbol ==")
lam = 0.5
kernel = FourierSeries.from_taylor(lam ** np.arange(40), 256)
out = toeplitz_apply(CircleGrid(np.conj((1.0 + np.exp(1j * grid_angles(256))) / 2.0)), kernel)
print("T_conj(b) k_lam = conj(b(lam)) k_lam; factor recovered:",
      complex(out.taylor(1)[0]))  # = b(0.5) conj = 0.75

print("\n== Outer function from log-modulus ==")
alpha, c = 0.25, 2.0 ** -0.25
w = lambda th: (c * np.abs(2.0 * np.sin(th / 2.0)) ** alpha) ** 2
outer = outer_from_log_modulus(w, size=2 ** 12)
closed = PowerOuter(alpha)
for z in (0.0, 0.5, 0.9j):
    print(f"  at {z}: reconstructed {complex(outer(np.array([z]))[0]):.8f}  "
          f"closed form {complex(closed(np.array([z]))[0]):.8f}")

print("\n== Fejer-Riesz factorization ==")
tau = -modulus_squared_coeffs(np.array([0.5, 0.5]))
tau[0] += 1.0
fact = fejer_riesz(tau)
print("1 - |(1+e^it)/2|^2 = |q|^2 with q =", np.round(fact.q, 12))
print("boundary zeros:", fact.boundary_zeros, " residual:", fact.residual)

print("\n== Blaschke products ==")
zeros = [1 - 2.0 ** (-n) for n in range(1, 9)]
print("B(0) =", complex(blaschke_eval(zeros, np.array([0.0]))[0]))
print("B at one of its zeros:", complex(blaschke_eval(zeros, np.array([zeros[3]]))[0]))
print("|B| on the circle:", np.abs(blaschke_eval(zeros, np.exp(1j * t))).round(12)[:4], "...")

"""Pythagorean pairs: mate construction and extremeness classification.

For a symbol b in the unit ball, the mate is the unique outer a with
a(0) > 0 and |a|^2 + |b|^2 = 1 on the circle.  Rational symbols get rational
mates through spectral factorization; everything else goes through the outer
function of 1 - |b|^2.  Extremeness is the integrability of log(1 - |b|).
"""

import numpy as np

from hbspace import (
    PowerOuter,
    SymbolB,
    classify_extremeness,
    pair_from_outer_a,
    pythagorean_mate,
)
from hbspace.scenarios import build

print("== rational mate ==")
pair = pythagorean_mate(SymbolB.rational([0.5, 0.5]))
print("b = (1+z)/2 has mate with coefficients", np.round(pair.a.num, 12))
print("boundary identity residual:", pair.diagnostics["mate_residual"])
print("extremeness:", pair.extremeness.verdict,
      " log integral:", pair.extremeness.log_integral)

print("\n== power-outer pair ==")
alpha_pair = pair_from_outer_a(PowerOuter(0.25))
print("a = c(1-z)^0.25 paired with the outer b of 1 - |a|^2")
print("extremeness:", alpha_pair.extremeness.verdict)
z = np.array([0.3, 0.5j])
print("|a|^2 + |b|^2 near the boundary grid: residual",
      alpha_pair.mate_residual())

print("\n== extreme symbols ==")
print("b = z (inner):", classify_extremeness(SymbolB.rational([0.0, 1.0])).verdict)
gauss = build("gauss-extreme")
verdict = classify_extremeness(gauss.symbol)
print("boundary-flat modulus 1 - exp(-1/theta^2):", verdict.verdict)
print("refinement trace of the log integral:",
      [f"{v:.3e}" for v in verdict.trace_values])

print("\n== degenerate case ==")
try:
    pythagorean_mate(SymbolB.rational([0.0, 1.0]))
except Exception as exc:
    print("mate of an inner symbol:", type(exc).__name__, "-", exc)

"""Solve the self-consistency equation for K as a double series in lambda and
1/N, and compare its large-N part with the Fuss-Catalan numbers."""

from fractions import Fraction
from math import comb

from strandcalc.melonic import compute_f1_f2, lo_free_energy, solve_sde

data = compute_f1_f2("A")
m = data["f2_leading"]
K = solve_sde(data["f1"], m, V_max=8, K_max=2)
for (v, k), c in sorted(K.c.items()):
    print(f"lambda^{v} N^-{k}: {c}")
print("large N, rescaled by m^n:", [str(K.coefficient(2 * n) / m ** n) for n in range(5)])
print("Fuss-Catalan C(6n+1,n)/(6n+1):",
      [str(Fraction(comb(6 * n + 1, n), 6 * n + 1)) for n in range(5)])
print("lo_free_energy(1, 4):", [str(x) for x in lo_free_energy(1, 4)])

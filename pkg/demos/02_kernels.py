"""
Trigonometric kernels
=====================

Each kernel is a nonnegative (or, for delayed means, signed) trigonometric
polynomial with unit mean.  Its cosine coefficients are the multipliers the
induced operator applies to the coefficient of q^j.
"""

import numpy as np

from slice_approx.kernels import DVP, FejerDelayed, GenJackson, Jackson, multipliers, quadrature_periodic

u = np.linspace(-np.pi, np.pi, 7)
for k in (DVP(6), Jackson(4), GenJackson(4, 3), FejerDelayed(4)):
    mean = quadrature_periodic(k, 512)
    rho = multipliers(k)
    print(f"{k.label:18} degree {k.degree:3}  mean {mean:.15f}")
    print("   rho_0..5:", np.round(rho[:6], 6))
    print("   values  :", np.round(k(u), 4))

# de la Vallee-Poussin multipliers tend to one as n grows
for n in (1, 10, 100, 1000):
    print(f"DVP({n}) rho_1 = {DVP(n).rho(1):.6f}   n/(n+1) = {n / (n + 1):.6f}")

"""
Quaternions and slices
======================

Every non-real quaternion lies in exactly one complex plane C_I, and slice
functions are determined by what they do on any one of those planes.
"""

import numpy as np

from slice_approx.quaternion import I, J, K, Quaternion, slice_decompose
from slice_approx.slice_functions import RightPolynomial, extend_from_slice, is_intrinsic, representation_formula

# Hamilton's rules, and a product that does not commute
print("i j =", I * J, "   j i =", J * I)

q = Quaternion(0.5, 1.0, -2.0, 2.0)
x, y, unit = slice_decompose(q)
print(f"q = {x} + I * {y} with I = {unit}")
print("I^2 =", unit * unit)

# right polynomials put the coefficients after the powers
p = RightPolynomial([[0, 0, 0, 0], [0, 1, 0, 0]])  # q -> q i
print("p(j) =", p(J), " (j i = -k)")

# the representation formula rebuilds f(x + I y) from two values on C_J
f = RightPolynomial(np.random.default_rng(0).normal(size=(4, 4)))
plus, minus = f(Quaternion(x) + J * y), f(Quaternion(x) - J * y)
rebuilt = representation_formula(plus, minus, J, unit)
print("direct  :", f(q))
print("rebuilt :", rebuilt)

# a complex function on one plane extends to all of H
exp_q = extend_from_slice(np.exp)
print("exp(q) =", exp_q(q))
print("exp is intrinsic:", is_intrinsic(exp_q, np.random.default_rng(1).normal(size=(100, 4))).ok)
print("q -> q i is intrinsic:", is_intrinsic(p, np.array([[0, 1.0, 0, 0]])).ok)

#!/usr/bin/env python3
"""Walk through the solution-generating algebra.

The engine keeps every element of the enveloping algebra in the normal form
x^a y^b p(h) with the Cartan polynomial on the right.  The Casimir-shift
products c_1 c_2 ... c_l collapse to Pochhammer sums, and dividing by the
eigenvalue normalization gives the order-l solution operator.
"""

from fractions import Fraction as F

from tractorcalc.sl2 import (
    NOSeries, bessel_coefficients, casimir_products, casimir_pochhammer_sum,
    frobenius_pair, normal_order, series_solutions,
)

print("== normal ordering ==")
for word in (["y", "x"], ["y", "x", "x"], ["y", "x", "y", "x"]):
    print("  %-12s ->  %s" % ("*".join(word), normal_order(word)))

print("\n== Casimir-shift products c_1..c_l ==")
for l in (1, 2, 3):
    prod = casimir_products(l)
    assert prod == casimir_pochhammer_sum(l)
    print("  l=%d:  %s" % (l, prod))

print("\n== y from the left sweeps the product away ==")
y = NOSeries.word(0, 1)
for l in (2, 4, 6):
    print("  y c_1..c_%d = %s" % (l, y * casimir_products(l)))

print("\n== normalized series (the Bessel coefficients) ==")
h0 = F(13, 3)
print("  h0 = %s, coefficients: %s" % (h0, bessel_coefficients(h0, 5)))
print("  first-kind operator at order 2:", series_solutions("first", h0, 2))

print("\n== integer h0 forces a log branch ==")
pair = frobenius_pair(3, 6)
print("  h0 = 3 regular:", list(pair.regular))
print("  h0 = 3 log part:", list(pair.log_part))

#!/usr/bin/env python3
"""Extract the holographic boundary operators on the flat R^4 boundary.

The detour operator L_1, its gauge companion G_1 and the Q-operator are read
off from bulk compositions restricted to r = 0.  On the flat boundary L_1
must be a constant multiple of the Maxwell operator delta d, and the
factorization L_1 = gamma_1 delta Q_2 d holds exactly.
"""

from tractorcalc.boundary import (
    detour_L, factor_check, gauge_G, q_operator,
)
from tractorcalc.forms import Model, WeightedForm, codiff, exterior_d
from tractorcalc.poly import Poly

n, k = 4, 1
boundary = Model(n, False)

probes = {
    "(x2)^2 dx1": WeightedForm(boundary, 1, 0, {(1,): Poly.parse("x2^2")}),
    "x1 x3 dx2": WeightedForm(boundary, 1, 0, {(2,): Poly.parse("x1*x3")}),
    "(x1)^3 dx1": WeightedForm(boundary, 1, 0, {(1,): Poly.parse("x1^3")}),
}

print("== detour operator L_1 vs the Maxwell operator ==")
for label, A in probes.items():
    LA = detour_L(n, k, 1, A)
    dd = codiff(exterior_d(A))
    print("  L_1(%-12s) = %s" % (label, LA))
    print("     8 delta d     = %s" % dd.scale(8))

print("\n== gauge companion and Q ==")
for label, A in probes.items():
    print("  G_1(%-12s) = %s" % (label, gauge_G(n, k, A)))
    print("  Q_1(%-12s) = %s" % (label, q_operator(n, k, A)))

print("\n== factorization L_1 = -8 delta Q_2 d ==")
for label, A in probes.items():
    print("  %-12s -> %s" % (label, factor_check(n, k, A)))

closed = exterior_d(WeightedForm(boundary, 0, 0, {(): Poly.parse("x1*x2")}))
print("\nL_1 annihilates closed forms:", detour_L(n, k, 1, closed).is_zero())

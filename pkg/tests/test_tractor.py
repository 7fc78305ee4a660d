import random
from fractions import Fraction as F

import pytest

from tractorcalc.forms import (
    ExcludedWeight, WeightedForm, bulk_model, codiff, exterior_d, extend,
    random_form,
)
from tractorcalc.poly import Poly, RVAR
from tractorcalc.tractor import (
    TractorForm, algebraic_mult, bar_D, boundary_restrict, connection,
    double_D, ext_D, ext_I, ext_X, ext_Y, hat_D, hat_D_star, int_D, int_I,
    int_X, int_Y, ker_int_I_extension, laplace_robin, proj_holo,
    proj_holo_tau, proj_west, q_coset, q_east, q_extract, q_north,
    q_north_tau, q_south, q_west, q_west_special, random_tractor, robin_y,
    sigma_mult, star_tractor, tangential, tilde_D, transform,
    tractor_degree, triple_D, triple_D_star, weight_h,
)


def west_only(model, k, w, form):
    return TractorForm(model, k, w, west=form)


def test_slot_bookkeeping():
    m = bulk_model(5)
    w = F(1, 3)
    A = random_tractor(random.Random(0), m, 2, w)
    assert A.north.degree == 1 and A.north.weight == w + 2
    assert A.west.degree == 2 and A.west.weight == w + 2
    assert A.east.degree == 0 and A.east.weight == w
    assert A.south.degree == 1 and A.south.weight == w
    with pytest.raises(ValueError):
        TractorForm(m, 2, w, west=WeightedForm(m, 2, w, {}))  # wrong slot weight


def test_X_moves_slots():
    m = bulk_model(5)
    w = F(-5, 3)
    S = WeightedForm(m, 0, w - 1, {(): Poly.var(1)})
    A = TractorForm(m, 1, w, south=S)
    assert algebraic_mult("X", A).is_zero()     # no south column in X
    B = ext_X(west_only(m, 1, F(-5, 3), WeightedForm(m, 1, F(-2, 3), {(1,): Poly.one})))
    assert B.south.comps == {(1,): Poly.one}
    assert B.k == 2 and B.w == F(-2, 3)


def test_ext_D_matrix_example():
    # d=5, w=0, k=1, pure west x2 dx2: slots (3 x2 dx2, 0, -2, 0)
    m = bulk_model(5)
    Wf = WeightedForm(m, 1, 1, {(2,): Poly.var(2)})
    A = west_only(m, 1, 0, Wf)
    DA = ext_D(A)
    assert DA.north.comps == {(2,): 3 * Poly.var(2)}
    assert DA.west.is_zero()
    assert DA.east.comps == {(): Poly.const(-2)}
    assert DA.south.is_zero()


def test_D_squared_zero():
    rng = random.Random(1)
    m = bulk_model(6)
    A = random_tractor(rng, m, 2, F(4, 7))
    assert ext_D(ext_D(A)).is_zero()
    assert int_D(int_D(A)).is_zero()


def test_triple_D_tangential():
    rng = random.Random(2)
    m = bulk_model(5)
    A = random_tractor(rng, m, 2, F(2, 3))
    for op in (triple_D, triple_D_star):
        assert (op(sigma_mult(A)) - sigma_mult(op(A))).is_zero()


def test_laplace_robin_example():
    # y on a pure-west constant (west = dx1, d=5, w=0) vanishes
    m = bulk_model(5)
    A = west_only(m, 1, 0, WeightedForm(m, 1, 1, {(1,): Poly.one}))
    assert laplace_robin("y", A).is_zero()
    rng = random.Random(3)
    B = random_tractor(rng, m, 1, F(2, 5))
    yB = laplace_robin("y", B)
    assert (yB + int_I(ext_D(B)) + ext_D(int_I(B))).is_zero()
    assert (ext_D(yB) - robin_y(ext_D(B))).is_zero()


def test_insertions_examples():
    rng = random.Random(4)
    m = bulk_model(5)
    w = F(2, 7)
    A = random_form(rng, m, 1, w + 1)
    qW = q_west(A, w)
    assert q_extract(qW) == A
    assert hat_D_star(qW).is_zero() and int_X(qW).is_zero()
    N = random_form(rng, m, 0, w + 1)
    qN = q_north(N, w)
    assert ext_D(qN).is_zero() and int_D(qN).is_zero()
    S = random_form(rng, m, 0, w - 1)
    qS = q_south(S, w)
    assert ext_X(qS).is_zero() and int_X(qS).is_zero()
    E = random_form(rng, m, 0, w)
    qE = q_east(E, w)
    assert hat_D(qE).is_zero() and ext_X(qE).is_zero()


def test_insertion_gates():
    m = bulk_model(5)
    w = F(1 - 5)    # w = k - d for k = 1
    A = WeightedForm(m, 1, w + 1, {(1,): Poly.var(2)})
    with pytest.raises(ExcludedWeight):
        q_west(A, w)
    # special branch needs a coclosed pair
    w = F(1) - 5
    Ac = WeightedForm(m, 1, w + 1, {(2,): Poly.var(1)})
    phi = WeightedForm(m, 0, w - 1, {})
    T = q_west_special(Ac, phi)
    assert int_X(T).is_zero() and hat_D_star(T).is_zero()
    bad = WeightedForm(m, 1, w + 1, {(2,): Poly.var(2)})
    with pytest.raises(ExcludedWeight):
        q_west_special(bad, phi)
    with pytest.raises(ExcludedWeight):
        q_north(WeightedForm(m, 0, F(-1) + 1, {(): Poly.one}), F(-1))  # w = -k
    with pytest.raises(ValueError):
        q_extract(q_north(WeightedForm(m, 0, F(1, 3) + 1, {(): Poly.var(1)}), F(1, 3)))


def test_hat_D_special_branch():
    m = bulk_model(4)   # w = -d/2 = -2
    w = F(-2)
    k = 1
    Af = WeightedForm(m, k, w + k, {(1,): Poly.var(1) * Poly.var(2)})
    phi = WeightedForm(m, k - 1, w + k - 2, {(): Poly.var(2)})
    A = TractorForm(m, k, w, west=Af, south=phi)
    out = hat_D_star(A)     # kernel branch: (0, delta A - (k-d/2) phi, 0, -delta phi)
    assert out.west == codiff(Af) - phi.scale(F(k) - F(4, 2))
    assert out.south == -codiff(phi)
    bad = random_tractor(random.Random(5), m, k, w)
    with pytest.raises(ExcludedWeight):
        hat_D_star(bad)
    with pytest.raises(ExcludedWeight):
        tilde_D(random_tractor(random.Random(6), m, k, 1 - F(4, 2)))


def test_projector_examples():
    rng = random.Random(7)
    m = bulk_model(5)
    w = F(3, 7)
    A = random_tractor(rng, m, 2, w)
    PW = proj_west(A)
    assert (proj_west(PW) - PW).is_zero()
    P = proj_holo(A)
    assert int_I(P).is_zero() and hat_D_star(P).is_zero() and int_X(P).is_zero()
    with pytest.raises(ExcludedWeight):
        proj_holo(random_tractor(rng, m, 1, F(-1)))   # w = -k
    # Pi-hat_tau restricts to the boundary west insertion
    tf = random_form(rng, m.boundary, 1, 0)
    PT = proj_holo_tau(extend(tf, 5))
    bv = boundary_restrict(PT)
    n = 4
    south = codiff(tf).scale(F(-1) / (n + F(-1) - 1))
    assert bv.west == tf and bv.south == south
    assert bv.north.is_zero() and bv.east.is_zero()


def test_dual_scale_tractor():
    rng = random.Random(8)
    m = bulk_model(6)
    A = random_tractor(rng, m, 2, F(5, 7))
    assert (int_X(ext_Y(A)) + ext_Y(int_X(A)) - A).is_zero()
    assert (ext_X(int_Y(A)) + int_Y(ext_X(A)) - A).is_zero()
    assert ext_Y(A).w == A.w - 1 and int_Y(A).w == A.w - 1


def test_tangential_ops():
    rng = random.Random(9)
    m = bulk_model(5)
    A = random_tractor(rng, m, 1, F(4, 3))
    Q = tangential("DT", sigma_mult(A))
    assert (v := Q.vanishing_order()) is None or v >= 1
    Q = tangential("barD", sigma_mult(A))
    assert (v := Q.vanishing_order()) is None or v >= 1
    # restriction to the boundary exterior tractor D
    As = random_tractor(rng, m.boundary, 1, F(4, 3))
    Aext = ker_int_I_extension(As, 5)
    assert int_I(Aext).is_zero()
    assert (boundary_restrict(bar_D(Aext)) - ext_D(As)).is_zero()
    # Paneitz-weight branch exists
    w2 = 2 - F(5, 2)
    B = random_tractor(rng, m, 1, w2)
    tangential("DT", B)   # must not raise
    with pytest.raises(ExcludedWeight):
        tangential("DT", random_tractor(rng, m, 1, F(3, 2) - F(5, 2)))


def test_structure_ops():
    rng = random.Random(10)
    m = bulk_model(5)
    A = random_tractor(rng, m, 2, F(1, 3))
    sgn = (-1) ** (2 * (5 + 2 - 2) + 1)
    assert (star_tractor(star_tractor(A)) - A.scale(sgn)).is_zero()
    T0 = transform(A, {})
    assert T0.scale_tag != A.scale_tag
    assert all((getattr(T0, s) - getattr(A, s)).is_zero()
               for s in ("north", "west", "east", "south"))
    with pytest.raises(ValueError):
        A + T0      # scale tags must match
    Itr = TractorForm(m, 1, 0,
                      WeightedForm(m, 0, 1, {(): Poly.var(RVAR)}),
                      WeightedForm(m, 1, 1, {(RVAR,): Poly.one}), None, None)
    assert connection(Itr, {RVAR: 1, 2: F(2, 3)}).is_zero()


def test_weight_and_degree_operators():
    m = bulk_model(5)
    A = random_tractor(random.Random(11), m, 2, F(1, 5))
    assert (weight_h(A) - A.scale(5 + F(2, 5))).is_zero()
    assert (tractor_degree(A) - A.scale(2)).is_zero()


def test_log_density_record():
    from tractorcalc.tractor import LogDensity
    ld = LogDensity()
    assert ld.component_in_own_scale == 0 and ld.weight == 1
    A = random_tractor(random.Random(12), bulk_model(5), 1, F(1, 3))
    assert (ld.weight_commutator(A) - A.scale(2)).is_zero()


def test_apply_noseries_on_tractors():
    # xy extracted from c_1 minus (h-2) reproduces sigma . y directly
    from tractorcalc.sl2 import HPoly, NOSeries, apply_noseries, casimir_products
    m = bulk_model(5)
    rng = random.Random(13)
    w = F(2, 7)
    A = random_tractor(rng, m, 1, w)
    series = casimir_products(1) + NOSeries({(0, 0): HPoly({1: -1, 0: 2})})
    out = apply_noseries(
        series, A, x_action=sigma_mult, y_action=robin_y,
        h_value=5 + 2 * w,
        add=lambda a, b: a + b, scale=lambda a, c: a.scale(c))
    assert (out - sigma_mult(robin_y(A))).is_zero()


def test_wedge_reproduces_canonical_multiplications():
    # wedging by the canonical tractor (south slot 1) is ext_X, and wedging
    # by the scale tractor (north sigma, west dr) is ext_I
    from tractorcalc.tractor import wedge_tractor
    m = bulk_model(5)
    rng = random.Random(14)
    A = random_tractor(rng, m, 2, F(3, 7))
    Xtr = TractorForm(m, 1, 1,
                      south=WeightedForm(m, 0, 0, {(): Poly.one}))
    assert (wedge_tractor(Xtr, A) - ext_X(A)).is_zero()
    Itr = TractorForm(m, 1, 0,
                      WeightedForm(m, 0, 1, {(): Poly.var(RVAR)}),
                      WeightedForm(m, 1, 1, {(RVAR,): Poly.one}), None, None)
    assert (wedge_tractor(Itr, A) - ext_I(A)).is_zero()


def test_operator_registry_shifts():
    from tractorcalc.forms import ExcludedWeight
    from tractorcalc.tractor import OPERATOR_REGISTRY
    rng = random.Random(15)
    m = bulk_model(5)
    for op in OPERATOR_REGISTRY:
        A = random_tractor(rng, m, 2, F(rng.randint(1, 20), 7))
        try:
            out = op(A)
        except ExcludedWeight:
            continue
        assert out.k == A.k + op.degree_shift
        assert out.w == A.w + op.weight_shift

import random
from fractions import Fraction as F

import pytest

from tractorcalc.forms import (
    ExcludedWeight, Model, ModelScale, WeightedForm, bulk_model, codiff,
    divergence_extend, e_tilde, exterior_d, exterior_op, extend,
    form_laplacian, hodge_star, holographic_op, hook_normal, i_tilde, l_hat,
    mult_sigma, random_form, restrict, script_l, wedge, wedge_normal,
)
from tractorcalc.poly import LOGVAR, Poly, RVAR


def test_model_scale_record():
    ms = ModelScale(5)
    assert ms.scale_tractor_norm() == 1
    assert ms.rho == 0 and ms.schouten == 0 and ms.trace_J == 0
    assert ms.sigma_component == Poly.var(RVAR)
    assert ms.model.coords == (0, 1, 2, 3, 4)


def test_exterior_examples():
    m = bulk_model(5)
    A = WeightedForm(m, 1, 0, {(2,): Poly.var(1)})
    dA = exterior_op("d", A)
    assert dA.comps == {(1, 2): Poly.one}
    B = WeightedForm(m, 1, 0, {(2,): Poly.var(2)})
    assert exterior_op("delta", B).comps == {(): Poly.one}
    C = WeightedForm(m, 1, 0, {(1,): Poly.var(2) ** 2})
    assert exterior_op("lap", C).comps == {(1,): Poly.const(2)}


def test_weight_shifts():
    m = bulk_model(6)
    A = WeightedForm(m, 2, F(1, 3), {(1, 2): Poly.var(3)})
    assert exterior_d(A).weight == A.weight
    assert codiff(A).weight == A.weight - 2
    assert wedge_normal(A).weight == A.weight + 1
    assert hook_normal(A).weight == A.weight - 1
    assert e_tilde(A).weight == A.weight + 1 and e_tilde(A).degree == 3
    assert i_tilde(A).weight == A.weight - 1 and i_tilde(A).degree == 1
    assert l_hat(A).weight == A.weight and l_hat(A).degree == 2


def test_holographic_normal_examples():
    m = bulk_model(5)
    A = WeightedForm(m, 1, 0, {(RVAR,): Poly.var(1)})
    assert holographic_op("i_tilde", A).comps == {(): 3 * Poly.var(1)}
    one = WeightedForm(m, 0, F(7, 3), {(): Poly.one})
    et = holographic_op("e_tilde", one)
    assert et.comps == {(RVAR,): Poly.const(F(7, 3))}
    w0 = F(-1, 3)
    dx1 = WeightedForm(m, 1, w0 + 1, {(1,): Poly.one})
    out = i_tilde(e_tilde(dx1))
    assert out == dx1.scale((w0 + 1) * (w0 + 3))


def test_lhat_conjugation():
    rng = random.Random(4)
    m = bulk_model(5)
    A = random_form(rng, m, 2, F(4, 3))
    lhs = script_l(A)
    rhs = mult_sigma(l_hat(mult_sigma(A, -A.weight)), A.weight)
    assert (lhs - rhs).is_zero()


def test_divergence_extension_recursive():
    m = bulk_model(5)
    bm = m.boundary
    w = F(2, 3)
    A = WeightedForm(bm, 1, w + 1, {(2,): Poly.var(2) * Poly.var(1)})
    ext5 = divergence_extend(A, w, 5, "recursive")
    v = i_tilde(ext5).vanishing_order()
    assert v is None or v >= 6
    assert restrict(ext5) == A
    # constant data collapses the recursion
    const = WeightedForm(bm, 1, w + 1, {(1,): Poly.one})
    assert divergence_extend(const, w, 6, "recursive") == extend(const, 5)


def test_divergence_extension_projector():
    m = bulk_model(5)
    bm = m.boundary
    w = F(2, 3)
    A = WeightedForm(bm, 1, w + 1, {(2,): Poly.var(2) * Poly.var(1)})
    proj = divergence_extend(A, w, 5, "projector")
    assert i_tilde(proj).is_zero()          # identically, via i_tilde^2 = 0
    assert restrict(proj) == A


def test_divergence_gates():
    m = bulk_model(5)
    bm = m.boundary
    A = WeightedForm(bm, 1, F(-1) + 1, {(1,): Poly.var(1)})
    with pytest.raises(ExcludedWeight):
        divergence_extend(A, F(-1), 5, "projector")     # w + k = 0
    B = WeightedForm(bm, 1, F(-2) + 1, {(1,): Poly.var(1)})
    with pytest.raises(ExcludedWeight):
        divergence_extend(B, F(-2), 5, "recursive")     # d + w - k = 2 <= 5
    # at d + w - k = 0 the i = 0 constraint is relaxed and the recursion
    # runs to any order (the pole d+w-k-i = -i never vanishes)
    C = WeightedForm(bm, 1, F(-4) + 1, {(2,): Poly.var(2)})
    ext = divergence_extend(C, F(-4), 5, "recursive")
    v = i_tilde(ext).vanishing_order()
    assert v is None or v >= 6


def test_restrict_offsets():
    m = bulk_model(4)
    A = WeightedForm(m, 0, F(1, 2), {(): Poly.var(1)}, offset=F(1, 2))
    assert restrict(A).is_zero()
    B = WeightedForm(m, 0, F(1, 2), {(): Poly.var(1)}, offset=F(-1, 2))
    with pytest.raises(ValueError):
        restrict(B)
    C = WeightedForm(m, 0, 0, {(): Poly.var(RVAR, 2) * Poly.var(LOGVAR)})
    assert restrict(C).is_zero()   # r^2 log r -> 0
    D = WeightedForm(m, 0, 0, {(): Poly.var(LOGVAR)})
    with pytest.raises(ValueError):
        restrict(D)


def test_hodge_star_involution():
    rng = random.Random(9)
    for d in (4, 5):
        m = bulk_model(d)
        for k in range(0, d + 1):
            A = random_form(rng, m, k, F(1, 3))
            sgn = (-1) ** (k * (d - k))
            assert (hodge_star(hodge_star(A)) - A.scale(sgn)).is_zero()
            assert hodge_star(A).weight == F(d) + A.weight - 2 * k


def test_wedge_antisymmetry():
    rng = random.Random(10)
    m = bulk_model(5)
    A = random_form(rng, m, 1, F(1, 3))
    B = random_form(rng, m, 2, F(2, 5))
    assert (wedge(A, B) - wedge(B, A).scale((-1) ** (1 * 2))).is_zero()
    assert wedge(A, A).is_zero() or wedge(A, A).degree == 2  # odd wedge odd


def test_offset_canonicalization():
    m = bulk_model(4)
    # integer offsets are pushed into the polynomial
    A = WeightedForm(m, 0, 0, {(): Poly.var(1)}, offset=2)
    assert A.offset == 0
    assert A.comps[()] == Poly.var(1) * Poly.var(RVAR, 2)
    # common r powers move into a fractional offset
    B = WeightedForm(m, 0, 0, {(): Poly.var(RVAR) * Poly.var(1)}, offset=F(1, 2))
    assert B.offset == F(3, 2)
    assert B.vanishing_order() == F(3, 2)

import random
from fractions import Fraction as F

import pytest

from tractorcalc.forms import (
    ExcludedWeight, Model, WeightedForm, bulk_model, codiff, e_tilde,
    exterior_d, extend, i_tilde, random_form,
)
from tractorcalc.poly import Poly
from tractorcalc.solver import (
    ProcaProblemSpec, SeriesSolution, UnsupportedRegime, boundary_value,
    delta_potential, derive_regime, inverse_duality, proca_solve,
    proca_solve_form, residual_orders, scale_duality,
)
from tractorcalc.tractor import (
    TractorForm, boundary_restrict, q_west, random_tractor, robin_y,
    sigma_mult,
)

B4 = Model(4, False)


def mk_spec(w0, comps, k=1, order=5, d=5):
    bm = Model(d - 1, False)
    data = WeightedForm(bm, k, F(w0) + k, comps)
    return ProcaProblemSpec(d, k, F(w0), data, order=order)


def test_regime_dispatch_total():
    assert derive_regime(5, 1, F(-1, 3)) == "generic"
    assert derive_regime(5, 2, F(-1)) == "log"          # h0 = 3, w0 != -k
    assert derive_regime(5, 1, F(-1)) == "trueForm"
    assert derive_regime(5, 1, F(-3)) == "dualTrueForm"
    assert derive_regime(5, 1, F(-1, 3), data_weight=F(1, 3) - 4 + 1) == "secondKind"
    with pytest.raises(UnsupportedRegime):
        derive_regime(5, 2, F(-2))      # w0 = -k = k-n (k = n/2)
    with pytest.raises(UnsupportedRegime):
        derive_regime(5, 1, F(-2))      # h0 = 1


def test_constant_data_fixed_point():
    spec = mk_spec(F(-1, 3), {(1,): Poly.one})
    sol = proca_solve(spec)
    assert sol.coeffs[0].west.comps == {(1,): Poly.one}
    assert all(C.is_zero() for C in sol.coeffs[1:])
    rep = residual_orders(sol)
    assert all(v is None for v in (rep.y_order, rep.int_I_order,
                                   rep.hat_D_star_order, rep.int_X_order,
                                   rep.i_tilde_order, rep.proca_order))


def test_backends_agree():
    spec = mk_spec(F(-1, 3), {(2,): Poly.var(1) * Poly.var(2),
                              (1,): Poly.var(3) ** 2})
    st = proca_solve(spec)
    so = proca_solve(spec, backend="oracle")
    sp = proca_solve_form(spec, "product")
    sg = proca_solve_form(spec, "glStep")
    assert all((a - b).is_zero() for a, b in zip(st.coeffs, so.coeffs))
    wt = st.west_series()
    assert all((a - b).is_zero() for a, b in zip(wt, sp.west_series()))
    assert all((a - b).is_zero() for a, b in zip(wt, sg.west_series()))


def test_solution_restricts_to_data():
    spec = mk_spec(F(2, 7), {(2,): Poly.var(1) ** 2, (3,): Poly.var(2)})
    sol = proca_solve(spec)
    bv = boundary_value(sol)
    qws = q_west(spec.data, spec.w0)
    # the boundary tractor is the boundary west insertion of the data
    n = 4
    south = codiff(spec.data).scale(F(-1) / (F(n) + spec.w0 - spec.k))
    assert bv.west == spec.data
    assert bv.south == south
    assert bv.north.is_zero() and bv.east.is_zero()


def test_extension_independence():
    spec = mk_spec(F(-1, 3), {(2,): Poly.var(1)})
    base = proca_solve_form(spec, "product").west_series()
    # shift the bulk extension by sigma * B and redo the product by hand
    from tractorcalc.forms import mult_sigma
    rng = random.Random(5)
    B = random_form(rng, bulk_model(5), 1, spec.w0 + 1 - 1 + 1)
    A = extend(spec.data, 5) + mult_sigma(
        WeightedForm(B.model, B.degree, spec.w0 + spec.k - 1, B.comps, B.offset))
    n, w0, k = F(4), spec.w0, spec.k
    for j in range(spec.order, 0, -1):
        cj = (w0 + k - j) * (n + w0 - k - j)
        A = (i_tilde(e_tilde(A)) - A.scale(cj)).scale(F(1) / (j * (n + 2 * w0 - j)))
    A = i_tilde(e_tilde(A)).scale(F(1) / spec.mass2)
    shifted = q_west(A.truncate_r(spec.order + 1), w0)
    for i, C in enumerate(base):
        got = shifted.west.r_coefficient(i)
        want = WeightedForm(C.model, C.degree, got.weight, C.comps, C.offset)
        assert (got.comps == C.comps)


def test_product_gates():
    with pytest.raises(ExcludedWeight):
        proca_solve_form(mk_spec(F(-1), {(1,): Poly.one}), "product")  # w0=-k
    # h0 integer >= 2: order gate
    spec = mk_spec(F(-1), {(1, 2): Poly.var(1)}, k=2, order=5)
    assert spec.regime == "log"
    with pytest.raises(ExcludedWeight):
        proca_solve_form(spec, "product")
    spec2 = mk_spec(F(-1), {(1, 2): Poly.var(1)}, k=2, order=1)
    sol = proca_solve_form(spec2, "product")   # order <= h0-2 = 1 is fine
    assert len(sol.coeffs) == 2


def test_log_regime_even_h0_has_no_log():
    spec = mk_spec(F(1, 2), {(2,): Poly.var(1) ** 2}, order=6)
    assert spec.regime == "log" and spec.h0 == 6
    sol = proca_solve(spec)
    assert sol.log_coeffs is None
    rep = residual_orders(sol)
    assert rep.y_order is None or rep.y_order >= 6
    assert rep.int_I_order is None and rep.int_X_order is None


def test_true_form_log_normalization():
    data = WeightedForm(B4, 1, 0, {(1,): Poly.var(2) ** 2})
    spec = ProcaProblemSpec(5, 1, F(-1), data, order=5)
    assert spec.regime == "trueForm"
    sol = proca_solve(spec)
    assert sol.log_coeffs is not None
    # first log coefficient = -1/2 y^(h0-1) q_W(ext data) along the boundary
    y2 = robin_y(robin_y(q_west(extend(data, 5), F(-1))))
    expect = boundary_restrict(y2).scale(F(-1, 2))
    got = boundary_restrict(sol.log_coeffs[0])
    assert (got.west - expect.west).is_zero()
    assert (got.south - expect.south).is_zero()
    # the normalization sets the regular sigma^(h0-1) coefficient's west slot
    # free part to zero only when untouched by the cross terms; check the
    # residuals instead
    rep = residual_orders(sol)
    assert rep.int_I_order is None and rep.hat_D_star_order is None
    assert rep.int_X_order is None
    assert rep.y_order is None or rep.y_order >= 5


def test_dual_true_form():
    A_S = WeightedForm(B4, 1, -2, {(2,): Poly.var(1)})
    assert codiff(A_S).is_zero()
    spec = ProcaProblemSpec(5, 1, F(-3), (A_S, None), order=5)
    assert spec.regime == "dualTrueForm"
    sol = proca_solve(spec)
    rep = residual_orders(sol)
    assert rep.int_I_order is None and rep.int_X_order is None
    assert rep.hat_D_star_order is None
    assert rep.y_order is None or rep.y_order >= 5
    bv = boundary_value(sol)
    assert bv.west == A_S and bv.south.is_zero()
    # oracle backend agrees
    so = proca_solve(spec, backend="oracle")
    assert all((a - b).is_zero() for a, b in zip(sol.coeffs, so.coeffs))
    # non-coclosed data rejected (through the delta-potential constructor)
    bad = WeightedForm(B4, 1, -2, {(2,): Poly.var(2)})
    with pytest.raises(ValueError):
        proca_solve(ProcaProblemSpec(5, 1, F(-3), (bad, None), order=3))


def test_delta_potential():
    rng = random.Random(6)
    for k in (1, 2):
        for _ in range(3):
            B = random_form(rng, B4, k + 1, F(2))
            A = codiff(B)       # coclosed by construction
            pot = delta_potential(A)
            assert (codiff(pot) - A).is_zero()


def test_scale_duality_and_round_trip():
    d, k = 5, 1
    w0 = F(-1, 3)
    wbar = -w0 - 4
    h0 = F(d) + 2 * w0
    bm = B4
    data = WeightedForm(bm, k, wbar + k, {(2,): Poly.var(1) * Poly.var(3)})
    spec = ProcaProblemSpec(d, k, wbar, data, order=5)
    sol = proca_solve(spec)
    dual = scale_duality(sol)
    assert dual.alpha == h0 - 1
    rep = residual_orders(dual)
    assert rep.y_order is None or rep.y_order >= 5 + h0 - 1
    assert rep.int_I_order is None and rep.int_X_order is None
    assert rep.hat_D_star_order is None
    back = inverse_duality(dual)
    for a, b in zip(back.coeffs[:6], sol.coeffs[:6]):
        assert (a - b).is_zero()


def test_second_kind_regime():
    d, k, w0 = 5, 1, F(-1, 3)
    wbar = -w0 - 4
    data = WeightedForm(B4, k, wbar + k, {(1,): Poly.var(2)})
    spec = ProcaProblemSpec(d, k, w0, data, order=4, regime="secondKind")
    sol = proca_solve(spec)
    assert sol.alpha == F(d) + 2 * w0 - 1
    rep = residual_orders(sol)
    assert rep.int_I_order is None and rep.int_X_order is None
    # auto-detection from dual-weight data
    spec2 = ProcaProblemSpec(d, k, w0, data, order=4)
    assert spec2.regime == "secondKind"


def test_residual_corruption_detection():
    spec = mk_spec(F(-1, 3), {(2,): Poly.var(1) ** 2})
    sol = proca_solve(spec)
    C = sol.coeffs[2]
    bump = TractorForm(
        C.model, C.k, C.w,
        west=WeightedForm(C.model, C.k, C.w + C.k, {(1,): Poly.one}))
    sol.coeffs[2] = C + bump
    rep = residual_orders(sol)
    assert rep.y_order is not None and rep.y_order <= 2


def test_solution_assembly_round_trip():
    spec = mk_spec(F(2, 7), {(2,): Poly.var(1) ** 2})
    sol = proca_solve(spec)
    T = sol.assemble()
    from tractorcalc.solver import disassemble
    again = disassemble(T, spec.d, spec.k, spec.w0, 0, spec.order, False)
    for a, b in zip(sol.coeffs, again.coeffs):
        assert (a - b).is_zero()

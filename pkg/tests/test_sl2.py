import random
from fractions import Fraction as F

import pytest

from tractorcalc.forms import ExcludedWeight
from tractorcalc.sl2 import (
    HPoly, NOSeries, bessel_coefficients, casimir_pochhammer_sum,
    casimir_products, frobenius_pair, frobenius_residual,
    log_solution_operator, normal_order, series_solutions, apply_noseries,
)


def brute_normal_order(word):
    """Rewriting with only the base relations [h,x], [h,y], [x,y]."""
    terms = {tuple(word): F(1)}
    while True:
        new = {}
        changed = False
        for t, c in terms.items():
            t = list(t)
            idx = None
            for i in range(len(t) - 1):
                if (t[i], t[i + 1]) in (("y", "x"), ("h", "x"), ("h", "y")):
                    idx = i
                    break
            if idx is None:
                key = tuple(t)
                new[key] = new.get(key, F(0)) + c
                continue
            changed = True
            a, b = t[idx], t[idx + 1]
            if (a, b) == ("y", "x"):
                rules = [(t[:idx] + ["x", "y"] + t[idx + 2:], F(1)),
                         (t[:idx] + ["h"] + t[idx + 2:], F(-1))]
            elif (a, b) == ("h", "x"):
                rules = [(t[:idx] + ["x", "h"] + t[idx + 2:], F(1)),
                         (t[:idx] + ["x"] + t[idx + 2:], F(2))]
            else:
                rules = [(t[:idx] + ["y", "h"] + t[idx + 2:], F(1)),
                         (t[:idx] + ["y"] + t[idx + 2:], F(-2))]
            for nt, factor in rules:
                key = tuple(nt)
                new[key] = new.get(key, F(0)) + c * factor
        terms = {k: v for k, v in new.items() if v != 0}
        if not changed:
            break
    out = NOSeries.zero()
    for t, c in terms.items():
        a, b, m = t.count("x"), t.count("y"), t.count("h")
        p = HPoly.const(c)
        for _ in range(m):
            p = p * HPoly.h()
        out = out + NOSeries({(a, b): p})
    return out


def test_normal_order_base_relations():
    assert normal_order(["y", "x"]) == NOSeries(
        {(1, 1): 1, (0, 0): HPoly({1: -1})})
    # y x^2 = x^2 y - 2 x (h+1)
    assert normal_order(["y", "x", "x"]) == NOSeries(
        {(2, 1): 1, (1, 0): HPoly({1: -2, 0: -2})})


@pytest.mark.parametrize("word", [
    ["y", "x", "y", "x"], ["y", "y", "x", "x"], ["x", "y", "y", "x", "y"],
    ["h", "y", "x", "h"], ["y", "x", "x", "y", "y"],
])
def test_normal_order_vs_bruteforce(word):
    assert normal_order(word) == brute_normal_order(word)


def test_fractional_prefactor():
    s = normal_order([("x^", F(7, 3)), "y"])
    assert s.prefactor == F(7, 3)
    assert s.terms == {(0, 1): HPoly.const(1)}
    with pytest.raises(ExcludedWeight):
        normal_order(["y", ("x^", F(1, 2))])
    with pytest.raises(ExcludedWeight):
        normal_order([("x^", F(1, 2)), ("x^", F(1, 3))])
    # integer powers are ordinary letters anywhere
    assert normal_order(["y", ("x^", 2)]) == normal_order(["y", "x", "x"])


def test_casimir_products_examples():
    assert casimir_products(0) == NOSeries.identity()
    assert casimir_products(1) == NOSeries({(1, 1): 1, (0, 0): HPoly({1: 1, 0: -2})})
    c2 = casimir_products(2)
    assert c2.format() == "x^2y^2 + 2xy(h-3) + 2(h-2)(h-3)"
    # l=2 expansion equals normal ordering of (xy + (h-2))(xy + 2(h-3))
    direct = casimir_products(1) * NOSeries(
        {(1, 1): 1, (0, 0): HPoly({1: 2, 0: -6})})
    assert c2 == direct


def test_claim_yleft_xright():
    for l in range(7):
        assert casimir_products(l) == casimir_pochhammer_sum(l)
    y = NOSeries.word(0, 1)
    x = NOSeries.word(1, 0)
    for l in range(1, 7):
        assert y * casimir_products(l) == NOSeries.word(l, l + 1)
        assert casimir_products(l) * x == NOSeries.word(l + 1, l)


def test_bessel_examples():
    assert bessel_coefficients(7, 2) == [F(1), F(1, 5), F(1, 40)]
    assert series_solutions("bessel", F(5, 2), 3) == [
        F(1), F(2), F(-2), F(4, 9)]


def test_first_second_gates():
    s = series_solutions("first", F(13, 3), 1)
    assert s == casimir_products(1).scale(F(3, 7))
    with pytest.raises(ExcludedWeight):
        series_solutions("first", 3, 4)
    t = series_solutions("second", F(13, 3), 1)
    assert t.prefactor == F(10, 3)
    with pytest.raises(ExcludedWeight):
        series_solutions("second", -2, 5)


def test_frobenius_log_cases():
    pair = series_solutions("frobenius", 3, 8)
    assert any(b != 0 for b in pair.log_part)
    assert all(v == 0 for (_, _, v) in frobenius_residual(pair))
    generic = series_solutions("frobenius", F(13, 3), 8)
    assert generic.log_part == ()
    assert list(generic.regular) == bessel_coefficients(F(13, 3), 8)


def test_frobenius_random_h0():
    rng = random.Random(11)
    seen = 0
    while seen < 20:
        h0 = F(rng.randint(-40, 40), rng.choice([3, 5, 7]))
        if h0.denominator == 1:
            continue
        pair = frobenius_pair(h0, 8)
        assert all(v == 0 for (_, _, v) in frobenius_residual(pair))
        seen += 1
    for h0 in range(2, 9):
        pair = frobenius_pair(h0, 9)
        assert all(v == 0 for (_, _, v) in frobenius_residual(pair))


def test_log_operator_structure():
    op = log_solution_operator(3, 6)
    assert op.y_power == 2
    assert op.prefactor_exponent == 2
    assert op.scale == F(-1, 2)
    assert op.frobenius.log_part[2] == F(-1, 2)
    with pytest.raises(ExcludedWeight):
        log_solution_operator(F(5, 2), 6)


def test_apply_noseries_scalar_representation():
    # represent x as multiplication by t, y as d/dt on monomials c*t^m with
    # weight w = m: then [x, y] = h needs h = d + 2w ... use the canonical
    # model: sections are pairs (value, weight); x raises weight, y lowers.
    d = 5

    class S:
        def __init__(self, c, w):
            self.c, self.w = F(c), F(w)

    def xact(s):
        return S(s.c, s.w + 1)

    def yact(s):
        # choose y s = (d + 2w - 2) s at weight w-1 (a valid sl2 rep on a line
        # is not needed; apply_noseries only composes the callbacks)
        return S(s.c * (d + 2 * s.w - 2), s.w - 1)

    ident = NOSeries.identity()
    s = S(3, F(1, 2))
    out = apply_noseries(ident, s, xact, yact, d + 2 * s.w,
                         add=lambda a, b: S(a.c + b.c, a.w),
                         scale=lambda a, c: S(a.c * c, a.w))
    assert out.c == 3
    hseries = NOSeries({(0, 0): HPoly.h()})
    out = apply_noseries(hseries, s, xact, yact, d + 2 * s.w,
                         add=lambda a, b: S(a.c + b.c, a.w),
                         scale=lambda a, c: S(a.c * c, a.w))
    assert out.c == 3 * (d + 2 * s.w)

import json
import random
from fractions import Fraction as F
from pathlib import Path

import pytest

from tractorcalc.boundary import (
    BoundaryOperatorProbeSet, detour_L, detour_gauge_Q, extension_independent,
    factor_check, full_obstruction, gauge_G, gauge_q_ratio, q_operator,
)
from tractorcalc.forms import (
    ExcludedWeight, Model, WeightedForm, bulk_model, codiff, exterior_d,
    random_form,
)
from tractorcalc.poly import Poly

FIXTURES = Path(__file__).parent / "fixtures"
B4 = Model(4, False)


def probe(comps, weight=0, k=1):
    return WeightedForm(B4, k, weight, comps)


def maxwell_multiple():
    with open(FIXTURES / "boundary_constants_n4_k1.json") as fh:
        return F(json.load(fh)["detour_multiple_of_maxwell"])


def test_detour_annihilates_closed():
    assert detour_L(4, 1, 1, probe({(1,): Poly.one})).is_zero()
    f = WeightedForm(B4, 0, 0, {(): Poly.var(1) * Poly.var(2) ** 2})
    assert detour_L(4, 1, 1, exterior_d(f)).is_zero()


def test_detour_is_maxwell_multiple():
    c = maxwell_multiple()
    ps = BoundaryOperatorProbeSet(4, 1, 1)
    probes = ps.probes(max_degree=3)
    assert len(probes) >= 10
    for A in probes[:20]:
        LA = detour_L(4, 1, 1, A)
        assert (LA - codiff(exterior_d(A)).scale(c)).is_zero()
        assert codiff(LA).is_zero()


def test_detour_weight_bookkeeping():
    A = probe({(1,): Poly.var(2) ** 2})
    LA = detour_L(4, 1, 1, A)
    assert LA.degree == 1 and LA.weight == F(1 - 1) - 2
    with pytest.raises(ExcludedWeight):
        detour_L(5, 1, 1, random_form(random.Random(0), Model(5, False), 1, F(1, 2)))


def test_factorization():
    for A in (probe({(1,): Poly.var(2) ** 2}),
              probe({(2,): Poly.var(1) * Poly.var(3)}),
              probe({(3,): Poly.var(3) ** 3}),
              probe({(4,): Poly.var(1) * Poly.var(2) * Poly.var(4)})):
        assert factor_check(4, 1, A)


def test_gauge_companion_and_ratio():
    probes = [probe({(1,): Poly.var(1) ** 3}),
              probe({(1,): Poly.var(1) ** 2 * Poly.var(2) ** 2}),
              probe({(2,): Poly.var(2) ** 3}),
              probe({(1,): Poly.var(1) * Poly.var(2) ** 2}),
              probe({(3,): Poly.var(3) ** 2 * Poly.var(1)})]
    with open(FIXTURES / "boundary_constants_n4_k1.json") as fh:
        expected = F(json.load(fh)["deltaQ_over_G"])
    assert gauge_q_ratio(4, 1, probes) == expected
    # the obstruction restriction carries L and G in its west/south slots
    ob = full_obstruction(4, 1, probes[0])
    assert ob.north.is_zero() and ob.east.is_zero()
    assert (ob.west - detour_L(4, 1, 1, probes[0])).is_zero()
    assert (ob.south - gauge_G(4, 1, probes[0])).is_zero()


def test_extension_independence():
    rng = random.Random(3)
    A = probe({(2,): Poly.var(2) ** 2 * Poly.var(1)})
    for _ in range(3):
        B = random_form(rng, bulk_model(5), 1, A.weight - 1)
        assert extension_independent(4, 1, 1, A, B)


def test_selector_surface_and_gates():
    A = probe({(1,): Poly.var(2) ** 2})
    out = detour_gauge_Q("L", 4, 1, 1, A)
    assert out == detour_L(4, 1, 1, A)
    assert detour_gauge_Q("factorCheck", 4, 1, 1, A) is True
    with pytest.raises(ExcludedWeight):
        q_operator(5, 1, random_form(random.Random(1), Model(5, False), 1, 0))
    with pytest.raises(ExcludedWeight):
        gauge_G(4, 2, random_form(random.Random(2), B4, 2, 0))  # k > n/2 - 1


def test_probe_fixture_versioned():
    with open(FIXTURES / "probes_n4_k1.json") as fh:
        payload = json.load(fh)
    assert payload["version"] == 1
    assert len(payload["probes"]) >= 10
    from tractorcalc.serialize import decode_form
    ps = BoundaryOperatorProbeSet(payload["n"], payload["k"], payload["l"])
    regen = ps.probes(max_degree=3)
    assert len(regen) == len(payload["probes"])
    for enc, A in zip(payload["probes"], regen):
        assert decode_form(enc) == A

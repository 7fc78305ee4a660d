"""Canonical JSON encodings.

Rationals are "p/q" strings everywhere; no floating point.  Component keys
are the index sets joined by commas in ascending index order ("r" < "x1" <
"x2" < ...), e.g. "r,x1".  All maps are emitted with sorted keys so byte
identity across runs is a property of the data alone.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .forms import Model, WeightedForm, bulk_model
from .poly import Poly, RVAR, frac_str, parse_frac
from .solver import (INF, ProcaProblemSpec, ResidualReport, SeriesSolution)
from .tractor import SLOTS, TractorForm


def _idx_key(idx) -> str:
    return ",".join("r" if i == RVAR else "x%d" % i for i in idx)


def _idx_from_key(key: str):
    if not key:
        return ()
    out = []
    for name in key.split(","):
        out.append(RVAR if name == "r" else int(name[1:]))
    return tuple(out)


def encode_form(A: WeightedForm) -> dict:
    return {
        "degree": A.degree,
        "weight": frac_str(A.weight),
        "offset": frac_str(A.offset),
        "dim": A.model.dim,
        "radial": A.model.radial,
        "components": {_idx_key(i): p.format() for i, p in sorted(A.comps.items())},
    }


def decode_form(obj: dict) -> WeightedForm:
    model = Model(int(obj["dim"]), bool(obj.get("radial", False)))
    comps = {_idx_from_key(k): Poly.parse(v)
             for k, v in obj.get("components", {}).items()}
    return WeightedForm(model, int(obj["degree"]), parse_frac(obj["weight"]),
                        comps, parse_frac(obj.get("offset", "0")))


def encode_tractor(T: TractorForm) -> dict:
    return {
        "k": T.k,
        "w": frac_str(T.w),
        "scale": T.scale_tag,
        "slots": {s: encode_form(getattr(T, s)) for s in SLOTS},
    }


def decode_tractor(obj: dict) -> TractorForm:
    slots = {s: decode_form(obj["slots"][s]) for s in SLOTS}
    model = slots["west"].model
    return TractorForm(model, int(obj["k"]), parse_frac(obj["w"]),
                       slots["north"], slots["west"], slots["east"],
                       slots["south"], scale_tag=obj.get("scale", "flat-tau"))


def encode_problem(spec: ProcaProblemSpec) -> dict:
    if isinstance(spec.data, tuple):
        A, phi = spec.data
        data = {"A": encode_form(A)}
        if phi is not None:
            data["phi"] = encode_form(phi)
    else:
        data = encode_form(spec.data)
    return {
        "d": spec.d, "k": spec.k, "w0": frac_str(spec.w0),
        "order": spec.order, "regime": spec.regime, "data": data,
    }


def decode_problem(obj: dict) -> ProcaProblemSpec:
    data = obj["data"]
    if "A" in data and "components" not in data:
        A = decode_form(data["A"])
        phi = decode_form(data["phi"]) if "phi" in data else None
        payload = (A, phi)
    else:
        payload = decode_form(data)
    return ProcaProblemSpec(
        int(obj["d"]), int(obj["k"]), parse_frac(obj["w0"]), payload,
        int(obj.get("order", 6)), obj.get("regime", "auto"))


def encode_solution(sol: SeriesSolution) -> dict:
    out = {
        "d": sol.d, "k": sol.k, "w0": frac_str(sol.w0),
        "alpha": frac_str(sol.alpha),
        "coeffs": [encode_tractor(C) for C in sol.coeffs],
        "achievedOrder": sol.achieved_order if sol.achieved_order is not None else INF,
    }
    out["logCoeffs"] = ([encode_tractor(C) for C in sol.log_coeffs]
                        if sol.log_coeffs else None)
    return out


def decode_solution(obj: dict) -> SeriesSolution:
    logs = obj.get("logCoeffs")
    return SeriesSolution(
        int(obj["d"]), int(obj["k"]), parse_frac(obj["w0"]),
        parse_frac(obj["alpha"]),
        [decode_tractor(C) for C in obj["coeffs"]],
        [decode_tractor(C) for C in logs] if logs else None,
        obj.get("achievedOrder"))


def encode_report(rep: ResidualReport) -> dict:
    return rep.as_dict()


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"

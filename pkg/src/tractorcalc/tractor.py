"""Tractor-form bundle and the full operator library on the flat model.

A tractor k-form of weight w splits, in the scale tau, into four weighted
forms (the north/west/east/south slots)

    N: E^(k-1)[w+k]   W: E^k[w+k]   E: E^(k-2)[w+k-2]   S: E^(k-1)[w+k-2],

and every displayed operator becomes a 4x4 matrix of flat exterior-calculus
entries.  On the flat model the Schouten tensor, J, the mean curvature and
rho all vanish, which is what the matrices below assume; degree-operator
entries are evaluated on the slot they act on.

The same matrices instantiated on the boundary model (dimension n, no r)
give the intrinsic boundary operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import random

from .forms import (
    ExcludedWeight, Model, WeightedForm, bulk_model, codiff, e_tilde,
    exterior_d, extend, form_laplacian, hodge_star, hook_normal, hook_var,
    i_tilde, lie_normal, mult_sigma, random_form, restrict, wedge,
    wedge_normal, wedge_var,
)
from .poly import Poly, frac_str

SLOTS = ("north", "west", "east", "south")


@dataclass(frozen=True)
class LogDensity:
    """Bookkeeping record for the log density of a true scale.

    In its own scale the component vanishes identically, but the weight
    operator still sees it: [h, log tau] = 2 * weight_action_value.  The
    flat-scale dual tractor operators below take this as provenance; they
    never differentiate a log density directly.
    """

    base_scale: str = "flat-tau"
    weight: int = 1
    component_in_own_scale: Fraction = Fraction(0)
    weight_action_value: Fraction = Fraction(1)

    def weight_commutator(self, section: "TractorForm") -> "TractorForm":
        """[h, log tau] applied to a section: 2 * weight_action_value * id."""
        return section.scale(2 * self.weight_action_value)


class TractorForm:
    """Four weighted-form slots with strict degree/weight bookkeeping."""

    __slots__ = ("model", "k", "w", "north", "west", "east", "south", "scale_tag")

    def __init__(self, model: Model, k: int, w, north=None, west=None,
                 east=None, south=None, scale_tag: str = "flat-tau"):
        w = Fraction(w)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "scale_tag", scale_tag)
        specs = {
            "north": (k - 1, w + k),
            "west": (k, w + k),
            "east": (k - 2, w + k - 2),
            "south": (k - 1, w + k - 2),
        }
        values = {"north": north, "west": west, "east": east, "south": south}
        for name in SLOTS:
            deg, wt = specs[name]
            val = values[name]
            if val is None:
                val = WeightedForm.zero(model, deg, wt)
            else:
                if val.model != model:
                    raise ValueError("slot %s model mismatch" % name)
                if val.degree != deg or val.weight != wt:
                    raise ValueError(
                        "slot %s metadata (%d, %s) != expected (%d, %s)"
                        % (name, val.degree, frac_str(val.weight), deg, frac_str(wt)))
            object.__setattr__(self, name, val)

    # -- helpers ---------------------------------------------------------
    def slot_spec(self, name: str):
        k, w = self.k, self.w
        return {
            "north": (k - 1, w + k),
            "west": (k, w + k),
            "east": (k - 2, w + k - 2),
            "south": (k - 1, w + k - 2),
        }[name]

    def slots(self):
        return {name: getattr(self, name) for name in SLOTS}

    def is_zero(self) -> bool:
        return all(getattr(self, s).is_zero() for s in SLOTS)

    def __eq__(self, other):
        if not isinstance(other, TractorForm):
            return NotImplemented
        return (
            self.model == other.model and self.k == other.k
            and self.w == other.w and self.scale_tag == other.scale_tag
            and all(getattr(self, s) == getattr(other, s) for s in SLOTS)
        )

    def __add__(self, other: "TractorForm") -> "TractorForm":
        if (self.model, self.k, self.w) != (other.model, other.k, other.w):
            raise ValueError("tractor metadata mismatch")
        if self.scale_tag != other.scale_tag:
            raise ValueError("scale tag mismatch: %s vs %s"
                             % (self.scale_tag, other.scale_tag))
        return TractorForm(
            self.model, self.k, self.w,
            *(getattr(self, s) + getattr(other, s) for s in SLOTS),
            scale_tag=self.scale_tag)

    def __neg__(self):
        return TractorForm(
            self.model, self.k, self.w,
            *(-getattr(self, s) for s in SLOTS), scale_tag=self.scale_tag)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TractorForm":
        return TractorForm(
            self.model, self.k, self.w,
            *(getattr(self, s).scale(c) for s in SLOTS), scale_tag=self.scale_tag)

    def __repr__(self):
        parts = []
        for s in SLOTS:
            f = getattr(self, s)
            if not f.is_zero():
                parts.append("%s=%r" % (s[0].upper(), f))
        return "TractorForm(k=%d w=%s %s)" % (self.k, frac_str(self.w), " ".join(parts) or "0")

    def vanishing_order(self):
        orders = [getattr(self, s).vanishing_order() for s in SLOTS]
        orders = [o for o in orders if o is not None]
        return min(orders) if orders else None

    def max_log_power(self) -> int:
        return max(getattr(self, s).max_log_power() for s in SLOTS)

    def truncate_r(self, order: int) -> "TractorForm":
        return self._map(lambda f: f.truncate_r(order))

    def _map(self, fn) -> "TractorForm":
        return TractorForm(
            self.model, self.k, self.w,
            *(fn(getattr(self, s)) for s in SLOTS), scale_tag=self.scale_tag)

    @staticmethod
    def zero(model: Model, k: int, w, scale_tag: str = "flat-tau") -> "TractorForm":
        return TractorForm(model, k, w, scale_tag=scale_tag)


def _build(model, k, w, north=None, west=None, east=None, south=None, scale_tag="flat-tau"):
    """Build a tractor form, reassigning exact slot metadata.

    Operator rows produce forms whose polynomial data is correct but whose
    (degree, weight) labels come from the inputs; this constructor stamps
    the nominal labels of the target (k, w), checking degree consistency.
    """
    w = Fraction(w)
    spec = {
        "north": (k - 1, w + k),
        "west": (k, w + k),
        "east": (k - 2, w + k - 2),
        "south": (k - 1, w + k - 2),
    }
    out = {}
    for name, val in (("north", north), ("west", west), ("east", east), ("south", south)):
        deg, wt = spec[name]
        if val is None or val.is_zero():
            out[name] = WeightedForm.zero(model, deg, wt)
        else:
            if val.degree != deg:
                raise ValueError("slot %s degree %d != %d" % (name, val.degree, deg))
            if val.weight != wt:
                raise ValueError(
                    "slot %s weight %s != %s (k=%d w=%s)"
                    % (name, frac_str(val.weight), frac_str(wt), k, frac_str(w)))
            out[name] = val
    return TractorForm(model, k, w, out["north"], out["west"], out["east"],
                       out["south"], scale_tag=scale_tag)


def _dim(A: TractorForm) -> Fraction:
    return Fraction(A.model.dim)


# ---------------------------------------------------------------------------
# algebraic multiplications
# ---------------------------------------------------------------------------

def ext_X(A: TractorForm) -> TractorForm:
    """Exterior canonical tractor: (k,w) -> (k+1, w+1)."""
    return _build(A.model, A.k + 1, A.w + 1,
                  east=-A.north, south=A.west, scale_tag=A.scale_tag)


def int_X(A: TractorForm) -> TractorForm:
    """Interior canonical tractor: (k,w) -> (k-1, w+1)."""
    return _build(A.model, A.k - 1, A.w + 1,
                  west=A.north, south=A.east, scale_tag=A.scale_tag)


def ext_I(A: TractorForm) -> TractorForm:
    """Exterior scale tractor (rho, n, sigma) = (0, dr, r): (k,w) -> (k+1, w)."""
    return _build(
        A.model, A.k + 1, A.w,
        north=-wedge_normal(A.north) + mult_sigma(A.west),
        west=wedge_normal(A.west),
        east=wedge_normal(A.east) + mult_sigma(A.south),
        south=-wedge_normal(A.south),
        scale_tag=A.scale_tag)


def int_I(A: TractorForm) -> TractorForm:
    """Interior scale tractor: (k,w) -> (k-1, w)."""
    return _build(
        A.model, A.k - 1, A.w,
        north=-hook_normal(A.north) - mult_sigma(A.east),
        west=hook_normal(A.west) + mult_sigma(A.south),
        east=hook_normal(A.east),
        south=-hook_normal(A.south),
        scale_tag=A.scale_tag)


def ext_Y(A: TractorForm) -> TractorForm:
    """Exterior multiplication by the dual scale tractor of the flat scale,
    component pattern (sigma-slot, n-slot, rho-slot) = (1, 0, 0):
    (k,w) -> (k+1, w-1)."""
    return _build(A.model, A.k + 1, A.w - 1,
                  north=A.west, east=A.south, scale_tag=A.scale_tag)


def int_Y(A: TractorForm) -> TractorForm:
    """Interior multiplication by the dual scale tractor: (k,w) -> (k-1, w-1)."""
    return _build(A.model, A.k - 1, A.w - 1,
                  north=-A.east, west=A.south, scale_tag=A.scale_tag)


def weight_h(A: TractorForm) -> TractorForm:
    return A.scale(_dim(A) + 2 * A.w)


def tractor_degree(A: TractorForm) -> TractorForm:
    return A.scale(A.k)


def sigma_mult(A: TractorForm, power=1) -> TractorForm:
    """x = sigma multiplication; supports fractional powers via offsets."""
    power = Fraction(power)
    return TractorForm(
        A.model, A.k, A.w + power,
        *(mult_sigma(getattr(A, s), power) for s in SLOTS),
        scale_tag=A.scale_tag)


# ---------------------------------------------------------------------------
# exterior / interior tractor D-operators and derived operators
# ---------------------------------------------------------------------------

def ext_D(A: TractorForm) -> TractorForm:
    """Exterior tractor D-operator (flat data): (k,w) -> (k+1, w-1)."""
    d, w, k = _dim(A), A.w, A.k
    h = d + 2 * w
    return _build(
        A.model, A.k + 1, A.w - 1,
        north=exterior_d(A.north).scale(-(h - 2)) + A.west.scale((w + k) * (h - 2)),
        west=exterior_d(A.west).scale(h - 2),
        east=form_laplacian(A.north) - codiff(A.west).scale(2)
             + exterior_d(A.east).scale(h) + A.south.scale((w + k - 2) * h),
        south=-form_laplacian(A.west) - exterior_d(A.south).scale(h),
        scale_tag=A.scale_tag)


def int_D(A: TractorForm) -> TractorForm:
    """Interior tractor D-operator (flat data): (k,w) -> (k-1, w-1)."""
    d, w, k = _dim(A), A.w, A.k
    h = d + 2 * w
    return _build(
        A.model, A.k - 1, A.w - 1,
        north=codiff(A.north).scale(-(h - 2)) + A.east.scale(-(h - 2) * (d + w - k + 2)),
        west=-form_laplacian(A.north) + codiff(A.west).scale(h)
             - exterior_d(A.east).scale(2) + A.south.scale(h * (d + w - k)),
        east=codiff(A.east).scale(h - 2),
        south=-form_laplacian(A.east) - codiff(A.south).scale(h),
        scale_tag=A.scale_tag)


def hat_D(A: TractorForm) -> TractorForm:
    """D-hat = ext_D / h (input weight); kernel branch at w = -d/2."""
    d = _dim(A)
    h = d + 2 * A.w
    if h != 0:
        return ext_D(A).scale(Fraction(1) / h)
    if not (A.north.is_zero() and A.west.is_zero()):
        raise ExcludedWeight(
            "hat_D at w = -d/2 is defined on ker X (north = west = 0) only")
    k, w = A.k, A.w
    B, phi = A.east, A.south
    return _build(
        A.model, k + 1, w - 1,
        east=exterior_d(B) + phi.scale(Fraction(k) - d / 2 - 2),
        south=-exterior_d(phi),
        scale_tag=A.scale_tag)


def hat_D_star(A: TractorForm) -> TractorForm:
    """D-hat-star = int_D / h (input weight); kernel branch at w = -d/2."""
    d = _dim(A)
    h = d + 2 * A.w
    if h != 0:
        return int_D(A).scale(Fraction(1) / h)
    if not (A.north.is_zero() and A.east.is_zero()):
        raise ExcludedWeight(
            "hat_D_star at w = -d/2 is defined on ker X* (north = east = 0) only")
    k = A.k
    Af, phi = A.west, A.south
    return _build(
        A.model, k - 1, A.w - 1,
        west=codiff(Af) - phi.scale(Fraction(k) - d / 2),
        south=-codiff(phi),
        scale_tag=A.scale_tag)


def tilde_D(A: TractorForm) -> TractorForm:
    """D-tilde = (1/h) ext_D (output weight); no cokernel branch here."""
    d = _dim(A)
    h_out = d + 2 * (A.w - 1)
    if h_out == 0:
        raise ExcludedWeight(
            "tilde_D at w = 1 - d/2 needs the cokernel branch; "
            "use double_D for weight-safe compositions")
    return ext_D(A).scale(Fraction(1) / h_out)


def tilde_D_star(A: TractorForm) -> TractorForm:
    d = _dim(A)
    h_out = d + 2 * (A.w - 1)
    if h_out == 0:
        raise ExcludedWeight(
            "tilde_D_star at w = 1 - d/2 needs the cokernel branch; "
            "use double_D_star for weight-safe compositions")
    return int_D(A).scale(Fraction(1) / h_out)


def double_D(A: TractorForm) -> TractorForm:
    """Exterior double D-operator hat_D . ext_X: (k,w) -> (k+2,w), all weights."""
    w, k = A.w, A.k
    return _build(
        A.model, k + 2, w,
        east=-exterior_d(A.north) + A.west.scale(w + k),
        south=-exterior_d(A.west),
        scale_tag=A.scale_tag)


def double_D_star(A: TractorForm) -> TractorForm:
    """Interior double D-operator hat_D_star . int_X: (k,w) -> (k-2,w)."""
    d, w, k = _dim(A), A.w, A.k
    return _build(
        A.model, k - 2, w,
        west=codiff(A.north) + A.east.scale(d + w - k + 2),
        south=-codiff(A.east),
        scale_tag=A.scale_tag)


def triple_D(A: TractorForm) -> TractorForm:
    """Holographic exterior triple D: hat_D . ext_X . ext_I, (k,w)->(k+3,w)."""
    return _build(
        A.model, A.k + 3, A.w,
        east=-wedge_normal(exterior_d(A.north)) + e_tilde(A.west),
        south=wedge_normal(exterior_d(A.west)),
        scale_tag=A.scale_tag)


def triple_D_star(A: TractorForm) -> TractorForm:
    """Holographic interior triple D: hat_D_star . int_X . int_I, (k,w)->(k-3,w).

    The south entry is iota(n) delta, fixed by composing the definition
    (both operator orders agree); delta iota(n) would flip its sign.
    """
    return _build(
        A.model, A.k - 3, A.w,
        west=-codiff(hook_normal(A.north)) + i_tilde(A.east),
        south=hook_normal(codiff(A.east)),
        scale_tag=A.scale_tag)


THOMAS_OPS = {}


# ---------------------------------------------------------------------------
# Laplace-Robin operator and friends
# ---------------------------------------------------------------------------

def robin_op(A: TractorForm) -> TractorForm:
    """Conformal Robin-type operator delta_R (flat data): (k,w) -> (k,w-1)."""
    return _build(
        A.model, A.k, A.w - 1,
        north=lie_normal(A.north) - hook_normal(A.west) + wedge_normal(A.east),
        west=lie_normal(A.west) + wedge_normal(A.south),
        east=lie_normal(A.east) + hook_normal(A.south),
        south=lie_normal(A.south),
        scale_tag=A.scale_tag)


def yamabe_box(A: TractorForm) -> TractorForm:
    """Form Yamabe-type operator box_Y (flat data): (k,w) -> (k,w-2)."""
    d, k = _dim(A), A.k
    return _build(
        A.model, A.k, A.w - 2,
        north=form_laplacian(A.north) - codiff(A.west).scale(2)
              + exterior_d(A.east).scale(2) + A.south.scale(2 * (k - 1) - d),
        west=form_laplacian(A.west) + exterior_d(A.south).scale(2),
        east=form_laplacian(A.east) + codiff(A.south).scale(2),
        south=form_laplacian(A.south),
        scale_tag=A.scale_tag)


def robin_y(A: TractorForm) -> TractorForm:
    """Laplace-Robin operator y = -(d+2w-2) delta_R + sigma box_Y (flat)."""
    d = _dim(A)
    h = d + 2 * A.w
    return robin_op(A).scale(-(h - 2)) + sigma_mult(yamabe_box(A))


LAPLACE_ROBIN_OPS = {"robin": robin_op, "box_Y": yamabe_box, "y": robin_y}


# ---------------------------------------------------------------------------
# insertion operators
# ---------------------------------------------------------------------------

def q_coset(A: WeightedForm, w=None) -> TractorForm:
    """q: E^k[w+k] -> coker(X); the (0, A, 0, 0) representative."""
    k = A.degree
    w = A.weight - k if w is None else Fraction(w)
    if A.weight != w + k:
        raise ValueError("q data must have weight w+k")
    return _build(A.model, k, w, west=A)


def q_extract(A: TractorForm) -> WeightedForm:
    """q*: ker X* (north = east = 0) -> the west slot."""
    if not (A.north.is_zero() and A.east.is_zero()):
        raise ValueError("q* input must have vanishing north and east slots")
    return A.west


def q_south(A: WeightedForm, w) -> TractorForm:
    w = Fraction(w)
    k = A.degree + 1
    if A.weight != w + k - 2:
        raise ValueError("q_south data must have weight w+k-2")
    return _build(A.model, k, w, south=A)


def q_west(A: WeightedForm, w=None) -> TractorForm:
    """Western insertion at generic weight w != k-d."""
    k = A.degree
    w = A.weight - k if w is None else Fraction(w)
    if A.weight != w + k:
        raise ValueError("q_west data must have weight w+k")
    d = Fraction(A.model.dim)
    if d + w - k == 0:
        raise ExcludedWeight(
            "q_west at w = k-d needs a coclosed pair; use q_west_special")
    south = codiff(A).scale(Fraction(-1) / (d + w - k))
    return _build(A.model, k, w, west=A, south=south)


def q_west_special(A: WeightedForm, phi: WeightedForm) -> TractorForm:
    """Western insertion at w = k-d for a coclosed pair (A, phi)."""
    k = A.degree
    d = Fraction(A.model.dim)
    w = Fraction(k) - d
    if A.weight != w + k or phi.weight != w + k - 2 or phi.degree != k - 1:
        raise ValueError("q_west_special pair metadata mismatch")
    if not codiff(A).is_zero() or not codiff(phi).is_zero():
        raise ExcludedWeight("q_west_special needs a coclosed pair")
    return _build(A.model, k, w, west=A, south=phi)


def q_east(A: WeightedForm, w) -> TractorForm:
    w = Fraction(w)
    k = A.degree + 2
    if A.weight != w + k - 2:
        raise ValueError("q_east data must have weight w+k-2")
    if w + k - 2 == 0:
        raise ExcludedWeight("q_east pole at w = -k+2")
    south = exterior_d(A).scale(Fraction(-1) / (w + k - 2))
    return _build(A.model, k, w, east=A, south=south)


def q_north(A: WeightedForm, w) -> TractorForm:
    w = Fraction(w)
    k = A.degree + 1
    d = Fraction(A.model.dim)
    if A.weight != w + k:
        raise ValueError("q_north data must have weight w+k")
    for gate, label in ((d + 2 * w, "w = -d/2"), (w + k, "w = -k"),
                        (d + w - k + 2, "w = k-d-2")):
        if gate == 0:
            raise ExcludedWeight("q_north pole at %s" % label)
    west = exterior_d(A).scale(Fraction(1) / (w + k))
    east = codiff(A).scale(Fraction(-1) / (d + w - k + 2))
    south = (codiff(exterior_d(A)).scale(Fraction(1) / (w + k))
             - exterior_d(codiff(A)).scale(Fraction(1) / (d + w - k + 2))
             ).scale(Fraction(-1) / (d + 2 * w))
    return _build(A.model, k, w, north=A, west=west, east=east, south=south)


def q_north_tau(A: WeightedForm, w) -> TractorForm:
    """The tau-scale coset representative (A, 0, 0, 0)."""
    w = Fraction(w)
    k = A.degree + 1
    if A.weight != w + k:
        raise ValueError("q_north_tau data must have weight w+k")
    return _build(A.model, k, w, north=A)


# ---------------------------------------------------------------------------
# projectors
# ---------------------------------------------------------------------------

def proj_west(A: TractorForm) -> TractorForm:
    """Pi_W = double_D_star double_D / ((w+k)(d+w-k)); w not in {-k, k-d}."""
    d, w, k = _dim(A), A.w, A.k
    if w + k == 0:
        raise ExcludedWeight("proj_west pole at w = -k")
    if d + w - k == 0:
        raise ExcludedWeight("proj_west pole at w = k-d")
    return double_D_star(double_D(A)).scale(Fraction(1) / ((w + k) * (d + w - k)))


def proj_holo(A: TractorForm) -> TractorForm:
    """Pi = triple_D_star triple_D / ((w+k)(n+w-k)); w not in {-k, k-n}."""
    w, k = A.w, A.k
    n = _dim(A) - 1
    if w + k == 0:
        raise ExcludedWeight("proj_holo pole at w = -k")
    if n + w - k == 0:
        raise ExcludedWeight("proj_holo pole at w = k-n")
    return triple_D_star(triple_D(A)).scale(Fraction(1) / ((w + k) * (n + w - k)))


def proj_holo_tau(A: WeightedForm) -> TractorForm:
    """Pi-hat_tau on true forms: -(1/(n-2k)) D*_[3] ext_I ext_X q_N^tau."""
    k = A.degree
    if A.weight != 0:
        raise ValueError("proj_holo_tau expects a true form (weight 0)")
    n = Fraction(A.model.dim - 1)
    if n - 2 * k == 0:
        raise ExcludedWeight("proj_holo_tau pole at k = n/2")
    lifted = q_north_tau(A, Fraction(-k - 1))
    return triple_D_star(ext_I(ext_X(lifted))).scale(Fraction(-1) / (n - 2 * k))


# ---------------------------------------------------------------------------
# tangential operators
# ---------------------------------------------------------------------------

def tangential_D(A: TractorForm) -> TractorForm:
    """Delta^T = ext_D + ext_I y + X y^2 / ((h-1)(h-2)) with the output-h
    convention; Paneitz branch at w = 2 - d/2."""
    d, w = _dim(A), A.w
    h_out = d + 2 * (w - 1)
    if w == 2 - d / 2:
        ya = robin_y(A)
        return ext_D(A) + ext_I(ya) + (double_D(int_I(ya)) - int_I(double_D(ya))).scale(-1)
    if (h_out - 1) == 0 or (h_out - 2) == 0:
        raise ExcludedWeight(
            "tangential_D excluded at w in {3/2 - d/2, 2 - d/2}")
    y2 = robin_y(robin_y(A))
    return ext_D(A) + ext_I(robin_y(A)) \
        + ext_X(y2).scale(Fraction(1) / ((h_out - 1) * (h_out - 2)))


def tangential_D_star(A: TractorForm) -> TractorForm:
    """Starred tangential D (mirror of tangential_D)."""
    d, w = _dim(A), A.w
    h_out = d + 2 * (w - 1)
    if w == 2 - d / 2:
        ya = robin_y(A)
        return int_D(A) + int_I(ya) + (double_D_star(ext_I(ya)) - ext_I(double_D_star(ya))).scale(-1)
    if (h_out - 1) == 0 or (h_out - 2) == 0:
        raise ExcludedWeight(
            "tangential_D_star excluded at w in {3/2 - d/2, 2 - d/2}")
    y2 = robin_y(robin_y(A))
    return int_D(A) + int_I(robin_y(A)) \
        + int_X(y2).scale(Fraction(1) / ((h_out - 1) * (h_out - 2)))


def bar_D(A: TractorForm) -> TractorForm:
    """(h-1) tilde-D^T; equals -X y^2 at the boundary Yamabe weight 1-n/2."""
    d, w = _dim(A), A.w
    n = d - 1
    if w == 1 - Fraction(n) / 2:
        return -ext_X(robin_y(robin_y(A)))
    h_out = d + 2 * (w - 1)
    if h_out == 0:
        raise ExcludedWeight("bar_D pole at w = 1 - d/2")
    return tangential_D(A).scale(Fraction(h_out - 1) / h_out)


def bar_D_star(A: TractorForm) -> TractorForm:
    d, w = _dim(A), A.w
    n = d - 1
    if w == 1 - Fraction(n) / 2:
        return -int_X(robin_y(robin_y(A)))
    h_out = d + 2 * (w - 1)
    if h_out == 0:
        raise ExcludedWeight("bar_D_star pole at w = 1 - d/2")
    return tangential_D_star(A).scale(Fraction(h_out - 1) / h_out)


def tangential_double_D(A: TractorForm) -> TractorForm:
    """X tilde-D^T (the Leibnizian tangential double D up to sign).

    X kills the X y^2 term of Delta^T, so this is X (ext_D + ext_I y) / h
    with h at the output weight; the w = 3/2 - d/2 singularity of Delta^T
    is removable here.
    """
    d, w = _dim(A), A.w
    h_out = d + 2 * (w - 1)
    if h_out == 0:
        raise ExcludedWeight("tangential_double_D pole at w = 1 - d/2")
    if w == 2 - d / 2:
        return ext_X(tangential_D(A)).scale(Fraction(1) / h_out)
    return ext_X(ext_D(A) + ext_I(robin_y(A))).scale(Fraction(1) / h_out)


def tangential_double_D_star(A: TractorForm) -> TractorForm:
    d, w = _dim(A), A.w
    h_out = d + 2 * (w - 1)
    if h_out == 0:
        raise ExcludedWeight("tangential_double_D_star pole at w = 1 - d/2")
    if w == 2 - d / 2:
        return int_X(tangential_D_star(A)).scale(Fraction(1) / h_out)
    return int_X(int_D(A) + int_I(robin_y(A))).scale(Fraction(1) / h_out)


# ---------------------------------------------------------------------------
# structure maps
# ---------------------------------------------------------------------------

def wedge_tractor(A: TractorForm, B: TractorForm) -> TractorForm:
    if A.scale_tag != B.scale_tag:
        raise ValueError("scale tag mismatch")
    k = A.k
    sgn = -1 if k % 2 else 1

    def pm(f):
        return f if sgn > 0 else -f

    return _build(
        A.model, A.k + B.k, A.w + B.w,
        north=wedge(A.north, B.west) + pm(wedge(A.west, B.north)),
        west=wedge(A.west, B.west),
        east=wedge(A.east, B.west) + pm(wedge(A.south, B.north))
             - pm(wedge(A.north, B.south)) + wedge(A.west, B.east),
        south=wedge(A.south, B.west) + pm(wedge(A.west, B.south)),
        scale_tag=A.scale_tag)


def star_tractor(A: TractorForm) -> TractorForm:
    """Tractor Hodge star: T^k[w] -> T^(d+2-k)[w]."""
    d = A.model.dim
    k = A.k
    sg_n = -1 if (k - 1) % 2 else 1
    sg_s = -1 if (k - 2) % 2 else 1
    north = hodge_star(A.north).scale(sg_n)
    west = hodge_star(A.east)
    east = -hodge_star(A.west)
    south = hodge_star(A.south).scale(sg_s)
    return _build(A.model, d + 2 - k, A.w, north=north, west=west, east=east,
                  south=south, scale_tag=A.scale_tag)


def transform(A: TractorForm, upsilon) -> TractorForm:
    """Change of splitting by a conformal factor with Upsilon = d omega for
    omega a linear polynomial: Upsilon is a constant covector, given as a
    mapping {coordinate index: Fraction}."""
    ups = {int(i): Fraction(c) for i, c in dict(upsilon).items() if Fraction(c) != 0}
    for i in ups:
        if i not in A.model.coords:
            raise ValueError("Upsilon component outside model")

    def eps_u(f: WeightedForm) -> WeightedForm:
        out = WeightedForm.zero(f.model, f.degree + 1, f.weight)
        for i, c in sorted(ups.items()):
            out = out + wedge_var(f, i).scale(c)
        return out

    def iota_u(f: WeightedForm) -> WeightedForm:
        # Upsilon is a covector: the interior product uses the inverse
        # conformal metric, shifting the weight by -2
        out = WeightedForm.zero(f.model, f.degree - 1, f.weight - 2)
        for i, c in sorted(ups.items()):
            out = out + hook_var(f, i, -2).scale(c)
        return out

    tag = A.scale_tag + "+[" + ",".join(
        "%d:%s" % (i, frac_str(c)) for i, c in sorted(ups.items())) + "]"
    north = A.north
    west = eps_u(A.north) + A.west
    east = -iota_u(A.north) + A.east
    south = (eps_u(iota_u(A.north)) - iota_u(eps_u(A.north))).scale(Fraction(1, 2)) \
        - iota_u(A.west) - eps_u(A.east) + A.south
    return TractorForm(A.model, A.k, A.w, north, west, east, south, scale_tag=tag)


def connection(A: TractorForm, v) -> TractorForm:
    """Tractor connection along a constant vector field v (flat data).

    v is a mapping {coordinate index: Fraction}.  Output has the same
    (k, w); slot weights are unchanged because v is a true vector.
    """
    vv = {int(i): Fraction(c) for i, c in dict(v).items() if Fraction(c) != 0}
    for i in vv:
        if i not in A.model.coords:
            raise ValueError("vector component outside model")

    def nabla_v(f: WeightedForm) -> WeightedForm:
        # constant coefficients: sum v^i d_i, including d_r via lie_normal
        out = WeightedForm.zero(f.model, f.degree, f.weight)
        for i, c in sorted(vv.items()):
            if i == 0:
                df = lie_normal(f)
            else:
                alpha = f.offset
                comps = {idx: p.diff(i) for idx, p in f.comps.items()}
                df = WeightedForm(f.model, f.degree, f.weight - 1, comps, alpha)
            out = out + df.scale(c)
        # restore the weight label: nabla_v does not shift conformal weight
        return WeightedForm(out.model, out.degree, f.weight, out.comps, out.offset)

    def eps_v(f: WeightedForm) -> WeightedForm:
        out = WeightedForm.zero(f.model, f.degree + 1, f.weight + 2)
        for i, c in sorted(vv.items()):
            out = out + wedge_var(f, i, 2).scale(c)
        return out

    def iota_v(f: WeightedForm) -> WeightedForm:
        out = WeightedForm.zero(f.model, f.degree - 1, f.weight)
        for i, c in sorted(vv.items()):
            out = out + hook_var(f, i, 0).scale(c)
        return out

    # flat Schouten: P v = 0, so only the v-rows act
    north = nabla_v(A.north) - iota_v(A.west) + _fix(eps_v(A.east), A.north)
    west = nabla_v(A.west) + _fix(eps_v(A.south), A.west)
    east = nabla_v(A.east) + _fix(iota_v(A.south), A.east)
    south = nabla_v(A.south)
    return TractorForm(A.model, A.k, A.w, north, west, east, south,
                       scale_tag=A.scale_tag)


def _fix(f: WeightedForm, like: WeightedForm) -> WeightedForm:
    """Re-stamp weight metadata (slot bookkeeping for true-vector entries)."""
    return WeightedForm(f.model, f.degree, like.weight, f.comps, f.offset)


def boundary_restrict(A: TractorForm) -> TractorForm:
    """Boundary splitting isomorphism (identity for H = 0) then r -> 0."""
    return TractorForm(
        A.model.boundary, A.k, A.w,
        restrict(A.north), restrict(A.west), restrict(A.east), restrict(A.south),
        scale_tag=A.scale_tag)


def ker_int_I_extension(A_sigma: TractorForm, d: int) -> TractorForm:
    """Extend a boundary tractor to the bulk inside ker int_I.

    Constant-in-r slot extension followed by the projector int_I ext_I.
    """
    bulk = bulk_model(d)
    lifted = TractorForm(
        bulk, A_sigma.k, A_sigma.w,
        extend(A_sigma.north, d), extend(A_sigma.west, d),
        extend(A_sigma.east, d), extend(A_sigma.south, d),
        scale_tag=A_sigma.scale_tag)
    return int_I(ext_I(lifted))


# ---------------------------------------------------------------------------
# selector dispatch (spec operation surface)
# ---------------------------------------------------------------------------

ALGEBRAIC_OPS = {
    "X": ext_X, "Xs": int_X, "epsI": ext_I, "iotaI": int_I,
    "epsY": ext_Y, "iotaY": int_Y, "h": weight_h, "N": tractor_degree,
}

THOMAS_OPS.update({
    "D": ext_D, "Ds": int_D, "Dhat": hat_D, "Dhats": hat_D_star,
    "Dtilde": tilde_D, "Dtildes": tilde_D_star,
    "D2": double_D, "D2s": double_D_star, "D3": triple_D, "D3s": triple_D_star,
})

TANGENTIAL_OPS = {"DT": tangential_D, "DTs": tangential_D_star,
                  "barD": bar_D, "barDs": bar_D_star}


@dataclass(frozen=True)
class TractorOperator:
    """Named operator with its declared degree/weight shifts.

    The slot bookkeeping of :class:`TractorForm` re-checks the shifts on
    every application, so a registry entry that lies about its shifts cannot
    construct an output.
    """

    name: str
    degree_shift: int
    weight_shift: Fraction
    apply: object

    def __call__(self, A: TractorForm) -> TractorForm:
        out = self.apply(A)
        if out.k != A.k + self.degree_shift or out.w != A.w + self.weight_shift:
            raise ValueError("operator %s violated its declared shifts" % self.name)
        return out


OPERATOR_REGISTRY = tuple(
    TractorOperator(name, dk, Fraction(dw), fn) for name, dk, dw, fn in (
        ("X", 1, 1, ext_X), ("Xs", -1, 1, int_X),
        ("epsI", 1, 0, ext_I), ("iotaI", -1, 0, int_I),
        ("epsY", 1, -1, ext_Y), ("iotaY", -1, -1, int_Y),
        ("h", 0, 0, weight_h), ("N", 0, 0, tractor_degree),
        ("D", 1, -1, ext_D), ("Ds", -1, -1, int_D),
        ("D2", 2, 0, double_D), ("D2s", -2, 0, double_D_star),
        ("D3", 3, 0, triple_D), ("D3s", -3, 0, triple_D_star),
        ("robin", 0, -1, robin_op), ("box_Y", 0, -2, yamabe_box),
        ("y", 0, -1, robin_y),
        ("DT", 1, -1, tangential_D), ("DTs", -1, -1, tangential_D_star),
        ("barD", 1, -1, bar_D), ("barDs", -1, -1, bar_D_star),
        ("Pi_W", 0, 0, proj_west), ("Pi", 0, 0, proj_holo),
    )
)


INSERTIONS = {
    "q": q_coset, "q*": q_extract, "q_S": q_south, "q_W": q_west,
    "q_W_special": q_west_special, "q_E": q_east, "q_N": q_north,
    "q_N_tau": q_north_tau,
}

PROJECTORS = {"Pi_W": proj_west, "Pi": proj_holo, "Pi_hat_tau": proj_holo_tau}


def insert(name: str, *args):
    return INSERTIONS[name](*args)


def projector(name: str, A):
    return PROJECTORS[name](A)


def structure(name: str, *args):
    ops = {"wedge": wedge_tractor, "star": star_tractor,
           "transform": transform, "connection": connection,
           "boundary_restrict": boundary_restrict}
    return ops[name](*args)


def algebraic_mult(name: str, A: TractorForm) -> TractorForm:
    return ALGEBRAIC_OPS[name](A)


def thomasD_op(name: str, A: TractorForm) -> TractorForm:
    return THOMAS_OPS[name](A)


def laplace_robin(name: str, A: TractorForm) -> TractorForm:
    return LAPLACE_ROBIN_OPS[name](A)


def tangential(name: str, A: TractorForm) -> TractorForm:
    return TANGENTIAL_OPS[name](A)


# ---------------------------------------------------------------------------
# seeded random tractors
# ---------------------------------------------------------------------------

def random_tractor(rng: random.Random, model: Model, k: int, w,
                   max_degree: int = 2, terms: int = 2) -> TractorForm:
    w = Fraction(w)
    return TractorForm(
        model, k, w,
        random_form(rng, model, k - 1, w + k, max_degree, terms),
        random_form(rng, model, k, w + k, max_degree, terms),
        random_form(rng, model, k - 2, w + k - 2, max_degree, terms),
        random_form(rng, model, k - 1, w + k - 2, max_degree, terms))

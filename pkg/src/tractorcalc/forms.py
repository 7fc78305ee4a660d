"""Flat Poincare-Einstein model and the weighted-form exterior calculus.

The bulk model is the half space r > 0 with metric dr^2 + (dx^1)^2 + ... +
(dx^n)^2 in the scale tau; the defining scale is sigma = r, the conormal is
dr, and all curvature data (Schouten, J, mean curvature) vanish.  The
boundary model is flat R^n in the coordinates x^1..x^n.

A :class:`WeightedForm` stores exact polynomial components indexed by sorted
coordinate index sets, a conformal weight (metadata), and a global power
offset alpha so that the object represents r^alpha * (polynomial form).
Fractional offsets carry the sigma^(h0-1) prefactors of second-kind series;
log r terms live inside the polynomials (see poly.LOGVAR).

Sign conventions: the codifferential is fixed so that the form Laplacian
{d, delta} acts on flat components as the sum of coordinate second
derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import random

from .poly import Poly, RVAR, frac_str


class ExcludedWeight(ValueError):
    """A weight gate was violated; the message names the vanishing factor."""


@dataclass(frozen=True)
class Model:
    """Coordinate model: bulk (with r) or boundary (without)."""

    dim: int
    radial: bool

    @property
    def coords(self):
        if self.radial:
            return tuple([RVAR] + list(range(1, self.dim)))
        return tuple(range(1, self.dim + 1))

    @property
    def boundary(self) -> "Model":
        if not self.radial:
            raise ValueError("boundary model has no boundary")
        return Model(self.dim - 1, False)


def bulk_model(d: int) -> Model:
    if d < 3:
        raise ValueError("bulk dimension must be >= 3")
    return Model(d, True)


@dataclass(frozen=True)
class ModelScale:
    """The flat-scale geometry record; every curvature slot is zero."""

    d: int

    @property
    def model(self) -> Model:
        return bulk_model(self.d)

    sigma_component = Poly.var(RVAR)
    rho = Fraction(0)
    schouten = Fraction(0)
    trace_J = Fraction(0)
    mean_curvature = Fraction(0)
    h_trace = Fraction(0)       # sf H of the collar normal form
    h_endo = Fraction(0)        # bb H of the collar normal form

    def scale_tractor_norm(self) -> Fraction:
        # I^2 = |n|^2 + 2 sigma rho with |dr|^2 = 1 and rho = 0
        return Fraction(1) + 2 * self.rho


class WeightedForm:
    """Degree-k, weight-w form with exact polynomial components.

    ``comps`` maps sorted index tuples (size k, indices in model.coords) to
    :class:`Poly`; ``offset`` is the exponent alpha of a global r^alpha
    prefactor.  Canonical storage: the largest possible power of r is pulled
    into the offset, then nonnegative-integer offsets are pushed back into
    the polynomials (so offset == 0 unless it is genuinely fractional or
    negative).
    """

    __slots__ = ("model", "degree", "weight", "comps", "offset")

    def __init__(self, model: Model, degree: int, weight, comps=None, offset=0):
        weight = Fraction(weight)
        offset = Fraction(offset)
        cleaned = {}
        if comps:
            for idx, p in comps.items():
                if not isinstance(p, Poly):
                    p = Poly.const(p)
                if p.is_zero():
                    continue
                idx = tuple(idx)
                if len(idx) != degree or len(set(idx)) != degree:
                    raise ValueError("bad index set %r for degree %d" % (idx, degree))
                if tuple(sorted(idx)) != idx:
                    raise ValueError("indices must be sorted: %r" % (idx,))
                for i in idx:
                    if i not in model.coords:
                        raise ValueError("index %r outside model" % i)
                cleaned[idx] = cleaned.get(idx, Poly.zero()) + p
                if cleaned[idx].is_zero():
                    del cleaned[idx]
        if (degree < 0 or degree > model.dim) and cleaned:
            raise ValueError("nonzero form of impossible degree %d" % degree)
        if cleaned:
            if offset != 0:
                # pull common r powers into the offset, then push nonnegative
                # integer offsets back into the polynomials
                val = min(p.r_valuation() for p in cleaned.values())
                if val:
                    cleaned = {i: p.shift_r(-val) for i, p in cleaned.items()}
                    offset += val
                if offset != 0 and offset.denominator == 1 and offset >= 0:
                    m = int(offset)
                    cleaned = {i: p.shift_r(m) for i, p in cleaned.items()}
                    offset = Fraction(0)
        else:
            offset = Fraction(0)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "comps", cleaned)
        object.__setattr__(self, "offset", offset)

    # -- basics ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedForm):
            return NotImplemented
        return (
            self.model == other.model
            and self.degree == other.degree
            and self.weight == other.weight
            and self.offset == other.offset
            and self.comps == other.comps
        )

    def __repr__(self):
        body = ", ".join(
            "%s: %s" % ("^".join(_idx_names(self.model, i)) or "1", p.format())
            for i, p in sorted(self.comps.items())
        )
        off = "" if self.offset == 0 else " r^%s *" % frac_str(self.offset)
        return "WeightedForm(k=%d w=%s%s {%s})" % (
            self.degree, frac_str(self.weight), off, body)

    def _replace(self, degree=None, weight=None, comps=None, offset=None):
        return WeightedForm(
            self.model,
            self.degree if degree is None else degree,
            self.weight if weight is None else weight,
            self.comps if comps is None else comps,
            self.offset if offset is None else offset,
        )

    @staticmethod
    def zero(model: Model, degree: int, weight) -> "WeightedForm":
        return WeightedForm(model, degree, weight, {})

    @staticmethod
    def _fast(model: Model, degree: int, weight: Fraction, comps: dict,
              offset: Fraction) -> "WeightedForm":
        """Internal: trusted components (sorted valid index tuples, nonzero
        canonical polynomials); only the offset normalization runs."""
        if comps and offset != 0:
            val = min(p.r_valuation() for p in comps.values())
            if val:
                comps = {i: p.shift_r(-val) for i, p in comps.items()}
                offset += val
            if offset != 0 and offset.denominator == 1 and offset >= 0:
                m = int(offset)
                comps = {i: p.shift_r(m) for i, p in comps.items()}
                offset = Fraction(0)
        if not comps:
            offset = Fraction(0)
        f = WeightedForm.__new__(WeightedForm)
        object.__setattr__(f, "model", model)
        object.__setattr__(f, "degree", degree)
        object.__setattr__(f, "weight", weight)
        object.__setattr__(f, "comps", comps)
        object.__setattr__(f, "offset", offset)
        return f

    def __add__(self, other: "WeightedForm") -> "WeightedForm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if (self.model, self.degree, self.weight) != (other.model, other.degree, other.weight):
            raise ValueError("form metadata mismatch in addition")
        if self.offset == other.offset:
            comps = dict(self.comps)
            for i, p in other.comps.items():
                q = comps.get(i)
                q = p if q is None else q + p
                if q.is_zero():
                    comps.pop(i, None)
                else:
                    comps[i] = q
            return WeightedForm._fast(self.model, self.degree, self.weight,
                                      comps, self.offset)
        # align offsets exactly (difference must be a nonnegative integer one way)
        diff = self.offset - other.offset
        if diff.denominator != 1:
            raise ValueError("incompatible fractional offsets in addition")
        shift = int(diff)
        if shift > 0:
            comps = {i: p.shift_r(shift) for i, p in self.comps.items()}
            base = other
        else:
            comps = {i: p.shift_r(-shift) for i, p in other.comps.items()}
            base = self
        out = dict(base.comps)
        for i, p in comps.items():
            q = out.get(i)
            q = p if q is None else q + p
            if q.is_zero():
                out.pop(i, None)
            else:
                out[i] = q
        return WeightedForm._fast(base.model, base.degree, base.weight,
                                  out, base.offset)

    def __neg__(self):
        return WeightedForm._fast(self.model, self.degree, self.weight,
                                  {i: -p for i, p in self.comps.items()},
                                  self.offset)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "WeightedForm":
        c = Fraction(c)
        if c == 0:
            return WeightedForm.zero(self.model, self.degree, self.weight)
        return WeightedForm._fast(self.model, self.degree, self.weight,
                                  {i: p * c for i, p in self.comps.items()},
                                  self.offset)

    def mult_poly(self, q: Poly, weight_shift=0) -> "WeightedForm":
        """Multiply components by an r/x-polynomial (weight metadata shifted)."""
        if q.is_zero():
            return WeightedForm.zero(self.model, self.degree,
                                     self.weight + Fraction(weight_shift))
        return WeightedForm._fast(
            self.model, self.degree, self.weight + Fraction(weight_shift),
            {i: p * q for i, p in self.comps.items()}, self.offset)

    def vanishing_order(self):
        """Exact order of vanishing in r (offset included); None if zero."""
        if self.is_zero():
            return None
        val = min(p.r_valuation() for p in self.comps.values())
        return self.offset + val

    def log_grade(self, g: int) -> "WeightedForm":
        return self._replace(
            comps={i: p.log_grade(g) for i, p in self.comps.items()})

    def max_log_power(self) -> int:
        return max((p.max_log_power() for p in self.comps.values()), default=0)

    def r_coefficient(self, j) -> "WeightedForm":
        """Coefficient form of r^(offset+j), returned r-free at offset 0.

        The result keeps this form's weight metadata minus nothing; callers
        reassign weights when reassembling series.
        """
        j = int(j)
        return WeightedForm(
            self.model, self.degree, self.weight,
            {i: p.r_coefficient(j) for i, p in self.comps.items()}, 0)

    def truncate_r(self, order: int) -> "WeightedForm":
        """Drop all terms of r-power (relative to the offset) >= order."""
        comps = {i: _truncate_poly(p, order) for i, p in self.comps.items()}
        return self._replace(comps=comps)


def _truncate_poly(p: Poly, order: int) -> Poly:
    out = {}
    for m, c in p.terms.items():
        if dict(m).get(RVAR, 0) < order:
            out[m] = c
    return Poly(out)


def _idx_names(model: Model, idx):
    names = []
    for i in idx:
        names.append("dr" if i == RVAR else "dx%d" % i)
    return names


def _ins_sign(idx: tuple, j: int) -> int:
    return -1 if sum(1 for i in idx if i < j) % 2 else 1


# ---------------------------------------------------------------------------
# exterior algebra primitives (flat metric, components)
# ---------------------------------------------------------------------------

def wedge_var(A: WeightedForm, j: int, weight_shift=0) -> WeightedForm:
    """dx^j wedge A (metadata: degree +1, weight += weight_shift)."""
    comps = {}
    for idx, p in A.comps.items():
        if j in idx:
            continue
        new = tuple(sorted(idx + (j,)))
        sgn = _ins_sign(idx, j)
        comps[new] = p if sgn > 0 else -p
    return WeightedForm._fast(A.model, A.degree + 1,
                              A.weight + Fraction(weight_shift), comps, A.offset)


def hook_var(A: WeightedForm, j: int, weight_shift=0) -> WeightedForm:
    """Interior product with the unit vector dual to dx^j."""
    comps = {}
    for idx, p in A.comps.items():
        if j not in idx:
            continue
        pos = idx.index(j)
        new = idx[:pos] + idx[pos + 1:]
        comps[new] = p if pos % 2 == 0 else -p
    return WeightedForm._fast(A.model, A.degree - 1,
                              A.weight + Fraction(weight_shift), comps, A.offset)


def wedge_normal(A: WeightedForm) -> WeightedForm:
    """eps(n) = dr wedge: (k,w) -> (k+1, w+1)."""
    _need_radial(A)
    return wedge_var(A, RVAR, 1)


def hook_normal(A: WeightedForm) -> WeightedForm:
    """iota(n): (k,w) -> (k-1, w-1)."""
    _need_radial(A)
    return hook_var(A, RVAR, -1)


def mult_sigma(A: WeightedForm, power=1) -> WeightedForm:
    """Multiply by sigma^power = r^power: weight w -> w + power."""
    _need_radial(A)
    power = Fraction(power)
    return WeightedForm._fast(
        A.model, A.degree, A.weight + power, dict(A.comps), A.offset + power)


def _need_radial(A: WeightedForm):
    if not A.model.radial:
        raise ValueError("operation needs the bulk model")


def _d_components(A: WeightedForm, variables) -> dict:
    """Common core of the exterior derivative at offset alpha-1.

    Returns components of r^(alpha-1) * (...) so radial and boundary
    derivative contributions combine exactly.
    """
    alpha = A.offset
    comps = {}
    for idx, p in A.comps.items():
        for j in variables:
            if j in idx:
                continue
            if j == RVAR:
                dp = p * alpha + p.r_dr()
            else:
                dp = Poly.var(RVAR) * p.diff(j)
            if dp.is_zero():
                continue
            new = tuple(sorted(idx + (j,)))
            sgn = _ins_sign(idx, j)
            comps[new] = comps.get(new, Poly.zero()) + (dp if sgn > 0 else -dp)
    return comps


def exterior_d(A: WeightedForm) -> WeightedForm:
    """Exterior derivative in the flat scale: (k,w) -> (k+1, w)."""
    comps = {i: p for i, p in _d_components(A, A.model.coords).items()
             if not p.is_zero()}
    return WeightedForm._fast(A.model, A.degree + 1, A.weight, comps,
                              A.offset - 1)


def codiff(A: WeightedForm) -> WeightedForm:
    """Codifferential, signed so that {d, delta} = sum of second derivatives.

    (k, w) -> (k-1, w-2).
    """
    alpha = A.offset
    comps = {}
    for idx, p in A.comps.items():
        for pos, j in enumerate(idx):
            if j == RVAR:
                dp = p * alpha + p.r_dr()
            else:
                dp = Poly.var(RVAR) * p.diff(j)
            if dp.is_zero():
                continue
            new = idx[:pos] + idx[pos + 1:]
            q = comps.get(new)
            dp = dp if pos % 2 == 0 else -dp
            q = dp if q is None else q + dp
            if q.is_zero():
                comps.pop(new, None)
            else:
                comps[new] = q
    return WeightedForm._fast(A.model, A.degree - 1, A.weight - 2, comps,
                              alpha - 1)


def form_laplacian(A: WeightedForm) -> WeightedForm:
    """{d, delta} = componentwise sum of coordinate second derivatives.

    Computed directly (the flat Weitzenboeck identity) rather than by
    composing d and delta; the two agree exactly and the composition is
    exercised separately in the verification suite.
    """
    alpha = A.offset
    comps = {}
    for idx, p in A.comps.items():
        d1 = p * alpha + p.r_dr()
        total = d1 * (alpha - 1) + d1.r_dr()
        r2 = Poly.var(RVAR, 2)
        for j in A.model.coords:
            if j == RVAR:
                continue
            total = total + r2 * p.diff(j).diff(j)
        if not total.is_zero():
            comps[idx] = total
    return WeightedForm._fast(A.model, A.degree, A.weight - 2, comps,
                              alpha - 2)


def lie_normal(A: WeightedForm) -> WeightedForm:
    """Lie derivative along the unit normal: componentwise d/dr, w -> w-1."""
    _need_radial(A)
    alpha = A.offset
    comps = {}
    for idx, p in A.comps.items():
        dp = p * alpha + p.r_dr()
        if not dp.is_zero():
            comps[idx] = dp
    return WeightedForm._fast(A.model, A.degree, A.weight - 1, comps,
                              alpha - 1)


def degree_op(A: WeightedForm) -> WeightedForm:
    return A.scale(A.degree)


# ---------------------------------------------------------------------------
# holographic normals and the true-form operator L-hat
# ---------------------------------------------------------------------------

def e_tilde(A: WeightedForm) -> WeightedForm:
    """Holographic exterior normal  w*eps(n) - sigma d : (k,w)->(k+1,w+1)."""
    return wedge_normal(A).scale(A.weight) - mult_sigma(exterior_d(A))


def i_tilde(A: WeightedForm) -> WeightedForm:
    """Holographic interior normal (d+w-2k)*iota(n) - sigma delta."""
    d = A.model.dim
    c = Fraction(d) + A.weight - 2 * A.degree
    return hook_normal(A).scale(c) - mult_sigma(codiff(A))


def l_hat(A: WeightedForm) -> WeightedForm:
    """sigma^2 Lap + (2k-d)[sigma Lie_n + eps(n) iota(n)] + 2 sigma [eps(n) delta + iota(n) d].

    Degree- and weight-preserving; the conjugated anticommutator of the
    holographic normals.
    """
    d = A.model.dim
    k = A.degree
    out = mult_sigma(form_laplacian(A), 2)
    c = Fraction(2 * k - d)
    if c:
        out = out + mult_sigma(lie_normal(A)).scale(c)
        out = out + wedge_normal(hook_normal(A)).scale(c)
    out = out + mult_sigma(wedge_normal(codiff(A))).scale(2)
    out = out + mult_sigma(hook_normal(exterior_d(A))).scale(2)
    return out


def script_l(A: WeightedForm) -> WeightedForm:
    """{i_tilde, e_tilde}, everywhere defined."""
    return i_tilde(e_tilde(A)) + e_tilde(i_tilde(A))


EXTERIOR_OPS = {
    "d": exterior_d,
    "delta": codiff,
    "lap": form_laplacian,
    "eps_n": wedge_normal,
    "iota_n": hook_normal,
}

HOLOGRAPHIC_OPS = {
    "e_tilde": e_tilde,
    "i_tilde": i_tilde,
    "l_hat": l_hat,
}


def exterior_op(name: str, A: WeightedForm) -> WeightedForm:
    return EXTERIOR_OPS[name](A)


def holographic_op(name: str, A: WeightedForm) -> WeightedForm:
    return HOLOGRAPHIC_OPS[name](A)


# ---------------------------------------------------------------------------
# wedge / Hodge star
# ---------------------------------------------------------------------------

def wedge(A: WeightedForm, B: WeightedForm) -> WeightedForm:
    if A.model != B.model:
        raise ValueError("wedge across models")
    comps = {}
    for ia, pa in A.comps.items():
        sa = set(ia)
        for ib, pb in B.comps.items():
            if sa & set(ib):
                continue
            merged = tuple(sorted(ia + ib))
            # sign of the merge permutation
            seq = list(ia + ib)
            sgn = 1
            for u in range(len(seq)):
                for v in range(u + 1, len(seq)):
                    if seq[u] > seq[v]:
                        sgn = -sgn
            term = pa * pb if sgn > 0 else -(pa * pb)
            comps[merged] = comps.get(merged, Poly.zero()) + term
    return WeightedForm(
        A.model, A.degree + B.degree, A.weight + B.weight, comps,
        A.offset + B.offset)


def hodge_star(A: WeightedForm) -> WeightedForm:
    """Conformal Hodge star: E^k[w] -> E^(m-k)[m+w-2k] on the flat model."""
    coords = A.model.coords
    m = A.model.dim
    comps = {}
    for idx, p in A.comps.items():
        comp = tuple(i for i in coords if i not in idx)
        seq = list(idx) + list(comp)
        sgn = 1
        for u in range(len(seq)):
            for v in range(u + 1, len(seq)):
                if seq[u] > seq[v]:
                    sgn = -sgn
        comps[comp] = comps.get(comp, Poly.zero()) + (p if sgn > 0 else -p)
    return WeightedForm(
        A.model, m - A.degree, Fraction(m) + A.weight - 2 * A.degree, comps,
        A.offset)


# ---------------------------------------------------------------------------
# boundary restriction / extension
# ---------------------------------------------------------------------------

def restrict(A: WeightedForm) -> WeightedForm:
    """Restrict to the boundary r = 0 (drops dr components).

    Positive fractional offsets restrict to zero; negative offsets error.
    """
    _need_radial(A)
    bmodel = A.model.boundary
    if A.is_zero():
        return WeightedForm.zero(bmodel, A.degree, A.weight)
    if A.offset < 0:
        raise ValueError("cannot restrict a pole: offset %s" % frac_str(A.offset))
    if A.offset > 0:
        return WeightedForm.zero(bmodel, A.degree, A.weight)
    comps = {}
    for idx, p in A.comps.items():
        if RVAR in idx:
            continue
        q = p.subs_r0()
        if not q.is_zero():
            comps[idx] = q
    return WeightedForm(bmodel, A.degree, A.weight, comps, 0)


def extend(A_sigma: WeightedForm, d: int) -> WeightedForm:
    """Extend a boundary form to the bulk, constant in r."""
    if A_sigma.model.radial:
        raise ValueError("extend expects a boundary form")
    if A_sigma.model.dim != d - 1:
        raise ValueError("dimension mismatch")
    return WeightedForm(bulk_model(d), A_sigma.degree, A_sigma.weight,
                        dict(A_sigma.comps), 0)


def tangential_part(A: WeightedForm) -> WeightedForm:
    """Projection onto ker iota(n): A - eps(n) iota(n) A."""
    return A - wedge_normal(hook_normal(A))


# ---------------------------------------------------------------------------
# divergence extension problem
# ---------------------------------------------------------------------------

def divergence_extend(A_sigma: WeightedForm, w, order: int, method: str = "recursive") -> WeightedForm:
    """Extend boundary data to a solution of the generalised divergence
    condition i_tilde A = O(sigma^order).

    ``A_sigma`` is boundary data in E^k Sigma[w+k]; the result lives in
    E^k M[w+k].  method 'recursive' builds the order-by-order normal parts;
    'projector' returns i_tilde e_tilde A0 / ((w+k)(n+w-k)) which satisfies
    i_tilde = 0 identically.
    """
    w = Fraction(w)
    k = A_sigma.degree
    d = A_sigma.model.dim + 1
    n = d - 1
    if A_sigma.weight != w + k:
        raise ValueError("data must have weight w+k")
    A0 = extend(A_sigma, d)
    if method == "projector":
        if w + k == 0:
            raise ExcludedWeight("projector extension needs w+k != 0")
        if n + w - k == 0:
            raise ExcludedWeight("projector extension needs n+w-k != 0")
        return i_tilde(e_tilde(A0)).scale(Fraction(1) / ((w + k) * (n + w - k)))
    if method != "recursive":
        raise ValueError("unknown method %r" % method)
    for i in range(1, order + 1):
        if Fraction(d) + w - k - i == 0:
            raise ExcludedWeight(
                "recursive extension obstructed at order %d: d+w-k = %d" % (i, i))
    total = A0
    prev = A0
    for i in range(1, order + 1):
        chi = codiff(prev).scale(Fraction(1) / (Fraction(d) + w - k - i))
        Ai = wedge_normal(chi)
        # reweight: coefficient forms carry weight w+k-i and are multiplied
        # back by sigma^i, so the running sum keeps weight w+k.
        Ai = WeightedForm(Ai.model, Ai.degree, w + k - i, Ai.comps, Ai.offset)
        if Ai.is_zero():
            break
        total = total + mult_sigma(Ai, i)
        prev = Ai
    return total


# ---------------------------------------------------------------------------
# seeded random sections (test fixtures)
# ---------------------------------------------------------------------------

def random_poly(rng: random.Random, model: Model, max_degree: int = 2,
                terms: int = 2, coeff_range=(-3, 3)) -> Poly:
    total = Poly.zero()
    for _ in range(terms):
        c = rng.randint(coeff_range[0], coeff_range[1])
        if c == 0:
            continue
        deg = rng.randint(0, max_degree)
        mono = {}
        for _ in range(deg):
            v = rng.choice(model.coords)
            mono[v] = mono.get(v, 0) + 1
        total = total + Poly({tuple(sorted(mono.items())): Fraction(c)})
    return total


def random_form(rng: random.Random, model: Model, degree: int, weight,
                max_degree: int = 2, terms: int = 2) -> WeightedForm:
    if degree < 0 or degree > model.dim:
        return WeightedForm.zero(model, degree, weight)
    comps = {}
    for idx in combinations(model.coords, degree):
        p = random_poly(rng, model, max_degree, terms)
        if not p.is_zero():
            comps[idx] = p
    return WeightedForm(model, degree, weight, comps, 0)

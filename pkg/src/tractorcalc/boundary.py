"""Holographic extraction of the boundary operators.

The detour operator L^l_k, its gauge companion G_k and the Q-operator Q_k
are read off from bulk compositions evaluated along the boundary: extend the
boundary form constantly in r, apply the displayed composition of tangential
bulk operators, restrict at r = 0, and read the designated slot.  The bulk
composition is never restricted midway; tangentiality is what makes the
final restriction well defined, and is itself checked by perturbing the
extension with r * B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .forms import (
    ExcludedWeight, Model, WeightedForm, bulk_model, codiff, exterior_d,
    extend, mult_sigma,
)
from .poly import Poly
from .tractor import (
    TractorForm, bar_D_star, boundary_restrict, ext_X, ext_Y, int_X, int_Y,
    q_coset, q_extract, robin_y,
)


def _as_boundary_data(A: WeightedForm, n: int, k: int, weight) -> WeightedForm:
    if A.model.radial or A.model.dim != n:
        raise ValueError("probe must live on the n-dimensional boundary")
    if A.degree != k or A.weight != Fraction(weight):
        raise ValueError("probe metadata mismatch: need degree %d weight %s"
                         % (k, weight))
    return A


def _obstruction_bulk(A: WeightedForm, d: int, w0: Fraction, y_power: int) -> TractorForm:
    """y^p barD* X q (ext A): the tangential obstruction composition."""
    bulk = extend(A, d)
    T = q_coset(bulk, w0)
    T = bar_D_star(ext_X(T))
    for _ in range(y_power):
        T = robin_y(T)
    return T


def detour_L(n: int, k: int, l: int, A_sigma: WeightedForm) -> WeightedForm:
    """L^l_k: E^k Sigma[k+l-n/2] -> E^k Sigma[k-l-n/2] (n even, l >= 1)."""
    if n % 2 != 0:
        raise ExcludedWeight("detour operators need an even boundary dimension")
    if l < 1:
        raise ValueError("l must be a positive integer")
    d = n + 1
    w0 = Fraction(k + l) - Fraction(n, 2) - k  # tractor weight: l - n/2
    A_sigma = _as_boundary_data(A_sigma, n, k, w0 + k)
    T = _obstruction_bulk(A_sigma, d, w0, 2 * l)
    R = boundary_restrict(T)
    return q_extract(R)


def full_obstruction(n: int, k: int, A_sigma: WeightedForm) -> TractorForm:
    """The true-form obstruction operator along Sigma (west = L_k, the south
    slot carries the gauge companion)."""
    if n % 2 != 0:
        raise ExcludedWeight("true-form obstructions need even n")
    d = n + 1
    h0 = d - 2 * k
    if h0 < 3 or h0 % 2 == 0:
        raise ExcludedWeight("true-form obstruction needs h0 = d-2k odd >= 3")
    A_sigma = _as_boundary_data(A_sigma, n, k, 0)
    T = _obstruction_bulk(A_sigma, d, Fraction(-k), h0 - 1)
    return boundary_restrict(T)


def gauge_G(n: int, k: int, A_sigma: WeightedForm) -> WeightedForm:
    """G_k = q* Y* y^(h0-1) barD* X q: Omega^k Sigma -> E^(k-1) Sigma[2k-n-2]."""
    if k > n // 2 - 1:
        raise ExcludedWeight("gauge companion needs k <= n/2 - 1")
    ob = full_obstruction(n, k, A_sigma)
    return q_extract(int_Y(ob))


def q_operator(n: int, k: int, A_sigma: WeightedForm) -> WeightedForm:
    """Q_k = q* Y* X* y^(n-2k) X Y q: Omega^k Sigma -> E^k Sigma[2k-n]."""
    if n % 2 != 0:
        raise ExcludedWeight("Q-operator needs an even boundary dimension")
    if k > n // 2:
        raise ExcludedWeight("Q-operator needs k <= n/2")
    d = n + 1
    A_sigma = _as_boundary_data(A_sigma, n, k, 0)
    bulk = extend(A_sigma, d)
    T = q_coset(bulk, Fraction(-k))
    T = ext_X(ext_Y(T))
    for _ in range(n - 2 * k):
        T = robin_y(T)
    T = int_Y(int_X(T))
    return q_extract(boundary_restrict(T))


def factor_check(n: int, k: int, A_sigma: WeightedForm) -> bool:
    """L_k = gamma_k delta_Sigma Q_(k+1) d_Sigma with
    gamma_k = -(n-2k)(n-2k+2)(n-2k-1)^2, checked exactly on one probe."""
    if k > n // 2 - 1:
        raise ExcludedWeight("detour factorization needs k <= n/2 - 1")
    gamma = -Fraction((n - 2 * k) * (n - 2 * k + 2) * (n - 2 * k - 1) ** 2)
    lhs = detour_L(n, k, n // 2 - k, A_sigma)
    rhs = codiff(q_operator(n, k + 1, exterior_d(A_sigma))).scale(gamma)
    return (lhs - rhs).is_zero()


def gauge_q_ratio(n: int, k: int, probes) -> Fraction:
    """The flat-model constant c with delta_Sigma Q_k = c G_k, measured on
    probes (a DERIVED fixture, not a claim of any normalization)."""
    ratio = None
    for A in probes:
        g = gauge_G(n, k, A)
        dq = codiff(q_operator(n, k, A))
        if g.is_zero():
            if not dq.is_zero():
                raise ValueError("ratio undefined: G = 0 but delta Q != 0")
            continue
        # find the scalar on one monomial, then verify exactly
        idx, p = sorted(g.comps.items())[0]
        mono, c0 = sorted(p.terms.items())[0]
        q = dq.comps.get(idx)
        c = (q.terms.get(mono, Fraction(0)) / c0) if q is not None else Fraction(0)
        if (dq - g.scale(c)).is_zero():
            if ratio is None:
                ratio = c
            elif ratio != c:
                raise ValueError("ratio not constant across probes")
        else:
            raise ValueError("delta Q not proportional to G on probe")
    if ratio is None:
        raise ValueError("all probes degenerate")
    return ratio


# ---------------------------------------------------------------------------
# probe sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryOperatorProbeSet:
    """Versioned monomial probes for a target (n, k, l)."""

    n: int
    k: int
    l: int
    version: int = 1

    def weight(self) -> Fraction:
        return Fraction(self.k + self.l) - Fraction(self.n, 2)

    def probes(self, max_degree: int = 4, limit: int = None):
        """Monomial k-form probes up to the polynomial degree, deterministic
        order: by (polynomial degree, monomial, index set)."""
        n, k = self.n, self.k
        model = Model(n, False)
        w = self.weight()
        out = []
        monos = [()]
        variables = list(range(1, n + 1))
        degree_pool = [[()]]
        for deg in range(1, max_degree + 1):
            layer = []
            for prev in degree_pool[-1]:
                start = prev[-1] if prev else 1
                for v in variables:
                    if v >= start:
                        layer.append(prev + (v,))
            degree_pool.append(layer)
        for deg, layer in enumerate(degree_pool):
            for mono_vars in layer:
                mono = {}
                for v in mono_vars:
                    mono[v] = mono.get(v, 0) + 1
                p = Poly({tuple(sorted(mono.items())): Fraction(1)})
                for idx in combinations(variables, k):
                    out.append(WeightedForm(model, k, w, {idx: p}))
        if limit is not None:
            out = out[:limit]
        return out


def detour_gauge_Q(selector: str, n: int, k: int, l: int,
                   A_sigma: WeightedForm):
    """Selector surface: L | G | Q | factorCheck."""
    if selector == "L":
        return detour_L(n, k, l, A_sigma)
    if selector == "G":
        return gauge_G(n, k, A_sigma)
    if selector == "Q":
        return q_operator(n, k, A_sigma)
    if selector == "factorCheck":
        return factor_check(n, k, A_sigma)
    raise ValueError("unknown selector %r" % selector)


def extension_independent(n: int, k: int, l: int, A_sigma: WeightedForm,
                          B_bulk: WeightedForm) -> bool:
    """Perturbing the constant extension by sigma * B changes nothing."""
    d = n + 1
    w0 = Fraction(l) - Fraction(n, 2)
    base = _obstruction_bulk(A_sigma, d, w0, 2 * l)
    bulk = extend(A_sigma, d) + mult_sigma(
        WeightedForm(B_bulk.model, B_bulk.degree, A_sigma.weight - 1,
                     B_bulk.comps, B_bulk.offset))
    T = q_coset(bulk, w0)
    T = bar_D_star(ext_X(T))
    for _ in range(2 * l):
        T = robin_y(T)
    return (boundary_restrict(T) - boundary_restrict(base)).is_zero()

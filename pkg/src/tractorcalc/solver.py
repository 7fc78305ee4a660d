"""Asymptotic Proca solvers on the flat model, in every weight regime.

The solvers produce all-orders formal series

    A = A_0 + sigma A_1 + ... (+ sigma^(h0-1) log(sigma/tau) (Abar_0 + ...))

for the tractor Proca system y A = iota_I A = Dhat* A = X* A = 0, with h0 =
d + 2 w0.  Backends:

  * tractor:   Pi :K^(h0)(z): q_W(ext data)  (first kind, generic weights),
               with the triple-D sandwich at integer h0 >= 2 and the
               tau-scale projector for true forms;
  * product:   the closed-form Casimir-shift product on weighted forms;
  * glStep:    the order-raising L/R matrices of the collar normal form;
  * oracle:    order-by-order iteration of xy + (l+1)(h - l - 2), the
               independent brute force (handles the log branches directly
               in components, where log(sigma/tau) = log r).

Scale duality maps order-l solutions at weight -w0-n to second-kind
solutions at weight w0 with leading exponent h0-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .forms import (
    ExcludedWeight, Model, WeightedForm, bulk_model, codiff, divergence_extend,
    e_tilde, exterior_d, extend, hodge_star, hook_normal, i_tilde, lie_normal,
    mult_sigma, restrict, tangential_part, wedge_normal,
)
from .poly import LOGVAR, Poly, RVAR, frac_str
from .sl2 import bessel_noseries, apply_noseries
from .tractor import (
    SLOTS, TractorForm, ext_I, ext_X, hat_D_star, int_I, int_X, proj_holo,
    proj_holo_tau, q_coset, q_extract, q_north_tau, q_west, robin_y,
    sigma_mult, triple_D, triple_D_star, boundary_restrict,
)

REGIMES = ("generic", "secondKind", "log", "trueForm", "dualTrueForm")


class UnsupportedRegime(ValueError):
    """(d, k, w0) lands outside the five supported regimes."""


def derive_regime(d: int, k: int, w0, data_is_pair: bool = False,
                  data_weight=None) -> str:
    """Total, explicit regime dispatch; unsupported cells raise."""
    w0 = Fraction(w0)
    n = d - 1
    h0 = Fraction(d) + 2 * w0
    if w0 == -k and w0 == k - n:
        raise UnsupportedRegime(
            "middle true forms (w0 = -k = k-n, k = n/2) are out of scope")
    if h0 == 1:
        raise UnsupportedRegime(
            "h0 = 1: no interesting boundary operator; only regime detection "
            "is supported at this weight")
    if w0 == -k:
        return "trueForm"
    if w0 == k - n:
        return "dualTrueForm"
    if data_weight is not None and Fraction(data_weight) == -w0 - n + k:
        return "secondKind"
    if h0.denominator == 1 and h0 >= 2:
        return "log"
    return "generic"


@dataclass
class ProcaProblemSpec:
    d: int
    k: int
    w0: Fraction
    data: object                    # boundary WeightedForm, or (A, phi) pair
    order: int = 6
    regime: str = "auto"

    def __post_init__(self):
        self.w0 = Fraction(self.w0)
        if self.regime == "auto":
            pair = isinstance(self.data, tuple)
            dw = None
            if not pair and self.data is not None:
                dw = self.data.weight
                if dw == self.w0 + self.k:
                    dw = None  # first-kind data
            self.regime = derive_regime(self.d, self.k, self.w0, pair, dw)
        elif self.regime not in REGIMES:
            raise UnsupportedRegime("unknown regime %r" % self.regime)

    @property
    def n(self) -> int:
        return self.d - 1

    @property
    def h0(self) -> Fraction:
        return Fraction(self.d) + 2 * self.w0

    @property
    def mass2(self) -> Fraction:
        return (self.w0 + self.k) * (Fraction(self.n) + self.w0 - self.k)

    @property
    def model(self) -> Model:
        return bulk_model(self.d)


INF = "inf"


@dataclass
class SeriesSolution:
    """Leading exponent alpha, coefficient tractors (weights w0-alpha-i),
    and an optional parallel log branch starting at sigma^(h0-1)."""

    d: int
    k: int
    w0: Fraction
    alpha: Fraction
    coeffs: list
    log_coeffs: list = None
    achieved_order: object = None   # int or INF

    def assemble(self) -> TractorForm:
        model = bulk_model(self.d)
        total = TractorForm.zero(model, self.k, self.w0)
        for i, C in enumerate(self.coeffs):
            if C is None or C.is_zero():
                continue
            total = total + sigma_mult(C, self.alpha + i)
        if self.log_coeffs:
            h0 = Fraction(self.d) + 2 * self.w0
            log_poly = Poly.var(LOGVAR)
            for j, C in enumerate(self.log_coeffs):
                if C is None or C.is_zero():
                    continue
                lifted = C._map(lambda f: f.mult_poly(log_poly))
                total = total + sigma_mult(lifted, h0 - 1 + j)
        return total

    def west_series(self):
        return [C.west for C in self.coeffs]


def _coefficient_tractor(T: TractorForm, power: int, grade: int,
                         weight) -> TractorForm:
    """Extract the sigma^power (log grade) coefficient as an r-free tractor
    of the given weight.  T's slots must have offset zero."""
    out = {}
    for s in SLOTS:
        f = getattr(T, s)
        if f.offset != 0 and not f.is_zero():
            raise ValueError("coefficient extraction needs offset-free slots")
        g = f.log_grade(grade).r_coefficient(power)
        out[s] = g
    w = Fraction(weight)
    k = T.k
    spec = {"north": (w + k), "west": (w + k), "east": (w + k - 2),
            "south": (w + k - 2)}
    slots = {}
    for s in SLOTS:
        f = out[s]
        slots[s] = WeightedForm(T.model, f.degree, spec[s], f.comps, 0)
    return TractorForm(T.model, k, w, slots["north"], slots["west"],
                       slots["east"], slots["south"], scale_tag=T.scale_tag)


def disassemble(T: TractorForm, d: int, k: int, w0, alpha, order: int,
                with_log: bool) -> SeriesSolution:
    w0 = Fraction(w0)
    alpha = Fraction(alpha)
    h0 = Fraction(d) + 2 * w0
    work = T
    if alpha != 0:
        work = sigma_mult(T, -alpha)
    coeffs = []
    for i in range(order + 1):
        Ci = _coefficient_tractor(work, i, 0, w0 - alpha - i)
        coeffs.append(Ci)
    logs = None
    if with_log:
        logs = []
        base = int(h0) - 1
        for j in range(order + 1 - base if order + 1 > base else 0):
            Cj = _coefficient_tractor(work, base + j, 1, w0 - base - j)
            logs.append(Cj)
        if not any(not C.is_zero() for C in logs):
            logs = None
    return SeriesSolution(d, k, w0, alpha, coeffs, logs, order)


# ---------------------------------------------------------------------------
# data extension helpers
# ---------------------------------------------------------------------------

def first_kind_start(spec: ProcaProblemSpec) -> TractorForm:
    """q_W of the constant-in-r extension of the boundary data."""
    A0 = extend(spec.data, spec.d)
    return q_west(A0, spec.w0)


def mixed_extension(spec: ProcaProblemSpec) -> WeightedForm:
    """Dual-true-form extension: A0|_S = A_S and the Neumann datum
    -grad_n(iota(n) A0)|_S = phi_S, realized as ext(A_S) - sigma eps(n) ext(phi_S)."""
    A_s, phi_s = spec.data
    A0 = extend(A_s, spec.d)
    if phi_s is not None and not phi_s.is_zero():
        phi0 = extend(phi_s, spec.d)
        A0 = A0 - mult_sigma(wedge_normal(phi0))
        A0 = WeightedForm(A0.model, A0.degree, spec.w0 + spec.k, A0.comps, A0.offset)
    return A0


def delta_potential(A: WeightedForm) -> WeightedForm:
    """A polynomial potential B with codiff(B) = A, for coclosed polynomial A.

    Radial-homotopy construction conjugated by the Hodge star; exact on the
    flat boundary (and bulk) models.
    """
    if not codiff(A).is_zero():
        raise ValueError("delta_potential needs coclosed input")
    star_A = hodge_star(A)

    def homotopy(f: WeightedForm) -> WeightedForm:
        # H(alpha) = iota(E) alpha, each monomial scaled by 1/(poly degree + form degree)
        comps = {}
        kdeg = f.degree
        for idx, p in f.comps.items():
            for pos, j in enumerate(idx):
                sgn = 1 if pos % 2 == 0 else -1
                new = idx[:pos] + idx[pos + 1:]
                acc = Poly.zero()
                for mono, c in (Poly.var(j) * p).terms.items():
                    deg = sum(e for _, e in mono)
                    acc = acc + Poly({mono: Fraction(sgn) * c / (deg - 1 + kdeg)})
                comps[new] = comps.get(new, Poly.zero()) + acc
        return WeightedForm(f.model, kdeg - 1, f.weight, comps, f.offset)

    C = exterior_d(homotopy(star_A)) - star_A
    if not C.is_zero():
        raise ValueError("radial homotopy failed: star of input not closed")
    H = homotopy(star_A)
    # invert the star: ** = (-1)^(j(m-j)) on the flat model (Riemannian)
    m = A.model.dim
    j = H.degree
    Binv = hodge_star(H).scale(Fraction((-1) ** (j * (m - j))))
    B = WeightedForm(Binv.model, Binv.degree, A.weight + 2, Binv.comps, Binv.offset)
    res = codiff(B)
    if res == A:
        return B
    if res == -A:
        return B.scale(-1)
    raise ValueError("delta_potential sign resolution failed")


def dual_true_start(spec: ProcaProblemSpec) -> TractorForm:
    """Exact-kernel start for w0 = k-n built from delta-potentials of the
    coclosed pair: D*_[3] ext_I (q_(N) ext B + q_(E) ext psi)."""
    A_s, phi_s = spec.data
    d, k, w0 = spec.d, spec.k, spec.w0
    model = bulk_model(d)
    B_s = delta_potential(A_s)
    Bt = extend(B_s, d)
    # q_(N) coset representative inside T^(k+2)[k-n]
    kk = k + 2
    north = WeightedForm(model, Bt.degree, w0 + kk, Bt.comps, Bt.offset)
    east = None
    if phi_s is not None and not phi_s.is_zero():
        psi_s = delta_potential(phi_s)
        Pt = extend(psi_s, d)
        east = WeightedForm(model, Pt.degree, w0 + kk - 2, Pt.comps, Pt.offset)
    B_tr = TractorForm(model, kk, w0, north, None, east, None)
    return triple_D_star(ext_I(B_tr))


# ---------------------------------------------------------------------------
# structured backends
# ---------------------------------------------------------------------------

def _apply_bessel(h0, order: int, A: TractorForm) -> TractorForm:
    series = bessel_noseries(h0, order)
    out = apply_noseries(
        series, A,
        x_action=sigma_mult, y_action=robin_y,
        h_value=Fraction(A.model.dim) + 2 * A.w,
        add=lambda a, b: a + b, scale=lambda a, c: a.scale(c))
    return out if out is not None else TractorForm.zero(A.model, A.k, A.w)


def solve_tractor_generic(spec: ProcaProblemSpec) -> TractorForm:
    """Pi :K^(h0)(z): q_W(ext data); h0 not in Z>=2, w0 not in {-k, k-n}."""
    h0 = spec.h0
    if h0.denominator == 1 and h0 >= 2:
        raise ExcludedWeight("generic backend needs h0 outside {2, 3, ...}")
    start = first_kind_start(spec)
    series = _apply_bessel(h0, spec.order, start)
    return proj_holo(series)


def y_extension_with_log(Z: TractorForm, order: int) -> TractorForm:
    """Order-by-order solution of y(series) = O(sigma^order) with the log
    ansatz, starting from the coefficient-0 section Z (r-free slots).

    Normalization: the regular sigma^(h0-1) coefficient is set to zero.
    """
    model = Z.model
    d = Fraction(model.dim)
    w0 = Z.w
    h0 = d + 2 * w0
    h0_int = int(h0) if h0.denominator == 1 else None
    total = Z
    log_poly = Poly.var(LOGVAR)
    for p in range(order):
        R = robin_y(total)
        # log^1 grade first
        if h0_int is not None and h0_int >= 2 and p >= h0_int - 1:
            j = p + 2 - h0_int
            cbar = Fraction(j) * (h0 - 1 + j)
            rho = _coefficient_tractor(R, p, 1, w0 - p - 1)
            if not rho.is_zero():
                corr = rho.scale(Fraction(-1) / cbar)
                lifted = corr._map(lambda f: f.mult_poly(log_poly))
                total = total + sigma_mult(lifted, h0 - 1 + j)
                R = robin_y(total)
        rho0 = _coefficient_tractor(R, p, 0, w0 - p - 1)
        if rho0.is_zero():
            continue
        c = Fraction(p + 1) * (h0 - p - 2)
        if c != 0:
            total = total + sigma_mult(rho0.scale(Fraction(1) / c), p + 1)
        else:
            # obstruction order: switch on the log branch
            if h0_int is None or h0_int < 2:
                raise ExcludedWeight(
                    "y-extension obstructed at order %d with h0 = %s"
                    % (p + 1, frac_str(h0)))
            cbar = h0 - 1
            corr = rho0.scale(Fraction(-1) / cbar)
            lifted = corr._map(lambda f: f.mult_poly(log_poly))
            total = total + sigma_mult(lifted, h0 - 1)
    return total


def solve_tractor_log(spec: ProcaProblemSpec) -> TractorForm:
    """Triple-D sandwich around the log-capable y-extension (integer h0 >= 2,
    w0 not in {-k, k-n})."""
    w0, k, n = spec.w0, spec.k, Fraction(spec.n)
    start = first_kind_start(spec)
    inner = y_extension_with_log(triple_D(start), spec.order)
    return triple_D_star(inner).scale(Fraction(1) / ((w0 + k) * (n + w0 - k)))


def solve_tractor_true_form(spec: ProcaProblemSpec) -> TractorForm:
    """w0 = -k: -(1/(n-2k)) D*_[3] O ext_I ext_X q_N^tau(ext data); for
    h0 <= 0 the log branch is empty and the same sandwich applies."""
    k, n = spec.k, Fraction(spec.n)
    if n - 2 * k == 0:
        raise UnsupportedRegime("true forms at k = n/2 are out of scope")
    A0 = extend(spec.data, spec.d)
    lifted = q_north_tau(A0, Fraction(-k - 1))
    inner = y_extension_with_log(ext_I(ext_X(lifted)), spec.order)
    return triple_D_star(inner).scale(Fraction(-1) / (n - 2 * k))


def solve_tractor_dual_true(spec: ProcaProblemSpec) -> TractorForm:
    """w0 = k-n: :K^(h0)(z): applied to the exact-kernel start."""
    start = dual_true_start(spec)
    return _apply_bessel(spec.h0, spec.order, start)


def solve_tractor_second_kind(spec: ProcaProblemSpec) -> TractorForm:
    """Solve the dual-weight first-kind problem and apply scale duality."""
    dual = ProcaProblemSpec(spec.d, spec.k, -spec.w0 - spec.n, spec.data,
                            spec.order, "auto")
    if dual.regime != "generic":
        raise ExcludedWeight(
            "second-kind backend needs a generic dual problem, got %s"
            % dual.regime)
    inner = solve_tractor_generic(dual)
    return duality_map(inner, spec.h0)


def duality_map(A: TractorForm, h0) -> TractorForm:
    """sigma^(h0-1) Pi A, the scale-duality image of a dual-weight solution."""
    return sigma_mult(proj_holo(A), Fraction(h0) - 1)


# ---------------------------------------------------------------------------
# oracle backend: order-raising iteration at the tractor level
# ---------------------------------------------------------------------------

def next_step(A: TractorForm, ell: int, h0) -> TractorForm:
    """One order-raising step [xy + (ell+1)(h - ell - 2)] / ((ell+1)(h0-ell-2))."""
    h0 = Fraction(h0)
    c = Fraction(ell + 1) * (h0 - ell - 2)
    if c == 0:
        raise ExcludedWeight("order-raising obstructed at ell = %d" % ell)
    return (sigma_mult(robin_y(A)) + A.scale(c)).scale(Fraction(1) / c)


def solve_oracle(spec: ProcaProblemSpec) -> TractorForm:
    """Independent order-by-order backend.

    generic/secondKind: order-raising iteration from an exact-kernel start;
    log/trueForm: component-level log iteration under the triple-D sandwich
    (shares only the primitive operator layer with the structured paths).
    """
    regime = spec.regime
    h0 = spec.h0
    if regime == "generic":
        A = proj_holo(first_kind_start(spec))
        for ell in range(spec.order):
            A = next_step(A, ell, h0)
        return A
    if regime == "secondKind":
        dual = ProcaProblemSpec(spec.d, spec.k, -spec.w0 - spec.n, spec.data,
                                spec.order, "auto")
        A = proj_holo(first_kind_start(dual))
        h0d = dual.h0
        for ell in range(spec.order):
            A = next_step(A, ell, h0d)
        return duality_map(A, h0)
    if regime == "dualTrueForm":
        A = dual_true_start(spec)
        for ell in range(spec.order):
            A = next_step(A, ell, h0)
        return A
    if regime == "log":
        return solve_tractor_log(spec)
    if regime == "trueForm":
        return solve_tractor_true_form(spec)
    raise UnsupportedRegime(regime)


# ---------------------------------------------------------------------------
# form-level backends
# ---------------------------------------------------------------------------

def solve_product(spec: ProcaProblemSpec) -> WeightedForm:
    """Closed-form Casimir-shift product on weighted forms (Dirichlet kind).

    Gate: w0 not in {-k, k-d, k-n}; order <= h0-2 when h0 in Z>=2.
    """
    w0, k = spec.w0, spec.k
    d, n = Fraction(spec.d), Fraction(spec.n)
    h0 = spec.h0
    for bad, label in ((w0 + k, "w0 = -k"), (d + w0 - k, "w0 = k-d"),
                       (n + w0 - k, "w0 = k-n")):
        if bad == 0:
            raise ExcludedWeight("product backend excluded at %s" % label)
    if h0.denominator == 1 and 2 <= h0 <= spec.order + 1:
        raise ExcludedWeight(
            "product formula must be adjusted at h0 in {2,...,order+1}; "
            "max admissible order is h0-2 = %s" % frac_str(h0 - 2))
    A = extend(spec.data, spec.d)
    M2 = spec.mass2
    for j in range(spec.order, 0, -1):
        cj = (w0 + k - j) * (n + w0 - k - j)
        denom = Fraction(j) * (n + 2 * w0 - j)
        A = (i_tilde(e_tilde(A)) - A.scale(cj)).scale(Fraction(1) / denom)
    return i_tilde(e_tilde(A)).scale(Fraction(1) / M2)


def _d_perp(f: WeightedForm) -> WeightedForm:
    df = exterior_d(f)
    corr = wedge_normal(lie_normal(f))
    return df - WeightedForm(f.model, corr.degree, df.weight, corr.comps, corr.offset)


def _delta_perp(f: WeightedForm) -> WeightedForm:
    cf = codiff(f)
    corr = hook_normal(lie_normal(f))
    return cf - WeightedForm(f.model, corr.degree, cf.weight, corr.comps, corr.offset)


def _euler(f: WeightedForm) -> WeightedForm:
    ef = mult_sigma(lie_normal(f))
    return WeightedForm(f.model, f.degree, f.weight, ef.comps, ef.offset)


def _restamp(f: WeightedForm, degree, weight) -> WeightedForm:
    return WeightedForm(f.model, degree, weight, f.comps, f.offset)


def gl_step(A: WeightedForm, spec: ProcaProblemSpec, ell: int) -> WeightedForm:
    """Raise an order-ell solution in ker i_tilde to order ell+1 via the
    collar normal-form matrices (flat boundary metric)."""
    w0, k = spec.w0, spec.k
    d, n = Fraction(spec.d), Fraction(spec.n)
    if ell == d + 2 * w0 - 2:
        raise ExcludedWeight("order-raising obstructed at ell = d+2w0-2")
    # split A = P + dr ^ Q
    P = tangential_part(A)
    Q = hook_normal(A)
    # R matrix: out_perp = r d_perp P ; out_par = (e - w0 - k) P - r d_perp Q
    Rp = mult_sigma(_d_perp(P))
    Rq = _euler(P) - P.scale(w0 + k) - _restamp(mult_sigma(_d_perp(_restamp(Q, k - 1, A.weight))), k, A.weight)
    # L matrix on (Rp, Rq): out_perp = r delta_perp Rp + (e - n - w0 + k) Rq
    # out_par = - r delta_perp Rq
    Rp = _restamp(Rp, k + 1, A.weight)
    Rq = _restamp(Rq, k, A.weight)
    Lp = _restamp(mult_sigma(_delta_perp(Rp)), k, A.weight) \
        + _euler(Rq) - Rq.scale(n + w0 - k)
    Lq = -_restamp(mult_sigma(_delta_perp(Rq)), k - 1, A.weight)
    LR = Lp + _restamp(wedge_normal(_restamp(Lq, k - 1, A.weight - 1)), k, A.weight)
    cj = (w0 + k - ell - 1) * (n + w0 - k - ell - 1)
    denom = Fraction(ell + 1) * (d + 2 * w0 - 2 - ell)
    return (LR - A.scale(cj)).scale(Fraction(1) / denom)


def solve_gl(spec: ProcaProblemSpec) -> WeightedForm:
    """GL stepper from the exact divergence-free extension of the data."""
    w0, k = spec.w0, spec.k
    n = Fraction(spec.n)
    if (w0 + k) * (n + w0 - k) == 0:
        raise ExcludedWeight("glStep start needs w0 not in {-k, k-n}")
    A = divergence_extend(spec.data, w0, spec.order, "projector")
    for ell in range(spec.order):
        A = gl_step(A, spec, ell)
    return A


# ---------------------------------------------------------------------------
# public solve surface
# ---------------------------------------------------------------------------

TRACTOR_BACKENDS = {
    "generic": solve_tractor_generic,
    "log": solve_tractor_log,
    "trueForm": solve_tractor_true_form,
    "dualTrueForm": solve_tractor_dual_true,
    "secondKind": solve_tractor_second_kind,
}


def proca_solve(spec: ProcaProblemSpec, backend: str = "auto") -> SeriesSolution:
    """Solve the tractor Proca problem; returns a SeriesSolution."""
    if backend in ("auto", "tractor"):
        T = TRACTOR_BACKENDS[spec.regime](spec)
    elif backend == "oracle":
        T = solve_oracle(spec)
    else:
        raise ValueError("unknown tractor backend %r" % backend)
    alpha = spec.h0 - 1 if spec.regime == "secondKind" else Fraction(0)
    with_log = spec.regime in ("log", "trueForm")
    T = _truncate_solution(T, spec, alpha)
    return disassemble(T, spec.d, spec.k, spec.w0, alpha, spec.order, with_log)


def _truncate_solution(T: TractorForm, spec: ProcaProblemSpec, alpha) -> TractorForm:
    """Drop coefficient orders beyond the requested truncation."""
    if alpha == 0:
        return T.truncate_r(spec.order + 1)
    work = sigma_mult(T, -Fraction(alpha))
    return sigma_mult(work.truncate_r(spec.order + 1), Fraction(alpha))


def proca_solve_form(spec: ProcaProblemSpec, backend: str = "product") -> SeriesSolution:
    """Form-level solvers; the solution is carried in west-slot coefficients."""
    if backend == "product":
        A = solve_product(spec)
    elif backend == "glStep":
        A = solve_gl(spec)
    elif backend == "tractor":
        return proca_solve(spec)
    else:
        raise ValueError("unknown form backend %r" % backend)
    A = _truncate_form(A, spec.order)
    T = q_west(A, spec.w0)
    return disassemble(T, spec.d, spec.k, spec.w0, 0, spec.order, False)


def _truncate_form(A: WeightedForm, order: int) -> WeightedForm:
    return A.truncate_r(order + 1)


def scale_duality(sol: SeriesSolution) -> SeriesSolution:
    """Map an order-l solution at weight -w0-n to the second-kind
    solution sigma^(h0-1) Pi A at weight w0."""
    d = sol.d
    n = d - 1
    wbar = sol.w0
    w0 = -wbar - n
    k = sol.k
    if (w0 + k) == 0 or (Fraction(n) + w0 - k) == 0:
        raise ExcludedWeight("scale duality excluded at w0 in {-k, k-n}")
    h0 = Fraction(d) + 2 * w0
    rep = residual_orders(sol)
    if not (rep.int_I_order is None and rep.hat_D_star_order is None
            and rep.int_X_order is None):
        raise ValueError("scale duality input fails its own residual check")
    A = sol.assemble()
    out = duality_map(A, h0)
    spec = ProcaProblemSpec(d, k, w0, None, sol.achieved_order
                            if isinstance(sol.achieved_order, int) else 6,
                            "secondKind")
    out = _truncate_solution(out, spec, h0 - 1)
    return disassemble(out, d, k, w0, h0 - 1, spec.order, False)


def inverse_duality(sol: SeriesSolution) -> SeriesSolution:
    """sigma^(1-h0) Pi, the inverse duality map (modulo truncation order)."""
    d, k = sol.d, sol.k
    n = d - 1
    w0 = sol.w0
    wbar = -w0 - n
    h0 = Fraction(d) + 2 * w0
    A = sol.assemble()
    out = sigma_mult(proj_holo(A), 1 - h0)
    order = sol.achieved_order if isinstance(sol.achieved_order, int) else 6
    out = out.truncate_r(order + 1)
    return disassemble(out, d, k, wbar, 0, order, False)


# ---------------------------------------------------------------------------
# residual verification
# ---------------------------------------------------------------------------

@dataclass
class ResidualReport:
    y_order: object
    int_I_order: object
    hat_D_star_order: object
    int_X_order: object
    i_tilde_order: object
    proca_order: object

    def as_dict(self):
        def enc(v):
            return INF if v is None else (str(v) if isinstance(v, Fraction) and v.denominator != 1 else int(v))
        return {
            "y": enc(self.y_order),
            "iota_I": enc(self.int_I_order),
            "hat_D_star": enc(self.hat_D_star_order),
            "X_star": enc(self.int_X_order),
            "i_tilde": enc(self.i_tilde_order),
            "proca": enc(self.proca_order),
        }


def _order_of(T) -> object:
    v = T.vanishing_order()
    return None if v is None else v


def residual_orders(sol: SeriesSolution) -> ResidualReport:
    """Exact vanishing orders of the defining equations on the assembled
    series; None encodes the infinity marker (identically zero)."""
    A = sol.assemble()
    M2 = (sol.w0 + sol.k) * (Fraction(sol.d - 1) + sol.w0 - sol.k)
    west = A.west
    proca = i_tilde(e_tilde(west)) - west.scale(M2)
    return ResidualReport(
        y_order=_order_of(robin_y(A)),
        int_I_order=_order_of(int_I(A)),
        hat_D_star_order=_order_of(hat_D_star(A)),
        int_X_order=_order_of(int_X(A)),
        i_tilde_order=_order_of(i_tilde(west)),
        proca_order=_order_of(proca),
    )


def boundary_value(sol: SeriesSolution) -> TractorForm:
    """Restriction of the assembled solution to the boundary tractor."""
    return boundary_restrict(sol.assemble())

"""Exact engine for the solution-generating sl(2) algebra.

Elements are kept in the normal-ordered form x^a y^b p(h) with the Cartan
polynomial on the right; the commutation rules are

    [h, x] = 2x,   [x, y] = h,   [h, y] = -2y,
    [y, x^k] = -k x^(k-1) (h + k - 1),

extended to a single fractional left prefactor x^alpha via
[y, x^alpha] = -alpha x^(alpha-1) (h + alpha - 1).

Series solutions of y f = 0 are generated by Casimir-shift products
c_j = xy + j(h - j - 1) and by the normalized Bessel-type series; the
Frobenius data of the scalar ODE z K'' - (h0-2) K' + K = 0 supplies the
log-branch structure at h0 = 2, 3, ...
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .forms import ExcludedWeight
from .poly import frac_str


class HPoly:
    """Polynomial in the Cartan symbol h over Q (coefficients by power)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        cleaned = {}
        if coeffs is not None:
            if isinstance(coeffs, (int, Fraction)):
                coeffs = {0: coeffs}
            if isinstance(coeffs, (list, tuple)):
                coeffs = dict(enumerate(coeffs))
            for e, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    cleaned[int(e)] = c
        object.__setattr__(self, "coeffs", cleaned)

    @staticmethod
    def const(c) -> "HPoly":
        return HPoly({0: c})

    @staticmethod
    def h() -> "HPoly":
        return HPoly({1: 1})

    @staticmethod
    def linear(shift) -> "HPoly":
        """h + shift."""
        return HPoly({1: 1, 0: shift})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HPoly.const(other)
        if not isinstance(other, HPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HPoly.const(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return HPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return HPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HPoly.const(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HPoly({e: c * other for e, c in self.coeffs.items()})
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return HPoly(out)

    __rmul__ = __mul__

    def shift(self, a) -> "HPoly":
        """Substitute h -> h + a."""
        a = Fraction(a)
        if a == 0 or not self.coeffs:
            return self
        out = HPoly()
        for e, c in self.coeffs.items():
            term = HPoly.const(c)
            for _ in range(e):
                term = term * HPoly.linear(a)
            out = out + term
        return out

    def eval(self, h0) -> Fraction:
        h0 = Fraction(h0)
        return sum((c * h0 ** e for e, c in self.coeffs.items()), Fraction(0))

    def rational_roots(self):
        """Linear factorization h-polynomial = lead * prod (h - root) * rest.

        Returns (lead, roots, rest) where rest is monic without rational
        roots; used only for display.
        """
        if self.is_zero():
            return Fraction(0), [], HPoly.const(1)
        work = dict(self.coeffs)
        roots = []
        deg = max(work)
        lead = work[deg]
        # monic working copy as dense list
        dense = [work.get(i, Fraction(0)) / lead for i in range(deg + 1)]

        def divide_root(dense, r):
            # synthetic division by (h - r); returns None if remainder != 0
            out = [Fraction(0)] * (len(dense) - 1)
            carry = Fraction(0)
            for i in range(len(dense) - 1, 0, -1):
                carry = dense[i] + carry
                out[i - 1] = carry
                carry = carry * r
            if dense[0] + carry != 0:
                return None
            return out

        changed = True
        while len(dense) > 1 and changed:
            changed = False
            # rational root candidates p/q with p | constant, q | lead (monic: q=1)
            c0 = dense[0]
            if c0 == 0:
                roots.append(Fraction(0))
                dense = dense[1:]
                changed = True
                continue
            num = abs(c0.numerator)
            den = c0.denominator
            cands = set()
            for p in range(1, num + 1):
                if num % p == 0:
                    for q in range(1, den + 1):
                        if den % q == 0:
                            cands.add(Fraction(p, q))
                            cands.add(Fraction(-p, q))
            for r in sorted(cands):
                quo = divide_root(dense, r)
                if quo is not None:
                    roots.append(r)
                    dense = quo
                    changed = True
                    break
        rest = HPoly({i: c for i, c in enumerate(dense)})
        return lead, sorted(roots), rest

    def format(self) -> str:
        if self.is_zero():
            return "0"
        lead, roots, rest = self.rational_roots()
        parts = []
        if lead != 1 or (not roots and rest == HPoly.const(1)):
            parts.append(frac_str(lead))
        for r, mult in _root_multiplicities(roots):
            if r == 0:
                base = "h"
            elif r > 0:
                base = "(h-%s)" % frac_str(r)
            else:
                base = "(h+%s)" % frac_str(-r)
            parts.append(base if mult == 1 else "%s^%d" % (base, mult))
        if rest != HPoly.const(1):
            inner = " + ".join(
                ("%s*h^%d" % (frac_str(c), e) if e > 1 else
                 ("%s*h" % frac_str(c) if e == 1 else frac_str(c)))
                for e, c in sorted(rest.coeffs.items())
            )
            parts.append("(%s)" % inner)
        return "".join(parts) if parts else "1"

    __str__ = format

    def __repr__(self):
        return "HPoly(%s)" % self.format()


def _root_multiplicities(roots):
    out = []
    for r in roots:
        if out and out[-1][0] == r:
            out[-1][1] += 1
        else:
            out.append([r, 1])
    return [(r, m) for r, m in out]


def pochhammer_falling(start: HPoly, count: int) -> HPoly:
    """(start)(start - 1)...(start - count + 1), with empty product = 1."""
    out = HPoly.const(1)
    for i in range(count):
        out = out * (start - i)
    return out


@dataclass(frozen=True)
class NormalWord:
    """x^a y^b p(h) with p on the right."""

    a: int
    b: int
    p: HPoly


class NOSeries:
    """Normal-ordered element: optional x^alpha prefactor times a sum of
    NormalWords, no two sharing (a, b)."""

    __slots__ = ("terms", "prefactor")

    def __init__(self, terms=None, prefactor=0):
        cleaned = {}
        if terms:
            for key, p in terms.items():
                if isinstance(p, (int, Fraction)):
                    p = HPoly.const(p)
                if p.is_zero():
                    continue
                key = (int(key[0]), int(key[1]))
                if key[0] < 0 or key[1] < 0:
                    raise ValueError("negative generator power")
                if key in cleaned:
                    cleaned[key] = cleaned[key] + p
                    if cleaned[key].is_zero():
                        del cleaned[key]
                else:
                    cleaned[key] = p
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "prefactor", Fraction(prefactor))

    # -- constructors ---------------------------------------------------
    @staticmethod
    def identity() -> "NOSeries":
        return NOSeries({(0, 0): HPoly.const(1)})

    @staticmethod
    def zero() -> "NOSeries":
        return NOSeries()

    @staticmethod
    def word(a: int, b: int, p=1) -> "NOSeries":
        return NOSeries({(a, b): p if isinstance(p, HPoly) else HPoly.const(p)})

    # -- structure ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, NOSeries):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.terms == other.terms and self.prefactor == other.prefactor

    def words(self):
        for (a, b), p in sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
            yield NormalWord(a, b, p)

    def __add__(self, other: "NOSeries") -> "NOSeries":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.prefactor != other.prefactor:
            raise ValueError("cannot add series with different fractional prefactors")
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = out.get(k, HPoly()) + p
        return NOSeries(out, self.prefactor)

    def __neg__(self):
        return NOSeries({k: -p for k, p in self.terms.items()}, self.prefactor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "NOSeries":
        c = Fraction(c)
        if c == 0:
            return NOSeries.zero()
        return NOSeries({k: p * c for k, p in self.terms.items()}, self.prefactor)

    def __mul__(self, other: "NOSeries") -> "NOSeries":
        """Product in the enveloping algebra, re-normal-ordered.

        Fractional prefactors never multiply against each other: at most one
        factor may carry one, and it must be the left factor.
        """
        if not isinstance(other, NOSeries):
            return NotImplemented
        if other.prefactor != 0:
            if self.prefactor != 0:
                raise ExcludedWeight("composition of two fractional scale powers")
            raise ExcludedWeight("fractional power may appear only on the left factor")
        out = NOSeries.zero()
        for (a, b), p in self.terms.items():
            for (c, d), q in other.terms.items():
                mixed = _y_pow_x_pow(b, c)
                pshift = p.shift(2 * c - 2 * d)
                for (al, be), rr in mixed.terms.items():
                    contrib = rr.shift(-2 * d) * pshift * q
                    out = out + NOSeries({(a + al, be + d): contrib})
        return NOSeries(out.terms, self.prefactor)

    def truncate_x(self, order: int) -> "NOSeries":
        return NOSeries({k: p for k, p in self.terms.items() if k[0] < order},
                        self.prefactor)

    def format(self) -> str:
        if self.is_zero():
            return "0"
        chunks = []
        for w in self.words():
            gens = ""
            if w.a:
                gens += "x" if w.a == 1 else "x^%d" % w.a
            if w.b:
                gens += "y" if w.b == 1 else "y^%d" % w.b
            lead, roots, rest = w.p.rational_roots()
            factors = ""
            for r, mult in _root_multiplicities(roots):
                if r == 0:
                    base = "h"
                elif r > 0:
                    base = "(h-%s)" % frac_str(r)
                else:
                    base = "(h+%s)" % frac_str(-r)
                factors += base if mult == 1 else "%s^%d" % (base, mult)
            if rest != HPoly.const(1):
                inner = " + ".join(
                    ("%s*h^%d" % (frac_str(c), e) if e > 1 else
                     ("%s*h" % frac_str(c) if e == 1 else frac_str(c)))
                    for e, c in sorted(rest.coeffs.items()))
                factors += "(%s)" % inner
            coeff = ""
            if lead == -1:
                coeff = "-"
            elif lead != 1:
                coeff = frac_str(lead)
            body = coeff + gens + factors
            if not gens and not factors:
                body = frac_str(lead)
            chunks.append(body)
        text = chunks[0]
        for body in chunks[1:]:
            if body.startswith("-"):
                text += " - " + body[1:]
            else:
                text += " + " + body
        if self.prefactor != 0:
            text = "x^(%s) * [ %s ]" % (frac_str(self.prefactor), text)
        return text

    __str__ = format

    def __repr__(self):
        return "NOSeries(%s)" % self.format()


@lru_cache(maxsize=None)
def _y_pow_x_pow(b: int, c: int) -> NOSeries:
    """Normal ordering of y^b x^c."""
    if b == 0 or c == 0:
        return NOSeries.word(c, b)
    # y^b x^c = y^(b-1) [x^c y - c x^(c-1)(h+c-1)]
    head = _y_pow_x_pow(b - 1, c)          # y^(b-1) x^c
    out = NOSeries.zero()
    for (a, be), p in head.terms.items():  # ... * y
        out = out + NOSeries({(a, be + 1): p.shift(-2)})
    tail = _y_pow_x_pow(b - 1, c - 1)      # y^(b-1) x^(c-1)
    for (a, be), p in tail.terms.items():  # ... * (h + c - 1), scaled by -c
        out = out + NOSeries({(a, be): p * HPoly.linear(c - 1) * Fraction(-c)})
    return out


# ---------------------------------------------------------------------------
# normal ordering of generator words
# ---------------------------------------------------------------------------

GEN_X = "x"
GEN_Y = "y"
GEN_H = "h"


def normal_order(word) -> NOSeries:
    """Normal-order a finite generator word.

    ``word`` is an iterable of 'x', 'y', 'h', or ('x^', alpha) for a single
    fractional power which must be the leftmost letter.
    """
    series = NOSeries.identity()
    first = True
    for gen in word:
        if isinstance(gen, tuple):
            tag, alpha = gen
            if tag != "x^":
                raise ValueError("unknown generator %r" % (gen,))
            alpha = Fraction(alpha)
            if alpha.denominator == 1 and alpha >= 0:
                gen_series = NOSeries.word(int(alpha), 0)
                series = series * gen_series
            else:
                if not first:
                    raise ExcludedWeight(
                        "fractional power must be the leftmost letter")
                series = NOSeries(series.terms, alpha)
        elif gen == GEN_X:
            series = series * NOSeries.word(1, 0)
        elif gen == GEN_Y:
            series = series * NOSeries.word(0, 1)
        elif gen == GEN_H:
            series = series * NOSeries.word(0, 0, HPoly.h())
        else:
            raise ValueError("unknown generator %r" % (gen,))
        first = False
    return series


def casimir_shift(j) -> NOSeries:
    """c_j = xy + j(h - j - 1)."""
    j = Fraction(j)
    return NOSeries({(1, 1): HPoly.const(1), (0, 0): HPoly.linear(-j - 1) * j})


def casimir_products(order: int) -> NOSeries:
    """c_1 c_2 ... c_order in normal form (identity for order = 0)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    out = NOSeries.identity()
    for j in range(1, order + 1):
        out = out * casimir_shift(j)
    return out


def casimir_pochhammer_sum(order: int) -> NOSeries:
    """sum_j (order!/j!) x^j y^j (h-j-2)_(order-j), the closed form of the
    Casimir product."""
    fact = [1] * (order + 1)
    for i in range(1, order + 1):
        fact[i] = fact[i - 1] * i
    terms = {}
    for j in range(order + 1):
        coeff = Fraction(fact[order], fact[j])
        terms[(j, j)] = pochhammer_falling(HPoly.linear(-j - 2), order - j) * coeff
    return NOSeries(terms)


# ---------------------------------------------------------------------------
# Bessel / Frobenius series data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrobeniusPair:
    """Solution data of z K'' - (h0 - 2) K' + K = 0 to a truncation order.

    ``regular`` are the coefficients of the analytic branch (normalized so
    the z^(h0-1) coefficient vanishes when h0 is an integer >= 2);
    ``log_part`` are the coefficients multiplying log z (empty unless
    h0 = 2, 3, ...).
    """

    regular: tuple
    log_part: tuple
    h0: Fraction


def bessel_coefficients(h0, order: int):
    """[1/(j! (h0-2)(h0-3)...(h0-1-j))]_(j=0..order).

    For h0 = 2, 3, ... the closed form has a pole at j = h0-1; past it the
    list continues with the regular Frobenius branch under the recorded
    normalization (coefficient of z^(h0-1) set to zero), which agrees with
    the closed form below the pole.
    """
    h0 = Fraction(h0)
    if h0.denominator == 1 and 2 <= h0 <= order + 1:
        return list(frobenius_pair(h0, order).regular)
    coeffs = [Fraction(1)]
    for j in range(1, order + 1):
        coeffs.append(coeffs[-1] / (j * (h0 - 1 - j)))
    return coeffs


def frobenius_pair(h0, order: int) -> FrobeniusPair:
    """Solve z K'' - (h0-2) K' + K = 0 by the Frobenius method.

    For h0 = 2, 3, ... the analytic recursion obstructs at z^(h0-1); the
    log branch b_j z^j log z (j >= h0-1) is switched on with the matching
    condition b_(h0-1) = f_(h0-2) / (1 - h0), and the free regular
    coefficient f_(h0-1) is set to zero.
    """
    h0 = Fraction(h0)
    logcase = h0.denominator == 1 and h0 >= 2
    f = [Fraction(1)] + [Fraction(0)] * order
    if not logcase:
        for j in range(order):
            f[j + 1] = -f[j] / ((j + 1) * (j + 2 - h0))
        return FrobeniusPair(tuple(f), (), h0)
    m = int(h0) - 1  # index where the analytic recursion breaks
    b = [Fraction(0)] * (order + 1)
    for j in range(order):
        # L[F] + 2B' - (h0-1) B/z = 0 termwise:
        # (j+1)(j+2-h0) f_(j+1) + f_j + (2(j+1) - (h0-1)) b_(j+1) = 0
        bcoef = Fraction(2 * (j + 1)) - (h0 - 1)
        if j + 1 == m:
            # f_m has zero coefficient: solve for b_m, leave f_m = 0
            if bcoef == 0:
                raise ExcludedWeight("frobenius matching degenerate")
            b[m] = -f[j] / bcoef
            f[m] = Fraction(0)
        else:
            # b_(j+1) is fixed by the log-branch recursion (zero below z^m)
            if j + 1 > m:
                b[j + 1] = -b[j] / ((j + 1) * (j + 2 - h0))
            f[j + 1] = -(f[j] + bcoef * b[j + 1]) / ((j + 1) * (j + 2 - h0))
    return FrobeniusPair(tuple(f), tuple(b), h0)


def frobenius_residual(pair: FrobeniusPair):
    """Exact coefficients of the ODE residual of regular + log z * log_part.

    Returns a list of (power, log_grade, value) triples that must all be
    zero up to the truncation order.
    """
    h0 = pair.h0
    f = list(pair.regular)
    b = list(pair.log_part) if pair.log_part else [Fraction(0)] * len(f)
    while len(b) < len(f):
        b.append(Fraction(0))
    out = []
    for j in range(len(f) - 1):
        plain = (j + 1) * (j + 2 - h0) * f[j + 1] + f[j] \
            + (Fraction(2 * (j + 1)) - (h0 - 1)) * b[j + 1]
        logc = (j + 1) * (j + 2 - h0) * b[j + 1] + b[j]
        out.append((j, 0, plain))
        out.append((j, 1, logc))
    return out


def bessel_noseries(h0, order: int) -> NOSeries:
    """:K^(h0)(z): truncated at x-order ``order`` (coefficients bound at h0)."""
    coeffs = bessel_coefficients(h0, order)
    return NOSeries({(j, j): HPoly.const(c) for j, c in enumerate(coeffs)})


def first_solution_operator(h0, order: int) -> NOSeries:
    """prod_(j=1..order) c_j / (j (h0 - j - 1)): normalized first-kind series."""
    h0 = Fraction(h0)
    norm = Fraction(1)
    for j in range(1, order + 1):
        denom = Fraction(j) * (h0 - j - 1)
        if denom == 0:
            raise ExcludedWeight(
                "first-kind series pole at j = %d: h0 = %s" % (j, frac_str(h0)))
        norm /= denom
    return casimir_products(order).scale(norm)


def second_solution_operator(h0, order: int) -> NOSeries:
    """x^(h0-1) prod_(j=1..order) c_j / (j (1 - j - h0))."""
    h0 = Fraction(h0)
    norm = Fraction(1)
    for j in range(1, order + 1):
        denom = Fraction(j) * (1 - j - h0)
        if denom == 0:
            raise ExcludedWeight(
                "second-kind series pole at j = %d: h0 = %s" % (j, frac_str(h0)))
        norm /= denom
    series = casimir_products(order).scale(norm)
    return NOSeries(series.terms, h0 - 1)


@dataclass(frozen=True)
class LogOperator:
    """Structured solution-generating operator for h0 = 2, 3, ...

    regular:    normal-ordered series built on the Frobenius analytic branch
                (polynomial head F and its tail);
    log_branch: :K^(2-h0)(z): series that multiplies
                sigma^(h0-1) (log sigma - log tau) y^(h0-1);
    scale:      -1/((h0-1)! (h0-2)!), the recorded normalization of the
                log branch relative to the regular head.
    """

    h0: Fraction
    regular: NOSeries
    log_branch: NOSeries
    y_power: int
    prefactor_exponent: Fraction
    scale: Fraction
    frobenius: FrobeniusPair


def log_solution_operator(h0, order: int) -> LogOperator:
    h0 = Fraction(h0)
    if h0.denominator != 1 or h0 < 2:
        raise ExcludedWeight("log operator needs h0 in {2, 3, ...}")
    h0i = int(h0)
    pair = frobenius_pair(h0, order)
    regular = NOSeries({(j, j): HPoly.const(c)
                        for j, c in enumerate(pair.regular)})
    dual = bessel_noseries(2 - h0, max(order - (h0i - 1), 0))
    fact = 1
    for i in range(1, h0i):
        fact *= i
    fact2 = 1
    for i in range(1, h0i - 1):
        fact2 *= i
    return LogOperator(
        h0=h0,
        regular=regular,
        log_branch=dual,
        y_power=h0i - 1,
        prefactor_exponent=h0 - 1,
        scale=Fraction(-1, fact * fact2),
        frobenius=pair,
    )


def series_solutions(mode: str, h0, order: int):
    """Selector family: bessel | frobenius | first | second | log_op."""
    if mode == "bessel":
        return bessel_coefficients(h0, order)
    if mode == "frobenius":
        return frobenius_pair(h0, order)
    if mode == "first":
        return first_solution_operator(h0, order)
    if mode == "second":
        return second_solution_operator(h0, order)
    if mode == "log_op":
        return log_solution_operator(h0, order)
    raise ValueError("unknown mode %r" % mode)


# ---------------------------------------------------------------------------
# application against a concrete representation
# ---------------------------------------------------------------------------

def apply_noseries(series: NOSeries, section, x_action, y_action, h_value,
                   add, scale, sigma_power=None):
    """Evaluate a normal-ordered series on a section.

    ``h_value`` is d + 2w of the section the polynomials meet (they sit to
    the right, so they bind at the input weight); each y lowers the weight
    by 2 in h and each x raises it, which is already accounted for by normal
    ordering.  ``sigma_power(alpha, s)`` applies the fractional prefactor.
    """
    h0 = Fraction(h_value)
    # cache y^b section applications
    max_b = max((b for (_, b) in series.terms), default=0)
    ys = [section]
    for _ in range(max_b):
        ys.append(y_action(ys[-1]))
    total = None
    for (a, b), p in sorted(series.terms.items()):
        c = p.eval(h0)
        if c == 0:
            continue
        term = ys[b]
        for _ in range(a):
            term = x_action(term)
        term = scale(term, c)
        total = term if total is None else add(total, term)
    if total is None:
        return None
    if series.prefactor != 0:
        if sigma_power is None:
            raise ValueError("series has a fractional prefactor; need sigma_power")
        total = sigma_power(series.prefactor, total)
    return total

"""Exact sparse multivariate polynomials over the rationals.

Variables are small integers: ``RVAR`` (= 0) is the radial coordinate r,
``1..n`` are boundary coordinates x1..xn, and ``LOGVAR`` (= -1) is a formal
symbol for log r.  There is no floating point anywhere: coefficients are
``fractions.Fraction``.

d/dr is never taken at the polynomial level.  Instead :meth:`Poly.r_dr`
implements the Euler operator r*d/dr, which is exactly polynomial even on
log r terms thanks to the rule r * d/dr(log r) = 1.  Callers that need a
bare d/dr (the form layer) obtain it by combining ``r_dr`` with a global
power offset.
"""

from __future__ import annotations

from fractions import Fraction

RVAR = 0
LOGVAR = -1

Monomial = tuple  # tuple of (var, exp) pairs, sorted by var, exp >= 1


def _var_name(v: int) -> str:
    if v == RVAR:
        return "r"
    if v == LOGVAR:
        return "log"
    return "x%d" % v


def _var_from_name(s: str) -> int:
    if s == "r":
        return RVAR
    if s == "log":
        return LOGVAR
    if s.startswith("x"):
        return int(s[1:])
    raise ValueError("unknown variable %r" % s)


class Poly:
    """Immutable sparse polynomial; ``terms`` maps monomials to coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    cleaned[mono] = cleaned.get(mono, Fraction(0)) + c
                    if cleaned[mono] == 0:
                        del cleaned[mono]
        object.__setattr__(self, "terms", cleaned)

    # -- constructors -------------------------------------------------
    @staticmethod
    def _raw(terms: dict) -> "Poly":
        """Internal: wrap an already-clean dict (nonzero Fraction values)."""
        p = Poly.__new__(Poly)
        object.__setattr__(p, "terms", terms)
        return p

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({(): c}) if c != 0 else Poly()

    @staticmethod
    def var(v: int, exp: int = 1) -> "Poly":
        if exp == 0:
            return Poly.const(1)
        return Poly({((v, exp),): Fraction(1)})

    one = None  # set below

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
        p = Poly.__new__(Poly)
        object.__setattr__(p, "terms", out)
        return p

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        object.__setattr__(p, "terms", {m: -c for m, c in self.terms.items()})
        return p

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            if c == 0 or not self.terms:
                return Poly()
            p = Poly.__new__(Poly)
            object.__setattr__(p, "terms", {m: v * c for m, v in self.terms.items()})
            return p
        if not self.terms or not other.terms:
            return Poly()
        out = {}
        for m1, c1 in self.terms.items():
            d1 = dict(m1)
            for m2, c2 in other.terms.items():
                d = dict(d1)
                for v, e in m2:
                    d[v] = d.get(v, 0) + e
                key = tuple(sorted(d.items()))
                s = out.get(key)
                c = c1 * c2
                if s is None:
                    out[key] = c
                else:
                    s = s + c
                    if s == 0:
                        del out[key]
                    else:
                        out[key] = s
        p = Poly.__new__(Poly)
        object.__setattr__(p, "terms", out)
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus ------------------------------------------------------
    def diff(self, v: int) -> "Poly":
        """Partial derivative w.r.t. a boundary variable (not r, not log)."""
        if v in (RVAR, LOGVAR):
            raise ValueError("use r_dr for radial derivatives")
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if e == 0:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            key = tuple(sorted(d.items()))
            s = out.get(key)
            s = c * e if s is None else s + c * e
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return Poly._raw(out)

    def r_dr(self) -> "Poly":
        """Euler operator r*d/dr, with r*d/dr(log r) = 1.  Always polynomial."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            a = d.get(RVAR, 0)
            if a:
                s = out.get(m)
                s = c * a if s is None else s + c * a
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
            lg = d.get(LOGVAR, 0)
            if lg:
                if lg == 1:
                    del d[LOGVAR]
                else:
                    d[LOGVAR] = lg - 1
                key = tuple(sorted(d.items()))
                s = out.get(key)
                s = c * lg if s is None else s + c * lg
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return Poly._raw(out)

    # -- r-structure ----------------------------------------------------
    def r_valuation(self):
        """Smallest power of r over all terms; None for the zero polynomial."""
        if not self.terms:
            return None
        return min(dict(m).get(RVAR, 0) for m in self.terms)

    def shift_r(self, k: int) -> "Poly":
        """Multiply by r**k (k may be negative; exactness is asserted)."""
        if k == 0 or not self.terms:
            return self
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            a = d.get(RVAR, 0) + k
            if a < 0:
                raise ValueError("inexact division by r")
            if a == 0:
                d.pop(RVAR, None)
            else:
                d[RVAR] = a
            out[tuple(sorted(d.items()))] = c
        return Poly._raw(out)

    def r_coefficient(self, j: int) -> "Poly":
        """Polynomial coefficient of r**j (result is r-free)."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(RVAR, 0) != j:
                continue
            d.pop(RVAR, None)
            out[tuple(sorted(d.items()))] = c
        return Poly._raw(out)

    def subs_r0(self) -> "Poly":
        """Set r = 0.  Terms carrying log r must vanish with r; else error."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(RVAR, 0) > 0:
                continue
            if d.get(LOGVAR, 0) > 0:
                raise ValueError("log r term survives at r=0")
            out[m] = c
        return Poly._raw(out)

    def log_grade(self, g: int) -> "Poly":
        """Coefficient of (log r)**g as a log-free polynomial."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(LOGVAR, 0) != g:
                continue
            d.pop(LOGVAR, None)
            out[tuple(sorted(d.items()))] = c
        return Poly._raw(out)

    def max_log_power(self) -> int:
        mx = 0
        for m in self.terms:
            mx = max(mx, dict(m).get(LOGVAR, 0))
        return mx

    def uses_var(self, v: int) -> bool:
        return any(dict(m).get(v, 0) for m in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e for _, e in m) for m in self.terms)

    def evaluate(self, values: dict) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for var, e in m:
                v *= Fraction(values[var]) ** e
            total += v
        return total

    # -- formatting ------------------------------------------------------
    def format(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(
            self.terms.items(),
            key=lambda kv: (sum(e for _, e in kv[0]), kv[0]),
        )
        parts = []
        for m, c in items:
            factors = []
            for v, e in m:
                factors.append(_var_name(v) if e == 1 else "%s^%d" % (_var_name(v), e))
            mono = "*".join(factors)
            coeff = str(c)
            if mono:
                body = mono if abs(c) == 1 else "%s*%s" % (str(abs(c)), mono)
                sign = "-" if c < 0 else "+"
            else:
                body = str(abs(c))
                sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += " %s %s" % (sign, body)
        return text

    __str__ = format

    def __repr__(self):
        return "Poly(%s)" % self.format()

    @staticmethod
    def parse(text: str) -> "Poly":
        text = text.strip()
        if text in ("", "0"):
            return Poly()
        # split into signed chunks
        chunks = []
        buf = ""
        sign = 1
        i = 0
        if text[0] == "-":
            sign = -1
            i = 1
        elif text[0] == "+":
            i = 1
        while i < len(text):
            ch = text[i]
            if ch in "+-" and buf.strip():
                chunks.append((sign, buf.strip()))
                sign = 1 if ch == "+" else -1
                buf = ""
            else:
                buf += ch
            i += 1
        if buf.strip():
            chunks.append((sign, buf.strip()))
        total = Poly()
        for sg, chunk in chunks:
            coeff = Fraction(sg)
            mono = {}
            for factor in chunk.split("*"):
                factor = factor.strip()
                if not factor:
                    continue
                if factor[0].isdigit():
                    coeff *= Fraction(factor)
                    continue
                if "^" in factor:
                    name, _, e = factor.partition("^")
                    v = _var_from_name(name.strip())
                    mono[v] = mono.get(v, 0) + int(e)
                else:
                    v = _var_from_name(factor)
                    mono[v] = mono.get(v, 0) + 1
            total = total + Poly({tuple(sorted(mono.items())): coeff})
        return total


Poly.one = Poly.const(1)


def frac_str(q) -> str:
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator) if q.denominator != 1 else str(q.numerator)


def parse_frac(s) -> Fraction:
    return Fraction(str(s))

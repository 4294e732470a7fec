"""Coefficient domains shared by every other module.

Two scalar backends coexist.  Generic representation labels force numeric
coefficients (plain floats, or mpmath values when extended precision is
requested).  When all tensor factors carry the same label the braid matrices
close over exact Laurent polynomials in a single variable, which below is
always the combination x = q**(-gamma); in that regime the square-root and
bare-q factors appearing in intermediate formulas cancel identically.

On top of :class:`Laurent` a small rational-function field supports exact
kernel computations, and :class:`Phase` records the overall prefactor that
is kept out of emitted braid matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


# ---------------------------------------------------------------------------
# tolerances

@dataclass(frozen=True)
class Tolerances:
    """Central numeric tolerance policy.

    ``abs_zero``/``rel_zero`` are the generic comparison pair, the rest are
    task-specific thresholds used by the higher modules.  ``sv_cutoff`` is
    relative to the largest singular value when deciding numerical rank.
    """

    abs_zero: float = 1e-12
    rel_zero: float = 1e-10
    sv_cutoff: float = 1e-10
    kernel_residual: float = 1e-9
    span_residual: float = 1e-8
    eigen: float = 1e-8
    route_match: float = 1e-8
    braid_residual: float = 1e-9
    operator_identity: float = 1e-10


DEFAULT_TOLS = Tolerances()


def close(a, b, *, abs_tol=DEFAULT_TOLS.abs_zero, rel_tol=DEFAULT_TOLS.rel_zero):
    """True when a and b agree to within abs_tol + rel_tol*max(|a|, |b|)."""
    a = float(a)
    b = float(b)
    return abs(a - b) <= abs_tol + rel_tol * max(abs(a), abs(b))


def is_zero(x, *, abs_tol=DEFAULT_TOLS.abs_zero, rel_tol=DEFAULT_TOLS.rel_zero, scale=0.0):
    """Zero test with an optional problem scale for the relative part."""
    return abs(float(x)) <= abs_tol + rel_tol * abs(scale)


# ---------------------------------------------------------------------------
# q-deformed numbers

def q_number(gamma, q, *, classical=False):
    """The symmetric q-number (q**gamma - q**-gamma) / (q - 1/q).

    ``q = 1`` is a removable singularity and is rejected; callers wanting
    the classical limit pass ``classical=True`` and get gamma back.
    Invariant under q -> 1/q.
    """
    if classical:
        return gamma
    if q <= 0:
        raise ValueError("q must be positive, got %r" % (q,))
    if q == 1:
        raise ValueError("q=1 is a removable singularity; use classical=True")
    return (q ** gamma - q ** (-gamma)) / (q - 1 / q)


# ---------------------------------------------------------------------------
# exact Laurent polynomials

def _coerce_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError("Laurent coefficients must be exact, got %r" % (value,))


class Laurent:
    """Sparse Laurent polynomial with Fraction coefficients.

    Stored as a dict exponent -> coefficient with no zero entries, after
    the fashion of a sparse polynomial table.  Exponents may be negative.
    Supports ring arithmetic, substitution x -> 1/x, numeric evaluation
    and a stable JSON form.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            for e, c in terms.items():
                c = _coerce_fraction(c)
                if c:
                    data[int(e)] = c
        self.terms = data

    # -- constructors

    @classmethod
    def const(cls, value):
        return cls({0: value})

    @classmethod
    def x(cls, power=1, coeff=1):
        """The monomial coeff * x**power."""
        return cls({power: coeff})

    # -- queries

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def min_exp(self):
        if not self.terms:
            raise ValueError("zero polynomial has no exponent range")
        return min(self.terms)

    def max_exp(self):
        if not self.terms:
            raise ValueError("zero polynomial has no exponent range")
        return max(self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def coeff(self, e):
        return self.terms.get(e, Fraction(0))

    # -- arithmetic

    @staticmethod
    def _coerce(other):
        if isinstance(other, Laurent):
            return other
        if isinstance(other, (int, Fraction)):
            return Laurent.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        data = dict(self.terms)
        for e, c in other.terms.items():
            s = data.get(e, Fraction(0)) + c
            if s:
                data[e] = s
            else:
                data.pop(e, None)
        out = Laurent.__new__(Laurent)
        out.terms = data
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Laurent.__new__(Laurent)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        data = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = data.get(e, Fraction(0)) + c1 * c2
                if s:
                    data[e] = s
                else:
                    data.pop(e, None)
        out = Laurent.__new__(Laurent)
        out.terms = data
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            # only monomials are units in the Laurent ring
            if not self.is_monomial():
                raise ValueError("negative powers only for monomials")
            ((e, c),) = self.terms.items()
            return Laurent({n * e: c ** n})
        result = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- substitutions and evaluation

    def substitute_inverse(self):
        """Return self with x replaced by 1/x."""
        return Laurent({-e: c for e, c in self.terms.items()})

    def __call__(self, value):
        """Numeric evaluation at x = value."""
        total = 0.0 * value if not isinstance(value, float) else 0.0
        for e, c in self.terms.items():
            total = total + (c.numerator / c.denominator) * value ** e
        return total

    # -- presentation

    def terms_list(self):
        return sorted(self.terms.items())

    def to_json(self):
        return {"terms": [[e, str(c)] for e, c in self.terms_list()]}

    @classmethod
    def from_json(cls, obj):
        return cls({int(e): Fraction(c) for e, c in obj["terms"]})

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items(), reverse=True):
            if e == 0:
                body = str(c)
            else:
                xs = "x" if e == 1 else "x^%d" % e
                if c == 1:
                    body = xs
                elif c == -1:
                    body = "-" + xs
                else:
                    body = "%s*%s" % (c, xs)
            bits.append(body)
        out = bits[0]
        for b in bits[1:]:
            out += ("+" + b) if not b.startswith("-") else b
        return out

    def __repr__(self):
        return "Laurent(%s)" % str(self)


L_ZERO = Laurent()
L_ONE = Laurent.const(1)
X = Laurent.x()


# -- exact division helpers (used by the rational-function field)

def _ordinary(l):
    """Split a nonzero Laurent as (shift, ascending coefficient list)."""
    lo = l.min_exp()
    hi = l.max_exp()
    coeffs = [l.coeff(e) for e in range(lo, hi + 1)]
    return lo, coeffs


def _poly_divmod(a, b):
    """Polynomial divmod on ascending coefficient lists over Fraction."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        if c:
            q[i - db] = c
            for j, bc in enumerate(b):
                a[i - db + j] -= c * bc
    while a and not a[-1]:
        a.pop()
    return q, a


def _poly_gcd(a, b):
    """Monic gcd of two ascending coefficient lists (either may be empty)."""
    a = list(a)
    b = list(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def _from_coeffs(shift, coeffs):
    return Laurent({shift + i: c for i, c in enumerate(coeffs) if c})


def laurent_divmod(a, b):
    """Exact quotient and remainder of Laurent polynomials.

    The remainder convention follows the ordinary-polynomial division of
    the x-shifted representatives; when the division is exact the
    remainder is zero regardless of shifts.
    """
    if b.is_zero():
        raise ZeroDivisionError("Laurent division by zero")
    if a.is_zero():
        return L_ZERO, L_ZERO
    sa, ca = _ordinary(a)
    sb, cb = _ordinary(b)
    q, r = _poly_divmod(ca, cb)
    return _from_coeffs(sa - sb, q), _from_coeffs(sa, r)


class RationalFunction:
    """Element of the fraction field of :class:`Laurent`.

    Normal form: the denominator is an ordinary polynomial with nonzero
    constant term, monic leading coefficient, and no common factor with
    the numerator; any power of x is folded into the numerator.  This
    makes equality structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=L_ONE):
        num = Laurent._coerce(num)
        den = Laurent._coerce(den)
        if num is None or den is None:
            raise TypeError("RationalFunction needs Laurent-compatible parts")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = L_ZERO
            self.den = L_ONE
            return
        sn, cn = _ordinary(num)
        sd, cd = _ordinary(den)
        g = _poly_gcd(cn, cd)
        if len(g) > 1:
            cn, _ = _poly_divmod(cn, g)
            cd, _ = _poly_divmod(cd, g)
        lead = cd[-1]
        cn = [c / lead for c in cn]
        cd = [c / lead for c in cd]
        self.num = _from_coeffs(sn - sd, cn)
        self.den = _from_coeffs(0, cd)

    @classmethod
    def _wrap(cls, other):
        if isinstance(other, RationalFunction):
            return other
        co = Laurent._coerce(other)
        if co is None:
            return None
        return cls(co)

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = RationalFunction.__new__(RationalFunction)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, value):
        return self.num(value) / self.den(value)

    def as_laurent(self):
        """Return the underlying Laurent polynomial, or raise if not one."""
        q, r = laurent_divmod(self.num, self.den)
        if not r.is_zero():
            raise ValueError("%r is not polynomial" % (self,))
        return q

    def __repr__(self):
        if self.den == L_ONE:
            return "RationalFunction(%s)" % (self.num,)
        return "RationalFunction((%s)/(%s))" % (self.num, self.den)


RF_ZERO = RationalFunction(L_ZERO)
RF_ONE = RationalFunction(L_ONE)


# ---------------------------------------------------------------------------
# global phase bookkeeping

@dataclass(frozen=True)
class Phase:
    """Overall prefactor kept outside emitted matrix entries.

    total value = factor * (q**(-2*c*gamma)) ** exponent.  Homogeneous
    builds only touch the exponent (one unit per braid generator, minus
    one per inverse); inhomogeneous builds keep their sector-dependent
    prefactors inside the matrix and leave the phase trivial, or record a
    plain numeric factor where a single common one exists.
    """

    exponent: Fraction = Fraction(0)
    factor: float = 1.0

    def __mul__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.exponent + other.exponent, self.factor * other.factor)

    def is_trivial(self):
        return self.exponent == 0 and self.factor == 1.0

    def value(self, q=None, gamma=None, c=None):
        """Numeric value; q, gamma, c are needed only for a nonzero exponent."""
        v = self.factor
        if self.exponent:
            if q is None or gamma is None or c is None:
                raise ValueError("phase exponent needs q, gamma, c to evaluate")
            v = v * (q ** (-2.0 * c * gamma)) ** float(self.exponent)
        return v

    def to_json(self):
        return {"exponent": str(self.exponent), "factor": repr(float(self.factor))}


def numeric_to_json(value):
    """Decimal-string form of a numeric scalar, round-trip safe for floats."""
    return repr(float(value))

"""Deformed oscillator representations and their tensor-product actions.

Each tensor factor carries an irreducible lowest-weight representation
labelled by a pair (gamma, c): on the occupation basis h_0, h_1, ... the
lowering and raising operators act with matrix elements
sqrt([gamma]_q) * sqrt(m), the number-type generator has eigenvalue m + c,
and the central group-like generator has eigenvalue q**(gamma/2).

States of an n-fold product are kept as sparse linear combinations of
:class:`TensorState`, which records both the occupation numbers and the
arrangement ("sector") telling which representation label sits in which
slot.  Braid generators permute the arrangement; everything else leaves
it alone.  All public slot and generator indices are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

from .scalars import q_number

GENERATORS = ("a+", "a-", "e", "g+", "g-")


class BraidoscError(Exception):
    """Base class for failures raised by this package."""


@dataclass(frozen=True)
class RepLabel:
    """Representation label (gamma, c); gamma must not vanish."""

    gamma: float
    c: float

    def __post_init__(self):
        if self.gamma == 0:
            raise ValueError("gamma = 0 does not label an irreducible module")


class Context:
    """Immutable bundle of representation labels and the deformation q.

    The labels tuple fixes the available representations; slot contents of
    individual states are permutations of it.  Enforces the hermitian
    regime [gamma]_q > 0 for every label.  ``precision`` switches scalar
    arithmetic to mpmath with at least that many decimal digits (matrix
    factorizations elsewhere still run in double precision).
    """

    def __init__(self, labels, q, precision=None):
        self.labels = tuple(labels)
        if not self.labels:
            raise ValueError("need at least one representation label")
        for lab in self.labels:
            if not isinstance(lab, RepLabel):
                raise TypeError("labels must be RepLabel instances")
        if q <= 0 or q == 1:
            raise ValueError("q must be positive and different from 1")
        self.precision = precision
        if precision is not None:
            import mpmath

            if mpmath.mp.dps < precision:
                mpmath.mp.dps = precision
            self._mp = mpmath
            q = mpmath.mpf(q)
        else:
            self._mp = None
        self.q = q
        self.qn = tuple(q_number(lab.gamma, q) for lab in self.labels)
        for lab, qn in zip(self.labels, self.qn):
            if qn <= 0:
                raise ValueError("[gamma]_q <= 0 for label %r at q=%s" % (lab, q))
        self.sqrt_qn = tuple(self.sqrt(v) for v in self.qn)
        self.qg_half = tuple(self.qpow(lab.gamma / 2) for lab in self.labels)
        self._canon = {}

    # -- scalar helpers (numeric backend, mpmath-aware)

    def sqrt(self, v):
        if self._mp is not None:
            return self._mp.sqrt(v)
        return math.sqrt(v)

    def qpow(self, exponent, inverse=False):
        """q**exponent, or q**-exponent under the q -> 1/q substitution."""
        if inverse:
            exponent = -exponent
        return self.q ** exponent

    # -- structure

    @property
    def n(self):
        return len(self.labels)

    def is_homogeneous(self):
        return len(set(self.labels)) == 1

    def gamma_total(self):
        return sum(lab.gamma for lab in self.labels)

    def c_total(self):
        return sum(lab.c for lab in self.labels)

    def canonical_perm(self, perm):
        """Stable representative of an arrangement.

        Permutations that place equal labels identically describe the same
        physical sector; the representative assigns, slot by slot, the
        smallest unused label index with the required value.  With all
        labels equal this collapses every permutation to the identity.
        """
        perm = tuple(perm)
        try:
            return self._canon[perm]
        except KeyError:
            pass
        want = [self.labels[p] for p in perm]
        used = [False] * self.n
        out = []
        for lab in want:
            for i in range(self.n):
                if not used[i] and self.labels[i] == lab:
                    used[i] = True
                    out.append(i)
                    break
            else:
                raise ValueError("arrangement uses a label not in the context")
        canon = tuple(out)
        self._canon[perm] = canon
        return canon

    def identity_perm(self):
        return tuple(range(self.n))

    def swapped_perm(self, perm, slot):
        """Canonical arrangement after exchanging slots slot, slot+1 (1-based)."""
        g = slot - 1
        lst = list(perm)
        lst[g], lst[g + 1] = lst[g + 1], lst[g]
        return self.canonical_perm(lst)

    def distinct_sectors(self):
        """Sorted canonical arrangements of the label multiset."""
        seen = {self.canonical_perm(p) for p in permutations(range(self.n))}
        return sorted(seen)


def homogeneous_context(n, gamma, c, q, precision=None):
    """Context with n equal labels."""
    return Context([RepLabel(gamma, c)] * n, q, precision=precision)


def marked_context(n, base, special, position, q, precision=None):
    """Context with one distinguished label at the given slot (1-based)."""
    if not 1 <= position <= n:
        raise ValueError("position out of range")
    labels = [base] * n
    labels[position - 1] = special
    return Context(labels, q, precision=precision)


@dataclass(frozen=True)
class TensorState:
    """Product basis state: arrangement plus occupation numbers per slot."""

    perm: tuple
    occ: tuple

    def total_occupation(self):
        return sum(self.occ)


class WeightVector:
    """Sparse linear combination of tensor states with real coefficients.

    The inner product treats the states as orthonormal, with states in
    different sectors orthogonal by construction (they live in different
    direct summands).
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = {}
        if terms:
            for st, co in terms.items():
                if co:
                    self.terms[st] = co

    def copy(self):
        out = WeightVector(self.ctx)
        out.terms = dict(self.terms)
        return out

    def is_zero(self):
        return not self.terms

    def __iter__(self):
        return iter(self.terms.items())

    def add_term(self, state, coeff):
        s = self.terms.get(state, 0) + coeff
        if s:
            self.terms[state] = s
        else:
            self.terms.pop(state, None)

    def __add__(self, other):
        if not isinstance(other, WeightVector):
            return NotImplemented
        if other.ctx is not self.ctx:
            raise ValueError("vectors from different contexts")
        out = self.copy()
        for st, co in other.terms.items():
            out.add_term(st, co)
        return out

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, scalar):
        out = WeightVector(self.ctx)
        for st, co in self.terms.items():
            v = co * scalar
            if v:
                out.terms[st] = v
        return out

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def inner(self, other):
        """Euclidean pairing in the orthonormal tensor basis (real)."""
        if len(other.terms) < len(self.terms):
            return other.inner(self)
        total = 0.0
        for st, co in self.terms.items():
            oc = other.terms.get(st)
            if oc is not None:
                total += co * oc
        return total

    def norm(self):
        return self.ctx.sqrt(self.inner(self)) if self.terms else 0.0

    def sectors(self):
        return sorted({st.perm for st in self.terms})

    def to_json(self):
        items = sorted(self.terms.items(), key=lambda kv: (kv[0].perm, kv[0].occ))
        return {
            "context": {
                "labels": [[lab.gamma, lab.c] for lab in self.ctx.labels],
                "q": float(self.ctx.q),
            },
            "terms": [
                {"assignment": list(st.perm), "occ": list(st.occ), "coeff": repr(float(co))}
                for st, co in items
            ],
        }

    def __repr__(self):
        bits = ", ".join(
            "%s%s: %.6g" % (st.occ, "" if st.perm == self.ctx.identity_perm() else st.perm, co)
            for st, co in sorted(self.terms.items(), key=lambda kv: (kv[0].perm, kv[0].occ))
        )
        return "WeightVector{%s}" % bits


def basis_state(ctx, occ, perm=None):
    """Unit vector for the given occupations (and optional arrangement)."""
    occ = tuple(int(m) for m in occ)
    if len(occ) != ctx.n or any(m < 0 for m in occ):
        raise ValueError("bad occupation tuple %r" % (occ,))
    perm = ctx.identity_perm() if perm is None else ctx.canonical_perm(perm)
    return WeightVector(ctx, {TensorState(perm, occ): 1.0})


def vacuum(ctx, perm=None):
    """All slots in their ground state."""
    return basis_state(ctx, (0,) * ctx.n, perm)


def _replace(tup, idx, value):
    lst = list(tup)
    lst[idx] = value
    return tuple(lst)


def apply_generator(gen, slot, vec):
    """Single-slot action of one algebra generator (slot is 1-based).

    gen is one of "a+", "a-" (ladder), "e" (number plus c), "g+", "g-"
    (the group-like q**(+-gamma/2)).
    """
    ctx = vec.ctx
    if not 1 <= slot <= ctx.n:
        raise ValueError("slot out of range")
    g = slot - 1
    out = WeightVector(ctx)
    for st, co in vec.terms.items():
        idx = st.perm[g]
        m = st.occ[g]
        if gen == "a-":
            if m == 0:
                continue
            out.add_term(TensorState(st.perm, _replace(st.occ, g, m - 1)),
                         co * ctx.sqrt_qn[idx] * ctx.sqrt(m))
        elif gen == "a+":
            out.add_term(TensorState(st.perm, _replace(st.occ, g, m + 1)),
                         co * ctx.sqrt_qn[idx] * ctx.sqrt(m + 1))
        elif gen == "e":
            out.add_term(st, co * (m + ctx.labels[idx].c))
        elif gen == "g+":
            out.add_term(st, co * ctx.qg_half[idx])
        elif gen == "g-":
            out.add_term(st, co / ctx.qg_half[idx])
        else:
            raise ValueError("unknown generator %r" % (gen,))
    return out


def apply_coproduct(gen, vec):
    """Iterated-coproduct action of a generator on the full tensor product.

    For the ladder generators the j-th summand acts on slot j dressed with
    q**(-gamma/2) factors on earlier slots and q**(+gamma/2) on later ones;
    "e" is the plain sum and "g+-" the product over slots.
    """
    ctx = vec.ctx
    n = ctx.n
    if gen == "e":
        out = WeightVector(ctx)
        for st, co in vec.terms.items():
            shift = sum(st.occ) + ctx.c_total()
            out.add_term(st, co * shift)
        return out
    if gen in ("g+", "g-"):
        # central: eigenvalue q**(+-sum(gamma)/2) on every state
        total = ctx.qpow(ctx.gamma_total() / 2, inverse=(gen == "g-"))
        return vec * total
    if gen not in ("a+", "a-"):
        raise ValueError("unknown generator %r" % (gen,))
    lowering = gen == "a-"
    out = WeightVector(ctx)
    for st, co in vec.terms.items():
        gammas = [ctx.labels[p].gamma for p in st.perm]
        for j in range(n):
            m = st.occ[j]
            if lowering and m == 0:
                continue
            idx = st.perm[j]
            dress = ctx.qpow((sum(gammas[j + 1:]) - sum(gammas[:j])) / 2)
            if lowering:
                amp = ctx.sqrt_qn[idx] * ctx.sqrt(m)
                new = TensorState(st.perm, _replace(st.occ, j, m - 1))
            else:
                amp = ctx.sqrt_qn[idx] * ctx.sqrt(m + 1)
                new = TensorState(st.perm, _replace(st.occ, j, m + 1))
            out.add_term(new, co * dress * amp)
    return out


def apply_intertwiner(k, vec):
    """Ladder between lowest-weight levels acting on slots k, k+1 (1-based).

    On a two-slot state h_m (x) h_m' with labels a, b it produces

        q**(-gamma_a/2) sqrt(m+1) sqrt([gamma_b]) h_{m+1} (x) h_{m'}
      - sqrt([gamma_a]) q**(+gamma_b/2) sqrt(m'+1) h_m (x) h_{m'+1}.

    It commutes with the coproduct lowering operator, raises the "e"
    weight by one and leaves the arrangement unchanged.
    """
    ctx = vec.ctx
    if not 1 <= k <= ctx.n - 1:
        raise ValueError("intertwiner index out of range")
    g = k - 1
    out = WeightVector(ctx)
    for st, co in vec.terms.items():
        ia = st.perm[g]
        ib = st.perm[g + 1]
        m = st.occ[g]
        mp = st.occ[g + 1]
        out.add_term(TensorState(st.perm, _replace(st.occ, g, m + 1)),
                     co / ctx.qg_half[ia] * ctx.sqrt(m + 1) * ctx.sqrt_qn[ib])
        out.add_term(TensorState(st.perm, _replace(st.occ, g + 1, mp + 1)),
                     -co * ctx.sqrt_qn[ia] * ctx.qg_half[ib] * ctx.sqrt(mp + 1))
    return out


def apply_monomial(powers, vec):
    """Apply a product of intertwiners with the given exponents (index k-1)."""
    for k, e in enumerate(powers, start=1):
        for _ in range(e):
            vec = apply_intertwiner(k, vec)
    return vec


def apply_casimir(vec):
    """Quadratic Casimir of the full coproduct algebra.

    Equal to [sum(gamma)]_q * Delta(e) - Delta(a+) Delta(a-); on a lowest
    weight vector of level e it has eigenvalue [sum(gamma)]_q * e.
    """
    ctx = vec.ctx
    qn_total = q_number(ctx.gamma_total(), ctx.q)
    part = apply_coproduct("e", vec) * qn_total
    lowered = apply_coproduct("a-", vec)
    if not lowered.is_zero():
        part = part - apply_coproduct("a+", lowered)
    return part

"""Braid generator actions and matrix construction.

Braid generators act on a neighbouring pair of tensor slots by the
transposed R-matrix of the oscillator Hopf algebra, exchanging the two
slot labels.  Restricted to a lowest-weight subspace they yield finite
matrices, computed here by two deliberately independent routes:

* ``direct``: expand basis vectors in tensor coordinates, apply the
  two-slot transition formula, and re-express the image through a Gram
  solve (numeric backend only);
* ``rewrite``: commute the generator through intertwiner monomials with
  the exchange relations and read coefficients off directly (numeric or
  exact Laurent backend).

Closed-form families (reduced Burau for level 1, a Lawrence-Krammer-Bigelow
style family for level 2, and the one-marked-slot level-1 family) are
implemented separately again so that each can cross-check the others.

Two-slot transition amplitudes come in two variants controlled by
``binomial``: "series", obtained by expanding the R-matrix exponential
term by term with plain binomial factors C(m, k), and "multiset", an
alternative closed form using the multiset coefficient C(m+k-1, m-1).
The two agree on every k <= 1 transition and split at k >= 2; only the
series variant satisfies the braid relations at level >= 2, so it is
the default.  See compare_transition_formulas for the documented
discrepancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scalars import (
    DEFAULT_TOLS,
    L_ONE,
    L_ZERO,
    Laurent,
    Phase,
    RationalFunction,
    numeric_to_json,
)
from .oscillator import (
    BraidoscError,
    Context,
    RepLabel,
    TensorState,
    WeightVector,
    apply_coproduct,
    basis_state,
    marked_context,
)
from .weightspace import (
    lowest_weight_monomials,
    monomial_exponents,
    operator_matrix,
    weight_basis,
)


class GramSolveError(BraidoscError):
    """The Gram system for the direct route could not be solved."""


# ---------------------------------------------------------------------------
# two-slot transition amplitudes (tensor-coordinate action)

def _transition_weight(ctx, ia, ib, inverse):
    """Per-step amplitude of the exponential part of the R-matrix.

    Written as (q - 1/q) sqrt([gamma_a][gamma_b]) q**((gamma_b-gamma_a)/2)
    so that the sign for q on either side of 1 comes out automatically;
    its square is (1 - q**(-2 gamma_a)) (q**(2 gamma_b) - 1).
    """
    qq = ctx.qpow(1, inverse)
    return (
        (qq - 1 / qq)
        * ctx.sqrt_qn[ia]
        * ctx.sqrt_qn[ib]
        * ctx.qpow((ctx.labels[ib].gamma - ctx.labels[ia].gamma) / 2, inverse)
    )


def _pr_closed(ctx, st, coeff, g, inverse, binomial, out):
    """Closed-form braid action on slots g, g+1 (0-based).

    Forward: R-matrix on the pair, then swap.  Inverse: swap first, then
    the q -> 1/q R-matrix on the swapped pair (the two orders agree with
    sigma sigma^{-1} = 1; swapping last with q -> 1/q would not).
    """
    if inverse:
        first, second = st.perm[g + 1], st.perm[g]
        fm, sm = st.occ[g + 1], st.occ[g]
    else:
        first, second = st.perm[g], st.perm[g + 1]
        fm, sm = st.occ[g], st.occ[g + 1]
    lf = ctx.labels[first]
    ls = ctx.labels[second]
    pref = ctx.qpow(-((fm + lf.c) * ls.gamma + (sm + ls.c) * lf.gamma), inverse)
    w = _transition_weight(ctx, first, second, inverse)
    new_perm = ctx.swapped_perm(st.perm, g + 1)
    wk = 1.0
    for k in range(fm + 1):
        if binomial == "series":
            bf = ctx.sqrt(math.comb(fm, k) * math.comb(sm + k, sm))
        elif binomial == "multiset":
            bf = 1.0 if k == 0 else ctx.sqrt(math.comb(fm + k - 1, fm - 1) * math.comb(sm + k, sm))
        else:
            raise ValueError("binomial must be 'series' or 'multiset'")
        occ = list(st.occ)
        if inverse:
            occ[g] = fm - k
            occ[g + 1] = sm + k
        else:
            occ[g] = sm + k
            occ[g + 1] = fm - k
        out.add_term(TensorState(new_perm, tuple(occ)), coeff * pref * bf * wk)
        wk = wk * w


def _pr_series(ctx, st, coeff, g, inverse, out):
    """Braid action by literal term-by-term series expansion.

    Walks the R-matrix exponential one ladder application at a time and
    applies the diagonal prefactor to each intermediate state; kept free
    of the closed-form binomials on purpose, as an independent oracle.
    The swap happens after the series (forward) or before it (inverse),
    matching the closed form.
    """
    if inverse:
        first, second = st.perm[g + 1], st.perm[g]
        fm, sm = st.occ[g + 1], st.occ[g]
    else:
        first, second = st.perm[g], st.perm[g + 1]
        fm, sm = st.occ[g], st.occ[g + 1]
    lf = ctx.labels[first]
    ls = ctx.labels[second]
    qq = ctx.qpow(1, inverse)
    new_perm = ctx.swapped_perm(st.perm, g + 1)
    running = coeff
    cf, cs = fm, sm
    for k in range(fm + 1):
        if k:
            step = (
                (qq - 1 / qq)
                * ctx.qpow(lf.gamma / 2, inverse) * ctx.sqrt_qn[first] * ctx.sqrt(cf)
                * ctx.qpow(-ls.gamma / 2, inverse) * ctx.sqrt_qn[second] * ctx.sqrt(cs + 1)
            )
            running = running * step / k
            cf -= 1
            cs += 1
        diag = ctx.qpow(-((cf + lf.c) * ls.gamma + (cs + ls.c) * lf.gamma), inverse)
        occ = list(st.occ)
        if inverse:
            occ[g] = cf
            occ[g + 1] = cs
        else:
            occ[g] = cs
            occ[g + 1] = cf
        out.add_term(TensorState(new_perm, tuple(occ)), running * diag)


def apply_braid_generator(i, vec, *, inverse=False, formula="closed", binomial="series"):
    """Act with braid generator i (1-based) on a tensor-coordinate vector.

    The inverse generator is the q -> 1/q substitution throughout.
    ``formula`` picks the closed two-slot amplitude or the literal series
    expansion; ``binomial`` selects the closed-form variant.
    """
    ctx = vec.ctx
    if not 1 <= i <= ctx.n - 1:
        raise ValueError("generator index out of range")
    g = i - 1
    out = WeightVector(ctx)
    for st, co in vec.terms.items():
        if formula == "closed":
            _pr_closed(ctx, st, co, g, inverse, binomial, out)
        elif formula == "series":
            _pr_series(ctx, st, co, g, inverse, out)
        else:
            raise ValueError("formula must be 'closed' or 'series'")
    return out


def sigma_weight_matrix(ctx, N, i, *, inverse=False, formula="closed", binomial="series"):
    """Matrix of a braid generator on the full weight space, all sectors."""
    basis = weight_basis(ctx, N, "all")
    return operator_matrix(
        lambda v: apply_braid_generator(i, v, inverse=inverse, formula=formula, binomial=binomial),
        basis,
        basis,
    )


def compare_transition_formulas(ctx, m_max=3):
    """Tabulate the two closed-form binomial variants against the series.

    Returns a dict with the largest series-vs-multiset deviation on k <= 1
    output components, the first disagreeing element (input occupations,
    k, both values), and the largest series-vs-closed("series") deviation
    overall.  Requires n = 2 contexts for clarity of reporting.
    """
    if ctx.n != 2:
        raise ValueError("transition comparison uses a two-slot context")
    first_diff = None
    k1_dev = 0.0
    closed_dev = 0.0
    for m in range(m_max + 1):
        for mp in range(m_max + 1):
            start = basis_state(ctx, (m, mp))
            by_series = apply_braid_generator(1, start, formula="series")
            by_closed = apply_braid_generator(1, start, formula="closed", binomial="series")
            by_multiset = apply_braid_generator(1, start, formula="closed", binomial="multiset")
            closed_dev = max(closed_dev, (by_series - by_closed).norm() / by_series.norm())
            for k in range(m + 1):
                occ = (mp + k, m - k)
                st = TensorState(ctx.swapped_perm(ctx.identity_perm(), 1), occ)
                sv = by_series.terms.get(st, 0.0)
                pv = by_multiset.terms.get(st, 0.0)
                # relative deviation: amplitudes are unbounded in the labels
                dev = abs(float(sv - pv)) / max(1.0, abs(float(sv)))
                if k <= 1:
                    k1_dev = max(k1_dev, dev)
                elif dev > 1e-9 and first_diff is None:
                    first_diff = {
                        "input_occ": (m, mp),
                        "k": k,
                        "output_occ": occ,
                        "series": float(sv),
                        "multiset": float(pv),
                    }
    return {
        "k_le_1_deviation": float(k1_dev),
        "series_vs_closed_deviation": float(closed_dev),
        "first_k_ge_2_difference": first_diff,
    }


# ---------------------------------------------------------------------------
# rewrite route: generators through intertwiner monomials

@dataclass(frozen=True)
class BasisElement:
    """Lowest-weight basis label: sector arrangement plus monomial powers."""

    sector: tuple
    powers: tuple

    def to_json(self):
        return {"sector": list(self.sector), "powers": list(self.powers)}


class _NumericRewrite:
    """Scalar factors of the exchange relations, numeric backend."""

    def __init__(self, ctx, inverse):
        self.ctx = ctx
        self.inverse = inverse
        self.one = 1.0

    def n(self):
        return self.ctx.n

    def swap(self, sector, i):
        return self.ctx.swapped_perm(sector, i)

    def x(self, rep):
        # eigenvalue of q**(-Gamma) on the given label
        return self.ctx.qpow(-self.ctx.labels[rep].gamma, self.inverse)

    def g(self, rep):
        # [Gamma]^(1/2); invariant under q -> 1/q
        return self.ctx.sqrt_qn[rep]

    def base(self, ra, rb):
        la = self.ctx.labels[ra]
        lb = self.ctx.labels[rb]
        return self.ctx.qpow(-(la.c * lb.gamma + lb.c * la.gamma), self.inverse)


class _LaurentRewrite:
    """Exchange-relation factors over exact Laurent scalars (homogeneous).

    All [Gamma]^(1/2) ratios collapse to 1 and q**(-Gamma) becomes the
    formal variable x (or 1/x for the inverse generator); the vacuum
    factor is a unit of global phase per generator instead of a scalar.
    """

    def __init__(self, n, inverse):
        self._n = n
        self.inverse = inverse
        self.one = L_ONE
        self._x = Laurent.x(-1) if inverse else Laurent.x(1)

    def n(self):
        return self._n

    def swap(self, sector, i):
        return sector

    def x(self, rep):
        return self._x

    def g(self, rep):
        return L_ONE

    def base(self, ra, rb):
        return None


def rewrite_generator(cf, i, elem):
    """Push braid generator i through one monomial basis element.

    Returns (dict BasisElement -> coefficient, base factor).  The scalar
    factors of the exchange relations are evaluated against the sector
    after the label swap, which is where they act once the generator has
    been moved all the way to the vacuum; the vacuum step contributes the
    base factor (None in the exact backend, where it is phase-tracked).
    """
    n = cf.n()
    sector = elem.sector
    powers = elem.powers
    g0 = i - 1
    new_sector = cf.swap(sector, i)
    xi = cf.x(new_sector[g0])
    xi1 = cf.x(new_sector[g0 + 1])
    branches = {(0,) * (n - 1): cf.one}

    def bump(delta, k):
        lst = list(delta)
        lst[k] += 1
        return tuple(lst)

    def pass_factor(branches, kind):
        out = {}

        def put(delta, co):
            prev = out.get(delta)
            out[delta] = co if prev is None else prev + co

        for delta, co in branches.items():
            if kind == 0:  # the generator's own intertwiner
                put(bump(delta, g0), -co * xi * xi1)
            elif kind == +1:
                put(bump(delta, g0), co * xi1 * cf.g(new_sector[g0 + 2]) * _inv(cf, new_sector[g0 + 1]))
                put(bump(delta, g0 + 1), co * cf.g(new_sector[g0]) * _inv(cf, new_sector[g0 + 1]))
            else:  # kind == -1
                put(bump(delta, g0 - 1), co * _inv(cf, new_sector[g0]) * cf.g(new_sector[g0 + 1]))
                put(bump(delta, g0), co * cf.g(new_sector[g0 - 1]) * xi * _inv(cf, new_sector[g0]))
        return out

    if g0 - 1 >= 0:
        for _ in range(powers[g0 - 1]):
            branches = pass_factor(branches, -1)
    for _ in range(powers[g0]):
        branches = pass_factor(branches, 0)
    if g0 + 1 <= n - 2:
        for _ in range(powers[g0 + 1]):
            branches = pass_factor(branches, +1)

    passive = list(powers)
    for k in (g0 - 1, g0, g0 + 1):
        if 0 <= k <= n - 2:
            passive[k] = 0
    result = {}
    for delta, co in branches.items():
        newp = tuple(p + d for p, d in zip(passive, delta))
        key = BasisElement(new_sector, newp)
        prev = result.get(key)
        result[key] = co if prev is None else prev + co
    base = cf.base(sector[g0], sector[g0 + 1])
    return result, base


def _inv(cf, rep):
    g = cf.g(rep)
    if isinstance(g, Laurent):
        return L_ONE
    return 1.0 / g


# ---------------------------------------------------------------------------
# matrix assembly

@dataclass
class BraidMatrix:
    """One braid generator on a lowest-weight space, with basis metadata.

    ``entries`` is a float ndarray (numeric backend) or a nested list of
    Laurent polynomials (exact backend), columns indexed by ``basis`` in
    the recorded order; the physical generator is phase * entries.
    """

    generator: int
    inverse: bool
    n: int
    N: int
    route: str
    backend: str
    basis: list
    entries: object
    phase: Phase
    q: float | None = None
    labels: tuple | None = None
    solve_residual: float | None = None

    @property
    def dimension(self):
        return len(self.basis)

    def entries_json(self):
        if self.backend == "laurent":
            return [[e.to_json() for e in row] for row in self.entries]
        return [[numeric_to_json(v) for v in row] for row in self.entries]

    def to_json(self):
        out = {
            "generator": self.generator,
            "inverse": self.inverse,
            "entries": self.entries_json(),
        }
        if self.solve_residual is not None:
            out["solve_residual"] = self.solve_residual
        return out


def monomial_basis_elements(n, N, sectors):
    return [
        BasisElement(tuple(sec), powers)
        for sec in sectors
        for powers in monomial_exponents(n, N)
    ]


def _should_renormalize(ctx, renormalize):
    if renormalize is not None:
        return renormalize
    return ctx is None or ctx.is_homogeneous()


def _matrices_rewrite(n, N, ctx, backend, inverse, renormalize):
    if backend == "laurent":
        sectors = [tuple(range(n))]
        cf = _LaurentRewrite(n, inverse)
        zero = L_ZERO
    else:
        sectors = ctx.distinct_sectors()
        cf = _NumericRewrite(ctx, inverse)
        zero = 0.0
    basis = monomial_basis_elements(n, N, sectors)
    index = {el: k for k, el in enumerate(basis)}
    dim = len(basis)
    mats = []
    for i in range(1, n):
        if backend == "laurent":
            entries = [[zero] * dim for _ in range(dim)]
        else:
            entries = np.zeros((dim, dim))
        for col, el in enumerate(basis):
            images, bf = rewrite_generator(cf, i, el)
            for el2, co in images.items():
                if backend == "numeric":
                    if renormalize:
                        # homogeneous: the vacuum factor is constant, keep it in the phase
                        pass
                    else:
                        co = co * bf
                    entries[index[el2], col] = float(co)
                else:
                    entries[index[el2]][col] = co
        phase = Phase(Fraction(-1 if inverse else 1)) if (backend == "laurent" or renormalize) else Phase()
        mats.append(
            BraidMatrix(
                generator=i,
                inverse=inverse,
                n=n,
                N=N,
                route="rewrite",
                backend=backend,
                basis=basis,
                entries=entries,
                phase=phase,
                q=None if backend == "laurent" else float(ctx.q),
                labels=None if backend == "laurent" else ctx.labels,
            )
        )
    return mats


def _matrices_direct(n, N, ctx, inverse, renormalize, formula, binomial, tols):
    sectors = ctx.distinct_sectors()
    basis = monomial_basis_elements(n, N, sectors)
    index = {el: k for k, el in enumerate(basis)}
    dim = len(basis)
    expts = monomial_exponents(n, N)
    per_sector = {}
    for sec in sectors:
        lw = lowest_weight_monomials(ctx, N, sec, tols)
        per_sector[tuple(sec)] = (lw.vectors, np.asarray(lw.gram, dtype=float))
    if renormalize:
        la = ctx.labels[0]
        common = float(ctx.qpow(-2 * la.c * la.gamma, inverse))
    mats = []
    for i in range(1, n):
        entries = np.zeros((dim, dim))
        worst = 0.0
        for sec in sectors:
            vecs, gram = per_sector[tuple(sec)]
            target = ctx.swapped_perm(sec, i)
            tvecs, tgram = per_sector[tuple(target)]
            for p_ix, powers in enumerate(expts):
                col = index[BasisElement(tuple(sec), powers)]
                image = apply_braid_generator(
                    i, vecs[p_ix], inverse=inverse, formula=formula, binomial=binomial
                )
                rhs = np.array([float(tv.inner(image)) for tv in tvecs])
                try:
                    coeffs = np.linalg.solve(tgram, rhs)
                except np.linalg.LinAlgError as exc:
                    raise GramSolveError("singular Gram matrix in direct route") from exc
                recon = WeightVector(ctx)
                for cval, tv in zip(coeffs, tvecs):
                    recon = recon + float(cval) * tv
                resid = float((image - recon).norm() / max(image.norm(), 1e-300))
                worst = max(worst, resid)
                if resid > tols.span_residual:
                    raise GramSolveError(
                        "braid image leaves the lowest-weight span, residual %.2e" % resid
                    )
                for row_p, cval in zip(expts, coeffs):
                    v = float(cval)
                    if renormalize:
                        v /= common
                    entries[index[BasisElement(tuple(target), row_p)], col] = v
        phase = Phase(Fraction(-1 if inverse else 1)) if renormalize else Phase()
        mats.append(
            BraidMatrix(
                generator=i,
                inverse=inverse,
                n=n,
                N=N,
                route="direct",
                backend="numeric",
                basis=basis,
                entries=entries,
                phase=phase,
                q=float(ctx.q),
                labels=ctx.labels,
                solve_residual=worst,
            )
        )
    return mats


def build_matrices(
    n,
    N,
    *,
    route="rewrite",
    backend=None,
    ctx=None,
    inverse=False,
    renormalize=None,
    formula="closed",
    binomial="series",
    tols=DEFAULT_TOLS,
):
    """Matrices of all braid generators on the level-N lowest-weight space.

    backend "laurent" (exact, homogeneous, formal x = q**(-gamma)) needs
    no context; backend "numeric" requires a Context.  ``renormalize``
    defaults to True exactly when the labels are homogeneous, in which
    case the constant vacuum factor q**(-2 c gamma) per generator is
    reported in the phase instead of the entries.
    """
    if backend is None:
        backend = "numeric" if ctx is not None else "laurent"
    if backend == "laurent":
        if ctx is not None and not ctx.is_homogeneous():
            raise ValueError("exact backend requires homogeneous labels")
        if route == "closed_form":
            return closed_form_family(n, N, inverse=inverse)
        if route != "rewrite":
            raise ValueError("exact backend supports the rewrite or closed_form route")
        return _matrices_rewrite(n, N, None, "laurent", inverse, True)
    if ctx is None:
        raise ValueError("numeric backend requires a context")
    if n != ctx.n:
        raise ValueError("n does not match the context")
    renorm = _should_renormalize(ctx, renormalize)
    if renorm and not ctx.is_homogeneous():
        raise ValueError("renormalization needs homogeneous labels")
    if route == "rewrite":
        return _matrices_rewrite(n, N, ctx, "numeric", inverse, renorm)
    if route == "direct":
        return _matrices_direct(n, N, ctx, inverse, renorm, formula, binomial, tols)
    if route == "closed_form":
        return closed_form_family(n, N, ctx=ctx, inverse=inverse)
    raise ValueError("unknown route %r" % (route,))


# ---------------------------------------------------------------------------
# closed-form families

def _laurent_identity(d):
    return [[L_ONE if r == c else L_ZERO for c in range(d)] for r in range(d)]


def closed_form_burau(n, inverse=False):
    """Level-1 homogeneous family: the reduced-Burau-type matrices.

    Column convention on the basis w_1 .. w_{n-1} (w_k the k-th
    intertwiner on the vacuum): w_k -> -x**2 w_k, w_{k +- 1} gains x w_k,
    everything else fixed.
    """
    xx = Laurent.x(-1) if inverse else Laurent.x(1)
    basis = monomial_basis_elements(n, 1, [tuple(range(n))])
    mats = []
    for i in range(1, n):
        M = _laurent_identity(n - 1)
        r = i - 1
        M[r][r] = -(xx ** 2)
        if r - 1 >= 0:
            M[r][r - 1] = xx
        if r + 1 <= n - 2:
            M[r][r + 1] = xx
        mats.append(
            BraidMatrix(
                generator=i,
                inverse=inverse,
                n=n,
                N=1,
                route="closed_form",
                backend="laurent",
                basis=basis,
                entries=M,
                phase=Phase(Fraction(-1 if inverse else 1)),
            )
        )
    return mats


def _lkb_image(i, a, b, xx):
    """Image pairs of sigma_i on w_{a,b} (a <= b), homogeneous level 2."""
    one = L_ONE
    x1 = xx
    x2 = xx ** 2
    x3 = xx ** 3
    x4 = xx ** 4
    near = {i - 1, i, i + 1}
    if a not in near and b not in near:
        return {(a, b): one}
    if (a, b) == (i, i):
        return {(i, i): x4}
    if (a, b) == (i - 1, i):
        return {(i - 1, i): -x2, (i, i): -x3}
    if (a, b) == (i, i + 1):
        return {(i, i + 1): -x2, (i, i): -x3}
    if (a, b) == (i - 1, i - 1):
        return {(i, i): x2, (i - 1, i): 2 * x1, (i - 1, i - 1): one}
    if (a, b) == (i + 1, i + 1):
        return {(i, i): x2, (i, i + 1): 2 * x1, (i + 1, i + 1): one}
    if (a, b) == (i - 1, i + 1):
        return {(i, i): x2, (i - 1, i): x1, (i, i + 1): x1, (i - 1, i + 1): one}
    if a == i:
        return {(i, b): -x2}
    if b == i:
        return {(a, i): -x2}
    if a == i + 1:
        return {(i, b): x1, (i + 1, b): one}
    if a == i - 1:
        return {(i, b): x1, (i - 1, b): one}
    if b == i + 1:
        return {(a, i): x1, (a, i + 1): one}
    if b == i - 1:
        return {(a, i): x1, (a, i - 1): one}
    raise AssertionError("unhandled pair (%d,%d) for generator %d" % (a, b, i))


def closed_form_lkb(n, inverse=False):
    """Level-2 homogeneous family on the basis w_{a,b}, a <= b <= n-1.

    Basis in word order w_{1,1}, w_{1,2}, ..., matching the monomial
    exponent order of the rewrite route.
    """
    xx = Laurent.x(-1) if inverse else Laurent.x(1)
    pairs = [(a, b) for a in range(1, n) for b in range(a, n)]
    pidx = {p: k for k, p in enumerate(pairs)}
    basis = monomial_basis_elements(n, 2, [tuple(range(n))])
    mats = []
    for i in range(1, n):
        M = [[L_ZERO] * len(pairs) for _ in pairs]
        for col, (a, b) in enumerate(pairs):
            for pair, val in _lkb_image(i, a, b, xx).items():
                M[pidx[pair]][col] = val
        mats.append(
            BraidMatrix(
                generator=i,
                inverse=inverse,
                n=n,
                N=2,
                route="closed_form",
                backend="laurent",
                basis=basis,
                entries=M,
                phase=Phase(Fraction(-1 if inverse else 1)),
            )
        )
    return mats


def _marked_case_images(i, k, j, n, d):
    """Closed-form image of sigma_i on w_k^{(j)}, one marked slot.

    d holds the numeric parameter pack (see closed_form_marked_n1);
    returns a dict (k', j') -> coefficient.  Transcribed case by case
    from the five-way split on the relative position of the marked slot.
    """
    qg1, qg2, d1, d2, d3 = d
    far = {(k, j): d1}
    if i > j + 1 or i < j - 2:
        if k == i:
            return {(i, j): -qg1 ** 2 * d1}
        if k == i + 1:
            return {(i, j): qg1 * d1, (i + 1, j): d1}
        if k == i - 1:
            return {(i - 1, j): d1, (i, j): qg1 * d1}
        return far
    if i == j - 2:
        if k == i:
            return {(i, j): -qg1 ** 2 * d1}
        if k == i + 1:
            return {(i, j): qg1 * d1 / d3, (i + 1, j): d1}
        if k == i - 1:
            return {(i - 1, j): d1, (i, j): qg1 * d1}
        return far
    if i == j - 1:
        if k == i:
            return {(i, j - 1): -qg1 * qg2 * d2}
        if k == i + 1:
            return {(i, j - 1): qg1 * d2, (i + 1, j - 1): d2 / d3}
        if k == i - 1:
            return {(i - 1, j - 1): d2 * d3, (i, j - 1): qg2 * d2 * d3}
        return {(k, j - 1): d2}
    if i == j:
        if k == i:
            return {(i, j + 1): -qg1 * qg2 * d2}
        if k == i + 1:
            return {(i, j + 1): qg2 * d2 * d3, (i + 1, j + 1): d2 * d3}
        if k == i - 1:
            return {(i - 1, j + 1): d2 / d3, (i, j + 1): qg1 * d2}
        return {(k, j + 1): d2}
    if i == j + 1:
        if k == i:
            return {(i, j): -qg1 ** 2 * d1}
        if k == i + 1:
            return {(i, j): qg1 * d1, (i + 1, j): d1}
        if k == i - 1:
            return {(i - 1, j): d1, (i, j): qg1 * d1 / d3}
        return far
    raise AssertionError("unreachable case i=%d j=%d" % (i, j))


def closed_form_marked_n1(ctx, inverse=False):
    """Level-1 family with exactly one marked slot, any n.

    The context must carry n-1 copies of a base label plus one marked
    label.  Basis elements are w_k^{(j)} (intertwiner k on the vacuum of
    the sector with the marked label in slot j), emitted in the same
    sector-major order as the rewrite route so the two are directly
    comparable.
    """
    labs = set(ctx.labels)
    counts = {lab: ctx.labels.count(lab) for lab in labs}
    if len(labs) != 2 or sorted(counts.values()) != [1, ctx.n - 1]:
        raise ValueError("marked family needs one label occurring exactly once")
    special = next(lab for lab in labs if counts[lab] == 1)
    base = next(lab for lab in labs if lab != special)
    special_idx = ctx.labels.index(special)
    n = ctx.n
    q = ctx.q
    g1, c1 = base.gamma, base.c
    g2, c2 = special.gamma, special.c
    qg1 = ctx.qpow(-g1, inverse)
    qg2 = ctx.qpow(-g2, inverse)
    d1 = ctx.qpow(-2 * c1 * g1, inverse)
    d2 = ctx.qpow(-(c2 * g1 + c1 * g2), inverse)
    d3 = math.sqrt(ctx.qn[ctx.labels.index(base)] / ctx.qn[special_idx])
    pack = (qg1, qg2, d1, d2, d3)

    sectors = ctx.distinct_sectors()
    # sector -> marked position (1-based slot holding the special label)
    def marked_pos(sec):
        for slot, rep in enumerate(sec):
            if ctx.labels[rep] == special:
                return slot + 1
        raise AssertionError

    by_pos = {marked_pos(sec): tuple(sec) for sec in sectors}
    basis = monomial_basis_elements(n, 1, sectors)
    index = {el: k for k, el in enumerate(basis)}

    def unit(k):
        p = [0] * (n - 1)
        p[k - 1] = 1
        return tuple(p)

    mats = []
    for i in range(1, n):
        entries = np.zeros((len(basis), len(basis)))
        for sec in sectors:
            j = marked_pos(sec)
            for k in range(1, n):
                col = index[BasisElement(tuple(sec), unit(k))]
                for (k2, j2), val in _marked_case_images(i, k, j, n, pack).items():
                    row = index[BasisElement(by_pos[j2], unit(k2))]
                    entries[row, col] = float(val)
        mats.append(
            BraidMatrix(
                generator=i,
                inverse=inverse,
                n=n,
                N=1,
                route="closed_form",
                backend="numeric",
                basis=basis,
                entries=entries,
                phase=Phase(),
                q=float(q),
                labels=ctx.labels,
            )
        )
    return mats


def closed_form_family(n, N, ctx=None, inverse=False):
    """Dispatch to whichever closed-form family covers (n, N, labels)."""
    if ctx is None or ctx.is_homogeneous():
        if N == 1:
            return closed_form_burau(n, inverse)
        if N == 2:
            return closed_form_lkb(n, inverse)
        raise ValueError("no closed form for homogeneous level %d" % N)
    if N == 1:
        return closed_form_marked_n1(ctx, inverse)
    raise ValueError("no closed form for inhomogeneous level %d" % N)


# ---------------------------------------------------------------------------
# independent reduced-Burau reference (textbook construction)

def unreduced_burau(n, inverse=False):
    """n x n unreduced Burau matrices over t = x**2.

    Generator i has the 2x2 block [[1-t, t], [1, 0]] at slots (i, i+1);
    the inverse flag substitutes t -> 1/t.
    """
    t = Laurent.x(-2) if inverse else Laurent.x(2)
    mats = []
    for i in range(1, n):
        M = _laurent_identity(n)
        r = i - 1
        M[r][r] = L_ONE - t
        M[r][r + 1] = t
        M[r + 1][r] = L_ONE
        M[r + 1][r + 1] = L_ZERO
        mats.append(M)
    return mats


def reduced_burau_reference(n):
    """Reduced Burau matrices on the invariant spanning set t e_j - e_{j+1}.

    Built by exact restriction of the unreduced matrices, solving the
    bidiagonal coordinate system over the rational-function field; kept
    independent from both the closed form and the rewrite engine.
    """
    t = RationalFunction(Laurent.x(2))
    mats = []
    for M in unreduced_burau(n):
        R = [[L_ZERO] * (n - 1) for _ in range(n - 1)]
        for j in range(n - 1):
            # image of u_j = t e_j - e_{j+1} in e-coordinates
            y = [RationalFunction(M[r][j]) * t - RationalFunction(M[r][j + 1]) for r in range(n)]
            c = [None] * (n - 1)
            c[0] = y[0] / t
            for r in range(1, n - 1):
                c[r] = (y[r] + c[r - 1]) / t
            if not (-c[n - 2] - y[n - 1]).is_zero():
                raise BraidoscError("burau spanning set is not invariant")
            for r in range(n - 1):
                R[r][j] = c[r].as_laurent()
        mats.append(R)
    return mats


# ---------------------------------------------------------------------------
# level-2 change of basis to pair-indexed coordinates

@dataclass
class PairBasisChange:
    """Change of basis from pair-indexed vectors W_{a,b} to the w_{i,j}."""

    n: int
    s: float
    w_pairs: list
    W_pairs: list
    matrix: np.ndarray
    determinant: float
    condition: float

    @property
    def invertible(self):
        return np.isfinite(self.condition) and self.condition < 1e12


def pair_basis_change(n, s):
    """Expansion of the w_{i,j} through pair vectors W_{a,b}, 1<=a<b<=n.

    Columns are w-pairs (i <= j <= n-1), rows W-pairs; the parameter s is
    a nonzero scalar.  Reported, not asserted: invertibility of the map.
    """
    if s == 0:
        raise ValueError("s must be nonzero")
    w_pairs = [(i, j) for i in range(1, n) for j in range(i, n)]
    W_pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    Widx = {p: r for r, p in enumerate(W_pairs)}
    M = np.zeros((len(W_pairs), len(w_pairs)))
    for col, (i, j) in enumerate(w_pairs):
        if j == i:
            M[Widx[(i, i + 1)], col] = -2.0
        elif j == i + 1:
            M[Widx[(i, i + 1)], col] = 1.0 / s
            M[Widx[(i, i + 2)], col] = -1.0
            M[Widx[(i + 1, i + 2)], col] = s
        else:
            M[Widx[(i, j + 1)], col] = -1.0
            M[Widx[(i + 1, j + 1)], col] = s
            M[Widx[(i, j)], col] = 1.0 / s
            M[Widx[(i + 1, j)], col] = -1.0
    det = float(np.linalg.det(M)) if M.shape[0] == M.shape[1] else float("nan")
    cond = float(np.linalg.cond(M))
    return PairBasisChange(n, float(s), w_pairs, W_pairs, M, det, cond)


# ---------------------------------------------------------------------------
# matrix algebra helpers, relations, words

def lmat_mul(A, B):
    rows = len(A)
    inner = len(B)
    cols = len(B[0])
    out = [[L_ZERO] * cols for _ in range(rows)]
    for r in range(rows):
        Ar = A[r]
        for k in range(inner):
            a = Ar[k]
            if not a:
                continue
            Bk = B[k]
            Or = out[r]
            for c in range(cols):
                b = Bk[c]
                if b:
                    Or[c] = Or[c] + a * b
    return out


def lmat_eq(A, B):
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        for a, b in zip(ra, rb):
            if a != b:
                return False
    return True


def lmat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def lmat_max_abs_at(A, x0):
    """Largest absolute numeric value of Laurent entries at x = x0."""
    worst = 0.0
    for row in A:
        for e in row:
            worst = max(worst, abs(e(x0)))
    return worst


def _mul(A, B):
    if isinstance(A, np.ndarray):
        return A @ B
    return lmat_mul(A, B)


def braid_relation_defect(mats):
    """Worst braid/far-commutation defect for a generator family.

    For numeric families returns the largest relative residual; for
    Laurent families returns 0.0 on exact equality and a sampled numeric
    magnitude of the difference otherwise.
    """
    by_gen = {m.generator: m.entries for m in mats}
    n = mats[0].n
    worst = 0.0
    exact = all(not isinstance(m.entries, np.ndarray) for m in mats)
    for i in range(1, n - 1):
        A, B = by_gen[i], by_gen[i + 1]
        lhs = _mul(_mul(A, B), A)
        rhs = _mul(_mul(B, A), B)
        worst = max(worst, _defect(lhs, rhs, exact))
    for i in range(1, n):
        for j in range(i + 2, n):
            A, B = by_gen[i], by_gen[j]
            worst = max(worst, _defect(_mul(A, B), _mul(B, A), exact))
    return worst


def _defect(lhs, rhs, exact):
    if exact:
        if lmat_eq(lhs, rhs):
            return 0.0
        return lmat_max_abs_at(lmat_sub(lhs, rhs), 0.7)
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)), 1e-300)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def inverse_defect(fwd, inv):
    """Deviation of sigma * sigma^{-1} from the identity, per generator."""
    worst = 0.0
    for mf, mi in zip(fwd, inv):
        if mf.generator != mi.generator:
            raise ValueError("mismatched generator lists")
        prod = _mul(mf.entries, mi.entries)
        phase = mf.phase * mi.phase
        if not phase.is_trivial() and phase.exponent != 0:
            raise BraidoscError("phases fail to cancel in inverse product")
        if isinstance(prod, np.ndarray):
            prod = prod * phase.factor
            d = float(np.max(np.abs(prod - np.eye(prod.shape[0]))))
        else:
            d = 0.0 if lmat_eq(prod, _laurent_identity(len(prod))) else lmat_max_abs_at(
                lmat_sub(prod, _laurent_identity(len(prod))), 0.7
            )
        worst = max(worst, d)
    return worst


def evaluate_word(word, forward, inverse):
    """Ordered product for a braid word (letters applied left to right).

    Positive letter k means generator k, negative its inverse; the
    returned pair is (entries, phase) with the leftmost letter acting
    first, i.e. the product M(w_L) ... M(w_1).
    """
    by_gen_f = {m.generator: m for m in forward}
    by_gen_i = {m.generator: m for m in inverse} if inverse else {}
    total = None
    phase = Phase()
    for letter in word:
        if letter == 0:
            raise ValueError("word letters are nonzero signed generator indices")
        mat = by_gen_f[letter] if letter > 0 else by_gen_i[-letter]
        total = mat.entries if total is None else _mul(mat.entries, total)
        phase = mat.phase * phase
    if total is None:
        dim = forward[0].dimension
        total = (
            np.eye(dim)
            if isinstance(forward[0].entries, np.ndarray)
            else _laurent_identity(dim)
        )
    return total, phase


def family_to_json(mats):
    """Wire format for one generator family (common metadata hoisted)."""
    first = mats[0]
    phases = {str(m.phase.to_json()) for m in mats}
    if len(phases) != 1:
        raise BraidoscError("generator family with inconsistent phases")
    return {
        "n": first.n,
        "N": first.N,
        "labels": None
        if first.labels is None
        else [[lab.gamma, lab.c] for lab in first.labels],
        "q": first.q,
        "route": first.route,
        "backend": first.backend,
        "basis": [el.to_json() for el in first.basis],
        "phase": first.phase.to_json(),
        "matrices": [m.to_json() for m in mats],
    }

"""Fixed-weight subspaces and their lowest-weight substructure.

A weight space collects, per sector, every occupation pattern with a fixed
total.  Inside it, lowest-weight vectors are the kernel of the coproduct
lowering operator; the same space is spanned by monomials in the slot
intertwiners applied to the vacuum.  Both constructions are provided so
they can be cross-checked, together with the Casimir block decomposition
of the full weight space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .scalars import DEFAULT_TOLS, L_ONE, L_ZERO, Laurent, RationalFunction, RF_ONE, RF_ZERO, q_number
from .oscillator import (
    BraidoscError,
    TensorState,
    WeightVector,
    apply_casimir,
    apply_coproduct,
    apply_monomial,
    basis_state,
    vacuum,
)


class DimensionMismatchError(BraidoscError):
    """A computed dimension disagrees with the combinatorial count."""


def compositions(total, parts):
    """Weak compositions of ``total`` into ``parts`` slots, ascending lex."""
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def monomial_exponents(n, N):
    """Intertwiner exponent tuples of total degree N, in word order.

    Word order reads a monomial as the sorted string of its indices, so
    for n=3, N=2 the order is (2,0), (1,1), (0,2), matching the
    conventional listing O_1 O_1, O_1 O_2, O_2 O_2.
    """
    return sorted(compositions(N, n - 1), reverse=True)


def weight_dimension(n, N):
    """Number of occupation patterns with total N over n slots."""
    return math.comb(n + N - 1, n - 1)


def lowest_weight_dimension(n, N):
    """Dimension of the lowest-weight subspace at level N (per sector)."""
    return math.comb(n + N - 2, n - 2)


def counts(n, N):
    """(weight dimension, per-level lowest-weight dimensions 0..N)."""
    per_level = [lowest_weight_dimension(n, j) for j in range(N + 1)]
    return weight_dimension(n, N), per_level


@dataclass
class WeightSpaceBasis:
    """Ordered occupation states of one weight space.

    ``sector`` is a canonical arrangement, or the string "all" when the
    basis runs over every distinct arrangement (sector-major order).
    """

    ctx: object
    N: int
    sector: object
    states: list

    def __len__(self):
        return len(self.states)

    def index(self):
        return {st: i for i, st in enumerate(self.states)}


def weight_basis(ctx, N, sector=None):
    """Enumerate the weight space basis, occupations in ascending lex."""
    if sector == "all":
        sectors = ctx.distinct_sectors()
    else:
        sectors = [ctx.identity_perm() if sector is None else ctx.canonical_perm(sector)]
    states = [
        TensorState(perm, occ)
        for perm in sectors
        for occ in compositions(N, ctx.n)
    ]
    label = "all" if sector == "all" else sectors[0]
    return WeightSpaceBasis(ctx, N, label, states)


def coordinates(vec, basis):
    """Dense coordinate array of a vector over a state list."""
    idx = basis.index() if isinstance(basis, WeightSpaceBasis) else {s: i for i, s in enumerate(basis)}
    out = np.zeros(len(idx))
    for st, co in vec.terms.items():
        try:
            out[idx[st]] = float(co)
        except KeyError:
            raise BraidoscError("vector has support outside the basis: %r" % (st,))
    return out


def from_coordinates(ctx, coords, basis):
    states = basis.states if isinstance(basis, WeightSpaceBasis) else basis
    vec = WeightVector(ctx)
    for c, st in zip(coords, states):
        if c:
            vec.add_term(st, float(c))
    return vec


def operator_matrix(op, domain, codomain):
    """Matrix of a state-to-vector map between orthonormal state bases."""
    ctx = domain.ctx
    idx = codomain.index()
    A = np.zeros((len(codomain), len(domain)))
    for col, st in enumerate(domain.states):
        image = op(basis_state(ctx, st.occ, st.perm))
        for st2, co in image.terms.items():
            try:
                A[idx[st2], col] = float(co)
            except KeyError:
                raise BraidoscError("operator image leaves the codomain at %r" % (st2,))
    return A


def lowering_matrix(ctx, N, sector=None):
    """Coproduct lowering operator as a matrix W_N -> W_{N-1}."""
    dom = weight_basis(ctx, N, sector)
    cod = weight_basis(ctx, N - 1, sector)
    return operator_matrix(lambda v: apply_coproduct("a-", v), dom, cod), dom, cod


@dataclass
class LowestWeightBasis:
    """Basis of the lowest-weight subspace at one level, single sector.

    ``monomials`` lists the intertwiner exponent tuples when the basis was
    built from monomials; the kernel route leaves it None and returns an
    orthonormal family instead (gram = identity).
    """

    ctx: object
    N: int
    sector: tuple
    vectors: list
    gram: np.ndarray
    monomials: list | None = None
    residuals: list = field(default_factory=list)


def lowest_weight_kernel(ctx, N, sector=None, tols=DEFAULT_TOLS):
    """Lowest-weight vectors as the numeric kernel of the lowering map.

    Uses an SVD with singular values below sv_cutoff * max treated as
    zero; the returned vectors are orthonormal.  Raises
    DimensionMismatchError if the kernel dimension is not the stars-and-
    bars count.
    """
    sector = ctx.identity_perm() if sector is None else ctx.canonical_perm(sector)
    expected = lowest_weight_dimension(ctx.n, N)
    if N == 0:
        vec = vacuum(ctx, sector)
        return LowestWeightBasis(ctx, 0, sector, [vec], np.eye(1), None)
    A, dom, _ = lowering_matrix(ctx, N, sector)
    _, svals, vt = np.linalg.svd(A)
    cut = tols.sv_cutoff * (svals[0] if len(svals) else 1.0)
    rank = int(np.sum(svals > cut))
    null = vt[rank:].conj()
    if null.shape[0] != expected:
        raise DimensionMismatchError(
            "kernel dimension %d != expected %d at n=%d N=%d"
            % (null.shape[0], expected, ctx.n, N)
        )
    vectors = [from_coordinates(ctx, row, dom) for row in null]
    return LowestWeightBasis(ctx, N, sector, vectors, np.eye(expected), None)


def monomial_vector(ctx, powers, sector=None):
    """Intertwiner monomial applied to the vacuum of the given sector."""
    powers = tuple(int(e) for e in powers)
    if len(powers) != ctx.n - 1 or any(e < 0 for e in powers):
        raise ValueError("bad exponent tuple %r" % (powers,))
    return apply_monomial(powers, vacuum(ctx, sector))


def lowest_weight_monomials(ctx, N, sector=None, tols=DEFAULT_TOLS):
    """Lowest-weight basis from intertwiner monomials on the vacuum.

    Validates that every monomial vector is annihilated by the coproduct
    lowering operator (relative residual) and that the Gram matrix is
    positive definite; vectors are kept unnormalized.
    """
    sector = ctx.identity_perm() if sector is None else ctx.canonical_perm(sector)
    expts = monomial_exponents(ctx.n, N)
    vectors = []
    residuals = []
    for powers in expts:
        vec = monomial_vector(ctx, powers, sector)
        low = apply_coproduct("a-", vec)
        res = float(low.norm() / vec.norm())
        if res > tols.kernel_residual:
            raise BraidoscError(
                "monomial %r not annihilated by lowering, residual %.2e" % (powers, res)
            )
        vectors.append(vec)
        residuals.append(res)
    d = len(vectors)
    gram = np.zeros((d, d))
    for i in range(d):
        for j in range(i, d):
            gram[i, j] = gram[j, i] = float(vectors[i].inner(vectors[j]))
    eigs = np.linalg.eigvalsh(gram) if d else np.array([])
    if d and eigs[0] <= tols.sv_cutoff * max(eigs[-1], 1.0):
        raise BraidoscError("monomial Gram matrix is numerically singular")
    return LowestWeightBasis(ctx, N, sector, vectors, gram, expts, residuals)


def span_residual(vectors, others):
    """Largest relative projection defect of ``vectors`` onto span(others)."""
    if not vectors:
        return 0.0
    states = sorted(
        {st for v in list(vectors) + list(others) for st in v.terms},
        key=lambda s: (s.perm, s.occ),
    )
    V = np.array([coordinates(v, states) for v in vectors]).T
    W = np.array([coordinates(w, states) for w in others]).T
    Q, _ = np.linalg.qr(W)
    defect = V - Q @ (Q.T @ V)
    return float(
        max(
            np.linalg.norm(defect[:, k]) / np.linalg.norm(V[:, k])
            for k in range(V.shape[1])
        )
    )


# ---------------------------------------------------------------------------
# Casimir block decomposition of a full weight space

@dataclass
class DecompositionReport:
    """Outcome of the level decomposition of one weight space."""

    n: int
    N: int
    weight_dim: int
    block_dims: list
    expected_block_dims: list
    casimir_residual: float
    rank: int
    eigen_multiplicities: dict
    offblock_overlap: float
    passed: bool

    def to_json(self):
        return {
            "n": self.n,
            "N": self.N,
            "weight_dim": self.weight_dim,
            "block_dims": self.block_dims,
            "expected_block_dims": self.expected_block_dims,
            "casimir_residual": self.casimir_residual,
            "rank": self.rank,
            "eigen_multiplicities": {str(k): v for k, v in sorted(self.eigen_multiplicities.items())},
            "offblock_overlap": self.offblock_overlap,
            "passed": self.passed,
        }


def verify_decomposition(ctx, N, sector=None, tols=DEFAULT_TOLS):
    """Decompose a weight space into Casimir levels and check the counts.

    Level j contributes vectors obtained by raising lowest-weight
    monomials of degree j with the coproduct raising operator N-j times;
    the report records block dimensions, Casimir eigen-residuals, the
    total rank, eigenvalue multiplicities of the Casimir matrix, and the
    measured (not asserted) off-block Gram overlap.
    """
    sector = ctx.identity_perm() if sector is None else ctx.canonical_perm(sector)
    dom = weight_basis(ctx, N, sector)
    qn_total = q_number(ctx.gamma_total(), ctx.q)
    c_tot = ctx.c_total()

    blocks = []
    block_dims = []
    expected_dims = []
    worst = 0.0
    for j in range(N + 1):
        lw = lowest_weight_monomials(ctx, j, sector, tols)
        level = []
        for vec in lw.vectors:
            for _ in range(N - j):
                vec = apply_coproduct("a+", vec)
            lam = qn_total * (c_tot + j)
            resid = (apply_casimir(vec) - lam * vec).norm() / vec.norm()
            worst = max(worst, float(resid))
            level.append(vec)
        blocks.append(level)
        block_dims.append(len(level))
        expected_dims.append(lowest_weight_dimension(ctx.n, j))

    all_vecs = [v for level in blocks for v in level]
    V = np.array([coordinates(v, dom) for v in all_vecs]).T
    svals = np.linalg.svd(V, compute_uv=False)
    cut = tols.sv_cutoff * (svals[0] if len(svals) else 1.0)
    rank = int(np.sum(svals > cut))

    # off-block overlaps, normalized; reported but not asserted
    off = 0.0
    cols = [V[:, i] / np.linalg.norm(V[:, i]) for i in range(V.shape[1])]
    starts = np.cumsum([0] + block_dims)
    for a in range(N + 1):
        for b in range(a + 1, N + 1):
            for i in range(starts[a], starts[a + 1]):
                for k in range(starts[b], starts[b + 1]):
                    off = max(off, abs(float(cols[i] @ cols[k])))

    # eigenvalue multiplicities of the Casimir on the weight space
    C = operator_matrix(apply_casimir, dom, dom)
    eigs = np.linalg.eigvalsh((C + C.T) / 2)
    mult = {}
    for lam in eigs:
        for j in range(N + 1):
            if abs(lam - qn_total * (c_tot + j)) < tols.eigen * max(1.0, abs(lam)):
                mult[j] = mult.get(j, 0) + 1
                break

    passed = (
        block_dims == expected_dims
        and rank == len(dom)
        and worst < tols.eigen
        and all(mult.get(j, 0) == expected_dims[j] for j in range(N + 1))
    )
    return DecompositionReport(
        n=ctx.n,
        N=N,
        weight_dim=len(dom),
        block_dims=block_dims,
        expected_block_dims=expected_dims,
        casimir_residual=worst,
        rank=rank,
        eigen_multiplicities=mult,
        offblock_overlap=float(off),
        passed=passed,
    )


# ---------------------------------------------------------------------------
# exact kernel over the Laurent field (homogeneous labels)

@dataclass
class ExactLoweringKernel:
    """Exact lowest-weight kernel in rescaled occupation coordinates.

    The lowering matrix is taken in the per-slot basis rescaled by
    sqrt([gamma]**m m!), where its entries become m_j * x**j times a
    global unit that cannot affect the kernel; kernel vectors are
    primitive Laurent coordinate rows over the ascending-lex occupation
    list ``occupations``.
    """

    n: int
    N: int
    occupations: list
    matrix: list
    vectors: list


def _exact_lowering_matrix(n, N):
    rows = compositions(N - 1, n)
    cols = compositions(N, n)
    ridx = {occ: i for i, occ in enumerate(rows)}
    A = [[L_ZERO for _ in cols] for _ in rows]
    for cix, occ in enumerate(cols):
        for j in range(n):
            if occ[j] == 0:
                continue
            low = list(occ)
            low[j] -= 1
            A[ridx[tuple(low)]][cix] = Laurent.x(j + 1, occ[j])
    return A, rows, cols


def _exact_nullspace(A, ncols):
    """Right kernel of a Laurent matrix via Gauss-Jordan over fractions."""
    M = [[RationalFunction(e) for e in row] for row in A]
    nrows = len(M)
    pivot_of_col = {}
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not M[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        piv = M[r][c]
        M[r] = [e / piv for e in M[r]]
        for i in range(nrows):
            if i != r and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivot_of_col[c] = r
        r += 1
    free = [c for c in range(ncols) if c not in pivot_of_col]
    basis = []
    for fc in free:
        vec = [RF_ZERO] * ncols
        vec[fc] = RF_ONE
        for c, pr in pivot_of_col.items():
            vec[c] = -M[pr][fc]
        basis.append(vec)
    return basis


def _clear_denominators(vec):
    """Scale a rational vector to primitive Laurent coordinates."""
    from fractions import Fraction

    den = L_ONE
    for e in vec:
        if not e.is_zero() and e.den != L_ONE:
            den = den * e.den
    scaled = [(e * RationalFunction(den)).as_laurent() for e in vec]
    coeffs = [c for l in scaled for c in l.terms.values()]
    if not coeffs:
        return scaled
    # content = gcd of numerators over lcm of denominators
    num_gcd = 0
    den_lcm = 1
    for c in coeffs:
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    shift = min(l.min_exp() for l in scaled if not l.is_zero())
    unit = Laurent.x(-shift, 1 / content)
    out = [l * unit for l in scaled]
    # overall sign: make the first nonzero leading coefficient positive
    for l in out:
        if not l.is_zero():
            if l.terms[l.max_exp()] < 0:
                out = [-m for m in out]
            break
    return out


def lowest_weight_kernel_exact(n, N):
    """Exact lowest-weight kernel for homogeneous labels.

    Works over the Laurent field in x = q**(-gamma); the rescaled basis
    makes every entry polynomial.  Checks the kernel dimension against
    the combinatorial count and that A v = 0 exactly.
    """
    if n < 2:
        raise ValueError("need at least two slots")
    occs = compositions(N, n)
    if N == 0:
        return ExactLoweringKernel(n, 0, occs, [], [[L_ONE]])
    A, _, cols = _exact_lowering_matrix(n, N)
    null = _exact_nullspace(A, len(cols))
    expected = lowest_weight_dimension(n, N)
    if len(null) != expected:
        raise DimensionMismatchError(
            "exact kernel dimension %d != expected %d" % (len(null), expected)
        )
    vectors = [_clear_denominators(v) for v in null]
    for vec in vectors:
        for row in A:
            acc = L_ZERO
            for a, b in zip(row, vec):
                acc = acc + a * b
            if not acc.is_zero():
                raise BraidoscError("exact kernel vector fails A v = 0")
    return ExactLoweringKernel(n, N, occs, A, vectors)

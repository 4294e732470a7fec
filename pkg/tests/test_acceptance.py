"""Acceptance gate: exact fixtures and property checks with runtime bounds.

Each test covers one numbered criterion and prints a one-line summary
(visible under pytest -s).  Random draws use fixed seeds so failures
reproduce; tolerances are stated inline next to each assertion.
"""

import math
import time

import numpy as np
import pytest

from braidosc.braid import (
    braid_relation_defect,
    build_matrices,
    closed_form_burau,
    closed_form_lkb,
    closed_form_marked_n1,
    compare_transition_formulas,
    inverse_defect,
    lmat_eq,
    sigma_weight_matrix,
)
from braidosc.oscillator import (
    Context,
    RepLabel,
    apply_coproduct,
    homogeneous_context,
)
from braidosc.scalars import DEFAULT_TOLS, q_number
from braidosc.verify import (
    _draw,
    _draw_marked,
    _marked_fixture_pair,
    check_hermiticity,
    check_orthonormality_two_slots,
    check_route_equivalence,
    check_series_route_relations,
    marked_fixture_permutation,
)
from braidosc.weightspace import (
    lowest_weight_dimension,
    lowest_weight_kernel,
    operator_matrix,
    verify_decomposition,
    weight_basis,
    weight_dimension,
)


def _announce(label, t0):
    print("%s  (%.2fs)" % (label, time.perf_counter() - t0))


def test_criterion_1_burau_exact():
    t0 = time.perf_counter()
    for n in range(3, 7):
        got = build_matrices(n, 1, route="rewrite", backend="laurent")
        want = closed_form_burau(n)
        for g, w in zip(got, want):
            assert lmat_eq(g.entries, w.entries), (n, g.generator)
            assert g.phase.exponent == w.phase.exponent == 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _announce("criterion 1: level-1 family equals Burau closed form, n=3..6", t0)


def test_criterion_2_marked_six_by_six():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260201)
    for _ in range(3):
        ctx = _draw_marked(rng, 3)
        mats = build_matrices(3, 1, route="rewrite", ctx=ctx)
        special, s1, s2 = _marked_fixture_pair(ctx)
        P = marked_fixture_permutation(ctx, mats[0].basis, special)
        for mat, fix in zip(mats, (s1, s2)):
            got = P.T @ mat.entries @ P
            scale = np.max(np.abs(fix))
            assert np.max(np.abs(got - fix)) < 1e-10 * scale
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _announce("criterion 2: one-marked-slot 6x6 fixture at 3 draws, rel 1e-10", t0)


def test_criterion_3_lkb_exact():
    t0 = time.perf_counter()
    for n in (3, 4, 5):
        got = build_matrices(n, 2, route="rewrite", backend="laurent")
        want = closed_form_lkb(n)
        for g, w in zip(got, want):
            assert lmat_eq(g.entries, w.entries), (n, g.generator)
    printed = {
        1: [["x^4", "0", "0"], ["-x^3", "-x^2", "0"], ["x^2", "2*x", "1"]],
        2: [["1", "2*x", "x^2"], ["0", "-x^2", "-x^3"], ["0", "0", "x^4"]],
    }
    fam = closed_form_lkb(3)
    for mat in fam:
        rows = [[str(mat.entries[j][i]) for j in range(3)] for i in range(3)]
        assert rows == printed[mat.generator]
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    _announce("criterion 3: level-2 family matches LKB rules n=3..5 and printed n=3", t0)


GRID = [(n, N) for n in (3, 4, 5) for N in (0, 1, 2, 3)]


def test_criterion_4_braid_relations():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260202)
    worst = 0.0
    for n, N in GRID:
        fam = build_matrices(n, N, route="rewrite", backend="laurent")
        assert braid_relation_defect(fam) == 0.0, (n, N, "laurent")
        for d in range(5):
            if d % 2 == 0:
                q, gamma, c = _draw(rng)
                ctx = homogeneous_context(n, gamma, c, q)
            else:
                ctx = _draw_marked(rng, n)
            fn = build_matrices(n, N, route="rewrite", ctx=ctx)
            defect = braid_relation_defect(fn)
            worst = max(worst, defect)
            assert defect < 1e-9, (n, N, d)
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    _announce(
        "criterion 4: braid and far-commutation relations on the grid, worst %.2e"
        % worst,
        t0,
    )


def test_criterion_5_dimension_laws():
    t0 = time.perf_counter()
    ctxs = {n: homogeneous_context(n, 1.0, 0.5, 0.6) for n in range(2, 6)}
    for n in range(2, 6):
        for N in range(5):
            assert weight_dimension(n, N) == math.comb(n + N - 1, n - 1)
            assert len(weight_basis(ctxs[n], N)) == weight_dimension(n, N)
            kern = lowest_weight_kernel(ctxs[n], N)
            assert len(kern.vectors) == math.comb(n + N - 2, n - 2)
            assert len(kern.vectors) == lowest_weight_dimension(n, N)
    rep = verify_decomposition(ctxs[3], 3, None, DEFAULT_TOLS)
    assert rep.passed
    assert rep.casimir_residual < 1e-8
    assert [rep.eigen_multiplicities.get(j, 0) for j in range(4)] == [1, 2, 3, 4]
    _announce("criterion 5: dimension laws n<=5 N<=4 and (3,3) multiplicity table", t0)


def test_criterion_6_route_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260203)
    routes = check_route_equivalence(rng, DEFAULT_TOLS, draws=5)
    assert routes.passed and routes.residual < 1e-8

    transitions = compare_transition_formulas(
        Context((RepLabel(1.4, 0.7), RepLabel(0.9, 1.2)), 0.52)
    )
    assert transitions["k_le_1_deviation"] < 1e-12
    diff = transitions["first_k_ge_2_difference"]
    assert diff is not None and diff["k"] == 2
    assert diff["multiset"] / diff["series"] == pytest.approx(math.sqrt(3.0), rel=1e-12)

    series = check_series_route_relations(rng, DEFAULT_TOLS, draws=5)
    assert series.passed and series.residual < 1e-9
    _announce(
        "criterion 6: routes agree rel 1e-8; first binomial split at %s k=%d"
        % (diff["input_occ"], diff["k"]),
        t0,
    )


def test_criterion_7_inverses_everywhere():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260204)
    # exact families
    for n in range(3, 7):
        assert inverse_defect(closed_form_burau(n), closed_form_burau(n, inverse=True)) == 0.0
    for n in (3, 4, 5):
        assert inverse_defect(closed_form_lkb(n), closed_form_lkb(n, inverse=True)) == 0.0
    for n, N in GRID:
        f = build_matrices(n, N, backend="laurent")
        b = build_matrices(n, N, backend="laurent", inverse=True)
        assert inverse_defect(f, b) == 0.0, (n, N)
    # numeric families over every route
    worst = 0.0
    for kind in ("homogeneous", "marked"):
        for _ in range(2):
            if kind == "homogeneous":
                q, gamma, c = _draw(rng)
                ctx = homogeneous_context(3, gamma, c, q)
            else:
                ctx = _draw_marked(rng, 3)
            for route in ("rewrite", "direct"):
                for N in (1, 2):
                    f = build_matrices(3, N, route=route, ctx=ctx)
                    b = build_matrices(3, N, route=route, ctx=ctx, inverse=True)
                    worst = max(worst, inverse_defect(f, b))
            if kind == "marked":
                worst = max(
                    worst,
                    inverse_defect(
                        closed_form_marked_n1(ctx), closed_form_marked_n1(ctx, inverse=True)
                    ),
                )
            # tensor-coordinate level, both compositions
            F = sigma_weight_matrix(ctx, 2, 1)
            B = sigma_weight_matrix(ctx, 2, 1, inverse=True)
            eye = np.eye(F.shape[0])
            worst = max(worst, np.max(np.abs(F @ B - eye)), np.max(np.abs(B @ F - eye)))
    assert worst < 1e-9
    _announce("criterion 7: inverse products on every family, worst %.2e" % worst, t0)


def _commutator_residuals(ctx, occ_max):
    """Operator identities on every fixed-weight subspace up to occ_max."""
    qn_total = q_number(ctx.gamma_total(), ctx.q)
    worst = 0.0
    bases = [weight_basis(ctx, N, "all") for N in range(occ_max + 2)]
    low = [
        operator_matrix(lambda v: apply_coproduct("a-", v), bases[N], bases[N - 1])
        for N in range(1, occ_max + 2)
    ]
    raise_ = [
        operator_matrix(lambda v: apply_coproduct("a+", v), bases[N], bases[N + 1])
        for N in range(occ_max + 1)
    ]
    num = [
        operator_matrix(lambda v: apply_coproduct("e", v), bases[N], bases[N])
        for N in range(occ_max + 2)
    ]
    for N in range(occ_max + 1):
        dim = len(bases[N])
        # ladder commutator equals the q-number of the total label
        comm = low[N] @ raise_[N]
        if N > 0:
            comm = comm - raise_[N - 1] @ low[N - 1]
        worst = max(worst, np.max(np.abs(comm - qn_total * np.eye(dim))))
        # number operator shifts ladders by one unit
        worst = max(worst, np.max(np.abs(num[N + 1] @ raise_[N] - raise_[N] @ num[N] - raise_[N])))
        if N > 0:
            worst = max(worst, np.max(np.abs(num[N - 1] @ low[N - 1] - low[N - 1] @ num[N] + low[N - 1])))
    return worst


def _intertwiner_residuals(ctx, occ_max):
    from braidosc.oscillator import apply_intertwiner

    worst = 0.0
    for k in range(1, ctx.n):
        for N in range(occ_max):
            dom = weight_basis(ctx, N, "all")
            mid = weight_basis(ctx, N + 1, "all")
            cod = weight_basis(ctx, N, "all")
            OA = operator_matrix(lambda v: apply_intertwiner(k, v), dom, mid)
            A_dom = operator_matrix(lambda v: apply_coproduct("a-", v), mid, cod)
            if N == 0:
                worst = max(worst, np.max(np.abs(A_dom @ OA)))
                continue
            prev = weight_basis(ctx, N - 1, "all")
            OB = operator_matrix(lambda v: apply_intertwiner(k, v), prev, cod)
            A_low = operator_matrix(lambda v: apply_coproduct("a-", v), dom, prev)
            worst = max(worst, np.max(np.abs(A_dom @ OA - OB @ A_low)))
    return worst


def test_criterion_8_algebra_suite():
    t0 = time.perf_counter()
    contexts = [
        homogeneous_context(2, 1.1, 0.6, 0.55),
        homogeneous_context(3, 0.9, 0.8, 0.65),
        Context((RepLabel(1.3, 0.5), RepLabel(0.8, 1.0), RepLabel(1.3, 0.5)), 0.6),
    ]
    worst = 0.0
    for ctx in contexts:
        worst = max(worst, _commutator_residuals(ctx, 4))
        worst = max(worst, _intertwiner_residuals(ctx, 4))
    assert worst < 1e-10

    ortho = check_orthonormality_two_slots(contexts[0], 2, DEFAULT_TOLS)
    assert ortho.passed and ortho.residual < 1e-10

    herm = check_hermiticity(DEFAULT_TOLS, q=0.5)
    assert herm.passed
    _announce(
        "criterion 8: operator identities occ<=4 n<=3 worst %.2e, orthonormality, hermiticity"
        % worst,
        t0,
    )

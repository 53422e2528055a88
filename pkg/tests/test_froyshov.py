"""Special families, the dichotomy, reduced groups, and the invariant."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from floersplit.errors import DichotomyViolation, InclusionViolation, ValidationError
from floersplit.froyshov import (
    Case,
    ChainSpecial,
    SpecialPair,
    b_subspaces,
    check_periodicity,
    delta_degree,
    delta_prime_degree,
    froyshov_h,
    induce_special,
    reduced,
    reduced_from_subspaces,
    stabilization_indices,
    z_subspaces,
)
from floersplit.graded import CochainComplex, GradedMap, cohomology
from floersplit.qlinalg import Matrix, Subspace

from helpers import (
    chain_special_for,
    graded_space,
    mat,
    oracle_family_on_cocycles,
    random_split_complex,
)


def _pair(space, case, deltas=None, primes=None, n_max=3):
    ds = list(deltas or [])
    ps = list(primes or [])
    while len(ds) < n_max + 1:
        ds.append(Matrix.zeros(1, space.dim(delta_degree(len(ds)))))
    while len(ps) < n_max + 1:
        ps.append(Matrix.zeros(space.dim(delta_prime_degree(len(ps))), 1))
    return SpecialPair(n_max, tuple(ds), tuple(ps), case)


def _sigma_like_space():
    # internal-convention dims of the rank-(4,2) mapping-torus fixture
    return graded_space(4, 0, 2, 0, 4, 0, 2, 0)


def _sigma_like_pair(space):
    e1 = mat([[1, 0, 0, 0]])
    e2 = mat([[0, 1, 0, 0]])
    return _pair(space, Case.DELTA_SIDE, deltas=[e1, e1, e2, e2])


# -- type invariants -----------------------------------------------------


def test_pair_rejects_both_families_nonzero():
    space = graded_space(1, 1, 0, 0, 1, 0, 0, 0)
    with pytest.raises(DichotomyViolation):
        _pair(space, Case.DELTA_SIDE, deltas=[mat([[1]])], primes=[Matrix.column([1])], n_max=1)


def test_pair_rejects_mistagged_zero_case():
    space = graded_space(1, 1, 0, 0, 1, 0, 0, 0)
    with pytest.raises(ValidationError):
        _pair(space, Case.BOTH_ZERO, deltas=[mat([[1]])], n_max=1)


def test_pair_shape_validation():
    space = graded_space(1, 0, 0, 0, 2, 0, 0, 0)
    pair = _pair(space, Case.DELTA_SIDE, deltas=[mat([[1, 1]])], n_max=1)
    pair.validate_against(space)
    with pytest.raises(ValidationError):
        pair.validate_against(graded_space(1, 0, 0, 0, 3, 0, 0, 0))


# -- induce_special -------------------------------------------------------


def test_induce_both_zero():
    rng = random.Random(0)
    cx, a, h = random_split_complex(rng)
    cs = chain_special_for(rng, cx, a, h, delta_class_zero=True, prime_class_zero=True)
    pair = induce_special(cs, cohomology(cx), 2)
    assert pair.case is Case.BOTH_ZERO


def test_induce_delta_side_with_zero_v():
    space = graded_space(0, 0, 0, 0, 1, 0, 0, 0)
    cx = CochainComplex(space, GradedMap.zero(space, space, 1))
    cs = ChainSpecial(mat([[1]]), Matrix.zeros(0, 1), GradedMap.zero(space, space, 4))
    pair = induce_special(cs, cohomology(cx), 3)
    assert pair.case is Case.DELTA_SIDE
    assert not pair.deltas[0].is_zero
    assert all(pair.deltas[n].is_zero for n in range(1, pair.n_max + 1))


def test_induce_dichotomy_violation():
    space = graded_space(0, 1, 0, 0, 1, 0, 0, 0)
    cx = CochainComplex(space, GradedMap.zero(space, space, 1))
    cs = ChainSpecial(mat([[1]]), Matrix.column([1]), GradedMap.zero(space, space, 4))
    with pytest.raises(DichotomyViolation):
        induce_special(cs, cohomology(cx), 1)


def test_induce_rejects_non_chain_map_v():
    # CF has lines in degrees 1, 2, 5, 6; d is an isomorphism 1 -> 2 and
    # zero 5 -> 6, so a v with nonzero blocks 1 -> 5 and 2 -> 6 cannot
    # commute with d
    space = graded_space(0, 1, 1, 0, 0, 1, 1, 0)
    def one_at(degrees, shift):
        return GradedMap(
            space, space, shift,
            tuple(
                mat([[1]]) if q in degrees else Matrix.zeros(space.dim(q + shift), space.dim(q))
                for q in range(8)
            ),
        )
    cx = CochainComplex(space, one_at({1}, 1))
    v_bad = one_at({1, 2}, 4)
    cs = ChainSpecial(Matrix.zeros(1, 0), Matrix.column([0]), v_bad)
    with pytest.raises(ValidationError):
        induce_special(cs, cohomology(cx), 1)


def test_induce_matches_bruteforce_oracle():
    rng = random.Random(21)
    hits = 0
    for _ in range(25):
        cx, a, h = random_split_complex(rng)
        zero_d = rng.random() < 0.5
        cs = chain_special_for(rng, cx, a, h, delta_class_zero=zero_d, prime_class_zero=not zero_d)
        coh = cohomology(cx)
        pair = induce_special(cs, coh, 3)
        for n in range(pair.n_max + 1):
            oracle_fun, oracle_vec = oracle_family_on_cocycles(
                cx, cs.delta, cs.delta_prime, cs.v, n
            )
            deg = delta_degree(n)
            cocycle_classes = coh.class_projection[deg] @ coh.cocycles[deg].basis
            assert pair.deltas[n] @ cocycle_classes == oracle_fun
            pdeg = delta_prime_degree(n)
            lift = coh.rep_section[pdeg] @ pair.deltas_prime[n]
            diff = lift - oracle_vec
            if not diff.is_zero:
                assert coh.coboundaries[pdeg].contains_vector(diff.col(0))
            hits += 1
    assert hits > 50


def test_induce_extension_stabilizes():
    """Asking for a longer family never changes the carved subspaces."""
    rng = random.Random(33)
    for _ in range(10):
        cx, a, h = random_split_complex(rng)
        cs = chain_special_for(rng, cx, a, h, prime_class_zero=True)
        coh = cohomology(cx)
        pair = induce_special(cs, coh, 2)
        longer = induce_special(cs, coh, pair.n_max + 4)
        hs = coh.h_space
        assert z_subspaces(hs, pair) == z_subspaces(hs, longer)[:8]
        assert b_subspaces(hs, pair) == b_subspaces(hs, longer)[:8]


# -- Z and B subspaces ------------------------------------------------------


def test_z_subspaces_both_zero_full():
    space = graded_space(2, 1, 1, 1, 2, 1, 1, 1)
    pair = _pair(space, Case.BOTH_ZERO)
    z = z_subspaces(space, pair)
    assert all(z[q] == Subspace.full(space.dim(q)) for q in range(8))


def test_z_subspaces_sigma_fixture():
    space = _sigma_like_space()
    z = z_subspaces(space, _sigma_like_pair(space))
    e = Matrix.identity(4).columns()
    want = Subspace.span(4, Matrix.from_columns([e[2], e[3]], rows=4))
    assert z[0] == want and z[0].dim == 2
    assert z[4] == want


def test_z_subspace_single_functional_on_line():
    space = graded_space(0, 0, 0, 0, 1, 0, 0, 0)
    pair = _pair(space, Case.DELTA_SIDE, deltas=[mat([[2]])], n_max=1)
    assert z_subspaces(space, pair)[4] == Subspace.zero(1)


def test_b_subspaces_both_zero():
    space = graded_space(1, 2, 1, 1, 1, 2, 1, 1)
    b = b_subspaces(space, _pair(space, Case.BOTH_ZERO))
    assert all(b[q].dim == 0 for q in range(8))


def test_b_subspace_full_line():
    space = graded_space(0, 1, 0, 0, 0, 0, 0, 0)
    pair = _pair(space, Case.DELTA_PRIME_SIDE, primes=[Matrix.column([1])], n_max=1)
    assert b_subspaces(space, pair)[1] == Subspace.full(1)


def test_b_subspace_rank_two():
    space = graded_space(0, 3, 0, 0, 0, 0, 0, 0)
    pair = _pair(
        space, Case.DELTA_PRIME_SIDE,
        primes=[
            Matrix.column([1, 0, 0]),
            Matrix.zeros(0, 1),
            Matrix.column([1, 1, 0]),
        ],
        n_max=2,
    )
    assert b_subspaces(space, pair)[1].dim == 2


# -- reduced -----------------------------------------------------------------


def test_reduced_both_zero_equals_unreduced():
    space = graded_space(1, 2, 0, 1, 1, 2, 0, 1)
    red = reduced(space, _pair(space, Case.BOTH_ZERO))
    assert red.hf_red == space


def test_reduced_sigma_fixture_dims():
    space = _sigma_like_space()
    red = reduced(space, _sigma_like_pair(space))
    assert red.hf_red.dims == (2, 0, 2, 0, 2, 0, 2, 0)


def test_reduced_full_rank_family_kills_even_degrees():
    space = graded_space(1, 0, 1, 0, 1, 0, 1, 0)
    pair = _pair(
        space, Case.DELTA_SIDE,
        deltas=[mat([[1]]), mat([[1]])], n_max=1,
    )
    red = reduced(space, pair)
    assert red.hf_red.dims == (0, 0, 1, 0, 0, 0, 1, 0)


def test_reduced_dim_identity_every_degree():
    space = _sigma_like_space()
    red = reduced(space, _sigma_like_pair(space))
    for q in range(8):
        assert red.hf_red.dim(q) == red.z[q].dim - red.b[q].dim


def test_untouched_degrees():
    space = graded_space(2, 2, 2, 2, 2, 2, 2, 2)
    e1 = mat([[1, 0]])
    pair_d = _pair(space, Case.DELTA_SIDE, deltas=[e1, e1], n_max=1)
    red_d = reduced(space, pair_d)
    for q in (1, 2, 3, 5, 6, 7):
        assert red_d.hf_red.dim(q) == space.dim(q)
    pair_p = _pair(space, Case.DELTA_PRIME_SIDE, primes=[Matrix.column([1, 0])], n_max=1)
    red_p = reduced(space, pair_p)
    for q in (0, 2, 3, 4, 6, 7):
        assert red_p.hf_red.dim(q) == space.dim(q)


def test_inclusion_violation_guard():
    space = graded_space(0, 2, 0, 0, 0, 0, 0, 0)
    z = tuple(
        Subspace.span(2, Matrix.from_columns([[1, 0]], rows=2)) if q == 1
        else Subspace.full(space.dim(q))
        for q in range(8)
    )
    b = tuple(
        Subspace.span(2, Matrix.from_columns([[0, 1]], rows=2)) if q == 1
        else Subspace.zero(space.dim(q))
        for q in range(8)
    )
    with pytest.raises(InclusionViolation):
        reduced_from_subspaces(space, z, b)


# -- froyshov_h ---------------------------------------------------------------


def test_h_sigma_fixture():
    space = _sigma_like_space()
    red = reduced(space, _sigma_like_pair(space))
    assert froyshov_h(space, red) == 2
    assert froyshov_h(space, red, "homology") == -2  # same data, swapped roles


def test_h_both_zero_is_zero():
    space = graded_space(3, 1, 4, 1, 5, 9, 2, 6)
    red = reduced(space, _pair(space, Case.BOTH_ZERO))
    assert froyshov_h(space, red) == 0


def test_h_cork_fixture():
    space = graded_space(1, 0, 1, 0, 1, 0, 1, 0)
    red = reduced(space, _pair(space, Case.BOTH_ZERO, n_max=1))
    assert froyshov_h(space, red) == 0


def test_h_sign_bookkeeping():
    """Functional side pushes h up by the Z-codimensions, vector side
    pulls it down by the B-dimensions."""
    space = graded_space(2, 2, 0, 0, 2, 2, 0, 0)
    e1 = mat([[1, 0]])
    pair_d = _pair(space, Case.DELTA_SIDE, deltas=[e1, e1], n_max=1)
    red_d = reduced(space, pair_d)
    codim0 = space.dim(0) - red_d.z[0].dim
    codim4 = space.dim(4) - red_d.z[4].dim
    assert froyshov_h(space, red_d) == Fraction(codim0 + codim4, 2) >= 0

    pair_p = _pair(
        space, Case.DELTA_PRIME_SIDE,
        primes=[Matrix.column([1, 0]), Matrix.column([0, 1])], n_max=1,
    )
    red_p = reduced(space, pair_p)
    assert froyshov_h(space, red_p) == -Fraction(red_p.b[1].dim + red_p.b[5].dim, 2) <= 0


def test_h_can_be_half_integral_off_periodicity():
    space = graded_space(1, 0, 0, 0, 0, 0, 0, 0)
    pair = _pair(space, Case.DELTA_SIDE, deltas=[Matrix.zeros(1, 0), mat([[1]])], n_max=1)
    red = reduced(space, pair)
    assert froyshov_h(space, red) == Fraction(1, 2)


# -- periodicity and stabilization ----------------------------------------------


def test_periodicity_report():
    space = _sigma_like_space()
    red = reduced(space, _sigma_like_pair(space))
    rep = check_periodicity(space, red)
    assert rep.hf_periodic and rep.reduced_periodic

    space2 = graded_space(1, 0, 0, 0, 0, 0, 0, 0)
    red2 = reduced(space2, _pair(space2, Case.BOTH_ZERO))
    rep2 = check_periodicity(space2, red2)
    assert not rep2.hf_periodic


def test_stabilization_indices():
    space = _sigma_like_space()
    rep = stabilization_indices(space, _sigma_like_pair(space))
    assert rep.z0 == 3 and rep.z4 == 2  # the last member to cut each tower
    assert rep.b1 is None and rep.b5 is None

    pair = _pair(space, Case.BOTH_ZERO)
    rep0 = stabilization_indices(space, pair)
    assert rep0 == type(rep0)(None, None, None, None)

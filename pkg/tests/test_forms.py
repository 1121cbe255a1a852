from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as o
from sjc.forms import (
    ExtQuadraticForm,
    QuadraticForm,
    RestrictedForm,
    arf_type,
    base_form,
    bform,
    direct_sum,
    evaluate,
    ext_bform,
    ext_form_type,
    form_index,
    form_type,
    from_ext,
    gram_rank,
    hyperbolic_pairs,
    is_nondegenerate,
    is_totally_isotropic,
    parse_eps,
    perp,
    polarisation_check,
    q_plus,
    restrict,
    restrict_type,
    sing_intersection_dim,
    singular_count,
    singular_set,
    swap_pairs,
    symplectic_basis,
    to_ext,
    trace_reduce,
    translation,
)
from sjc.gf2 import ParameterError, enumerate_subspaces, gf_trace, rref

N = 3
vec = st.integers(0, (1 << 2 * N) - 1)


@given(vec, vec)
def test_bform_matches_coordinates(x, y):
    assert bform(x, y) == o.B(x, y, N)
    assert bform(x, y) == bform(y, x)
    assert bform(x, x) == 0


@given(vec)
def test_q_plus_matches_coordinates(x):
    assert q_plus(x) == o.Q0(x, N)
    assert swap_pairs(swap_pairs(x)) == x


@given(vec, vec)
def test_form_values(c, x):
    assert QuadraticForm(N, c)(x) == evaluate(QuadraticForm(N, c), x) == o.phi(N, c, x)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_type_matches_singular_count(n):
    for c in range(1 << 2 * n):
        assert form_type(QuadraticForm(n, c)) == o.ftype(n, c)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("eps", [1, -1])
def test_index(n, eps):
    idx = form_index(n, eps)
    assert len(idx) == 2 ** (n - 1) * (2**n + eps)
    assert list(idx.order) == sorted(idx.order)
    assert base_form(eps, n).c in idx
    assert all(idx.position(c) == j for j, c in enumerate(idx.order))
    assert idx.full.bit_count() == len(idx)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("eps", [1, -1])
def test_singular_sets(n, eps):
    for c in form_index(n, eps).order[:8]:
        s = singular_set(QuadraticForm(n, c))
        assert len(s) == singular_count(n, eps) == o.sing_count(n, eps)
        assert s == {x for x in range(1 << 2 * n) if o.phi(n, c, x) == 0}


@pytest.mark.parametrize("c", [0, 5, 17, 63])
def test_polarisation(c):
    assert polarisation_check(QuadraticForm(N, c))


def test_parse_eps():
    assert parse_eps("+") == 1 and parse_eps("-") == -1 and parse_eps(-1) == -1
    with pytest.raises(ParameterError):
        parse_eps("x")


@given(vec, vec)
def test_singular_translation_law(c, a):
    """sing(phi_a) is sing(phi)+a if a is singular for phi, else its complement plus a."""
    n = N
    phi = QuadraticForm(n, c)
    psi = QuadraticForm(n, c ^ a)
    assert translation(phi, psi) == a
    s = singular_set(phi)
    everything = set(range(1 << 2 * n))
    base = s if evaluate(phi, a) == 0 else everything - s
    assert singular_set(psi) == {x ^ a for x in base}
    # the translate keeps its type exactly when a is singular
    assert (form_type(psi) == form_type(phi)) == (evaluate(phi, a) == 0)


def _subspaces(n2, d):
    return list(enumerate_subspaces(n2, d))


SUBS_4 = [u for d in range(5) for u in _subspaces(4, d)]
SUBS_6_2 = _subspaces(6, 2)


def test_nondegeneracy_and_isotropy_match_brute_force():
    for u in SUBS_4:
        s = frozenset(u.elements())
        assert is_nondegenerate(u) == o.is_nondeg(s, 2)
        assert is_totally_isotropic(u) == o.is_ti(s, 2)
        assert frozenset(perp(u).elements()) == o.perp_set(s, 2)
        assert perp(perp(u)) == u


def test_hyperbolic_pairs():
    for u in SUBS_6_2 + _subspaces(6, 4):
        pairs = hyperbolic_pairs(u.rows)
        if not is_nondegenerate(u):
            assert pairs is None
            with pytest.raises(ParameterError):
                symplectic_basis(u.rows)
            continue
        flat = [v for p in pairs for v in p]
        assert rref(flat, 6) == u
        for i, (a, b) in enumerate(pairs):
            assert bform(a, b) == 1
            for a2, b2 in pairs[i + 1 :]:
                assert bform(a, a2) == bform(a, b2) == bform(b, a2) == bform(b, b2) == 0
        assert gram_rank(flat) == len(flat)


def test_arf_agrees_with_counting():
    nondeg = [u for u in SUBS_6_2 + _subspaces(6, 4) if is_nondegenerate(u)]
    for c in range(0, 64, 3):
        phi = QuadraticForm(3, c)
        for u in nondeg:
            t = restrict_type(phi, u)
            assert arf_type(phi, u) == t == o.restricted_type(3, c, frozenset(u.elements()))


def test_restricted_types_multiply():
    for u in SUBS_6_2:
        if not is_nondegenerate(u):
            continue
        w = perp(u)
        for c in range(64):
            phi = QuadraticForm(3, c)
            assert restrict_type(phi, u) * restrict_type(phi, w) == form_type(phi)


def test_restriction_rejects_degenerate():
    u = rref([1, 4], 4)
    with pytest.raises(ParameterError):
        restrict_type(QuadraticForm(2, 0), u)


def test_sing_intersection():
    ti = [u for u in SUBS_6_2 if is_totally_isotropic(u)]
    for c in range(0, 64, 5):
        phi = QuadraticForm(3, c)
        for u in ti:
            z = sum(1 for x in u.elements() if o.phi(3, c, x) == 0)
            assert 2 ** sing_intersection_dim(phi, u) == z


@settings(max_examples=40)
@given(st.integers(0, 63), st.sampled_from([u for u in SUBS_6_2 if is_nondegenerate(u)]))
def test_direct_sum_round_trip(c, u):
    phi = QuadraticForm(3, c)
    ru, rw = restrict(phi, u), restrict(phi, perp(u))
    assert all(ru(x) == evaluate(phi, x) for x in u.elements())
    assert ru.eps * rw.eps == phi.eps
    assert direct_sum(ru, rw) == phi


def test_direct_sum_needs_orthogonal_pieces():
    u = rref([1, 2], 4)
    w = rref([2, 4], 4)
    with pytest.raises(ParameterError):
        direct_sum(restrict(QuadraticForm(2, 0), u), RestrictedForm(w, (0, 0)))


# ---------------------------------------------------------- trace reduction

EXT_CASES = [(1, 2), (2, 2), (1, 3), (3, 2), (2, 3)]


@pytest.mark.parametrize("m,b", EXT_CASES)
def test_coordinates_round_trip(m, b):
    for v in range(0, 1 << 2 * m * b, 7):
        assert from_ext(to_ext(v, m, b), b) == v


@pytest.mark.parametrize("m,b", EXT_CASES)
def test_trace_of_ext_form_is_standard(m, b):
    n = m * b
    for x in range(0, 1 << 2 * n, 5):
        for y in range(0, 1 << 2 * n, 11):
            t = gf_trace(ext_bform(to_ext(x, m, b), to_ext(y, m, b), b), b)
            assert t == o.B(x, y, n)


@pytest.mark.parametrize("m,b", [(1, 2), (2, 2), (1, 3)])
@pytest.mark.parametrize("eps", [1, -1])
def test_trace_reduction_preserves_type(m, b, eps):
    n = m * b
    for c in [(0,) * 2 * m, tuple(range(1, 2 * m + 1))]:
        c = tuple(x % (1 << b) for x in c)
        phi_ext = ExtQuadraticForm(m, b, eps, c)
        red = trace_reduce(phi_ext)
        for v in range(1 << 2 * n):
            assert red(v) == gf_trace(phi_ext(to_ext(v, m, b)), b)
        assert o.ftype(n, red.c) == ext_form_type(phi_ext)
        if c == (0,) * 2 * m:
            assert ext_form_type(phi_ext) == eps

from itertools import product
from math import comb, perm

import pytest
import sympy.combinatorics as sc
from hypothesis import given, strategies as st

from intforms.chain_core import F2, ZZ
from intforms.icat import (BarrattEcclesChain, Injection, Permutation, all_permutations,
                           augmentation_map, be_complex, be_operad_compose, be_rank,
                           block_permutation, cup_i_element, enumerate_injections,
                           orbit_canonicalize, shuffle_simplices, sigma_action_on_objects)


def perms_of(n):
    return st.permutations(list(range(1, n + 1))).map(Permutation)


@st.composite
def be_chains(draw, arity, max_degree=2, max_terms=2):
    deg = draw(st.integers(0, max_degree))
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        key = tuple(draw(perms_of(arity)) for _ in range(deg + 1))
        terms[key] = terms.get(key, 0) + draw(st.sampled_from([-2, -1, 1, 2]))
    return BarrattEcclesChain(arity, deg, terms)


def test_enumerate_injections_examples():
    assert [f.values for f in enumerate_injections(1, 2)] == [(1,), (2,)]
    assert len(enumerate_injections(2, 2)) == 2
    assert enumerate_injections(3, 2) == []
    for m in range(4):
        for n in range(5):
            assert len(enumerate_injections(m, n)) == (perm(n, m) if m <= n else 0)


def test_free_action_on_injections():
    for s in range(4):
        for m in range(s, 5):
            orbits = {}
            for f in enumerate_injections(s, m):
                rep, _, _ = orbit_canonicalize(f.values, [0] * s)
                orbits.setdefault(rep, []).append(f)
            assert len(orbits) == comb(m, s)
            assert all(len(v) == perm(s, s) for v in orbits.values())


def test_concat_compose_examples():
    f = Injection(1, 2, (1,))
    g = Injection(1, 1, (1,))
    assert f.concat(g).values == (1, 3) and f.concat(g).target == 3
    h = Injection(2, 4, (3, 1))
    assert Injection.identity(4).compose(h) == h == h.compose(Injection.identity(2))
    assert block_permutation(Permutation((2, 1)), [1, 1]) == Permutation((2, 1))
    with pytest.raises(ValueError):
        h.compose(Injection(1, 3, (1,)))


@given(st.permutations([1, 2, 3, 4]), st.permutations([1, 2, 3, 4]), st.permutations([1, 2, 3, 4]))
def test_injection_composition_associative(a, b, c):
    A, B, C = (Injection(4, 4, x) for x in (a, b, c))
    assert A.compose(B.compose(C)) == A.compose(B).compose(C)


@given(st.permutations([1, 2, 3, 4, 5]), st.permutations([1, 2, 3, 4, 5]))
def test_permutation_sign_matches_sympy(a, b):
    p, q = Permutation(a), Permutation(b)
    oracle = sc.Permutation([x - 1 for x in a])
    assert p.sign() == (1 if oracle.is_even else -1)
    assert (p * q).sign() == p.sign() * q.sign()
    assert (p * p.inverse()).is_identity()
    assert (p * q)(3) == p(q(3))


def test_orbit_canonicalize_examples():
    vals, pi, s = orbit_canonicalize((2, 1), (0, 0))
    assert vals == (1, 2) and s == 1
    assert orbit_canonicalize((2, 1), (-1, -1))[2] == -1
    vals, pi, s = orbit_canonicalize((1, 4, 6), (-1, 0, -1))
    assert pi.is_identity() and s == 1


@given(st.lists(st.integers(1, 9), min_size=1, max_size=5, unique=True),
       st.lists(st.integers(-1, 0), min_size=5, max_size=5))
def test_orbit_sign_is_koszul(values, degs):
    degs = degs[:len(values)]
    vals, pi, s = orbit_canonicalize(values, degs)
    assert list(vals) == sorted(values)
    assert all(vals[k] == values[pi(k + 1) - 1] for k in range(len(vals)))
    # oracle: bubble sort, flipping for each odd/odd swap
    v, d, sign = list(values), list(degs), 1
    for i in range(len(v)):
        for j in range(len(v) - 1 - i):
            if v[j] > v[j + 1]:
                if d[j] % 2 and d[j + 1] % 2:
                    sign = -sign
                v[j], v[j + 1] = v[j + 1], v[j]
                d[j], d[j + 1] = d[j + 1], d[j]
    assert s == sign


def test_sigma_action_on_objects():
    n, f = sigma_action_on_objects(Permutation((1, 2)), [2, 1])
    assert n == 3 and f.is_identity()
    n, f = sigma_action_on_objects(Permutation((2, 1)), [1, 2])
    # block of size 1 moves behind the block of size 2
    assert n == 3 and f.values == (3, 1, 2)
    assert f.as_permutation().inverse().images == (2, 3, 1)
    n, f = sigma_action_on_objects(Permutation((2, 1)), [0, 0])
    assert n == 0 and f.values == ()


def test_be_compose_examples():
    e1, e2 = Permutation.identity(1), Permutation.identity(2)
    t = Permutation((2, 1))
    ident = BarrattEcclesChain.simplex([e2])
    one = BarrattEcclesChain.identity(1)
    assert be_operad_compose(ident, [one, one]) == ident
    swap = BarrattEcclesChain.simplex([t])
    assert be_operad_compose(swap, [one, one]) == swap
    f = BarrattEcclesChain.simplex([e2, t])
    g = be_operad_compose(swap, [f, one])
    assert g.arity == 3 and g.degree == 1
    assert g.augmentation() == 0 and swap.augmentation() == 1


@given(be_chains(2, 3))
def test_boundary_squares_to_zero(e):
    assert e.boundary().boundary().is_zero()


@given(be_chains(3), perms_of(3))
def test_action_is_chain_map(e, s):
    assert e.act(s).boundary() == e.boundary().act(s)
    assert e.act_right(s).boundary() == e.boundary().act_right(s)


@given(be_chains(2, 2), be_chains(1, 1), be_chains(2, 1))
def test_compose_unit_laws(e, f, g):
    one = BarrattEcclesChain.identity(1)
    assert be_operad_compose(e, [one, one]) == e
    assert be_operad_compose(one, [g]) == g


def _sum(chains):
    out = chains[0]
    for c in chains[1:]:
        out = out + c
    return out


@given(be_chains(2, 2), be_chains(2, 1), be_chains(1, 1))
def test_compose_leibniz(e, f, g):
    lhs = be_operad_compose(e, [f, g]).boundary()
    parts = []
    if e.degree:
        parts.append(be_operad_compose(e.boundary(), [f, g]))
    if f.degree:
        parts.append(be_operad_compose(e, [f.boundary(), g]).scale((-1) ** e.degree))
    if g.degree:
        parts.append(be_operad_compose(e, [f, g.boundary()]).scale((-1) ** (e.degree + f.degree)))
    if parts:
        assert lhs == _sum(parts)
    else:
        assert lhs.is_zero()


@given(be_chains(2, 1, 1), be_chains(2, 1, 1), be_chains(1, 1, 1), be_chains(2, 1, 1))
def test_compose_associative(e, f, g, h):
    # gamma(gamma(e; f, g); h, 1, 1) == +-gamma(e; gamma(f; h, 1), g),
    # the sign from h passing g
    one = BarrattEcclesChain.identity(1)
    left = be_operad_compose(be_operad_compose(e, [f, g]), [h, one, one])
    right = be_operad_compose(e, [be_operad_compose(f, [h, one]), g])
    assert left == right.scale((-1) ** (g.degree * h.degree))


@given(be_chains(2, 1, 1), be_chains(2, 1, 1), be_chains(1, 1, 1))
def test_compose_equivariant(e, f, g):
    t = Permutation((2, 1))
    lhs = be_operad_compose(e.act_right(t), [f, g])
    rhs = be_operad_compose(e, [g, f]).act_right(block_permutation(t, [f.arity, g.arity]))
    assert lhs == rhs.scale((-1) ** (f.degree * g.degree))


def test_augmentation_commutes_with_composition():
    for e in all_permutations(2):
        for f in all_permutations(2):
            c = be_operad_compose(BarrattEcclesChain.simplex([e]),
                                  [BarrattEcclesChain.simplex([f]),
                                   BarrattEcclesChain.identity(1)])
            assert c.augmentation() == 1


@pytest.mark.parametrize("n", [1, 2])
def test_augmentation_quasi_iso_small(n):
    E = be_complex(n, 5, ZZ)
    assert E.rank(3) == be_rank(n, 3) == perm(n, n) ** 4
    assert str(E.homology(0)) == "Z"
    assert all(E.homology(q).is_zero for q in range(1, 5))
    aug = augmentation_map(n, 2, ZZ)
    assert aug[0].to_dense() == [[1] * perm(n, n)]


def test_contracting_homotopy_of_e3():
    # h(s_0..s_p) = (id, s_0..s_p) contracts E_3 onto its augmentation
    one = Permutation.identity(3)
    for deg in range(0, 3):
        for key in product(all_permutations(3), repeat=deg + 1):
            x = BarrattEcclesChain.simplex(key)
            hx = BarrattEcclesChain.simplex((one,) + key)
            lhs = hx.boundary()
            if deg:
                hdx = BarrattEcclesChain(3, deg, {(one,) + k: v
                                                  for k, v in x.boundary().terms.items()})
                lhs = lhs + hdx
                assert lhs == x
            else:
                assert lhs == x - BarrattEcclesChain.simplex([one])


@pytest.mark.parametrize("i", range(0, 5))
def test_cup_i_elements(i):
    t = Permutation((2, 1))
    e = cup_i_element(i, F2)
    assert e.degree == i
    if i:
        prev = cup_i_element(i - 1, F2)
        assert (e.boundary() - prev - prev.act(t)).reduce(F2).is_zero()
    lead = tuple(Permutation.identity(2) if j % 2 == 0 else t for j in range(i + 1))
    assert e.terms.get(lead) == 1


def test_shuffle_simplices_count_and_signs():
    out = shuffle_simplices((0, 1), (0, 1))
    assert len(out) == 2 and sorted(s for s, _ in out) == [-1, 1]
    assert len(shuffle_simplices((0, 1, 2), (0, 1))) == comb(3, 1)

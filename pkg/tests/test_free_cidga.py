from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from intforms.chain_core import QQ, ZZ, is_quasi_iso
from intforms.free_cidga import (FreeElement, augmentation_epsilon, basis_count,
                                 basis_enumerate, coinvariant_power_oracle, differential,
                                 external_product, free_graded_commutative_complex,
                                 functorial_pushforward, level_complex, pushforward_chain_map,
                                 tensor_power_oracle, unit_inclusion)
from intforms.icat import Injection, enumerate_injections


def brute_force_basis(p, m, q):
    # all sets of slot values with a letter and a parity, filtered
    out = set()
    for s in range(m + 1):
        for vals in product(range(1, m + 1), repeat=s):
            if list(vals) != sorted(set(vals)):
                continue
            for letters in product(range(1, p + 1), repeat=s):
                for odd in product((0, 1), repeat=s):
                    if -sum(odd) == q:
                        out.add(tuple(zip(vals, letters, odd)))
    return out


@pytest.mark.parametrize("p,m", [(p, m) for p in range(4) for m in range(4)])
def test_basis_count_formula_and_enumeration(p, m):
    for q in range(-4, 1):
        b = basis_enumerate(p, m, q)
        assert len(b) == basis_count(p, m, q) == len(set(b))
        assert set(b) == brute_force_basis(p, m, q)
        assert basis_count(p, m, q) == sum(comb(m, s) * comb(s, -q) * p ** s
                                           for s in range(m + 1))


def test_basis_examples():
    assert basis_enumerate(1, 1, 0) == [(), ((1, 1, 0),)]
    assert len(basis_enumerate(1, 2, -1)) == 4
    assert basis_enumerate(1, 1, -2) == []


def el(p, m, *mono, c=1):
    return FreeElement.monomial(p, m, mono, c)


def test_differential_examples():
    assert differential(el(1, 1, (1, 1, 0))) == el(1, 1, (1, 1, 1))
    assert differential(FreeElement.unit(1, 1)).is_zero()
    x = el(1, 2, (1, 1, 1), (2, 1, 0))
    assert differential(x) == el(1, 2, (1, 1, 1), (2, 1, 1), c=-1)


@pytest.mark.parametrize("p,m", [(p, m) for p in range(5) for m in range(5)])
def test_level_complexes_are_complexes_and_contractible(p, m):
    C = level_complex(p, m, ZZ)
    C.check()
    assert is_quasi_iso(unit_inclusion(p, m, ZZ))[0]


def test_level_examples():
    C = level_complex(1, 1)
    assert C.ranks == {0: 2, -1: 1}
    C = level_complex(1, 2)
    assert C.ranks == {0: 4, -1: 4, -2: 1}
    assert C.euler_characteristic() == 1
    assert level_complex(0, 3).ranks == {0: 1}


def test_tensor_power_oracle_agrees():
    for p in (1, 2):
        for m in (1, 2, 3):
            C = level_complex(p, m)
            T, pos = tensor_power_oracle(p, m)
            # slot k is tensor factor k; the unit of each factor is the empty slot
            for q in C.degrees:
                assert T.rank(q) == C.rank(q)
                idx = {mono: i for i, mono in enumerate(C.labels[q])}
                perm = {idx[mono]: pos[q][mono] for mono in C.labels[q]}
                if q - 1 in C.ranks:
                    dC, dT = C.d(q), T.d(q)
                    for i in idx.values():
                        got = {pos[q - 1][C.labels[q - 1][r]]: v for r, v in dC.cols[i].items()}
                        assert got == dict(dT.cols[perm[i]])


@st.composite
def elements(draw, p=2, m=3):
    q = draw(st.integers(-m, 0))
    basis = basis_enumerate(p, m, q)
    if not basis:
        return FreeElement(p, m, q)
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        terms[draw(st.sampled_from(basis))] = draw(st.integers(-3, 3))
    return FreeElement(p, m, q, terms)


@given(elements(2, 3))
def test_d_squared_zero(x):
    assert differential(differential(x)).is_zero()


@given(elements(2, 2), elements(2, 2))
def test_external_product_leibniz_and_unit(x, y):
    lhs = differential(external_product(x, y))
    rhs = external_product(differential(x), y) + \
        external_product(x, differential(y)).scale((-1) ** (-x.q))
    assert lhs == rhs
    u = FreeElement.unit(2, 0)
    assert external_product(u, x) == x
    assert external_product(x, u) == x


@given(elements(2, 2), elements(2, 1))
def test_external_product_symmetry(x, y):
    # mu(y, x) pushed along the block swap = +-mu(x, y)
    swap = Injection(3, 3, (3, 1, 2))  # y occupies 1..1 -> moves to slot 3
    lhs = functorial_pushforward(swap, external_product(y, x))
    rhs = external_product(x, y).scale((-1) ** (x.q * y.q))
    assert lhs == rhs


def test_symmetry_example_odd_odd():
    a = el(1, 1, (1, 1, 1))
    swap = Injection(2, 2, (2, 1))
    assert functorial_pushforward(swap, external_product(a, a)) == external_product(a, a).scale(-1)
    assert external_product(el(1, 1, (1, 1, 0)), el(1, 1, (1, 1, 0))) == el(1, 2, (1, 1, 0), (2, 1, 0))


def test_pushforward_examples():
    x = el(1, 2, (1, 1, 1), (2, 1, 1))
    assert functorial_pushforward(Injection.identity(2), x) == x
    assert functorial_pushforward(Injection(2, 2, (2, 1)), x) == x.scale(-1)
    assert functorial_pushforward(Injection(1, 2, (2,)), el(1, 1, (1, 1, 0))) == el(1, 2, (2, 1, 0))
    with pytest.raises(ValueError):
        functorial_pushforward(Injection(2, 3, (1, 2)), el(1, 1, (1, 1, 0)))


@pytest.mark.parametrize("m,n", [(m, n) for m in range(4) for n in range(m, 4)])
def test_pushforward_chain_map_and_functorial(m, n):
    for a in enumerate_injections(m, n):
        f = pushforward_chain_map(a, 2)
        f.check()
        for k in range(n, 4):
            for b in enumerate_injections(n, k):
                g = pushforward_chain_map(b, 2)
                ba = pushforward_chain_map(b.compose(a), 2)
                assert all((g[q] @ f[q]) == ba[q] for q in f.source.degrees)


def test_augmentations():
    assert augmentation_epsilon(1, FreeElement.unit(1, 1)) == 1
    assert augmentation_epsilon(0, el(1, 1, (1, 1, 0))) == 0
    assert augmentation_epsilon(1, el(1, 1, (1, 1, 0))) == 1
    assert augmentation_epsilon(1, el(1, 2, (1, 1, 1), (2, 1, 0))) == 0


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_symmetric_powers_acyclic_over_q(s):
    # weight s part of the free graded-commutative algebra on p disks
    for p in (1, 2, 3):
        C = free_graded_commutative_complex(p, s, QQ)
        C.check()
        assert all(C.homology(q).is_zero for q in C.degrees)
    # brute-force coinvariants of (D^0)^s: one class in each of degrees 0 and -1
    assert coinvariant_power_oracle(s, QQ) == {q: (1 if q in (0, -1) else 0)
                                               for q in range(-s, 1)}

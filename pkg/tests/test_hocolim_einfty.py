import random

import pytest

from intforms.chain_core import F2, ZZ, ChainComplex, Mat
from intforms.hocolim_einfty import (ConstantDiagram, EvaluationDiagram, HocolimComplex,
                                     TruncationWindow, ZeroDiagram, be_action,
                                     boundary_element, canonical_class_map, class_element,
                                     const_diagram_check, degree_zero_product,
                                     identity_operad_check, image_class, nerve_chains,
                                     product_compare, stabilization_scan, steenrod_cup_i,
                                     steenrod_square)
from intforms.icat import BarrattEcclesChain, Permutation, cup_i_element
from intforms.sset_eval import aw_cup_oracle, build_space

ID, T = Permutation.identity(2), Permutation((2, 1))


def test_window_validation():
    with pytest.raises(ValueError):
        TruncationWindow(2, 3, 1)
    with pytest.raises(ValueError):
        TruncationWindow(1, 0, 1)
    with pytest.raises(ValueError):
        TruncationWindow(0, 1, -1)


def test_nerve_chain_counts():
    # objects {0, 1}: Hom(0,0) = Hom(0,1) = Hom(1,1) = 1
    assert len(nerve_chains(0, 1, 0)) == 2
    assert len(nerve_chains(0, 1, 1)) == 3
    # normalized chains drop identities; none of length 2 survive here
    assert len(nerve_chains(0, 1, 2, normalized=True)) == 0


@pytest.mark.parametrize("M", [1, 2])
def test_constant_diagram(M):
    C = ChainComplex(ZZ, {0: 1, -1: 2, -2: 1}, {0: Mat.from_dense([[1], [0]], 1)})
    res = const_diagram_check(C, M)
    assert res["left_inverse"] and res["quasi_iso"]


def test_zero_diagram():
    H = HocolimComplex(ZeroDiagram(ZZ), TruncationWindow(1, 2, 2))
    assert not H.complex.ranks


def test_product_compare():
    X, Y = build_space("S1"), build_space("point")
    res = product_compare([EvaluationDiagram(X, ZZ), EvaluationDiagram(Y, ZZ)],
                          TruncationWindow(1, 2, 2), (-1, 0))
    assert res["chain_map"] and res["isomorphism"] and res["quasi_iso"]


def test_scan_on_circle_matches_object_one():
    res = stabilization_scan(EvaluationDiagram(build_space("S1"), ZZ), range(1, 4), (-1, 0))
    scan = res["scan"]
    assert scan[1]["matches_P1"] and scan[3]["matches_P1"]
    assert {q: str(h) for q, h in scan[3]["homology"].items()} == {-1: "Z", 0: "Z"}
    # the cut at M = 2 leaves an automorphism-group class behind
    assert not scan[2]["matches_P1"]
    assert str(scan[2]["homology"][0]) == "Z + Z/2"


def test_normalized_and_unnormalized_agree():
    P = EvaluationDiagram(build_space("S1"), ZZ)
    hs = [HocolimComplex(P, TruncationWindow(1, 2, 3), (-1, 0), normalized=n).homology_table((-1, 0))
          for n in (False, True)]
    assert {q: str(h) for q, h in hs[0].items()} == {q: str(h) for q, h in hs[1].items()}


@pytest.fixture(scope="module")
def circle():
    P = EvaluationDiagram(build_space("S1"), ZZ)
    small = HocolimComplex(P, TruncationWindow(1, 2, 1))
    big = HocolimComplex(P, TruncationWindow(1, 4, 2), (-3, 1))
    return P, small, big


def _random_element(H, rnd, n, p_max):
    labs = H.complex.labels[n]
    v = {i: rnd.randint(-2, 2) for i, l in enumerate(labs) if l[0] <= p_max and rnd.random() < .5}
    return H.element(n, {i: c for i, c in v.items() if c})


def _add(a, b, s=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}


def test_unit_acts_as_identity(circle):
    P, small, _ = circle
    rnd = random.Random(0)
    xs = [_random_element(small, rnd, n, 1) for n in (-1, 0, 0)]
    assert identity_operad_check(P, xs)


@pytest.mark.parametrize("seed", range(4))
def test_action_is_a_chain_map(circle, seed):
    P, small, big = circle
    rnd = random.Random(seed)
    d = lambda z: boundary_element(big, z) if z else {}
    for e in (BarrattEcclesChain.simplex([ID]), BarrattEcclesChain.simplex([ID, T]),
              BarrattEcclesChain.simplex([T, ID])):
        n1, n2 = rnd.choice([-1, 0]), rnd.choice([-1, 0])
        x = _random_element(small, rnd, n1, 1 - e.degree)
        y = _random_element(small, rnd, n2, 1 - e.degree)
        lhs = d(be_action(e, [x, y], P))
        rhs = be_action(e.boundary(), [x, y], P) if e.degree else {}
        rhs = _add(rhs, be_action(e, [d(x), y], P), (-1) ** e.degree)
        rhs = _add(rhs, be_action(e, [x, d(y)], P), (-1) ** (e.degree + n1))
        assert lhs == rhs


@pytest.mark.parametrize("seed", range(4))
def test_action_is_equivariant(circle, seed):
    P, small, _ = circle
    rnd = random.Random(10 + seed)
    for e in (BarrattEcclesChain.simplex([ID]), BarrattEcclesChain.simplex([ID, T])):
        n1, n2 = rnd.choice([-1, 0]), rnd.choice([-1, 0])
        x = _random_element(small, rnd, n1, 1 - e.degree)
        y = _random_element(small, rnd, n2, 1 - e.degree)
        sign = (-1) ** (n1 * n2)
        swapped = {k: sign * v for k, v in be_action(e, [y, x], P).items()}
        assert be_action(e.act(T), [x, y], P) == swapped


def test_degree_zero_product_is_the_external_product(circle):
    P, _, big = circle
    C1 = P.complex(1)
    from intforms.chain_core import HomologyPresentation
    g = HomologyPresentation(C1, -1).gens.cols[0]
    u = HomologyPresentation(C1, 0).gens.cols[0]
    x, one = class_element(1, -1, g), class_element(1, 0, u)
    prod = degree_zero_product(P, one, x)
    ext = P.product(1, 0, u, 1, -1, g)
    assert big.vector(prod)[1] == big.vector(class_element(2, -1, ext))[1]


def test_action_checks_arity():
    P = EvaluationDiagram(build_space("S1"), F2)
    with pytest.raises(ValueError):
        be_action(cup_i_element(1, F2), [{}], P)


@pytest.fixture(scope="module")
def rp2_square():
    return steenrod_square(build_space("rp2min"), 1, -1, F2, M=3)


def test_sq1_on_rp2_is_verified_and_nonzero(rp2_square):
    r = rp2_square
    assert r.verified and r.output_degree == -2
    (entry,) = r.entries
    assert entry["cycle"] and any(entry["class"])


def test_sq1_equals_external_square(rp2_square):
    (entry,) = rp2_square.entries
    assert entry["class"] == entry["product_class"]


def test_sq1_agrees_with_cochain_oracle(rp2_square):
    oracle = aw_cup_oracle(build_space("rp2min"), F2)
    (entry,) = rp2_square.entries
    assert any(entry["class"]) == any(oracle.table[((-1, 0), (-1, 0))])


def test_steenrod_argument_checks():
    X = build_space("S1")
    with pytest.raises(ValueError):
        steenrod_square(X, 2, -1)
    with pytest.raises(ValueError):
        steenrod_cup_i(X, 0, -1, ring=ZZ)
    with pytest.raises(ValueError):
        steenrod_cup_i(X, 0, -1, M=1)


def test_sq1_vanishes_on_circle():
    r = steenrod_square(build_space("S1"), 1, -1, F2, M=2)
    assert all(not any(e["class"] or ()) for e in r.entries)


def test_class_map_requires_window_object(circle):
    _, small, _ = circle
    with pytest.raises(ValueError):
        canonical_class_map(small, 5)
    assert not any(image_class(small, 1, 0, {}))

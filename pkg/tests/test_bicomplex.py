import random

import pytest

from intforms.bicomplex import (Bicomplex, BicomplexMap, SimplicialChainComplex,
                                bicomplex_symmetry, bicomplex_tensor, constant_moore_tot,
                                hat_tensor, koszul_symmetry, moore_complex,
                                phi_associativity_holds, phi_is_chain_map, phi_symmetry_holds,
                                shuffle_map, shuffle_symmetry_holds, tot, tot_map,
                                tot_monoidal_phi)
from intforms.chain_core import F2, ZZ, ChainComplex, ChainMap, Mat
from intforms.sset_eval import boundary_simplex, sphere, standard_simplex


def random_complex(rnd, degs, max_rank):
    """Chain complex with d built as a product so that d^2 = 0 by construction."""
    ranks = {q: rnd.randint(0, max_rank) for q in degs}
    diffs = {}
    prev = None  # matrix of d_{q+1}
    for q in sorted(degs, reverse=True):
        if q - 1 not in ranks or not ranks[q] or not ranks[q - 1]:
            prev = None
            continue
        n_src, n_tgt = ranks[q], ranks[q - 1]
        rows = [[rnd.randint(-2, 2) for _ in range(n_src)] for _ in range(n_tgt)]
        D = Mat.from_dense(rows, n_src)
        if prev is not None:
            # project onto a complement of the image of d_{q+1}: kill d o d
            image_cols = [c for c in prev.cols if c]
            if image_cols:
                D = Mat.zeros(n_tgt, n_src)
        diffs[q] = D
        prev = D
    return ChainComplex(ZZ, ranks, diffs)


def random_bicomplex(rnd):
    """Tensor of a horizontal and a vertical complex, scrambled cell by cell."""
    big, small = (3, 1) if rnd.random() < 0.5 else (1, 3)
    A = random_complex(rnd, [0, 1, 2, 3][:rnd.randint(2, 4)], big)
    B = random_complex(rnd, [0, -1, -2, -3][:rnd.randint(1, 4)], small)
    ranks, dh, dv = {}, {}, {}
    for p in A.degrees:
        for q in B.degrees:
            ranks[(p, q)] = A.rank(p) * B.rank(q)
    bases = {}
    for c, r in ranks.items():
        M = Mat.identity(r)
        inv = Mat.identity(r)
        for _ in range(2 * r):
            if r < 2:
                break
            i, j = rnd.sample(range(r), 2)
            k = rnd.choice([-1, 1])
            E = Mat.identity(r) + Mat(r, r, [{i: k} if col == j else {} for col in range(r)])
            Einv = Mat.identity(r) + Mat(r, r, [{i: -k} if col == j else {} for col in range(r)])
            M, inv = E @ M, inv @ Einv
        bases[c] = (M, inv)
    for (p, q), r in ranks.items():
        if not r:
            continue
        if (p - 1, q) in ranks and ranks[(p - 1, q)]:
            H = A.d(p).kron(Mat.identity(B.rank(q)))
            dh[(p, q)] = bases[(p - 1, q)][0] @ H @ bases[(p, q)][1]
        if (p, q - 1) in ranks and ranks[(p, q - 1)]:
            V = Mat.identity(A.rank(p)).kron(B.d(q))
            dv[(p, q)] = bases[(p, q - 1)][0] @ V @ bases[(p, q)][1]
    return Bicomplex(ZZ, ranks, dh, dv)


SPACES = [standard_simplex(1), boundary_simplex(2), sphere(1)]


def random_simplicial(rnd, p_max=2):
    X = rnd.choice(SPACES)
    K = random_complex(rnd, [0, -1], 2)
    if not K.ranks:
        K = ChainComplex(ZZ, {0: 1})
    return SimplicialChainComplex.from_simplicial_set(X, K, p_max)


def test_random_generators_build_valid_objects():
    rnd = random.Random(0)
    for _ in range(20):
        Y = random_bicomplex(rnd)
        assert all(Y.invariants())
        assert random_simplicial(rnd).is_valid()


def test_tot_is_a_complex():
    rnd = random.Random(1)
    for _ in range(10):
        tot(random_bicomplex(rnd)).check()


def test_tot_sign_is_needed_on_a_commuting_square():
    # d_h d_v = d_v d_h, so d_h + d_v alone squares to 2 d_h d_v
    Y = Bicomplex(ZZ, {(1, 0): 1, (0, 0): 1, (1, -1): 1, (0, -1): 1},
                  {(1, 0): Mat.identity(1), (1, -1): Mat.identity(1)},
                  {(1, 0): Mat.identity(1), (0, 0): Mat.identity(1)})
    T = tot(Y)
    T.check()
    assert (T.d(0) @ T.d(1)).is_zero()
    assert sorted(abs(v) for c in T.d(1).cols for v in c.values()) == [1, 1]
    assert sum(v for c in T.d(1).cols for v in c.values()) == 0


@pytest.mark.parametrize("seed", range(100))
def test_sign_infrastructure_on_random_instances(seed):
    rnd = random.Random(seed)
    Y, Z = random_bicomplex(rnd), random_bicomplex(rnd)
    assert phi_is_chain_map(Y, Z)
    assert phi_symmetry_holds(Y, Z)
    W = random_bicomplex(rnd)
    assert phi_associativity_holds(_corner(Y), _corner(Z), _corner(W))
    A, B = random_simplicial(rnd), random_simplicial(rnd)
    assert shuffle_symmetry_holds(A, B)
    sh = shuffle_map(A, B)
    assert sh.commutes() == (True, True)


def _corner(B):
    """Restrict to p <= 1 (a subcomplex) and q >= -1 (a quotient)."""
    keep = lambda c: c[0] <= 1 and c[1] >= -1
    return Bicomplex(B.ring, {c: r for c, r in B.ranks.items() if keep(c)},
                     {c: M for c, M in B.dh.items() if keep(c)},
                     {c: M for c, M in B.dv.items() if keep(c) and keep((c[0], c[1] - 1))})


def _unsigned_phi_breaks(Y, Z):
    phi = tot_monoidal_phi(Y, Z)
    comps = {n: Mat(M.nrows, M.ncols, [{k: abs(v) for k, v in c.items()} for c in M.cols])
             for n, M in phi.comps.items()}
    try:
        ChainMap(phi.source, phi.target, comps)
    except ValueError:
        return True
    return False


def test_negative_control_phi_without_sign():
    # Y with an odd vertical degree next to a horizontal differential in Z
    Y = Bicomplex(ZZ, {(0, -1): 1})
    Z = Bicomplex(ZZ, {(1, 0): 1, (0, 0): 1}, {(1, 0): Mat.identity(1)})
    assert phi_is_chain_map(Y, Z)
    assert _unsigned_phi_breaks(Y, Z)


def test_negative_control_symmetry_without_koszul_sign():
    Y = Bicomplex(ZZ, {(1, 0): 1})
    Z = Bicomplex(ZZ, {(1, 0): 1})
    YZ, ZY = bicomplex_tensor(Y, Z), bicomplex_tensor(Z, Y)
    tau = bicomplex_symmetry(Y, Z, YZ, ZY)
    # both factors horizontally odd: the swap carries a sign
    assert tau[(2, 0)].to_dense() == [[-1]]


def test_bicomplex_symmetry_involution():
    rnd = random.Random(7)
    Y, Z = random_bicomplex(rnd), random_bicomplex(rnd)
    YZ, ZY = bicomplex_tensor(Y, Z), bicomplex_tensor(Z, Y)
    t1 = bicomplex_symmetry(Y, Z, YZ, ZY)
    t2 = bicomplex_symmetry(Z, Y, ZY, YZ)
    comp = t2.compose(t1)
    assert all(comp[c] == Mat.identity(YZ.rank(*c)) for c in YZ.ranks)


def test_koszul_symmetry_is_chain_map():
    rnd = random.Random(3)
    C, D = random_complex(rnd, [0, -1, -2], 2), random_complex(rnd, [1, 0, -1], 2)
    koszul_symmetry(C, D).check()


def test_moore_of_constant_is_the_complex():
    rnd = random.Random(5)
    C = random_complex(rnd, [0, -1, -2], 3)
    T = constant_moore_tot(C, 3)
    for q in (-1, 0):
        assert T.homology(q) == C.homology(q)


def test_shuffle_map_example_on_circle():
    X = sphere(1)
    K = ChainComplex(ZZ, {0: 1})
    A = SimplicialChainComplex.from_simplicial_set(X, K, 3)
    sh = shuffle_map(A, A)
    assert sh.commutes() == (True, True)
    T = tot_map(sh)
    T.check()
    # Eilenberg-Zilber: circle x circle has H_1 = Z^2 in the product
    assert str(T.target.homology(1)) == "Z^2"


def test_hat_tensor_is_simplicial():
    rnd = random.Random(9)
    A, B = random_simplicial(rnd, 3), random_simplicial(rnd, 3)
    assert hat_tensor(A, B).is_valid()
    assert moore_complex(A).invariants() == (True, True, True)

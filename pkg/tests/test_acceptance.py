"""
Acceptance gate: one test per criterion.  Each records a PASS/FAIL line
that is printed in the terminal summary; run with

    pytest tests/test_acceptance.py -v
"""

import random
import time
from itertools import product

import pytest

from conftest import CRITERIA
from intforms.apl_bridge import check_rho, check_rho_products, level_elements
from intforms.bar_ai import (AISystem, BISystem, CISystem, verify_extra_degeneracies)
from intforms.chain_core import F2, QQ, ZZ, ChainComplex, Mat, is_quasi_iso
from intforms.free_cidga import free_graded_commutative_complex
from intforms.hocolim_einfty import (ConstantDiagram, EvaluationDiagram, TruncationWindow,
                                     const_diagram_check, product_compare, stabilization_scan,
                                     steenrod_square)
from intforms.icat import (BarrattEcclesChain, Permutation, all_permutations,
                           augmentation_map, be_complex, be_operad_compose, block_permutation,
                           cup_i_element, enumerate_injections)
from intforms.sset_eval import (CupStructure, FibrancyError, adjunction_count_f2,
                                aw_cup_oracle, build_space, cochain_theory_checks,
                                comparison_zigzag, evaluate_functor, induced_map_of_injection,
                                latching_surjectivity, match_rings, normalized_cochains)
from test_bicomplex import _corner, random_bicomplex, random_simplicial

SPACES = ["delta2", "bdelta3", "S1", "S2", "rp2", "torus"]
RINGS = [ZZ, F2]


class Gate:
    def __init__(self, n, title):
        self.n, self.title, self.checks = n, title, []

    def add(self, name, ok):
        self.checks.append((name, bool(ok)))

    def finish(self):
        bad = [name for name, ok in self.checks if not ok]
        detail = ("%d/%d failed: " % (len(bad), len(self.checks)) + ", ".join(bad[:6]) +
                  (", ..." if len(bad) > 6 else "")) if bad else "%d checks" % len(self.checks)
        CRITERIA[self.n] = (not bad, self.title, detail)
        assert not bad, detail


def test_criterion_01_homology():
    g = Gate(1, "homology of the evaluation equals ordinary cochains")
    for name, ring, m in product(SPACES, RINGS, (1, 2)):
        X = build_space(name)
        t = time.time()
        E = evaluate_functor(AISystem(ring), X, m).complex
        C = normalized_cochains(X, ring)
        same = all(E.homology(q) == C.homology(q) for q in range(-X.dim, 1))
        g.add("%s/%s/m=%d" % (name, ring.name, m), same and time.time() - t < 60)
    rp2 = normalized_cochains(build_space("rp2"), ZZ)
    g.add("rp2 over Z has H_-2 = Z/2", str(rp2.homology(-2)) == "Z/2")
    g.finish()


def test_criterion_02_comparison():
    g = Gate(2, "A -> B <- C are quasi-isomorphisms")
    for name, ring, m in product(SPACES, RINGS, (1, 2)):
        z = comparison_zigzag(build_space(name), m, ring)
        g.add("%s/%s/m=%d A" % (name, ring.name, m), z["A_quasi_iso"])
        g.add("%s/%s/m=%d C" % (name, ring.name, m), z["C_quasi_iso"])
    g.finish()


def test_criterion_03_contractions():
    g = Gate(3, "extra degeneracy identities")
    for label, system, p_max, ms in (("A", AISystem(ZZ), 4, [1, 2, 3]),
                                     ("C", CISystem(ZZ), 4, [1]),
                                     ("B", BISystem(ZZ), 3, [1, 2])):
        rep = verify_extra_degeneracies(system, p_max, ms)
        for name, ok in rep.items:
            g.add("%s: %s" % (label, name), ok)
    g.finish()


def test_criterion_04_signs():
    g = Gate(4, "sign infrastructure on 100 random instances")
    from intforms.bicomplex import (phi_associativity_holds, phi_is_chain_map,
                                    phi_symmetry_holds, shuffle_symmetry_holds)
    for seed in range(100):
        rnd = random.Random(1000 + seed)
        Y, Z, W = random_bicomplex(rnd), random_bicomplex(rnd), random_bicomplex(rnd)
        A, B = random_simplicial(rnd), random_simplicial(rnd)
        g.add("%d shuffle symmetry" % seed, shuffle_symmetry_holds(A, B))
        g.add("%d phi chain map" % seed, phi_is_chain_map(Y, Z))
        g.add("%d phi symmetry" % seed, phi_symmetry_holds(Y, Z))
        g.add("%d phi associativity" % seed,
              phi_associativity_holds(_corner(Y), _corner(Z), _corner(W)))
    g.finish()


def _be_basis_sample(rnd, arity, degree, k):
    perms = all_permutations(arity)
    return [BarrattEcclesChain.simplex([rnd.choice(perms) for _ in range(degree + 1)])
            for _ in range(k)]


def test_criterion_05_operad():
    g = Gate(5, "Barratt-Eccles operad")
    rnd = random.Random(5)
    one = BarrattEcclesChain.identity(1)
    t = Permutation((2, 1))
    # arity <= 3, degree <= 3 in total for every composite
    for de, df, dg in product(range(4), repeat=3):
        if de + df + dg > 3:
            continue
        for e, f, h in zip(_be_basis_sample(rnd, 2, de, 6), _be_basis_sample(rnd, 2, df, 6),
                           _be_basis_sample(rnd, 1, dg, 6)):
            name = "degrees (%d,%d,%d)" % (de, df, dg)
            c = be_operad_compose(e, [f, h])
            g.add(name + " unit", be_operad_compose(e, [one, one]) == e and
                  be_operad_compose(one, [f]) == f)
            lhs = c.boundary()
            rhs = BarrattEcclesChain(3, c.degree - 1)
            if de:
                rhs = rhs + be_operad_compose(e.boundary(), [f, h])
            if df:
                rhs = rhs + be_operad_compose(e, [f.boundary(), h]).scale((-1) ** de)
            if dg:
                rhs = rhs + be_operad_compose(e, [f, h.boundary()]).scale((-1) ** (de + df))
            g.add(name + " differential", lhs == rhs if c.degree else True)
            swapped = be_operad_compose(e, [h, f]).act_right(block_permutation(t, [f.arity, h.arity]))
            g.add(name + " equivariance",
                  be_operad_compose(e.act_right(t), [f, h]) == swapped.scale((-1) ** (df * dg)))
            a = be_operad_compose(be_operad_compose(e, [h, h]), [f, one])
            b = be_operad_compose(e, [be_operad_compose(h, [f]), h])
            g.add(name + " associativity", a == b.scale((-1) ** (df * dg)))
    for n in (1, 2):
        E = be_complex(n, 5, ZZ)
        g.add("E_%d homology = Z in degree 0" % n,
              str(E.homology(0)) == "Z" and all(E.homology(q).is_zero for q in range(1, 5)))
        aug = augmentation_map(n, 4, ZZ)
        g.add("E_%d augmentation kills boundaries" % n, (aug[0] @ E.d(1)).is_zero())
    # E_3: the contraction h(s_0..s_p) = (id, s_0..s_p) gives dh + hd = id - unit*aug
    unit = Permutation.identity(3)
    ok = True
    for deg in range(0, 5):
        for key in product(all_permutations(3), repeat=deg + 1):
            x = BarrattEcclesChain.simplex(key)
            lhs = BarrattEcclesChain.simplex((unit,) + key).boundary()
            if deg:
                lhs = lhs + BarrattEcclesChain(3, deg, {(unit,) + k: v
                                                        for k, v in x.boundary().terms.items()})
                ok = ok and lhs == x
            else:
                ok = ok and lhs == x - BarrattEcclesChain.simplex([unit])
    g.add("E_3 contractible onto its augmentation through degree 4", ok)
    for i in range(1, 5):
        e, prev = cup_i_element(i, F2), cup_i_element(i - 1, F2)
        g.add("d(e_%d) = (1+T) e_%d" % (i, i - 1),
              (e.boundary() - prev - prev.act(t)).reduce(F2).is_zero())
    g.finish()


def test_criterion_06_fibrancy():
    g = Gate(6, "injections act by quasi-isomorphisms; latching maps surjective")
    sysm = AISystem(ZZ)
    for name in SPACES:
        X = build_space(name)
        ev = {n: evaluate_functor(sysm, X, n) for n in (1, 2, 3)}
        for m in (1, 2, 3):
            for n in range(m, 4):
                for alpha in enumerate_injections(m, n):
                    f = induced_map_of_injection(alpha, ev[m], ev[n])
                    g.add("%s %r" % (name, alpha), is_quasi_iso(f, (-X.dim, 0))[0])
    for p in (1, 2, 3):
        for m in (1, 2):
            g.add("latching p=%d m=%d" % (p, m), all(latching_surjectivity(p, m, ZZ, sysm).values()))
    g.finish()


def test_criterion_07_cup_rings():
    g = Gate(7, "cup rings agree with the Alexander-Whitney ring")
    T = build_space("torus")
    oracle = aw_cup_oracle(T, ZZ)
    groups = {q: str(h) for q, h in oracle.groups.items()}
    g.add("torus groups", groups == {0: "Z", -1: "Z^2", -2: "Z"})
    ab, ba = oracle.table[((-1, 0), (-1, 1))], oracle.table[((-1, 1), (-1, 0))]
    g.add("torus a*b generates", abs(ab[0]) == 1 and ba[0] == -ab[0])
    g.add("torus a*a = b*b = 0", not any(oracle.table[((-1, 0), (-1, 0))]) and
          not any(oracle.table[((-1, 1), (-1, 1))]))
    R = build_space("rp2")
    oracle2 = aw_cup_oracle(R, F2)
    g.add("rp2 a^2 != 0 in the oracle", any(oracle2.table[((-1, 0), (-1, 0))]))
    # products are read at m0 = 2, where iota_* is a quasi-iso for spaces of dimension <= 2;
    # at m0 = 1 it is not (see criteria 1 and 6)
    for X, ring, orc in ((T, ZZ, oracle), (R, F2, oracle2)):
        try:
            table = CupStructure(X, ring, 2).table()
            g.add("%s matches at m0=2" % X.name, match_rings(table, orc, ring) is not None)
        except FibrancyError:
            g.add("%s matches at m0=2" % X.name, False)
    g.finish()


def test_criterion_08_steenrod():
    g = Gate(8, "Sq^1(a) = a^2 != 0 on RP^2 over F_2")
    X = build_space("rp2min")
    r = steenrod_square(X, 1, -1, F2, M=3)
    (entry,) = r.entries
    oracle = aw_cup_oracle(X, F2)
    g.add("window verified", r.verified)
    g.add("cycle", entry["cycle"])
    g.add("nonzero", any(entry["class"] or ()))
    g.add("equals the external square", entry["class"] == entry["product_class"])
    g.add("oracle square nonzero", any(oracle.table[((-1, 0), (-1, 0))]))
    g.finish()


def test_criterion_09_hocolim():
    g = Gate(9, "homotopy colimits")
    C = ChainComplex(ZZ, {0: 1, -1: 2, -2: 1}, {0: Mat.from_dense([[1], [0]], 1)})
    for M in range(0, 4):
        res = const_diagram_check(C, M)
        g.add("constant [0,%d]" % M, res["left_inverse"] and res["quasi_iso"])
    for name in ("delta0", "S1", "S2"):
        X = build_space(name)
        res = stabilization_scan(EvaluationDiagram(X, ZZ), (2, 3), (-2, 0))
        for M in (2, 3):
            g.add("%s P(1) -> hocolim M=%d" % (name, M), res["scan"][M]["matches_P1"])
    fams = [["S1"], ["S1", "delta0"], ["S1", "delta0", "bdelta1"]]
    for fam in fams:
        res = product_compare([EvaluationDiagram(build_space(s), ZZ) for s in fam],
                              TruncationWindow(1, 2, 2), (-1, 0))
        g.add("product comparison %s" % "+".join(fam),
              res["isomorphism"] and res["quasi_iso"])
    g.finish()


def test_criterion_10_cochain_axioms():
    g = Gate(10, "cochain theory axioms")
    for m in (1, 2):
        rep = cochain_theory_checks(ring=ZZ, m=m,
                                    family=[build_space("S1"), build_space("point"),
                                            build_space("delta1")])
        for name, ok in rep.items:
            g.add("m=%d %s" % (m, name), ok)
    g.finish()


def test_criterion_11_adjunction():
    g = Gate(11, "adjunction counts over F_2")
    for name, m, q, kind in product(("delta0", "bdelta1"), (1, 2), (0, -1), ("sphere", "disk")):
        a, b = adjunction_count_f2(build_space(name), m, q, kind)
        g.add("%s m=%d q=%d %s (%d, %d)" % (name, m, q, kind, a, b), a == b)
    g.finish()


def test_criterion_12_rational_bridge():
    g = Gate(12, "comparison with polynomial forms over Q")
    for name, ok in check_rho(3, 2, QQ).items():
        g.add(name, ok)
    pairs = [(x, y) for p in range(0, 4) for q1 in (0, -1) for q2 in (0, -1)
             for x in level_elements(p, 1, q1) for y in level_elements(p, 1, q2)]
    g.add("multiplicative", check_rho_products(pairs))
    for p, s in product((1, 2, 3), (1, 2, 3, 4)):
        Csym = free_graded_commutative_complex(p, s, QQ)
        g.add("symmetric power p=%d s=%d acyclic" % (p, s),
              all(Csym.homology(q).is_zero for q in Csym.degrees))
    g.finish()

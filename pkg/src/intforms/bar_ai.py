"""
Simplicial level systems: the bar construction A_p(m), cochains on the
standard simplices C_p, and their levelwise tensor B_p(m) = A_p(m) (x) C_p.

Each system answers three questions for a simplicial degree p and an
object m of I: the chain complex, the matrices of faces/degeneracies
(one per homological degree), and the I-pushforwards.

Letter r_j(p) behaves as the coordinate t_0 + ... + t_{j-1} on the
p-simplex, so r_0(p) = 0 and r_{p+1}(p) = 1.
"""

from functools import lru_cache
from itertools import combinations_with_replacement

from .chain_core import ZZ, ChainComplex, ChainMap, Mat, tensor, tensor_layout, tensor_operator
from .free_cidga import level, level_complex, monomial_map_matrix, pushforward_matrix


def face_index(i, j):
    """Index of d_i(r_j): target r_k(p-1), with k = 0 meaning 0 and k = p meaning 1."""
    return j if j <= i else j - 1


def degeneracy_index(i, j):
    return j if j <= i else j + 1


def apply_letter_map(mono, fn, p_new, unit_image=None):
    """
    Image of a monomial under the algebra map sending r_j to r_fn(j)(p_new).
    Index 0 kills the monomial, index p_new + 1 is the unit (drops an
    even slot, kills an odd one).  Returns [(coeff, monomial)].
    """
    out = []
    for v, j, o in mono:
        k = fn(j)
        if k == 0:
            return []
        if k == p_new + 1:
            if o:
                return []
            continue
        out.append((v, k, o))
    return [(1, tuple(out))]


def ai_letter_fn(kind, i, p):
    if kind == "face":
        if not 0 <= i <= p or p == 0:
            raise IndexError("face d_%d undefined at p=%d" % (i, p))
        return (lambda j: face_index(i, j)), p - 1
    if kind == "degeneracy":
        if not 0 <= i <= p:
            raise IndexError("degeneracy s_%d undefined at p=%d" % (i, p))
        return (lambda j: degeneracy_index(i, j)), p + 1
    raise ValueError("unknown operator kind %r" % kind)


def ai_operator(kind, i, p, m, ring=ZZ):
    """Matrices {q: Mat} of the face or degeneracy on level (p, m)."""
    fn, p_new = ai_letter_fn(kind, i, p)
    src, tgt = level(p, m), level(p_new, m)
    out = {}
    for q in src.degrees():
        out[q] = monomial_map_matrix(
            src, tgt, q, q, lambda mono: apply_letter_map(mono, fn, p_new)
        ).reduce(ring)
    return out


def ai_extra_degeneracy(p, m, iota=1, ring=ZZ):
    """
    s_{p+1}: level p -> level p+1, letterwise r_j(p) -> r_j(p+1), with
    the unit sent to the one-slot monomial (iota | r_{p+1}(p+1)).
    """
    if m < 1:
        raise ValueError("extra degeneracy needs m >= 1")
    if not 1 <= iota <= m:
        raise ValueError("iota must lie in 1..m")
    src, tgt = level(p, m), level(p + 1, m)

    def fn(mono):
        if not mono:
            return [(1, ((iota, p + 1, 0),))]
        return [(1, tuple(mono))]

    return {q: monomial_map_matrix(src, tgt, q, q, fn).reduce(ring)
            for q in src.degrees()}


# ---------------------------------------------------------------------------
# cochains on standard simplices


@lru_cache(maxsize=None)
def monotone_maps(n, p):
    """Nondecreasing (n+1)-tuples in 0..p, i.e. the maps [n] -> [p]."""
    return tuple(combinations_with_replacement(range(p + 1), n + 1))


class CochainLevel:
    """C(Delta^p; k) in degrees 0..-cutoff; basis of degree -n = maps [n]->[p]."""

    def __init__(self, p, cutoff):
        self.p = p
        self.cutoff = cutoff
        self.bases = {-n: monotone_maps(n, p) for n in range(cutoff + 1)}
        self.index = {q: {a: i for i, a in enumerate(b)}
                      for q, b in self.bases.items()}

    def degrees(self):
        return sorted(self.bases)

    def rank(self, q):
        return len(self.bases.get(q, ()))

    def complex(self, ring=ZZ):
        diffs = {}
        for n in range(self.cutoff):
            rows = self.index[-n - 1]
            cols = [{} for _ in self.bases[-n]]
            src = self.index[-n]
            for alpha, r in rows.items():
                for k in range(n + 2):
                    c = src[alpha[:k] + alpha[k + 1:]]
                    cols[c][r] = cols[c].get(r, 0) + (-1 if k % 2 else 1)
            diffs[-n] = Mat(len(rows), len(cols),
                            [{a: b for a, b in col.items() if b} for col in cols])
        return ChainComplex(ring, {q: len(b) for q, b in self.bases.items()},
                            diffs, labels=dict(self.bases))

    def pullback(self, other, fn):
        """Matrices of f -> f o fn, where fn maps other's simplices to ours."""
        out = {}
        for q, tb in other.bases.items():
            src = self.index[q]
            cols = [{} for _ in self.bases[q]]
            for r, beta in enumerate(tb):
                img = fn(beta)
                if img is None:
                    continue
                cols[src[img]][r] = 1
            out[q] = Mat(len(tb), len(cols), cols)
        return out


@lru_cache(maxsize=None)
def cochain_level(p, cutoff):
    return CochainLevel(p, cutoff)


def cochain_operator(kind, i, p, cutoff, ring=ZZ):
    src = cochain_level(p, cutoff)
    if kind == "face":
        if not 0 <= i <= p or p == 0:
            raise IndexError("face d_%d undefined at p=%d" % (i, p))
        tgt = cochain_level(p - 1, cutoff)
        fn = lambda beta: tuple(v + 1 if v >= i else v for v in beta)
    elif kind == "degeneracy":
        if not 0 <= i <= p:
            raise IndexError("degeneracy s_%d undefined at p=%d" % (i, p))
        tgt = cochain_level(p + 1, cutoff)
        fn = lambda beta: tuple(v - 1 if v > i else v for v in beta)
    else:
        raise ValueError("unknown operator kind %r" % kind)
    return {q: M.reduce(ring) for q, M in src.pullback(tgt, fn).items()}


def cochain_extra_degeneracy(p, cutoff, ring=ZZ):
    """s_{p+1}(f)(beta) = f(beta) if p+1 is not hit by beta, else 0."""
    src = cochain_level(p, cutoff)
    tgt = cochain_level(p + 1, cutoff)
    fn = lambda beta: None if beta[-1] == p + 1 else beta
    return {q: M.reduce(ring) for q, M in src.pullback(tgt, fn).items()}


def cochain_level_and_operators(p, cutoff, ring=ZZ):
    C = cochain_level(p, cutoff).complex(ring)
    ops = {}
    if p > 0:
        for i in range(p + 1):
            ops[("face", i)] = cochain_operator("face", i, p, cutoff, ring)
    for i in range(p + 1):
        ops[("degeneracy", i)] = cochain_operator("degeneracy", i, p, cutoff, ring)
    return C, ops


# ---------------------------------------------------------------------------
# level systems


class LevelSystem:
    """Interface: complexes and operators of a simplicial I-chain complex."""

    name = "abstract"

    def __init__(self, ring=ZZ):
        self.ring = ring
        self._cache = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def complex(self, p, m):
        raise NotImplementedError

    def operator(self, kind, i, p, m):
        raise NotImplementedError

    def extra_degeneracy(self, p, m):
        raise NotImplementedError

    def pushforward(self, alpha, p):
        raise NotImplementedError

    def face(self, i, p, m):
        return self.operator("face", i, p, m)

    def degeneracy(self, i, p, m):
        return self.operator("degeneracy", i, p, m)


class AISystem(LevelSystem):
    name = "AI"

    def __init__(self, ring=ZZ, iota=1):
        super().__init__(ring)
        self.iota = iota

    def complex(self, p, m):
        return self._memo(("C", p, m), lambda: level_complex(p, m, self.ring))

    def operator(self, kind, i, p, m):
        return self._memo((kind, i, p, m),
                          lambda: ai_operator(kind, i, p, m, self.ring))

    def extra_degeneracy(self, p, m):
        iota = self.iota if self.iota != "m" else m
        return self._memo(("extra", p, m, iota),
                          lambda: ai_extra_degeneracy(p, m, iota, self.ring))

    def pushforward(self, alpha, p):
        return self._memo(("push", alpha, p), lambda: {
            q: pushforward_matrix(alpha, p, q).reduce(self.ring)
            for q in level(p, alpha.source).degrees()})


class CISystem(LevelSystem):
    """The cochain levels, constant in m with identity pushforwards."""

    name = "CI"

    def __init__(self, ring=ZZ, cutoff=4):
        super().__init__(ring)
        self.cutoff = cutoff

    def complex(self, p, m=None):
        return self._memo(("C", p),
                          lambda: cochain_level(p, self.cutoff).complex(self.ring))

    def operator(self, kind, i, p, m=None):
        return self._memo((kind, i, p),
                          lambda: cochain_operator(kind, i, p, self.cutoff, self.ring))

    def extra_degeneracy(self, p, m=None):
        return self._memo(("extra", p),
                          lambda: cochain_extra_degeneracy(p, self.cutoff, self.ring))

    def pushforward(self, alpha, p):
        C = self.complex(p)
        return {q: Mat.identity(C.rank(q)) for q in C.degrees}


class BISystem(LevelSystem):
    name = "BI"

    def __init__(self, ring=ZZ, cutoff=4, iota=1):
        super().__init__(ring)
        self.A = AISystem(ring, iota)
        self.C = CISystem(ring, cutoff)
        self.cutoff = cutoff

    def complex(self, p, m):
        return self._memo(("C", p, m), lambda: tensor(self.A.complex(p, m),
                                                      self.C.complex(p)))

    def _tensor_op(self, p, m, p2, opA, opC):
        return tensor_operator(self.A.complex(p, m), self.C.complex(p),
                               self.A.complex(p2, m), self.C.complex(p2), opA, opC)

    def operator(self, kind, i, p, m):
        p2 = p - 1 if kind == "face" else p + 1
        return self._memo((kind, i, p, m), lambda: self._tensor_op(
            p, m, p2, self.A.operator(kind, i, p, m), self.C.operator(kind, i, p)))

    def extra_degeneracy(self, p, m):
        return self._memo(("extra", p, m), lambda: self._tensor_op(
            p, m, p + 1, self.A.extra_degeneracy(p, m), self.C.extra_degeneracy(p)))

    def pushforward(self, alpha, p):
        def build():
            A1, A2 = self.A.complex(p, alpha.source), self.A.complex(p, alpha.target)
            C = self.C.complex(p)
            ident = {q: Mat.identity(C.rank(q)) for q in C.degrees}
            return tensor_operator(A1, C, A2, C, self.A.pushforward(alpha, p), ident)
        return self._memo(("push", alpha, p), build)

    def from_ai(self, p, m):
        """a -> a (x) 1, with 1 the sum of all vertices."""
        A, C = self.A.complex(p, m), self.C.complex(p)
        one = {q: Mat.identity(A.rank(q)) for q in A.degrees}
        unit_col = Mat(C.rank(0), 1, [{i: 1 for i in range(C.rank(0))}])
        return self._into(A, one, lambda b: unit_col if b == 0 else None, p, m, "A")

    def from_ci(self, p, m):
        """f -> 1 (x) f."""
        A, C = self.A.complex(p, m), self.C.complex(p)
        unit_col = Mat(A.rank(0), 1, [{0: 1}])
        ident = {q: Mat.identity(C.rank(q)) for q in C.degrees}
        return self._into(C, ident, lambda a: unit_col if a == 0 else None, p, m, "C")

    def _into(self, S, ident, other, p, m, which):
        A, C = self.A.complex(p, m), self.C.complex(p)
        lay = tensor_layout(A, C)
        B = self.complex(p, m)
        comps = {}
        for q in S.degrees:
            key = (q, 0) if which == "A" else (0, q)
            if key not in lay:
                comps[q] = Mat.zeros(B.rank(q), S.rank(q))
                continue
            if which == "A":
                K = ident[q].kron(other(0))
            else:
                K = other(0).kron(ident[q])
            comps[q] = K.embed(B.rank(q), S.rank(q), lay[key], 0)
        return ChainMap(S, B, comps)


def b_level_and_comparisons(p, m, ring=ZZ, cutoff=4):
    sysB = BISystem(ring, cutoff)
    return sysB.complex(p, m), sysB.from_ai(p, m), sysB.from_ci(p, m)


def ai_level_system(ring=ZZ, iota=1):
    return AISystem(ring, iota)


def ci_level_system(ring=ZZ, cutoff=4):
    return CISystem(ring, cutoff)


def bi_level_system(ring=ZZ, cutoff=4, iota=1):
    return BISystem(ring, cutoff, iota)


# ---------------------------------------------------------------------------
# verification


def _eq(A, B, ring):
    return (A - B).reduce(ring).is_zero()


def _compose(F, G):
    """F o G degreewise, over the degrees of G."""
    out = {}
    for q, M in G.items():
        if q in F:
            out[q] = F[q] @ M
        else:
            out[q] = Mat.zeros(0, M.ncols) if M.nrows == 0 else None
    return out


def _ops_equal(F, G, ring):
    for q in set(F) | set(G):
        a, b = F.get(q), G.get(q)
        if a is None or b is None:
            rest = a if b is None else b
            if rest is not None and not rest.reduce(ring).is_zero():
                return False
            continue
        if a.shape != b.shape:
            # a map through a zero module: both sides must vanish
            if not (a.reduce(ring).is_zero() and b.reduce(ring).is_zero()):
                return False
        elif not _eq(a, b, ring):
            return False
    return True


def _identity_ops(C):
    return {q: Mat.identity(C.rank(q)) for q in C.degrees}


def _chain_map_ok(op, S, T, ring):
    for q, M in op.items():
        lhs = T.d(q) @ M
        nxt = op.get(q - 1)
        rhs = nxt @ S.d(q) if nxt is not None else Mat.zeros(T.rank(q - 1), S.rank(q))
        if lhs.shape != rhs.shape or not _eq(lhs, rhs, ring):
            return False
    return True


class Report:
    """Ordered list of (identity name, passed)."""

    def __init__(self, title=""):
        self.title = title
        self.items = []

    def add(self, name, ok):
        self.items.append((name, bool(ok)))

    @property
    def passed(self):
        return all(ok for _, ok in self.items)

    def failures(self):
        return [n for n, ok in self.items if not ok]

    def __len__(self):
        return len(self.items)

    def to_dict(self):
        return {"title": self.title, "passed": self.passed,
                "checks": [{"name": n, "pass": ok} for n, ok in self.items]}


def verify_simplicial_identities(system, p_max, m_values, pushforward_sizes=None):
    """
    All d_i d_j, d_i s_j, s_i s_j identities, chain-map conditions and
    naturality along injections m -> n for m, n in pushforward_sizes.
    """
    from .icat import enumerate_injections
    ring = system.ring
    rep = Report("simplicial identities (%s)" % system.name)
    for m in m_values:
        for p in range(p_max + 1):
            C = system.complex(p, m)
            for i in range(p + 1):
                S = system.degeneracy(i, p, m)
                rep.add("s_%d chain map p=%d m=%d" % (i, p, m),
                        _chain_map_ok(S, C, system.complex(p + 1, m), ring))
                if p > 0:
                    D = system.face(i, p, m)
                    rep.add("d_%d chain map p=%d m=%d" % (i, p, m),
                            _chain_map_ok(D, C, system.complex(p - 1, m), ring))
            if p >= 2:
                for j in range(p + 1):
                    for i in range(j):
                        lhs = _compose(system.face(i, p - 1, m), system.face(j, p, m))
                        rhs = _compose(system.face(j - 1, p - 1, m), system.face(i, p, m))
                        rep.add("d_%d d_%d = d_%d d_%d p=%d m=%d" % (i, j, j - 1, i, p, m),
                                _ops_equal(lhs, rhs, ring))
            for j in range(p + 1):
                for i in range(p + 2):
                    lhs = _compose(system.face(i, p + 1, m), system.degeneracy(j, p, m))
                    if i < j:
                        rhs = _compose(system.degeneracy(j - 1, p - 1, m),
                                       system.face(i, p, m)) if p > 0 else None
                    elif i in (j, j + 1):
                        rhs = _identity_ops(C)
                    else:
                        rhs = _compose(system.degeneracy(j, p - 1, m),
                                       system.face(i - 1, p, m))
                    if rhs is None:
                        continue
                    rep.add("d_%d s_%d p=%d m=%d" % (i, j, p, m), _ops_equal(lhs, rhs, ring))
            for j in range(p + 1):
                for i in range(j + 1):
                    lhs = _compose(system.degeneracy(i, p + 1, m), system.degeneracy(j, p, m))
                    rhs = _compose(system.degeneracy(j + 1, p + 1, m), system.degeneracy(i, p, m))
                    rep.add("s_%d s_%d = s_%d s_%d p=%d m=%d" % (i, j, j + 1, i, p, m),
                            _ops_equal(lhs, rhs, ring))
    sizes = pushforward_sizes if pushforward_sizes is not None else m_values
    if system.name != "CI":
        for a in sizes:
            for b in sizes:
                for alpha in enumerate_injections(a, b):
                    for p in range(p_max + 1):
                        P = system.pushforward(alpha, p)
                        rep.add("pushforward %r chain map p=%d" % (alpha.values, p),
                                _chain_map_ok(P, system.complex(p, a),
                                              system.complex(p, b), ring))
                        ops = [("degeneracy", i) for i in range(p + 1)]
                        if p > 0:
                            ops += [("face", i) for i in range(p + 1)]
                        for kind, i in ops:
                            p2 = p - 1 if kind == "face" else p + 1
                            lhs = _compose(system.operator(kind, i, p, b), P)
                            rhs = _compose(system.pushforward(alpha, p2),
                                           system.operator(kind, i, p, a))
                            rep.add("%s_%d natural along %r p=%d" % (
                                kind[0], i, alpha.values, p), _ops_equal(lhs, rhs, ring))
    return rep


def verify_extra_degeneracies(system, p_max, m_values):
    """
    d_{p+1} s_{p+1} = id, d_i s_{p+1} = s_p d_i (0 <= i <= p, p >= 1),
    d_0 s_1 = 0, each as an exact matrix equation.
    """
    ring = system.ring
    rep = Report("extra degeneracies (%s)" % system.name)
    for m in m_values:
        for p in range(p_max + 1):
            E = system.extra_degeneracy(p, m)
            C = system.complex(p, m)
            top = _compose(system.face(p + 1, p + 1, m), E)
            rep.add("d_%d s_%d = id p=%d m=%d" % (p + 1, p + 1, p, m),
                    _ops_equal(top, _identity_ops(C), ring))
            if p == 0:
                z = _compose(system.face(0, 1, m), E)
                rep.add("d_0 s_1 = 0 m=%d" % m,
                        all(M.reduce(ring).is_zero() for M in z.values() if M is not None))
                continue
            Ep = system.extra_degeneracy(p - 1, m)
            for i in range(p + 1):
                lhs = _compose(system.face(i, p + 1, m), E)
                rhs = _compose(Ep, system.face(i, p, m))
                rep.add("d_%d s_%d = s_%d d_%d p=%d m=%d" % (i, p + 1, p, i, p, m),
                        _ops_equal(lhs, rhs, ring))
    return rep


def moore_contraction_check(system, m, q, p_max):
    """
    With h = (-1)^{p+1} s_{p+1} and the Moore differential
    d = sum (-1)^i d_i on p -> A_p(m)_q, check dh + hd = id in every
    simplicial degree p <= p_max.  Returns {p: bool}.
    """
    ring = system.ring
    out = {}

    def moore(p):
        C = system.complex(p, m)
        M = Mat.zeros(system.complex(p - 1, m).rank(q), C.rank(q))
        if not M.ncols:
            return M
        for i in range(p + 1):
            F = system.face(i, p, m)[q]
            M = M + (F if i % 2 == 0 else F.scale(-1))
        return M

    def h(p):
        n, n1 = system.complex(p, m).rank(q), system.complex(p + 1, m).rank(q)
        if not n:
            return Mat.zeros(n1, 0)
        E = system.extra_degeneracy(p, m)[q]
        return E if (p + 1) % 2 == 0 else E.scale(-1)

    for p in range(p_max + 1):
        n = system.complex(p, m).rank(q)
        lhs = moore(p + 1) @ h(p)
        if p > 0:
            lhs = lhs + h(p - 1) @ moore(p)
        out[p] = _eq(lhs, Mat.identity(n), ring)
    return out


def moore_homotopy_groups(system, m, q, p_max):
    """Homology of the Moore complex p -> A_p(m)_q for p < p_max."""
    ranks = {p: system.complex(p, m).rank(q) for p in range(p_max + 1)}
    diffs = {}
    for p in range(1, p_max + 1):
        M = Mat.zeros(ranks[p - 1], ranks[p])
        for i in range(p + 1 if ranks[p] else 0):
            F = system.face(i, p, m)[q]
            M = M + (F if i % 2 == 0 else F.scale(-1))
        diffs[p] = M
    C = ChainComplex(system.ring, ranks, diffs)
    return {p: C.homology(p) for p in range(p_max)}

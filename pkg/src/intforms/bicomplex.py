"""
Bicomplexes, total complexes and simplicial chain complexes.

A bicomplex has commuting differentials d_h (p, q) -> (p-1, q) and
d_v (p, q) -> (p, q-1); the total complex restores d^2 = 0 with the sign
(-1)^p on d_v.  The Moore construction turns a simplicial chain complex
into a bicomplex with d_h the alternating sum of faces.

Operators between graded pieces are stored as ``{q: Mat}``; a missing
key means the zero map.
"""

from itertools import combinations

from .chain_core import ChainComplex, ChainMap, Mat, tensor, tensor_layout
from .icat import shuffles


class Bicomplex:

    def __init__(self, ring, ranks, dh=None, dv=None, labels=None, check=True):
        self.ring = ring
        self.ranks = {c: r for c, r in ranks.items() if r}
        self.dh, self.dv = {}, {}
        for store, src, step in ((self.dh, dh, (-1, 0)), (self.dv, dv, (0, -1))):
            for (p, q), M in (src or {}).items():
                tgt = (p + step[0], q + step[1])
                if M.shape != (self.rank(*tgt), self.rank(p, q)):
                    raise ValueError("differential at %r has shape %r" % ((p, q), M.shape))
                M = M.reduce(ring)
                if M.nrows and M.ncols and not M.is_zero():
                    store[(p, q)] = M
        self.labels = labels or {}
        if check:
            self.check()

    def rank(self, p, q):
        return self.ranks.get((p, q), 0)

    @property
    def cells(self):
        return sorted(self.ranks)

    def h(self, p, q):
        M = self.dh.get((p, q))
        return M if M is not None else Mat.zeros(self.rank(p - 1, q), self.rank(p, q))

    def v(self, p, q):
        M = self.dv.get((p, q))
        return M if M is not None else Mat.zeros(self.rank(p, q - 1), self.rank(p, q))

    def invariants(self):
        """(d_h d_h = 0, d_v d_v = 0, d_h d_v = d_v d_h) checked on every cell."""
        hh = vv = comm = True
        red = self.ring
        for p, q in self.ranks:
            if not (self.h(p - 1, q) @ self.h(p, q)).reduce(red).is_zero():
                hh = False
            if not (self.v(p, q - 1) @ self.v(p, q)).reduce(red).is_zero():
                vv = False
            D = self.h(p, q - 1) @ self.v(p, q) - self.v(p - 1, q) @ self.h(p, q)
            if not D.reduce(red).is_zero():
                comm = False
        return hh, vv, comm

    def check(self):
        names = ("d_h d_h = 0", "d_v d_v = 0", "d_h d_v = d_v d_h")
        for ok, name in zip(self.invariants(), names):
            if not ok:
                raise ValueError("bicomplex violates %s" % name)

    def __repr__(self):
        return "Bicomplex(%s, %r)" % (self.ring, self.ranks)


def unit_bicomplex(ring):
    return Bicomplex(ring, {(0, 0): 1})


class BicomplexMap:
    """Bidegree (0, 0) map commuting with both differentials."""

    def __init__(self, source, target, comps, check=True):
        self.source, self.target = source, target
        self.ring = source.ring
        self.comps = {}
        for c, M in comps.items():
            if M.shape != (target.rank(*c), source.rank(*c)):
                raise ValueError("component %r has shape %r" % (c, M.shape))
            M = M.reduce(self.ring)
            if not M.is_zero():
                self.comps[c] = M
        if check:
            self.check()

    def __getitem__(self, c):
        M = self.comps.get(c)
        return M if M is not None else Mat.zeros(self.target.rank(*c), self.source.rank(*c))

    def commutes(self):
        S, T = self.source, self.target
        h_ok = v_ok = True
        for p, q in S.ranks:
            if not (T.h(p, q) @ self[(p, q)] - self[(p - 1, q)] @ S.h(p, q)).reduce(self.ring).is_zero():
                h_ok = False
            if not (T.v(p, q) @ self[(p, q)] - self[(p, q - 1)] @ S.v(p, q)).reduce(self.ring).is_zero():
                v_ok = False
        return h_ok, v_ok

    def check(self):
        h_ok, v_ok = self.commutes()
        if not (h_ok and v_ok):
            raise ValueError("not a bicomplex map (d_h %s, d_v %s)" % (h_ok, v_ok))

    def compose(self, other):
        """self o other."""
        comps = {c: self[c] @ other[c] for c in other.source.ranks}
        return BicomplexMap(other.source, self.target, comps, check=False)


# ---------------------------------------------------------------------------
# total complex


def tot_layout(Y):
    """Offset of cell (p, q) inside Tot(Y)_{p+q}; cells ordered by p."""
    out, sizes = {}, {}
    for p, q in sorted(Y.ranks):
        n = p + q
        out[(p, q)] = sizes.get(n, 0)
        sizes[n] = sizes.get(n, 0) + Y.rank(p, q)
    return out, sizes


def tot(Y):
    lay, sizes = tot_layout(Y)
    diffs = {}
    for n, size in sizes.items():
        if n - 1 not in sizes:
            continue
        cols = [{} for _ in range(size)]
        for (p, q), off in lay.items():
            if p + q != n:
                continue
            sign = -1 if p % 2 else 1
            for M, tgt, s in ((Y.h(p, q), (p - 1, q), 1), (Y.v(p, q), (p, q - 1), sign)):
                if tgt not in lay:
                    continue
                o2 = lay[tgt]
                for c, col in enumerate(M.cols):
                    dst = cols[off + c]
                    for r, v in col.items():
                        dst[o2 + r] = dst.get(o2 + r, 0) + s * v
        diffs[n] = Mat(sizes[n - 1], size, cols)
    labels = {}
    for (p, q), off in sorted(lay.items(), key=lambda kv: kv[1]):
        labels.setdefault(p + q, []).extend((p, q, i) for i in range(Y.rank(p, q)))
    return ChainComplex(Y.ring, sizes, diffs, labels=labels)


def tot_map(f, Ts=None, Tt=None):
    """Tot of a bicomplex map as a ChainMap."""
    Ts = Ts or tot(f.source)
    Tt = Tt or tot(f.target)
    lay_s, _ = tot_layout(f.source)
    lay_t, _ = tot_layout(f.target)
    comps = {}
    for n in Ts.degrees:
        M = Mat.zeros(Tt.rank(n), Ts.rank(n))
        for c, F in f.comps.items():
            if sum(c) == n:
                M = M + F.embed(Tt.rank(n), Ts.rank(n), lay_t[c], lay_s[c])
        comps[n] = M
    return ChainMap(Ts, Tt, comps, check=False)


# ---------------------------------------------------------------------------
# tensor products of bicomplexes


def _tensor_blocks(Y, Z, p_max=None):
    """Per target cell: ordered list of (cellY, cellZ) with offsets."""
    blocks = {}
    for a in sorted(Y.ranks):
        for b in sorted(Z.ranks):
            cell = (a[0] + b[0], a[1] + b[1])
            if p_max is not None and cell[0] > p_max:
                continue
            blocks.setdefault(cell, []).append((a, b))
    offsets, ranks = {}, {}
    for cell, bl in blocks.items():
        off = 0
        for a, b in bl:
            offsets[(a, b)] = off
            off += Y.rank(*a) * Z.rank(*b)
        ranks[cell] = off
    return offsets, ranks


class TensorBicomplex(Bicomplex):
    """
    Y (x) Z with d_h(y z) = d_h y z + (-1)^{a1} y d_h z and
    d_v(y z) = d_v y z + (-1)^{b1} y d_v z, for y in Y_{a1, b1}.
    Element y_i (x) z_j of block (a, b) sits at offset + i * rank(b) + j.
    With ``p_max`` only the columns p <= p_max are kept; d_h lowers p, so
    this is a sub-bicomplex.
    """

    def __init__(self, Y, Z, p_max=None):
        if Y.ring != Z.ring:
            raise ValueError("ring mismatch")
        self.left, self.right = Y, Z
        self.p_max = p_max
        self.block_offsets, ranks = _tensor_blocks(Y, Z, p_max)
        dh, dv = {}, {}
        for cell, r in ranks.items():
            for store, step in ((dh, (-1, 0)), (dv, (0, -1))):
                tgt = (cell[0] + step[0], cell[1] + step[1])
                if tgt not in ranks:
                    continue
                cols = [{} for _ in range(r)]
                for (a, b), off in self.block_offsets.items():
                    if (a[0] + b[0], a[1] + b[1]) != cell:
                        continue
                    self._fill(cols, a, b, off, step)
                store[cell] = Mat(ranks[tgt], r, cols)
        super().__init__(Y.ring, ranks, dh, dv)

    def _fill(self, cols, a, b, off, step):
        Y, Z = self.left, self.right
        rb = Z.rank(*b)
        horizontal = step == (-1, 0)
        dY = Y.h(*a) if horizontal else Y.v(*a)
        dZ = Z.h(*b) if horizontal else Z.v(*b)
        a2 = (a[0] + step[0], a[1] + step[1])
        b2 = (b[0] + step[0], b[1] + step[1])
        sign = -1 if (a[0] if horizontal else a[1]) % 2 else 1
        for i in range(Y.rank(*a)):
            for j in range(rb):
                col = cols[off + i * rb + j]
                if (a2, b) in self.block_offsets:
                    o2 = self.block_offsets[(a2, b)]
                    for k, v in dY.cols[i].items():
                        key = o2 + k * rb + j
                        col[key] = col.get(key, 0) + v
                if (a, b2) in self.block_offsets:
                    o2 = self.block_offsets[(a, b2)]
                    rb2 = Z.rank(*b2)
                    for k, v in dZ.cols[j].items():
                        key = o2 + i * rb2 + k
                        col[key] = col.get(key, 0) + sign * v

    def index(self, a, i, b, j):
        """Cell and position of y_i (x) z_j, y in cell a, z in cell b."""
        off = self.block_offsets[(a, b)]
        return (a[0] + b[0], a[1] + b[1]), off + i * self.right.rank(*b) + j


def bicomplex_tensor(Y, Z, p_max=None):
    return TensorBicomplex(Y, Z, p_max)


def bicomplex_symmetry(Y, Z, YZ=None, ZY=None):
    """tau: y (x) z -> (-1)^{a1 a2 + b1 b2} z (x) y."""
    YZ = YZ or bicomplex_tensor(Y, Z)
    ZY = ZY or bicomplex_tensor(Z, Y, YZ.p_max)
    comps = {c: [{} for _ in range(r)] for c, r in YZ.ranks.items()}
    for (a, b) in YZ.block_offsets:
        sign = -1 if (a[0] * b[0] + a[1] * b[1]) % 2 else 1
        for i in range(Y.rank(*a)):
            for j in range(Z.rank(*b)):
                cell, src = YZ.index(a, i, b, j)
                _, tgt = ZY.index(b, j, a, i)
                comps[cell][src] = {tgt: sign}
    mats = {c: Mat(ZY.rank(*c), len(cols), cols) for c, cols in comps.items()}
    return BicomplexMap(YZ, ZY, mats)


def tot_monoidal_phi(Y, Z, YZ=None):
    """
    phi: Tot(Y) (x) Tot(Z) -> Tot(Y (x) Z), y (x) z -> (-1)^{r2 s1} y (x) z
    for y in Y_{r1, r2} and z in Z_{s1, s2}.  Returns the ChainMap; its
    source is ``tensor(tot(Y), tot(Z))``.
    """
    YZ = YZ or bicomplex_tensor(Y, Z)
    TY, TZ, TYZ = tot(Y), tot(Z), tot(YZ)
    src = tensor(TY, TZ)
    layY, _ = tot_layout(Y)
    layZ, _ = tot_layout(Z)
    layYZ, _ = tot_layout(YZ)
    outer = tensor_layout(TY, TZ)
    cols = {n: [None] * src.rank(n) for n in src.degrees}
    for (a, b) in YZ.block_offsets:
        nY, nZ = sum(a), sum(b)
        sign = -1 if (a[1] * b[0]) % 2 else 1
        base = outer[(nY, nZ)]
        rz = TZ.rank(nZ)
        for i in range(Y.rank(*a)):
            for j in range(Z.rank(*b)):
                s_idx = base + (layY[a] + i) * rz + layZ[b] + j
                cell, k = YZ.index(a, i, b, j)
                cols[nY + nZ][s_idx] = {layYZ[cell] + k: sign}
    comps = {n: Mat(TYZ.rank(n), len(c), c) for n, c in cols.items()}
    return ChainMap(src, TYZ, comps, check=False)


def koszul_symmetry(C, D):
    """chi: C (x) D -> D (x) C, x (x) y -> (-1)^{|x||y|} y (x) x."""
    S, T = tensor(C, D), tensor(D, C)
    layS, layT = tensor_layout(C, D), tensor_layout(D, C)
    cols = {n: [None] * S.rank(n) for n in S.degrees}
    for (a, b), off in layS.items():
        sign = -1 if (a * b) % 2 else 1
        for i in range(C.rank(a)):
            for j in range(D.rank(b)):
                tgt = layT[(b, a)] + j * C.rank(a) + i
                cols[a + b][off + i * D.rank(b) + j] = {tgt: sign}
    return ChainMap(S, T, {n: Mat(T.rank(n), len(c), c) for n, c in cols.items()},
                    check=False)


def tensor_chain_maps(f, g):
    """f (x) g between tensor(f.source, g.source) and tensor(f.target, g.target)."""
    S, T = tensor(f.source, g.source), tensor(f.target, g.target)
    layS, layT = tensor_layout(f.source, g.source), tensor_layout(f.target, g.target)
    comps = {}
    for n in S.degrees:
        M = Mat.zeros(T.rank(n), S.rank(n))
        for (a, b), off in layS.items():
            if a + b != n or (a, b) not in layT:
                continue
            K = f[a].kron(g[b])
            M = M + K.embed(T.rank(n), S.rank(n), layT[(a, b)], off)
        comps[n] = M
    return ChainMap(S, T, comps, check=False)


# ---------------------------------------------------------------------------
# simplicial chain complexes


def _zero_op(S, T):
    return {q: Mat.zeros(T.rank(q), S.rank(q)) for q in S.degrees}


class SimplicialChainComplex:
    """
    Levels 0..p_max with faces (i, p): level p -> p-1 and degeneracies
    (i, p): level p -> p+1 for p < p_max.  Operators are ``{q: Mat}``.
    """

    def __init__(self, levels, faces, degeneracies, p_max=None):
        self.levels = dict(levels) if isinstance(levels, dict) else dict(enumerate(levels))
        self.p_max = max(self.levels) if p_max is None else p_max
        self.ring = self.levels[0].ring
        self.faces = dict(faces)
        self.degeneracies = dict(degeneracies)

    def level(self, p):
        return self.levels[p]

    def _op(self, store, i, p, tgt_p, q):
        ops = store.get((i, p), {})
        M = ops.get(q)
        if M is None:
            return Mat.zeros(self.levels[tgt_p].rank(q), self.levels[p].rank(q))
        return M

    def face(self, i, p, q):
        return self._op(self.faces, i, p, p - 1, q)

    def degeneracy(self, i, p, q):
        return self._op(self.degeneracies, i, p, p + 1, q)

    def degrees(self):
        out = set()
        for C in self.levels.values():
            out.update(C.degrees)
        return sorted(out)

    def failures(self):
        """Names of violated simplicial identities or chain-map conditions."""
        bad = []
        ring = self.ring
        P = self.p_max

        def eq(A, B):
            return (A - B).reduce(ring).is_zero()

        for q in self.degrees():
            for p in range(1, P + 1):
                S, T = self.levels[p], self.levels[p - 1]
                for i in range(p + 1):
                    D = self.face(i, p, q)
                    if not eq(T.d(q) @ D, self.face(i, p, q - 1) @ S.d(q)):
                        bad.append("d_%d at level %d not a chain map (q=%d)" % (i, p, q))
            for p in range(P):
                S, T = self.levels[p], self.levels[p + 1]
                for i in range(p + 1):
                    D = self.degeneracy(i, p, q)
                    if not eq(T.d(q) @ D, self.degeneracy(i, p, q - 1) @ S.d(q)):
                        bad.append("s_%d at level %d not a chain map (q=%d)" % (i, p, q))
            for p in range(2, P + 1):
                for i in range(p + 1):
                    for j in range(i + 1, p + 1):
                        lhs = self.face(i, p - 1, q) @ self.face(j, p, q)
                        rhs = self.face(j - 1, p - 1, q) @ self.face(i, p, q)
                        if not eq(lhs, rhs):
                            bad.append("d_%d d_%d at level %d (q=%d)" % (i, j, p, q))
            for p in range(P - 1):
                for i in range(p + 1):
                    for j in range(i, p + 1):
                        lhs = self.degeneracy(i, p + 1, q) @ self.degeneracy(j, p, q)
                        rhs = self.degeneracy(j + 1, p + 1, q) @ self.degeneracy(i, p, q)
                        if not eq(lhs, rhs):
                            bad.append("s_%d s_%d at level %d (q=%d)" % (i, j, p, q))
            for p in range(P):
                n = self.levels[p].rank(q)
                for j in range(p + 1):
                    s = self.degeneracy(j, p, q)
                    for i in range(p + 2):
                        lhs = self.face(i, p + 1, q) @ s
                        if i < j:
                            rhs = self.degeneracy(j - 1, p - 1, q) @ self.face(i, p, q)
                        elif i in (j, j + 1):
                            rhs = Mat.identity(n)
                        else:
                            rhs = self.degeneracy(j, p - 1, q) @ self.face(i - 1, p, q)
                        if not eq(lhs, rhs):
                            bad.append("d_%d s_%d at level %d (q=%d)" % (i, j, p, q))
        return bad

    def is_valid(self):
        return not self.failures()

    # constructors --------------------------------------------------------

    @classmethod
    def constant(cls, C, p_max):
        ident = {q: Mat.identity(C.rank(q)) for q in C.degrees}
        faces = {(i, p): ident for p in range(1, p_max + 1) for i in range(p + 1)}
        degs = {(i, p): ident for p in range(p_max) for i in range(p + 1)}
        return cls({p: C for p in range(p_max + 1)}, faces, degs, p_max)

    @classmethod
    def from_level_system(cls, system, m, p_max):
        """Restrict a level system (bar construction etc.) to a fixed object m."""
        levels = {p: system.complex(p, m) for p in range(p_max + 1)}
        faces = {(i, p): system.face(i, p, m)
                 for p in range(1, p_max + 1) for i in range(p + 1)}
        degs = {(i, p): system.degeneracy(i, p, m)
                for p in range(p_max) for i in range(p + 1)}
        return cls(levels, faces, degs, p_max)

    @classmethod
    def from_simplicial_set(cls, X, K, p_max):
        """
        K (x) k[X]: level p is a copy of the chain complex K for every
        simplex of X in dimension p (degenerate ones included).
        """
        sims = {p: all_simplices(X, p) for p in range(p_max + 1)}
        index = {p: {s: k for k, s in enumerate(sims[p])} for p in sims}
        levels = {}
        for p, ss in sims.items():
            levels[p] = ChainComplex(K.ring, {q: K.rank(q) * len(ss) for q in K.degrees},
                                     {q: Mat.block_diag([K.d(q)] * len(ss)) for q in K.degrees
                                      if K.rank(q - 1)})

        def op(p, p2, fn):
            out = {}
            for q in K.degrees:
                r = K.rank(q)
                cols = []
                for s in sims[p]:
                    t = index[p2][fn(s)]
                    cols.extend({t * r + c: 1} for c in range(r))
                out[q] = Mat(r * len(sims[p2]), r * len(sims[p]), cols)
            return out

        faces = {(i, p): op(p, p - 1, lambda s, i=i: X.face(s, i))
                 for p in range(1, p_max + 1) for i in range(p + 1)}
        degs = {(i, p): op(p, p + 1, lambda s, i=i: X.degeneracy(s, i))
                for p in range(p_max) for i in range(p + 1)}
        return cls(levels, faces, degs, p_max)


def all_simplices(X, n):
    """Every n-simplex of X as (nondegenerate id, monotone surjection)."""
    out = []
    for x in X.order:
        d = X.dims[x]
        if d > n:
            continue
        for jumps in combinations(range(1, n + 1), d):
            sigma, v = [], 0
            for k in range(n + 1):
                if k in jumps:
                    v += 1
                sigma.append(v)
            out.append((x, tuple(sigma)))
    return out


def moore_complex(A, p_max=None):
    """C_*(A): cells (p, q) = A_{p, q}, d_h = sum (-1)^i d_i, d_v = d^A."""
    p_max = A.p_max if p_max is None else p_max
    if p_max < 0 or p_max > A.p_max:
        raise ValueError("p_max must lie in 0..%d" % A.p_max)
    ranks, dh, dv = {}, {}, {}
    for p in range(p_max + 1):
        L = A.level(p)
        for q in L.degrees:
            ranks[(p, q)] = L.rank(q)
            if L.rank(q - 1):
                dv[(p, q)] = L.d(q)
            if p > 0 and A.level(p - 1).rank(q):
                M = A.face(0, p, q)
                for i in range(1, p + 1):
                    F = A.face(i, p, q)
                    M = M - F if i % 2 else M + F
                dh[(p, q)] = M
    return Bicomplex(A.ring, ranks, dh, dv)


class HatTensor(SimplicialChainComplex):
    """Levelwise tensor A_p (x) B_p with coordinatewise operators."""

    def __init__(self, A, B):
        if A.ring != B.ring:
            raise ValueError("ring mismatch")
        P = min(A.p_max, B.p_max)
        self.left, self.right = A, B
        levels = {p: tensor(A.level(p), B.level(p)) for p in range(P + 1)}

        def op(store_a, store_b, i, p, p2):
            A1, B1, A2, B2 = A.level(p), B.level(p), A.level(p2), B.level(p2)
            get = A.face if store_a == "face" else A.degeneracy
            getb = B.face if store_b == "face" else B.degeneracy
            opA = {q: get(i, p, q) for q in A1.degrees}
            opB = {q: getb(i, p, q) for q in B1.degrees}
            return _tensor_op(A1, B1, A2, B2, opA, opB, levels[p], levels[p2])

        faces = {(i, p): op("face", "face", i, p, p - 1)
                 for p in range(1, P + 1) for i in range(p + 1)}
        degs = {(i, p): op("deg", "deg", i, p, p + 1)
                for p in range(P) for i in range(p + 1)}
        super().__init__(levels, faces, degs, P)


def _tensor_op(A1, B1, A2, B2, opA, opB, S, T):
    lay1, lay2 = tensor_layout(A1, B1), tensor_layout(A2, B2)
    out = {}
    for n in S.degrees:
        M = Mat.zeros(T.rank(n), S.rank(n))
        for (a, b), off in lay1.items():
            if a + b != n or (a, b) not in lay2:
                continue
            K = opA[a].kron(opB[b])
            M = M + K.embed(T.rank(n), S.rank(n), lay2[(a, b)], off)
        out[n] = M
    return out


def hat_tensor(A, B):
    return HatTensor(A, B)


def hat_symmetry(A, B, AB=None, BA=None):
    """Levelwise Koszul symmetry c: a (x) b -> (-1)^{l m} b (x) a, as {p: ChainMap}."""
    AB = AB or hat_tensor(A, B)
    BA = BA or hat_tensor(B, A)
    out = {}
    for p in range(AB.p_max + 1):
        chi = koszul_symmetry(A.level(p), B.level(p))
        out[p] = ChainMap(AB.level(p), BA.level(p), chi.comps, check=False)
    return out


def simplicial_map_moore(maps, source_moore, target_moore):
    """Moore functor on a levelwise map {p: ChainMap} as a BicomplexMap."""
    comps = {}
    for (p, q) in source_moore.ranks:
        comps[(p, q)] = maps[p][q]
    return BicomplexMap(source_moore, target_moore, comps, check=False)


def _degeneracy_composite(A, p, idx, q):
    """s_{idx[-1]} o ... o s_{idx[0]} on level p, degree q."""
    M = Mat.identity(A.level(p).rank(q))
    for i in idx:
        M = A.degeneracy(i, p, q) @ M
        p += 1
    return M


def shuffle_map(A, B, AB=None, CA=None, CB=None):
    """
    sh: C_*(A) (x) C_*(B) -> C_*(A hat B) as a BicomplexMap,
    a (x) b -> sum over (r1, s1)-shuffles (mu, nu) of
    sgn(mu, nu) s_nu(a) (x) s_mu(b).
    """
    AB = AB or hat_tensor(A, B)
    P = AB.p_max
    CA = CA or moore_complex(A, P)
    CB = CB or moore_complex(B, P)
    src = bicomplex_tensor(CA, CB, P)
    tgt = moore_complex(AB, P)
    comps = {c: [{} for _ in range(r)] for c, r in src.ranks.items()}
    for (a, b), off in src.block_offsets.items():
        (r1, r2), (s1, s2) = a, b
        p = r1 + s1
        lay = tensor_layout(A.level(p), B.level(p))
        rb = B.level(s1).rank(s2)
        if not rb or (r2, s2) not in lay:
            continue
        o_tgt = lay[(r2, s2)]
        rb_tgt = B.level(p).rank(s2)
        cell = (p, r2 + s2)
        for mu, nu, sign in shuffles(r1, s1):
            SA = _degeneracy_composite(A, r1, nu, r2)
            SB = _degeneracy_composite(B, s1, mu, s2)
            for i in range(A.level(r1).rank(r2)):
                for j in range(rb):
                    col = comps[cell][off + i * rb + j]
                    for k, u in SA.cols[i].items():
                        for l, w in SB.cols[j].items():
                            key = o_tgt + k * rb_tgt + l
                            col[key] = col.get(key, 0) + sign * u * w
    mats = {c: Mat(tgt.rank(*c), len(cols), [{k: v for k, v in col.items() if v} for col in cols])
            for c, cols in comps.items()}
    return BicomplexMap(src, tgt, mats, check=False)


def constant_moore_tot(C, p_max):
    """Tot of the Moore complex of the constant simplicial object on C."""
    return tot(moore_complex(SimplicialChainComplex.constant(C, p_max), p_max))


# ---------------------------------------------------------------------------
# coherence checks for phi


def phi_symmetry_holds(Y, Z):
    """Tot(tau) o phi_{Y,Z} == phi_{Z,Y} o chi, exactly."""
    YZ, ZY = bicomplex_tensor(Y, Z), bicomplex_tensor(Z, Y)
    p1, p2 = tot_monoidal_phi(Y, Z, YZ), tot_monoidal_phi(Z, Y, ZY)
    tau = tot_map(bicomplex_symmetry(Y, Z, YZ, ZY), p1.target, p2.target)
    chi = koszul_symmetry(tot(Y), tot(Z))
    for n in p1.source.degrees:
        lhs = tau[n] @ p1[n]
        rhs = p2[n] @ chi[n]
        if not (lhs - rhs).reduce(Y.ring).is_zero():
            return False
    return True


def _phi_image(phi, YZ, Y, Z, a, i, b, j):
    """Sign and (cell, local index) of phi(y (x) z) read off the matrix."""
    TY, TZ = phi.source_factors
    layY, _ = tot_layout(Y)
    layZ, _ = tot_layout(Z)
    nY, nZ = sum(a), sum(b)
    outer = tensor_layout(TY, TZ)
    col = outer[(nY, nZ)] + (layY[a] + i) * TZ.rank(nZ) + layZ[b] + j
    (row, sign), = phi[nY + nZ].cols[col].items()
    p, q, k = phi.target.label(nY + nZ, row)
    return sign, (p, q), k


def _phi_with_factors(Y, Z, YZ):
    phi = tot_monoidal_phi(Y, Z, YZ)
    phi.source_factors = (tot(Y), tot(Z))
    return phi


def _locate(T):
    """Inverse of TensorBicomplex.index: (cell, k) -> (a, i, b, j)."""
    table = {}
    for (a, b), off in T.block_offsets.items():
        cell = (a[0] + b[0], a[1] + b[1])
        rb = T.right.rank(*b)
        for i in range(T.left.rank(*a)):
            for j in range(rb):
                table[(cell, off + i * rb + j)] = (a, i, b, j)
    return table


def phi_associativity_holds(Y, Z, W):
    """
    phi o (phi (x) id) and phi o (id (x) phi) agree on every basis
    element y (x) z (x) w once both sides are read as triples.
    """
    YZ, ZW = bicomplex_tensor(Y, Z), bicomplex_tensor(Z, W)
    YZ_W, Y_ZW = bicomplex_tensor(YZ, W), bicomplex_tensor(Y, ZW)
    phi_yz, phi_zw = _phi_with_factors(Y, Z, YZ), _phi_with_factors(Z, W, ZW)
    phi_l, phi_r = _phi_with_factors(YZ, W, YZ_W), _phi_with_factors(Y, ZW, Y_ZW)
    loc_yz, loc_zw = _locate(YZ), _locate(ZW)
    loc_l, loc_r = _locate(YZ_W), _locate(Y_ZW)
    for a in Y.ranks:
        for b in Z.ranks:
            for c in W.ranks:
                for i in range(Y.rank(*a)):
                    for j in range(Z.rank(*b)):
                        for k in range(W.rank(*c)):
                            s1, cell1, k1 = _phi_image(phi_yz, YZ, Y, Z, a, i, b, j)
                            s2, cell2, k2 = _phi_image(phi_l, YZ_W, YZ, W, cell1, k1, c, k)
                            (ab, x1, c_, x3) = loc_l[(cell2, k2)]
                            left = (loc_yz[(ab, x1)], (c_, x3))
                            t1, cell3, k3 = _phi_image(phi_zw, ZW, Z, W, b, j, c, k)
                            t2, cell4, k4 = _phi_image(phi_r, Y_ZW, Y, ZW, a, i, cell3, k3)
                            (a_, y1, bc, y2) = loc_r[(cell4, k4)]
                            right = ((a_, y1), loc_zw[(bc, y2)])
                            (la, li, lb, lj), (lc, lk) = left
                            (ra, ri), (rb, rj, rc, rk) = right
                            if (la, li, lb, lj, lc, lk) != (ra, ri, rb, rj, rc, rk):
                                return False
                            if Y.ring.normalize(s1 * s2 - t1 * t2):
                                return False
    return True


def phi_is_chain_map(Y, Z):
    phi = tot_monoidal_phi(Y, Z)
    try:
        phi.check()
    except ValueError:
        return False
    return True


def shuffle_symmetry_holds(A, B):
    """C_*(c) o sh_{A,B} == sh_{B,A} o tau, exactly."""
    AB, BA = hat_tensor(A, B), hat_tensor(B, A)
    sh1, sh2 = shuffle_map(A, B, AB), shuffle_map(B, A, BA)
    c = hat_symmetry(A, B, AB, BA)
    Cc = simplicial_map_moore(c, sh1.target, sh2.target)
    tau = bicomplex_symmetry(sh1.source.left, sh1.source.right, sh1.source, sh2.source)
    lhs, rhs = Cc.compose(sh1), sh2.compose(tau)
    return all((lhs[x] - rhs[x]).reduce(A.ring).is_zero() for x in sh1.source.ranks)

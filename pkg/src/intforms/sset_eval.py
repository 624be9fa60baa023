"""
Finite simplicial sets and the evaluation of a level system on them.

A simplex of X is a pair (x, sigma): a nondegenerate simplex x and a
monotone surjection sigma : [n] -> [dim x], written as a tuple of
values.  Degenerate simplices are never stored; faces of a presented
simplex are (target, degeneracy word) with the word [j1, ..., jk]
meaning s_{j1} o ... o s_{jk} applied to the target.

The evaluation of a level system L at (X, m) in degree q is the module
of assignments x -> phi(x) in L(dim x, m)_q compatible with faces:
d_i phi(x) = S_word phi(y) whenever d_i x = s_word(y).
"""

import json
from itertools import combinations, product
from pathlib import Path

from .chain_core import (F2, ZZ, ChainComplex, ChainMap, HomologyPresentation,
                         Mat, cone_and_hofib, is_quasi_iso, kernel, solve)


class SimplicialSetError(ValueError):
    pass


def surjection_to_word(sigma):
    """Canonical degeneracy word (decreasing indices) of a surjection."""
    return tuple(j for j in range(len(sigma) - 2, -1, -1)
                 if sigma[j] == sigma[j + 1])


def word_to_surjection(word, dim):
    sigma = tuple(range(dim + 1))
    for j in reversed(tuple(word)):
        if not 0 <= j < len(sigma):
            raise SimplicialSetError("degeneracy s_%d out of range" % j)
        sigma = sigma[:j + 1] + sigma[j:]
    return sigma


class FiniteSimplicialSet:
    """Nondegenerate simplices with faces given as (target id, word)."""

    def __init__(self, simplices, name=None, check=True):
        self.name = name
        self.dims = {}
        self.faces = {}
        self.order = []
        for s in simplices:
            sid, dim = s["id"], s["dim"]
            if sid in self.dims:
                raise SimplicialSetError("duplicate simplex id %r" % (sid,))
            faces = [(f["target"], tuple(f.get("degeneracies", ())))
                     for f in s.get("faces", ())]
            if len(faces) != (dim + 1 if dim > 0 else 0):
                raise SimplicialSetError("simplex %r needs %d faces" % (sid, dim + 1))
            self.dims[sid] = dim
            self.faces[sid] = faces
            self.order.append(sid)
        self.order.sort(key=lambda s: self.dims[s])
        self._face_cache = {}
        for sid in self.order:
            for i, (t, w) in enumerate(self.faces[sid]):
                if t not in self.dims:
                    raise SimplicialSetError("unknown face target %r" % (t,))
                if self.dims[t] + len(w) != self.dims[sid] - 1:
                    raise SimplicialSetError("face %d of %r has wrong dimension" % (i, sid))
                self._face_cache[(sid, i)] = (t, word_to_surjection(w, self.dims[t]))
        if check:
            self.check()

    # structure -----------------------------------------------------------

    @property
    def dim(self):
        return max(self.dims.values(), default=-1)

    def simplices(self, n=None):
        if n is None:
            return list(self.order)
        return [s for s in self.order if self.dims[s] == n]

    def counts(self):
        out = {}
        for s in self.order:
            out[self.dims[s]] = out.get(self.dims[s], 0) + 1
        return out

    def identity(self, sid):
        return (sid, tuple(range(self.dims[sid] + 1)))

    def face(self, simplex, i):
        """d_i of a general simplex (x, sigma)."""
        x, sigma = simplex
        n = len(sigma) - 1
        if not 0 <= i <= n or n == 0:
            raise IndexError("face d_%d of a %d-simplex" % (i, n))
        rest = sigma[:i] + sigma[i + 1:]
        v = sigma[i]
        if v in rest:
            return (x, rest)
        rest = tuple(w - 1 if w > v else w for w in rest)
        y, tau = self._face_cache[(x, v)]
        return (y, tuple(tau[w] for w in rest))

    def degeneracy(self, simplex, j):
        x, sigma = simplex
        return (x, sigma[:j + 1] + sigma[j:])

    def check(self):
        """Simplicial identities on nondegenerate and once-degenerate simplices."""
        cands = []
        for sid in self.order:
            s = self.identity(sid)
            cands.append(s)
            n = self.dims[sid]
            cands.extend(self.degeneracy(s, j) for j in range(n + 1))
        for s in cands:
            n = len(s[1]) - 1
            if n < 2:
                continue
            for j in range(n + 1):
                for i in range(j):
                    a = self.face(self.face(s, j), i)
                    b = self.face(self.face(s, i), j - 1)
                    if a != b:
                        raise SimplicialSetError(
                            "d_%d d_%d != d_%d d_%d on %r" % (i, j, j - 1, i, s))

    # serialization -------------------------------------------------------

    def to_json_obj(self):
        return {"simplices": [
            {"id": sid, "dim": self.dims[sid],
             "faces": [{"target": t, "degeneracies": list(w)}
                       for t, w in self.faces[sid]]}
            for sid in self.order]}

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, text, name=None):
        try:
            obj = json.loads(text) if isinstance(text, str) else text
            simplices = obj["simplices"]
        except (ValueError, KeyError, TypeError) as exc:
            raise SimplicialSetError("malformed simplicial set JSON: %s" % exc)
        return cls(simplices, name=name)

    def __repr__(self):
        return "FiniteSimplicialSet(%s, %s)" % (self.name or "?", self.counts())


class SimplicialMap:
    """Assignment of nondegenerate simplices to general simplices of the target."""

    def __init__(self, source, target, assignment, check=True):
        self.source = source
        self.target = target
        self.assignment = {}
        for sid in source.order:
            img = assignment[sid]
            if isinstance(img[1], (list, tuple)) and len(img[1]) and \
                    not isinstance(img[1], tuple):
                img = (img[0], tuple(img[1]))
            self.assignment[sid] = img
        if check:
            self.check()

    def __call__(self, simplex):
        x, sigma = simplex
        y, tau = self.assignment[x]
        return (y, tuple(tau[v] for v in sigma))

    def check(self):
        X, Y = self.source, self.target
        for sid in X.order:
            n = X.dims[sid]
            img = self.assignment[sid]
            if len(img[1]) != n + 1:
                raise SimplicialSetError("map changes the dimension of %r" % (sid,))
            for i in range(n + 1 if n else 0):
                if self(X.face(X.identity(sid), i)) != Y.face(img, i):
                    raise SimplicialSetError("map does not commute with d_%d on %r" % (i, sid))

    @classmethod
    def identity(cls, X):
        return cls(X, X, {s: X.identity(s) for s in X.order})

    def compose(self, other):
        """self o other."""
        return SimplicialMap(other.source, self.target,
                             {s: self(other.assignment[s]) for s in other.source.order})


# ---------------------------------------------------------------------------
# builders


def from_simplicial_complex(facets, name=None):
    """Ordered simplicial complex; vertices ordered by their sort order."""
    if not facets:
        raise SimplicialSetError("empty facet list")
    simplices = set()
    for f in facets:
        try:
            vs = tuple(sorted(f))
        except TypeError:
            raise SimplicialSetError("facet %r is not a list of vertices" % (f,))
        if not vs or len(set(vs)) != len(vs):
            raise SimplicialSetError("facet %r is not a simplex" % (f,))
        for k in range(1, len(vs) + 1):
            simplices.update(combinations(vs, k))
    out = []
    for s in sorted(simplices, key=lambda s: (len(s), s)):
        faces = [] if len(s) == 1 else \
            [{"target": _cid(s[:i] + s[i + 1:]), "degeneracies": []}
             for i in range(len(s))]
        out.append({"id": _cid(s), "dim": len(s) - 1, "faces": faces})
    return FiniteSimplicialSet(out, name=name)


def _cid(vertices):
    return "v" + "_".join(str(v) for v in vertices)


def standard_simplex(n):
    return from_simplicial_complex([list(range(n + 1))], name="delta%d" % n)


def boundary_simplex(n):
    if n == 0:
        return FiniteSimplicialSet([], name="bdelta0")
    facets = [[v for v in range(n + 1) if v != i] for i in range(n + 1)]
    return from_simplicial_complex(facets, name="bdelta%d" % n)


def point():
    return standard_simplex(0)


def empty():
    return FiniteSimplicialSet([], name="empty")


def quotient(X, Y_ids, name=None, base="*"):
    """X/Y: collapse the subcomplex Y to a single vertex."""
    Y_ids = set(Y_ids)
    for y in Y_ids:
        for t, _ in X.faces[y]:
            if t not in Y_ids:
                raise SimplicialSetError("collapsed part is not a subcomplex")
    out = [{"id": base, "dim": 0, "faces": []}]
    for sid in X.order:
        if sid in Y_ids:
            continue
        n = X.dims[sid]
        faces = []
        for t, w in X.faces[sid]:
            if t in Y_ids:
                faces.append({"target": base,
                              "degeneracies": list(range(n - 2, -1, -1))})
            else:
                faces.append({"target": t, "degeneracies": list(w)})
        out.append({"id": sid, "dim": n, "faces": faces})
    return FiniteSimplicialSet(out, name=name)


def quotient_map(X, Y_ids, Q, base="*"):
    Y_ids = set(Y_ids)
    return SimplicialMap(X, Q, {
        s: (base, (0,) * (X.dims[s] + 1)) if s in Y_ids else Q.identity(s)
        for s in X.order})


def sphere(n):
    """Delta^n / boundary: one vertex and one n-simplex."""
    if n == 0:
        return boundary_simplex(1)
    X, B = standard_simplex(n), boundary_simplex(n)
    return quotient(X, B.order, name="S%d" % n)


def disjoint_union(*spaces, name=None):
    out = []
    for k, X in enumerate(spaces):
        for sid in X.order:
            out.append({"id": "%d:%s" % (k, sid), "dim": X.dims[sid],
                        "faces": [{"target": "%d:%s" % (k, t), "degeneracies": list(w)}
                                  for t, w in X.faces[sid]]})
    return FiniteSimplicialSet(out, name=name)


def union_inclusion(spaces, k, U):
    X = spaces[k]
    return SimplicialMap(X, U, {s: U.identity("%d:%s" % (k, s)) for s in X.order})


RP2_FACETS = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
              (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)]

TORUS_FACETS = [tuple(sorted(((i + a) % 7, (i + b) % 7, (i + c) % 7)))
                for i in range(7) for a, b, c in ((0, 1, 3), (0, 2, 3))]


def rp2():
    return from_simplicial_complex(RP2_FACETS, name="RP2")


def torus():
    return from_simplicial_complex(TORUS_FACETS, name="torus")


def _one_vertex(name, edges, triangles):
    sims = [{"id": "v", "dim": 0, "faces": []}]
    sims += [{"id": e, "dim": 1, "faces": [{"target": "v"}, {"target": "v"}]} for e in edges]
    for t, faces in triangles:
        sims.append({"id": t, "dim": 2, "faces": [
            {"target": "v", "degeneracies": [0]} if f is None else {"target": f}
            for f in faces]})
    return FiniteSimplicialSet(sims, name=name)


def rp2_min():
    """RP^2 with one simplex in each dimension: faces of the triangle a, s_0 v, a."""
    return _one_vertex("RP2min", ["a"], [("t", ["a", None, "a"])])


def torus_min():
    """Torus from a square cut along its diagonal c; one vertex, three edges."""
    return _one_vertex("torusmin", ["a", "b", "c"],
                       [("u", ["b", "c", "a"]), ("l", ["a", "c", "b"])])


NAMED = {
    "point": point, "empty": empty, "rp2": rp2, "torus": torus,
    "rp2min": rp2_min, "torusmin": torus_min,
}


def build_space(spec):
    """
    Named space (point, delta<n>, bdelta<n>, S<n>, rp2, torus, rp2min,
    torusmin), a dict
    {"facets": [...]}, a dict in the simplices format, a JSON string or a
    path to a JSON file.
    """
    if isinstance(spec, FiniteSimplicialSet):
        return spec
    if isinstance(spec, dict):
        if "facets" in spec:
            return from_simplicial_complex(spec["facets"], name=spec.get("name"))
        if spec.get("op") == "union":
            return disjoint_union(*[build_space(s) for s in spec["parts"]])
        return FiniteSimplicialSet.from_json(spec)
    text = str(spec).strip()
    key = text.lower()
    if key in NAMED:
        return NAMED[key]()
    for prefix, fn in (("bdelta", boundary_simplex), ("delta", standard_simplex),
                       ("s", sphere)):
        if key.startswith(prefix) and key[len(prefix):].isdigit():
            return fn(int(key[len(prefix):]))
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except ValueError as exc:
            raise SimplicialSetError("malformed JSON: %s" % exc)
        return build_space(obj)
    path = Path(text)
    if path.exists():
        return build_space(path.read_text())
    raise SimplicialSetError("unknown space %r" % spec)


# ---------------------------------------------------------------------------
# evaluation


def _word_operator(system, word, dim, m, q):
    """Matrix of s_{j1} o ... o s_{jk} from level dim to level dim + k."""
    M = None
    p = dim
    for j in reversed(word):
        S = system.degeneracy(j, p, m).get(q)
        if S is None:
            S = Mat.zeros(system.complex(p + 1, m).rank(q), system.complex(p, m).rank(q))
        M = S if M is None else S @ M
        p += 1
    if M is None:
        M = Mat.identity(system.complex(dim, m).rank(q))
    return M


class EvaluatedComplex:
    """
    Kernel of the face constraints, degree by degree.  ``subspaces[q]``
    holds the embedding into the ambient sum over nondegenerate simplices.
    """

    def __init__(self, system, X, m):
        self.system, self.X, self.m = system, X, m
        self.ring = system.ring
        if self.ring.kind == "Zmod" and not self.ring.is_field:
            raise NotImplementedError("evaluation over a non-field Z/m")
        sims = X.order
        degs = set()
        for s in sims:
            degs.update(system.complex(X.dims[s], m).degrees)
        self.offsets, self.ambient = {}, {}
        for q in degs:
            off, o = {}, 0
            for s in sims:
                off[s] = o
                o += system.complex(X.dims[s], m).rank(q)
            self.offsets[q], self.ambient[q] = off, o
        self.subspaces = {}
        for q in sorted(degs):
            self.subspaces[q] = kernel(self.constraint_matrix(q), self.ring,
                                       ambient_dim=self.ambient[q])
        ranks = {q: S.dim for q, S in self.subspaces.items()}
        diffs = {}
        for q in degs:
            if q - 1 not in self.subspaces or not ranks[q]:
                continue
            D = self.ambient_operator(q, lambda s: system.complex(X.dims[s], m).d(q),
                                      q - 1)
            img = (D @ self.subspaces[q].basis).reduce(self.ring)
            diffs[q] = self.subspaces[q - 1].coordinates(img).reduce(self.ring)
        self.complex = ChainComplex(self.ring, ranks, diffs)

    def constraint_matrix(self, q):
        X, sysm, m = self.X, self.system, self.m
        off = self.offsets[q]
        blocks = []
        nrows = 0
        for x in X.order:
            n = X.dims[x]
            if n == 0:
                continue
            r = sysm.complex(n - 1, m).rank(q)
            if not r:
                continue
            for i, (y, w) in enumerate(X.faces[x]):
                Dm = sysm.face(i, n, m).get(q)
                S = _word_operator(sysm, w, X.dims[y], m, q)
                blocks.append((nrows, x, Dm, y, S))
                nrows += r
        cols = [{} for _ in range(self.ambient[q])]
        for r0, x, Dm, y, S in blocks:
            if Dm is not None:
                for c, col in enumerate(Dm.cols):
                    tgt = cols[off[x] + c]
                    for i, v in col.items():
                        tgt[r0 + i] = tgt.get(r0 + i, 0) + v
            for c, col in enumerate(S.cols):
                tgt = cols[off[y] + c]
                for i, v in col.items():
                    tgt[r0 + i] = tgt.get(r0 + i, 0) - v
        cols = [{i: v for i, v in c.items() if self.ring.normalize(v)} for c in cols]
        return Mat(nrows, self.ambient[q], cols).reduce(self.ring)

    def ambient_operator(self, q, block, q_tgt, target=None, src_m=None):
        """Block-diagonal operator from simplexwise matrices block(s)."""
        target = target or self
        cols = []
        for s in self.X.order:
            B = block(s)
            o = target.offsets.get(q_tgt, {}).get(s, 0)
            for col in B.cols:
                cols.append({o + i: v for i, v in col.items()})
        return Mat(target.ambient.get(q_tgt, 0), self.ambient.get(q, 0), cols)

    def embedding(self, q):
        S = self.subspaces.get(q)
        return S.basis if S is not None else Mat(0, 0)

    def element(self, q, coords):
        """Ambient vector {simplex: level vector} of a kernel element."""
        v = self.embedding(q).apply(coords)
        out = {}
        for s in self.X.order:
            o = self.offsets[q][s]
            r = self.system.complex(self.X.dims[s], self.m).rank(q)
            part = {i - o: c for i, c in v.items() if o <= i < o + r}
            out[s] = part
        return out

    def coordinates(self, q, ambient_vec):
        Y = Mat(self.ambient[q], 1, [dict(ambient_vec)])
        return self.subspaces[q].coordinates(Y).reduce(self.ring).cols[0]

    def ambient_vector(self, q, per_simplex):
        out = {}
        for s, part in per_simplex.items():
            o = self.offsets[q][s]
            for i, c in part.items():
                out[o + i] = c
        return out


def evaluate_functor(system, X, m):
    return EvaluatedComplex(system, X, m)


def restrict_to_kernels(src, tgt, ambient_maps):
    """ChainMap src.complex -> tgt.complex from ambient matrices per degree."""
    ring = src.ring
    comps = {}
    for q, A in ambient_maps.items():
        if q not in src.subspaces or q not in tgt.subspaces:
            continue
        if not src.subspaces[q].dim:
            continue
        img = (A @ src.subspaces[q].basis).reduce(ring)
        if not tgt.subspaces[q].contains(img, ring):
            raise ArithmeticError("image leaves the evaluation in degree %d" % q)
        comps[q] = tgt.subspaces[q].coordinates(img).reduce(ring)
    return ChainMap(src.complex, tgt.complex, comps)


def induced_map_of_space(f, E_target_space, E_source_space):
    """
    f : X -> Y gives E(Y) -> E(X) by phi -> phi o f.  Arguments are the
    evaluations on Y and on X (same system and m).
    """
    EY, EX = E_target_space, E_source_space
    sysm, m = EY.system, EY.m
    maps = {}
    for q in EX.subspaces:
        if q not in EY.subspaces:
            continue
        cols_total = EY.ambient.get(q, 0)
        cols = [{} for _ in range(cols_total)]
        for x in f.source.order:
            y, sigma = f.assignment[x]
            word = surjection_to_word(sigma)
            S = _word_operator(sysm, word, f.target.dims[y], m, q)
            ox, oy = EX.offsets[q][x], EY.offsets[q][y]
            for c, col in enumerate(S.cols):
                for i, v in col.items():
                    cols[oy + c][ox + i] = cols[oy + c].get(ox + i, 0) + v
        maps[q] = Mat(EX.ambient[q], cols_total, cols)
    return restrict_to_kernels(EY, EX, maps)


def induced_map_of_injection(alpha, E_src, E_tgt):
    """alpha : m -> n gives E(X)(m) -> E(X)(n) simplexwise."""
    sysm, X = E_src.system, E_src.X
    maps = {}
    for q in E_src.subspaces:
        if q not in E_tgt.subspaces:
            continue
        maps[q] = E_src.ambient_operator(
            q, lambda s: _push_block(sysm, alpha, X.dims[s], q, E_src.m, E_tgt.m),
            q, target=E_tgt)
    return restrict_to_kernels(E_src, E_tgt, maps)


def _push_block(sysm, alpha, p, q, m, n):
    P = sysm.pushforward(alpha, p).get(q)
    if P is None:
        return Mat.zeros(sysm.complex(p, n).rank(q), sysm.complex(p, m).rank(q))
    return P


def induced_maps(obj, *evaluations):
    """Dispatch on a SimplicialMap or an Injection."""
    if isinstance(obj, SimplicialMap):
        return induced_map_of_space(obj, *evaluations)
    return induced_map_of_injection(obj, *evaluations)


# ---------------------------------------------------------------------------
# the ordinary cochain oracle


def normalized_cochains(X, ring=ZZ):
    """Functions on nondegenerate simplices, (df)(x) = sum (-1)^i f(d_i x)."""
    idx = {}
    for n in range(X.dim + 1):
        idx[n] = {s: i for i, s in enumerate(X.simplices(n))}
    ranks = {-n: len(idx[n]) for n in idx}
    diffs = {}
    for n in range(X.dim):
        cols = [{} for _ in idx[n]]
        for x, r in idx[n + 1].items():
            for i in range(n + 2):
                y, sigma = X.face(X.identity(x), i)
                if sigma != tuple(range(n + 1)):
                    continue
                c = idx[n][y]
                cols[c][r] = cols[c].get(r, 0) + (-1 if i % 2 else 1)
        diffs[-n] = Mat(len(idx[n + 1]), len(idx[n]),
                        [{a: b for a, b in col.items() if b} for col in cols])
    return ChainComplex(ring, ranks, diffs,
                        labels={-n: X.simplices(n) for n in idx})


def _front_back(X, x, a):
    """Front a-face and back face of the nondegenerate simplex x."""
    s = X.identity(x)
    n = X.dims[x]
    front = s
    for k in range(n, a, -1):
        front = X.face(front, k)
    back = s
    for _ in range(a):
        back = X.face(back, 0)
    return front, back


def aw_cup(X, f, a, g, b, ring):
    """Alexander-Whitney product of cochain vectors f (dim a), g (dim b)."""
    idx = {n: {s: i for i, s in enumerate(X.simplices(n))} for n in (a, b, a + b)}
    out = {}
    for x, r in idx[a + b].items():
        fr, bk = _front_back(X, x, a)
        if fr[1] != tuple(range(a + 1)) or bk[1] != tuple(range(b + 1)):
            continue
        v = f.get(idx[a][fr[0]], 0) * g.get(idx[b][bk[0]], 0)
        v = ring.normalize(v)
        if v:
            out[r] = v
    return out


class RingTable:
    """
    Products of homology generators.  ``orders[q]`` lists the generator
    orders of H_q (0 = free); table[(q1, i), (q2, j)] = class coordinates.
    """

    def __init__(self, orders, table):
        self.orders = {q: list(o) for q, o in orders.items()}
        self.table = table

    @property
    def groups(self):
        from .chain_core import HomologyGroup
        return {q: HomologyGroup(sum(1 for x in o if x == 0),
                                 tuple(sorted(x for x in o if x)))
                for q, o in self.orders.items()}

    def ngens(self, q):
        return len(self.orders.get(q, ()))

    def to_dict(self, ring=None):
        return {"groups": {str(q): g.describe(ring) for q, g in sorted(self.groups.items())},
                "products": {"%d.%d*%d.%d" % (k[0] + k[1]): list(v)
                             for k, v in sorted(self.table.items())}}


def aw_cup_oracle(X, ring=ZZ):
    C = normalized_cochains(X, ring)
    pres = {q: HomologyPresentation(C, q) for q in C.degrees}
    table = {}
    for q1, P1 in pres.items():
        for q2, P2 in pres.items():
            q = q1 + q2
            if q not in pres:
                continue
            for i in range(len(P1)):
                for j in range(len(P2)):
                    f = P1.gens.cols[i]
                    g = P2.gens.cols[j]
                    prod = aw_cup(X, f, -q1, g, -q2, ring)
                    cls = pres[q].classify(Mat(C.rank(q), 1, [prod]))[0]
                    table[((q1, i), (q2, j))] = cls
    return RingTable({q: P.orders for q, P in pres.items()}, table)


# ---------------------------------------------------------------------------
# comparisons


def default_cutoff(X):
    return X.dim + 3


def comparison_zigzag(X, m, ring=ZZ, cutoff=None, window=None):
    """
    Evaluations of AI, BI and CI at (X, m) with the maps AI -> BI <- CI
    and quasi-isomorphism verdicts over the trusted window.
    """
    from .bar_ai import AISystem, BISystem
    cutoff = cutoff if cutoff is not None else default_cutoff(X)
    if window is None:
        window = (-(cutoff - 2), 0)
    sysB = BISystem(ring, cutoff)
    EA = evaluate_functor(sysB.A, X, m)
    EB = evaluate_functor(sysB, X, m)
    EC = evaluate_functor(sysB.C, X, m)
    fA = restrict_to_kernels(EA, EB, _blockwise(EA, EB, lambda s, q: _comp(
        sysB.from_ai(X.dims[s], m), q)))
    fC = restrict_to_kernels(EC, EB, _blockwise(EC, EB, lambda s, q: _comp(
        sysB.from_ci(X.dims[s], m), q)))
    okA, repA = is_quasi_iso(fA, window) if X.order else (True, {})
    okC, repC = is_quasi_iso(fC, window) if X.order else (True, {})
    return {"A": EA, "B": EB, "C": EC, "from_A": fA, "from_C": fC,
            "A_quasi_iso": okA, "C_quasi_iso": okC,
            "cone_A": repA, "cone_C": repC, "window": window}


def _comp(chain_map, q):
    return chain_map[q]


def _blockwise(src, tgt, block):
    maps = {}
    for q in src.subspaces:
        if q not in tgt.subspaces:
            continue
        maps[q] = src.ambient_operator(q, lambda s: block(s, q), q, target=tgt)
    return maps


# ---------------------------------------------------------------------------
# cup products through positive fibrancy


def _product_vector(p, v1, q1, v2, q2, m1, m2):
    """External product of level vectors at simplicial degree p."""
    from .free_cidga import external_product_monomial, level
    L1, L2, L = level(p, m1), level(p, m2), level(p, m1 + m2)
    out = {}
    for i, a in v1.items():
        ma = L1.bases[q1][i]
        for j, b in v2.items():
            mb = L2.bases[q2][j]
            k = L.index[q1 + q2][external_product_monomial(ma, mb, m1)]
            out[k] = out.get(k, 0) + a * b
    return out


def evaluation_product(E1, q1, c1, E2, q2, c2, E12):
    """Pointwise external product of two kernel elements, as E12 coordinates."""
    ring = E12.ring
    a, b = E1.element(q1, c1), E2.element(q2, c2)
    per = {}
    for s in E1.X.order:
        p = E1.X.dims[s]
        v = _product_vector(p, a[s], q1, b[s], q2, E1.m, E2.m)
        per[s] = {k: ring.normalize(x) for k, x in v.items() if ring.normalize(x)}
    q = q1 + q2
    if q not in E12.subspaces:
        return {}
    vec = E12.ambient_vector(q, per)
    Y = Mat(E12.ambient[q], 1, [vec])
    if not E12.subspaces[q].contains(Y, ring):
        raise ArithmeticError("product left the evaluation")
    return E12.subspaces[q].coordinates(Y).reduce(ring).cols[0]


class FibrancyError(ArithmeticError):
    pass


def _solve_classes(M_cols, target, orders, ring):
    """Solve sum_j c_j M_cols[j] = target in the group with the given orders."""
    k = len(orders)
    if not k:
        return ()
    if ring.is_field or all(o == 0 for o in orders):
        A = Mat(k, len(M_cols), [{i: v for i, v in enumerate(c) if v} for c in M_cols])
        B = Mat(k, 1, [{i: v for i, v in enumerate(target) if v}])
        x = solve(A, B, ring)
        if x is None:
            raise FibrancyError("class not in the image")
        return tuple(x.cols[0].get(i, 0) for i in range(len(M_cols)))
    if any(o == 0 for o in orders):
        raise NotImplementedError("mixed free/torsion class solving")
    for c in product(*[range(o) for o in orders]):
        img = [sum(c[j] * M_cols[j][i] for j in range(len(M_cols))) % orders[i]
               for i in range(k)]
        if tuple(img) == tuple(t % o for t, o in zip(target, orders)):
            return c
    raise FibrancyError("class not in the image")


class CupStructure:
    """Cup products on H(E(m0)) through E(2 m0) and the quasi-isos m0 -> 2 m0."""

    def __init__(self, X, ring=ZZ, m0=1, system=None):
        from .bar_ai import AISystem
        from .icat import Injection
        self.X, self.ring, self.m0 = X, ring, m0
        self.system = system or AISystem(ring)
        self.E1 = evaluate_functor(self.system, X, m0)
        self.E2 = evaluate_functor(self.system, X, 2 * m0)
        self.P1 = {q: HomologyPresentation(self.E1.complex, q) for q in self.E1.subspaces}
        self.P2 = {q: HomologyPresentation(self.E2.complex, q) for q in self.E2.subspaces}
        self.iotas = [Injection(m0, 2 * m0, range(1, m0 + 1)),
                      Injection(m0, 2 * m0, range(m0 + 1, 2 * m0 + 1))]
        self._push = {}

    def push(self, iota):
        if iota not in self._push:
            self._push[iota] = induced_map_of_injection(iota, self.E1, self.E2)
        return self._push[iota]

    def iota_matrix(self, iota, q):
        """Classes of iota_*(generators) in H_q(E(2 m0))."""
        f = self.push(iota)
        P1 = self.P1.get(q)
        P2 = self.P2.get(q)
        if P1 is None or not len(P1):
            return []
        imgs = (f[q] @ P1.gens).reduce(self.ring)
        return P2.classify(imgs) if P2 is not None else [() for _ in range(len(P1))]

    def iota_is_iso(self, iota, q):
        P1, P2 = self.P1.get(q), self.P2.get(q)
        n1 = len(P1) if P1 is not None else 0
        n2 = len(P2) if P2 is not None else 0
        if (P1.group if P1 else None) != (P2.group if P2 else None) and (n1 or n2):
            return False
        if not n1:
            return True
        cols = self.iota_matrix(iota, q)
        for e in range(n2):
            target = tuple(1 if i == e else 0 for i in range(n2))
            try:
                _solve_classes(cols, target, P2.orders, self.ring)
            except FibrancyError:
                return False
        return True

    def product_class_m2(self, q1, c1, q2, c2):
        """Class in H(E(2 m0)) of the product of two cycles of E(m0)."""
        coords = evaluation_product(self.E1, q1, c1, self.E1, q2, c2, self.E2)
        q = q1 + q2
        P = self.P2.get(q)
        if P is None:
            return ()
        Y = Mat(self.E2.complex.rank(q), 1, [coords])
        return P.classify(Y)[0]

    def cup(self, q1, x, q2, y, iota=None):
        """
        x, y: class coordinate tuples in H_{q1}, H_{q2} of E(m0).
        Returns the class coordinates of x cup y in H_{q1+q2}(E(m0)).
        """
        iota = iota or self.iotas[0]
        c1 = self._cycle(q1, x)
        c2 = self._cycle(q2, y)
        q = q1 + q2
        target = self.product_class_m2(q1, c1, q2, c2)
        if q not in self.P1 or not len(self.P1[q]):
            if any(target):
                raise FibrancyError("product class has no preimage in degree %d" % q)
            return ()
        if not self.iota_is_iso(iota, q):
            raise FibrancyError("iota_* is not invertible in degree %d" % q)
        return _solve_classes(self.iota_matrix(iota, q), target,
                              self.P2[q].orders, self.ring)

    def _cycle(self, q, cls):
        P = self.P1[q]
        v = {}
        for j, c in enumerate(cls):
            if c:
                for i, a in P.gens.cols[j].items():
                    v[i] = v.get(i, 0) + c * a
        return {i: self.ring.normalize(a) for i, a in v.items() if self.ring.normalize(a)}

    def table(self, iota=None):
        table = {}
        for q1, P1 in self.P1.items():
            for q2, P2 in self.P1.items():
                if q1 + q2 not in self.P1 and q1 + q2 not in self.P2:
                    continue
                for i in range(len(P1)):
                    for j in range(len(P2)):
                        ei = tuple(1 if k == i else 0 for k in range(len(P1)))
                        ej = tuple(1 if k == j else 0 for k in range(len(P2)))
                        table[((q1, i), (q2, j))] = self.cup(q1, ei, q2, ej, iota)
        return RingTable({q: P.orders for q, P in self.P1.items()}, table)


def cup_product(X, x, y, ring=ZZ, m0=1, iota=None):
    """x = (degree, class coords), y likewise; result class coords."""
    cs = CupStructure(X, ring, m0)
    return cs.cup(x[0], x[1], y[0], y[1], iota)


def match_rings(A, B, ring, search=(-1, 0, 1)):
    """
    Search for degreewise invertible matrices with small entries carrying
    the product table of A onto that of B, generator by generator.
    Returns {q: matrix} (row i = image of A's i-th generator) or None.
    """
    degs = sorted(set(q for q in A.orders if A.ngens(q)) |
                  set(q for q in B.orders if B.ngens(q)))
    for q in degs:
        if sorted(A.orders.get(q, [])) != sorted(B.orders.get(q, [])):
            return None
    if ring.is_field and ring.is_finite:
        search = tuple(ring.elements())
    choices = []
    for q in degs:
        k = A.ngens(q)
        mats = []
        for entries in product(search, repeat=k * k):
            M = [list(entries[i * k:(i + 1) * k]) for i in range(k)]
            if _invertible(M, ring):
                mats.append(M)
        choices.append(mats)
    for combo in product(*choices):
        basis = dict(zip(degs, combo))
        if _table_matches(A, B, basis, ring):
            return basis
    return None


def _invertible(M, ring):
    from .chain_core import smith_normal_form
    k = len(M)
    if k == 0:
        return True
    _, D, _ = smith_normal_form(Mat.from_dense(M), ring)
    return all(ring.is_unit(D[i, i]) for i in range(k))


def _table_matches(A, B, basis, ring):
    def image(q, coords):
        M = basis.get(q)
        k = len(M) if M is not None else 0
        return tuple(ring.normalize(sum(coords[i] * M[i][j] for i in range(k)))
                     for j in range(k))

    def b_product(q1, u, q2, v):
        k = B.ngens(q1 + q2)
        if k == 0:
            return ()
        acc = [0] * k
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                if a and b:
                    val = B.table.get(((q1, i), (q2, j)))
                    if val is None:
                        return None
                    for t, w in enumerate(val):
                        acc[t] += a * b * w
        return tuple(ring.normalize(x) for x in acc)

    for q1 in basis:
        for q2 in basis:
            for i in range(A.ngens(q1)):
                for j in range(A.ngens(q2)):
                    val = A.table.get(((q1, i), (q2, j)))
                    if val is None:
                        return False
                    lhs = image(q1 + q2, val) if (q1 + q2) in basis else ()
                    rhs = b_product(q1, basis[q1][i], q2, basis[q2][j])
                    if rhs is None or tuple(lhs) != tuple(rhs[:len(lhs)]) or \
                            any(rhs[len(lhs):]):
                        return False
    return True


# ---------------------------------------------------------------------------
# adjunction counting over F_2


def _f2_vectors(n):
    for bits in product((0, 1), repeat=n):
        yield {i: 1 for i, b in enumerate(bits) if b}


def adjunction_count_f2(X, m, q, kind="sphere"):
    """
    E free on one generator of degree q at level m: kind 'sphere' (S^q)
    or 'disk' (D^q).  Returns (|Hom(E, A(X))|, |sSet(X, K(E))|).
    """
    from .bar_ai import AISystem
    sysm = AISystem(F2)
    Ev = evaluate_functor(sysm, X, m)
    C = Ev.complex
    if kind == "sphere":
        count1 = 2 ** kernel(C.d(q), F2, ambient_dim=C.rank(q)).dim
    elif kind == "disk":
        count1 = 2 ** C.rank(q)
    else:
        raise ValueError("kind must be 'sphere' or 'disk'")
    # K_p = cycles (resp. all) of level p in degree q; enumerate maps X -> K
    pieces = {}
    for s in X.order:
        p = X.dims[s]
        L = sysm.complex(p, m)
        if kind == "sphere":
            B = kernel(L.d(q), F2, ambient_dim=L.rank(q)).basis
            elems = []
            for coeffs in _f2_vectors(B.ncols):
                elems.append(B.apply(coeffs))
        else:
            elems = list(_f2_vectors(L.rank(q)))
        pieces[s] = [{i: v % 2 for i, v in e.items() if v % 2} for e in elems]
    count2 = 0
    for choice in product(*[pieces[s] for s in X.order]):
        phi = dict(zip(X.order, choice))
        if _compatible(sysm, X, m, q, phi):
            count2 += 1
    return count1, count2


def _compatible(sysm, X, m, q, phi):
    for x in X.order:
        n = X.dims[x]
        for i, (y, w) in enumerate(X.faces[x]):
            D = sysm.face(i, n, m).get(q)
            a = D.apply(phi[x]) if D is not None else {}
            S = _word_operator(sysm, w, X.dims[y], m, q)
            b = S.apply(phi[y])
            a = {k: v % 2 for k, v in a.items() if v % 2}
            b = {k: v % 2 for k, v in b.items() if v % 2}
            if a != b:
                return False
    return True


# ---------------------------------------------------------------------------
# cochain-theory axioms


def cone_map(f, g, a, b):
    """Map cone(f) -> cone(g) from a commuting square g a = b f."""
    Cf, _ = cone_and_hofib(f)
    Cg, _ = cone_and_hofib(g)
    comps = {}
    for n in Cf.degrees:
        comps[n] = Mat.block_diag([a[n - 1], b[n]])
    return ChainMap(Cf, Cg, comps)


def cochain_theory_checks(X=None, Y_ids=None, family=None, ring=ZZ, m=1, system=None):
    """
    Returns a Report with the four axioms:
    (i) weak equivalences -> quasi-isos on sample collapse maps,
    (ii) relative hofib comparison for (X, Y),
    (iii) disjoint unions -> products, exactly,
    (iv) the point evaluates to the ring in degree 0.
    """
    from .bar_ai import AISystem, Report
    sysm = system or AISystem(ring)
    rep = Report("cochain theory axioms")
    pt = point()
    Ept = evaluate_functor(sysm, pt, m)
    # (i)
    for n in (1, 2):
        D = standard_simplex(n)
        ED = evaluate_functor(sysm, D, m)
        collapse = SimplicialMap(D, pt, {s: ("v0", (0,) * (D.dims[s] + 1)) for s in D.order})
        f = induced_map_of_space(collapse, Ept, ED)
        rep.add("(i) collapse delta%d -> point is a quasi-iso" % n, is_quasi_iso(f)[0])
        vert = SimplicialMap(pt, D, {"v0": ("v0", (0,))})
        g = induced_map_of_space(vert, ED, Ept)
        rep.add("(i) vertex inclusion into delta%d is a quasi-iso" % n, is_quasi_iso(g)[0])
    # (ii)
    if X is None:
        X, Y_ids = standard_simplex(1), ["v0", "v1"]
    Y = FiniteSimplicialSet([{"id": s, "dim": X.dims[s],
                              "faces": [{"target": t, "degeneracies": list(w)}
                                        for t, w in X.faces[s]]}
                             for s in X.order if s in set(Y_ids)])
    Q = quotient(X, Y_ids)
    EX, EY, EQ = (evaluate_functor(sysm, Z, m) for Z in (X, Y, Q))
    incl = SimplicialMap(Y, X, {s: X.identity(s) for s in Y.order})
    qmap = quotient_map(X, Y_ids, Q)
    base = SimplicialMap(pt, Q, {"v0": ("*", (0,))})
    to_pt = SimplicialMap(Y, pt, {s: ("v0", (0,) * (Y.dims[s] + 1)) for s in Y.order})
    f = induced_map_of_space(base, EQ, Ept)          # E(X/Y) -> E(*)
    g = induced_map_of_space(incl, EX, EY)           # E(X) -> E(Y)
    a = induced_map_of_space(qmap, EQ, EX)           # E(X/Y) -> E(X)
    b = induced_map_of_space(to_pt, Ept, EY)         # E(*) -> E(Y)
    square = all(((g[q] @ a[q]) - (b[q] @ f[q])).reduce(ring).is_zero()
                 for q in EQ.complex.degrees)
    rep.add("(ii) square commutes", square)
    h = cone_map(f, g, a, b)
    rep.add("(ii) hofib comparison is a quasi-iso", is_quasi_iso(h)[0])
    # (iii)
    family = family or [point(), point()]
    U = disjoint_union(*family)
    EU = evaluate_functor(sysm, U, m)
    parts = [evaluate_functor(sysm, Z, m) for Z in family]
    maps = [induced_map_of_space(union_inclusion(family, k, U), EU, parts[k])
            for k in range(len(family))]
    exact = True
    for q in EU.complex.degrees:
        M = Mat.vstack([mp[q] for mp in maps], ncols=EU.complex.rank(q))
        if M.nrows != M.ncols:
            exact = False
            break
        if solve(M, Mat.identity(M.nrows), ring) is None:
            exact = False
    rep.add("(iii) disjoint union -> product is an isomorphism", exact)
    # (iv)
    H = Ept.complex.homology_table()
    ok = all((str(h) == "0") == (q != 0) for q, h in H.items()) and \
        H.get(0) is not None and H[0].free_rank == 1 and not H[0].torsion
    rep.add("(iv) H(A(point)) = ring in degree 0", ok)
    return rep


def latching_surjectivity(p, m, ring=ZZ, system=None):
    """Restriction E(Delta^p) -> E(boundary) surjective in every degree?"""
    from .bar_ai import AISystem
    sysm = system or AISystem(ring)
    D, B = standard_simplex(p), boundary_simplex(p)
    ED, EB = evaluate_functor(sysm, D, m), evaluate_functor(sysm, B, m)
    incl = SimplicialMap(B, D, {s: D.identity(s) for s in B.order})
    f = induced_map_of_space(incl, ED, EB)
    out = {}
    for q in EB.complex.degrees:
        M = f[q]
        n = EB.complex.rank(q)
        out[q] = solve(M, Mat.identity(n), ring) is not None if n else True
    return out

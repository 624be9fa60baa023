"""
Monomial calculus for the free commutative I-dga on p disks D^0,
evaluated at an object m of I.

A monomial is a tuple of slots (value, j, odd) with strictly increasing
values in 1..m; slot letter r_j has degree 0 and dr_j (odd=1) degree -1.
Because the symmetric group acts freely on injections, these sorted
representatives form a basis of the coinvariants.
"""

from itertools import combinations, product
from math import comb

from .chain_core import QQ, ZZ, ChainComplex, ChainMap, Mat
from .icat import orbit_canonicalize

UNIT = ()


def monomial_degree(mono):
    return -sum(s[2] for s in mono)


def monomial_str(mono):
    if not mono:
        return "1"
    return "(" + ",".join("%d|%sr%d" % (v, "d" if o else "", j)
                          for v, j, o in mono) + ")"


def basis_count(p, m, q):
    """Closed-form rank of level (p, m) in degree q."""
    if q > 0:
        return 0
    return sum(comb(m, s) * comb(s, -q) * p ** s for s in range(m + 1))


def basis_enumerate(p, m, q):
    """Monomials of degree q ordered by slot count, values, letters."""
    n_odd = -q
    out = []
    if n_odd < 0:
        return out
    for s in range(n_odd, m + 1):
        if s > 0 and p == 0:
            break
        for values in combinations(range(1, m + 1), s):
            group = []
            for odd_pos in combinations(range(s), n_odd):
                flags = [0] * s
                for k in odd_pos:
                    flags[k] = 1
                for js in product(range(1, p + 1), repeat=s):
                    letters = tuple((js[k], flags[k]) for k in range(s))
                    group.append(letters)
            group.sort()
            for letters in group:
                out.append(tuple((values[k],) + letters[k] for k in range(s)))
    return out


class FreeElement:
    """Linear combination of monomials at context (p, m), homogeneous."""

    __slots__ = ("p", "m", "q", "terms")

    def __init__(self, p, m, q, terms=None):
        self.p, self.m, self.q = p, m, q
        self.terms = {}
        for mono, c in (terms or {}).items():
            if c:
                assert monomial_degree(mono) == q, (mono, q)
                self.terms[mono] = c

    @classmethod
    def monomial(cls, p, m, mono, coeff=1):
        mono = tuple(mono)
        values = [s[0] for s in mono]
        if values != sorted(set(values)) or any(v < 1 or v > m for v in values):
            raise ValueError("slot values must increase within 1..%d" % m)
        if any(j < 1 or j > p for _, j, _ in mono):
            raise ValueError("letter index out of range 1..%d" % p)
        return cls(p, m, monomial_degree(mono), {mono: coeff})

    @classmethod
    def unit(cls, p, m):
        return cls(p, m, 0, {UNIT: 1})

    def _ctx(self, other):
        if (self.p, self.m, self.q) != (other.p, other.m, other.q):
            raise ValueError("context mismatch")

    def __add__(self, other):
        self._ctx(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return FreeElement(self.p, self.m, self.q, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return FreeElement(self.p, self.m, self.q,
                           {k: c * v for k, v in self.terms.items()})

    def reduce(self, ring):
        return FreeElement(self.p, self.m, self.q,
                           {k: ring.normalize(v) for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return (self.p, self.m, self.q) == (other.p, other.m, other.q) and \
            self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("%s*%s" % (c, monomial_str(k))
                          for k, c in sorted(self.terms.items()))

    def to_vector(self, basis_index):
        return {basis_index[k]: v for k, v in self.terms.items()}


def differential_monomial(mono):
    """d of a monomial as a list of (sign, monomial)."""
    out = []
    odd_before = 0
    for i, (v, j, o) in enumerate(mono):
        if not o:
            sign = -1 if odd_before % 2 else 1
            out.append((sign, mono[:i] + ((v, j, 1),) + mono[i + 1:]))
        odd_before += o
    return out


def differential(x):
    t = {}
    for mono, c in x.terms.items():
        for s, m2 in differential_monomial(mono):
            t[m2] = t.get(m2, 0) + s * c
    return FreeElement(x.p, x.m, x.q - 1, t)


def external_product_monomial(a, b, m1):
    return a + tuple((v + m1, j, o) for v, j, o in b)


def external_product(x, y):
    if x.p != y.p:
        raise ValueError("context mismatch: p=%d vs %d" % (x.p, y.p))
    t = {}
    for a, c in x.terms.items():
        for b, d in y.terms.items():
            k = external_product_monomial(a, b, x.m)
            t[k] = t.get(k, 0) + c * d
    return FreeElement(x.p, x.m + y.m, x.q + y.q, t)


def pushforward_monomial(alpha, mono):
    """(sign, monomial) for the image of mono under the injection alpha."""
    values = [alpha(v) for v, _, _ in mono]
    sorted_vals, perm, sign = orbit_canonicalize(values, [o for _, _, o in mono])
    out = tuple((sorted_vals[k],) + mono[perm(k + 1) - 1][1:]
                for k in range(len(mono)))
    return sign, out


def functorial_pushforward(alpha, x):
    if alpha.source != x.m:
        raise ValueError("injection source %d != m=%d" % (alpha.source, x.m))
    t = {}
    for mono, c in x.terms.items():
        s, k = pushforward_monomial(alpha, mono)
        t[k] = t.get(k, 0) + s * c
    return FreeElement(x.p, alpha.target, x.q, t)


def augmentation_epsilon(i, x):
    """Algebra map to the unit: r -> i, dr -> 0."""
    total = 0
    for mono, c in x.terms.items():
        if any(o for _, _, o in mono):
            continue
        total += c * i ** len(mono)
    return total


class Level:
    """Bases and index maps of level (p, m), all degrees 0..-m."""

    def __init__(self, p, m):
        self.p, self.m = p, m
        self.bases = {q: basis_enumerate(p, m, q) for q in range(-m, 1)}
        self.bases = {q: b for q, b in self.bases.items() if b}
        self.index = {q: {mono: i for i, mono in enumerate(b)}
                      for q, b in self.bases.items()}

    def rank(self, q):
        return len(self.bases.get(q, ()))

    def degrees(self):
        return sorted(self.bases)


_LEVELS = {}


def level(p, m):
    key = (p, m)
    if key not in _LEVELS:
        _LEVELS[key] = Level(p, m)
    return _LEVELS[key]


def monomial_map_matrix(src, tgt, q_src, q_tgt, fn):
    """Matrix of a map given on monomials as a list of (coeff, monomial)."""
    rows = tgt.index.get(q_tgt, {})
    cols = []
    for mono in src.bases.get(q_src, ()):
        col = {}
        for c, k in fn(mono):
            r = rows[k]
            col[r] = col.get(r, 0) + c
        cols.append({a: b for a, b in col.items() if b})
    return Mat(len(rows), len(cols), cols)


def level_complex(p, m, ring=ZZ):
    L = level(p, m)
    ranks = {q: L.rank(q) for q in L.degrees()}
    diffs = {q: monomial_map_matrix(L, L, q, q - 1, differential_monomial)
             for q in L.degrees() if q - 1 in L.bases}
    return ChainComplex(ring, ranks, diffs, labels=dict(L.bases))


def pushforward_matrix(alpha, p, q):
    src, tgt = level(p, alpha.source), level(p, alpha.target)
    return monomial_map_matrix(src, tgt, q, q,
                               lambda mono: [pushforward_monomial(alpha, mono)])


def pushforward_chain_map(alpha, p, ring=ZZ):
    C = level_complex(p, alpha.source, ring)
    D = level_complex(p, alpha.target, ring)
    return ChainMap(C, D, {q: pushforward_matrix(alpha, p, q)
                           for q in C.degrees})


def unit_inclusion(p, m, ring=ZZ):
    """S^0 -> level_complex(p, m) sending 1 to the empty monomial."""
    C = level_complex(p, m, ring)
    S = ChainComplex(ring, {0: 1})
    return ChainMap(S, C, {0: Mat(C.rank(0), 1, [{0: 1}])})


def tensor_power_oracle(p, m, ring=ZZ):
    """
    level_complex(p, 1) tensored m times, as an independent model of
    level (p, m): slot k of a monomial is the k-th tensor factor.
    Returns the complex and, per degree, the index permutation sending a
    monomial of level (p, m) to its tensor basis position with sign.
    """
    from .chain_core import tensor, unit_complex
    one = level_complex(p, 1, ring)
    T = unit_complex(ring)
    for _ in range(m):
        T = tensor(T, one)

    def flatten(lbl):
        out = []
        for _ in range(m):
            lbl, last = lbl
            out.append(last)
        return out[::-1]

    positions = {}
    for q in T.degrees:
        pos = {}
        for i in range(T.rank(q)):
            mono = []
            for k, f in enumerate(flatten(T.label(q, i))):
                if f:
                    (_, j, o), = f
                    mono.append((k + 1, j, o))
            pos[tuple(mono)] = i
        positions[q] = pos
    return T, positions


def free_graded_commutative_complex(p, weight, ring=QQ):
    """
    The weight-s part of k[r_1..r_p] tensor Lambda[dr_1..dr_p] with
    d r_j = dr_j: the symmetric power of the p disks, degrees 0..-p.
    Basis: (multiset of r indices, increasing tuple of dr indices).
    """
    bases = {}
    for n_odd in range(0, min(p, weight) + 1):
        b = []
        for odd in combinations(range(1, p + 1), n_odd):
            for even in _multisets(p, weight - n_odd):
                b.append((even, odd))
        bases[-n_odd] = b
    index = {q: {x: i for i, x in enumerate(b)} for q, b in bases.items()}
    diffs = {}
    for q, b in bases.items():
        if q - 1 not in bases:
            continue
        cols = []
        for even, odd in b:
            col = {}
            for j in sorted(set(even)):
                if j in odd:
                    continue
                mult = even.count(j)
                ev = list(even)
                ev.remove(j)
                new_odd = tuple(sorted(odd + (j,)))
                pos = new_odd.index(j)
                # move dr_j to the front, past no odd letters, then sort
                sign = -1 if pos % 2 else 1
                r = index[q - 1][(tuple(ev), new_odd)]
                col[r] = col.get(r, 0) + sign * mult
            cols.append({a: c for a, c in col.items() if c})
        diffs[q] = Mat(len(bases[q - 1]), len(b), cols)
    return ChainComplex(ring, {q: len(b) for q, b in bases.items()}, diffs,
                        labels=bases)


def _multisets(p, k):
    from itertools import combinations_with_replacement
    return list(combinations_with_replacement(range(1, p + 1), k))


def coinvariant_power_oracle(s, ring=QQ):
    """
    (D^0)^{tensor s} modulo the signed symmetric group action, computed
    by brute force as a quotient: ranks of the coinvariants per degree.
    """
    from .chain_core import rank
    from itertools import permutations
    words = {}
    for w in product((0, 1), repeat=s):
        words.setdefault(-sum(w), []).append(w)
    out = {}
    for q, ws in words.items():
        idx = {w: i for i, w in enumerate(ws)}
        rel = []
        for w in ws:
            for perm in permutations(range(s)):
                w2 = tuple(w[perm[k]] for k in range(s))
                odd = [k for k in range(s) if w[perm[k]]]
                sign = 1
                for a in range(len(odd)):
                    for b in range(a + 1, len(odd)):
                        if perm[odd[a]] > perm[odd[b]]:
                            sign = -sign
                col = {idx[w]: 1}
                col[idx[w2]] = col.get(idx[w2], 0) - sign
                rel.append({a: c for a, c in col.items() if c})
        R = Mat(len(ws), len(rel), rel).reduce(ring)
        out[q] = len(ws) - rank(R, ring)
    return out

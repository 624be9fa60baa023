"""
The category I of finite sets {1..m} and injections, permutations,
and the Barratt-Eccles operad E_n = C_*(k{N(translation category of S_n)}).

Everything is 1-based: an injection m -> n is the tuple of its values.
"""

from itertools import permutations, product
from math import factorial

from .chain_core import ChainComplex, Mat


class Injection:
    __slots__ = ("source", "target", "values")

    def __init__(self, source, target, values):
        values = tuple(values)
        if len(values) != source:
            raise ValueError("need %d values" % source)
        if len(set(values)) != source:
            raise ValueError("values not injective: %r" % (values,))
        if any(v < 1 or v > target for v in values):
            raise ValueError("values out of range 1..%d" % target)
        self.source = source
        self.target = target
        self.values = values

    @classmethod
    def identity(cls, n):
        return cls(n, n, range(1, n + 1))

    @classmethod
    def inclusion(cls, m, n):
        return cls(m, n, range(1, m + 1))

    def __call__(self, i):
        return self.values[i - 1]

    def __eq__(self, other):
        return isinstance(other, Injection) and self.target == other.target \
            and self.values == other.values

    def __hash__(self):
        return hash((self.target, self.values))

    def __repr__(self):
        return "Injection(%d->%d, %r)" % (self.source, self.target, self.values)

    def is_identity(self):
        return self.source == self.target and \
            self.values == tuple(range(1, self.source + 1))

    def compose(self, other):
        """self o other (apply other first)."""
        if other.target != self.source:
            raise ValueError("size mismatch: %d -> %d then %d -> %d" % (
                other.source, other.target, self.source, self.target))
        return Injection(other.source, self.target,
                         [self.values[v - 1] for v in other.values])

    __mul__ = compose

    def concat(self, other):
        """self + other on m1+m2 -> n1+n2, other's values shifted by n1."""
        return Injection(self.source + other.source,
                         self.target + other.target,
                         self.values + tuple(v + self.target for v in other.values))

    def as_permutation(self):
        assert self.source == self.target
        return Permutation(self.values)


def enumerate_injections(m, n):
    """All injections m -> n in lexicographic order of their value tuples."""
    if m > n or m < 0:
        return []
    return [Injection(m, n, v) for v in permutations(range(1, n + 1), m)]


def concat(f, g):
    return f.concat(g)


def compose(f, g):
    """f o g."""
    return f.compose(g)


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError("not a permutation: %r" % (images,))
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(1, n + 1))

    @classmethod
    def transposition(cls, n, i, j):
        im = list(range(1, n + 1))
        im[i - 1], im[j - 1] = im[j - 1], im[i - 1]
        return cls(im)

    @property
    def size(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def __mul__(self, other):
        """(self * other)(i) = self(other(i))."""
        assert self.size == other.size
        return Permutation(self.images[i - 1] for i in other.images)

    def inverse(self):
        inv = [0] * self.size
        for i, v in enumerate(self.images):
            inv[v - 1] = i + 1
        return Permutation(inv)

    def sign(self):
        s = 1
        seen = [False] * self.size
        for i in range(self.size):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = self.images[j] - 1
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Perm%r" % (self.images,)

    def is_identity(self):
        return self.images == tuple(range(1, self.size + 1))

    def direct_sum(self, other):
        n = self.size
        return Permutation(self.images + tuple(v + n for v in other.images))

    def as_injection(self):
        return Injection(self.size, self.size, self.images)


def all_permutations(n):
    return [Permutation(p) for p in permutations(range(1, n + 1))]


def block_permutation(sigma, sizes):
    """
    The bijection m_1+...+m_n -> m_{s^-1(1)}+...+m_{s^-1(n)} moving
    block i to position sigma(i), as a Permutation of the letters.
    """
    n = sigma.size
    assert len(sizes) == n
    inv = sigma.inverse()
    start = {}
    off = 0
    for pos in range(1, n + 1):
        blk = inv(pos)
        start[blk] = off
        off += sizes[blk - 1]
    images = []
    for blk in range(1, n + 1):
        for t in range(sizes[blk - 1]):
            images.append(start[blk] + t + 1)
    return Permutation(images)


def sigma_action_on_objects(sigma, sizes):
    """
    (sigma; m_1..m_n) -> m_{s^-1(1)} + ... + m_{s^-1(n)} together with the
    block bijection from m_1 + ... + m_n as an Injection.
    """
    if sigma.size != len(sizes):
        raise ValueError("arity mismatch")
    total = sum(sizes)
    bp = block_permutation(sigma, sizes)
    return total, Injection(total, total, bp.images)


def sigma_action_on_morphisms(rho, sigma, alphas):
    """
    Image of the morphism (rho: sigma -> rho*sigma; alpha_1..alpha_n) of
    the translation category times I^n under the action functor.
    """
    inv = sigma.inverse()
    ordered = [alphas[inv(i) - 1] for i in range(1, sigma.size + 1)]
    f = Injection(0, 0, ())
    for a in ordered:
        f = f.concat(a)
    targets_in_sigma_order = [a.target for a in ordered]
    bp = block_permutation(rho, targets_in_sigma_order)
    return bp.as_injection().compose(f)


def orbit_canonicalize(values, degrees):
    """
    Sort distinct slot values.  Returns (sorted values, perm, sign) where
    sorted[k] = values[perm[k] - 1] and sign = (-1)^(inversions among
    odd-degree slots).
    """
    values = tuple(values)
    assert len(set(values)) == len(values)
    order = sorted(range(len(values)), key=lambda k: values[k])
    sign = 1
    odd = [k for k in range(len(values)) if degrees[k] % 2]
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            if values[odd[a]] > values[odd[b]]:
                sign = -sign
    return (tuple(values[k] for k in order),
            Permutation(k + 1 for k in order), sign)


# ---------------------------------------------------------------------------
# Barratt-Eccles operad


def operad_compose_perm(sigma, taus):
    """gamma(sigma; tau_1..tau_s) = sigma<j_1..j_s> o (tau_1 + ... + tau_s)."""
    if sigma.size != len(taus):
        raise ValueError("arity mismatch")
    sizes = [t.size for t in taus]
    total = Permutation(())
    for t in taus:
        total = total.direct_sum(t)
    return block_permutation(sigma, sizes) * total


class BarrattEcclesChain:
    """
    Formal combination of (p+1)-tuples of permutations of {1..arity}.
    terms: dict tuple(Permutation) -> coefficient.
    """

    def __init__(self, arity, degree, terms=None):
        self.arity = arity
        self.degree = degree
        self.terms = {}
        for k, v in (terms or {}).items():
            assert len(k) == degree + 1, (k, degree)
            assert all(s.size == arity for s in k)
            if v:
                self.terms[k] = v

    @classmethod
    def simplex(cls, perms, coeff=1):
        perms = tuple(perms)
        return cls(perms[0].size, len(perms) - 1, {perms: coeff})

    @classmethod
    def identity(cls, arity=1):
        return cls.simplex([Permutation.identity(arity)])

    def __add__(self, other):
        if other == 0:
            return self
        assert (self.arity, self.degree) == (other.arity, other.degree)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return BarrattEcclesChain(self.arity, self.degree, t)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return BarrattEcclesChain(self.arity, self.degree,
                                  {k: c * v for k, v in self.terms.items()})

    def reduce(self, ring):
        return BarrattEcclesChain(self.arity, self.degree,
                                  {k: ring.normalize(v)
                                   for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, BarrattEcclesChain):
            return NotImplemented
        return (self.arity, self.degree) == (other.arity, other.degree) and \
            self.terms == other.terms

    def __repr__(self):
        items = sorted(self.terms.items(), key=lambda kv: [p.images for p in kv[0]])
        return "BE(%d,%d: %s)" % (self.arity, self.degree, ", ".join(
            "%s*%s" % (v, [p.images for p in k]) for k, v in items))

    def is_zero(self):
        return not self.terms

    def face(self, i):
        t = {}
        for k, v in self.terms.items():
            k2 = k[:i] + k[i + 1:]
            t[k2] = t.get(k2, 0) + v
        return BarrattEcclesChain(self.arity, self.degree - 1, t)

    def degeneracy(self, i):
        return BarrattEcclesChain(self.arity, self.degree + 1,
                                  {k[:i + 1] + k[i:]: v
                                   for k, v in self.terms.items()})

    def boundary(self):
        if self.degree == 0:
            return BarrattEcclesChain(self.arity, -1)
        out = BarrattEcclesChain(self.arity, self.degree - 1)
        for i in range(self.degree + 1):
            f = self.face(i)
            out = out + (f if i % 2 == 0 else -f)
        return out

    def act(self, rho):
        """Left action of a permutation: sigma_j -> rho * sigma_j."""
        return BarrattEcclesChain(self.arity, self.degree,
                                  {tuple(rho * s for s in k): v
                                   for k, v in self.terms.items()})

    def act_right(self, rho):
        return BarrattEcclesChain(self.arity, self.degree,
                                  {tuple(s * rho for s in k): v
                                   for k, v in self.terms.items()})

    def augmentation(self):
        if self.degree != 0:
            return 0
        return sum(self.terms.values())


def shuffles(r, s):
    """
    (r, s)-shuffles as (mu, nu, sign): disjoint increasing tuples with
    mu + nu = {0..r+s-1}, sign of the permutation listing mu then nu.
    """
    from itertools import combinations
    out = []
    for mu in combinations(range(r + s), r):
        ms = set(mu)
        nu = tuple(x for x in range(r + s) if x not in ms)
        inv = sum(1 for a in mu for b in nu if a > b)
        out.append((mu, nu, -1 if inv % 2 else 1))
    return out


def apply_degeneracies(tup, idx):
    """s_{idx[-1]} o ... o s_{idx[0]} applied to a simplex given as a tuple."""
    tup = tuple(tup)
    for i in idx:
        tup = tup[:i + 1] + tup[i:]
    return tup


def shuffle_simplices(a, b):
    """
    Eilenberg-Zilber shuffle of two simplices (tuples of vertices) of
    degrees r and s; returns a list of (sign, tuple of pairs).
    """
    r, s = len(a) - 1, len(b) - 1
    out = []
    for mu, nu, sign in shuffles(r, s):
        aa = apply_degeneracies(a, nu)
        bb = apply_degeneracies(b, mu)
        out.append((sign, tuple(zip(aa, bb))))
    return out


def _shuffle_many(simplices):
    """Iterated shuffle of several simplices, as (sign, tuple of tuples)."""
    acc = [(1, tuple((x,) for x in simplices[0]))]
    for nxt in simplices[1:]:
        new = []
        for sgn, tup in acc:
            for s2, pairs in shuffle_simplices(tup, nxt):
                new.append((sgn * s2, tuple(p[0] + (p[1],) for p in pairs)))
        acc = new
    return acc


def be_operad_compose(e, fs):
    """
    gamma(e; f_1..f_s): shuffle the simplices of e, f_1..f_s into a simplex
    of the product of nerves, then compose object-wise.
    """
    if e.arity != len(fs):
        raise ValueError("arity mismatch: %d vs %d" % (e.arity, len(fs)))
    arity = sum(f.arity for f in fs)
    degree = e.degree + sum(f.degree for f in fs)
    out = {}
    for combo in product(e.terms.items(), *[f.terms.items() for f in fs]):
        coeff = 1
        simplices = []
        for k, v in combo:
            coeff *= v
            simplices.append(k)
        for sgn, tup in _shuffle_many(simplices):
            key = tuple(operad_compose_perm(t[0], list(t[1:])) for t in tup)
            out[key] = out.get(key, 0) + sgn * coeff
    return BarrattEcclesChain(arity, degree, out)


def be_basis(n, p):
    perms = all_permutations(n)
    return [tuple(t) for t in product(perms, repeat=p + 1)]


def be_complex(n, max_degree, ring):
    """E_n truncated to degrees 0..max_degree (top differential kept)."""
    bases = {p: be_basis(n, p) for p in range(max_degree + 1)}
    index = {p: {k: i for i, k in enumerate(b)} for p, b in bases.items()}
    ranks = {p: len(b) for p, b in bases.items()}
    diffs = {}
    for p in range(1, max_degree + 1):
        cols = []
        for k in bases[p]:
            col = {}
            for i in range(p + 1):
                j = index[p - 1][k[:i] + k[i + 1:]]
                col[j] = col.get(j, 0) + (-1 if i % 2 else 1)
            cols.append({a: b for a, b in col.items() if b})
        diffs[p] = Mat(ranks[p - 1], ranks[p], cols)
    return ChainComplex(ring, ranks, diffs, labels=bases)


def be_rank(n, p):
    return factorial(n) ** (p + 1)


def augmentation_map(n, max_degree, ring):
    """E_n -> C_n = k in degree 0 as a ChainMap."""
    from .chain_core import ChainMap
    E = be_complex(n, max_degree, ring)
    Cn = ChainComplex(ring, {0: 1})
    F = Mat(1, E.rank(0), [{0: 1} for _ in range(E.rank(0))])
    return ChainMap(E, Cn, {0: F})


def cup_i_element(i, ring=None):
    """
    e_i in E_2 with d(e_i) = (1 + T) e_{i-1} exactly in unnormalized chains:
    the alternating tuple (id, T, id, ...) plus a correction supported on
    degenerate tuples, found by solving over the ring (default F_2).
    """
    from .chain_core import F2, kernel
    ring = ring or F2
    e = Permutation.identity(2)
    t = Permutation((2, 1))
    prev = BarrattEcclesChain.simplex([e])
    for k in range(1, i + 1):
        alt = BarrattEcclesChain.simplex([e if j % 2 == 0 else t
                                          for j in range(k + 1)])
        target = (prev + prev.act(t)).reduce(ring)
        resid = (target - alt.boundary()).reduce(ring)
        if not resid.is_zero():
            corr = _solve_degenerate(k, resid, ring)
            alt = (alt + corr).reduce(ring)
        assert (alt.boundary() - target).reduce(ring).is_zero()
        prev = alt
    return prev.reduce(ring)


def _solve_degenerate(k, resid, ring):
    """Find c supported on degenerate k-simplices of E_2 with d c = resid."""
    from .chain_core import solve
    basis = [b for b in be_basis(2, k) if any(b[j] == b[j + 1] for j in range(k))]
    rows = be_basis(2, k - 1)
    rindex = {b: j for j, b in enumerate(rows)}
    cols = []
    for b in basis:
        col = {}
        for i in range(k + 1):
            j = rindex[b[:i] + b[i + 1:]]
            col[j] = col.get(j, 0) + (-1 if i % 2 else 1)
        cols.append(col)
    A = Mat(len(rows), len(basis), cols).reduce(ring)
    rhs = Mat(len(rows), 1, [{rindex[kk]: v for kk, v in resid.terms.items()}])
    x = solve(A, rhs, ring)
    if x is None:
        raise ArithmeticError("no degenerate correction exists")
    return BarrattEcclesChain(2, k, {basis[j]: v for j, v in x.cols[0].items()})

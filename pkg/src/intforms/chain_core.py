"""
Exact linear algebra over ZZ, QQ and ZZ/m, and homologically graded
chain complexes of finitely generated free modules.

Matrices are sparse and stored column-major: ``Mat.cols[j]`` is a dict
``{row: value}`` holding the nonzero entries of column ``j``.  Integer
entries are python ints, rational entries are ``Fraction``.

Conventions: d_q : C_q -> C_{q-1}.  Homology is reported by invariant
factors.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
import heapq


# ---------------------------------------------------------------------------
# ground rings


@dataclass(frozen=True)
class GroundRing:
    kind: str  # "Z", "Q" or "Zmod"
    modulus: int = 0

    def __post_init__(self):
        assert self.kind in ("Z", "Q", "Zmod"), self.kind
        if self.kind == "Zmod":
            if self.modulus < 2:
                raise ValueError("ZZ/m needs m >= 2")

    @staticmethod
    def parse(text):
        """Accepts Z, Q, F2, Zmod:m (also Z/m)."""
        t = str(text).strip()
        if t in ("Z", "ZZ"):
            return ZZ
        if t in ("Q", "QQ"):
            return QQ
        if t.startswith("F") and t[1:].isdigit():
            return Zmod(int(t[1:]))
        for prefix in ("Zmod:", "Z/", "Zmod"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return Zmod(int(t[len(prefix):]))
        raise ValueError("unknown ring %r" % text)

    @property
    def name(self):
        if self.kind == "Zmod":
            return "Zmod:%d" % self.modulus
        return self.kind

    def __str__(self):
        return self.name

    @property
    def is_field(self):
        if self.kind == "Q":
            return True
        if self.kind == "Z":
            return False
        return _is_prime(self.modulus)

    @property
    def is_finite(self):
        return self.kind == "Zmod"

    def normalize(self, x):
        if self.kind == "Zmod":
            return int(x) % self.modulus
        if self.kind == "Q":
            if type(x) is int:
                return x
            x = Fraction(x)
            return int(x) if x.denominator == 1 else x
        if isinstance(x, Fraction):
            assert x.denominator == 1, x
            return int(x)
        return x

    def is_unit(self, x):
        if self.kind == "Q":
            return x != 0
        if self.kind == "Z":
            return x in (1, -1)
        return gcd(int(x), self.modulus) == 1

    def inverse(self, x):
        if self.kind == "Q":
            return self.normalize(1 / Fraction(x))
        if self.kind == "Z":
            assert x in (1, -1)
            return x
        return pow(int(x), -1, self.modulus)

    def elements(self):
        assert self.kind == "Zmod"
        return range(self.modulus)


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


ZZ = GroundRing("Z")
QQ = GroundRing("Q")


def Zmod(m):
    return GroundRing("Zmod", m)


F2 = Zmod(2)


# ---------------------------------------------------------------------------
# sparse matrices


class Mat:
    """Sparse column-major matrix.  Treat instances as immutable."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows, ncols, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        assert len(cols) == ncols
        self.cols = cols

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{j: 1} for j in range(n)])

    @classmethod
    def from_dense(cls, rows, ncols=None):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, r in enumerate(rows):
            assert len(r) == ncols
            for j, v in enumerate(r):
                if v:
                    cols[j][i] = v
        return cls(nrows, ncols, cols)

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        cols = [{} for _ in range(ncols)]
        for (i, j), v in entries.items():
            if v:
                cols[j][i] = cols[j].get(i, 0) + v
        return cls(nrows, ncols, cols)

    @classmethod
    def from_columns(cls, nrows, columns):
        return cls(nrows, len(columns), [dict(c) for c in columns])

    def to_dense(self):
        A = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                A[i][j] = v
        return A

    def entries(self):
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                yield (i, j), v

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, 0)

    @property
    def nnz(self):
        return sum(len(c) for c in self.cols)

    def __repr__(self):
        return "Mat(%d, %d, nnz=%d)" % (self.nrows, self.ncols, self.nnz)

    def __str__(self):
        return "\n".join(" ".join("%3s" % (v if v else ".") for v in row)
                         for row in self.to_dense())

    def __eq__(self, other):
        if not isinstance(other, Mat) or self.shape != other.shape:
            return False
        for a, b in zip(self.cols, other.cols):
            a = {i: v for i, v in a.items() if v}
            b = {i: v for i, v in b.items() if v}
            if a != b:
                return False
        return True

    __hash__ = None

    def is_zero(self):
        return all(not v for c in self.cols for v in c.values())

    def reduce(self, ring):
        cols = []
        for c in self.cols:
            out = {}
            for i, v in c.items():
                v = ring.normalize(v)
                if v:
                    out[i] = v
            cols.append(out)
        return Mat(self.nrows, self.ncols, cols)

    def __matmul__(self, other):
        assert self.ncols == other.nrows, (self.shape, other.shape)
        A = self.cols
        out = []
        for bcol in other.cols:
            acc = {}
            for k, b in bcol.items():
                for i, a in A[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            out.append({i: v for i, v in acc.items() if v})
        return Mat(self.nrows, other.ncols, out)

    def apply(self, vec):
        """Apply to a sparse vector given as a dict."""
        acc = {}
        for k, b in vec.items():
            for i, a in self.cols[k].items():
                acc[i] = acc.get(i, 0) + a * b
        return {i: v for i, v in acc.items() if v}

    def __add__(self, other):
        assert self.shape == other.shape, (self.shape, other.shape)
        out = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, v in b.items():
                w = c.get(i, 0) + v
                if w:
                    c[i] = w
                else:
                    c.pop(i, None)
            out.append(c)
        return Mat(self.nrows, self.ncols, out)

    def __neg__(self):
        return Mat(self.nrows, self.ncols,
                   [{i: -v for i, v in c.items()} for c in self.cols])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        if not s:
            return Mat.zeros(self.nrows, self.ncols)
        return Mat(self.nrows, self.ncols,
                   [{i: s * v for i, v in c.items()} for c in self.cols])

    def transpose(self):
        cols = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return Mat(self.ncols, self.nrows, cols)

    T = property(transpose)

    def select_cols(self, idx):
        return Mat(self.nrows, len(idx), [dict(self.cols[j]) for j in idx])

    def select_rows(self, idx):
        pos = {i: t for t, i in enumerate(idx)}
        cols = [{pos[i]: v for i, v in c.items() if i in pos}
                for c in self.cols]
        return Mat(len(idx), self.ncols, cols)

    def embed(self, nrows, ncols, row_off, col_off):
        """Place self as a block inside a larger zero matrix."""
        cols = [{} for _ in range(ncols)]
        for j, c in enumerate(self.cols):
            cols[col_off + j] = {row_off + i: v for i, v in c.items()}
        return Mat(nrows, ncols, cols)

    @staticmethod
    def hstack(mats, nrows=None):
        if not mats:
            return Mat(nrows or 0, 0)
        nrows = mats[0].nrows
        cols = []
        for M in mats:
            assert M.nrows == nrows
            cols.extend(dict(c) for c in M.cols)
        return Mat(nrows, len(cols), cols)

    @staticmethod
    def vstack(mats, ncols=None):
        if not mats:
            return Mat(0, ncols or 0)
        ncols = mats[0].ncols
        cols = [{} for _ in range(ncols)]
        off = 0
        for M in mats:
            assert M.ncols == ncols
            for j, c in enumerate(M.cols):
                for i, v in c.items():
                    cols[j][off + i] = v
            off += M.nrows
        return Mat(off, ncols, cols)

    @staticmethod
    def block_diag(mats):
        nrows = sum(M.nrows for M in mats)
        cols = []
        off = 0
        for M in mats:
            for c in M.cols:
                cols.append({off + i: v for i, v in c.items()})
            off += M.nrows
        return Mat(nrows, len(cols), cols)

    def kron(self, other):
        """Kronecker product; basis pair (i, k) sits at i*other.n + k."""
        r2, c2 = other.nrows, other.ncols
        cols = []
        for ca in self.cols:
            for cb in other.cols:
                cols.append({i * r2 + k: a * b
                             for i, a in ca.items() for k, b in cb.items()})
        return Mat(self.nrows * r2, self.ncols * c2, cols)


def _mat_shape_check(M, nrows, ncols):
    assert M.shape == (nrows, ncols), (M.shape, (nrows, ncols))


# ---------------------------------------------------------------------------
# Smith normal form (dense, with transforms)


def _ident(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_dense_int(A, want_transforms=True):
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    U = _ident(m) if want_transforms else None
    V = _ident(n) if want_transforms else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        rs, rd = D[src], D[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += c * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += c * us[k]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for r in D:
            if r[src]:
                r[dst] += c * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            moved = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        swap_rows(t, i)
                        moved = True
                        break
            if moved:
                continue
            p = D[t][t]
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            p = D[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def _unit_normalizer(d, m):
    """Unit u mod m with u * gcd(d, m) == d (mod m)."""
    g = gcd(d, m)
    if g == m:
        return 1
    target = (d // g) % (m // g)
    u = target
    while gcd(u, m) != 1:
        u += m // g
    return u


def smith_normal_form(M, ring=None):
    """
    Return (U, D, V) with U*M*V == D over ring, D diagonal with
    d_1 | d_2 | ...  Over a field the nonzero diagonal entries are 1.

    >>> U, D, V = smith_normal_form(Mat.from_dense([[2, 0], [0, 3]]))
    >>> D.to_dense()
    [[1, 0], [0, 6]]
    """
    ring = ring or ZZ
    if isinstance(M, Mat):
        A = M.to_dense()
        m, n = M.shape
    else:
        A = [list(r) for r in M]
        m = len(A)
        n = len(A[0]) if m else 0
    if m == 0 or n == 0:
        return Mat.identity(m), Mat.zeros(m, n), Mat.identity(n)
    if ring.kind == "Z":
        U, D, V = _snf_dense_int(A)
    elif ring.kind == "Zmod" and not ring.is_field:
        mod = ring.modulus
        U, D, V = _snf_dense_int([[x % mod for x in r] for r in A])
        for t in range(min(m, n)):
            d = D[t][t] % mod
            if d:
                u = pow(_unit_normalizer(d, mod), -1, mod)
                D[t] = [x * u for x in D[t]]
                U[t] = [x * u for x in U[t]]
        U = [[ring.normalize(x) for x in r] for r in U]
        V = [[ring.normalize(x) for x in r] for r in V]
        D = [[ring.normalize(x) for x in r] for r in D]
        order = sorted(range(min(m, n)),
                       key=lambda t: (D[t][t] == 0, D[t][t]))
        U, D, V = _permute_diag(U, D, V, order, ring)
    else:
        U, D, V = _snf_dense_field(A, ring)
    return (Mat.from_dense(U, m), Mat.from_dense(D, n),
            Mat.from_dense(V, n))


def _permute_diag(U, D, V, order, ring):
    m, n = len(U), len(V)
    k = len(order)
    rperm = order + list(range(k, m))
    cperm = order + list(range(k, n))
    U2 = [U[i] for i in rperm]
    V2 = [[r[j] for j in cperm] for r in V]
    D2 = [[D[rperm[i]][cperm[j]] for j in range(n)] for i in range(m)]
    return U2, D2, V2


def _snf_dense_field(A, ring):
    m, n = len(A), len(A[0])
    D = [[ring.normalize(x) for x in r] for r in A]
    U = _ident(m)
    V = _ident(n)
    t = 0
    for t in range(min(m, n)):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        D[t], D[i] = D[i], D[t]
        U[t], U[i] = U[i], U[t]
        for r in D:
            r[t], r[j] = r[j], r[t]
        for r in V:
            r[t], r[j] = r[j], r[t]
        inv = ring.inverse(D[t][t])
        D[t] = [ring.normalize(x * inv) for x in D[t]]
        U[t] = [ring.normalize(x * inv) for x in U[t]]
        for i in range(m):
            if i != t and D[i][t]:
                c = D[i][t]
                D[i] = [ring.normalize(a - c * b) for a, b in zip(D[i], D[t])]
                U[i] = [ring.normalize(a - c * b) for a, b in zip(U[i], U[t])]
        for j in range(t + 1, n):
            if D[t][j]:
                c = D[t][j]
                for r in V:
                    r[j] = ring.normalize(r[j] - c * r[t])
                D[t][j] = 0
    return U, D, V


# ---------------------------------------------------------------------------
# sparse elimination: rank and invariant factors


class _RowStore:
    """Row-major sparse store with a column index, used for pivoting."""

    def __init__(self, M, ring):
        self.ring = ring
        self.rows = {}
        self.colrows = {}
        for j, c in enumerate(M.cols):
            for i, v in c.items():
                v = ring.normalize(v)
                if v:
                    self.rows.setdefault(i, {})[j] = v
                    self.colrows.setdefault(j, set()).add(i)

    def eliminate(self, i, j, keep_row=False):
        """Clear column j from every other row using the unit pivot (i, j)."""
        ring = self.ring
        prow = self.rows[i]
        inv = ring.inverse(prow[j])
        if keep_row and inv != 1:
            prow = {c: ring.normalize(v * inv) for c, v in prow.items()}
            self.rows[i] = prow
            inv = 1
        for k in list(self.colrows[j]):
            if k == i:
                continue
            row = self.rows[k]
            f = ring.normalize(row[j] * inv)
            for c, w in prow.items():
                x = ring.normalize(row.get(c, 0) - f * w)
                if x:
                    if c not in row:
                        self.colrows.setdefault(c, set()).add(k)
                    row[c] = x
                else:
                    if c in row:
                        del row[c]
                        self.colrows[c].discard(k)
            if not row:
                del self.rows[k]
        if not keep_row:
            for c in prow:
                s = self.colrows.get(c)
                if s is not None:
                    s.discard(i)
                    if not s:
                        del self.colrows[c]
            del self.rows[i]

    def find_pivot(self, i, exclude=None):
        best = None
        ring = self.ring
        for c, v in self.rows[i].items():
            if exclude is not None and c in exclude:
                continue
            if ring.is_unit(v):
                w = len(self.colrows[c])
                if best is None or w < best[0]:
                    best = (w, c)
        return None if best is None else best[1]


def _unit_eliminate(M, ring):
    """Peel off unit pivots; return (count, remaining store)."""
    st = _RowStore(M, ring)
    count = 0
    while True:
        progress = False
        heap = [(len(r), i) for i, r in st.rows.items()]
        heapq.heapify(heap)
        while heap:
            ln, i = heapq.heappop(heap)
            row = st.rows.get(i)
            if row is None:
                continue
            if len(row) != ln:
                heapq.heappush(heap, (len(row), i))
                continue
            c = st.find_pivot(i)
            if c is None:
                continue
            st.eliminate(i, c)
            count += 1
            progress = True
        if not progress:
            return count, st


def _core_dense(st):
    rows = sorted(st.rows)
    cols = sorted(st.colrows)
    cpos = {c: t for t, c in enumerate(cols)}
    A = []
    for i in rows:
        r = [0] * len(cols)
        for c, v in st.rows[i].items():
            r[cpos[c]] = v
        A.append(r)
    return A


def invariant_factors(M, ring=None):
    """
    Nonzero diagonal of the Smith form of M over ring, as a sorted list.
    Over a field this is [1] * rank.  Over ZZ/m the factors are the
    divisors gcd(d, m) that are nonzero mod m.
    """
    ring = ring or ZZ
    count, st = _unit_eliminate(M, ring)
    if not st.rows:
        return [1] * count
    A = _core_dense(st)
    if ring.is_field:
        # cannot happen: every nonzero entry is a unit
        raise AssertionError("field elimination left a core")
    if ring.kind == "Z":
        _, D, _ = _snf_dense_int(A, want_transforms=False)
        core = [abs(D[t][t]) for t in range(min(len(D), len(D[0])))
                if D[t][t]]
    else:
        mod = ring.modulus
        _, D, _ = _snf_dense_int([[x % mod for x in r] for r in A],
                                 want_transforms=False)
        core = []
        for t in range(min(len(D), len(D[0]))):
            g = gcd(D[t][t], mod)
            if D[t][t] and g != mod:
                core.append(g)
    return [1] * count + sorted(core)


def rank(M, ring=None):
    ring = ring or ZZ
    if ring.kind == "Zmod" and not ring.is_field:
        raise ValueError("rank is not defined over %s" % ring)
    if ring.kind == "Z":
        ring = QQ
    count, st = _unit_eliminate(M, ring)
    assert not st.rows
    return count


# ---------------------------------------------------------------------------
# kernels and coordinates


def _lower_tri_inverse(H, ring):
    """Inverse of a square lower-triangular matrix with unit diagonal."""
    k = len(H)
    inv = [[0] * k for _ in range(k)]
    for c in range(k):
        inv[c][c] = ring.inverse(H[c][c])
        for r in range(c + 1, k):
            s = 0
            for t in range(c, r):
                if H[r][t] and inv[t][c]:
                    s += H[r][t] * inv[t][c]
            if s:
                inv[r][c] = ring.normalize(-s * ring.inverse(H[r][r]))
    return inv


def _column_echelon(M, ring):
    """
    Unimodular column reduction of M.  Returns (pivots, kernel) where
    pivots is a list of (row, mcol, vcol) in processing order and kernel
    is the list of transform columns spanning ker M.
    """
    n = M.ncols
    mcols = {j: {i: ring.normalize(v) for i, v in M.cols[j].items()
                 if ring.normalize(v)} for j in range(n)}
    vcols = {j: {j: 1} for j in range(n)}
    rowcols = {}
    for j, c in mcols.items():
        for i in c:
            rowcols.setdefault(i, set()).add(j)

    def axpy(dst, src, f):  # column dst -= f * column src
        md, ms = mcols[dst], mcols[src]
        for i, v in ms.items():
            x = ring.normalize(md.get(i, 0) - f * v)
            if x:
                if i not in md:
                    rowcols.setdefault(i, set()).add(dst)
                md[i] = x
            elif i in md:
                del md[i]
                rowcols[i].discard(dst)
        vd, vs = vcols[dst], vcols[src]
        for i, v in vs.items():
            x = ring.normalize(vd.get(i, 0) - f * v)
            if x:
                vd[i] = x
            else:
                vd.pop(i, None)

    pivots = []
    for r in sorted(rowcols):
        while True:
            S = [j for j in rowcols.get(r, ()) if j in mcols]
            if len(S) <= 1:
                break
            units = [j for j in S if ring.is_unit(mcols[j][r])]
            if units:
                c = min(units, key=lambda j: len(mcols[j]) + len(vcols[j]))
                inv = ring.inverse(mcols[c][r])
                for j in S:
                    if j != c:
                        axpy(j, c, ring.normalize(mcols[j][r] * inv))
                continue
            # euclidean step (ZZ only)
            c = min(S, key=lambda j: (abs(mcols[j][r]),
                                      len(mcols[j]) + len(vcols[j])))
            p = mcols[c][r]
            for j in S:
                if j != c:
                    axpy(j, c, mcols[j][r] // p)
        S = [j for j in rowcols.get(r, ()) if j in mcols]
        if S:
            c = S[0]
            pivots.append((r, mcols.pop(c), vcols.pop(c)))
            for i in pivots[-1][1]:
                rowcols[i].discard(c)
    kernel = [vcols[j] for j in sorted(vcols)]
    return pivots, kernel


def left_inverse(K, ring):
    """
    P with P @ K == I for a matrix K whose columns span a saturated
    sublattice (over a field: any independent columns).
    """
    n, k = K.shape
    if k == 0:
        return Mat(0, n)
    pivots, _ = _column_echelon(K.transpose(), ring)
    if len(pivots) != k:
        raise ValueError("columns are dependent")
    order = [r for r, _, _ in pivots]
    assert order == list(range(k)), order
    H = [[ring.normalize(mc.get(r, 0)) for (_, mc, _) in pivots]
         for r in range(k)]
    for t in range(k):
        if not ring.is_unit(H[t][t]):
            raise ValueError("column span is not saturated")
    Hinv = _lower_tri_inverse(H, ring)
    Vp = Mat(n, k, [dict(vc) for (_, _, vc) in pivots])
    # K^T Vp = H  =>  K^T (Vp Hinv) = I  =>  P = (Vp Hinv)^T
    P = (Vp @ Mat.from_dense(Hinv)).transpose().reduce(ring)
    return P


class Subspace:
    """
    A free submodule ker(M) of R^n with a chosen basis (columns of
    ``basis``) and a coordinate map valid on elements of the submodule.
    """

    def __init__(self, ambient_dim, basis, free_cols, pivot_exprs, P):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._free = free_cols
        self._P = P

    @property
    def dim(self):
        return self.basis.ncols

    def coordinates(self, Y):
        """Coordinates of the columns of Y (assumed inside the span)."""
        Z = Y.select_rows(self._free)
        if self._P is not None:
            Z = self._P @ Z
        return Z

    def contains(self, Y, ring):
        return (self.basis @ self.coordinates(Y) - Y).reduce(ring).is_zero()


def kernel(M, ring, ambient_dim=None):
    """
    Kernel of M as a Subspace.  Unit pivots give a reduced echelon form
    whose free coordinates are the basis coordinates; any leftover
    non-unit block (only over ZZ) is handled by a unimodular column
    reduction plus a left inverse.
    """
    n = M.ncols if ambient_dim is None else ambient_dim
    st = _RowStore(M, ring)
    pivot_of_row = {}
    done = set()
    while True:
        order = sorted((len(r), i) for i, r in st.rows.items()
                       if i not in done)
        progress = False
        for _, i in order:
            if i not in st.rows or i in done:
                continue
            c = st.find_pivot(i, exclude=None)
            if c is None:
                continue
            # pivot columns of earlier rows are already cleared here
            st.eliminate(i, c, keep_row=True)
            pivot_of_row[i] = c
            done.add(i)
            progress = True
        if not progress:
            break
    pivcols = set(pivot_of_row.values())
    free = [j for j in range(n) if j not in pivcols]
    fpos = {j: t for t, j in enumerate(free)}
    leftover = [i for i in st.rows if i not in done]
    # pivot row i reads: x_c + sum_{f free} a_f x_f = 0
    expr = {}
    for i, c in pivot_of_row.items():
        row = st.rows[i]
        assert row[c] == 1
        expr[c] = {fpos[f]: -v for f, v in row.items() if f != c}
    if leftover:
        R = Mat(len(leftover), len(free))
        for t, i in enumerate(leftover):
            for f, v in st.rows[i].items():
                assert f in fpos
                R.cols[fpos[f]][t] = v
        _, kern = _column_echelon(R, ring)
        KR = Mat(len(free), len(kern), [dict(v) for v in kern])
        P = left_inverse(KR, ring)
    else:
        KR = Mat.identity(len(free))
        P = None
    # assemble ambient basis: x_free = KR c, x_piv = expr(x_free)
    cols = []
    for kc in KR.cols:
        v = {free[t]: x for t, x in kc.items()}
        for c, e in expr.items():
            s = 0
            for t, a in e.items():
                x = kc.get(t)
                if x:
                    s += a * x
            s = ring.normalize(s)
            if s:
                v[c] = s
        cols.append(v)
    basis = Mat(n, len(cols), cols)
    return Subspace(n, basis, free, expr, P)


# ---------------------------------------------------------------------------
# homology groups


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        for a, b in zip(t, t[1:]):
            assert b % a == 0, t
        assert all(x >= 2 for x in t), t

    @property
    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other):
        # direct sum, re-normalised into invariant factors
        facs = list(self.torsion) + list(other.torsion)
        return HomologyGroup(self.free_rank + other.free_rank,
                             _normalize_factors(facs))

    def describe(self, ring=None):
        parts = []
        base = "Z" if ring is None or ring.kind == "Z" else \
            ("Q" if ring.kind == "Q" else "Z/%d" % ring.modulus)
        if self.free_rank:
            parts.append(base if self.free_rank == 1
                         else "%s^%d" % (base, self.free_rank))
        parts.extend("Z/%d" % t for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.describe()


def _normalize_factors(facs):
    """Invariant factors of a direct sum of cyclic groups Z/f."""
    primes = {}
    for f in facs:
        x = f
        p = 2
        while p * p <= x:
            while x % p == 0:
                primes.setdefault(p, {})
                x //= p
            p += 1
        if x > 1:
            primes.setdefault(x, {})
    powers = {p: [] for p in primes}
    for f in facs:
        for p in primes:
            e = 0
            while f % p == 0:
                f //= p
                e += 1
            if e:
                powers[p].append(p ** e)
    n = max((len(v) for v in powers.values()), default=0)
    out = [1] * n
    for p, v in powers.items():
        v.sort()
        for t, x in enumerate(v):
            out[n - len(v) + t] *= x
    return tuple(x for x in out if x > 1)


# ---------------------------------------------------------------------------
# chain complexes


class ChainComplex:
    """
    Bounded chain complex of free modules.  ``ranks`` maps degree to rank,
    ``diffs[q]`` is the matrix of d_q : C_q -> C_{q-1}.
    """

    def __init__(self, ring, ranks, diffs=None, labels=None, check=True):
        self.ring = ring
        self.ranks = {q: r for q, r in ranks.items() if r}
        self.diffs = {}
        for q, D in (diffs or {}).items():
            _mat_shape_check(D, self.rank(q - 1), self.rank(q))
            D = D.reduce(ring)
            if D.nrows and D.ncols and not D.is_zero():
                self.diffs[q] = D
        self.labels = labels or {}
        if check:
            self.check()

    def rank(self, q):
        return self.ranks.get(q, 0)

    def d(self, q):
        D = self.diffs.get(q)
        if D is None:
            return Mat.zeros(self.rank(q - 1), self.rank(q))
        return D

    @property
    def degrees(self):
        return sorted(self.ranks)

    @property
    def bounds(self):
        if not self.ranks:
            return (0, -1)
        return (min(self.ranks), max(self.ranks))

    def label(self, q, i):
        lab = self.labels.get(q)
        return lab[i] if lab is not None else i

    def check(self):
        for q in self.diffs:
            if q - 1 in self.diffs:
                Z = (self.diffs[q - 1] @ self.diffs[q]).reduce(self.ring)
                if not Z.is_zero():
                    raise ValueError("d o d != 0 at degree %d" % q)

    def euler_characteristic(self):
        return sum((-1) ** (q % 2) * r for q, r in self.ranks.items())

    def homology(self, q):
        return homology(self, q)

    def homology_table(self, window=None):
        lo, hi = window if window is not None else self.bounds
        return {q: self.homology(q) for q in range(hi, lo - 1, -1)}

    def is_acyclic(self, window=None):
        return all(h.is_zero for h in self.homology_table(window).values())

    def shift(self, k):
        """(C[k])_q = C_{q-k} with the same matrices."""
        return ChainComplex(self.ring, {q + k: r for q, r in self.ranks.items()},
                            {q + k: D for q, D in self.diffs.items()},
                            {q + k: v for q, v in self.labels.items()},
                            check=False)

    def direct_sum(self, other):
        assert self.ring == other.ring
        degs = set(self.ranks) | set(other.ranks)
        ranks = {q: self.rank(q) + other.rank(q) for q in degs}
        diffs = {q: Mat.block_diag([self.d(q), other.d(q)]) for q in degs}
        return ChainComplex(self.ring, ranks, diffs, check=False)

    def __repr__(self):
        return "ChainComplex(%s, %s)" % (
            self.ring, {q: self.ranks[q] for q in sorted(self.ranks)})


def unit_complex(ring, degree=0):
    """S^q: the ring in a single degree."""
    return ChainComplex(ring, {degree: 1}, labels={degree: ["1"]})


def disk_complex(ring, degree=0):
    """D^q: the ring in degrees q and q-1 with identity differential."""
    return ChainComplex(ring, {degree: 1, degree - 1: 1},
                        {degree: Mat.identity(1)})


def homology(C, q):
    ring = C.ring
    n = C.rank(q)
    if n == 0:
        return HomologyGroup()
    dq = C.d(q)
    dq1 = C.d(q + 1)
    if ring.kind == "Zmod" and not ring.is_field:
        return _homology_composite(dq, dq1, ring)
    if ring.is_field:
        r0 = rank(dq, ring) if dq.ncols and dq.nrows else 0
        r1 = rank(dq1, ring) if dq1.ncols and dq1.nrows else 0
        return HomologyGroup(n - r0 - r1)
    r0 = rank(dq, ZZ) if dq.ncols and dq.nrows else 0
    facs = invariant_factors(dq1, ZZ) if dq1.ncols and dq1.nrows else []
    tors = tuple(f for f in facs if f > 1)
    return HomologyGroup(n - r0 - len(facs), tors)


def _homology_composite(dq, dq1, ring):
    m = ring.modulus
    n = dq.ncols
    r = dq.nrows
    # Z = {x in ZZ^n : dq x = 0 mod m}
    aug = Mat.hstack([dq, Mat.identity(r).scale(m)]) if r else Mat(0, n)
    if r:
        pivots, kern = _column_echelon(aug, ZZ)
        Zb = Mat(n + r, len(kern), [dict(v) for v in kern]).select_rows(
            list(range(n)))
    else:
        Zb = Mat.identity(n)
    gens = Mat.hstack([dq1, Mat.identity(n).scale(m)]) if dq1.ncols else \
        Mat.identity(n).scale(m)
    # coordinates of generators in the Z basis (Zb is square invertible over QQ)
    A = [[Fraction(x) for x in row] for row in Zb.to_dense()]
    G = gens.to_dense()
    coords = _solve_dense(A, G)
    U, D, V = _snf_dense_int(coords, want_transforms=False)
    facs = [abs(D[t][t]) for t in range(min(len(D), len(D[0]) if D else 0))]
    facs += [0] * (n - len(facs))
    free = sum(1 for f in facs if f == m)
    tors = tuple(sorted(f for f in facs if f not in (1, m) and f != 0))
    assert all(f != 0 for f in facs)
    return HomologyGroup(free, tors)


def _solve_dense(A, B):
    """Solve A X = B exactly for square invertible A; X must be integral."""
    n = len(A)
    k = len(B[0]) if B else 0
    M = [list(A[i]) + [Fraction(x) for x in B[i]] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    X = []
    for i in range(n):
        row = []
        for x in M[i][n:]:
            assert x.denominator == 1
            row.append(int(x))
        X.append(row)
    return X


# ---------------------------------------------------------------------------
# chain maps, tensor, cone


class ChainMap:
    def __init__(self, source, target, comps, check=True):
        assert source.ring == target.ring
        self.source = source
        self.target = target
        self.ring = source.ring
        self.comps = {}
        for q, F in comps.items():
            _mat_shape_check(F, target.rank(q), source.rank(q))
            F = F.reduce(self.ring)
            if not F.is_zero():
                self.comps[q] = F
        if check:
            self.check()

    def __getitem__(self, q):
        F = self.comps.get(q)
        if F is None:
            return Mat.zeros(self.target.rank(q), self.source.rank(q))
        return F

    def check(self):
        degs = set(self.source.ranks) | set(self.target.ranks)
        for q in degs:
            lhs = self.target.d(q) @ self[q]
            rhs = self[q - 1] @ self.source.d(q)
            if not (lhs - rhs).reduce(self.ring).is_zero():
                raise ValueError("not a chain map at degree %d" % q)

    def compose(self, other):
        """self o other."""
        assert other.target is self.target or True
        degs = set(other.source.ranks)
        return ChainMap(other.source, self.target,
                        {q: self[q] @ other[q] for q in degs}, check=False)

    @classmethod
    def identity(cls, C):
        return cls(C, C, {q: Mat.identity(r) for q, r in C.ranks.items()},
                   check=False)

    @classmethod
    def zero(cls, C, D):
        return cls(C, D, {}, check=False)


def tensor(C, D):
    """
    (C (x) D)_n = sum_{a+b=n} C_a (x) D_b, blocks ordered by a ascending,
    pair (i, j) at offset i*rank(D_b) + j.  d = dC (x) 1 + (-1)^a 1 (x) dD.
    """
    if C.ring != D.ring:
        raise ValueError("ring mismatch")
    ring = C.ring
    blocks = {}
    for a in C.degrees:
        for b in D.degrees:
            blocks.setdefault(a + b, []).append((a, b))
    offsets = {}
    ranks = {}
    labels = {}
    for n, bl in blocks.items():
        off = 0
        labs = []
        for a, b in bl:
            offsets[(a, b)] = off
            off += C.rank(a) * D.rank(b)
            labs.extend((C.label(a, i), D.label(b, j))
                        for i in range(C.rank(a)) for j in range(D.rank(b)))
        ranks[n] = off
        labels[n] = labs
    diffs = {}
    for n, bl in blocks.items():
        src = ranks[n]
        tgt = ranks.get(n - 1, 0)
        if not tgt:
            continue
        cols = [{} for _ in range(src)]
        for a, b in bl:
            off = offsets[(a, b)]
            rb = D.rank(b)
            dC = C.d(a)
            dD = D.d(b)
            sign = -1 if a % 2 else 1
            for i in range(C.rank(a)):
                for j in range(rb):
                    col = cols[off + i * rb + j]
                    if (a - 1, b) in offsets:
                        o2 = offsets[(a - 1, b)]
                        for k, v in dC.cols[i].items():
                            col[o2 + k * rb + j] = col.get(o2 + k * rb + j, 0) + v
                    if (a, b - 1) in offsets:
                        o2 = offsets[(a, b - 1)]
                        rb1 = D.rank(b - 1)
                        for k, v in dD.cols[j].items():
                            key = o2 + i * rb1 + k
                            col[key] = col.get(key, 0) + sign * v
        diffs[n] = Mat(tgt, src, cols)
    return ChainComplex(ring, ranks, diffs, labels)


def tensor_layout(A, C):
    """Offsets of the (a, b) blocks inside tensor(A, C), per total degree."""
    offsets = {}
    for a in A.degrees:
        for b in C.degrees:
            offsets.setdefault(a + b, [])
    out = {}
    for n in offsets:
        off = 0
        for a in A.degrees:
            b = n - a
            if b in C.ranks:
                out[(a, b)] = off
                off += A.rank(a) * C.rank(b)
    return out


def tensor_operator(A1, C1, A2, C2, opA, opC):
    """Degree-zero operator opA (x) opC between tensor(A1,C1) and tensor(A2,C2)."""
    lay1, lay2 = tensor_layout(A1, C1), tensor_layout(A2, C2)
    src_rank, tgt_rank = {}, {}
    for (a, b), off in lay1.items():
        src_rank[a + b] = max(src_rank.get(a + b, 0), off + A1.rank(a) * C1.rank(b))
    for (a, b), off in lay2.items():
        tgt_rank[a + b] = max(tgt_rank.get(a + b, 0), off + A2.rank(a) * C2.rank(b))
    out = {}
    for n, sr in src_rank.items():
        cols = [{} for _ in range(sr)]
        for a in A1.degrees:
            b = n - a
            if (a, b) not in lay1 or (a, b) not in lay2:
                continue
            K = opA[a].kron(opC[b])
            o1, o2 = lay1[(a, b)], lay2[(a, b)]
            for c, col in enumerate(K.cols):
                for r, v in col.items():
                    cols[o1 + c][o2 + r] = v
        out[n] = Mat(tgt_rank.get(n, 0), sr, cols)
    return out


def cone_and_hofib(f):
    """
    cone(f)_n = C_{n-1} + D_n, d(c, d) = (-dc, f(c) + dd);
    hofib(f) = cone(f) shifted down by one degree.
    """
    C, D = f.source, f.target
    ring = f.ring
    degs = {q + 1 for q in C.ranks} | set(D.ranks)
    ranks = {n: C.rank(n - 1) + D.rank(n) for n in degs}
    diffs = {}
    for n in degs:
        top = Mat.hstack([-C.d(n - 1), Mat.zeros(C.rank(n - 2), D.rank(n))]) \
            if C.rank(n - 2) else Mat.zeros(0, C.rank(n - 1) + D.rank(n))
        bot = Mat.hstack([f[n - 1], D.d(n)])
        diffs[n] = Mat.vstack([top, bot])
    cone = ChainComplex(ring, ranks, diffs)
    return cone, cone.shift(-1)


def is_quasi_iso(f, window=None):
    """
    True iff the cone of f has vanishing homology; with a window (lo, hi)
    only cone degrees lo..hi+1 are inspected, which certifies that H_q(f)
    is an isomorphism for lo <= q <= hi.
    """
    cone, _ = cone_and_hofib(f)
    if window is None:
        lo, hi = cone.bounds
        if not f.source.ranks and not f.target.ranks:
            return True, {}
        window = (lo, hi - 1)
    lo, hi = window
    report = {q: cone.homology(q) for q in range(lo, hi + 2)}
    return all(h.is_zero for h in report.values()), report


def solve(A, B, ring):
    """
    Some X with A @ X == B over ring (columns solved independently), or
    None if no solution exists.  Uses a unimodular column reduction.
    """
    pivots, _ = _column_echelon(A, ring)
    out = []
    for bcol in B.cols:
        res = {i: ring.normalize(v) for i, v in bcol.items()
               if ring.normalize(v)}
        y = []
        for r, mc, vc in pivots:
            x = res.get(r, 0)
            if not x:
                continue
            p = mc[r]
            if ring.is_unit(p):
                c = ring.normalize(x * ring.inverse(p))
            elif ring.kind == "Z" and x % p == 0:
                c = x // p
            else:
                return None
            y.append((c, mc, vc))
            for i, v in mc.items():
                w = ring.normalize(res.get(i, 0) - c * v)
                if w:
                    res[i] = w
                else:
                    res.pop(i, None)
        if res:
            return None
        sol = {}
        for c, _, vc in y:
            for i, v in vc.items():
                sol[i] = ring.normalize(sol.get(i, 0) + c * v)
        out.append({i: v for i, v in sol.items() if v})
    return Mat(A.ncols, B.ncols, out)


class HomologyPresentation:
    """
    Explicit H_q: generator cycles (columns of ``gens``), their orders
    (0 = free) and a classifier sending cycles to coordinate tuples.

    The quotient Z/B is presented in cycle coordinates; unit entries of
    the relations are used to substitute coordinates away, and only the
    remaining non-unit core goes through a dense Smith normal form.
    """

    def __init__(self, C, q):
        ring = C.ring
        if ring.kind == "Zmod" and not ring.is_field:
            raise NotImplementedError("explicit homology needs ZZ or a field")
        self.ring = ring
        self.degree = q
        n = C.rank(q)
        self.cycles = kernel(C.d(q), ring, ambient_dim=n)
        k = self.cycles.dim
        B = C.d(q + 1)
        Bz = self.cycles.coordinates(B).reduce(ring) if B.ncols else Mat(k, 0)
        self._rules, residual = _substitute_units(Bz, ring)
        gone = {i for i, _ in self._rules}
        self._core = [i for i in range(k) if i not in gone]
        cpos = {i: t for t, i in enumerate(self._core)}
        rest = [c for c in residual if c]
        R = Mat(len(self._core), len(rest),
                [{cpos[i]: v for i, v in c.items()} for c in rest])
        if ring.is_field or not rest:
            U = Mat.identity(len(self._core))
            diag = []
        else:
            U, D, _ = smith_normal_form(R, ring)
            diag = [D[t, t] for t in range(min(D.shape))]
        keep, orders = [], []
        for t in range(len(self._core)):
            d = abs(diag[t]) if t < len(diag) else 0
            if d != 1:
                keep.append(t)
                orders.append(d)
        self._U = U
        self._keep = keep
        self.orders = orders
        nc = len(self._core)
        Uinv = solve(U, Mat.identity(nc), ring) if nc else Mat(0, 0)
        gcols = []
        for t in keep:
            gcols.append({self._core[r]: v for r, v in Uinv.cols[t].items()})
        G = Mat(k, len(gcols), gcols)
        self.gens = (self.cycles.basis @ G).reduce(ring) if k else Mat(n, 0)

    @property
    def group(self):
        return HomologyGroup(sum(1 for o in self.orders if o == 0),
                             tuple(sorted(o for o in self.orders if o)))

    def __len__(self):
        return len(self.orders)

    def is_cycle(self, Y, C):
        return (C.d(self.degree) @ Y).reduce(self.ring).is_zero()

    def classify(self, Y):
        """Coordinate tuples of the classes of the columns of Y."""
        ring = self.ring
        W = self.cycles.coordinates(Y).reduce(ring)
        out = []
        for col in W.cols:
            w = dict(col)
            for i, rule in self._rules:
                c = w.pop(i, 0)
                if c:
                    for r, v in rule.items():
                        w[r] = w.get(r, 0) + c * v
            vec = {t: ring.normalize(w.get(i, 0)) for t, i in enumerate(self._core)}
            c = self._U.apply({t: v for t, v in vec.items() if v})
            out.append(tuple(ring.normalize(c.get(t, 0)) % o if o else
                             ring.normalize(c.get(t, 0))
                             for t, o in zip(self._keep, self.orders)))
        return out


def _substitute_units(R, ring):
    """
    Eliminate quotient coordinates through relations with a unit entry.
    Returns the substitution rules [(i, {r: coeff})] in order and the
    remaining relation columns, none of which has a unit entry.
    """
    cols = [dict(c) for c in R.cols]
    rowcols = {}
    for j, c in enumerate(cols):
        for i in c:
            rowcols.setdefault(i, set()).add(j)
    alive = set(j for j, c in enumerate(cols) if c)
    rules = []
    progress = True
    while progress:
        progress = False
        for j in sorted(alive, key=lambda j: len(cols[j])):
            if j not in alive:
                continue
            col = cols[j]
            best = None
            for i, v in col.items():
                if ring.is_unit(v):
                    cnt = len(rowcols[i])
                    if best is None or cnt < best[0]:
                        best = (cnt, i)
            if best is None:
                continue
            i = best[1]
            inv = ring.inverse(col[i])
            rule = {r: ring.normalize(-inv * v) for r, v in col.items() if r != i}
            rules.append((i, {r: v for r, v in rule.items() if v}))
            for j2 in list(rowcols[i]):
                if j2 == j:
                    continue
                c2 = cols[j2]
                f = ring.normalize(c2[i] * inv)
                for r, v in col.items():
                    x = ring.normalize(c2.get(r, 0) - f * v)
                    if x:
                        if r not in c2:
                            rowcols.setdefault(r, set()).add(j2)
                        c2[r] = x
                    elif r in c2:
                        del c2[r]
                        rowcols[r].discard(j2)
                if not c2:
                    alive.discard(j2)
            for r in col:
                rowcols[r].discard(j)
            cols[j] = {}
            alive.discard(j)
            progress = True
    return rules, [cols[j] for j in sorted(alive)]


def homology_presentation(C, q):
    return HomologyPresentation(C, q)


def induced_on_homology(f, q):
    """Matrix of H_q(f) in the generators of the two presentations."""
    src = HomologyPresentation(f.source, q)
    tgt = HomologyPresentation(f.target, q)
    imgs = tgt.classify((f[q] @ src.gens).reduce(f.target.ring))
    cols = [{t: v for t, v in enumerate(c) if v} for c in imgs]
    return Mat(len(tgt), len(src), cols), src, tgt


def is_iso_on_homology(f, q):
    """
    H_q(f) bijective, read off the induced matrix.  Needs a field or free
    homology on both sides; torsion raises NotImplementedError.
    """
    A, src, tgt = induced_on_homology(f, q)
    if any(src.orders) or any(tgt.orders):
        raise NotImplementedError("torsion in homology; use is_quasi_iso on a window")
    if len(src) != len(tgt):
        return False
    if not len(src):
        return True
    facs = invariant_factors(A, f.source.ring)
    return len(facs) == len(src) and all(d == 1 for d in facs)

"""
Rational polynomial forms on the standard simplices and the comparison
map from the bar levels A_p(m).

Forms on the p-simplex are written in t_1..t_p with t_0 = 1 - (t_1 + ...
+ t_p) eliminated.  A term is keyed by (exponents, dt-indices) with the
dt-indices strictly increasing; the homological degree is minus the
number of dt's.

Letter r_j of a level-p monomial is the coordinate t_0 + ... + t_{j-1},
i.e. 1 - (t_j + ... + t_p).  This is the reading under which the bar
faces r_j -> r_j / r_{j-1} and degeneracies r_j -> r_j / r_{j+1} are the
pullbacks along the cofaces and codegeneracies.
"""

from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .chain_core import QQ, Mat
from .free_cidga import FreeElement, level


class BoundExceeded(ValueError):
    pass


def _wedge_sign(a, b):
    """Sign sorting the concatenation a + b of increasing tuples, 0 if they meet."""
    if set(a) & set(b):
        return 0, None
    inv = sum(1 for x in a for y in b if x > y)
    return (-1) ** inv, tuple(sorted(a + b))


class PolyForm:
    """Q-linear combination of t^a dt_J on the p-simplex."""

    __slots__ = ("p", "terms")

    def __init__(self, p, terms=None):
        self.p = p
        self.terms = {}
        for (exps, dts), c in (terms or {}).items():
            c = Fraction(c)
            if not c:
                continue
            if len(exps) != p or any(e < 0 for e in exps):
                raise ValueError("bad exponent vector %r for p=%d" % (exps, p))
            if list(dts) != sorted(set(dts)) or any(not 1 <= j <= p for j in dts):
                raise ValueError("dt indices must increase within 1..%d" % p)
            key = (tuple(exps), tuple(dts))
            self.terms[key] = self.terms.get(key, 0) + c
            if not self.terms[key]:
                del self.terms[key]

    @classmethod
    def constant(cls, p, c=1):
        return cls(p, {((0,) * p, ()): c})

    @classmethod
    def t(cls, p, k):
        """The coordinate t_k, k = 0..p."""
        if k == 0:
            terms = {((0,) * p, ()): 1}
            for j in range(1, p + 1):
                terms[(_unit_exp(p, j), ())] = -1
            return cls(p, terms)
        return cls(p, {(_unit_exp(p, k), ()): 1})

    @classmethod
    def dt(cls, p, k):
        if k == 0:
            return cls(p, {((0,) * p, (j,)): -1 for j in range(1, p + 1)})
        return cls(p, {((0,) * p, (k,)): 1})

    def degree(self):
        degs = {-len(dts) for _, dts in self.terms}
        if len(degs) > 1:
            raise ValueError("inhomogeneous form")
        return degs.pop() if degs else None

    def poly_degree(self):
        return max((sum(e) for e, _ in self.terms), default=0)

    def __add__(self, other):
        _same_p(self, other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return PolyForm(self.p, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return PolyForm(self.p, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        _same_p(self, other)
        t = {}
        for (e1, j1), c1 in self.terms.items():
            for (e2, j2), c2 in other.terms.items():
                s, j = _wedge_sign(j1, j2)
                if not s:
                    continue
                key = (tuple(a + b for a, b in zip(e1, e2)), j)
                t[key] = t.get(key, 0) + s * c1 * c2
        return PolyForm(self.p, t)

    def d(self):
        t = {}
        for (e, dts), c in self.terms.items():
            for k in range(1, self.p + 1):
                if not e[k - 1] or k in dts:
                    continue
                s, j = _wedge_sign((k,), dts)
                e2 = tuple(a - (1 if i == k - 1 else 0) for i, a in enumerate(e))
                key = (e2, j)
                t[key] = t.get(key, 0) + s * e[k - 1] * c
        return PolyForm(self.p, t)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (e, dts), c in sorted(self.terms.items()):
            mono = "*".join("t%d^%d" % (k + 1, a) if a > 1 else "t%d" % (k + 1)
                            for k, a in enumerate(e) if a)
            forms = "^".join("dt%d" % j for j in dts)
            parts.append("%s%s" % (c, "".join("*" + x for x in (mono, forms) if x)))
        return " + ".join(parts)


def _unit_exp(p, k):
    return tuple(1 if i == k - 1 else 0 for i in range(p))


def _same_p(a, b):
    if a.p != b.p:
        raise ValueError("forms on different simplices: p=%d vs %d" % (a.p, b.p))


def _power(f, n):
    out = PolyForm.constant(f.p)
    for _ in range(n):
        out = out * f
    return out


def substitute(form, images, p_new):
    """
    Pullback along an affine map: t_k (k = 1..p) goes to the degree-0
    form images[k-1] on the p_new-simplex, dt_k to its differential.
    """
    dimg = [g.d() for g in images]
    out = PolyForm(p_new)
    for (e, dts), c in form.terms.items():
        term = PolyForm.constant(p_new, c)
        for k, a in enumerate(e):
            if a:
                term = term * _power(images[k], a)
        for j in dts:
            term = term * dimg[j - 1]
        out = out + term
    return out


def face_images(i, p):
    """Coface [p-1] -> [p] skipping vertex i: t_k -> t_k, 0, t_{k-1}."""
    if not 0 <= i <= p or p == 0:
        raise IndexError("face d_%d undefined at p=%d" % (i, p))
    imgs = []
    for k in range(1, p + 1):
        if k < i:
            imgs.append(PolyForm.t(p - 1, k))
        elif k == i:
            imgs.append(PolyForm(p - 1))
        else:
            imgs.append(PolyForm.t(p - 1, k - 1))
    return imgs


def degeneracy_images(i, p):
    """Codegeneracy [p+1] -> [p] merging i, i+1: t_i -> t_i + t_{i+1}."""
    if not 0 <= i <= p:
        raise IndexError("degeneracy s_%d undefined at p=%d" % (i, p))
    imgs = []
    for k in range(1, p + 1):
        if k < i:
            imgs.append(PolyForm.t(p + 1, k))
        elif k == i:
            imgs.append(PolyForm.t(p + 1, k) + PolyForm.t(p + 1, k + 1))
        else:
            imgs.append(PolyForm.t(p + 1, k + 1))
    return imgs


def face(form, i):
    return substitute(form, face_images(i, form.p), form.p - 1)


def degeneracy(form, i):
    return substitute(form, degeneracy_images(i, form.p), form.p + 1)


def apl_basis(p, l, bound):
    """Monomials t^a dt_J on the p-simplex with |J| = l and |a| <= bound."""
    out = []
    for dts in combinations(range(1, p + 1), l):
        for n in range(bound + 1):
            for ks in combinations_with_replacement(range(p), n):
                e = [0] * p
                for k in ks:
                    e[k] += 1
                out.append((tuple(e), dts))
    return sorted(set(out), key=lambda x: (sum(x[0]), x[1], tuple(-a for a in x[0])))


def apl_operators(kind, i, p, bound, degrees=None):
    """
    Matrices {-l: Mat} over Q of d_i, s_i or the de Rham differential
    ("d", i ignored) on the polynomial-degree <= bound part.
    """
    if kind == "face":
        fn, p_new, shift = (lambda f: face(f, i)), p - 1, 0
        if not 0 <= i <= p or p == 0:
            raise IndexError("face d_%d undefined at p=%d" % (i, p))
    elif kind == "degeneracy":
        fn, p_new, shift = (lambda f: degeneracy(f, i)), p + 1, 0
        if not 0 <= i <= p:
            raise IndexError("degeneracy s_%d undefined at p=%d" % (i, p))
    elif kind == "d":
        fn, p_new, shift = PolyForm.d, p, 1
    else:
        raise ValueError("unknown operator kind %r" % kind)
    degrees = range(0, p + 1) if degrees is None else degrees
    out = {}
    for l in degrees:
        src = apl_basis(p, l, bound)
        tgt = apl_basis(p_new, l + shift, bound)
        rows = {b: r for r, b in enumerate(tgt)}
        cols = []
        for key in src:
            img = fn(PolyForm(p, {key: 1}))
            col = {}
            for k, c in img.terms.items():
                if k not in rows:
                    raise BoundExceeded("image leaves the degree-%d bound" % bound)
                col[rows[k]] = c
            cols.append(col)
        out[-l] = Mat(len(tgt), len(src), cols)
    return out


def letter_form(p, j, odd):
    """r_j = 1 - (t_j + ... + t_p) and dr_j = -(dt_j + ... + dt_p)."""
    f = PolyForm.constant(p)
    for k in range(j, p + 1):
        f = f - PolyForm.t(p, k)
    return f.d() if odd else f


def rho(p, m, x):
    """Forget slot values and read each letter as a form on the p-simplex."""
    if not isinstance(x, FreeElement):
        raise TypeError("rho takes a FreeElement")
    if (x.p, x.m) != (p, m):
        raise ValueError("element lives at (%d, %d), not (%d, %d)" % (x.p, x.m, p, m))
    out = PolyForm(p)
    for mono, c in x.terms.items():
        if isinstance(c, float):
            raise TypeError("rho needs exact rational coefficients")
        term = PolyForm.constant(p, c)
        for _, j, o in mono:
            term = term * letter_form(p, j, o)
        out = out + term
    return out


def level_elements(p, m, q):
    """Basis monomials of level (p, m) in degree q as FreeElements."""
    return [FreeElement.monomial(p, m, mono) for mono in level(p, m).bases.get(q, ())]


def check_rho(p_max=3, m_max=2, ring=QQ):
    """
    Per-identity pass/fail on every basis monomial of the levels
    p <= p_max, m <= m_max: chain map, faces, degeneracies.
    """
    if ring != QQ:
        raise ValueError("rho is defined over Q")
    from .bar_ai import apply_letter_map, ai_letter_fn
    from .free_cidga import differential
    out = {"chain_map": True, "faces": True, "degeneracies": True}
    for p in range(0, p_max + 1):
        for m in range(0, m_max + 1):
            L = level(p, m)
            for q in L.degrees():
                for x in level_elements(p, m, q):
                    if q - 1 >= -m and rho(p, m, differential(x)) != rho(p, m, x).d():
                        out["chain_map"] = False
                    for kind in ("face", "degeneracy"):
                        if kind == "face" and p == 0:
                            continue
                        for i in range(p + 1):
                            fn, p_new = ai_letter_fn(kind, i, p)
                            t = {}
                            for mono, c in x.terms.items():
                                for c2, k in apply_letter_map(mono, fn, p_new):
                                    t[k] = t.get(k, 0) + c * c2
                            y = FreeElement(p_new, m, q, t)
                            f = rho(p, m, x)
                            g = face(f, i) if kind == "face" else degeneracy(f, i)
                            if rho(p_new, m, y) != g:
                                out["faces" if kind == "face" else "degeneracies"] = False
    return out


def check_rho_products(pairs):
    """rho(x * y) == rho(x) rho(y) for each (x, y) at equal p."""
    from .free_cidga import external_product
    return all(rho(x.p, x.m + y.m, external_product(x, y)) == rho(x.p, x.m, x) * rho(y.p, y.m, y)
               for x, y in pairs)


def check_rho_pushforward(alpha, xs):
    """rho(alpha_* x) == rho(x): slot values are forgotten."""
    from .free_cidga import functorial_pushforward
    return all(rho(x.p, alpha.target, functorial_pushforward(alpha, x)) == rho(x.p, x.m, x)
               for x in xs)

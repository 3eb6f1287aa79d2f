"""Exact arithmetic in the knot surgery algebra K and its relatives.

The knot surgery algebra K sits over two idempotents i0, i1 with

    i0*K*i0 = F2[U, V],    i1*K*i1 = F2[U, V, V^-1],    i0*K*i1 = 0,

and two connecting elements sigma, tau in i1*K*i0 subject to

    sigma * f = I(f) * sigma,     tau * f = T(f) * tau,

where I is the inclusion and T is the ring map T(U) = V^-1, T(V) = U*V^2.
Everything here is characteristic 2, so elements are finite sets of
monomials and addition is symmetric difference.

The same machinery supports tensor algebras: the link algebra L_ell is the
ell-fold tensor of K, and hypercube bookkeeping uses the one-variable
polynomial algebra F2[U], the cube algebra C_1 and the interval ("box")
algebras B_(d).  An `Algebra` is a tuple of such factors; a monomial is a
tuple of per-factor monomials.

Factor monomial formats:

    K factor:    (l, r, u, v, w)  idempotents l, r in {0,1}; u >= 0;
                 v in Z (v >= 0 forced when l == r == 0);
                 w in {0: none, 1: sigma, 2: tau}; w != 0 forces (l,r)=(1,0)
    U factor:    (k,)             U^k, k >= 0, single idempotent
    C factor:    (l, r)           cube algebra C_1: i0, i1, theta=(1,0)
    B(d) factor: (l, r)           box algebra: idempotents i_0..i_d and
                 theta_{r,r+1}=(r+1,r)
"""

from __future__ import annotations

from functools import lru_cache

# factor kind tags
K = "K"
POLY_U = "U"
CUBE = "C"


def box_kind(d):
    """Factor kind for the size-d interval algebra B_(d)."""
    return ("B", int(d))


# canonical K-factor monomials
K_I0 = (0, 0, 0, 0, 0)
K_I1 = (1, 1, 0, 0, 0)
K_SIGMA = (1, 0, 0, 0, 1)
K_TAU = (1, 0, 0, 0, 2)


def k_mono(l, r, u, v, w=0):
    """Validated K-factor monomial."""
    if w:
        assert (l, r) == (1, 0), "sigma/tau live in i1*K*i0"
    else:
        assert l == r, "arrowless monomials are idempotent-diagonal"
    assert u >= 0
    if (l, r, w) == (0, 0, 0):
        assert v >= 0, "i0*K*i0 is polynomial in V"
    return (l, r, u, v, w)


def _k_mul(a, b):
    # a*b with a on the left; returns None for zero
    al, ar, au, av, aw = a
    bl, br, bu, bv, bw = b
    if ar != bl:
        return None
    if bw == 0:
        if aw == 2:
            # tau * U^bu V^bv = U^bv V^(2bv-bu) tau
            return (1, 0, au + bv, av + 2 * bv - bu, 2)
        return (al, br, au + bu, av + bv, aw)
    if aw == 0:
        return (1, 0, au + bu, av + bv, bw)
    return None  # arrow*arrow needs ar == 0 == bl == 1, unreachable


def _k_in_ideal(m, n):
    l, r, u, v, w = m
    if w == 2:
        return u >= n or v <= 2 * u - n
    if w == 1 or l == 0:
        return u >= n or v >= n
    return u >= n  # i1*K*i1


class Algebra:
    """A tensor product of factor algebras, with F2 monomial arithmetic."""

    def __init__(self, kinds):
        self.kinds = tuple(kinds)

    def __len__(self):
        return len(self.kinds)

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.kinds == other.kinds

    def __hash__(self):
        return hash(self.kinds)

    def __repr__(self):
        return "Algebra(%r)" % (self.kinds,)

    # -- idempotents -------------------------------------------------

    def idem_left(self, mono):
        return tuple(
            0 if k == POLY_U else f[0] for k, f in zip(self.kinds, mono)
        )

    def idem_right(self, mono):
        out = []
        for k, f in zip(self.kinds, mono):
            if k == POLY_U:
                out.append(0)
            elif k == K:
                out.append(f[1])
            else:
                out.append(f[1])
        return tuple(out)

    def idem_values(self):
        """All idempotent tuples of this algebra."""
        ranges = []
        for k in self.kinds:
            if k == POLY_U:
                ranges.append((0,))
            elif k in (K, CUBE):
                ranges.append((0, 1))
            else:
                ranges.append(tuple(range(k[1] + 1)))
        out = [()]
        for r in ranges:
            out = [p + (x,) for p in out for x in r]
        return out

    def unit(self, idem):
        """The idempotent monomial for an idempotent tuple."""
        fs = []
        for k, e in zip(self.kinds, idem):
            if k == K:
                fs.append((e, e, 0, 0, 0))
            elif k == POLY_U:
                fs.append((0,))
            else:
                fs.append((e, e))
        return tuple(fs)

    def is_unit(self, mono):
        for k, f in zip(self.kinds, mono):
            if k == K:
                if f[2] or f[3] or f[4]:
                    return False
            elif k == POLY_U:
                if f[0]:
                    return False
            else:
                if f[0] != f[1]:
                    return False
        return True

    def is_diagonal(self, mono):
        """No arrow/theta factor (left and right idempotents agree)."""
        return self.idem_left(mono) == self.idem_right(mono)

    # -- multiplication ----------------------------------------------

    def mul_mono(self, a, b):
        """Product monomial a*b, or None if it vanishes."""
        out = []
        for k, fa, fb in zip(self.kinds, a, b):
            if k == K:
                f = _k_mul(fa, fb)
                if f is None:
                    return None
            elif k == POLY_U:
                f = (fa[0] + fb[0],)
            elif k == CUBE:
                if fa[1] != fb[0]:
                    return None
                f = (fa[0], fb[1])
            else:
                if fa[1] != fb[0]:
                    return None
                if fa[0] - fa[1] == 1 and fb[0] - fb[1] == 1:
                    return None  # theta*theta = 0 in B_(d)
                f = (fa[0], fb[1])
            out.append(f)
        return tuple(out)

    def mul(self, A, B):
        """Bilinear product of F2 monomial sets."""
        acc = set()
        for a in A:
            for b in B:
                m = self.mul_mono(a, b)
                if m is not None:
                    acc ^= {m}
        return frozenset(acc)

    # -- filtration ---------------------------------------------------

    def mono_in_ideal(self, mono, n):
        """Membership in the truncation ideal at level n.

        For a tensor monomial this is the componentwise sum of the J_n
        ideals: the monomial lies in the ideal iff some factor does.
        """
        for k, f in zip(self.kinds, mono):
            if k == K:
                if _k_in_ideal(f, n):
                    return True
            elif k == POLY_U:
                if f[0] >= n:
                    return True
        return False

    def truncate(self, A, n):
        return frozenset(m for m in A if not self.mono_in_ideal(m, n))

    # -- text rendering -----------------------------------------------

    def render_mono(self, mono):
        return "|".join(
            _render_factor(k, f) for k, f in zip(self.kinds, mono)
        )

    def render(self, A):
        if not A:
            return "0"
        return " + ".join(sorted(self.render_mono(m) for m in A))

    def parse_mono(self, text):
        parts = text.split("|")
        if len(parts) != len(self.kinds):
            raise ValueError(
                "expected %d factors, got %r" % (len(self.kinds), text)
            )
        return tuple(
            _parse_factor(k, p.strip()) for k, p in zip(self.kinds, parts)
        )

    def parse(self, text):
        text = text.strip()
        if text == "0":
            return frozenset()
        acc = set()
        for part in text.split("+"):
            acc ^= {self.parse_mono(part.strip())}
        return frozenset(acc)


def _pow_str(sym, e):
    if e == 0:
        return ""
    if e == 1:
        return sym
    return "%s^%d" % (sym, e)


def _render_factor(kind, f):
    if kind == K:
        l, r, u, v, w = f
        body = " ".join(x for x in (_pow_str("U", u), _pow_str("V", v)) if x)
        if w:
            arrow = "s" if w == 1 else "t"
            return (body + " " + arrow).strip()
        if not body:
            return "i%d" % l
        return "i%d %s" % (l, body)
    if kind == POLY_U:
        return _pow_str("U", f[0]) or "1"
    if kind == CUBE:
        return "th" if f[0] != f[1] else "i%d" % f[0]
    if f[0] != f[1]:
        return "th_%d,%d" % (f[1], f[0])
    return "i%d" % f[0]


def _parse_factor(kind, text):
    if kind == POLY_U:
        if text == "1":
            return (0,)
        return (_parse_pow(text, "U"),)
    if kind == CUBE:
        if text == "th":
            return (1, 0)
        return (int(text[1:]), int(text[1:]))
    if kind != K:
        if text.startswith("th_"):
            lo, hi = text[3:].split(",")
            assert int(hi) == int(lo) + 1
            return (int(hi), int(lo))
        return (int(text[1:]), int(text[1:]))

    toks = text.split()
    idem = None
    u = v = 0
    w = 0
    for tok in toks:
        if tok in ("i0", "i1"):
            idem = int(tok[1])
        elif tok == "s":
            w = 1
        elif tok == "t":
            w = 2
        elif tok.startswith("U"):
            u = _parse_pow(tok, "U")
        elif tok.startswith("V"):
            v = _parse_pow(tok, "V")
        else:
            raise ValueError("bad K monomial %r" % text)
    if w:
        return (1, 0, u, v, w)
    if idem is None:
        idem = 1 if v < 0 else 0
    return (idem, idem, u, v, 0)


def _parse_pow(tok, sym):
    if tok == sym:
        return 1
    if not tok.startswith(sym + "^"):
        raise ValueError("bad power %r" % tok)
    return int(tok[len(sym) + 1:])


@lru_cache(maxsize=None)
def k_algebra(ell=1):
    """The link algebra L_ell (K itself for ell = 1)."""
    return Algebra((K,) * ell)


@lru_cache(maxsize=None)
def u_algebra():
    """F2[U], used for the decorated solid-torus bimodules."""
    return Algebra((POLY_U,))


@lru_cache(maxsize=None)
def trivial_algebra():
    """The empty tensor product; its only monomial is ()."""
    return Algebra(())


@lru_cache(maxsize=None)
def cube_algebra(n):
    """The cube algebra C_n."""
    return Algebra((CUBE,) * n)


@lru_cache(maxsize=None)
def hyperbox_algebra(dims):
    """The box algebra B_d for a size tuple d."""
    return Algebra(tuple(box_kind(d) for d in dims))


def tensor(*algebras):
    return Algebra(sum((a.kinds for a in algebras), ()))


# -- convenience constructors for K elements -------------------------


def kelt(ell, *monos):
    """An element of L_ell from per-factor 5-tuples (or K monomials)."""
    alg = k_algebra(ell)
    out = set()
    for m in monos:
        if ell == 1 and isinstance(m[0], int):
            m = (m,)
        out ^= {tuple(m)}
    for m in out:
        for f in m:
            k_mono(*f)
    _ = alg
    return frozenset(out)


def k_uv(u, v, idem=None):
    """Diagonal monomial U^u V^v; idem defaults to 0 unless v < 0."""
    if idem is None:
        idem = 1 if v < 0 else 0
    return k_mono(idem, idem, u, v, 0)


def k_arrow(u, v, arrow):
    """Monomial U^u V^v sigma (arrow=1) or ... tau (arrow=2)."""
    return k_mono(1, 0, u, v, arrow)


def embed_factor(mono_f, ell, pos, idems):
    """Embed a single K-factor monomial at position pos, idempotents
    elsewhere given by idems (a tuple of length ell)."""
    fs = []
    for i in range(ell):
        if i == pos:
            fs.append(mono_f)
        else:
            e = idems[i]
            fs.append((e, e, 0, 0, 0))
    return tuple(fs)

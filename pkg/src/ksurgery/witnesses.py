"""Explicit homotopy witnesses for the bimodule identities.

The transformer involution and the transformer-solid-torus identities
are certified by exhibiting an explicit isomorphism F = id + H whose
higher components are built from derivative operators: with J the
Euler-type map x -> (U dU + V dV)(x) and the divided-power homotopies
trivializing dU^2, the corrections phi psi phi psi (respectively
phi psi) are d_Mor-exact, and H is the resulting primitive composed
with the tau-part of the cone.  A cycle morphism with invertible
length-one part between bounded bimodules with vanishing delta_1 is an
isomorphism, so checking d_Mor(id + H) = 0 on a monomial sample
certifies the identity on that sample.
"""

from __future__ import annotations

from .algebra import k_mono
from .catalog import TransformerEvaluator, solid_torus_da
from .evaluators import BoxEvaluator, DAMorphism, IdentityEvaluator


class FnMap:
    """A functional generator map for DAMorphism (window-independent)."""

    def __init__(self, fn):
        self.fn = fn

    def get(self, g, default=None):
        out = self.fn(g)
        return default if out is None else out

    def __iter__(self):
        raise TypeError("functional map is not enumerable")


def _diag1(mono):
    l, r, u, v, w = mono[0]
    if w != 0 or l != 1 or r != 1:
        return None
    return (u, v)


def d_u(uv):
    u, v = uv
    return (u - 1, v) if u % 2 else None


def d_v(uv):
    u, v = uv
    return (u, v - 1) if v % 2 else None


def d_uv(uv):
    u, v = uv
    return (u - 1, v - 1) if (u % 2 and v % 2) else None


def binom2_u(uv):
    u, v = uv
    return (u - 2, v) if (u * (u - 1) // 2) % 2 else None


def transformer_involution():
    """(M, N, F) with M = T (x) T, N = the identity bimodule, and F the
    isomorphism id + (F2 psi psi + phi E psi) o t."""
    from .algebra import k_algebra

    T = TransformerEvaluator()
    M = BoxEvaluator(T, T)
    N = IdentityEvaluator(k_algebra(1))
    gen_map = {}
    for g in M.generators():
        gen_map[g] = M.gen_idem(g)[0]

    def h_rule(inputs, g):
        if len(inputs) != 4 or M.gen_idem(g)[0] != (0,):
            return {}
        a1, a2, a3, a4 = inputs
        if a1[0][4] != 2:
            return {}
        ds = [_diag1(a) for a in (a2, a3, a4)]
        if any(d is None for d in ds):
            return {}
        d2, d3, d4 = ds
        terms = []
        for ops in ((d_u, d_uv, d_v), (binom2_u, d_v, d_v)):
            o4, o3, o2 = ops[0](d4), ops[1](d3), ops[2](d2)
            if o4 is None or o3 is None or o2 is None:
                continue
            u = o4[0] + o3[0] + o2[0] + a1[0][2]
            v = o4[1] + o3[1] + o2[1] + a1[0][3]
            terms.append((k_mono(1, 0, u, v, 2),))
        acc = frozenset()
        for t in terms:
            acc ^= {t}
        return {(1,): acc} if acc else {}

    F = DAMorphism(M, N, gen_map, rules=[h_rule])
    return M, N, F


def hopf_big_da(l1, window=8):
    """The Hopf link bimodule over (K, K): H_(l1,0) boxed with I^sup."""
    from .catalog import hopf_typed, id_supset
    from .evaluators import box_module

    return box_module(hopf_typed(l1, 0), id_supset(window), pairs=[(0, 0)])


def _hopf_gen(g):
    (hg, _k1), ((_mg, pg), _k2) = g
    letter, _e1, e2 = hg
    _, _ep, p, q = pg
    return letter, _e1, e2, p, q


def hopf_reduction(big_ev, level):
    """The explicit reduction data of the Hopf link bimodule.

    Per cube vertex, the surviving generators are U^i a and V^j d in
    column 0 and V^j d in column 1; h slides a to c and d to b along the
    cancelling differentials, zig-zagging through the U2/V2-weighted
    arrows.  The per-vertex maps are then corrected along the no-input
    arrows D in the sigma_2/tau_2 direction: Pi = pi + pi D h,
    I = i + h D i, H = h + h D h.
    """
    from .perturb import ReductionData
    from .typed import MorphismD, TypeDModule, compose_mor

    big = big_ev.materialize(level=level, strict=False)
    alg = big.algebra
    names = {}
    for g in big.generators:
        names[_hopf_gen(g)] = g

    def out(e2, u, v):
        return (k_mono(e2, e2, u, v, 0),)

    small_gens = {}
    for g, key in ((g, _hopf_gen(g)) for g in big.generators):
        letter, e1, e2, p, q = key
        if e1 == 0 and ((letter == "a" and q == 0)
                        or (letter == "d" and p == 0)):
            small_gens[g] = big.generators[g]
        if e1 == 1 and letter == "d" and p == 0:
            small_gens[g] = big.generators[g]

    small0 = TypeDModule(alg, small_gens, check=False)
    i0 = MorphismD(small0, big, check=False)
    for g, e in small_gens.items():
        i0.add(g, g, frozenset({alg.unit(e)}), check=False)

    pi0 = MorphismD(big, small0, check=False)
    h0 = MorphismD(big, big, check=False)
    for g in big.generators:
        letter, e1, e2, p, q = _hopf_gen(g)

        def tgt(letter2, p2, q2):
            return names.get((letter2, e1, e2, p2, q2))

        if e1 == 0:
            if letter == "a":
                if q <= p:
                    t = tgt("a", p - q, 0)
                    if t:
                        pi0.add(g, t, frozenset({out(e2, q, q)}), check=False)
                else:
                    t = tgt("d", 0, q - p - 1)
                    if t:
                        pi0.add(g, t, frozenset({out(e2, p, p + 1)}),
                                check=False)
            elif letter == "d":
                if p > q:
                    t = tgt("a", p - q - 1, 0)
                    if t:
                        pi0.add(g, t, frozenset({out(e2, q + 1, q)}),
                                check=False)
                else:
                    t = tgt("d", 0, q - p)
                    if t:
                        pi0.add(g, t, frozenset({out(e2, p, p)}), check=False)
            if letter == "a":
                for k in range(max(p, q) + 1):
                    if q - 1 - k >= 0 and p - k >= 0:
                        t = tgt("c", p - k, q - 1 - k)
                        if t:
                            h0.add(g, t, frozenset({out(e2, k, k)}),
                                   check=False)
                    if q - 1 - k >= 0 and p - 1 - k >= 0:
                        t = tgt("b", p - 1 - k, q - 1 - k)
                        if t:
                            h0.add(g, t, frozenset({out(e2, k, k + 1)}),
                                   check=False)
            elif letter == "d":
                for k in range(max(p, q) + 1):
                    if p - 1 - k >= 0 and q - k >= 0:
                        t = tgt("b", p - 1 - k, q - k)
                        if t:
                            h0.add(g, t, frozenset({out(e2, k, k)}),
                                   check=False)
                    if p - 1 - k >= 0 and q - 1 - k >= 0:
                        t = tgt("c", p - 1 - k, q - 1 - k)
                        if t:
                            h0.add(g, t, frozenset({out(e2, k + 1, k)}),
                                   check=False)
        else:
            if letter == "d" and p == 0:
                pi0.add(g, g, frozenset({alg.unit((e2,))}), check=False)
            elif letter == "d":
                t = tgt("d", 0, q - p)
                if t:
                    pi0.add(g, t, frozenset({out(e2, p, p)}), check=False)
            elif letter == "a":
                # forced by i pi = id + [d, h] for the localized column
                t = tgt("d", 0, q - p - 1)
                if t:
                    pi0.add(g, t, frozenset({out(e2, p, p + 1)}), check=False)
            if letter == "a":
                for k in range(p + 1):
                    t = tgt("c", p - k, q - 1 - k)
                    if t:
                        h0.add(g, t, frozenset({out(e2, k, k)}), check=False)
                    if p - 1 - k >= 0:
                        t = tgt("b", p - 1 - k, q - 1 - k)
                        if t:
                            h0.add(g, t, frozenset({out(e2, k, k + 1)}),
                                   check=False)
            elif letter == "d":
                for k in range(p):
                    t = tgt("b", p - 1 - k, q - k)
                    if t:
                        h0.add(g, t, frozenset({out(e2, k, k)}), check=False)
                    t = tgt("c", p - 1 - k, q - 1 - k)
                    if t:
                        h0.add(g, t, frozenset({out(e2, k + 1, k)}),
                               check=False)

    # the no-input maps that change the cube vertex (sigma_2/tau_2 arrows)
    D = MorphismD(big, big, check=False)
    for x, row in big.delta.items():
        e2x = big.generators[x]
        for y, elem in row.items():
            if big.generators[y] != e2x:
                D.add(x, y, elem, check=False)

    hDh = compose_mor(compose_mor(h0, D), h0)
    htpy = h0 + hDh
    incl = i0 + compose_mor(compose_mor(h0, D), i0)
    proj = pi0 + compose_mor(compose_mor(pi0, D), h0)

    # small differential: delta_Z = Pi o delta_big o I
    dI = MorphismD(small0, big, check=False)
    for g, row in incl.components.items():
        for b, e in row.items():
            for b2, e2 in big.delta_of(b).items():
                dI.add(g, b2, alg.mul(e2, e), check=False)
    small = TypeDModule(alg, small_gens, check=False)
    for g, row in dI.components.items():
        for b, e in row.items():
            for z, e2 in proj(b).items():
                coeff = alg.mul(e2, e)
                if level is not None:
                    coeff = alg.truncate(coeff, level)
                if coeff:
                    small.add_delta(g, z, coeff, check=False)
    incl.source = small
    proj.target = small
    return ReductionData(big, small, incl, proj, htpy)


def transformer_solid_torus(framing, window=10):
    """(M, N, F) with M = T (x) [D_lambda]^{F[U]}, N = [D_lambda]^{F[U]},
    and F = id + (V^-1 phi J + V^-1 U F2) o T."""
    D = solid_torus_da(framing, window)
    T = TransformerEvaluator()
    M = BoxEvaluator(T, D)
    gen_map = FnMap(lambda g: g[1])

    def h_rule(inputs, g):
        if len(inputs) != 2 or M.gen_idem(g)[0] != (0,):
            return {}
        a1, a2 = inputs
        if a1[0][4] != 2:
            return {}
        d2 = _diag1(a2)
        if d2 is None:
            return {}
        u2, v2 = d2
        out = {}
        for tgt, elems in D.delta((a1,), g[1]).items():
            k = tgt[1]
            parity = (k % 2) * (u2 % 2) + (u2 * (u2 - 1) // 2) % 2
            if parity % 2 == 0:
                continue
            for m in elems:
                p = m[0][0]
                key = ("d1", k + v2 - u2)
                cur = out.get(key, frozenset())
                out[key] = cur ^ {((p + u2 - 1,),)}
        return {k: v for k, v in out.items() if v}

    F = DAMorphism(M, D, gen_map, rules=[h_rule])
    return M, D, F

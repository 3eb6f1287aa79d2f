"""Homological perturbation: reduction of type-D modules, transfer of DA
structure along reduction data, and homotopy-equivalence certification.

Reduction is Gaussian cancellation of delta^1 entries containing an
idempotent (unit) summand.  When such an entry has residual (non-unit)
terms, the correction uses the geometric series of the residual, which
terminates at any finite truncation level provided the residual's powers
eventually land in the truncation ideal.  Pairs whose residual series
does not terminate (the completed coefficient is not a unit, as for
1 + V in idempotent 1) are simply not cancelled; this is what leaves the
two-generator infinity-framed solid torus model intact.

Every reduction is returned as explicit data (small model plus i, pi, h)
and can be validated against the five side conditions of the perturbation
lemma.  `transfer` rebuilds higher DA actions on the small model by the
alternating (i, delta_{>1}, h, ..., pi) tree sum.
"""

from __future__ import annotations

from .evaluators import DAEvaluator
from .typed import (
    MorphismD,
    StructureError,
    TypeDModule,
    WindowError,
    _acc,
    compose_mor,
    identity_morphism,
    mor_diff,
)

SERIES_CAP = 120


class NonTerminatingSeries(RuntimeError):
    pass


def _unit_summand(alg, elem):
    for m in elem:
        if alg.is_unit(m):
            return m
    return None


def _geometric_series(alg, unit, residual, level):
    """sum_k residual^k * unit, truncated at `level`; None if divergent."""
    total = frozenset({unit})
    term = frozenset({unit})
    for _ in range(SERIES_CAP):
        term = alg.truncate(alg.mul(residual, term), level)
        if not term:
            return total
        total = total ^ term
    return None


class ReductionData:
    """A reduction (big, small, i, pi, h) with the usual side conditions:
    pi i = id, i pi = id + d_Mor(h), h h = 0, h i = 0, pi h = 0."""

    def __init__(self, big, small, incl, proj, htpy):
        self.big = big
        self.small = small
        self.i = incl
        self.pi = proj
        self.h = htpy

    @classmethod
    def trivial(cls, module):
        ident = identity_morphism(module)
        zero = MorphismD(module, module, check=False)
        return cls(module, module, ident, ident, zero)

    def validate(self, n):
        """Return a list of failed side conditions at truncation n."""
        bad = []
        ident_small = identity_morphism(self.small)
        ident_big = identity_morphism(self.big)
        if not compose_mor(self.pi, self.i).equal_after(ident_small, n):
            bad.append("pi i != id")
        lhs = compose_mor(self.i, self.pi) + ident_big + mor_diff(self.h)
        if lhs.truncated(n).components:
            bad.append("i pi != id + d(h)")
        if compose_mor(self.h, self.h).truncated(n).components:
            bad.append("h h != 0")
        if compose_mor(self.h, self.i).truncated(n).components:
            bad.append("h i != 0")
        if compose_mor(self.pi, self.h).truncated(n).components:
            bad.append("pi h != 0")
        if mor_diff(self.i).truncated(n).components:
            bad.append("i not a cycle")
        if mor_diff(self.pi).truncated(n).components:
            bad.append("pi not a cycle")
        return bad


def reduce_typed(module, level=None, with_maps=True):
    """Cancel unit-coefficient arrows of a TypeDModule.

    `level` is the working truncation for residual geometric series (None
    demands exactly terminating series).  Returns ReductionData whose
    small model has no cancellable unit arrow.  The (i, pi, h) data is
    maintained incrementally with reverse indexes, so reduction is near
    linear in the number of arrows for sparse complexes; pass
    with_maps=False to skip the bookkeeping when only the small model is
    needed.
    """
    return _Reducer(module, level, with_maps).run()


class _Reducer:
    def __init__(self, module, level, with_maps):
        self.module = module
        self.alg = module.algebra
        self.level = level
        self.with_maps = with_maps
        # sparse delta with a reverse index
        self.delta = {x: dict(row) for x, row in module.delta.items()}
        self.rin = {}
        for x, row in self.delta.items():
            for y in row:
                self.rin.setdefault(y, set()).add(x)
        self.alive = dict(module.generators)
        if with_maps:
            # i: small -> big0, pi: big0 -> small, h: big0 -> big0
            self.incl = {g: {g: frozenset({self.alg.unit(e)})}
                         for g, e in module.generators.items()}
            self.proj = {g: {g: frozenset({self.alg.unit(e)})}
                         for g, e in module.generators.items()}
            self.pin = {g: {g} for g in module.generators}  # target index
            self.htpy = {}
        self.failed = set()
        self.work = sorted(
            ((x, y) for x, row in self.delta.items() for y in row),
            key=str, reverse=True,
        )

    def cut(self, elem):
        if self.level is None:
            return elem
        return self.alg.truncate(elem, self.level)

    def run(self):
        alg = self.alg
        while self.work:
            x, y = self.work.pop()
            if x not in self.alive or y not in self.alive or x == y:
                continue
            elem = self.delta.get(x, {}).get(y)
            if not elem:
                continue
            key = (x, y, elem)
            if key in self.failed:
                continue
            u = _unit_summand(alg, elem)
            if u is None:
                continue
            residual = elem ^ {u}
            series = _geometric_series(alg, u, residual, self.level) \
                if residual else frozenset({u})
            if series is None:
                self.failed.add(key)
                continue
            self._cancel(x, y, series)
        return self._finish()

    def _cancel(self, x, y, series):
        alg, cut = self.alg, self.cut
        into_y = {w: self.delta[w][y] for w in self.rin.get(y, ())
                  if w != x and w in self.alive}
        out_x = {v: e for v, e in self.delta.get(x, {}).items()
                 if v != y and v in self.alive}
        # drop x and y from the complex
        for g in (x, y):
            for v in self.delta.pop(g, {}):
                self.rin.get(v, set()).discard(g)
            for w in self.rin.pop(g, set()):
                if w in self.delta and g in self.delta[w]:
                    del self.delta[w][g]
            del self.alive[g]
        # Gaussian corrections w -> v  +=  b_v * s * a_w
        for w, a in into_y.items():
            sa = cut(alg.mul(series, a))
            if not sa:
                continue
            row = self.delta.setdefault(w, {})
            for v, b in out_x.items():
                add = cut(alg.mul(b, sa))
                if not add:
                    continue
                new = row.get(v, frozenset()) ^ add
                if new:
                    row[v] = new
                    self.rin.setdefault(v, set()).add(w)
                    self.work.append((w, v))
                else:
                    del row[v]
                    self.rin.get(v, set()).discard(w)

        if not self.with_maps:
            return
        # h += i(x) * s * proj(.)[y], for big generators projecting to y
        ix = dict(self.incl.pop(x, {}))
        iy = self.incl.pop(y, None)
        _ = iy
        for w in list(self.pin.get(y, ())):
            c = self.proj.get(w, {}).get(y)
            if c is None:
                continue
            sc = cut(alg.mul(series, c))
            if sc:
                hrow = self.htpy.setdefault(w, {})
                for b, e in ix.items():
                    _flat_add(hrow, b, cut(alg.mul(e, sc)))
                if not hrow:
                    del self.htpy[w]
        # i(g) += i(x) * (s * a_g) for g -> y
        for g, a in into_y.items():
            sa = cut(alg.mul(series, a))
            if not sa:
                continue
            grow = self.incl.setdefault(g, {})
            for b, e in ix.items():
                _flat_add(grow, b, cut(alg.mul(e, sa)))
        # proj: entries hitting x die; entries hitting y re-route through
        # pi(y) = sum_v v (x) (b_v s)
        bvs = {v: cut(alg.mul(b, series)) for v, b in out_x.items()}
        for w in list(self.pin.pop(x, ())):
            self.proj.get(w, {}).pop(x, None)
        for w in list(self.pin.pop(y, ())):
            c = self.proj.get(w, {}).pop(y, None)
            if c is None:
                continue
            row = self.proj.setdefault(w, {})
            for v, bs in bvs.items():
                add = cut(alg.mul(bs, c))
                if add:
                    _flat_add(row, v, add)
                    if row.get(v):
                        self.pin.setdefault(v, set()).add(w)

    def _finish(self):
        small = TypeDModule(self.alg, self.alive, check=False)
        for x, row in self.delta.items():
            if x not in self.alive:
                continue
            for y, elem in row.items():
                if y in self.alive and elem:
                    small.add_delta(x, y, elem, check=False)
        if not self.with_maps:
            return ReductionData(self.module, small, None, None, None)
        incl = MorphismD(small, self.module, check=False)
        for g, row in self.incl.items():
            if g not in self.alive:
                continue
            for b, e in row.items():
                incl.add(g, b, self.cut(e), check=False)
        proj = MorphismD(self.module, small, check=False)
        for w, row in self.proj.items():
            for g, e in row.items():
                if g in self.alive:
                    proj.add(w, g, self.cut(e), check=False)
        htpy = MorphismD(self.module, self.module, check=False)
        for w, row in self.htpy.items():
            for b, e in row.items():
                htpy.add(w, b, self.cut(e), check=False)
        return ReductionData(self.module, small, incl, proj, htpy)


def _flat_add(row, key, elem):
    if not elem:
        return
    new = row.get(key, frozenset()) ^ elem
    if new:
        row[key] = new
    else:
        del row[key]


def reduce_evaluator(ev, level, inner=None, strict_window=False,
                     with_maps=True):
    """Materialize an evaluator's type-D part and reduce it.

    For windowed evaluators the materialization drops arrows that escape
    the enumerated window (they are checked to be irrelevant afterwards):
    after reduction, surviving generators must either lie in the inner
    region (weight <= inner) or hug the window boundary; the returned
    small model is the inner part and must not interact with the rest.
    """
    big = ev.materialize(level=level, strict=strict_window)
    red = reduce_typed(big, level=level, with_maps=with_maps)
    if inner is None:
        return red
    small = red.small
    core = {g for g in small.generators if _weight(ev, g) <= inner}
    rest = set(small.generators) - core
    for x, row in small.delta.items():
        for y, elem in row.items():
            elem = small.algebra.truncate(elem, level)
            if not elem:
                continue
            if (x in core) != (y in core):
                raise WindowError(
                    "reduced model couples inner region to window boundary; "
                    "raise the window"
                )
    trimmed = TypeDModule(small.algebra,
                          {g: e for g, e in small.generators.items()
                           if g in core},
                          check=False)
    for x, row in small.delta.items():
        if x not in core:
            continue
        for y, elem in row.items():
            if y in core:
                trimmed.add_delta(x, y, elem, check=False)
    red.small = trimmed
    red.trimmed = sorted(rest, key=str)
    return red


def _weight(ev, g):
    w = getattr(ev, "gen_weight", None)
    if w is None:
        return 0
    return w(g)


class TransferredEvaluator(DAEvaluator):
    """DA structure on the small model of a reduction, via the tree sum

        delta_{j+1} = sum  pi (delta_{>1} h)^{k-1} delta_{>1} i

    with the j algebra inputs distributed over the delta_{>1} slots (at
    least one input each), plus delta_1 = the reduced differential.
    """

    def __init__(self, big_ev, red, level=None):
        self.big_ev = big_ev
        self.red = red
        self.level = level
        self.in_alg = big_ev.in_alg
        self.out_alg = big_ev.out_alg
        self.arity_bound = big_ev.arity_bound
        self._gens = dict(red.small.generators)

    def generators(self):
        return iter(self._gens)

    def gen_idem(self, g):
        for b in self.red.i(g):
            return (self.big_ev.gen_idem(b)[0], self._gens[g])
        return (self._big_left_idem(g), self._gens[g])

    def _big_left_idem(self, g):
        # small generators reuse big names under cancellation reductions
        return self.big_ev.gen_idem(g)[0]

    def delta(self, inputs, g):
        u = self._unit_action(inputs, g)
        if u is not None:
            return u
        if not inputs:
            return dict(self.red.small.delta_of(g))
        alg = self.out_alg
        cut = (lambda e: alg.truncate(e, self.level)) \
            if self.level is not None else (lambda e: e)

        def mor_step(table, mor):
            nxt = {}
            for b, coeff in table.items():
                for b2, c2 in mor(b).items():
                    _acc(nxt, b2, cut(alg.mul(c2, coeff)))
            return nxt

        out = {}
        # state: big-module table after i and k delta-steps (h applied)
        start = {b: coeff for b, coeff in self.red.i(g).items()}
        stack = [(start, 0, True)]  # (table, consumed, fresh)
        while stack:
            table, i, fresh = stack.pop()
            if not table:
                continue
            if i == len(inputs) and not fresh:
                for b, coeff in table.items():
                    for z, c2 in self.red.pi(b).items():
                        _acc(out, z, cut(alg.mul(c2, coeff)))
            if i == len(inputs):
                continue
            base = table if fresh else mor_step(table, self.red.h)
            if not base:
                continue
            for b in range(1, len(inputs) - i + 1):
                if self.big_ev.arity_bound is not None and \
                        b + 1 > self.big_ev.arity_bound:
                    break
                block = inputs[i:i + b]
                nxt = {}
                for bg, coeff in base.items():
                    for bg2, elems in self.big_ev.delta(block, bg).items():
                        _acc(nxt, bg2, cut(alg.mul(elems, coeff)))
                if nxt:
                    stack.append((nxt, i + b, False))
        return out


def transfer(big_ev, red, level=None):
    return TransferredEvaluator(big_ev, red, level=level)


# -- equivalence certification ---------------------------------------------


class Inconclusive(Exception):
    """Search budget exhausted before a verdict."""


class Equivalence:
    def __init__(self, mapping, scale=None):
        self.mapping = mapping
        self.scale = scale or {}

    def __bool__(self):
        return True


def _mono_dying(alg, mono):
    """Monomials whose powers eventually truncate away."""
    from .algebra import K, POLY_U

    nontrivial = False
    for kind, f in zip(alg.kinds, mono):
        if kind == K:
            l, r, u, v, w = f
            if w or l != r:
                return False
            if u > 0:
                nontrivial = True
            elif v != 0:
                if l == 0:
                    nontrivial = True
                else:
                    return False  # V^k in idempotent 1 never dies
        elif kind == POLY_U:
            if f[0] > 0:
                nontrivial = True
        else:
            if f[0] != f[1]:
                return False
    return nontrivial


def equiv_check(X, Y, n, budget=10 ** 6, scalings=True):
    """Reduce X and Y, then search for an isomorphism of the reduced
    models at truncation n.

    Returns an Equivalence (truthy, carries the generator bijection),
    False, or raises Inconclusive when the budget runs out.  Tier one
    matches arrow coefficients exactly; with `scalings`, a second tier
    allows rescaling each generator by a certified unit (an idempotent
    plus ideal-dying terms), solved by F2 linear algebra.
    """
    if isinstance(X, TypeDModule):
        rx = reduce_typed(X, level=n, with_maps=False)
    else:
        rx = X
    if isinstance(Y, TypeDModule):
        ry = reduce_typed(Y, level=n, with_maps=False)
    else:
        ry = Y
    A = rx.small.truncated(n) if hasattr(rx, "small") else rx.truncated(n)
    B = ry.small.truncated(n) if hasattr(ry, "small") else ry.truncated(n)
    res = _match(A, B, n, budget, exact=True)
    if res:
        return res
    if scalings:
        res = _match(A, B, n, budget, exact=False)
        if res:
            return res
    return False


def _match(A, B, n, budget, exact):
    by_idem_a, by_idem_b = {}, {}
    for g, e in A.generators.items():
        by_idem_a.setdefault(e, []).append(g)
    for g, e in B.generators.items():
        by_idem_b.setdefault(e, []).append(g)
    if set(by_idem_a) != set(by_idem_b):
        if A.generators or B.generators:
            return False
    for e in by_idem_a:
        if len(by_idem_a[e]) != len(by_idem_b.get(e, ())):
            return False

    gens_a = sorted(A.generators, key=str)
    counter = {"n": 0}

    def extend(mapping, used):
        counter["n"] += 1
        if counter["n"] > budget:
            raise Inconclusive("equiv_check budget exceeded")
        if len(mapping) == len(gens_a):
            if exact:
                return Equivalence(dict(mapping))
            return _certify_scaled(A, B, mapping, n)
        g = gens_a[len(mapping)]
        for h in sorted(by_idem_b[A.generators[g]], key=str):
            if h in used:
                continue
            mapping[g] = h
            used.add(h)
            if _locally_consistent(A, B, mapping, g, exact):
                res = extend(mapping, used)
                if res:
                    return res
            del mapping[g]
            used.discard(h)
        return None

    res = extend({}, set())
    return res if res else False


def _locally_consistent(A, B, mapping, g, exact):
    # prune on arrow pattern between already-mapped generators
    for x in mapping:
        for (s, t) in ((g, x), (x, g)):
            ca = A.delta_of(s).get(t, frozenset())
            cb = B.delta_of(mapping[s]).get(mapping[t], frozenset())
            if exact:
                if ca != cb:
                    return False
            else:
                if bool(ca) != bool(cb):
                    return False
    return True


def _certify_scaled(A, B, mapping, n):
    """Solve for per-generator unit rescalings making the bijection a
    strict isomorphism mod the level-n ideal.

    The map is f(g) = mapping[g] (x) v_g with v_g = unit + (dying terms);
    strict intertwining demands, per arrow g -> g',

        v_{g'} * cA(g,g') + cB(f g, f g') * v_g = 0 (mod J_n).

    This is F2-linear in the dying coefficients of the v's.
    """
    alg = A.algebra
    gens = sorted(A.generators, key=str)
    # unknown basis: dying monomials per generator, exponent-bounded
    basis = {}
    for g in gens:
        e = A.generators[g]
        pool = [m for m in _diag_monomials(alg, e, n)
                if _mono_dying(alg, m)]
        basis[g] = pool
    cols = []
    for g in gens:
        for m in basis[g]:
            cols.append((g, m))
    col_index = {c: i for i, c in enumerate(cols)}

    rows = {}  # (g, g2, out-mono) -> bitmask of unknowns / parity constant

    def add(key, col=None):
        mask, const = rows.get(key, (0, 0))
        if col is None:
            const ^= 1
        else:
            mask ^= 1 << col_index[col]
        rows[key] = (mask, const)

    for g in gens:
        unit_g = alg.unit(A.generators[g])
        for g2, ca in A.delta_of(g).items():
            cb = B.delta_of(mapping[g]).get(mapping[g2], frozenset())
            _linearize(alg, g, g2, ca, cb, unit_g,
                       alg.unit(A.generators[g2]), basis, add, n)
        # arrows present in B but absent in A
        for h2, cb in B.delta_of(mapping[g]).items():
            g2 = _inv(mapping, h2)
            if g2 is None or g2 in A.delta_of(g):
                continue
            _linearize(alg, g, g2, frozenset(), cb, unit_g,
                       alg.unit(A.generators[g2]), basis, add, n)

    sol = _solve_f2(rows.values(), len(cols))
    if sol is None:
        return None
    scale = {}
    for g in gens:
        elems = {alg.unit(A.generators[g])}
        for m in basis[g]:
            if (sol >> col_index[(g, m)]) & 1:
                elems.add(m)
        scale[g] = frozenset(elems)
    return Equivalence(dict(mapping), scale)


def _linearize(alg, g, g2, ca, cb, unit_g, unit_g2, basis, add, n):
    # constant part: v = unit on both sides
    for m in alg.truncate(ca, n):
        add((g, g2, m))
    for m in alg.truncate(cb, n):
        add((g, g2, m))
    # v_{g2} * ca terms
    for w in basis[g2]:
        for a in ca:
            prod = alg.mul_mono(w, a)
            if prod is not None and not alg.mono_in_ideal(prod, n):
                add((g, g2, prod), (g2, w))
    # cb * v_g terms
    for w in basis[g]:
        for b in cb:
            prod = alg.mul_mono(b, w)
            if prod is not None and not alg.mono_in_ideal(prod, n):
                add((g, g2, prod), (g, w))


def _diag_monomials(alg, idem, n, vcap=None):
    """Diagonal monomials at an idempotent with exponents below n."""
    from .algebra import CUBE, K, POLY_U

    vcap = n if vcap is None else vcap
    pools = []
    for kind, e in zip(alg.kinds, idem):
        if kind == K:
            if e == 0:
                pool = [(0, 0, u, v, 0)
                        for u in range(n) for v in range(n)]
            else:
                pool = [(1, 1, u, v, 0)
                        for u in range(n) for v in range(-vcap, vcap + 1)]
        elif kind == POLY_U:
            pool = [(k,) for k in range(n)]
        elif kind == CUBE:
            pool = [(e, e)]
        else:
            pool = [(e, e)]
        pools.append(pool)
    out = [()]
    for p in pools:
        out = [m + (f,) for m in out for f in p]
    return out


def _inv(mapping, h):
    for g, hh in mapping.items():
        if hh == h:
            return g
    return None


def _solve_f2(rows, ncols):
    """Solve the F2 system; rows are (mask, const).  Returns a solution
    bitmask or None."""
    pivots = {}
    for mask, const in rows:
        for p, (pm, pc) in pivots.items():
            if (mask >> p) & 1:
                mask ^= pm
                const ^= pc
        if mask == 0:
            if const:
                return None
            continue
        p = mask.bit_length() - 1
        pivots[p] = (mask, const)
    sol = 0
    for p in sorted(pivots, reverse=True):
        mask, const = pivots[p]
        val = const
        m = mask & ~(1 << p)
        while m:
            b = m & -m
            if (sol >> (b.bit_length() - 1)) & 1:
                val ^= 1
            m ^= b
        if val:
            sol |= 1 << p
    return sol

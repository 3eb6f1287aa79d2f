"""Type-D modules over the surgery algebras, and their morphisms.

A type-D module X^A is a based module with a structure map
delta^1: X -> X (x) A satisfying (id (x) mu_2)(delta^1 (x) id)delta^1 = 0.
Since completions are replaced by truncation throughout, the structure
relation and all morphism identities are checked after truncate(., n) at a
caller-chosen level.

Sparse representation: `delta[x][y]` is the F2 set of algebra monomials a
with delta^1(x) containing y (x) a.  Idempotent discipline for every entry:
left idempotent of a equals idem(y), right idempotent equals idem(x).
"""

from __future__ import annotations

import json

from .algebra import Algebra, k_algebra, tensor, trivial_algebra


class StructureError(ValueError):
    """Raised for idempotent mismatches and malformed module data."""


class WindowError(RuntimeError):
    """Raised when a computation escapes the materialized window."""


def _add_entry(table, x, y, elem):
    if not elem:
        return
    row = table.setdefault(x, {})
    new = row.get(y, frozenset()) ^ elem
    if new:
        row[y] = new
    else:
        del row[y]
        if not row:
            del table[x]


def _acc(table, key, elem):
    """XOR an F2 monomial set into a flat {key: frozenset} table."""
    if not elem:
        return
    new = table.get(key, frozenset()) ^ elem
    if new:
        table[key] = new
    else:
        del table[key]


class TypeDModule:
    """Finitely generated type-D module with explicit delta^1 table."""

    def __init__(self, algebra, generators, delta=None, check=True):
        self.algebra = algebra
        self.generators = dict(generators)  # name -> idempotent tuple
        self.delta = {}
        if delta:
            for x, row in delta.items():
                for y, elem in row.items():
                    self.add_delta(x, y, elem, check=check)

    # -- construction helpers ------------------------------------------

    def add_delta(self, x, y, elem, check=True):
        elem = frozenset(elem)
        if check:
            if x not in self.generators or y not in self.generators:
                raise StructureError("unknown generator in delta entry")
            for m in elem:
                if self.algebra.idem_right(m) != self.generators[x]:
                    raise StructureError(
                        "right idempotent mismatch at %r -> %r" % (x, y)
                    )
                if self.algebra.idem_left(m) != self.generators[y]:
                    raise StructureError(
                        "left idempotent mismatch at %r -> %r" % (x, y)
                    )
        _add_entry(self.delta, x, y, elem)

    def copy(self):
        out = TypeDModule(self.algebra, self.generators, check=False)
        out.delta = {x: dict(row) for x, row in self.delta.items()}
        return out

    def __repr__(self):
        return "TypeDModule(%d generators, %d arrows)" % (
            len(self.generators),
            sum(len(r) for r in self.delta.values()),
        )

    # -- structure relation ---------------------------------------------

    def delta_of(self, x):
        return self.delta.get(x, {})

    def delta_squared_defect(self, n):
        """The truncated composition (id (x) mu_2)(delta (x) id)delta.

        Returns a sparse table {x: {z: element}}; empty iff the structure
        relation holds at level n.
        """
        alg = self.algebra
        defect = {}
        for x, row in self.delta.items():
            for y, a in row.items():
                for z, b in self.delta_of(y).items():
                    prod = alg.truncate(alg.mul(b, a), n)
                    _add_entry(defect, x, z, prod)
        for x in list(defect):
            for z in list(defect[x]):
                cut = alg.truncate(defect[x][z], n)
                if cut:
                    defect[x][z] = cut
                else:
                    del defect[x][z]
            if not defect[x]:
                del defect[x]
        return defect

    def is_valid(self, n):
        return not self.delta_squared_defect(n)

    def truncated(self, n):
        out = TypeDModule(self.algebra, self.generators, check=False)
        for x, row in self.delta.items():
            for y, elem in row.items():
                cut = self.algebra.truncate(elem, n)
                if cut:
                    _add_entry(out.delta, x, y, cut)
        return out

    def idempotent_summand(self, idem):
        """Restrict to the generators with the given idempotent tuple."""
        gens = {g: e for g, e in self.generators.items() if e == idem}
        out = TypeDModule(self.algebra, gens, check=False)
        for x, row in self.delta.items():
            if x not in gens:
                continue
            for y, elem in row.items():
                if y in gens:
                    _add_entry(out.delta, x, y, elem)
        return out

    # -- serialization ----------------------------------------------------

    def to_json(self):
        alg = self.algebra
        return {
            "ell": len(alg),
            "generators": [
                {"name": _name_str(g), "idem": list(e)}
                for g, e in self.generators.items()
            ],
            "delta": [
                {
                    "from": _name_str(x),
                    "to": _name_str(y),
                    "coeff": alg.render(elem),
                }
                for x, row in self.delta.items()
                for y, elem in row.items()
            ],
        }

    @classmethod
    def from_json(cls, data, algebra=None):
        alg = algebra or k_algebra(int(data["ell"]))
        gens = {g["name"]: tuple(g["idem"]) for g in data["generators"]}
        mod = cls(alg, gens)
        for arrow in data.get("delta", []):
            mod.add_delta(
                arrow["from"], arrow["to"], alg.parse(arrow["coeff"])
            )
        return mod

    def dumps(self, **kw):
        return json.dumps(self.to_json(), **kw)


def _name_str(g):
    if isinstance(g, str):
        return g
    if isinstance(g, tuple):
        return "(" + ",".join(_name_str(p) for p in g) + ")"
    return str(g)


class MorphismD:
    """A degree-homogeneous map f^1: X -> Y (x) A between type-D modules."""

    def __init__(self, source, target, components=None, check=True):
        if source.algebra != target.algebra:
            raise StructureError("morphism between different algebras")
        self.source = source
        self.target = target
        self.components = {}
        if components:
            for x, row in components.items():
                for y, elem in row.items():
                    self.add(x, y, elem, check=check)

    def add(self, x, y, elem, check=True):
        elem = frozenset(elem)
        if check:
            alg = self.source.algebra
            for m in elem:
                if alg.idem_right(m) != self.source.generators[x]:
                    raise StructureError("morphism right idempotent mismatch")
                if alg.idem_left(m) != self.target.generators[y]:
                    raise StructureError("morphism left idempotent mismatch")
        _add_entry(self.components, x, y, elem)

    def __call__(self, x):
        return self.components.get(x, {})

    def is_zero(self):
        return not self.components

    def __add__(self, other):
        out = MorphismD(self.source, self.target, self.components,
                        check=False)
        for x, row in other.components.items():
            for y, elem in row.items():
                _add_entry(out.components, x, y, elem)
        return out

    def truncated(self, n):
        alg = self.source.algebra
        out = MorphismD(self.source, self.target, check=False)
        for x, row in self.components.items():
            for y, elem in row.items():
                _add_entry(out.components, x, y, alg.truncate(elem, n))
        return out

    def equal_after(self, other, n):
        return not (self + other).truncated(n).components


def identity_morphism(X):
    f = MorphismD(X, X, check=False)
    for g, idem in X.generators.items():
        f.add(g, g, frozenset({X.algebra.unit(idem)}), check=False)
    return f


def mor_diff(f, n=None):
    """The morphism differential d_Mor(f) = mu(f, delta) + mu(delta, f).

    With n given, the result is truncated at level n.
    """
    X, Y = f.source, f.target
    alg = X.algebra
    out = MorphismD(X, Y, check=False)
    for x, row in X.delta.items():
        for y, a in row.items():
            for z, b in f(y).items():
                out.add(x, z, alg.mul(b, a), check=False)
    for x, row in f.components.items():
        for y, a in row.items():
            for z, b in Y.delta_of(y).items():
                out.add(x, z, alg.mul(b, a), check=False)
    return out.truncated(n) if n is not None else out


def compose_mor(g, f, n=None):
    """Composition (id (x) mu_2)(g (x) id) f of type-D morphisms."""
    if f.target is not g.source and f.target.generators != g.source.generators:
        raise StructureError("compose_mor: target/source mismatch")
    alg = f.source.algebra
    out = MorphismD(f.source, g.target, check=False)
    for x, row in f.components.items():
        for y, a in row.items():
            for z, b in g(y).items():
                out.add(x, z, alg.mul(b, a), check=False)
    return out.truncated(n) if n is not None else out


def mapping_cone(f, n, check=True):
    """Cone(f^1) for a cycle f^1, generators tagged ('s', x) and ('t', y)."""
    if check:
        defect = mor_diff(f, n)
        if defect.components:
            raise StructureError(
                "mapping_cone: morphism is not a cycle at level %d: %r"
                % (n, _defect_summary(f.source.algebra, defect.components))
            )
    X, Y = f.source, f.target
    alg = X.algebra
    gens = {("s", x): e for x, e in X.generators.items()}
    gens.update({("t", y): e for y, e in Y.generators.items()})
    cone = TypeDModule(alg, gens, check=False)
    for x, row in X.delta.items():
        for y, elem in row.items():
            cone.add_delta(("s", x), ("s", y), elem, check=False)
    for x, row in Y.delta.items():
        for y, elem in row.items():
            cone.add_delta(("t", x), ("t", y), elem, check=False)
    for x, row in f.components.items():
        for y, elem in row.items():
            cone.add_delta(("s", x), ("t", y), elem, check=False)
    return cone


def _defect_summary(alg, table):
    items = []
    for x, row in table.items():
        for y, elem in row.items():
            items.append("%s -> %s: %s" % (x, y, alg.render(elem)))
    return "; ".join(items[:4])


def direct_sum(X, Y):
    gens = {("l", x): e for x, e in X.generators.items()}
    gens.update({("r", y): e for y, e in Y.generators.items()})
    out = TypeDModule(X.algebra, gens, check=False)
    for tag, M in (("l", X), ("r", Y)):
        for x, row in M.delta.items():
            for y, elem in row.items():
                out.add_delta((tag, x), (tag, y), elem, check=False)
    return out


def external_tensor_D(X, Y):
    """External tensor of type-D modules over the tensor algebra.

    delta = delta_X (x) id (x) 1 + id (x) 1 (x) delta_Y, with generators
    (x, y) and idempotents concatenated.
    """
    algX, algY = X.algebra, Y.algebra
    alg = tensor(algX, algY)
    gens = {}
    for x, ex in X.generators.items():
        for y, ey in Y.generators.items():
            gens[(x, y)] = ex + ey
    out = TypeDModule(alg, gens, check=False)
    for x, row in X.delta.items():
        for x2, elem in row.items():
            for y, ey in Y.generators.items():
                unit = Y.algebra.unit(ey)
                lifted = frozenset(m + unit for m in elem)
                out.add_delta((x, y), (x2, y), lifted, check=False)
    for y, row in Y.delta.items():
        for y2, elem in row.items():
            for x, ex in X.generators.items():
                unit = X.algebra.unit(ex)
                lifted = frozenset(unit + m for m in elem)
                out.add_delta((x, y), (x, y2), lifted, check=False)
    return out


def random_morphism(X, Y, rng, density=0.35, monomials=None):
    """A random sparse morphism, for property tests."""
    alg = X.algebra
    f = MorphismD(X, Y, check=False)
    if monomials is None:
        monomials = {}
    for x, ex in X.generators.items():
        for y, ey in Y.generators.items():
            if rng.random() > density:
                continue
            pool = monomials.get((ey, ex))
            if pool is None:
                pool = _connecting_monomials(alg, ey, ex)
                monomials[(ey, ex)] = pool
            if pool:
                f.add(x, y, frozenset({rng.choice(pool)}), check=False)
    return f


def _connecting_monomials(alg, left, right, max_exp=2):
    """Small monomials with the given left/right idempotents."""
    from .algebra import CUBE, K, POLY_U

    pools = []
    for kind, l, r in zip(alg.kinds, left, right):
        opts = []
        if kind == K:
            if (l, r) == (0, 0):
                opts = [(0, 0, u, v, 0)
                        for u in range(max_exp + 1)
                        for v in range(max_exp + 1)]
            elif (l, r) == (1, 1):
                opts = [(1, 1, u, v, 0)
                        for u in range(max_exp + 1)
                        for v in range(-max_exp, max_exp + 1)]
            elif (l, r) == (1, 0):
                opts = [(1, 0, u, v, w)
                        for u in range(max_exp + 1)
                        for v in range(-max_exp, max_exp + 1)
                        for w in (1, 2)]
        elif kind == POLY_U:
            opts = [(k,) for k in range(max_exp + 1)]
        elif kind == CUBE:
            opts = [(l, r)] if l >= r else []
        else:
            opts = [(l, r)] if r <= l <= r + 1 else []
        if not opts:
            return []
        pools.append(opts)
    out = [()]
    for p in pools:
        out = [m + (f,) for m in out for f in p]
    return out


ZERO_MODULE = TypeDModule(trivial_algebra(), {})

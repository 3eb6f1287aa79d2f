"""Rule-based DA-bimodule evaluators and the box tensor product.

A `DAEvaluator` represents a (possibly infinitely generated) strictly
unital type-DA bimodule over a pair of tensor algebras.  Its structure
maps are evaluated on demand:

    delta(inputs, g) -> {g2: frozenset of output monomials}

where `inputs` is a tuple of input-algebra monomials in APPLICATION order
(the first entry acts first; the paper displays the reverse order
delta_{j+1}(a_j, ..., a_1, x)).  Composite outputs always multiply with
the later factor on the left, matching (id (x) mu_2)(delta (x) id)delta.

Type-D modules are evaluators with the empty input algebra; type-A
modules are evaluators with the empty output algebra.  The box tensor
product pairs the full output algebra of the left factor with the full
input algebra of the right factor; partial pairings are formed by first
extending scalars (`extend_scalars`), which is how the paper reduces
external tensor products to box products.
"""

from __future__ import annotations

from itertools import product as iproduct

from .algebra import Algebra, tensor, trivial_algebra
from .typed import StructureError, TypeDModule, WindowError, _acc


class DAEvaluator:
    """Base class: subclasses fill in algebras, generators and delta."""

    in_alg = None
    out_alg = None
    arity_bound = None  # max j+1 with delta_{j+1} nonzero

    def generators(self):
        raise NotImplementedError

    def gen_idem(self, g):
        """(left idempotent, right idempotent) of a generator."""
        raise NotImplementedError

    def delta(self, inputs, g):
        raise NotImplementedError

    # -- shared helpers -------------------------------------------------

    def _unit_action(self, inputs, g):
        """Strict unitality: returns a result dict if the inputs contain a
        unit (identity for a single matching unit, zero otherwise), else
        None to signal that the ordinary rules apply."""
        units = [self.in_alg.is_unit(a) for a in inputs]
        if not any(units):
            return None
        if len(inputs) == 1:
            a = inputs[0]
            if self.in_alg.idem_right(a) == self.gen_idem(g)[0]:
                out = self.out_alg.unit(self.gen_idem(g)[1])
                return {g: frozenset({out})}
            return {}
        return {}

    def _chain_ok(self, inputs, g):
        """Idempotent compatibility along the input sequence."""
        cur = self.gen_idem(g)[0]
        for a in inputs:
            if self.in_alg.idem_right(a) != cur:
                return False
            cur = self.in_alg.idem_left(a)
        return True

    def gen_weight(self, g):
        """Window position of a generator; 0 for finitely generated."""
        return 0

    def materialize(self, level=None, strict=True):
        """The delta_1 part as a TypeDModule over the output algebra.

        Outputs escaping the enumerated generator set raise WindowError
        when their coefficient survives truncation at `level` (always
        raise when level is None and strict is set).
        """
        gens = {}
        for g in self.generators():
            gens[g] = self.gen_idem(g)[1]
        mod = TypeDModule(self.out_alg, gens, check=False)
        for g in gens:
            for g2, elem in self.delta((), g).items():
                if level is not None:
                    elem = self.out_alg.truncate(elem, level)
                if not elem:
                    continue
                if g2 not in gens:
                    if strict:
                        raise WindowError(
                            "delta escapes window: %r -> %r" % (g, g2)
                        )
                    continue
                mod.add_delta(g, g2, elem, check=False)
        return mod


class MergeLike(DAEvaluator):
    """Shared coefficient rules for the merge-family bimodules over
    (K^(x)n, K): the diagonal product action and the higher action on
    coefficiented sigma-hat / tau-hat sequences.

    The k-th applied higher input must carry its arrow in tensor factor
    k-1, with idempotent-1 diagonal factors before it and idempotent-0
    diagonal factors after it.  Pushing the left coefficients through the
    remaining arrow inputs applies I (sigma) or T (tau) once to factor
    `fac` of the k-th coefficient whenever fac >= k.
    """

    n = None

    def merge_diagonal(self, mono, e):
        U = V = 0
        for f in mono:
            if f[4] != 0 or f[0] != e or f[1] != e:
                return None
            U += f[2]
            V += f[3]
        from .algebra import k_mono

        return (k_mono(e, e, U, V, 0),)

    def merge_arrows(self, inputs):
        n = self.n
        if len(inputs) != n:
            return None
        w = inputs[0][0][4]
        if w == 0:
            return None
        U = V = 0
        for k, A in enumerate(inputs, start=1):
            for fac in range(n):
                f = A[fac]
                if fac == k - 1:
                    if f[4] != w:
                        return None
                else:
                    if f[4] != 0:
                        return None
                    if f[0] != (1 if fac < k - 1 else 0):
                        return None
                fu, fv = f[2], f[3]
                if fac >= k and w == 2:
                    fu, fv = fv, 2 * fv - fu
                U += fu
                V += fv
        from .algebra import k_mono

        return (k_mono(1, 0, U, V, w),)


class TypeDEvaluator(DAEvaluator):
    """A finite type-D module viewed as a DA evaluator with no inputs."""

    def __init__(self, module):
        self.module = module
        self.in_alg = trivial_algebra()
        self.out_alg = module.algebra
        self.arity_bound = 1

    def generators(self):
        return iter(self.module.generators)

    def gen_idem(self, g):
        return ((), self.module.generators[g])

    def delta(self, inputs, g):
        u = self._unit_action(inputs, g)
        if u is not None:
            return u
        if inputs:
            return {}
        return {y: elem for y, elem in self.module.delta_of(g).items()}


class IdentityEvaluator(DAEvaluator):
    """The identity bimodule of an algebra; generators are idempotents."""

    def __init__(self, algebra):
        self.in_alg = algebra
        self.out_alg = algebra
        self.arity_bound = 2

    def generators(self):
        return iter(self.in_alg.idem_values())

    def gen_idem(self, g):
        return (g, g)

    def delta(self, inputs, g):
        u = self._unit_action(inputs, g)
        if u is not None:
            return u
        if len(inputs) != 1:
            return {}
        a = inputs[0]
        if self.in_alg.idem_right(a) != g:
            return {}
        return {self.in_alg.idem_left(a): frozenset({a})}


class ExtendedEvaluator(DAEvaluator):
    """Extension of scalars: a bimodule over (A, B) becomes one over
    (A (x) C, B (x) C), with the C-inputs multiplied straight through:

        delta(a_j|c_j, ..., a_1|c_1, x|k) = delta(a_j..a_1, x) (x) k
                                            (x) (c_j ... c_1).

    `in_map` and `out_map` describe the factor layout of the new input
    and output algebras as sequences of ("own", i) / ("ext", e) tags.
    Each extension factor index e appears exactly once in both maps.
    """

    def __init__(self, inner, ext_kinds, in_map, out_map):
        self.inner = inner
        self.ext_kinds = tuple(ext_kinds)
        self.in_map = tuple(in_map)
        self.out_map = tuple(out_map)
        self.in_alg = Algebra(tuple(
            inner.in_alg.kinds[i] if tag == "own" else self.ext_kinds[i]
            for tag, i in self.in_map
        ))
        self.out_alg = Algebra(tuple(
            inner.out_alg.kinds[i] if tag == "own" else self.ext_kinds[i]
            for tag, i in self.out_map
        ))
        self.ext_alg = Algebra(self.ext_kinds)
        self.arity_bound = max(inner.arity_bound, 2)

    def generators(self):
        for x in self.inner.generators():
            for k in self.ext_alg.idem_values():
                yield (x, k)

    def gen_idem(self, g):
        x, k = g
        il, ir = self.inner.gen_idem(x)
        left = tuple(
            il[i] if tag == "own" else k[i] for tag, i in self.in_map
        )
        right = tuple(
            ir[i] if tag == "own" else k[i] for tag, i in self.out_map
        )
        return (left, right)

    def gen_weight(self, g):
        return self.inner.gen_weight(g[0])

    def _split_in(self, mono):
        own = [None] * len(self.inner.in_alg)
        ext = [None] * len(self.ext_kinds)
        for f, (tag, i) in zip(mono, self.in_map):
            if tag == "own":
                own[i] = f
            else:
                ext[i] = f
        return tuple(own), tuple(ext)

    def _join_out(self, own, ext):
        return tuple(
            own[i] if tag == "own" else ext[i] for tag, i in self.out_map
        )

    def delta(self, inputs, g):
        x, k = g
        u = self._unit_action(inputs, g)
        if u is not None:
            return u
        if not self._chain_ok(inputs, g):
            return {}
        owns, exts = [], []
        for a in inputs:
            own, ext = self._split_in(a)
            owns.append(own)
            exts.append(ext)
        cprod = self.ext_alg.unit(k)
        for e in exts:  # application order; later factors on the left
            cprod = self.ext_alg.mul_mono(e, cprod)
            if cprod is None:
                return {}
        k2 = self.ext_alg.idem_left(cprod)
        inner_res = self.inner.delta(tuple(owns), x)
        out = {}
        for x2, elems in inner_res.items():
            joined = frozenset(self._join_out(m, cprod) for m in elems)
            _acc(out, (x2, k2), joined)
        return out


def extend_scalars(inner, ext_kinds, in_pos=None, out_pos=None):
    """Append (by default) extension factors to both sides of `inner`.

    `in_pos`/`out_pos` give the factor index at which the block of
    extension factors is inserted; None appends at the end.
    """
    n_in, n_out, n_ext = len(inner.in_alg), len(inner.out_alg), len(ext_kinds)
    if in_pos is None:
        in_pos = n_in
    if out_pos is None:
        out_pos = n_out
    in_map = (
        [("own", i) for i in range(in_pos)]
        + [("ext", e) for e in range(n_ext)]
        + [("own", i) for i in range(in_pos, n_in)]
    )
    out_map = (
        [("own", i) for i in range(out_pos)]
        + [("ext", e) for e in range(n_ext)]
        + [("own", i) for i in range(out_pos, n_out)]
    )
    return ExtendedEvaluator(inner, ext_kinds, in_map, out_map)


class PermutedEvaluator(DAEvaluator):
    """Reorders the input and output tensor factors of an evaluator.

    `in_perm[j]` is the inner factor index shown at new position j.
    """

    def __init__(self, inner, in_perm=None, out_perm=None):
        self.inner = inner
        self.in_perm = tuple(in_perm if in_perm is not None
                             else range(len(inner.in_alg)))
        self.out_perm = tuple(out_perm if out_perm is not None
                              else range(len(inner.out_alg)))
        self.in_alg = Algebra(tuple(inner.in_alg.kinds[i]
                                    for i in self.in_perm))
        self.out_alg = Algebra(tuple(inner.out_alg.kinds[i]
                                     for i in self.out_perm))
        self.arity_bound = inner.arity_bound
        self._in_inv = _invert(self.in_perm)
        self._out_inv = _invert(self.out_perm)

    def generators(self):
        return self.inner.generators()

    def gen_weight(self, g):
        return self.inner.gen_weight(g)

    def gen_idem(self, g):
        l, r = self.inner.gen_idem(g)
        return (tuple(l[i] for i in self.in_perm),
                tuple(r[i] for i in self.out_perm))

    def delta(self, inputs, g):
        inner_inputs = tuple(
            tuple(a[self._in_inv[i]] for i in range(len(a)))
            for a in inputs
        )
        res = self.inner.delta(inner_inputs, g)
        out = {}
        for g2, elems in res.items():
            out[g2] = frozenset(
                tuple(m[i] for i in self.out_perm) for m in elems
            )
        return out


def _invert(perm):
    inv = [0] * len(perm)
    for j, i in enumerate(perm):
        inv[i] = j
    return inv


class BoxEvaluator(DAEvaluator):
    """Box tensor product M (x) N, pairing all of M's output algebra with
    all of N's input algebra.  N must be operationally bounded: the sum

        delta(x (x) y) = sum_k (id (x) delta^N_{k+1})(delta_M^k(x), y)

    terminates because delta^N_{k+1} = 0 for k+1 > N.arity_bound.
    """

    def __init__(self, left, right):
        if left.out_alg != right.in_alg:
            raise StructureError(
                "box: output algebra %r != input algebra %r"
                % (left.out_alg.kinds, right.in_alg.kinds)
            )
        if right.arity_bound is None:
            raise StructureError("box: right factor must be bounded")
        self.left = left
        self.right = right
        self.in_alg = left.in_alg
        self.out_alg = right.out_alg
        lb = left.arity_bound or 1
        self.arity_bound = max((lb - 1) * (right.arity_bound - 1) + 1, 1)
        self._memo = {}

    def generators(self):
        rights = list(self.right.generators())
        for x in self.left.generators():
            xr = self.left.gen_idem(x)[1]
            for y in rights:
                if self.right.gen_idem(y)[0] == xr:
                    yield (x, y)

    def gen_idem(self, g):
        x, y = g
        return (self.left.gen_idem(x)[0], self.right.gen_idem(y)[1])

    def gen_weight(self, g):
        return max(self.left.gen_weight(g[0]), self.right.gen_weight(g[1]))

    def delta(self, inputs, g):
        key = (inputs, g)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._delta(inputs, g)
        if len(self._memo) < 1_000_000:
            self._memo[key] = out
        return out

    def _delta(self, inputs, g):
        x, y = g
        if not self._chain_ok(inputs, g):
            return {}
        max_steps = self.right.arity_bound - 1
        lb = self.left.arity_bound
        out = {}
        # DFS over sequences of left-module applications.  State: current
        # left generator, outputs produced so far (application order), and
        # how many inputs have been consumed.
        stack = [(x, (), 0)]
        while stack:
            xc, outs, i = stack.pop()
            if i == len(inputs):
                res = self.right.delta(outs, y)
                for y2, elems in res.items():
                    _acc(out, (xc, y2), elems)
            if len(outs) >= max_steps:
                continue
            remaining = len(inputs) - i
            top = remaining if lb is None else min(remaining, lb - 1)
            for b in range(top + 1):
                block = inputs[i:i + b]
                for x2, elems in self.left.delta(block, xc).items():
                    for m in elems:
                        stack.append((x2, outs + (m,), i + b))
        return out


def box(left, right, pairs=None):
    """Box tensor product with optional partial pairing.

    `pairs` is a list of (left output factor index, right input factor
    index) pairs; both sequences must be strictly increasing.  Unpaired
    right-input factors become inputs of the result (appended after the
    left inputs); unpaired left-output factors become outputs of the
    result (appended after... they are interleaved into the right factor
    by extension of scalars, so they end up in the output positions the
    right factor assigns them).  With pairs=None the full output of
    `left` is paired with the full input of `right` in order.
    """
    m, p = len(left.out_alg), len(right.in_alg)
    if pairs is None:
        pairs = list(zip(range(m), range(p)))
    lp = [a for a, _ in pairs]
    rp = [b for _, b in pairs]
    assert lp == sorted(lp) and rp == sorted(rp), "pairing must be monotone"
    for a, b in pairs:
        if left.out_alg.kinds[a] != right.in_alg.kinds[b]:
            raise StructureError("box: paired factor kinds differ")

    lun = [i for i in range(m) if i not in lp]      # passthrough left outs
    run = [j for j in range(p) if j not in rp]      # leftover right ins

    lx = left
    if run:
        kinds = tuple(right.in_alg.kinds[j] for j in run)
        lx = extend_scalars(left, kinds)
    # glue algebra: left's outputs in order, then leftover right inputs
    rx = right
    if lun or run:
        ext_kinds = tuple(left.out_alg.kinds[i] for i in lun)
        pos_of_right = {}
        for (a, b) in pairs:
            pos_of_right[b] = a
        for tail, j in enumerate(run):
            pos_of_right[j] = m + tail
        in_map = [None] * (m + len(run))
        for j in range(p):
            in_map[pos_of_right[j]] = ("own", j)
        for e, i in enumerate(lun):
            in_map[i] = ("ext", e)
        out_map = [("own", i) for i in range(len(right.out_alg))]
        out_map += [("ext", e) for e in range(len(lun))]
        rx = ExtendedEvaluator(right, ext_kinds, in_map, out_map)
    return BoxEvaluator(lx, rx)


def box_module(module, right, pairs=None):
    """Box a TypeDModule with an evaluator."""
    return box(TypeDEvaluator(module), right, pairs=pairs)


def external_tensor_da(M, N):
    """External tensor product of DA bimodules via extension of scalars:
    E(M; C) (x) E(N; B) for M over (A, B) and N over (C, D)."""
    MC = extend_scalars(M, N.in_alg.kinds)          # (A@C -> B@C)
    NB = extend_scalars(N, M.out_alg.kinds,
                        in_pos=0, out_pos=0)        # (B@C -> B@D)
    return BoxEvaluator(MC, NB)


def check_da_relations(ev, sequences, level=None, gens=None):
    """Verify the DA structure relations on explicit input sequences.

    `sequences` is an iterable of tuples of input monomials in
    application order.  Returns a list of violations (empty if all hold
    after truncation at `level`).
    """
    alg_in, alg_out = ev.in_alg, ev.out_alg
    gens = list(ev.generators()) if gens is None else list(gens)
    bad = []
    for seq in sequences:
        seq = tuple(seq)
        for g in gens:
            if not ev._chain_ok(seq, g):
                continue
            acc = {}
            n = len(seq)
            # composition terms: split the sequence, inner part first
            for i in range(n + 1):
                inner = ev.delta(seq[:i], g)
                for g1, elems1 in inner.items():
                    outer = ev.delta(seq[i:], g1)
                    for g2, elems2 in outer.items():
                        prod = alg_out.mul(elems2, elems1)
                        _acc(acc, g2, prod)
            # collapse terms: multiply adjacent inputs (later on left)
            for k in range(n - 1):
                mprod = alg_in.mul_mono(seq[k + 1], seq[k])
                if mprod is None:
                    continue
                collapsed = seq[:k] + (mprod,) + seq[k + 2:]
                for g2, elems in ev.delta(collapsed, g).items():
                    _acc(acc, g2, elems)
            for g2 in list(acc):
                elems = acc[g2]
                if level is not None:
                    elems = alg_out.truncate(elems, level)
                if elems:
                    bad.append((seq, g, g2, elems))
    return bad


def eval_equal(ev1, ev2, sequences, gen_map, level=None, sources=None):
    """Exact structure-constant comparison of two evaluators.

    `gen_map` maps ev1 generators to ev2 generators (it must cover every
    generator reachable from the compared sources); `sources` optionally
    restricts which generators are compared.  Returns the list of
    disagreements on the given input sequences.
    """
    bad = []
    pairs = [(g, gen_map[g]) for g in (sources if sources is not None
                                       else gen_map)]
    for seq in sequences:
        seq = tuple(seq)
        for g1, g2 in pairs:
            if not ev1._chain_ok(seq, g1):
                continue
            r1 = ev1.delta(seq, g1)
            r2 = ev2.delta(seq, g2)
            r1m = {gen_map[h]: e for h, e in r1.items() if e}
            if level is not None:
                r1m = {h: ev1.out_alg.truncate(e, level)
                       for h, e in r1m.items()}
                r2 = {h: ev2.out_alg.truncate(e, level)
                      for h, e in r2.items()}
                r1m = {h: e for h, e in r1m.items() if e}
                r2 = {h: e for h, e in r2.items() if e}
            if r1m != {h: e for h, e in r2.items() if e}:
                bad.append((seq, g1, r1m, r2))
    return bad


class DAMorphism:
    """A rule-based morphism of DA bimodules F: M -> N over the same
    algebra pair.  `gen_map` gives the length-one part F_1 (with unit
    coefficient); `rules` is a list of callables `(inputs, g) -> {g2:
    elems}` providing the higher components, in application order."""

    def __init__(self, source, target, gen_map, rules=()):
        self.source = source
        self.target = target
        self.gen_map = gen_map if hasattr(gen_map, "get") else dict(gen_map)
        self.rules = list(rules)

    def components(self, inputs, g):
        out = {}
        if not inputs:
            g2 = self.gen_map.get(g)
            if g2 is not None:
                unit = self.target.out_alg.unit(self.target.gen_idem(g2)[1])
                _acc(out, g2, frozenset({unit}))
            return out
        for rule in self.rules:
            for g2, elems in rule(inputs, g).items():
                _acc(out, g2, elems)
        return out


def morphism_defect(F, sequences, level=None, gens=None):
    """Sampled d_Mor(F); empty when F is a cycle on the sample.

    d_Mor(F)(seq, g) = sum_i mu(F(tail), delta_M(head, g))
                     + sum_i mu(delta_N(tail), F(head, g))
                     + sum_k F(seq with adjacent inputs multiplied, g).
    """
    M, N = F.source, F.target
    alg_out = M.out_alg
    alg_in = M.in_alg
    gens = list(M.generators()) if gens is None else list(gens)
    bad = []
    for seq in sequences:
        seq = tuple(seq)
        for g in gens:
            if not M._chain_ok(seq, g):
                continue
            acc = {}
            n = len(seq)
            for i in range(n + 1):
                for g1, e1 in M.delta(seq[:i], g).items():
                    for g2, e2 in F.components(seq[i:], g1).items():
                        _acc(acc, g2, alg_out.mul(e2, e1))
                for g1, e1 in F.components(seq[:i], g).items():
                    for g2, e2 in N.delta(seq[i:], g1).items():
                        _acc(acc, g2, alg_out.mul(e2, e1))
            for k in range(n - 1):
                prod = alg_in.mul_mono(seq[k + 1], seq[k])
                if prod is None:
                    continue
                collapsed = seq[:k] + (prod,) + seq[k + 2:]
                for g2, elems in F.components(collapsed, g).items():
                    _acc(acc, g2, elems)
            for g2 in list(acc):
                elems = acc[g2]
                if level is not None:
                    elems = alg_out.truncate(elems, level)
                if elems:
                    bad.append((seq, g, g2, elems))
    return bad


def input_sequences(alg, max_len, pool):
    """All input sequences up to max_len from a monomial pool."""
    seqs = [()]
    out = [()]
    for _ in range(max_len):
        seqs = [s + (m,) for s in seqs for m in pool]
        out.extend(seqs)
    return out

"""Exact linear algebra over F2 and F2[U].

Polynomials over F2[U] are stored as int bitmasks (bit k is the U^k
coefficient), so addition is xor and multiplication is a carry-less
product.  F2[U] is Euclidean, which gives Smith normal form by repeated
division; after completion to power series, an invariant factor f is a
unit times U^(its U-order), so homology is reported as a free rank plus
the list of positive U-orders ("torsion towers").
"""

from __future__ import annotations


def p_mul(a, b):
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def p_divmod(a, b):
    """Polynomial division over F2; b != 0."""
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    db = b.bit_length() - 1
    q = 0
    while a and a.bit_length() - 1 >= db:
        shift = a.bit_length() - 1 - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def p_order(a):
    """The U-order: the exponent of the lowest nonzero term."""
    if a == 0:
        return None
    return (a & -a).bit_length() - 1


def p_gcd(a, b):
    while b:
        a, b = b, p_divmod(a, b)[1]
    return a


class PolyMatrix:
    """A dense matrix of F2[U] bitmask polynomials."""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.data = [[0] * cols for _ in range(rows)]
        if entries:
            for (i, j), v in entries.items():
                self.data[i][j] = v

    def copy(self):
        out = PolyMatrix(self.rows, self.cols)
        out.data = [row[:] for row in self.data]
        return out

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def __setitem__(self, ij, v):
        self.data[ij[0]][ij[1]] = v


def snf(matrix):
    """Invariant factors of a PolyMatrix over F2[U].

    Returns the nonzero diagonal entries of the Smith normal form, each
    dividing the next.
    """
    M = matrix.copy()
    m, n = M.rows, M.cols
    D = M.data
    factors = []
    k = 0
    while k < min(m, n):
        # find a pivot of minimal degree
        piv = None
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if D[i][j]:
                    d = D[i][j].bit_length()
                    if best is None or d < best:
                        best, piv = d, (i, j)
        if piv is None:
            break
        pi, pj = piv
        D[k], D[pi] = D[pi], D[k]
        for row in D:
            row[k], row[pj] = row[pj], row[k]
        while True:
            # clear column k with row operations
            again = False
            for i in range(k + 1, m):
                if D[i][k]:
                    q, r = p_divmod(D[i][k], D[k][k])
                    for j in range(k, n):
                        D[i][j] ^= p_mul(q, D[k][j])
                    if r:
                        D[k], D[i] = D[i], D[k]
                        again = True
            if any(D[i][k] for i in range(k + 1, m)):
                continue
            for j in range(k + 1, n):
                if D[k][j]:
                    q, r = p_divmod(D[k][j], D[k][k])
                    for i in range(k, m):
                        D[i][j] ^= p_mul(q, D[i][k])
                    if r:
                        for i in range(k, m):
                            D[i][k], D[i][j] = D[i][j], D[i][k]
                        again = True
            if not again and not any(D[k][j] for j in range(k + 1, n)):
                break
        factors.append(D[k][k])
        k += 1
    # fix the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            a, b = factors[i], factors[i + 1]
            if p_divmod(b, a)[1]:
                g = p_gcd(a, b)
                lcm = p_divmod(p_mul(a, b), g)[0]
                factors[i], factors[i + 1] = g, lcm
                changed = True
    return factors


class TowerProfile:
    """Homology over F2[[U]]: free tower count and torsion U-orders.

    `classes` optionally records a decomposition (per connected component
    of the reduced complex) as (free, sorted torsion orders) pairs.
    """

    def __init__(self, free, torsion, classes=None):
        self.free = free
        self.torsion = tuple(sorted(torsion))
        self.classes = tuple(classes) if classes else None

    def __eq__(self, other):
        return (isinstance(other, TowerProfile)
                and self.free == other.free
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.free, self.torsion))

    def __repr__(self):
        return "TowerProfile(free=%d, torsion=%r)" % (
            self.free, list(self.torsion))

    def describe(self):
        bits = ["%d free tower%s" % (self.free, "" if self.free == 1 else "s")]
        if self.torsion:
            bits.append("torsion U-orders %s" % (list(self.torsion),))
        else:
            bits.append("no torsion")
        out = ", ".join(bits)
        if self.classes is not None:
            out += "; classes: " + ", ".join(
                "(%d free%s)" % (f, ", torsion %s" % list(t) if t else "")
                for f, t in self.classes)
        return out

    def to_json(self):
        data = {"free": self.free, "torsion": list(self.torsion)}
        if self.classes is not None:
            data["classes"] = [
                {"free": f, "torsion": list(t)} for f, t in self.classes]
        return data


def homology_profile(boundary, n_gens, check=True):
    """Tower profile of a free F2[U]-complex from its boundary matrix.

    `boundary` is a sparse dict {(target, source): poly} over generator
    indices 0..n_gens-1.  The differential must square to zero.
    """
    if check:
        _check_d_squared(boundary, n_gens)
    M = PolyMatrix(n_gens, n_gens, boundary)
    factors = snf(M)
    orders = [p_order(f) for f in factors]
    rank = len(orders)
    free = n_gens - 2 * rank
    torsion = [o for o in orders if o and o > 0]
    return TowerProfile(free, torsion)


def _check_d_squared(boundary, n_gens):
    by_src = {}
    for (t, s), v in boundary.items():
        if v:
            by_src.setdefault(s, []).append((t, v))
    for s, row in by_src.items():
        acc = {}
        for (mid, v1) in row:
            for (t, v2) in by_src.get(mid, ()):
                acc[t] = acc.get(t, 0) ^ p_mul(v2, v1)
    # note: acc is per-source; nonzero means d^2 != 0
        bad = {t: v for t, v in acc.items() if v}
        if bad:
            raise ValueError("d^2 != 0 at generator %r: %r" % (s, bad))


def f2_rank(rows, ncols):
    """Rank over F2 of rows given as int bitmasks of width ncols."""
    _ = ncols
    pivots = []
    rank = 0
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
            pivots.sort(reverse=True)
            rank += 1
    return rank


def homology_dims_mod_uk(boundary, n_gens, k):
    """dim_F2 of H(C (x) F2[U]/U^k) by plain F2 linear algebra.

    Used as the independent cross-check of the SNF route: for homology
    F2[U]^f (+) sum_i F2[U]/U^{t_i}, this dimension is
    f*k + 2 * sum_i min(t_i, k).
    """
    # basis: generator x U^j for j < k; boundary multiplies polynomials
    idx = {}
    for g in range(n_gens):
        for j in range(k):
            idx[(g, j)] = len(idx)
    rows = []
    for (t, s), v in boundary.items():
        if not v:
            continue
        for j in range(k):
            mask = 0
            vv = v << j
            for jj in range(k):
                if (vv >> jj) & 1:
                    mask |= 1 << idx[(t, jj)]
            if mask:
                rows.append((idx[(s, j)], mask))
    # rank of the boundary as an F2-matrix
    cols = {}
    for src, mask in rows:
        cols[src] = cols.get(src, 0) ^ mask
    rank = f2_rank(list(cols.values()), len(idx))
    # dim ker = dim - rank ; dim H = dim ker - rank im = dim - 2 rank
    return len(idx) - 2 * rank


def profile_from_mod_uk_dims(dims):
    """Recover (free, torsion orders) from dims of H(C/U^k), k = 1..K.

    g(k) - g(k-1) = free + 2 #{t_i >= k}; requires K past the largest
    torsion order (detected by stabilization of the difference).
    """
    diffs = [dims[0]] + [dims[k] - dims[k - 1] for k in range(1, len(dims))]
    free = diffs[-1]
    if len(diffs) >= 2 and diffs[-2] != diffs[-1]:
        raise ValueError("mod-U^k dimensions not stabilized; raise k")
    torsion = []
    for k in range(1, len(diffs) + 1):
        at_least_k = (diffs[k - 1] - free) // 2
        at_least_k1 = ((diffs[k] - free) // 2) if k < len(diffs) else 0
        torsion.extend([k] * (at_least_k - at_least_k1))
    return free, sorted(torsion)

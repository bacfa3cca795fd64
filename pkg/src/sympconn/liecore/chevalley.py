"""Chevalley bases of split simple Lie algebras.

Basis ordering: coroots h_1..h_r of the simple roots, then one root vector e_beta
per root in the order of ``RootSystem.roots``.  Brackets:

    [h_i, e_b] = <b, alpha_i> e_b
    [e_a, e_-a] = h_a  (the coroot, written in the simple coroots)
    [e_a, e_b] = N(a, b) e_{a+b}

The integers N(a, b) = +-(p+1) are fixed by declaring N = +(p+1) on every
extraspecial pair (for the order "height, then coordinates") and propagating
through the standard sign relations.
"""

from fractions import Fraction

from ..rootsys import pairing
from .algebra import LieAlgebra

CONVENTION_VERSION = 1


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


class _Constants:
    def __init__(self, rs):
        self.rs = rs
        self.idx = rs.index
        self.pos = rs.positive_roots
        self.order = {r: k for k, r in enumerate(self.pos)}
        self.memo = {}
        self.extra = {}
        simple = set(rs.simple_roots)
        for xi in self.pos:
            if xi in simple:
                continue
            for a in self.pos:
                b = _sub(xi, a)
                if b in self.order and self.order[a] < self.order[b]:
                    self.extra[xi] = (a, b)
                    break
            else:
                raise AssertionError(f"no extraspecial pair for {xi}")

    def p_string(self, a, b):
        p = 0
        v = _sub(b, a)
        while v in self.idx:
            p += 1
            v = _sub(v, a)
        return p

    def norm(self, v):
        return self.rs.norm(v)

    def N(self, a, b):
        s = _add(a, b)
        if s not in self.idx:
            return 0
        key = (a, b)
        if key not in self.memo:
            self.memo[key] = self._compute(a, b, s)
        return self.memo[key]

    def _compute(self, a, b, s):
        order = self.order
        apos, bpos = a in order, b in order
        if apos and bpos:
            if order[a] > order[b]:
                return -self.N(b, a)
            a1, b1 = self.extra[s]
            if (a, b) == (a1, b1):
                return self.p_string(a1, b1) + 1
            # four-term relation with (a, b, -a1, -b1)
            t = Fraction(0)
            d = _sub(b, a1)
            if d in self.idx:
                t += Fraction(self.N(b, _neg(a1)) * self.N(a, _neg(b1)), self.norm(d))
            d = _sub(a, a1)
            if d in self.idx:
                t += Fraction(self.N(_neg(a1), a) * self.N(b, _neg(b1)), self.norm(d))
            val = Fraction(self.norm(s), self.N(a1, b1)) * t
            return self._integral(val, a, b)
        if not apos and not bpos:
            return -self.N(_neg(a), _neg(b))
        if not apos:
            return -self.N(b, a)
        # a positive, b negative
        if s in order:
            val = -Fraction(self.norm(s), self.norm(a)) * self.N(_neg(b), s)
        else:
            val = Fraction(self.norm(s), self.norm(b)) * self.N(_neg(s), a)
        return self._integral(val, a, b)

    def _integral(self, val, a, b):
        if val.denominator != 1:
            raise AssertionError(f"non-integral structure constant for {a}, {b}")
        val = int(val)
        if abs(val) != self.p_string(a, b) + 1:
            raise AssertionError(f"N({a}, {b}) = {val} is not +-(p+1)")
        return val


def coroot_coords(rs, alpha):
    """Coordinates of the coroot H_alpha in the simple coroots."""
    na = rs.norm(alpha)
    out = []
    for i, c in enumerate(alpha):
        v = Fraction(c * rs.gram[i][i], na)
        if v.denominator != 1:
            raise AssertionError("coroot is not integral")
        out.append(int(v))
    return out


def chevalley_table(rs):
    r = rs.rank
    roots = rs.roots
    consts = _Constants(rs)
    table = {}
    for i in range(r):
        ai = rs.simple_roots[i]
        for k, beta in enumerate(roots):
            table[(i, r + k)] = {r + k: pairing(rs, beta, ai)}
    for k, a in enumerate(roots):
        for l in range(k + 1, len(roots)):
            b = roots[l]
            s = _add(a, b)
            if all(x == 0 for x in s):
                table[(r + k, r + l)] = {i: c for i, c in enumerate(coroot_coords(rs, a)) if c}
            elif s in rs.index:
                table[(r + k, r + l)] = {r + rs.index[s]: consts.N(a, b)}
    return table


def chevalley_algebra(rs, table=None):
    """Chevalley algebra of ``rs``; a precomputed (e.g. cached) table may be passed in."""
    r = rs.rank
    roots = rs.roots
    if table is None:
        table = chevalley_table(rs)
    labels = [f"h{i + 1}" for i in range(r)] + ["e" + ",".join(map(str, b)) for b in roots]
    theta = rs.highest_root
    x = [Fraction(0)] * (r + len(roots))
    y = list(x)
    x[r + rs.index[theta]] = Fraction(1)
    y[r + rs.index[_neg(theta)]] = Fraction(1)
    cartan = [[Fraction(int(i == j)) for j in range(r + len(roots))] for i in range(r)]
    name = f"{rs.kind}{rs.rank}" if len(rs.kind) == 1 else rs.kind
    return LieAlgebra(r + len(roots), table, name=f"chevalley:{name}", labels=labels,
                      cartan=cartan, seed=(x, y),
                      meta={"root_system": rs, "convention_version": CONVENTION_VERSION,
                            "real_rank": r, "rank": r})


def root_vector(L, beta):
    """Coordinates of e_beta in a Chevalley algebra."""
    rs = L.meta["root_system"]
    v = L.zero()
    v[rs.rank + rs.index[tuple(beta)]] = Fraction(1)
    return v

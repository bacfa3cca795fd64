"""Five-step gradings g^-2 + ... + g^2 from a long root element.

Conventions.  H is the grading element (ad H = i on g^i) and e+e- := -H.  The
frame vectors e+^2, e-^2 span g^2 and g^-2 and are normalized so that, with
the area form a(e+, e-) = 1,

    [e+e-, e+^2] = -2 e+^2,   [e+e-, e-^2] = 2 e-^2,   [e+^2, e-^2] = 4 e+e-.

V is identified with g^1 through x -> e+ (x) x using the echelon basis of g^1,
and e- (x) x := -1/2 [e-^2, e+ (x) x].
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .liecore.algebra import LieAlgebra
from .liecore.linalg import Subspace, kernel, solve
from .liecore.scalars import ZERO

DEGREES = (-2, -1, 0, 1, 2)


class GradingError(ValueError):
    """The seed does not produce a 2-grading (not a long root element)."""


def _scale(c, v):
    return [c * x for x in v]


def _add(*vs):
    out = list(vs[0])
    for v in vs[1:]:
        out = [a + b for a, b in zip(out, v)]
    return out


def _proportional(v, w):
    """c with v = c*w, or None."""
    c = None
    for a, b in zip(v, w):
        if b:
            c = Fraction(a) / b
            break
    if c is None:
        return None if any(v) else Fraction(0)
    if all(a == c * b for a, b in zip(v, w)):
        return c
    return None


@dataclass(frozen=True, eq=False)
class TwoGrading:
    parent: LieAlgebra
    H: tuple
    e_plus_sq: tuple
    e_minus_sq: tuple
    e_plus_e_minus: tuple
    blocks: dict
    h_block: Subspace
    V_basis: tuple
    V_minus: tuple
    alpha0: tuple = None
    notes: dict = field(default_factory=dict)

    @property
    def dim_V(self):
        return len(self.V_basis)

    @property
    def dim_h(self):
        return self.h_block.dim

    @property
    def block_dims(self):
        return tuple(self.blocks[i].dim for i in DEGREES)

    def frame(self):
        """(vectors, labels, degrees) of the graded frame."""
        vecs = [list(self.e_plus_sq), list(self.e_plus_e_minus), list(self.e_minus_sq)]
        labels = ["e+^2", "e+e-", "e-^2"]
        degs = [2, 0, -2]
        for a, h in enumerate(self.h_block.basis):
            vecs.append(list(h))
            labels.append(f"h{a}")
            degs.append(0)
        for i, v in enumerate(self.V_basis):
            vecs.append(list(v))
            labels.append(f"e+x{i}")
            degs.append(1)
        for i, v in enumerate(self.V_minus):
            vecs.append(list(v))
            labels.append(f"e-x{i}")
            degs.append(-1)
        return vecs, labels, degs

    def frame_algebra(self):
        vecs, labels, _ = self.frame()
        return self.parent.change_basis(vecs, labels=labels, name=self.parent.name + "/graded")


def _jacobson_morozov(L, x):
    """Complete a nilpotent x to an sl2-triple (x, h, y) by two linear solves."""
    n = L.dim
    adx = L.ad_matrix(x)
    cols = []
    for j in range(n):
        col = [adx[k][j] for k in range(n)]
        cols.append(L.bracket(x, col))
    z = solve(cols, _scale(-2, x))
    if z is None:
        raise GradingError("seed is not nilpotent of the expected type")
    h = L.bracket(x, z)
    adh = L.ad_matrix(h)
    M = [[adh[i][j] + (2 if i == j else 0) for j in range(n)] for i in range(n)]
    neg2 = kernel(M, n)
    cols = [L.bracket(x, list(b)) for b in neg2.basis]
    c = solve(cols, h)
    if c is None:
        raise GradingError("no opposite element found for the seed")
    return neg2.combine(c)


def _eigenspace(L, H, i):
    ad = L.ad_matrix(H)
    n = L.dim
    M = [[ad[r][c] - (i if r == c else 0) for c in range(n)] for r in range(n)]
    return kernel(M, n)


def _perfect_square_root(q):
    q = Fraction(q)
    if q <= 0:
        return None
    from math import isqrt
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def grade(L, seed=None):
    """Grade L by a long root element.

    ``seed`` may be None (use the algebra's canonical seed), a root tuple for
    Chevalley algebras, an element x, or a pair (x, y) with y in the opposite
    root space (y=None triggers a Jacobson-Morozov completion).
    """
    alpha0 = None
    if seed is None:
        if L.seed is None:
            raise GradingError(f"{L.name} has no canonical seed")
        x, y = L.seed
        rs = L.meta.get("root_system")
        if rs is not None:
            alpha0 = rs.highest_root
    elif isinstance(seed, tuple) and seed and all(isinstance(s, int) for s in seed):
        from .liecore.chevalley import root_vector
        rs = L.meta.get("root_system")
        if rs is None:
            raise GradingError("root seeds need a Chevalley algebra")
        if not rs.is_root(seed):
            raise GradingError(f"{seed} is not a root")
        alpha0 = tuple(seed)
        x = root_vector(L, seed)
        y = root_vector(L, tuple(-s for s in seed))
    elif isinstance(seed, tuple) and len(seed) == 2 and isinstance(seed[0], (list, tuple)):
        x, y = seed
    else:
        x, y = seed, None
    x = [Fraction(v) for v in x]
    if y is None:
        y = _jacobson_morozov(L, x)
    y = [Fraction(v) for v in y]

    Hp = L.bracket(x, y)
    k = _proportional(L.bracket(Hp, x), x)
    if not k:
        raise GradingError("seed does not span an sl2 with [h, x] proportional to x")
    H = _scale(Fraction(2) / k, Hp)
    if L.bracket(H, _scale(Fraction(2) / k, y)) != _scale(Fraction(-4) / k, y):
        raise GradingError("opposite element is not a -2 eigenvector")

    blocks = {i: _eigenspace(L, H, i) for i in DEGREES}
    if sum(b.dim for b in blocks.values()) != L.dim:
        raise GradingError("ad(H) has eigenvalues outside {-2..2}: seed is not a long root element")
    if blocks[2].dim != 1 or blocks[-2].dim != 1:
        raise GradingError("dim g^2 != 1: seed is not a long root element")
    if blocks[1].dim == 0:
        raise GradingError("g^1 = 0 (sl2 itself is not 2-gradable)")

    # e+^2 = s x, e-^2 = t y with st = -8/k, preferring t = -s (compact sum)
    s = _perfect_square_root(Fraction(8) / k) or Fraction(2)
    t = Fraction(-8) / (k * s)
    ep2 = _scale(s, x)
    em2 = _scale(t, y)
    epem = _scale(-1, H)

    g0 = blocks[0]
    cols_p = [L.bracket(list(b), ep2) for b in g0.basis]
    cols_m = [L.bracket(list(b), em2) for b in g0.basis]
    rows = []
    for r in range(L.dim):
        rows.append({c: cols_p[c][r] for c in range(g0.dim) if cols_p[c][r]})
        rows.append({c: cols_m[c][r] for c in range(g0.dim) if cols_m[c][r]})
    coeffs = kernel(rows, g0.dim)
    h_block = Subspace.span([g0.combine(list(c)) for c in coeffs.basis], L.dim)

    V_basis = tuple(tuple(b) for b in blocks[1].basis)
    tg = TwoGrading(L, tuple(H), tuple(ep2), tuple(em2), tuple(epem), blocks, h_block,
                    V_basis, (), alpha0, {"k": k, "s": s})
    return normalize_frame(tg, force=True)


def normalize_frame(tg, force=False):
    """Rescale e-^2 so that [e+^2, e-^2] = 4 e+e-; recompute e- (x) V."""
    L = tg.parent
    lam = _proportional(L.bracket(list(tg.e_plus_sq), list(tg.e_minus_sq)), list(tg.e_plus_e_minus))
    if lam is None or lam == 0:
        raise GradingError("degenerate pairing between g^2 and g^-2")
    if lam == 4 and not force:
        return tg
    em2 = tuple(_scale(Fraction(4) / lam, list(tg.e_minus_sq)))
    V_minus = tuple(tuple(_scale(Fraction(-1, 2), L.bracket(list(em2), list(v))))
                    for v in tg.V_basis)
    return replace(tg, e_minus_sq=em2, V_minus=V_minus)


def frame_checks(tg):
    """Exact structural checks of a normalized grading: list of (name, passed)."""
    L = tg.parent
    out = []
    ep2, em2, epem, H = (list(v) for v in (tg.e_plus_sq, tg.e_minus_sq, tg.e_plus_e_minus, tg.H))
    out.append(("block_sum", sum(tg.block_dims) == L.dim))
    out.append(("extreme_blocks_1d", tg.blocks[2].dim == 1 and tg.blocks[-2].dim == 1))
    ok = True
    for i in DEGREES:
        for b in tg.blocks[i].basis:
            if L.bracket(H, list(b)) != _scale(i, list(b)):
                ok = False
    out.append(("ad_H_eigenvalues", ok))
    ok = True
    for i in DEGREES:
        for j in DEGREES:
            target = tg.blocks.get(i + j)
            for a in tg.blocks[i].basis:
                for b in tg.blocks[j].basis:
                    br = L.bracket(list(a), list(b))
                    if target is None:
                        ok = ok and not any(br)
                    else:
                        ok = ok and target.contains(br)
    out.append(("grading_compatible", ok))
    ok = all(not any(L.bracket(list(h), s)) for h in tg.h_block.basis for s in (ep2, em2, epem))
    out.append(("h_commutes_with_sl2", ok))
    out.append(("g0_split", tg.blocks[0].dim == 1 + tg.h_block.dim
                and not tg.h_block.contains(epem)))
    out.append(("sl2_relations",
                L.bracket(epem, ep2) == _scale(-2, ep2)
                and L.bracket(epem, em2) == _scale(2, em2)
                and L.bracket(ep2, em2) == _scale(4, epem)))
    out.append(("H_identity_on_V", all(L.bracket(H, list(v)) == list(v) for v in tg.V_basis)))
    out.append(("e_minus_frame", all(L.bracket(ep2, list(w)) == _scale(2, list(v))
                                     for v, w in zip(tg.V_basis, tg.V_minus))))
    return out


def cartan_of_h(tg):
    """Cartan subalgebra of h: elements of the ambient Cartan commuting with sl_alpha0.

    Returned as vectors in h-coordinates (echelon basis of h_block).
    """
    L = tg.parent
    if not L.cartan:
        raise GradingError(f"{L.name} carries no Cartan subalgebra")
    C = Subspace.span(L.cartan, L.dim)
    ep2, em2 = list(tg.e_plus_sq), list(tg.e_minus_sq)
    rows = []
    cp = [L.bracket(list(c), ep2) for c in C.basis]
    cm = [L.bracket(list(c), em2) for c in C.basis]
    for r in range(L.dim):
        rows.append({k: cp[k][r] for k in range(C.dim) if cp[k][r]})
        rows.append({k: cm[k][r] for k in range(C.dim) if cm[k][r]})
    ker = kernel(rows, C.dim)
    return [tg.h_block.coords(C.combine(list(c))) for c in ker.basis]


def grading_report(tg):
    checks = frame_checks(tg)
    return {
        "algebra": tg.parent.name,
        "block_dims": list(tg.block_dims),
        "dimV": tg.dim_V,
        "dimH": tg.dim_h,
        "frame_check": all(ok for _, ok in checks),
        "checks": [{"name": n, "pass": ok} for n, ok in checks],
    }


def vec_is_zero(v):
    return all(x == ZERO for x in v)

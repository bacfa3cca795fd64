"""Special symplectic data (V, omega, circle, ( , )) read off a graded frame.

Frame ordering (see ``grading.TwoGrading.frame``):

    0: e+^2   1: e+e-   2: e-^2   3..3+m: h basis   then e+ (x) v_i, then e- (x) v_i

All data is exact.  The odd bracket is

    [e (x) x, f (x) y] = omega(x, y) ef + a(e, f) x o y

with ef the symmetric product in S^2(F^2) = sl(2), (ef).g = a(e,g) f + a(f,g) e.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .liecore.algebra import LieAlgebra, intrinsic_killing, jacobi_witness
from .liecore.linalg import Subspace, rank
from .liecore.scalars import ZERO, fstr

# area form on F^2 with basis (e+, e-) and a(e+, e-) = 1
PLUS, MINUS = 0, 1
AREA = ((0, 1), (-1, 0))
# S^2(F^2) basis index of the product ef
SYM = {(PLUS, PLUS): 0, (PLUS, MINUS): 1, (MINUS, PLUS): 1, (MINUS, MINUS): 2}
SYM_PAIRS = ((PLUS, PLUS), (PLUS, MINUS), (MINUS, MINUS))


class StructuralFault(ValueError):
    """An exact identity failed; ``checks`` holds the full check list."""

    def __init__(self, msg, checks=None):
        super().__init__(msg)
        self.checks = checks or []


@dataclass
class SpecialSymplecticData:
    V_dim: int
    h_dim: int
    omega: list
    circle: list          # circle[i][j] = h-coordinates of v_i o v_j
    h_action: list        # h_action[a][k][j]: coefficient of v_k in h_a v_j
    h_bracket: list       # h_bracket[a][b] = h-coordinates of [h_a, h_b]
    inner: list = None    # ( , ) in the frame basis
    frame: LieAlgebra = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    # frame indices
    def hi(self, a):
        return 3 + a

    def pi(self, i):
        return 3 + self.h_dim + i

    def mi(self, i):
        return 3 + self.h_dim + self.V_dim + i

    def odd(self, e, i):
        return self.pi(i) if e == PLUS else self.mi(i)

    @property
    def frame_dim(self):
        return 3 + self.h_dim + 2 * self.V_dim

    def degrees(self):
        return [2, 0, -2] + [0] * self.h_dim + [1] * self.V_dim + [-1] * self.V_dim

    # V-level operations
    def act(self, h, x):
        """h (h-coordinates) applied to x (V-coordinates)."""
        n = self.V_dim
        out = [ZERO] * n
        for a, ca in enumerate(h):
            if not ca:
                continue
            A = self.h_action[a]
            for j, xj in enumerate(x):
                if xj:
                    for k in range(n):
                        if A[k][j]:
                            out[k] += ca * A[k][j] * xj
        return out

    def om(self, x, y):
        W = self.omega
        return sum((x[i] * W[i][j] * y[j] for i in range(self.V_dim) if x[i]
                    for j in range(self.V_dim) if y[j] and W[i][j]), ZERO)

    def circ(self, x, y):
        out = [ZERO] * self.h_dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    c = xi * yj
                    for a, v in enumerate(self.circle[i][j]):
                        if v:
                            out[a] += c * v
        return out

    def hbr(self, h, k):
        out = [ZERO] * self.h_dim
        for a, ha in enumerate(h):
            if not ha:
                continue
            for b, kb in enumerate(k):
                if kb:
                    for c, v in enumerate(self.h_bracket[a][b]):
                        if v:
                            out[c] += ha * kb * v
        return out

    def h_inner(self, h, k):
        """( , ) restricted to h, in h-coordinates."""
        s = ZERO
        for a, ha in enumerate(h):
            if ha:
                row = self.inner[self.hi(a)]
                for b, kb in enumerate(k):
                    if kb:
                        s += ha * row[self.hi(b)] * kb
        return s

    def unit(self, i):
        v = [ZERO] * self.V_dim
        v[i] = Fraction(1)
        return v

    def h_unit(self, a):
        v = [ZERO] * self.h_dim
        v[a] = Fraction(1)
        return v

    def h_matrix(self, h):
        n = self.V_dim
        return [[sum((h[a] * self.h_action[a][k][j] for a in range(self.h_dim) if h[a]), ZERO)
                 for j in range(n)] for k in range(n)]

    def dims(self):
        return {"dimg": self.frame_dim, "dimV": self.V_dim, "dimH": self.h_dim}


def _vec(F, i):
    v = [ZERO] * F.dim
    v[i] = Fraction(1)
    return v


def extract(tg, check=True):
    """Read (omega, o, h-action) from the graded frame of ``tg``."""
    F = tg.frame_algebra()
    n, m = tg.dim_V, tg.dim_h
    P = [3 + m + i for i in range(n)]
    M = [3 + m + n + i for i in range(n)]
    H = [3 + a for a in range(m)]
    sc = F.structure_constant

    omega = [[sc(P[i], P[j]).get(0, ZERO) for j in range(n)] for i in range(n)]
    circle = [[[sc(P[i], M[j]).get(H[a], ZERO) for a in range(m)] for j in range(n)]
              for i in range(n)]
    h_action = []
    for a in range(m):
        A = [[ZERO] * n for _ in range(n)]
        for j in range(n):
            for k, v in sc(H[a], P[j]).items():
                if k in P:
                    A[k - P[0]][j] = v
        h_action.append(A)
    h_bracket = [[[sc(H[a], H[b]).get(H[c], ZERO) for c in range(m)] for b in range(m)]
                 for a in range(m)]
    scale = Fraction(-1, 2 * (n + 4))
    inner = [[scale * x for x in row] for row in F.killing_matrix]
    ssd = SpecialSymplecticData(n, m, omega, circle, h_action, h_bracket, inner, F,
                                name=tg.parent.name,
                                meta={"grading": tg, "scalar_field": tg.parent.scalar_field})
    if check:
        checks = identity_checks(ssd)
        bad = [c for c in checks if not c["pass"]]
        if bad:
            raise StructuralFault(f"{ssd.name}: identity {bad[0]['name']} fails", checks)
    return ssd


# identity checks ------------------------------------------------------------

class _Check:
    def __init__(self, name):
        self.name = name
        self.witness = None

    def expect(self, ok, **witness):
        if not ok and self.witness is None:
            self.witness = {k: _show(v) for k, v in witness.items()}
        return ok

    def result(self):
        out = {"name": self.name, "pass": self.witness is None}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _show(v):
    if isinstance(v, (list, tuple)):
        return [_show(x) for x in v]
    if isinstance(v, Fraction):
        return fstr(v)
    return v


def _frame_bracket(ssd, i, j):
    return ssd.frame.structure_constant(i, j)


def check_odd_bracket(ssd):
    """[e (x) x, f (x) y] = omega(x,y) ef + a(e,f) x o y, component by component."""
    c = _Check("odd_bracket")
    n, m = ssd.V_dim, ssd.h_dim
    for e in (PLUS, MINUS):
        for f in (PLUS, MINUS):
            for i in range(n):
                for j in range(n):
                    got = _frame_bracket(ssd, ssd.odd(e, i), ssd.odd(f, j))
                    want = {}
                    w = ssd.omega[i][j]
                    if w:
                        want[SYM[(e, f)]] = w
                    if AREA[e][f]:
                        for a in range(m):
                            v = AREA[e][f] * ssd.circle[i][j][a]
                            if v:
                                want[ssd.hi(a)] = v
                    if not c.expect(got == want, e=e, f=f, i=i, j=j,
                                    got=sorted(got.items()), want=sorted(want.items())):
                        return c.result()
    return c.result()


def _sl2_dot(ef, g):
    """(ef).g as a dict over (e+, e-)."""
    e, f = ef
    out = {}
    for coef, vec in ((AREA[e][g], f), (AREA[f][g], e)):
        if coef:
            out[vec] = out.get(vec, 0) + coef
    return {k: v for k, v in out.items() if v}


def _sl2_bracket(ef, gh):
    """[ef, gh] = a(e,g) fh + a(e,h) fg + a(f,g) eh + a(f,h) eg, over the S^2 basis."""
    e, f = ef
    g, h = gh
    out = {}
    for coef, pair in ((AREA[e][g], (f, h)), (AREA[e][h], (f, g)),
                       (AREA[f][g], (e, h)), (AREA[f][h], (e, g))):
        if coef:
            k = SYM[pair]
            out[k] = out.get(k, 0) + coef
    return {k: v for k, v in out.items() if v}


def check_sl2(ssd):
    """sl(2) relations and the sl(2) and h actions on F^2 (x) V."""
    c = _Check("sl2_module")
    n = ssd.V_dim
    for s in range(3):
        for t in range(3):
            got = _frame_bracket(ssd, s, t)
            want = _sl2_bracket(SYM_PAIRS[s], SYM_PAIRS[t])
            if not c.expect(got == want, s=s, t=t, got=sorted(got.items()),
                            want=sorted(want.items())):
                return c.result()
        for a in range(ssd.h_dim):
            got = _frame_bracket(ssd, s, ssd.hi(a))
            if not c.expect(not got, s=s, h=a, got=sorted(got.items())):
                return c.result()
        for g in (PLUS, MINUS):
            for i in range(n):
                got = _frame_bracket(ssd, s, ssd.odd(g, i))
                want = {ssd.odd(k, i): v for k, v in _sl2_dot(SYM_PAIRS[s], g).items()}
                if not c.expect(got == want, s=s, g=g, i=i, got=sorted(got.items()),
                                want=sorted(want.items())):
                    return c.result()
    for a in range(ssd.h_dim):
        for g in (PLUS, MINUS):
            for j in range(n):
                got = _frame_bracket(ssd, ssd.hi(a), ssd.odd(g, j))
                want = {ssd.odd(g, k): ssd.h_action[a][k][j] for k in range(n)
                        if ssd.h_action[a][k][j]}
                if not c.expect(got == want, h=a, g=g, j=j):
                    return c.result()
    return c.result()


def check_omega(ssd):
    c = _Check("omega_symplectic_invariant")
    n = ssd.V_dim
    W = ssd.omega
    for i in range(n):
        for j in range(n):
            c.expect(W[i][j] == -W[j][i], i=i, j=j, value=W[i][j])
    c.expect(rank(W, n) == n, rank=rank(W, n))
    for a in range(ssd.h_dim):
        for i in range(n):
            for j in range(n):
                hx = ssd.act(ssd.h_unit(a), ssd.unit(i))
                hy = ssd.act(ssd.h_unit(a), ssd.unit(j))
                s = ssd.om(hx, ssd.unit(j)) + ssd.om(ssd.unit(i), hy)
                c.expect(s == 0, h=a, i=i, j=j, residual=s)
    return c.result()


def check_circle_symmetric(ssd):
    c = _Check("circle_symmetric")
    for i in range(ssd.V_dim):
        for j in range(ssd.V_dim):
            c.expect(ssd.circle[i][j] == ssd.circle[j][i], i=i, j=j)
    return c.result()


def check_grading_orthogonal(ssd):
    """Item 1: (g^i, g^j) = 0 unless i + j = 0."""
    c = _Check("grading_orthogonal")
    d = ssd.degrees()
    for r in range(ssd.frame_dim):
        for s in range(ssd.frame_dim):
            if d[r] + d[s] != 0:
                c.expect(ssd.inner[r][s] == 0, r=r, s=s, value=ssd.inner[r][s])
    return c.result()


def check_sl2_inner(ssd):
    """Item 2: (ef, gh) = a(e,g)a(f,h) + a(e,h)a(f,g), all e, f, g, h."""
    c = _Check("sl2_inner")
    for e in (PLUS, MINUS):
        for f in (PLUS, MINUS):
            for g in (PLUS, MINUS):
                for h in (PLUS, MINUS):
                    want = AREA[e][g] * AREA[f][h] + AREA[e][h] * AREA[f][g]
                    got = ssd.inner[SYM[(e, f)]][SYM[(g, h)]]
                    c.expect(got == want, e=e, f=f, g=g, h=h, got=got, want=want)
    for a in range(ssd.h_dim):
        for s in range(3):
            c.expect(ssd.inner[s][ssd.hi(a)] == 0, s=s, h=a)
    return c.result()


def check_killing_split(ssd):
    """Item 3: B(u, v) = 2 tr_V(uv) + B_h(u, v) on h."""
    c = _Check("killing_split")
    m, n = ssd.h_dim, ssd.V_dim
    Bh = intrinsic_killing(ssd.h_bracket)
    B = ssd.frame.killing_matrix
    for a in range(m):
        A = ssd.h_action[a]
        for b in range(a, m):
            Bm = ssd.h_action[b]
            tr = sum((A[i][k] * Bm[k][i] for i in range(n) for k in range(n)
                      if A[i][k] and Bm[k][i]), ZERO)
            lhs = B[ssd.hi(a)][ssd.hi(b)]
            rhs = 2 * tr + Bh[a][b]
            c.expect(lhs == rhs, h=(a, b), lhs=lhs, rhs=rhs)
    return c.result()


def check_odd_inner(ssd):
    """Item 4: (e (x) x, f (x) y) = a(e, f) omega(x, y)."""
    c = _Check("odd_inner")
    n = ssd.V_dim
    for e in (PLUS, MINUS):
        for f in (PLUS, MINUS):
            for i in range(n):
                for j in range(n):
                    got = ssd.inner[ssd.odd(e, i)][ssd.odd(f, j)]
                    want = AREA[e][f] * ssd.omega[i][j]
                    c.expect(got == want, e=e, f=f, i=i, j=j, got=got, want=want)
    return c.result()


def check_circle_duality(ssd):
    """(h, x o y) = omega(hx, y) = omega(hy, x)."""
    c = _Check("circle_omega_duality")
    n = ssd.V_dim
    for a in range(ssd.h_dim):
        h = ssd.h_unit(a)
        for i in range(n):
            x = ssd.unit(i)
            hx = ssd.act(h, x)
            for j in range(n):
                y = ssd.unit(j)
                lhs = ssd.h_inner(h, ssd.circ(x, y))
                mid = ssd.om(hx, y)
                rhs = ssd.om(ssd.act(h, y), x)
                c.expect(lhs == mid == rhs, h=a, i=i, j=j, values=[lhs, mid, rhs])
    return c.result()


def circle_action_residual(ssd, x, y, z):
    """(x o y) z - (x o z) y - 2 omega(y,z) x + omega(x,y) z - omega(x,z) y."""
    lhs = ssd.act(ssd.circ(x, y), z)
    t = ssd.act(ssd.circ(x, z), y)
    wyz, wxy, wxz = ssd.om(y, z), ssd.om(x, y), ssd.om(x, z)
    return [lhs[k] - t[k] - 2 * wyz * x[k] + wxy * z[k] - wxz * y[k] for k in range(ssd.V_dim)]


def check_circle_action(ssd):
    c = _Check("circle_action_identity")
    n = ssd.V_dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                r = circle_action_residual(ssd, ssd.unit(i), ssd.unit(j), ssd.unit(k))
                if not c.expect(not any(r), triple=(i, j, k), residual=r):
                    return c.result()
    return c.result()


def check_normalizations(ssd):
    c = _Check("normalization")
    n = ssd.V_dim
    c.expect(ssd.inner[1][1] == -1, epem_epem=ssd.inner[1][1])
    c.expect(ssd.inner[0][2] == 2, ep2_em2=ssd.inner[0][2])
    B = ssd.frame.killing_matrix
    # H = -e+e-, so B(H, H) = B(e+e-, e+e-)
    c.expect(B[1][1] == 2 * (n + 4), B_HH=B[1][1], want=2 * (n + 4))
    return c.result()


def circle_equivariance_witness(ssd):
    n, m = ssd.V_dim, ssd.h_dim
    for a in range(m):
        h = ssd.h_unit(a)
        for i in range(n):
            x = ssd.unit(i)
            hx = ssd.act(h, x)
            for j in range(i, n):
                y = ssd.unit(j)
                lhs = ssd.hbr(h, ssd.circ(x, y))
                rhs = [p + q for p, q in zip(ssd.circ(hx, y), ssd.circ(x, ssd.act(h, y)))]
                if lhs != rhs:
                    return (a, i, j), lhs, rhs
    return None


def circle_equivariance_audit(ssd):
    """[h, x o y] = (hx) o y + x o (hy) on all basis triples."""
    return circle_equivariance_witness(ssd) is None


def check_circle_equivariance(ssd):
    c = _Check("circle_equivariance")
    w = circle_equivariance_witness(ssd)
    if w is not None:
        c.expect(False, triple=w[0], lhs=w[1], rhs=w[2])
    return c.result()


def circle_rank(ssd):
    rows = [ssd.circle[i][j] for i in range(ssd.V_dim) for j in range(i, ssd.V_dim)]
    return rank(rows, ssd.h_dim)


def check_circle_surjective(ssd):
    c = _Check("circle_surjective")
    r = circle_rank(ssd)
    c.expect(r == ssd.h_dim, rank=r, dimH=ssd.h_dim)
    return c.result()


def is_full_sp(ssd):
    n = ssd.V_dim
    return ssd.h_dim == n * (n + 1) // 2


def check_sp_circle(ssd):
    """For h = sp(V): (x o y) z = omega(x,z) y + omega(y,z) x."""
    c = _Check("sp_circle_formula")
    n = ssd.V_dim
    for i in range(n):
        for j in range(n):
            x, y = ssd.unit(i), ssd.unit(j)
            for k in range(n):
                z = ssd.unit(k)
                got = ssd.act(ssd.circ(x, y), z)
                want = [ssd.om(x, z) * y[l] + ssd.om(y, z) * x[l] for l in range(n)]
                if not c.expect(got == want, triple=(i, j, k), got=got, want=want):
                    return c.result()
    return c.result()


CHECKS = (check_sl2, check_odd_bracket, check_omega, check_circle_symmetric,
          check_grading_orthogonal, check_sl2_inner, check_killing_split, check_odd_inner,
          check_circle_duality, check_circle_action, check_normalizations,
          check_circle_equivariance, check_circle_surjective)


def identity_checks(ssd):
    out = [chk(ssd) for chk in CHECKS]
    if is_full_sp(ssd):
        out.append(check_sp_circle(ssd))
    return out


def identity_report(ssd, checks=None):
    checks = identity_checks(ssd) if checks is None else checks
    return {"algebra": ssd.name, "checks": checks, "dims": ssd.dims(),
            "pass": all(c["pass"] for c in checks)}


# reconstruction -------------------------------------------------------------

def reconstruct(ssd, check=True):
    """The Lie algebra sl(2) + h + F^2 (x) V built from (omega, o, h-action, [h, h]).

    The basis follows the frame ordering, so the result can be compared
    entrywise with the graded frame algebra.
    """
    n, m = ssd.V_dim, ssd.h_dim
    table = {}

    def put(i, j, vec):
        vec = {k: Fraction(v) for k, v in vec.items() if v}
        if vec:
            table[(i, j)] = vec

    for s in range(3):
        for t in range(s + 1, 3):
            put(s, t, _sl2_bracket(SYM_PAIRS[s], SYM_PAIRS[t]))
        for g in (PLUS, MINUS):
            for i in range(n):
                put(s, ssd.odd(g, i), {ssd.odd(k, i): v
                                       for k, v in _sl2_dot(SYM_PAIRS[s], g).items()})
    for a in range(m):
        for b in range(a + 1, m):
            put(ssd.hi(a), ssd.hi(b), {ssd.hi(c): v for c, v in enumerate(ssd.h_bracket[a][b])})
        for g in (PLUS, MINUS):
            for j in range(n):
                put(ssd.hi(a), ssd.odd(g, j),
                    {ssd.odd(g, k): ssd.h_action[a][k][j] for k in range(n)})
    for e in (PLUS, MINUS):
        for f in (PLUS, MINUS):
            for i in range(n):
                for j in range(n):
                    r, s = ssd.odd(e, i), ssd.odd(f, j)
                    if r >= s:
                        continue
                    vec = {}
                    if ssd.omega[i][j]:
                        vec[SYM[(e, f)]] = ssd.omega[i][j]
                    if AREA[e][f]:
                        for a, v in enumerate(ssd.circle[i][j]):
                            if v:
                                vec[ssd.hi(a)] = AREA[e][f] * v
                    put(r, s, vec)
    labels = ["e+^2", "e+e-", "e-^2"] + [f"h{a}" for a in range(m)] \
        + [f"e+x{i}" for i in range(n)] + [f"e-x{i}" for i in range(n)]
    L = LieAlgebra(ssd.frame_dim, table, name=(ssd.name or "ssd") + "/reconstructed",
                   labels=labels)
    if check:
        w = jacobi_witness(L)
        if w is not None:
            raise StructuralFault(f"reconstructed bracket violates Jacobi at {w[0]}",
                                  [{"name": "jacobi", "pass": False,
                                    "witness": {"triple": list(w[0]),
                                                "residual": _show(sorted(w[1].items()))}}])
        if rank(L.killing_matrix, L.dim) != L.dim:
            raise StructuralFault("reconstructed algebra has degenerate Killing form")
        if ideal_generated(L, 0).dim != L.dim:
            raise StructuralFault("ideal generated by e+^2 is proper")
    return L


def ideal_generated(L, i):
    """Smallest ideal containing the basis vector e_i."""
    sub = Subspace.span([_vec(L, i)], L.dim)
    frontier = [list(b) for b in sub.basis]
    while frontier:
        new = []
        for x in frontier:
            for j in range(L.dim):
                y = L.bracket(x, _vec(L, j))
                if any(y) and not sub.contains(y):
                    sub = sub + Subspace.span([y], L.dim)
                    new.append(y)
        frontier = new
    return sub


def table_mismatch(L1, L2):
    """First index pair where two algebras on the same basis differ, or None."""
    t1, t2 = L1.table(), L2.table()
    for key in sorted(set(t1) | set(t2)):
        if t1.get(key, {}) != t2.get(key, {}):
            return key, t1.get(key, {}), t2.get(key, {})
    return None


def roundtrip(ssd):
    """Compare reconstruct(ssd) with the graded frame algebra exactly."""
    L = reconstruct(ssd)
    return table_mismatch(L, ssd.frame)


# weights ----------------------------------------------------------------------

def weight_audit(ssd, cartan_h):
    """Weights of a Cartan subalgebra of h on V, with the long-weight partition.

    ``cartan_h`` is a list of h-coordinate vectors spanning a Cartan subalgebra
    of h.  Eigenvalues are computed exactly with sympy (Gaussian values for the
    realified unitary forms).
    """
    import sympy as sp

    n = ssd.V_dim
    report = {"algebra": ssd.name, "dimV": n, "rank_h": len(cartan_h)}
    if is_full_sp(ssd) or n <= 2:
        report.update(skipped=True, reason="h = sp(V) or dim V <= 2")
        return report
    mats = [sp.Matrix(ssd.h_matrix(t)) for t in cartan_h]
    weights, vectors = _joint_eigen(mats, n)
    report["skipped"] = False
    report["weights"] = [[str(x) for x in w] for w in weights]
    mult_ok = len(weights) == n
    report["multiplicities_one"] = mult_ok
    wset = {tuple(w) for w in weights}
    report["closed_under_negation"] = all(tuple(-x for x in w) in wset for w in weights)

    # roots of h under the same Cartan
    roots = _h_roots(ssd, cartan_h, sp)
    G = sp.Matrix([[sp.nsimplify(ssd.h_inner(s, t)) for t in cartan_h] for s in cartan_h])
    Gi = G.inv()

    def length(w):
        v = sp.Matrix(w)
        return sp.simplify((v.T * Gi * v)[0])

    lengths = [length(w) for w in weights]
    distinct = sorted({sp.nsimplify(x) for x in lengths}, key=lambda x: complex(x).real)
    report["weight_lengths"] = [str(x) for x in distinct]
    report["at_most_two_lengths"] = len(distinct) <= 2
    top = max(distinct, key=lambda x: abs(complex(x)))
    k0 = next(i for i, L in enumerate(lengths) if sp.simplify(L - top) == 0)
    lam0 = weights[k0]
    rootset = {tuple(r) for r in roots}
    parts = {}
    for idx, mu in enumerate(weights):
        if tuple(mu) == tuple(lam0):
            cls = 3
        elif all(sp.simplify(a + b) == 0 for a, b in zip(mu, lam0)):
            cls = -3
        else:
            d_plus = tuple(sp.simplify(a - b) for a, b in zip(lam0, mu))
            d_minus = tuple(sp.simplify(-a - b) for a, b in zip(lam0, mu))
            inp, inm = d_plus in rootset, d_minus in rootset
            cls = 1 if inp and not inm else -1 if inm and not inp else None
        parts[idx] = cls
    report["partition_ok"] = (None not in parts.values()
                              and list(parts.values()).count(3) == 1
                              and list(parts.values()).count(-3) == 1)
    report["partition_sizes"] = {str(k): list(parts.values()).count(k) for k in (-3, -1, 1, 3)}

    # (v+ o v-) w_r = -2r omega(v+, v-) w_r
    eig_ok = True
    if report["partition_ok"]:
        vp = vectors[k0]
        vm = vectors[next(i for i, c in parts.items() if c == -3)]
        circ = _circle_sym(ssd, vp, vm, sp)
        Cm = sp.zeros(n, n)
        for a in range(ssd.h_dim):
            if circ[a] != 0:
                Cm += circ[a] * sp.Matrix(ssd.h_action[a])
        Om = sp.Matrix(ssd.omega)
        wpm = (vp.T * Om * vm)[0]
        for idx, cls in parts.items():
            r = sp.Rational(cls, 2)
            w = vectors[idx]
            res = sp.simplify(Cm * w + 2 * r * wpm * w)
            if any(x != 0 for x in res):
                eig_ok = False
    report["eigenvalue_identity"] = eig_ok and report["partition_ok"]
    report["pass"] = all(report[k] for k in ("multiplicities_one", "closed_under_negation",
                                            "at_most_two_lengths", "partition_ok",
                                            "eigenvalue_identity"))
    return report


def _joint_eigen(mats, n):
    import sympy as sp
    coeffs = [1, 7, 61, 523, 4153, 32771, 262147, 2097169]
    T = sp.zeros(n, n)
    for c, A in zip(coeffs, mats):
        T += c * A
    weights, vectors = [], []
    for val, mult, vecs in T.eigenvects():
        for v in vecs:
            w = []
            for A in mats:
                Av = A * v
                k = next(i for i in range(n) if v[i] != 0)
                lam = sp.simplify(Av[k] / v[k])
                w.append(lam)
            weights.append(tuple(w))
            vectors.append(v)
        if mult != len(vecs):
            weights.append(("defective",))
    return weights, vectors


def _h_roots(ssd, cartan_h, sp):
    m = ssd.h_dim
    ad = []
    for t in cartan_h:
        A = sp.zeros(m, m)
        for b in range(m):
            col = ssd.hbr(t, ssd.h_unit(b))
            for c in range(m):
                A[c, b] = col[c]
        ad.append(A)
    weights, _ = _joint_eigen(ad, m)
    return [w for w in weights if any(x != 0 for x in w)]


def _circle_sym(ssd, x, y, sp):
    out = [sp.Integer(0)] * ssd.h_dim
    for i in range(ssd.V_dim):
        if x[i] == 0:
            continue
        for j in range(ssd.V_dim):
            if y[j] == 0:
                continue
            for a, v in enumerate(ssd.circle[i][j]):
                if v:
                    out[a] += x[i] * y[j] * sp.Rational(v.numerator, v.denominator)
    return [sp.simplify(v) for v in out]

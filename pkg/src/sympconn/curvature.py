"""Formal curvature spaces K(h), the Ricci map and prolongations.

A curvature map R in Lambda^2 V* (x) h is stored as a flat exact vector with
index ``pair_index(i, j) * dim_h + a`` for i < j; R(e_j, e_i) = -R(e_i, e_j).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .liecore.linalg import BudgetExceeded, Subspace, kernel, rank
from .liecore.scalars import ZERO
from .sympdata import SpecialSymplecticData


@dataclass
class Budget:
    max_V: int = 8
    max_h: int = 16
    max_columns: int = None      # unknowns of one exact kernel, None = no extra cap

    def check(self, ssd, what, columns=None):
        if ssd.V_dim > self.max_V or ssd.h_dim > self.max_h:
            raise BudgetExceeded(
                f"{what}: dim V = {ssd.V_dim}, dim h = {ssd.h_dim} exceeds budget "
                f"(V <= {self.max_V}, h <= {self.max_h})")
        if self.max_columns is not None and columns is not None and columns > self.max_columns:
            raise BudgetExceeded(f"{what}: {columns} unknowns exceed the kernel budget "
                                 f"{self.max_columns}")


DEFAULT_BUDGET = Budget()


# Lambda^2 V index bookkeeping ---------------------------------------------------

def pairs(n):
    return list(combinations(range(n), 2))


def pair_sign(i, j):
    """(index of {i, j}, sign) with R(e_i, e_j) = sign * R[pair]; (None, 0) if i == j."""
    if i == j:
        return None, 0
    if i < j:
        return (i, j), 1
    return (j, i), -1


class CurvatureLayout:
    def __init__(self, n, m):
        self.n, self.m = n, m
        self.pairs = pairs(n)
        self.pindex = {p: k for k, p in enumerate(self.pairs)}
        self.size = len(self.pairs) * m

    def col(self, i, j, a):
        """(flat index, sign) of the coefficient of h_a in R(e_i, e_j)."""
        p, s = pair_sign(i, j)
        if p is None:
            return None, 0
        return self.pindex[p] * self.m + a, s

    def zero(self):
        return [ZERO] * self.size

    def value(self, R, i, j):
        """R(e_i, e_j) in h-coordinates."""
        p, s = pair_sign(i, j)
        if p is None:
            return [ZERO] * self.m
        base = self.pindex[p] * self.m
        return [s * R[base + a] for a in range(self.m)]

    def evaluate(self, R, x, y):
        out = [ZERO] * self.m
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj and i != j:
                    v = self.value(R, i, j)
                    for a in range(self.m):
                        if v[a]:
                            out[a] += xi * yj * v[a]
        return out

    def from_function(self, fn):
        """Flat vector from fn(i, j) -> h-coordinates, i < j."""
        R = self.zero()
        for k, (i, j) in enumerate(self.pairs):
            for a, v in enumerate(fn(i, j)):
                R[k * self.m + a] = v
        return R


def layout(ssd):
    return CurvatureLayout(ssd.V_dim, ssd.h_dim)


def bianchi_residual(ssd, R):
    """Cyclic sum R(x,y)z + R(y,z)x + R(z,x)y over basis triples; first nonzero or None."""
    lay = layout(ssd)
    n = ssd.V_dim
    for i, j, k in combinations(range(n), 3):
        x, y, z = ssd.unit(i), ssd.unit(j), ssd.unit(k)
        s = ssd.act(lay.value(R, i, j), z)
        t = ssd.act(lay.value(R, j, k), x)
        u = ssd.act(lay.value(R, k, i), y)
        r = [a + b + c for a, b, c in zip(s, t, u)]
        if any(r):
            return (i, j, k), r
    return None


def bianchi_matrix(ssd):
    """Sparse rows of the map Lambda^2 V* (x) h -> Lambda^3 V* (x) V."""
    lay = layout(ssd)
    n, m = ssd.V_dim, ssd.h_dim
    A = ssd.h_action
    rows = []
    for i, j, k in combinations(range(n), 3):
        for l in range(n):
            row = {}
            for (p, q, r) in ((i, j, k), (j, k, i), (k, i, j)):
                for a in range(m):
                    v = A[a][l][r]
                    if v:
                        c, s = lay.col(p, q, a)
                        row[c] = row.get(c, 0) + s * v
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    return rows, lay.size


def bianchi_kernel(ssd, budget=DEFAULT_BUDGET, strategy="ordered"):
    budget.check(ssd, "bianchi_kernel", comb(ssd.V_dim, 2) * ssd.h_dim)
    rows, ncols = bianchi_matrix(ssd)
    return kernel(rows, ncols, strategy=strategy)


def embed_Rh(ssd, h):
    """R_h(x, y) = 2 omega(x, y) h + x o (hy) - y o (hx)."""
    lay = layout(ssd)
    h = [Fraction(v) for v in h]
    hx = [ssd.act(h, ssd.unit(i)) for i in range(ssd.V_dim)]

    def fn(i, j):
        w = 2 * ssd.omega[i][j]
        a = ssd.circ(ssd.unit(i), hx[j])
        b = ssd.circ(ssd.unit(j), hx[i])
        return [w * h[c] + a[c] - b[c] for c in range(ssd.h_dim)]

    return lay.from_function(fn)


# Ricci ------------------------------------------------------------------------

def _omega_inverse_bivector(ssd):
    """Q with omega^{-1} = 1/2 sum Q^{ij} e_i ^ e_j, i.e. Q = (Omega^{-1})^T."""
    from .liecore.linalg import inverse
    inv = inverse(ssd.omega)
    n = ssd.V_dim
    return [[inv[j][i] for j in range(n)] for i in range(n)]


def contract_omega(ssd, R):
    """R(omega^{-1}) in h-coordinates."""
    lay = layout(ssd)
    Q = _omega_inverse_bivector(ssd)
    out = [ZERO] * ssd.h_dim
    for i in range(ssd.V_dim):
        for j in range(ssd.V_dim):
            if Q[i][j] and i != j:
                v = lay.value(R, i, j)
                for a in range(ssd.h_dim):
                    out[a] += Fraction(1, 2) * Q[i][j] * v[a]
    return out


def ricci_trace(ssd, R):
    """Ric(R)(x, y) = tr(R(x, .) y) as an n x n matrix."""
    lay = layout(ssd)
    n = ssd.V_dim
    Ric = [[ZERO] * n for _ in range(n)]
    for x in range(n):
        for k in range(n):
            Rxk = lay.value(R, x, k)
            if not any(Rxk):
                continue
            M = ssd.h_matrix(Rxk)
            for y in range(n):
                Ric[x][y] += M[k][y]
    return Ric


def ricci_contraction(ssd, R):
    """Ric(R)(x, y) = -omega(R(omega^{-1}) x, y)."""
    n = ssd.V_dim
    T = ssd.h_matrix(contract_omega(ssd, R))
    W = ssd.omega
    return [[-sum((T[k][x] * W[k][y] for k in range(n) if T[k][x]), ZERO) for y in range(n)]
            for x in range(n)]


def ricci(ssd, R):
    """Both Ricci evaluations and the h-element -R(omega^{-1})."""
    tr = ricci_trace(ssd, R)
    ct = ricci_contraction(ssd, R)
    n = ssd.V_dim
    return {
        "trace": tr,
        "contraction": ct,
        "h_element": [-v for v in contract_omega(ssd, R)],
        "agree": tr == ct,
        "symmetric": all(tr[i][j] == tr[j][i] for i in range(n) for j in range(n)),
    }


# decomposition ------------------------------------------------------------------

@dataclass
class CurvatureDecomposition:
    K_basis: Subspace
    R_part_basis: Subspace
    W_basis: Subspace
    checks: list = field(default_factory=list)

    @property
    def dims(self):
        return (self.K_basis.dim, self.R_part_basis.dim, self.W_basis.dim)


def R_part(ssd):
    lay = layout(ssd)
    return Subspace.span([embed_Rh(ssd, ssd.h_unit(a)) for a in range(ssd.h_dim)], lay.size)


def decompose(ssd, K=None, budget=DEFAULT_BUDGET):
    if K is None:
        K = bianchi_kernel(ssd, budget)
    lay = layout(ssd)
    Rs = [embed_Rh(ssd, ssd.h_unit(a)) for a in range(ssd.h_dim)]
    Rsp = Subspace.span(Rs, lay.size)
    # Ric restricted to K, written in the K basis
    ric_cols = [contract_omega(ssd, list(b)) for b in K.basis]
    rows = [{k: ric_cols[k][a] for k in range(K.dim) if ric_cols[k][a]} for a in range(ssd.h_dim)]
    W_coeffs = kernel(rows, K.dim)
    W = Subspace.span([K.combine(list(c)) for c in W_coeffs.basis], lay.size)
    checks = [
        ("R_part_in_K", all(K.contains(r) for r in Rs)),
        ("Rh_injective", Rsp.dim == ssd.h_dim),
        ("ricci_of_Rh_injective",
         rank([contract_omega(ssd, r) for r in Rs], ssd.h_dim) == ssd.h_dim),
        ("complementary", Rsp.intersect(W).dim == 0 and Rsp.dim + W.dim == K.dim),
    ]
    return CurvatureDecomposition(K, Rsp, W, checks)


def sp_curvature_count(n):
    """dim (V* (x) S^3 V*) / S^4 V* for dim V = n."""
    return n * comb(n + 2, 3) - comb(n + 3, 4)


# bi-Lagrangian splitting -------------------------------------------------------------

def h_center(ssd):
    m = ssd.h_dim
    rows = []
    for b in range(m):
        for c in range(m):
            row = {a: ssd.h_bracket[a][b][c] for a in range(m) if ssd.h_bracket[a][b][c]}
            if row:
                rows.append(row)
    return kernel(rows, m)


class NotBiLagrangian(ValueError):
    pass


def bilagrangian_splitting(ssd):
    """(W basis, W* basis) as eigenspaces of a central element of h with eigenvalues +-c."""
    Z = h_center(ssd)
    if Z.dim != 1:
        raise NotBiLagrangian(f"center of h has dimension {Z.dim}, expected 1")
    z = list(Z.basis[0])
    T = ssd.h_matrix(z)
    n = ssd.V_dim
    # T^2 = c^2 Id with c rational
    T2 = [[sum((T[i][k] * T[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]
    c2 = T2[0][0]
    if c2 <= 0 or any(T2[i][j] != (c2 if i == j else 0) for i in range(n) for j in range(n)):
        raise NotBiLagrangian("central element does not split V into real +-c eigenspaces")
    from .grading import _perfect_square_root
    c = _perfect_square_root(c2)
    if c is None:
        raise NotBiLagrangian("eigenvalues of the central element are irrational")
    z = [v / c for v in z]
    T = [[v / c for v in row] for row in T]

    def eig(sign):
        M = [[T[i][j] - (sign if i == j else 0) for j in range(n)] for i in range(n)]
        return kernel(M, n)

    Wp, Wm = eig(1), eig(-1)
    if Wp.dim + Wm.dim != n or Wp.dim != Wm.dim:
        raise NotBiLagrangian("eigenspaces do not split V evenly")
    return Wp, Wm, z


def sigma_correspondence(ssd, R, split=None):
    """sigma[i][j][k][l] = omega(wbar_l, R(wbar_k, w_i) w_j) for w in W, wbar in W*."""
    Wp, Wm, _ = split or bilagrangian_splitting(ssd)
    lay = layout(ssd)
    w = [list(b) for b in Wp.basis]
    wb = [list(b) for b in Wm.basis]
    d = len(w)
    sig = [[[[ZERO] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for k in range(d):
        for i in range(d):
            Rki = lay.evaluate(R, wb[k], w[i])
            for j in range(d):
                v = ssd.act(Rki, w[j])
                for l in range(d):
                    sig[i][j][k][l] = ssd.om(wb[l], v)
    return sig


def sigma_flat(sig):
    d = len(sig)
    return [sig[i][j][k][l] for i in range(d) for j in range(d) for k in range(d) for l in range(d)]


def sigma_symmetric(sig):
    d = len(sig)
    return all(sig[i][j][k][l] == sig[j][i][k][l] == sig[i][j][l][k]
               for i in range(d) for j in range(d) for k in range(d) for l in range(d))


def lagrangian_vanishing(ssd, R, split=None):
    """R(W, W) = 0 and R(W*, W*) = 0."""
    Wp, Wm, _ = split or bilagrangian_splitting(ssd)
    lay = layout(ssd)
    for S in (Wp, Wm):
        for a in range(S.dim):
            for b in range(a + 1, S.dim):
                if any(lay.evaluate(R, list(S.basis[a]), list(S.basis[b]))):
                    return False
    return True


def sigma_rank(ssd, K, split=None):
    split = split or bilagrangian_splitting(ssd)
    d = split[0].dim
    return rank([sigma_flat(sigma_correspondence(ssd, list(b), split)) for b in K.basis], d ** 4)


# prolongation --------------------------------------------------------------------------

@dataclass
class ProlongationSpace:
    basis: Subspace          # phi: V -> h, flat index x * dim_h + a, psi(x) = R_{phi(x)}
    psi_u_image: Subspace
    psi_u_in_space: bool

    @property
    def dim(self):
        return self.basis.dim


def _Rh_table(ssd):
    lay = layout(ssd)
    return [embed_Rh(ssd, ssd.h_unit(a)) for a in range(ssd.h_dim)], lay


def prolongation_matrix(ssd):
    n, m = ssd.V_dim, ssd.h_dim
    Rh, lay = _Rh_table(ssd)
    rows = []
    for x, y, z in combinations(range(n), 3):
        for c in range(m):
            row = {}
            for (p, q, r) in ((x, y, z), (y, z, x), (z, x, y)):
                for a in range(m):
                    v = lay.value(Rh[a], q, r)[c]
                    if v:
                        k = p * m + a
                        row[k] = row.get(k, 0) + v
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    return rows, n * m


def psi_u(ssd, u):
    """phi_u(x) = u o x, flattened."""
    out = []
    for x in range(ssd.V_dim):
        out.extend(ssd.circ(u, ssd.unit(x)))
    return out


def cyclic_residual(ssd, phi):
    """Cyclic sum of R_{phi(x)}(y, z) over basis triples; first nonzero or None."""
    n, m = ssd.V_dim, ssd.h_dim
    for x, y, z in combinations(range(n), 3):
        tot = [ZERO] * m
        for (p, q, r) in ((x, y, z), (y, z, x), (z, x, y)):
            R = embed_Rh(ssd, phi[p * m:(p + 1) * m])
            v = layout(ssd).value(R, q, r)
            tot = [s + t for s, t in zip(tot, v)]
        if any(tot):
            return (x, y, z), tot
    return None


def prolongation(ssd, R_part_space=None, budget=DEFAULT_BUDGET):
    budget.check(ssd, "prolongation", ssd.V_dim * ssd.h_dim)
    if R_part_space is not None and R_part_space.dim != ssd.h_dim:
        raise ValueError("R_part must be the image of h -> R_h")
    rows, ncols = prolongation_matrix(ssd)
    space = kernel(rows, ncols)
    psis = [psi_u(ssd, ssd.unit(u)) for u in range(ssd.V_dim)]
    img = Subspace.span(psis, ncols)
    return ProlongationSpace(space, img, all(space.contains(p) for p in psis))


def schur_space(ssd):
    """{phi in End V : phi(x) o y = phi(y) o x}; flat index k * n + j for phi[k][j]."""
    n, m = ssd.V_dim, ssd.h_dim
    rows = []
    for x in range(n):
        for y in range(x + 1, n):
            for c in range(m):
                row = {}
                for k in range(n):
                    a = ssd.circle[k][y][c]
                    b = ssd.circle[k][x][c]
                    if a:
                        row[k * n + x] = row.get(k * n + x, 0) + a
                    if b:
                        row[k * n + y] = row.get(k * n + y, 0) - b
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    return kernel(rows, n * n)


def identity_endomorphism(n):
    return [Fraction(int(k == j)) for k in range(n) for j in range(n)]


# report ------------------------------------------------------------------------------

def curvature_report(ssd, budget=DEFAULT_BUDGET):
    K = bianchi_kernel(ssd, budget)
    dec = decompose(ssd, K, budget)
    checks = [{"name": n, "pass": ok} for n, ok in dec.checks]
    checks.append({"name": "bianchi_membership",
                   "pass": all(bianchi_residual(ssd, list(b)) is None for b in K.basis)})
    agree = all(ricci(ssd, list(b))["agree"] for b in K.basis)
    checks.append({"name": "ricci_formulas_agree_on_K", "pass": agree})
    pro = prolongation(ssd, dec.R_part_basis, budget)
    checks.append({"name": "psi_u_membership", "pass": pro.psi_u_in_space})
    exceptional = ssd.V_dim == 2 and ssd.h_dim == 3
    if exceptional:
        checks.append({"name": "prolongation_exception_V_tensor_h",
                       "pass": pro.dim == ssd.V_dim * ssd.h_dim})
    else:
        checks.append({"name": "prolongation_is_V",
                       "pass": pro.dim == ssd.V_dim and pro.psi_u_image.dim == ssd.V_dim})
    S = schur_space(ssd)
    checks.append({"name": "schur_contains_identity",
                   "pass": S.contains(identity_endomorphism(ssd.V_dim))})
    if ssd.V_dim >= 4:
        checks.append({"name": "schur_is_scalar", "pass": S.dim == 1})
    n = ssd.V_dim
    if ssd.h_dim == n * (n + 1) // 2:
        checks.append({"name": "sp_dimension_count", "pass": K.dim == sp_curvature_count(n)})
    extra = {}
    try:
        split = bilagrangian_splitting(ssd)
    except NotBiLagrangian:
        split = None
    if split is not None and ssd.h_dim == (n // 2) ** 2:
        d = n // 2
        expect = comb(d + 1, 2) ** 2
        checks.append({"name": "bilagrangian_dimension_count", "pass": K.dim == expect})
        checks.append({"name": "sigma_bijective", "pass": sigma_rank(ssd, K, split) == K.dim})
        checks.append({"name": "lagrangian_vanishing",
                       "pass": all(lagrangian_vanishing(ssd, list(b), split) for b in K.basis)})
        checks.append({"name": "sigma_symmetric",
                       "pass": all(sigma_symmetric(sigma_correspondence(ssd, list(b), split))
                                   for b in K.basis)})
        extra["bilagrangian"] = True
    dimK, dimR, dimW = dec.dims
    return {
        "algebra": ssd.name,
        "scalar_field": ssd.meta.get("scalar_field", "Q"),
        "dimV": ssd.V_dim,
        "dimH": ssd.h_dim,
        "dimK": dimK,
        "dimR": dimR,
        "dimW": dimW,
        "prolongation_dim": pro.dim,
        "psi_span_dim": pro.psi_u_image.dim,
        "schur_dim": S.dim,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
        **extra,
    }

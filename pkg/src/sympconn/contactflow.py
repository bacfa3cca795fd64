"""Floating-point geometry on Gamma_a = {g : Ad_{g^-1} a in Q}.

Q is the affine slice 1/2 e-^2 + h + g^1 + g^2.  Every point of Gamma_a
carries (rho, u, f) through

    Ad_{g^-1} a = 1/2 e-^2 + rho + e+ (x) u + 1/2 f e+^2,

and the left Maurer-Cartan form splits along Gamma_a as
-2 kappa (1/2 e-^2 + rho) + e- (x) theta + eta plus dependent g^0, g^1, g^2
parts.  All group work happens in the matrix model of the algebra.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from .curvature import embed_Rh
from .grading import grade
from .liecore.linalg import Subspace, inverse, kernel
from .liecore.matrix_forms import float_matrices
from .sympdata import extract

RETRACT_TOL = 1e-12
ASSERT_TOL = 1e-9


class RetractionError(RuntimeError):
    pass


class NotTangent(ValueError):
    pass


def _f(x):
    return float(x)


class FlowContext:
    """Float data of a graded matrix algebra: frame matrices, coordinates, tables."""

    def __init__(self, L, tg=None, ssd=None):
        if L.matrices is None:
            raise ValueError(f"{L.name} has no matrix model")
        self.L = L
        self.tg = tg or grade(L)
        self.ssd = ssd or extract(self.tg)
        ssd = self.ssd
        self.n, self.m = ssd.V_dim, ssd.h_dim
        self.N = ssd.frame_dim
        vecs, self.labels, degs = self.tg.frame()
        self.frame_exact = vecs
        self.degrees = np.array(degs)
        basis = float_matrices(L)
        self._basis = basis
        self.complex = np.iscomplexobj(basis)
        F = np.array([[_f(c) for c in v] for v in vecs])          # N x dim(L)
        self.frame_mats = np.tensordot(F, basis, axes=(1, 0))     # N x s x s
        self.size = basis.shape[1]
        flat = self._flatten_many(self.frame_mats)                # (2)s^2 x N
        self._pinv = np.linalg.pinv(flat)
        self._frame_to_L = F
        # index blocks in frame order
        m, n = self.m, self.n
        self.i_ep2, self.i_epem, self.i_em2 = 0, 1, 2
        self.sl_h = slice(3, 3 + m)
        self.sl_p = slice(3 + m, 3 + m + n)
        self.sl_m = slice(3 + m + n, 3 + m + 2 * n)
        # tables
        self.omega = np.array([[_f(x) for x in row] for row in ssd.omega])
        self.h_action = np.array([[[_f(x) for x in row] for row in A] for A in ssd.h_action]) \
            if m else np.zeros((0, n, n))
        self.circle = np.array([[[_f(x) for x in c] for c in row] for row in ssd.circle])
        self.h_bracket = np.array([[[_f(x) for x in c] for c in row] for row in ssd.h_bracket])
        self.inner = np.array([[_f(x) for x in row] for row in ssd.inner])
        self.inner_h = self.inner[self.sl_h, self.sl_h]
        C = np.zeros((self.N, self.N, self.N))
        for (i, j), vec in ssd.frame.table().items():
            for k, v in vec.items():
                C[i, j, k] = float(v)
                C[j, i, k] = -float(v)
        self.struct = C
        # R_{h_a} for the curvature term, from the exact embedding
        Rh = []
        for a in range(m):
            R = embed_Rh(ssd, ssd.h_unit(a))
            Rh.append([_f(x) for x in R])
        self._Rh = np.array(Rh)                                   # m x (pairs * m)
        self._pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    # conversions ------------------------------------------------------------------

    def _flatten_many(self, mats):
        cols = []
        for M in mats:
            v = M.reshape(-1)
            cols.append(np.concatenate([v.real, v.imag]) if self.complex else v.real)
        return np.array(cols).T

    def coords(self, X):
        """Frame coordinates of a matrix in the algebra."""
        v = X.reshape(-1)
        flat = np.concatenate([v.real, v.imag]) if self.complex else v.real
        return self._pinv @ flat

    def matrix(self, c):
        return np.tensordot(np.asarray(c, dtype=float), self.frame_mats, axes=(0, 0))

    def L_to_frame_exact(self, x):
        """Exact frame coordinates of an L-coordinate vector."""
        inv = self._frame_inverse()
        N = self.N
        return [sum((Fraction(x[k]) * inv[k][r] for k in range(N) if x[k]), Fraction(0))
                for r in range(N)]

    def frame_to_L_exact(self, c):
        out = [Fraction(0)] * self.N
        for r, cr in enumerate(c):
            if cr:
                for k, v in enumerate(self.frame_exact[r]):
                    if v:
                        out[k] += Fraction(cr) * v
        return out

    def _frame_inverse(self):
        if not hasattr(self, "_finv"):
            self._finv = inverse(self.frame_exact)
        return self._finv

    def bracket(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.struct)

    def ad(self, x):
        """ad(x) as a matrix in frame coordinates: (ad x) y = [x, y]."""
        return np.einsum("i,ijk->kj", x, self.struct)

    def pair(self, x, y):
        return float(x @ self.inner @ y)

    # frame-vector builders --------------------------------------------------------

    def vec(self, ep2=0.0, epem=0.0, em2=0.0, h=None, up=None, um=None):
        c = np.zeros(self.N)
        c[self.i_ep2], c[self.i_epem], c[self.i_em2] = ep2, epem, em2
        if h is not None:
            c[self.sl_h] = h
        if up is not None:
            c[self.sl_p] = up
        if um is not None:
            c[self.sl_m] = um
        return c

    def h_mat(self, rho):
        return np.tensordot(rho, self.h_action, axes=(0, 0)) if self.m else np.zeros((self.n,) * 2)

    def act(self, rho, x):
        return self.h_mat(rho) @ x

    def om(self, x, y):
        return float(x @ self.omega @ y)

    def circ(self, x, y):
        return np.einsum("i,j,ija->a", x, y, self.circle)

    def hbr(self, a, b):
        return np.einsum("i,j,ijk->k", a, b, self.h_bracket)

    def R_rho(self, rho, x, y):
        """R_rho(x, y) from the tabulated R_{h_a}."""
        flat = rho @ self._Rh if self.m else np.zeros(0)
        out = np.zeros(self.m)
        n, m = self.n, self.m
        for k, (i, j) in enumerate(self._pairs):
            w = x[i] * y[j] - x[j] * y[i]
            if w:
                out += w * flat[k * m:(k + 1) * m]
        return out

    def tangent(self, fp, c=0.0, x=None, h=None):
        """mu-vector c Ad_{g^-1}a + e- (x) x + e+ (x) rho x + 1/2 omega(u, x) e+^2 + h."""
        x = np.zeros(self.n) if x is None else np.asarray(x, dtype=float)
        h = np.zeros(self.m) if h is None else np.asarray(h, dtype=float)
        v = c * fp.A
        v = v + self.vec(ep2=0.5 * self.om(fp.u, x), h=h, up=self.act(fp.rho, x), um=x)
        return v


# points on Gamma_a ----------------------------------------------------------------------

@dataclass
class FramePoint:
    g: np.ndarray
    A: np.ndarray          # frame coordinates of Ad_{g^-1} a
    rho: np.ndarray
    u: np.ndarray
    f: float
    residual: float

    def invariant(self, ctx):
        """f + (rho, rho), which equals (a, a) on Gamma_a."""
        return self.f + float(self.rho @ ctx.inner_h @ self.rho)


def ad_inv(ctx, g, a_mat):
    return ctx.coords(np.linalg.solve(g, a_mat @ g))


def q_residual_vector(ctx, A):
    return np.concatenate([[A[ctx.i_em2] - 0.5, A[ctx.i_epem]], A[ctx.sl_m]])


def q_residual(ctx, g, a_mat):
    return float(np.linalg.norm(q_residual_vector(ctx, ad_inv(ctx, g, a_mat))))


def _point(ctx, g, a_mat):
    A = ad_inv(ctx, g, a_mat)
    return FramePoint(g, A, A[ctx.sl_h].copy(), A[ctx.sl_p].copy(), 2.0 * A[ctx.i_ep2],
                      float(np.linalg.norm(q_residual_vector(ctx, A))))


def _lift_step(ctx, g, a_mat):
    """One exact pass g exp(tau H) exp(e+ (x) w) exp(s e+^2) onto Gamma_a."""
    A = ad_inv(ctx, g, a_mat)
    s0 = A[ctx.i_em2]
    if not s0 > 0:
        raise RetractionError(f"e-^2 component {s0:.3g} is not positive: g is off C_a")
    H = -ctx.frame_mats[ctx.i_epem]
    # Ad_{exp(-tau H)} scales g^-2 by exp(2 tau)
    tau = 0.5 * np.log(0.5 / s0)
    g = g @ expm(tau * H)
    A = ad_inv(ctx, g, a_mat)
    # Ad_{exp(-X)}, X = e+ (x) w: g^-1 part becomes A_{-1} - [X, 1/2 e-^2] = A_{-1} - e- (x) w
    w = A[ctx.sl_m]
    g = g @ expm(ctx.matrix(ctx.vec(up=w)))
    A = ad_inv(ctx, g, a_mat)
    # Ad_{exp(-s e+^2)}: e+e- part becomes t - 2s * (1/2 * 2)... fixed by s = t / 2
    s = 0.5 * A[ctx.i_epem]
    g = g @ expm(ctx.matrix(ctx.vec(ep2=s)))
    return g


def _newton_step(ctx, g, a_mat):
    """Linearized solve along e+e-, e+^2, e+ (x) V (a complement of T Gamma_a)."""
    A = ad_inv(ctx, g, a_mat)
    r = q_residual_vector(ctx, A)
    dirs = [ctx.vec(epem=1.0), ctx.vec(ep2=1.0)] + \
        [ctx.vec(up=np.eye(ctx.n)[i]) for i in range(ctx.n)]
    J = np.array([q_residual_vector(ctx, -ctx.bracket(d, A)) + np.concatenate(
        [[0.5, 0.0], np.zeros(ctx.n)]) for d in dirs]).T
    t = np.linalg.solve(J, -r)
    return g @ expm(ctx.matrix(sum(tk * d for tk, d in zip(t, dirs))))


def retract(ctx, g, a_mat, tol=RETRACT_TOL, method="newton", max_iter=30):
    """Move g onto Gamma_a inside g * exp(F e+e- + g^1 + g^2) and extract (rho, u, f).

    "newton" solves the linearized constraint along e+e-, e+^2, e+ (x) V;
    "lift" applies the exact graded lift.  Both land on the same point of
    g P' (P' the group of that complement), so either can check the other.
    One extra step is taken after the tolerance is met so that the result is
    a smooth function of g at round-off level, which finite differences need.
    """
    step = _lift_step if method == "lift" else _newton_step
    res = q_residual(ctx, g, a_mat)
    for _ in range(max_iter):
        if res < tol:
            g2 = step(ctx, g, a_mat)
            res2 = q_residual(ctx, g2, a_mat)
            if res2 <= res:
                g = g2
            return _point(ctx, g, a_mat)
        g = step(ctx, g, a_mat)
        res = q_residual(ctx, g, a_mat)
        if not np.isfinite(res):
            break
    raise RetractionError(f"retraction did not converge (residual {res:.3e})")


# Maurer-Cartan split ------------------------------------------------------------------------

@dataclass
class CoframeSample:
    kappa: float
    theta: np.ndarray
    eta: np.ndarray
    nu: float
    alpha_plus: np.ndarray
    kappa_plus: float
    reassembly: float
    relations: dict = field(default_factory=dict)


def mc_decompose(ctx, fp, mu, tol=1e-10, strict=True):
    """(kappa, theta, eta) of a left-translated tangent vector mu at fp."""
    mu = np.asarray(mu, dtype=float)
    kappa = -mu[ctx.i_em2]
    theta = mu[ctx.sl_m].copy()
    eta = mu[ctx.sl_h] + 2.0 * kappa * fp.rho
    nu = mu[ctx.i_epem]
    alpha_plus = mu[ctx.sl_p].copy()
    kappa_plus = mu[ctx.i_ep2]
    want_alpha = ctx.act(fp.rho, theta) - 2.0 * kappa * fp.u
    want_kplus = 0.5 * ctx.om(fp.u, theta) - fp.f * kappa
    rebuilt = ctx.vec(ep2=want_kplus, em2=-kappa, h=eta - 2.0 * kappa * fp.rho,
                      up=want_alpha, um=theta)
    scale = max(1.0, float(np.linalg.norm(mu)))
    res = float(np.linalg.norm(rebuilt - mu)) / scale
    rel = {
        "nu": abs(nu),
        "alpha_plus": float(np.linalg.norm(alpha_plus - want_alpha)),
        "kappa_plus": abs(kappa_plus - want_kplus),
    }
    if strict and res > tol:
        raise NotTangent(f"vector is not tangent to Gamma_a (reassembly residual {res:.3e})")
    return CoframeSample(kappa, theta, eta, nu, alpha_plus, kappa_plus, res, rel)


def _mu_central(ctx, gm, gc, gp, eps):
    """Left Maurer-Cartan form of a curve from three samples, O(eps^2)."""
    return ctx.coords(np.linalg.solve(gc, gp - gm) / (2.0 * eps))


# structure equations ------------------------------------------------------------------------

EQUATIONS = ("dkappa", "dtheta", "deta", "drho", "du", "df")


def _stencil(ctx, fp, a_mat, v1, v2, eps):
    E1, E2 = ctx.matrix(v1), ctx.matrix(v2)
    P = {}
    for i in (-1, 0, 1):
        gi = fp.g @ expm(i * eps * E1)
        for j in (-1, 0, 1):
            P[(i, j)] = retract(ctx, gi @ expm(j * eps * E2), a_mat)
    return P


def structure_residuals(ctx, fp, a_mat, v1, v2, eps):
    """Residuals of the six structure equations on the family g exp(s v1) exp(t v2)."""
    P = _stencil(ctx, fp, a_mat, v1, v2, eps)
    c = P[(0, 0)]

    def mu_s(j):
        return _mu_central(ctx, P[(-1, j)].g, P[(0, j)].g, P[(1, j)].g, eps)

    def mu_t(i):
        return _mu_central(ctx, P[(i, -1)].g, P[(i, 0)].g, P[(i, 1)].g, eps)

    def split(i, j, mu):
        return mc_decompose(ctx, P[(i, j)], mu, strict=False)

    Ss = {j: split(0, j, mu_s(j)) for j in (-1, 0, 1)}
    Tt = {i: split(i, 0, mu_t(i)) for i in (-1, 0, 1)}
    s0, t0 = Ss[0], Tt[0]

    def d2(get):
        return (get(Tt[1]) - get(Tt[-1])) / (2 * eps) - (get(Ss[1]) - get(Ss[-1])) / (2 * eps)

    out = {}
    out["dkappa"] = abs(d2(lambda S: S.kappa) - ctx.om(s0.theta, t0.theta))
    r = d2(lambda S: S.theta) + ctx.act(s0.eta, t0.theta) - ctx.act(t0.eta, s0.theta)
    out["dtheta"] = float(np.linalg.norm(r))
    r = d2(lambda S: S.eta) + ctx.hbr(s0.eta, t0.eta) - ctx.R_rho(c.rho, s0.theta, t0.theta)
    out["deta"] = float(np.linalg.norm(r))

    def along(axis):
        if axis == "s":
            m_, p_, S = P[(-1, 0)], P[(1, 0)], s0
        else:
            m_, p_, S = P[(0, -1)], P[(0, 1)], t0
        drho = (p_.rho - m_.rho) / (2 * eps)
        du = (p_.u - m_.u) / (2 * eps)
        df = (p_.f - m_.f) / (2 * eps)
        r1 = drho + ctx.hbr(S.eta, c.rho) - ctx.circ(c.u, S.theta)
        rho2 = ctx.h_mat(c.rho) @ ctx.h_mat(c.rho)
        r2 = du + ctx.act(S.eta, c.u) - (rho2 @ S.theta + c.f * S.theta)
        r3 = df + 2.0 * float(c.rho @ ctx.inner_h @ drho)
        return float(np.linalg.norm(r1)), float(np.linalg.norm(r2)), abs(r3)

    a1, a2 = along("s"), along("t")
    out["drho"] = max(a1[0], a2[0])
    out["du"] = max(a1[1], a2[1])
    out["df"] = max(a1[2], a2[2])
    out["invariant_spread"] = float(np.ptp([p.invariant(ctx) for p in P.values()]))
    return out


EXACT_FLOOR = 1e-10


def fitted_order(eps_list, vals):
    """Slope of log residual against log eps; None when the residual is at round-off."""
    vals = np.asarray(vals, dtype=float)
    if np.all(vals < EXACT_FLOOR):
        return None
    if np.any(vals <= 0):
        return float("nan")
    return float(np.polyfit(np.log(np.asarray(eps_list)), np.log(vals), 1)[0])


def convergence_orders(ctx, fp, a_mat, v1, v2, eps_list=(1e-2, 5e-3, 2.5e-3)):
    """Per-equation convergence order; None marks an equation satisfied to round-off."""
    rows = [structure_residuals(ctx, fp, a_mat, v1, v2, e) for e in eps_list]
    orders, table = {}, {}
    for name in EQUATIONS:
        vals = [r[name] for r in rows]
        table[name] = vals
        orders[name] = fitted_order(eps_list, vals)
    spread = max(r["invariant_spread"] for r in rows)
    return orders, table, spread


# sampling helpers -------------------------------------------------------------------------------

def random_algebra_element(ctx, rng, scale=1.0):
    return ctx.matrix(scale * rng.standard_normal(ctx.N))


def random_group_element(ctx, rng, factors=3, scale=0.7):
    g = np.eye(ctx.size, dtype=complex if ctx.complex else float)
    for _ in range(factors):
        g = g @ expm(random_algebra_element(ctx, rng, scale))
    return g


def generic_point(ctx, a_mat, rng, scale=0.3, attempts=50):
    """A point of Gamma_a near the base point, pushed off by a random right factor."""
    base = retract(ctx, np.eye(ctx.size, dtype=complex if ctx.complex else float), a_mat,
                   method="lift")
    for _ in range(attempts):
        try:
            return retract(ctx, base.g @ expm(random_algebra_element(ctx, rng, scale)), a_mat,
                           method="lift")
        except RetractionError:
            continue
    raise RetractionError("no generic point found near the base point")


def random_tangent(ctx, fp, rng):
    return ctx.tangent(fp, c=rng.standard_normal(), x=rng.standard_normal(ctx.n),
                       h=rng.standard_normal(ctx.m))


# conservation --------------------------------------------------------------------------------

def ad_traces(ctx, A, powers=(2, 3, 4, 5, 6)):
    M = ctx.ad(A)
    out, P = [], np.eye(ctx.N)
    for k in range(1, max(powers) + 1):
        P = P @ M
        if k in powers:
            out.append(float(np.trace(P)))
    return np.array(out)


def retracted_path(ctx, fp, a_mat, rng, steps=1000, step=1e-3):
    path = [fp]
    cur = fp
    for _ in range(steps):
        v = random_tangent(ctx, cur, rng)
        v /= np.linalg.norm(v)
        cur = retract(ctx, cur.g @ expm(step * ctx.matrix(v)), a_mat)
        path.append(cur)
    return path


def conserved_invariants(ctx, path):
    inv = np.array([p.invariant(ctx) for p in path])
    tr = np.array([ad_traces(ctx, p.A) for p in path])
    scale = np.maximum(1.0, np.abs(tr[0]))
    return {
        "f_plus_rho2_drift": float(np.max(np.abs(inv - inv[0]))),
        "ad_trace_drift": float(np.max(np.abs(tr - tr[0]) / scale)),
        "ad_trace_abs_drift": float(np.max(np.abs(tr - tr[0]))),
        "max_q_residual": float(max(p.residual for p in path)),
        "steps": len(path) - 1,
    }


# transversality and symmetries ------------------------------------------------------------------

def transversality_scan(ctx, a_vec, n_samples, rng):
    """Fraction of samples Ad_g e+^2 with (a, Ad_g e+^2) > 0."""
    a_vec = np.asarray(a_vec, dtype=float)
    ep2 = ctx.frame_mats[ctx.i_ep2]
    na = np.sqrt(abs(a_vec @ a_vec)) or 1.0
    pos = 0
    for _ in range(n_samples):
        g = random_group_element(ctx, rng)
        S = ctx.coords(g @ ep2 @ np.linalg.inv(g))
        val = ctx.pair(a_vec, S) / (na * np.linalg.norm(S))
        if val > 0:
            pos += 1
    return pos / n_samples


def stabilizer_dim(L, a_L):
    """Exact dim {x : [x, a] = 0} for rational L-coordinates."""
    return kernel(L.ad_matrix(list(a_L)), L.dim).dim


def stabilizer_dim_float(ctx, a_frame, tol=1e-8):
    s = np.linalg.svd(ctx.ad(a_frame), compute_uv=False)
    return int(np.sum(s < tol * max(1.0, s[0])))


def symmetry_dimension(ctx, a_L):
    """dim stab(a) - 1, with the normal-form consistency check when it applies."""
    if not any(a_L):
        raise ValueError("a = 0 is not a valid momentum")
    L = ctx.L
    dstab = stabilizer_dim(L, a_L)
    out = {"stab_dim": dstab, "symmetry_dim": dstab - 1}
    nf = normal_form(ctx, a_L)
    if nf is not None:
        c, rho0 = nf
        ssd = ctx.ssd
        R = ssd.h_matrix(rho0)
        n = ssd.V_dim
        R2 = [[sum((R[i][k] * R[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
              for i in range(n)]
        if all(R2[i][j] == (-c * c if i == j else 0) for i in range(n) for j in range(n)):
            rows = []
            for b in range(ssd.h_dim):
                col = ssd.hbr(ssd.h_unit(b), rho0)
                rows.append(col)
            k_dim = kernel([[rows[b][c_] for b in range(ssd.h_dim)] for c_ in range(ssd.h_dim)],
                           ssd.h_dim).dim
            out["normal_form"] = {"c": str(c), "dim_k": k_dim,
                                  "expected_stab": 1 + k_dim + n,
                                  "consistent": dstab == 1 + k_dim + n}
    return out


def normal_form(ctx, a_L):
    """(c, rho0) if a = c/2 (e+^2 + e-^2) + rho0 exactly in the graded frame, else None."""
    fc = ctx.L_to_frame_exact(a_L)
    if fc[ctx.i_ep2] != fc[ctx.i_em2] or fc[ctx.i_epem] != 0:
        return None
    if any(fc[3 + ctx.m:]):
        return None
    c = 2 * fc[ctx.i_ep2]
    if c <= 0:
        return None
    return c, list(fc[3:3 + ctx.m])


# vector fields ----------------------------------------------------------------------------------

def _flow(ctx, fp, a_mat, field_fn, eps):
    """Lie-group midpoint step of the field mu = field_fn(point), retracted."""
    mid = retract(ctx, fp.g @ expm(0.5 * eps * ctx.matrix(field_fn(fp))), a_mat)
    return retract(ctx, fp.g @ expm(eps * ctx.matrix(field_fn(mid))), a_mat)


def vector_field_audit(ctx, fp, a_mat, rng, eps_list=(1e-2, 5e-3, 2.5e-3)):
    """Directional derivatives of (rho, u, f) along xi_x, xi_h and the [xi_x, xi_y] bracket."""
    x = rng.standard_normal(ctx.n)
    y = rng.standard_normal(ctx.n)
    h = rng.standard_normal(ctx.m)

    def xi_vec(v):
        return lambda p: ctx.tangent(p, x=v)

    def xi_h(p):
        return ctx.vec(h=h)

    def deriv(fn, eps):
        P = {s: retract(ctx, fp.g @ expm(s * eps * ctx.matrix(fn(fp))), a_mat) for s in (-1, 1)}
        return ((P[1].rho - P[-1].rho) / (2 * eps), (P[1].u - P[-1].u) / (2 * eps),
                (P[1].f - P[-1].f) / (2 * eps))

    rows = {"xi_x_rho": [], "xi_x_u": [], "xi_x_f": [], "xi_h_rho": [], "xi_h_u": [],
            "xi_h_f": [], "bracket_one_sided": [], "bracket": []}
    rho, u, f = fp.rho, fp.u, fp.f
    rho2 = ctx.h_mat(rho) @ ctx.h_mat(rho)
    for eps in eps_list:
        dr, du, df = deriv(xi_vec(x), eps)
        rows["xi_x_rho"].append(float(np.linalg.norm(dr - ctx.circ(u, x))))
        rows["xi_x_u"].append(float(np.linalg.norm(du - (rho2 @ x + f * x))))
        rows["xi_x_f"].append(abs(df + 2.0 * ctx.om(ctx.act(rho, u), x)))
        dr, du, df = deriv(xi_h, eps)
        rows["xi_h_rho"].append(float(np.linalg.norm(dr + ctx.hbr(h, rho))))
        rows["xi_h_u"].append(float(np.linalg.norm(du + ctx.act(h, u))))
        rows["xi_h_f"].append(abs(df))
        # group commutator of the two flows; the +-eps average cancels the O(eps) term
        want_eta = -ctx.R_rho(rho, x, y)
        zs = []
        for e in (eps, -eps):
            pxy = _flow(ctx, _flow(ctx, fp, a_mat, xi_vec(x), e), a_mat, xi_vec(y), e)
            pyx = _flow(ctx, _flow(ctx, fp, a_mat, xi_vec(y), e), a_mat, xi_vec(x), e)
            zs.append(ctx.coords((np.linalg.solve(pyx.g, pxy.g) - np.eye(ctx.size)) / e ** 2))

        def bracket_res(Z):
            S = mc_decompose(ctx, fp, Z, strict=False)
            return abs(S.kappa + ctx.om(x, y)) + float(np.linalg.norm(S.theta)) \
                + float(np.linalg.norm(S.eta - want_eta))

        rows["bracket_one_sided"].append(bracket_res(zs[0]))
        rows["bracket"].append(bracket_res(0.5 * (zs[0] + zs[1])))
    orders = {k: fitted_order(eps_list, v) for k, v in rows.items()}
    return {"residuals": rows, "orders": orders}


# momenta ------------------------------------------------------------------------------------------

@dataclass
class MomentumElement:
    a: list                  # exact L-coordinates
    spec: str
    c: object = None         # normal-form data when a was given that way
    rho0: list = None

    def floats(self):
        return np.array([float(x) for x in self.a])


class MomentumError(ValueError):
    pass


def bochner_momentum(L, p, q):
    """diag((q+1)i x (p+1), -(p+1)i x (q+1)) in su(p+1, q+1)."""
    from .liecore.matrix_forms import _zeros
    from .liecore.scalars import GaussianRational
    if L.meta.get("family") != "su" or tuple(L.meta["params"]) != (p + 1, q + 1):
        raise MomentumError(f"bochner:{p},{q} lives in su:{p + 1},{q + 1}, not {L.name}")
    n = p + q + 2
    D = _zeros(n, True)
    for k in range(n):
        D[k, k] = GaussianRational(0, q + 1) if k < p + 1 else GaussianRational(0, -(p + 1))
    return MomentumElement(list(L.coordinates(D)), f"bochner:{p},{q}")


def ricci_momentum(ctx, c):
    """c J with J = [[0, I], [-I, 0]] in sp(2n, R), signed so that (J, e+^2) > 0."""
    L = ctx.L
    if L.meta.get("family") != "sp_real":
        raise MomentumError(f"ricci momenta live in sp_real, not {L.name}")
    c = Fraction(c)
    if c <= 0:
        raise MomentumError("ricci:c needs c > 0")
    n = L.meta["params"][0]
    J = [Fraction(0)] * L.dim
    for k in range(n):
        J[L.labels.index(f"B{k + 1}{k + 1}")] = Fraction(1)
        J[L.labels.index(f"C{k + 1}{k + 1}")] = Fraction(-1)
    fc = ctx.L_to_frame_exact(J)
    ssd = ctx.ssd
    pairing = sum(fc[r] * ssd.inner[r][ctx.i_ep2] for r in range(ctx.N))
    sign = 1 if pairing > 0 else -1
    return MomentumElement([sign * c * x for x in J], f"ricci:{c}")


def normal_momentum(ctx, c, rho0=None):
    """c/2 (e+^2 + e-^2) + rho0 with rho0 in h-coordinates."""
    c = Fraction(c)
    rho0 = [Fraction(x) for x in (rho0 or [0] * ctx.m)]
    if len(rho0) != ctx.m:
        raise MomentumError(f"rho0 needs {ctx.m} h-coordinates, got {len(rho0)}")
    fc = [Fraction(0)] * ctx.N
    fc[ctx.i_ep2] = fc[ctx.i_em2] = c / 2
    fc[3:3 + ctx.m] = rho0
    if not any(fc):
        raise MomentumError("a = 0 is not a valid momentum")
    spec = f"normal:{c}" + "".join(f",{x}" for x in rho0)
    return MomentumElement(ctx.frame_to_L_exact(fc), spec, c, rho0)


def explicit_momentum(ctx, path):
    """JSON file with "coords" (L basis) or "matrix" (rows; complex entries as [re, im])."""
    import json
    from .liecore.matrix_forms import _zeros
    from .liecore.scalars import GaussianRational
    with open(path) as fh:
        data = json.load(fh)
    L = ctx.L
    if "coords" in data:
        a = [Fraction(str(x)) for x in data["coords"]]
        if len(a) != L.dim:
            raise MomentumError(f"expected {L.dim} coordinates, got {len(a)}")
    elif "matrix" in data:
        rows = data["matrix"]
        M = _zeros(len(rows), ctx.complex)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if ctx.complex:
                    re, im = (v, 0) if not isinstance(v, list) else v
                    M[i, j] = GaussianRational(Fraction(str(re)), Fraction(str(im)))
                else:
                    M[i, j] = Fraction(str(v))
        try:
            a = list(L.coordinates(M))
        except ValueError as e:
            raise MomentumError(f"matrix is not in {L.name}: {e}") from None
    else:
        raise MomentumError("explicit momentum needs a 'coords' or 'matrix' entry")
    return MomentumElement(a, f"explicit:{path}")


def parse_momentum(ctx, spec):
    kind, _, rest = spec.partition(":")
    args = [x for x in rest.split(",") if x] if rest else []
    try:
        if kind == "bochner":
            if len(args) != 2:
                raise MomentumError("bochner needs p,q")
            return bochner_momentum(ctx.L, int(args[0]), int(args[1]))
        if kind == "ricci":
            return ricci_momentum(ctx, args[0] if args else 1)
        if kind == "normal":
            if not args:
                raise MomentumError("normal needs c")
            return normal_momentum(ctx, args[0], args[1:] or None)
        if kind == "explicit":
            return explicit_momentum(ctx, rest)
    except (ValueError, ZeroDivisionError) as e:
        if isinstance(e, MomentumError):
            raise
        raise MomentumError(f"bad momentum spec {spec!r}: {e}") from None
    raise MomentumError(f"unknown momentum kind {kind!r}")


def momentum_matrix(ctx, mom):
    return np.tensordot(mom.floats(), ctx._basis, axes=(0, 0))


def random_cartan_momentum(L, rng, bound=20):
    """Random rational combination of the Cartan basis."""
    out = [Fraction(0)] * L.dim
    for C in L.cartan:
        c = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 5)))
        out = [o + c * Fraction(x) for o, x in zip(out, C)]
    return out

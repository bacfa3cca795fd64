"""Classical real forms as exact matrix algebras.

Families (with the standard diagonal form eta = diag(1_p, -1_q)):

* ``sl_real(n)``  traceless real n x n matrices, dim n^2 - 1
* ``su(p, q)``    X^* eta + eta X = 0, tr X = 0; realified, dim (p+q)^2 - 1
* ``sp_real(n)``  X^T J + J X = 0 with J = [[0, I], [-I, 0]], dim n(2n+1)
* ``so(p, q)``    X^T eta + eta X = 0, dim (p+q)(p+q-1)/2

Every algebra carries a grading seed (x, y): x a rank-one (for so: minimal)
nilpotent built from the first null basis vector and y its conjugate
transpose, together with a Cartan subalgebra given by diagonal or boost
matrices.  su entries are Gaussian rationals; all other entries are rational.
"""

from fractions import Fraction

import numpy as np

from .algebra import LieAlgebra
from .linalg import reduced_rows
from .scalars import GaussianRational, ZERO, imag_part, real_part

ONE = Fraction(1)


def _zeros(n, complex_=False):
    z = GaussianRational(0) if complex_ else ZERO
    M = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            M[i, j] = z
    return M


def _E(n, i, j, val=ONE, complex_=False):
    M = _zeros(n, complex_)
    M[i, j] = GaussianRational(val) if complex_ and not isinstance(val, GaussianRational) else val
    return M


def commutator(A, B):
    return A.dot(B) - B.dot(A)


def conj_transpose(A):
    n = A.shape[0]
    M = np.empty_like(A)
    for i in range(n):
        for j in range(n):
            v = A[j, i]
            M[i, j] = v.conjugate() if isinstance(v, GaussianRational) else v
    return M


class MatrixCoordinates:
    """Exact coordinates of a matrix with respect to a basis of matrices."""

    def __init__(self, mats, complex_=False):
        self.complex = complex_
        self.n = len(mats)
        self.shape = mats[0].shape
        flat = [self._flatten(M) for M in mats]
        self.width = len(flat[0])
        aug = []
        for i, f in enumerate(flat):
            row = {j: v for j, v in enumerate(f) if v}
            row[self.width + i] = ONE
            aug.append(row)
        piv, _ = reduced_rows(aug, self.width + self.n)
        if len(piv) != self.n or any(c >= self.width for c, _ in piv):
            raise ValueError("basis matrices are linearly dependent")
        self._pivots = [c for c, _ in piv]
        self._transform = [{j - self.width: v for j, v in r.items() if j >= self.width}
                           for _, r in piv]
        self._flat = flat

    def _flatten(self, M):
        out = []
        for v in M.flat:
            out.append(real_part(v))
            if self.complex:
                out.append(imag_part(v))
        return out

    def __call__(self, M, check=True):
        f = self._flatten(M)
        c = [ZERO] * self.n
        for p, T in zip(self._pivots, self._transform):
            x = f[p]
            if x:
                for i, t in T.items():
                    c[i] += x * t
        if check:
            for j in range(self.width):
                s = sum((ci * self._flat[i][j] for i, ci in enumerate(c) if ci), ZERO)
                if s != f[j]:
                    raise ValueError("matrix is not in the span of the basis")
        return c


def _build(name, mats, labels, cartan_mats, seed_x, complex_, meta):
    coords = MatrixCoordinates(mats, complex_)
    n = len(mats)
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = coords(commutator(mats[i], mats[j]))
            table[(i, j)] = {k: v for k, v in enumerate(c) if v}
    seed_y = conj_transpose(seed_x)
    cartan = [coords(C) for C in cartan_mats]
    return LieAlgebra(n, table, name=name, labels=labels, matrices=mats,
                      coordinates=coords, cartan=cartan,
                      seed=(coords(seed_x), coords(seed_y)),
                      scalar_field="Q (realified Q(i))" if complex_ else "Q",
                      meta=meta)


def sl_real(n):
    if n < 2:
        raise ValueError("sl_real(n) needs n >= 2")
    mats, labels = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                mats.append(_E(n, i, j))
                labels.append(f"E{i + 1}{j + 1}")
    cartan = []
    for k in range(n - 1):
        D = _E(n, k, k) - _E(n, k + 1, k + 1)
        mats.append(D)
        cartan.append(D)
        labels.append(f"H{k + 1}")
    return _build(f"sl_real:{n}", mats, labels, cartan, _E(n, 0, n - 1), False,
                  {"family": "sl_real", "params": (n,), "rank": n - 1, "matrix_size": n})


def sp_real(n):
    """sp(2n, R): block matrices [[A, B], [C, -A^T]] with B, C symmetric."""
    if n < 1:
        raise ValueError("sp_real(n) needs n >= 1")
    N = 2 * n
    mats, labels = [], []
    for i in range(n):
        for j in range(n):
            mats.append(_E(N, i, j) - _E(N, n + j, n + i))
            labels.append(f"A{i + 1}{j + 1}")
    for i in range(n):
        for j in range(i, n):
            M = _E(N, i, n + j)
            if i != j:
                M = M + _E(N, j, n + i)
            mats.append(M)
            labels.append(f"B{i + 1}{j + 1}")
    for i in range(n):
        for j in range(i, n):
            M = _E(N, n + i, j)
            if i != j:
                M = M + _E(N, n + j, i)
            mats.append(M)
            labels.append(f"C{i + 1}{j + 1}")
    cartan = [mats[i * n + i] for i in range(n)]
    return _build(f"sp_real:{n}", mats, labels, cartan, _E(N, 0, n), False,
                  {"family": "sp_real", "params": (n,), "rank": n, "matrix_size": N})


def _eta(p, q):
    return [1] * p + [-1] * q


def su(p, q):
    """su(p, q) realified; needs p, q >= 1 so that a null vector exists."""
    if p < 1 or q < 1:
        raise ValueError("su(p, q) needs p, q >= 1")
    n = p + q
    eta = _eta(p, q)
    i_ = GaussianRational(0, 1)
    mats, labels = [], []
    for a in range(n):
        for b in range(a + 1, n):
            s = -eta[a] * eta[b]
            mats.append(_E(n, a, b, GaussianRational(1), True) + _E(n, b, a, GaussianRational(s), True))
            labels.append(f"R{a + 1}{b + 1}")
            mats.append(_E(n, a, b, i_, True) + _E(n, b, a, GaussianRational(0, -s), True))
            labels.append(f"I{a + 1}{b + 1}")
    cartan = []
    for k in range(n - 1):
        D = _E(n, k, k, i_, True) - _E(n, k + 1, k + 1, i_, True)
        mats.append(D)
        cartan.append(D)
        labels.append(f"iH{k + 1}")
    # x = i * nvec nvec^* eta with nvec = e_1 + e_{p+1}
    nvec = [0] * n
    nvec[0] = nvec[p] = 1
    x = _zeros(n, True)
    for a in range(n):
        for b in range(n):
            if nvec[a] and nvec[b]:
                x[a, b] = GaussianRational(0, eta[b])
    return _build(f"su:{p},{q}", mats, labels, cartan, x, True,
                  {"family": "su", "params": (p, q), "rank": n - 1, "matrix_size": n,
                   "eta": eta})


def so(p, q):
    """so(p, q); the long-root seed needs a null 2-plane, so p, q >= 2."""
    if p < 2 or q < 2:
        raise ValueError("so(p, q) needs p, q >= 2")
    n = p + q
    eta = _eta(p, q)
    mats, labels = [], []
    for a in range(n):
        for b in range(a + 1, n):
            mats.append(_E(n, a, b) + _E(n, b, a, Fraction(-eta[a] * eta[b])))
            labels.append(f"L{a + 1}{b + 1}")
    index = {}
    for k, (a, b) in enumerate((a, b) for a in range(n) for b in range(a + 1, n)):
        index[(a, b)] = k
    cartan = [mats[index[(k, p + k)]] for k in range(min(p, q))]
    rest = list(range(p + min(p, q), n)) if q > p else list(range(q, p))
    for k in range(0, len(rest) - 1, 2):
        cartan.append(mats[index[(rest[k], rest[k + 1])]])
    u = [0] * n
    w = [0] * n
    u[0] = u[p] = 1
    w[1] = w[p + 1] = 1
    x = _zeros(n)
    for a in range(n):
        for b in range(n):
            x[a, b] = Fraction(u[a] * w[b] * eta[b] - w[a] * u[b] * eta[b])
    return _build(f"so:{p},{q}", mats, labels, cartan, x, False,
                  {"family": "so", "params": (p, q), "rank": n // 2, "matrix_size": n,
                   "eta": eta})


def matrix_form(family, *params):
    table = {"sl_real": sl_real, "sp_real": sp_real, "su": su, "so": so}
    if family not in table:
        raise ValueError(f"unknown matrix family {family!r}")
    return table[family](*params)


def to_matrix(L, x):
    """Exact matrix of an algebra vector (needs a matrix model)."""
    if L.matrices is None:
        raise ValueError(f"{L.name} has no matrix model")
    M = L.matrices[0] * 0
    for c, B in zip(x, L.matrices):
        if c:
            M = M + B * c
    return M


def float_matrices(L):
    """Basis matrices as a complex (or real) numpy array of shape (dim, n, n)."""
    cplx = any(isinstance(v, GaussianRational) for v in L.matrices[0].flat)
    dt = complex if cplx else float
    out = np.zeros((L.dim,) + L.matrices[0].shape, dtype=dt)
    for k, M in enumerate(L.matrices):
        for (i, j), v in np.ndenumerate(M):
            out[k, i, j] = complex(v) if cplx else float(v)
    return out

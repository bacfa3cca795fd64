"""Exact sparse linear algebra.

Rows are stored as ``{column: value}`` dicts.  Over the rationals every row is
scaled to a primitive integer vector and elimination is fraction-free
(``r <- p*r - q*s`` followed by removal of the row content), which keeps entry
growth under control on the large, very sparse Bianchi-type systems.  Rows with
Gaussian-rational entries fall back to ordinary Gauss-Jordan over the field.

Two pivot strategies are available so results can be cross-checked:
``"ordered"`` takes the first available row, ``"sparse"`` the row with the
fewest nonzeros (Markowitz-style).  Both must produce the same reduced form.
"""

from fractions import Fraction
from math import gcd

import numpy as np

from .scalars import GaussianRational, ZERO

STRATEGIES = ("ordered", "sparse")


class BudgetExceeded(RuntimeError):
    """An exact system is larger than the configured budget."""


def _lcm(a, b):
    return a * b // gcd(a, b)


def _as_sparse_rows(M, ncols=None):
    """Normalize a matrix-like object into (list of dict rows, ncols)."""
    if isinstance(M, np.ndarray):
        if M.ndim != 2:
            raise ValueError("expected a 2d array")
        rows = [{j: v for j, v in enumerate(r) if v} for r in M.tolist()]
        return rows, M.shape[1] if ncols is None else ncols
    rows = []
    width = 0
    for r in M:
        if isinstance(r, dict):
            rows.append({j: v for j, v in r.items() if v})
            if r:
                width = max(width, max(r) + 1)
        else:
            r = list(r)
            rows.append({j: v for j, v in enumerate(r) if v})
            width = max(width, len(r))
    if ncols is None:
        ncols = width
    return rows, ncols


def _is_gaussian(rows):
    for r in rows:
        for v in r.values():
            if isinstance(v, GaussianRational):
                return True
    return False


def _primitive(r):
    g = 0
    for v in r.values():
        g = gcd(g, v)
        if g == 1:
            return r
    if g > 1:
        return {c: v // g for c, v in r.items()}
    return r


def _int_row(row):
    den = 1
    for v in row.values():
        v = Fraction(v)
        den = _lcm(den, v.denominator)
    out = {}
    for c, v in row.items():
        v = Fraction(v) * den
        if v:
            out[c] = v.numerator
    return _primitive(out)


def _combine(r, p, q, s):
    """Primitive part of p*r - q*s (integer rows)."""
    out = {c: p * v for c, v in r.items()}
    for c, v in s.items():
        w = out.get(c, 0) - q * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _primitive(out)


def _choose(cands, active, strategy):
    if strategy == "sparse":
        return min(cands, key=lambda i: (len(active[i]), i))
    return cands[0]


def _reduce_integer(rows, strategy):
    active = [_int_row(r) for r in rows]
    active = [r for r in active if r]
    cols = sorted(set().union(*[set(r) for r in active])) if active else []
    pivots = []
    for c in cols:
        cands = [i for i, r in enumerate(active) if c in r]
        if not cands:
            continue
        prow = active.pop(_choose(cands, active, strategy))
        p = prow[c]
        nxt = []
        for r in active:
            if c in r:
                r = _combine(r, p, r[c], prow)
            if r:
                nxt.append(r)
        active = nxt
        for k, (pc, pr) in enumerate(pivots):
            if c in pr:
                pivots[k] = (pc, _combine(pr, p, pr[c], prow))
        pivots.append((c, prow))
    out = []
    for c, r in pivots:
        p = r[c]
        out.append((c, {j: Fraction(v, p) for j, v in r.items()}))
    return out


def _reduce_field(rows, strategy):
    active = [dict(r) for r in rows if r]
    cols = sorted(set().union(*[set(r) for r in active])) if active else []
    pivots = []
    for c in cols:
        cands = [i for i, r in enumerate(active) if c in r]
        if not cands:
            continue
        prow = active.pop(_choose(cands, active, strategy))
        inv = 1 / prow[c]
        prow = {j: v * inv for j, v in prow.items()}

        def elim(r):
            q = r[c]
            out = dict(r)
            for j, v in prow.items():
                w = out.get(j, 0) - q * v
                if w:
                    out[j] = w
                else:
                    out.pop(j, None)
            return out

        active = [r2 for r2 in (elim(r) if c in r else r for r in active) if r2]
        pivots = [(pc, elim(pr) if c in pr else pr) for pc, pr in pivots]
        pivots.append((c, prow))
    return pivots


def reduced_rows(M, ncols=None, strategy="ordered"):
    """Reduced row echelon form as a list of (pivot column, sparse row).

    Pivot entries are 1 and each pivot column is zero in every other row.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown pivot strategy {strategy!r}")
    rows, ncols = _as_sparse_rows(M, ncols)
    if _is_gaussian(rows):
        return _reduce_field(rows, strategy), ncols
    return _reduce_integer(rows, strategy), ncols


def rank(M, ncols=None, strategy="ordered"):
    piv, _ = reduced_rows(M, ncols, strategy)
    return len(piv)


def rref(M, ncols=None, strategy="ordered"):
    """Dense RREF: (tuple of row tuples, tuple of pivot columns)."""
    piv, ncols = reduced_rows(M, ncols, strategy)
    rows = tuple(tuple(r.get(j, ZERO) for j in range(ncols)) for _, r in piv)
    return rows, tuple(c for c, _ in piv)


def kernel(M, ncols=None, strategy="ordered"):
    """Right nullspace {v : M v = 0} as a Subspace."""
    piv, ncols = reduced_rows(M, ncols, strategy)
    pcols = {c for c, _ in piv}
    vecs = []
    for f in range(ncols):
        if f in pcols:
            continue
        v = {f: Fraction(1)}
        for c, r in piv:
            w = r.get(f)
            if w:
                v[c] = -w
        vecs.append(v)
    return Subspace.span(vecs, ncols, strategy=strategy)


def inverse(M):
    """Exact inverse of a square matrix (list of rows)."""
    rows, n = _as_sparse_rows(M)
    if len(rows) != n:
        raise ValueError("matrix is not square")
    aug = []
    for i, r in enumerate(rows):
        a = dict(r)
        a[n + i] = Fraction(1)
        aug.append(a)
    piv, _ = reduced_rows(aug, 2 * n)
    if len(piv) != n or any(c >= n for c, _ in piv):
        raise ZeroDivisionError("matrix is singular")
    inv = [[ZERO] * n for _ in range(n)]
    for c, r in piv:
        for j, v in r.items():
            if j >= n:
                inv[c][j - n] = v
    return inv


class Subspace:
    """Subspace of F^n stored by its reduced row echelon basis."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient, basis, pivots):
        self.ambient = ambient
        self.basis = tuple(tuple(b) for b in basis)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, vectors, ambient, strategy="ordered"):
        vectors = list(vectors)
        if not vectors:
            return cls(ambient, (), ())
        rows, piv = rref(vectors, ambient, strategy)
        return cls(ambient, rows, piv)

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, (), ())

    @classmethod
    def full(cls, ambient):
        rows = [[Fraction(int(i == j)) for j in range(ambient)] for i in range(ambient)]
        return cls(ambient, rows, range(ambient))

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def vectors(self):
        return [list(b) for b in self.basis]

    def coords(self, v):
        """Coordinates of v in the echelon basis; ValueError if v is outside."""
        v = list(v)
        if len(v) != self.ambient:
            raise ValueError("dimension mismatch")
        c = [v[p] for p in self.pivots]
        for j in range(self.ambient):
            s = ZERO
            for ci, b in zip(c, self.basis):
                if ci and b[j]:
                    s = s + ci * b[j]
            if s != v[j]:
                raise ValueError("vector does not lie in the subspace")
        return c

    def contains(self, v):
        try:
            self.coords(v)
        except ValueError:
            return False
        return True

    def combine(self, coeffs):
        out = [ZERO] * self.ambient
        for ci, b in zip(coeffs, self.basis):
            if ci:
                for j, x in enumerate(b):
                    if x:
                        out[j] = out[j] + ci * x
        return out

    def __add__(self, other):
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient)

    def intersect(self, other):
        """Intersection via the kernel of [B1^T | -B2^T]."""
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        cols = self.dim + other.dim
        rows = []
        for j in range(self.ambient):
            r = {}
            for i, b in enumerate(self.basis):
                if b[j]:
                    r[i] = b[j]
            for i, b in enumerate(other.basis):
                if b[j]:
                    r[self.dim + i] = -b[j]
            rows.append(r)
        ker = kernel(rows, cols)
        return Subspace.span([self.combine(k[: self.dim]) for k in ker.basis], self.ambient)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def solve(columns, rhs, strategy="ordered"):
    """One exact solution c of sum_k c_k columns[k] = rhs, or None.

    ``columns`` is a list of vectors of equal length.
    """
    m = len(columns)
    n = len(rhs)
    rows = []
    for i in range(n):
        r = {k: col[i] for k, col in enumerate(columns) if col[i]}
        if rhs[i]:
            r[m] = -rhs[i]
        rows.append(r)
    ker = kernel(rows, m + 1, strategy)
    for b in ker.basis:
        if b[m]:
            return [x / b[m] for x in b[:m]]
    return None

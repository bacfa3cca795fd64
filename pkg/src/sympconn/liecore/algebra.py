"""Lie algebras given by exact structure constants."""

import json
from fractions import Fraction
from functools import cached_property

from .linalg import Subspace, kernel, rank
from .scalars import ZERO


def _sparse(x):
    return {i: v for i, v in enumerate(x) if v}


class LieAlgebra:
    """Finite-dimensional Lie algebra with rational structure constants.

    ``table[(i, j)]`` (i < j) is the sparse coordinate vector of [e_i, e_j].
    A matrix model, a Cartan subalgebra and a grading seed are optional extras
    attached by the constructors in ``chevalley`` and ``matrix_forms``.
    """

    def __init__(self, dim, table, name="", labels=None, matrices=None,
                 coordinates=None, cartan=None, seed=None, scalar_field="Q", meta=None):
        self.dim = dim
        self.name = name
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(dim)]
        self.matrices = matrices
        self.coordinates = coordinates
        self.cartan = cartan
        self.seed = seed
        self.scalar_field = scalar_field
        self.meta = dict(meta or {})
        sc = {}
        for (i, j), vec in table.items():
            vec = {k: Fraction(v) for k, v in vec.items() if v}
            if i == j:
                if vec:
                    raise ValueError("[e_i, e_i] must vanish")
                continue
            if not vec:
                continue
            if i > j:
                i, j = j, i
                vec = {k: -v for k, v in vec.items()}
            if (i, j) in sc and sc[(i, j)] != vec:
                raise ValueError(f"inconsistent entries for ({i}, {j})")
            sc[(i, j)] = vec
            sc[(j, i)] = {k: -v for k, v in vec.items()}
        self._sc = sc

    # basic arithmetic ---------------------------------------------------

    def zero(self):
        return [ZERO] * self.dim

    def basis_vector(self, i):
        v = self.zero()
        v[i] = Fraction(1)
        return v

    def structure_constant(self, i, j):
        """Sparse dict of [e_i, e_j]."""
        return dict(self._sc.get((i, j), {}))

    def table(self):
        return {k: dict(v) for k, v in self._sc.items() if k[0] < k[1]}

    def _bracket_sparse(self, xs, ys):
        out = {}
        sc = self._sc
        for i, xi in xs.items():
            for j, yj in ys.items():
                d = sc.get((i, j))
                if d is None:
                    continue
                c = xi * yj
                for k, v in d.items():
                    w = out.get(k, 0) + c * v
                    if w:
                        out[k] = w
                    else:
                        out.pop(k, None)
        return out

    def bracket(self, x, y):
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("dimension mismatch")
        out = self.zero()
        for k, v in self._bracket_sparse(_sparse(x), _sparse(y)).items():
            out[k] = v
        return out

    def ad_matrix(self, x):
        """Matrix M with M[k][j] = [x, e_j]_k, so M @ y = [x, y]."""
        if len(x) != self.dim:
            raise ValueError("dimension mismatch")
        xs = _sparse(x)
        M = [[ZERO] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            for k, v in self._bracket_sparse(xs, {j: 1}).items():
                M[k][j] = v
        return M

    @cached_property
    def killing_matrix(self):
        """B_ij = tr(ad e_i ad e_j), computed from adjoint traces."""
        n = self.dim
        sc = self._sc
        K = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                s = ZERO
                for l in range(n):
                    col = sc.get((j, l))
                    if not col:
                        continue
                    for k, v in col.items():
                        w = sc.get((i, k))
                        if w:
                            u = w.get(l)
                            if u:
                                s += v * u
                K[i][j] = K[j][i] = s
        return K

    def killing(self, x, y):
        K = self.killing_matrix
        s = ZERO
        for i, xi in _sparse(x).items():
            row = K[i]
            for j, yj in _sparse(y).items():
                if row[j]:
                    s += xi * row[j] * yj
        return s

    # derived objects ------------------------------------------------------

    def change_basis(self, frame, labels=None, name=None):
        """Same algebra written in the basis given by the rows of ``frame``."""
        from .linalg import inverse
        n = self.dim
        if len(frame) != n:
            raise ValueError("frame must have dim rows")
        inv = inverse(frame)
        table = {}
        for a in range(n):
            for b in range(a + 1, n):
                br = self._bracket_sparse(_sparse(frame[a]), _sparse(frame[b]))
                # coordinates c with c^T frame = br, i.e. c = br^T inv
                c = {}
                for k, v in br.items():
                    for m, w in enumerate(inv[k]):
                        if w:
                            c[m] = c.get(m, 0) + v * w
                table[(a, b)] = {m: w for m, w in c.items() if w}
        return LieAlgebra(n, table, name=name or self.name, labels=labels,
                          scalar_field=self.scalar_field)

    def perturbed(self, i, j, k, delta):
        """Copy with c_ij^k shifted by delta (fault injection)."""
        t = self.table()
        if i > j:
            i, j = j, i
            delta = -delta
        vec = dict(t.get((i, j), {}))
        vec[k] = vec.get(k, 0) + Fraction(delta)
        t[(i, j)] = vec
        return LieAlgebra(self.dim, t, name=self.name + "+fault", labels=self.labels)

    # serialization ----------------------------------------------------------

    def to_json(self):
        c = []
        for (i, j), vec in sorted(self.table().items()):
            c.append([i, j, [[k, v.numerator, v.denominator] for k, v in sorted(vec.items())]])
        K = [[str(x) for x in row] for row in self.killing_matrix]
        return {"name": self.name, "dim": self.dim, "c": c, "killing": K}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj, **extra):
        table = {}
        for i, j, entries in obj["c"]:
            table[(i, j)] = {k: Fraction(num, den) for k, num, den in entries}
        L = cls(obj["dim"], table, name=obj.get("name", ""), **extra)
        if "killing" in obj:
            K = [[Fraction(x) for x in row] for row in obj["killing"]]
            L.__dict__["killing_matrix"] = K
        return L

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim})"


def bracket(L, x, y):
    return L.bracket(x, y)


def killing(L, x, y):
    return L.killing(x, y)


def ad_matrix(L, x):
    return L.ad_matrix(x)


def jacobi_witness(L):
    """First basis triple (i, j, k) violating Jacobi, with its residual; None if exact."""
    n = L.dim
    for i in range(n):
        ei = {i: 1}
        for j in range(i + 1, n):
            ej = {j: 1}
            ij = L._bracket_sparse(ei, ej)
            for k in range(j + 1, n):
                ek = {k: 1}
                jk = L._bracket_sparse(ej, ek)
                ki = L._bracket_sparse(ek, ei)
                res = {}
                for part in (L._bracket_sparse(ei, jk), L._bracket_sparse(ej, ki),
                             L._bracket_sparse(ek, ij)):
                    for m, v in part.items():
                        res[m] = res.get(m, 0) + v
                res = {m: v for m, v in res.items() if v}
                if res:
                    return (i, j, k), res
    return None


def jacobi_audit(L):
    return jacobi_witness(L) is None


def killing_invariance_witness(L):
    """First (i, j, k) with B([e_i, e_j], e_k) != B(e_i, [e_j, e_k])."""
    n = L.dim
    K = L.killing_matrix
    for i in range(n):
        for j in range(n):
            ij = L._sc.get((i, j), {})
            for k in range(n):
                jk = L._sc.get((j, k), {})
                lhs = sum((v * K[m][k] for m, v in ij.items()), ZERO)
                rhs = sum((v * K[i][m] for m, v in jk.items()), ZERO)
                if lhs != rhs:
                    return (i, j, k), lhs, rhs
    return None


def antisymmetry_audit(L):
    for (i, j), vec in L._sc.items():
        if L._sc.get((j, i)) != {k: -v for k, v in vec.items()}:
            return False
    return True


def centralizer(L, a):
    """{x : [x, a] = 0} as an exact Subspace."""
    return kernel(L.ad_matrix(a), L.dim)


def is_subalgebra(L, sub):
    for a, x in enumerate(sub.basis):
        for y in sub.basis[a + 1:]:
            if not sub.contains(L.bracket(list(x), list(y))):
                return False
    return True


def subalgebra_structure(L, sub):
    """Structure constants of a subalgebra in its echelon basis: c[a][b] = coords."""
    m = sub.dim
    c = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            c[a][b] = sub.coords(L.bracket(list(sub.basis[a]), list(sub.basis[b])))
    return c


def intrinsic_killing(c):
    """Killing form of an abstract algebra from its structure constants c[a][b][e]."""
    m = len(c)
    B = [[ZERO] * m for _ in range(m)]
    for a in range(m):
        for b in range(a, m):
            s = ZERO
            for d in range(m):
                for e in range(m):
                    x = c[a][e][d]
                    if x:
                        y = c[b][d][e]
                        if y:
                            s += x * y
            B[a][b] = B[b][a] = s
    return B


def killing_ratio(L, sub):
    """The constant c with B_h = c * B_g restricted to h, for a simple subalgebra h.

    Raises ValueError if the subspace is not a subalgebra, if B_g is degenerate
    on it, if the forms are not proportional or if c falls outside (0, 1].
    """
    if not isinstance(sub, Subspace):
        sub = Subspace.span(sub, L.dim)
    if not is_subalgebra(L, sub):
        raise ValueError("subspace is not a subalgebra")
    m = sub.dim
    Bg = [[L.killing(list(x), list(y)) for y in sub.basis] for x in sub.basis]
    if rank(Bg, m) != m:
        raise ValueError("Killing form of g is degenerate on the subalgebra")
    Bh = intrinsic_killing(subalgebra_structure(L, sub))
    ratio = None
    for a in range(m):
        for b in range(m):
            if Bg[a][b]:
                ratio = Bh[a][b] / Bg[a][b]
                break
        if ratio is not None:
            break
    for a in range(m):
        for b in range(m):
            if Bh[a][b] != ratio * Bg[a][b]:
                raise ValueError("Killing forms are not proportional (subalgebra not simple?)")
    if not 0 < ratio <= 1:
        raise ValueError(f"Killing ratio {ratio} outside (0, 1]")
    return ratio

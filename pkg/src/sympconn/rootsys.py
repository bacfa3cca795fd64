"""Finite reduced root systems in simple-root coordinates.

The invariant form is given by an integral Gram matrix on the simple roots with
short roots of squared length 2 (long roots then have squared length 4 or 6),
so every pairing ``<lam, alpha> = 2 B(lam, alpha) / B(alpha, alpha)`` is an
integer for lam in the root lattice.

Roots are ordered as follows: positive roots sorted by (height, coordinates),
followed by their negatives in the same order, so ``roots[k + N] == -roots[k]``
where N is the number of positive roots.
"""

import json
from dataclasses import dataclass
from functools import cached_property

KINDS = ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2")
_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}


def _gram(kind, n):
    """Integral symmetric form on the simple roots (Bourbaki numbering)."""
    G = [[0] * n for _ in range(n)]

    def link(i, j, v):
        G[i][j] = G[j][i] = v

    if kind == "A":
        for i in range(n):
            G[i][i] = 2
        for i in range(n - 1):
            link(i, i + 1, -1)
    elif kind == "B":
        for i in range(n - 1):
            G[i][i] = 4
            link(i, i + 1, -2)
        G[n - 1][n - 1] = 2
    elif kind == "C":
        for i in range(n - 1):
            G[i][i] = 2
        for i in range(n - 2):
            link(i, i + 1, -1)
        G[n - 1][n - 1] = 4
        link(n - 2, n - 1, -2)
    elif kind == "D":
        for i in range(n):
            G[i][i] = 2
        for i in range(n - 2):
            link(i, i + 1, -1)
        link(n - 3, n - 1, -1)
    elif kind in ("E6", "E7", "E8"):
        for i in range(n):
            G[i][i] = 2
        link(0, 2, -1)
        link(1, 3, -1)
        for i in range(2, n - 1):
            link(i, i + 1, -1)
    elif kind == "F4":
        G[0][0] = G[1][1] = 4
        G[2][2] = G[3][3] = 2
        link(0, 1, -2)
        link(1, 2, -2)
        link(2, 3, -1)
    elif kind == "G2":
        G[0][0] = 2
        G[1][1] = 6
        link(0, 1, -3)
    return G


def _check_type(kind, rank):
    if kind not in KINDS:
        raise ValueError(f"unknown root system type {kind!r}")
    if kind in _FIXED_RANK:
        if rank != _FIXED_RANK[kind]:
            raise ValueError(f"{kind} has rank {_FIXED_RANK[kind]}, got {rank}")
        return
    lo = {"A": 1, "B": 2, "C": 2, "D": 4}[kind]
    if not isinstance(rank, int) or rank < lo:
        raise ValueError(f"type {kind} needs rank >= {lo}, got {rank}")


def normalize_kind(kind, rank=None):
    """Accept "E", 6 or "E6" style input; return (kind, rank)."""
    kind = kind.upper()
    if kind == "E" and rank is not None:
        kind = f"E{rank}"
    if kind in _FIXED_RANK and rank is None:
        rank = _FIXED_RANK[kind]
    if len(kind) > 1 and kind[0] in "ABCD" and kind[1:].isdigit():
        kind, rank = kind[0], int(kind[1:])
    return kind, rank


@dataclass(frozen=True)
class RootSystem:
    kind: str
    rank: int
    roots: tuple
    cartan_matrix: tuple
    long_flags: tuple
    gram: tuple

    def form(self, x, y):
        G = self.gram
        return sum(x[i] * G[i][j] * y[j] for i in range(self.rank) for j in range(self.rank))

    def norm(self, x):
        return self.form(x, x)

    @cached_property
    def index(self):
        return {r: k for k, r in enumerate(self.roots)}

    @property
    def n_positive(self):
        return len(self.roots) // 2

    @property
    def positive_roots(self):
        return self.roots[: self.n_positive]

    @property
    def simple_roots(self):
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    def is_root(self, beta):
        return tuple(beta) in self.index

    def is_long(self, beta):
        return self.long_flags[self.index[tuple(beta)]]

    @cached_property
    def long_norm(self):
        return max(self.norm(r) for r in self.roots)

    @cached_property
    def highest_root(self):
        return max(self.positive_roots, key=lambda r: (sum(r), r))

    def reflect(self, beta, i):
        """Simple reflection s_i applied to a lattice vector."""
        a = self.simple_roots[i]
        k = pairing(self, beta, a)
        return tuple(b - k * ai for b, ai in zip(beta, a))

    def to_json(self):
        return {
            "kind": self.kind,
            "rank": self.rank,
            "roots": [list(r) for r in self.roots],
            "cartan": [list(r) for r in self.cartan_matrix],
            "long": list(self.long_flags),
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def build_root_system(kind, rank=None):
    kind, rank = normalize_kind(kind, rank)
    _check_type(kind, rank)
    G = _gram(kind, rank)
    cartan = tuple(tuple(2 * G[i][j] // G[j][j] for j in range(rank)) for i in range(rank))

    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(rank):
                # s_i(beta) = beta - <beta, alpha_i> alpha_i
                k = sum(beta[a] * G[a][i] for a in range(rank)) * 2 // G[i][i]
                gamma = tuple(b - (k if a == i else 0) for a, b in enumerate(beta))
                if gamma not in seen:
                    seen.add(gamma)
                    nxt.append(gamma)
        frontier = nxt

    pos = sorted((r for r in seen if sum(r) > 0), key=lambda r: (sum(r), r))
    if len(pos) * 2 != len(seen):
        raise AssertionError("reflection closure produced an unbalanced root set")
    roots = tuple(pos) + tuple(tuple(-x for x in r) for r in pos)

    def nrm(x):
        return sum(x[i] * G[i][j] * x[j] for i in range(rank) for j in range(rank))

    top = max(nrm(r) for r in roots)
    long_flags = tuple(nrm(r) == top for r in roots)
    return RootSystem(kind, rank, roots, cartan, long_flags, tuple(tuple(r) for r in G))


def pairing(rs, lam, alpha):
    """<lam, alpha> = 2 B(lam, alpha) / B(alpha, alpha) for a root alpha."""
    alpha = tuple(alpha)
    if alpha not in rs.index:
        raise ValueError(f"{alpha} is not a root of {rs.kind}{rs.rank}")
    num = 2 * rs.form(lam, alpha)
    den = rs.norm(alpha)
    if num % den:
        raise ValueError(f"{lam} is not integral against {alpha}")
    return num // den


def grading_labels(rs, alpha0=None):
    """Map each root beta to <beta, alpha0> in {-2, ..., 2}."""
    if alpha0 is None:
        alpha0 = rs.highest_root
    alpha0 = tuple(alpha0)
    if alpha0 not in rs.index:
        raise ValueError(f"{alpha0} is not a root")
    if not rs.is_long(alpha0):
        raise ValueError(f"{alpha0} is a short root; gradings need a long root")
    labels = {r: pairing(rs, r, alpha0) for r in rs.roots}
    neg = tuple(-x for x in alpha0)
    for r, k in labels.items():
        if abs(k) > 2 or (abs(k) == 2 and r not in (alpha0, neg)):
            raise AssertionError(f"unexpected label {k} for {r}")
    return labels

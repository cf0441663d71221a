"""Small F_p linear algebra and submodule spinning.

Vectors are lists of ints in ``[0, p)``; a module is given by the matrices of
a group's generators acting on row vectors from the right (``v -> v @ A``).
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator, Sequence

Vector = list[int]
Matrix = list[list[int]]


class Subspace:
    """Subspace of F_p^dim kept in reduced row echelon form."""

    def __init__(self, p: int, dim: int, vectors: Iterable[Sequence[int]] = ()):
        self.p = p
        self.dim = dim
        self.rows: list[Vector] = []
        self.pivots: list[int] = []
        for v in vectors:
            self.add(v)

    def copy(self) -> "Subspace":
        s = Subspace(self.p, self.dim)
        s.rows = [list(r) for r in self.rows]
        s.pivots = list(self.pivots)
        return s

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> Vector:
        p = self.p
        w = [x % p for x in v]
        for row, c in zip(self.rows, self.pivots):
            a = w[c]
            if a:
                w = [(x - a * y) % p for x, y in zip(w, row)]
        return w

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Sequence[int]) -> bool:
        p = self.p
        w = self.reduce(v)
        c = next((i for i, x in enumerate(w) if x), None)
        if c is None:
            return False
        a = pow(w[c], p - 2, p)
        w = [(x * a) % p for x in w]
        for k, row in enumerate(self.rows):
            b = row[c]
            if b:
                self.rows[k] = [(x - b * y) % p for x, y in zip(row, w)]
        at = 0
        while at < len(self.pivots) and self.pivots[at] < c:
            at += 1
        self.rows.insert(at, w)
        self.pivots.insert(at, c)
        return True

    def complement_basis(self, inner: "Subspace") -> list[Vector]:
        """Rows of ``self`` extending a basis of ``inner`` (assumed inside)."""
        acc = inner.copy()
        out = []
        for r in self.rows:
            if acc.add(r):
                out.append(r)
        return out


def vec_mat(v: Sequence[int], a: Matrix, p: int) -> Vector:
    out = [0] * len(a[0]) if a else []
    for x, row in zip(v, a):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return [x % p for x in out]


def spin(base: Subspace, v: Sequence[int], mats: Sequence[Matrix]) -> Subspace:
    """Smallest submodule containing ``base`` (itself a submodule) and ``v``."""
    p = base.p
    s = base.copy()
    queue = []
    if s.add(v):
        queue.append(list(v))
    while queue:
        w = queue.pop()
        for a in mats:
            u = vec_mat(w, a, p)
            if s.add(u):
                queue.append(u)
    return s


def projective_points(basis: Sequence[Vector], p: int) -> Iterator[Vector]:
    """One vector from each 1-dimensional subspace of span(basis)."""
    m = len(basis)
    dim = len(basis[0]) if basis else 0
    for lead in range(m):
        for tail in itertools.product(range(p), repeat=m - lead - 1):
            coeffs = [0] * lead + [1] + list(tail)
            v = [0] * dim
            for c, b in zip(coeffs, basis):
                if c:
                    v = [(x + c * y) % p for x, y in zip(v, b)]
            yield v


class IrreducibilityUnknown(RuntimeError):
    pass


def minimal_submodule_over(
    mats: Sequence[Matrix],
    lower: Subspace,
    upper: Subspace,
    max_points: int = 1 << 16,
    rng: random.Random | None = None,
) -> Subspace:
    """A submodule S with lower < S <= upper and S/lower irreducible.

    Descends by spinning single vectors.  Irreducibility of the final quotient
    is certified by spinning one vector from every line of S/lower, which is
    only attempted when there are at most ``max_points`` lines.
    """
    p = lower.p
    rng = rng or random.Random(0)
    cur = upper
    while True:
        comp = cur.complement_basis(lower)
        m = len(comp)
        if m <= 1:
            return cur
        smaller = None
        for v in comp:
            s = spin(lower, v, mats)
            if s.rank < cur.rank:
                smaller = s
                break
        if smaller is None:
            npoints = (p**m - 1) // (p - 1)
            if npoints > max_points:
                for _ in range(64):
                    coeffs = [rng.randrange(p) for _ in comp]
                    v = [0] * lower.dim
                    for c, b in zip(coeffs, comp):
                        v = [(x + c * y) % p for x, y in zip(v, b)]
                    s = spin(lower, v, mats)
                    if lower.rank < s.rank < cur.rank:
                        smaller = s
                        break
                if smaller is None:
                    raise IrreducibilityUnknown(
                        f"cannot certify a {m}-dimensional layer over F_{p}"
                    )
            else:
                for v in projective_points(comp, p):
                    s = spin(lower, v, mats)
                    if s.rank < cur.rank:
                        smaller = s
                        break
        if smaller is None:
            return cur
        cur = smaller


def composition_chain(mats: Sequence[Matrix], p: int, dim: int) -> list[Subspace]:
    """Submodules 0 = M_0 < M_1 < ... < M_r = F_p^dim with irreducible steps."""
    full = Subspace(p, dim, [[int(i == j) for j in range(dim)] for i in range(dim)])
    chain = [Subspace(p, dim)]
    while chain[-1].rank < dim:
        chain.append(minimal_submodule_over(mats, chain[-1], full))
    return chain

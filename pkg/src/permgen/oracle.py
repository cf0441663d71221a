"""Brute-force ground truth for small groups.

Everything here works on explicit element sets obtained by closing the
generators under multiplication; no stabilizer chain is consulted, so these
functions can check the chain-based code independently.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .bsgs import Group
from .perm import inv, mul

__all__ = [
    "CapExceeded",
    "NotFoundWithin",
    "enumerate_elements",
    "oracle_order",
    "oracle_min_gen",
    "verify_chief_series",
    "generating_pair_density",
]

ORACLE_MAX_ORDER = 5000


class CapExceeded(RuntimeError):
    pass


class NotFoundWithin(RuntimeError):
    def __init__(self, max_size: int):
        self.max_size = max_size
        super().__init__(f"no generating set of size <= {max_size}")


def _close(gens: Sequence[tuple], identity: tuple, cap: int) -> set[tuple]:
    seen = {identity}
    frontier = [identity]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"more than {cap} elements")
        frontier = nxt
    return seen


def enumerate_elements(G: Group, cap: int = ORACLE_MAX_ORDER) -> list[tuple]:
    """All elements of G, sorted by image tuple."""
    return sorted(_close(G.generators, G.identity, cap))


def oracle_order(G: Group, cap: int = ORACLE_MAX_ORDER) -> int:
    return len(_close(G.generators, G.identity, cap))


class _Table:
    """Elements indexed 0..|G|-1 with lazily filled right multiplication."""

    def __init__(self, elems: list[tuple]):
        self.elems = elems
        self.index = {x: i for i, x in enumerate(elems)}
        self.right: dict[int, list[int]] = {}

    def by(self, g: int) -> list[int]:
        r = self.right.get(g)
        if r is None:
            e, idx = self.elems, self.index
            h = e[g]
            r = [idx[mul(x, h)] for x in e]
            self.right[g] = r
        return r

    def closure(self, start_mask: int, start_elems: list[int], gens: Sequence[int]):
        """Subgroup generated by a subgroup (mask + element list) and gens."""
        mask = start_mask
        members = list(start_elems)
        tables = [self.by(g) for g in gens]
        k = 0
        while k < len(members):
            x = members[k]
            k += 1
            for t in tables:
                y = t[x]
                if not mask >> y & 1:
                    mask |= 1 << y
                    members.append(y)
        return mask, members


def oracle_min_gen(G: Group, max_size: int | None = None,
                   cap: int = ORACLE_MAX_ORDER) -> int:
    """Least m such that some m elements generate G, by subgroup sweep."""
    elems = enumerate_elements(G, cap)
    order = len(elems)
    if order == 1:
        return 0
    if max_size is None:
        max_size = order.bit_length()
    T = _Table(elems)
    ident = T.index[G.identity]
    one_mask = 1 << ident
    gen_idx = [T.index[g] for g in G.generators]
    invs = {i: T.index[inv(x)] for i, x in enumerate(elems)}

    def conj_mask(members: list[int], g: int) -> int:
        gi = elems[invs[g]]
        h = elems[g]
        m = 0
        for x in members:
            m |= 1 << T.index[mul(mul(gi, elems[x]), h)]
        return m

    # level 1: one cyclic subgroup per conjugacy class
    level: dict[int, tuple[list[int], list[int]]] = {}
    covered: set[int] = set()
    for x in range(order):
        if x == ident:
            continue
        mask, members = T.closure(one_mask, [ident], [x])
        if mask in covered:
            continue
        stack = [(mask, members)]
        covered.add(mask)
        while stack:
            m, mem = stack.pop()
            for g in gen_idx:
                c = conj_mask(mem, g)
                if c not in covered:
                    covered.add(c)
                    stack.append((c, [i for i in range(order) if c >> i & 1]))
        level[mask] = (members, [x])
        if len(members) == order:
            return 1
    size = 1
    while size < max_size:
        size += 1
        nxt: dict[int, tuple[list[int], list[int]]] = {}
        for mask, (members, gens) in level.items():
            done = mask
            for y in range(order):
                if done >> y & 1:
                    continue
                new_mask, new_members = T.closure(mask, members, gens + [y])
                if len(new_members) == order:
                    return size
                nxt.setdefault(new_mask, (new_members, gens + [y]))
                # one y per double coset H y H
                left = [T.index[mul(elems[h], elems[y])] for h in members]
                for a in left:
                    for h in members:
                        done |= 1 << T.by(h)[a]
        level = nxt
    raise NotFoundWithin(max_size)


def verify_chief_series(G: Group, series, cap: int = 20000) -> bool:
    """Check normality and element-wise minimality of every factor.

    ``series`` is a ChiefSeries or an ascending list of groups from 1 to G.
    """
    subs = getattr(series, "subgroups", series)
    ident = G.identity
    gset = _close(G.generators, ident, cap)
    sets = [_close(H.generators, ident, cap) for H in subs]
    if len(sets[0]) != 1 or sets[-1] != gset:
        return False
    ginv = [(g, inv(g)) for g in G.generators]

    def conj_class(x):
        cls = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for g, gi in ginv:
                z = mul(mul(gi, y), g)
                if z not in cls:
                    cls.add(z)
                    stack.append(z)
        return cls

    for k in range(1, len(sets)):
        lower, upper = sets[k - 1], sets[k]
        if not lower < upper:
            return False
        for g, gi in ginv:
            if any(mul(mul(gi, x), g) not in upper for x in subs[k].generators):
                return False
        lower_gens = list(subs[k - 1].generators)
        covered: set[tuple] = set()
        for x in sorted(upper - lower):
            if x in covered:
                continue
            cls = conj_class(x)
            closure = _close(lower_gens + sorted(cls), ident, cap)
            if len(closure) != len(upper):
                return False
            for c in cls:
                for m in lower:
                    covered.add(mul(m, c))
    return True


def generating_pair_density(G: Group, cap: int = 400) -> Fraction:
    """Fraction of ordered pairs (a, b) of elements with <a, b> = G."""
    elems = enumerate_elements(G, cap)
    order = len(elems)
    T = _Table(elems)
    ident = T.index[G.identity]
    one_mask = 1 << ident
    gen_idx = [T.index[g] for g in G.generators]
    invs = [T.index[inv(x)] for x in elems]
    seen = [False] * order
    good = 0
    for a in range(order):
        if seen[a]:
            continue
        cls = {a}
        stack = [a]
        while stack:
            y = stack.pop()
            for g in gen_idx:
                z = T.index[mul(mul(elems[invs[g]], elems[y]), elems[g])]
                if z not in cls:
                    cls.add(z)
                    stack.append(z)
        for c in cls:
            seen[c] = True
        count = 0
        for b in range(order):
            _, members = T.closure(one_mask, [ident], [a, b])
            if len(members) == order:
                count += 1
        good += count * len(cls)
    return Fraction(good, order * order)

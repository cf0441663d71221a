"""Normal structure: closures, derived and kernel series, chief series.

Quotients are never built.  A statement about ``X mod M`` is decided by
adjoining the generators of ``M`` and comparing exact orders; elements of a
factor ``N/M`` are handled through canonical coset representatives computed
from the stabilizer chain of ``M``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from operator import itemgetter
from typing import Iterable, Iterator, Sequence

from . import fp
from .bsgs import Group, StabilizerChain
from .perm import comm, inv, mul, power

__all__ = [
    "SeedNotInGroup",
    "RefinementFailed",
    "LayerNotElementaryAbelian",
    "LayerNotNormal",
    "ChiefFactorInfo",
    "ChiefSeries",
    "ABELIAN_HIGH",
    "AS_FOUND",
    "trivial_group",
    "subgroup",
    "is_normal",
    "normal_closure",
    "derived_subgroup",
    "derived_series",
    "orbits",
    "minimal_block_system",
    "kernel_series",
    "refine_abelian_layer",
    "chief_series",
    "delta_prime",
    "t_prime",
    "canonical_coset_rep",
    "coset_representatives",
    "prime_power",
    "factorize",
]

ABELIAN_HIGH = "abelian_high"
AS_FOUND = "as_found"

# layers up to this index are certified minimal by checking one element from
# every G-class of the layer
EXHAUSTIVE_LAYER_LIMIT = 10**5


class SeedNotInGroup(ValueError):
    pass


class RefinementFailed(RuntimeError):
    pass


class LayerNotElementaryAbelian(ValueError):
    pass


class LayerNotNormal(ValueError):
    pass


# ---------------------------------------------------------------------------
# arithmetic helpers


def factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def prime_power(m: int) -> tuple[int, int] | None:
    """``(p, l)`` with ``m = p**l`` or ``None``."""
    if m < 2:
        return None
    f = factorize(m)
    if len(f) != 1:
        return None
    return next(iter(f.items()))


# ---------------------------------------------------------------------------
# subgroup plumbing


def trivial_group(degree: int) -> Group:
    c = StabilizerChain(degree)
    c._mark_complete()
    return Group.from_chain(c, [])


def subgroup(
    degree: int,
    gens: Iterable[Sequence[int]],
    base: Group | None = None,
    order: int | None = None,
) -> Group:
    """``<base, gens>`` with a certified chain.

    ``order``, when given, must be the exact order of the result; it lets the
    chain be certified as soon as it is reached.
    """
    chain = base.chain.copy() if base is not None else StabilizerChain(degree)
    out = list(base.generators) if base is not None else []
    for g in gens:
        g = tuple(g)
        if chain.add_generator(g):
            out.append(g)
    if not chain.certified:
        chain.close(target=order)
    if order is not None and chain.order != order:
        raise AssertionError(f"expected order {order}, got {chain.order}")
    return Group.from_chain(chain, out)


def is_normal(G: Group, H: Group) -> bool:
    for g in G.generators:
        gi = inv(g)
        for h in H.generators:
            if not H.chain.sifts(mul(mul(gi, h), g)):
                return False
    return True


def normal_closure(
    G: Group,
    seeds: Iterable[Sequence[int]],
    base: Group | None = None,
    within: Group | None = None,
    check_seeds: bool = True,
) -> Group:
    """Smallest normal subgroup of ``G`` containing ``seeds`` (and ``base``).

    ``base`` must already be normal in ``G``.  If ``within`` is a normal
    subgroup known to contain the closure, the computation stops as soon as
    it is reached and ``within`` itself is returned.
    """
    n = G.degree
    target = within.order if within is not None else None
    H = base.chain.copy() if base is not None else StabilizerChain(n)
    if base is None:
        H._mark_complete()
    gens = list(base.generators) if base is not None else []
    pending = []
    for s in seeds:
        s = tuple(s)
        if check_seeds and not G.chain.sifts(s):
            raise SeedNotInGroup("seed is not an element of the group")
        if H.add_generator(s):
            gens.append(s)
            pending.append(s)
            if target is not None and H.order == target:
                return within
    if not H.certified:
        H.close(target=target)
    if target is not None and H.order == target:
        return within
    ginv = [(g, inv(g)) for g in G.generators]
    while pending:
        fresh = []
        for h in pending:
            for g, gi in ginv:
                c = mul(mul(gi, h), g)
                if H.add_generator(c):
                    gens.append(c)
                    fresh.append(c)
                    if target is not None and H.order == target:
                        return within
        if fresh:
            H.close(target=target)
            if target is not None and H.order == target:
                return within
        pending = fresh
    return Group.from_chain(H, gens)


def _commutators(gens: Sequence[tuple]) -> Iterator[tuple]:
    for i, a in enumerate(gens):
        for b in gens[i + 1 :]:
            yield comm(a, b)


def derived_subgroup(G: Group) -> Group:
    return normal_closure(G, _commutators(G.generators), within=G, check_seeds=False)


def derived_series(G: Group) -> list[Group]:
    """``[G, G', G'', ...]`` ending at the solvable residual."""
    out = [G]
    while out[-1].order > 1:
        D = normal_closure(G, _commutators(out[-1].generators), within=out[-1],
                           check_seeds=False)
        if D.order == out[-1].order:
            break
        out.append(D)
    return out


# ---------------------------------------------------------------------------
# orbits, blocks, kernels


def orbits(gens: Sequence[Sequence[int]], degree: int) -> list[list[int]]:
    seen = [False] * degree
    out = []
    for a in range(degree):
        if seen[a]:
            continue
        orb = [a]
        seen[a] = True
        k = 0
        while k < len(orb):
            x = orb[k]
            k += 1
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        out.append(sorted(orb))
    return out


def _block_containing(gens, points, a, b) -> list[list[int]]:
    parent = {x: x for x in points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parent[find(b)] = find(a)
    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        for g in gens:
            u, v = find(g[x]), find(g[y])
            if u != v:
                parent[v] = u
                queue.append((g[x], g[y]))
    classes: dict[int, list[int]] = {}
    for x in points:
        classes.setdefault(find(x), []).append(x)
    return sorted(classes.values())


def minimal_block_system(gens, orbit: Sequence[int]) -> list[list[int]] | None:
    """Nontrivial block system with the smallest blocks, or None if primitive."""
    m = len(orbit)
    if m < 4 or prime_power(m) == (m, 1):
        return None
    smallest = min(factorize(m))
    a = orbit[0]
    best = None
    for b in orbit[1:]:
        blocks = _block_containing(gens, orbit, a, b)
        size = len(blocks[0])
        if size < m and (best is None or size < len(best[0])):
            best = blocks
            if size == smallest:
                break
    return best


def kernel_series(G: Group, X: Group | None = None) -> list[Group]:
    """Descending series of normal subgroups from kernels of actions.

    The actions used are those of ``G`` on each orbit and on a minimal block
    system of each imprimitive constituent.  Returned subgroups are the
    intersections of ``X`` (default ``G``, must be normal in ``G``) with
    successively more of these kernels, starting at ``X`` and ending at 1.
    """
    X = G if X is None else X
    n = G.degree
    if X.order == 1:
        return [X]
    segments: list[list[int]] = []
    block_maps: list[tuple[dict[int, int], list[list[int]], int]] = []
    ext = n
    for orb in orbits(G.generators, n):
        if len(orb) == 1:
            continue
        sigma = minimal_block_system(G.generators, orb)
        if sigma is not None:
            where = {x: i for i, blk in enumerate(sigma) for x in blk}
            block_maps.append((where, sigma, ext))
            segments.append(list(range(ext, ext + len(sigma))))
            ext += len(sigma)
        segments.append(orb)

    def extend(g):
        out = list(g)
        for where, sigma, off in block_maps:
            out.extend(off + where[g[blk[0]]] for blk in sigma)
        return tuple(out)

    prefix = [x for seg in segments for x in seg]
    egens = [extend(g) for g in X.generators]
    ch = StabilizerChain(ext, prefix)
    for g in egens:
        ch.add_generator(g)
    ch.random_schreier_sims(random.Random(0), target=X.order)
    if not ch.certified:
        ch.schreier_sims(target=X.order)
    out = [X]
    pos = 0
    for seg in segments:
        pos += len(seg)
        sub = ch.subchain(pos)
        if sub.order == out[-1].order:
            continue
        gens = [g[:n] for g in sub.gens]
        out.append(subgroup(n, gens, order=sub.order))
    if out[-1].order != 1:
        out.append(trivial_group(n))
    return out


# ---------------------------------------------------------------------------
# cosets of a normal subgroup


def canonical_coset_rep(chain: StabilizerChain, x: tuple) -> tuple:
    """The element of ``M x`` with lexicographically least base images."""
    h = x
    for lev in chain.levels:
        orb = lev.orbit
        if len(orb) == 1:
            continue
        vals = itemgetter(*orb)(h)
        best = orb[vals.index(min(vals))]
        if best != lev.point:
            h = mul(lev.rep[best], h)
    return h


def coset_representatives(N: Group, M: Group, limit: int | None = None) -> list[tuple]:
    """Canonical representatives of the cosets of ``M`` in ``N``.

    The first entry represents ``M`` itself.
    """
    mc = M.chain
    first = canonical_coset_rep(mc, N.identity)
    reps = [first]
    seen = {first}
    k = 0
    gens = [s for s in N.generators if not mc.sifts(s)]
    while k < len(reps):
        r = reps[k]
        k += 1
        for s in gens:
            y = canonical_coset_rep(mc, mul(r, s))
            if y not in seen:
                seen.add(y)
                reps.append(y)
                if limit is not None and len(reps) > limit:
                    raise RefinementFailed("too many coset representatives")
    return reps


def _acting_generators(G: Group, N: Group, M: Group) -> list[tuple]:
    """Generators of G inducing a nontrivial automorphism of N/M."""
    mc = M.chain
    ngens = [s for s in N.generators if not mc.sifts(s)]
    return [g for g in G.generators if any(not mc.sifts(comm(s, g)) for s in ngens)]


def _classes_of_reps(gens: Sequence[tuple], M: Group, reps: list[tuple]) -> list[list[int]]:
    """Partition rep indices into classes under conjugation by ``gens`` modulo M."""
    index = {r: i for i, r in enumerate(reps)}
    parent = list(range(len(reps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    mc = M.chain
    ginv = [(g, inv(g)) for g in gens]
    for i, r in enumerate(reps):
        for g, gi in ginv:
            j = index[canonical_coset_rep(mc, mul(mul(gi, r), g))]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    classes: dict[int, list[int]] = {}
    for i in range(len(reps)):
        classes.setdefault(find(i), []).append(i)
    return sorted(classes.values())


# ---------------------------------------------------------------------------
# abelian layers


def refine_abelian_layer(G: Group, upper: Group, lower: Group) -> list[Group]:
    """Split an elementary abelian layer ``upper/lower`` into chief factors.

    Returns ``[M_1, ..., M_r]`` with ``M_r = upper`` (``lower`` itself is
    omitted); each ``M_i/M_{i-1}`` is an irreducible F_p G-module.
    """
    q = upper.order // lower.order
    pl = prime_power(q)
    if pl is None or upper.order % lower.order:
        raise LayerNotElementaryAbelian(f"layer of order {q} is not a p-group layer")
    p, l = pl
    lc = lower.chain
    for a in upper.generators:
        if not lc.sifts(power(a, p)):
            raise LayerNotElementaryAbelian("p-th power outside lower subgroup")
    for c in _commutators(upper.generators):
        if not lc.sifts(c):
            raise LayerNotElementaryAbelian("layer is not abelian")
    if not (is_normal(G, lower) and is_normal(G, upper)):
        raise LayerNotNormal("layer bounds must be normal")
    if l == 1:
        return [upper]

    basis: list[tuple] = []
    chains = [lower.chain]
    cur = lower
    for y in upper.generators:
        if len(basis) == l:
            break
        if not cur.chain.sifts(y):
            cur = subgroup(G.degree, [y], base=cur, order=cur.order * p)
            basis.append(y)
            chains.append(cur.chain)
    neg_powers = [[power(e, -c) for c in range(p)] for e in basis]

    def coords(x):
        v = [0] * l
        for t in range(l - 1, -1, -1):
            below = chains[t]
            for c in range(p):
                y = mul(x, neg_powers[t][c])
                if below.sifts(y):
                    v[t] = c
                    x = y
                    break
            else:
                raise AssertionError("element outside the layer")
        return v

    mats = []
    for g in G.generators:
        gi = inv(g)
        mats.append([coords(mul(mul(gi, e), g)) for e in basis])
    try:
        subs = fp.composition_chain(mats, p, l)
    except fp.IrreducibilityUnknown as exc:
        raise RefinementFailed(str(exc)) from exc

    out = []
    for s in subs[1:-1]:
        elems = []
        for row in s.rows:
            x = G.identity
            for e, c in zip(basis, row):
                if c:
                    x = mul(x, power(e, c))
            elems.append(x)
        out.append(subgroup(G.degree, elems, base=lower, order=lower.order * p**s.rank))
    out.append(upper)
    return out


# ---------------------------------------------------------------------------
# chief series


@dataclass
class ChiefFactorInfo:
    order: int
    abelian: bool
    p: int | None
    l: int | None
    delta_prime: int
    t_prime: int

    def as_dict(self) -> dict:
        return {
            "order": str(self.order),
            "abelian": self.abelian,
            "p": self.p,
            "l": self.l,
            "delta_prime": self.delta_prime,
            "t_prime": self.t_prime,
        }


@dataclass
class ChiefSeries:
    """``subgroups[0] = 1 < ... < subgroups[u] = G`` with factor data.

    ``factors[k-1]`` describes ``subgroups[k] / subgroups[k-1]``.
    """

    group: Group
    subgroups: list[Group]
    factors: list[ChiefFactorInfo] = field(default_factory=list)
    ordering: str = ABELIAN_HIGH

    @property
    def u(self) -> int:
        return len(self.subgroups) - 1

    def factor(self, k: int) -> ChiefFactorInfo:
        if not 1 <= k <= self.u:
            raise IndexError(f"factor index {k} outside 1..{self.u}")
        return self.factors[k - 1]

    def factor_orders(self) -> list[int]:
        return [f.order for f in self.factors]

    def as_dict(self) -> dict:
        return {
            "ordering": self.ordering,
            "u": self.u,
            "factors": [f.as_dict() for f in self.factors],
        }


def t_prime(factor_order: int, dprime: int) -> int:
    """``ceil(8/5 + log_N(delta'))`` decided in exact integer arithmetic.

    ``m >= 8/5 + log_N d``  iff  ``N**(5m - 8) >= d**5``.
    """
    if factor_order < 2 or dprime < 1:
        raise ValueError("need factor order >= 2 and delta' >= 1")
    m = 2
    d5 = dprime**5
    while factor_order ** (5 * m - 8) < d5:
        m += 1
    return m


def delta_prime(series: ChiefSeries, k: int) -> int:
    """Number of chief factors among ``k..u`` with the order of factor ``k``."""
    if not 1 <= k <= series.u:
        raise IndexError(f"factor index {k} outside 1..{series.u}")
    orders = [
        series.subgroups[j].order // series.subgroups[j - 1].order
        for j in range(1, series.u + 1)
    ]
    want = orders[k - 1]
    return sum(1 for o in orders[k - 1 :] if o == want)


class _Refiner:
    def __init__(self, G: Group, rng: random.Random):
        self.G = G
        self.rng = rng

    def layer(self, U: Group, L: Group) -> list[Group]:
        """Chief factors between normal subgroups ``L < U``, bottom up."""
        if U.order == L.order:
            return []
        D = normal_closure(self.G, _commutators(U.generators), base=L, within=U,
                           check_seeds=False)
        if D.order < U.order:
            return self.layer(D, L) + self.abelian(U, D)
        M = self.minimal_normal(U, L)
        if M.order == U.order:
            return [U]
        return [M] + self.layer(U, M)

    def abelian(self, U: Group, L: Group) -> list[Group]:
        q = U.order // L.order
        if q == 1:
            return []
        p = min(factorize(q))
        Y = subgroup(self.G.degree, [power(a, p) for a in U.generators], base=L)
        if Y.order == L.order:
            return refine_abelian_layer(self.G, U, L)
        if Y.order == U.order:
            raise AssertionError("p-th powers generate an abelian layer of order divisible by p")
        return self.abelian(Y, L) + refine_abelian_layer(self.G, U, Y)

    def minimal_normal(self, U: Group, L: Group) -> Group:
        """A minimal normal subgroup of G/L inside U/L, by closure descent."""
        G = self.G
        M = U
        while True:
            idx = M.order // L.order
            smaller = None
            if idx <= EXHAUSTIVE_LAYER_LIMIT:
                reps = coset_representatives(M, L)
                classes = _classes_of_reps(_acting_generators(G, M, L), L, reps)
                for cls in classes:
                    if 0 in cls:
                        continue
                    C = normal_closure(G, [reps[cls[0]]], base=L, within=M,
                                       check_seeds=False)
                    if C.order < M.order:
                        smaller = C
                        break
                if smaller is None:
                    return M
            else:
                budget = math.ceil(64 * math.log2(idx))
                for _ in range(budget):
                    x = M.random_element(self.rng)
                    if L.chain.sifts(x):
                        continue
                    C = normal_closure(G, [x], base=L, within=M, check_seeds=False)
                    if C.order < M.order:
                        smaller = C
                        break
                if smaller is None:
                    raise RefinementFailed(
                        f"cannot certify a non-abelian layer of index {idx} as minimal"
                    )
            M = smaller


def chief_series(
    G: Group, ordering: str = ABELIAN_HIGH, rng: random.Random | None = None
) -> ChiefSeries:
    """Chief series of ``G``.

    ``abelian_high`` refines the perfect residual first (seeded by kernels of
    orbit and block actions), so non-abelian factors sit at the bottom and the
    soluble top is layered above; ``as_found`` refines the kernel series of
    ``G`` directly.
    """
    if ordering not in (ABELIAN_HIGH, AS_FOUND):
        raise ValueError(f"unknown ordering {ordering!r}")
    rng = rng or random.Random(0)
    one = trivial_group(G.degree)
    if G.order == 1:
        return ChiefSeries(G, [G], [], ordering)
    ref = _Refiner(G, rng)
    subs = [one]
    if ordering == ABELIAN_HIGH:
        ds = derived_series(G)
        seeds = list(reversed(kernel_series(G, ds[-1])))[1:]
        seeds += list(reversed(ds[:-1]))
    else:
        seeds = list(reversed(kernel_series(G)))[1:]
    for U in seeds:
        subs += ref.layer(U, subs[-1])
    subs[-1] = G
    series = ChiefSeries(G, subs, [], ordering)
    for k in range(1, series.u + 1):
        order = subs[k].order // subs[k - 1].order
        pl = prime_power(order)
        dp = delta_prime(series, k)
        series.factors.append(
            ChiefFactorInfo(
                order=order,
                abelian=pl is not None,
                p=pl[0] if pl else None,
                l=pl[1] if pl else None,
                delta_prime=dp,
                t_prime=t_prime(order, dp),
            )
        )
    return series

"""Stabilizer chains, Schreier-Sims, and generating tests.

Two ways of building a chain are provided:

* ``SS``  -- deterministic Schreier-Sims; the chain is complete (certified).
* ``RSS`` -- Monte Carlo Schreier-Sims driven by random group elements.  The
  chain is always a chain of a subgroup of the true group, so the order it
  reports never exceeds the true order; it may fall short with probability
  bounded by the error parameter.

Whenever the true order is known in advance (the common case when a subgroup
of an already-analysed group is rebuilt with a different base) a randomly
grown chain that reaches that order is complete, and is flagged certified.

Group elements inside this module are plain 0-based image tuples.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .perm import DegreeMismatch, Permutation, inv, is_identity, mul

__all__ = [
    "DEFAULT_EPSILON",
    "StabilizerChain",
    "Group",
    "GenTestStats",
    "FactorRecord",
    "UncertifiedChain",
    "ProductReplacement",
    "build_chain_ss",
    "build_chain_rss",
    "membership",
    "may_contain",
    "random_element",
    "generates",
    "rss_streak",
]

DEFAULT_EPSILON = 2.0**-20

# fixed seed for the random fill-in that precedes deterministic closure; the
# result of SS never depends on it, only the running time does
_SS_SEED = 0x5EED


class UncertifiedChain(RuntimeError):
    pass


def rss_streak(epsilon: float) -> int:
    """Consecutive clean sifts required by RSS for error bound ``epsilon``."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return math.ceil(math.log2(1 / epsilon)) + 16


class _Level:
    __slots__ = ("point", "gen_ids", "orbit", "sv", "rep", "inv", "checked")

    def __init__(self, point: int, ident: tuple):
        self.point = point
        self.gen_ids: list[int] = []
        self.orbit = [point]
        # Schreier vector: orbit point -> index of the strong generator whose
        # edge reached it (-1 at the root)
        self.sv = {point: -1}
        self.rep = {point: ident}
        self.inv = {point: ident}
        # orbit point -> number of generator positions whose Schreier
        # generator is known to lie in the next stabilizer
        self.checked: dict[int, int] = {}

    def copy(self) -> "_Level":
        c = _Level.__new__(_Level)
        c.point = self.point
        c.gen_ids = list(self.gen_ids)
        c.orbit = list(self.orbit)
        c.sv = dict(self.sv)
        c.rep = dict(self.rep)
        c.inv = dict(self.inv)
        c.checked = dict(self.checked)
        return c


class StabilizerChain:
    """Base, strong generators and one transversal per base point.

    Level ``i`` holds the orbit of ``base[i]`` under the strong generators that
    fix ``base[0..i-1]``, as a Schreier vector plus cached coset
    representatives ``rep[x]`` (mapping the base point to ``x``) and their
    inverses.
    """

    def __init__(self, degree: int, base_prefix: Sequence[int] = ()):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.gens: list[tuple] = []
        self.gen_invs: list[tuple] = []
        self.levels: list[_Level] = [_Level(b, self.identity) for b in base_prefix]
        self.certified = degree <= 1

    # -- basic queries -----------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lev.point for lev in self.levels]

    @property
    def order(self) -> int:
        r = 1
        for lev in self.levels:
            r *= len(lev.orbit)
        return r

    @property
    def strong_generators(self) -> list[tuple]:
        return list(self.gens)

    def transversal_sizes(self) -> list[int]:
        return [len(lev.orbit) for lev in self.levels]

    def copy(self) -> "StabilizerChain":
        c = StabilizerChain.__new__(StabilizerChain)
        c.degree = self.degree
        c.identity = self.identity
        c.gens = list(self.gens)
        c.gen_invs = list(self.gen_invs)
        c.levels = [lev.copy() for lev in self.levels]
        c.certified = self.certified
        return c

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        """Strip ``g`` through levels ``start..``; return (residue, level).

        ``level`` is the index where sifting stopped, or ``len(levels)`` if
        every level was passed.
        """
        levels = self.levels
        for i in range(start, len(levels)):
            lev = levels[i]
            x = g[lev.point]
            if x == lev.point:
                continue
            u = lev.inv.get(x)
            if u is None:
                return g, i
            g = mul(g, u)
        return g, len(levels)

    def sifts(self, g: tuple) -> bool:
        r, _ = self.sift(g)
        return r == self.identity

    def contains(self, g: Sequence[int]) -> bool:
        if len(g) != self.degree:
            raise DegreeMismatch(f"degree {len(g)} vs chain degree {self.degree}")
        if not self.certified:
            raise UncertifiedChain("exact membership needs a certified chain")
        return self.sifts(tuple(g))

    def random_element(self, rng: random.Random) -> tuple:
        """Uniform element: one random coset representative per level."""
        g = self.identity
        for lev in reversed(self.levels):
            k = len(lev.orbit)
            if k > 1:
                g = mul(g, lev.rep[lev.orbit[rng.randrange(k)]])
        return g

    def elements(self) -> Iterator[tuple]:
        """All elements, ordered lexicographically by base images."""
        items = [self.identity]
        for lev in reversed(self.levels):
            reps = [lev.rep[x] for x in lev.orbit]
            items = [mul(a, u) for a in items for u in reps]
        base = self.base
        items.sort(key=lambda g: tuple(g[b] for b in base))
        return iter(items)

    def subchain(self, i: int) -> "StabilizerChain":
        """Chain of the pointwise stabilizer of ``base[0..i-1]``."""
        c = StabilizerChain(self.degree)
        keep = set()
        for lev in self.levels[i:]:
            keep.update(lev.gen_ids)
        remap = {}
        for gid in sorted(keep):
            remap[gid] = len(c.gens)
            c.gens.append(self.gens[gid])
            c.gen_invs.append(self.gen_invs[gid])
        for lev in self.levels[i:]:
            nl = lev.copy()
            nl.gen_ids = [remap[g] for g in lev.gen_ids]
            nl.sv = {x: (remap[s] if s >= 0 else -1) for x, s in lev.sv.items()}
            nl.checked = dict(lev.checked)
            c.levels.append(nl)
        c.certified = self.certified
        return c

    # -- growth --------------------------------------------------------------

    def _new_level_point(self, r: tuple) -> int:
        for x, y in enumerate(r):
            if x != y:
                return x
        raise AssertionError("identity has no moved point")

    def _insert(self, r: tuple, j: int) -> None:
        """Add residue ``r`` (fixing base[0..j-1]) to levels 0..j."""
        gid = len(self.gens)
        self.gens.append(r)
        self.gen_invs.append(inv(r))
        if j == len(self.levels):
            self.levels.append(_Level(self._new_level_point(r), self.identity))
        for i in range(j + 1):
            self._extend(self.levels[i], gid)

    def _extend(self, lev: _Level, gid: int) -> None:
        lev.gen_ids.append(gid)
        gens, gen_invs = self.gens, self.gen_invs
        rep, rinv, sv, orbit = lev.rep, lev.inv, lev.sv, lev.orbit
        s, si = gens[gid], gen_invs[gid]
        fresh = []
        for x in list(orbit):
            y = s[x]
            if y not in sv:
                sv[y] = gid
                rep[y] = mul(rep[x], s)
                rinv[y] = mul(si, rinv[x])
                orbit.append(y)
                fresh.append(y)
        if not fresh:
            return
        ids = lev.gen_ids
        k = 0
        while k < len(fresh):
            x = fresh[k]
            k += 1
            for g in ids:
                y = gens[g][x]
                if y not in sv:
                    sv[y] = g
                    rep[y] = mul(rep[x], gens[g])
                    rinv[y] = mul(gen_invs[g], rinv[x])
                    orbit.append(y)
                    fresh.append(y)

    def add_generator(self, g: Sequence[int]) -> bool:
        """Sift ``g`` and add its residue as a strong generator if non-trivial.

        The chain loses its certificate when something is added.
        """
        r, j = self.sift(tuple(g))
        if r == self.identity:
            return False
        self._insert(r, j)
        self.certified = False
        return True

    def _mark_complete(self) -> None:
        self.certified = True
        for lev in self.levels:
            n = len(lev.gen_ids)
            lev.checked = dict.fromkeys(lev.orbit, n)

    def schreier_sims(self, target: int | None = None) -> "StabilizerChain":
        """Deterministic closure: afterwards the chain is complete.

        If ``target`` (an upper bound for the group order that is known to be
        attained exactly when the group is the expected one) is reached, the
        chain is complete already and the loop stops early.
        """
        i = len(self.levels) - 1
        ident = self.identity
        while i >= 0:
            if target is not None and self.order == target:
                break
            lev = self.levels[i]
            hit = None
            for x in lev.orbit:
                ids = lev.gen_ids
                start = lev.checked.get(x, 0)
                if start >= len(ids):
                    continue
                ux = lev.rep[x]
                for pos in range(start, len(ids)):
                    s = self.gens[ids[pos]]
                    y = s[x]
                    h = mul(mul(ux, s), lev.inv[y])
                    lev.checked[x] = pos + 1
                    if h == ident:
                        continue
                    r, j = self.sift(h, i + 1)
                    if r != ident:
                        self._insert(r, j)
                        hit = j
                        break
                if hit is not None:
                    break
            if hit is None:
                i -= 1
            else:
                i = hit
        self._mark_complete()
        return self

    def random_schreier_sims(
        self,
        rng: random.Random,
        epsilon: float = DEFAULT_EPSILON,
        target: int | None = None,
        sampler: Callable[[], tuple] | None = None,
        streak: int | None = None,
    ) -> "StabilizerChain":
        """Grow the chain by sifting random elements.

        Stops after ``streak`` consecutive random elements sift to the identity
        (default derived from ``epsilon``), or as soon as ``target`` is reached,
        in which case the chain is complete and marked certified.
        """
        need = rss_streak(epsilon) if streak is None else streak
        if sampler is None:
            sampler = ProductReplacement(self.gens, self.degree, rng)
        ident = self.identity
        clean = 0
        while clean < need:
            if target is not None and self.order == target:
                break
            r, j = self.sift(sampler())
            if r != ident:
                self._insert(r, j)
                clean = 0
            else:
                clean += 1
        if target is not None and self.order == target:
            self._mark_complete()
        else:
            self.certified = False
        return self

    def close(self, target: int | None = None, rng: random.Random | None = None):
        """Random fill-in followed by deterministic verification."""
        if self.certified:
            return self
        rng = rng or random.Random(_SS_SEED)
        self.random_schreier_sims(rng, target=target, streak=8)
        if not self.certified:
            self.schreier_sims(target=target)
        return self


class ProductReplacement:
    """Product replacement random elements with an accumulator ("rattle")."""

    def __init__(
        self,
        gens: Sequence[tuple],
        degree: int,
        rng: random.Random,
        slots: int = 10,
        scramble: int = 30,
    ):
        self.rng = rng
        ident = tuple(range(degree))
        gens = [tuple(g) for g in gens if tuple(g) != ident]
        if not gens:
            gens = [ident]
        state = [gens[i % len(gens)] for i in range(max(slots, len(gens)))]
        self.state = state
        self.acc = ident
        for _ in range(scramble):
            self()

    def __call__(self) -> tuple:
        s = self.state
        k = len(s)
        i = self.rng.randrange(k)
        j = self.rng.randrange(k - 1)
        if j >= i:
            j += 1
        if self.rng.random() < 0.5:
            s[i] = mul(s[i], s[j])
        else:
            s[i] = mul(s[j], s[i])
        self.acc = mul(self.acc, s[i])
        return self.acc


# ---------------------------------------------------------------------------
# groups


class Group:
    """A permutation group given by generators, with a lazily built chain."""

    def __init__(
        self,
        generators: Iterable[Sequence[int]],
        degree: int | None = None,
        name: str | None = None,
        chain: StabilizerChain | None = None,
    ):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generator list")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise DegreeMismatch(f"generator of degree {len(g)} in degree {degree}")
        ident = tuple(range(degree))
        self.degree = degree
        self.generators = [g for g in gens if g != ident]
        self.name = name
        if chain is not None and not chain.certified:
            raise UncertifiedChain("groups carry certified chains only")
        self._chain = chain

    @classmethod
    def from_chain(cls, chain: StabilizerChain, generators=None, name=None) -> "Group":
        gens = chain.gens if generators is None else generators
        return cls(gens, chain.degree, name=name, chain=chain)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = build_chain_ss(self.generators, self.degree)
        return self._chain

    @property
    def order(self) -> int:
        return self.chain.order

    @property
    def identity(self) -> tuple:
        return tuple(range(self.degree))

    def is_trivial(self) -> bool:
        return not self.generators

    def contains(self, g: Sequence[int]) -> bool:
        return self.chain.contains(g)

    def __contains__(self, g) -> bool:
        return self.contains(g)

    def random_element(self, rng: random.Random) -> tuple:
        return self.chain.random_element(rng)

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(mul(a, b) == mul(b, a) for i, a in enumerate(gs) for b in gs[i + 1 :])

    def with_base(self, prefix: Sequence[int]) -> StabilizerChain:
        """Certified chain whose base starts with ``prefix``."""
        c = StabilizerChain(self.degree, prefix)
        for g in self.generators:
            c.add_generator(g)
        c.random_schreier_sims(random.Random(_SS_SEED), target=self.order)
        if not c.certified:
            c.schreier_sims(target=self.order)
        return c

    def __repr__(self) -> str:
        label = self.name or f"<{len(self.generators)} generators>"
        return f"Group({label}, degree={self.degree})"


# ---------------------------------------------------------------------------
# statistics


@dataclass
class FactorRecord:
    index: int
    order: int
    abelian: bool
    branch: str
    trials: int = 0
    ss_tests: int = 0
    rss_tests: int = 0

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "order": str(self.order),
            "abelian": self.abelian,
            "branch": self.branch,
            "trials": self.trials,
            "ss_tests": self.ss_tests,
            "rss_tests": self.rss_tests,
        }


@dataclass
class GenTestStats:
    """Counters for one run.  All counters only ever increase."""

    ss_tests: int = 0
    rss_tests: int = 0
    random_elements: int = 0
    abelian_ss_tests: int = 0
    early_stop_tests: int = 0
    per_factor: list[FactorRecord] = field(default_factory=list)
    certified_minimal: bool = True

    @property
    def total_tests(self) -> int:
        return self.ss_tests + self.rss_tests

    def as_dict(self) -> dict:
        return {
            "ss_tests": self.ss_tests,
            "rss_tests": self.rss_tests,
            "random_elements": self.random_elements,
            "abelian_ss_tests": self.abelian_ss_tests,
            "early_stop_tests": self.early_stop_tests,
            "per_factor": [r.as_dict() for r in self.per_factor],
        }


# ---------------------------------------------------------------------------
# spec-level operations


def build_chain_ss(generators: Iterable[Sequence[int]], degree: int) -> StabilizerChain:
    c = StabilizerChain(degree)
    for g in generators:
        if len(g) != degree:
            raise DegreeMismatch(f"generator of degree {len(g)} in degree {degree}")
        c.add_generator(g)
    return c.close()


def build_chain_rss(
    generators: Iterable[Sequence[int]],
    degree: int,
    error_bound: float = DEFAULT_EPSILON,
    rng: random.Random | None = None,
) -> StabilizerChain:
    rng = rng or random.Random()
    gens = [tuple(g) for g in generators]
    c = StabilizerChain(degree)
    for g in gens:
        c.add_generator(g)
    c.random_schreier_sims(rng, error_bound, sampler=ProductReplacement(gens, degree, rng))
    return c


def membership(chain: StabilizerChain, g: Sequence[int]) -> bool:
    return chain.contains(g)


def may_contain(chain: StabilizerChain, g: Sequence[int]) -> bool:
    """True is definitive; False may be wrong on an uncertified chain."""
    if len(g) != chain.degree:
        raise DegreeMismatch(f"degree {len(g)} vs chain degree {chain.degree}")
    return chain.sifts(tuple(g))


def random_element(chain: StabilizerChain, rng: random.Random) -> Permutation:
    return Permutation._trusted(chain.random_element(rng))


def generates(
    candidate_gens: Sequence[Sequence[int]],
    target: Group,
    strategy: str = "SS",
    stats: GenTestStats | None = None,
    *,
    modulo: Group | None = None,
    rng: random.Random | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> bool:
    """Does ``candidate_gens`` generate ``target`` (modulo a normal subgroup)?

    With ``modulo=M`` the question is whether ``<candidates, M> = target``;
    ``M`` must be normal in ``target``.  ``SS`` answers exactly.  ``RSS``
    answers ``True`` only when the subgroup chain reaches ``|target|``, so a
    ``True`` is always right and a ``False`` is wrong with probability at most
    ``epsilon``.
    """
    if strategy not in ("SS", "RSS"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if stats is not None:
        if strategy == "SS":
            stats.ss_tests += 1
        else:
            stats.rss_tests += 1
    n = target.degree
    cands = [tuple(c) for c in candidate_gens]
    for c in cands:
        if len(c) != n:
            raise DegreeMismatch(f"candidate of degree {len(c)} vs group degree {n}")
    if modulo is not None and modulo.degree != n:
        raise DegreeMismatch("modulus has a different degree")
    goal = target.order
    tchain = target.chain
    if any(not tchain.sifts(c) for c in cands):
        return False
    chain = modulo.chain.copy() if modulo is not None else StabilizerChain(n)
    if chain.order == goal:
        return True
    for c in cands:
        chain.add_generator(c)
    if chain.order == goal:
        return True
    if strategy == "RSS":
        rng = rng or random.Random()
        pr = ProductReplacement(cands, n, rng)
        if modulo is not None and modulo.order > 1:
            mchain = modulo.chain
            sampler = lambda: mul(pr(), mchain.random_element(rng))  # noqa: E731
        else:
            sampler = pr
        chain.random_schreier_sims(rng, epsilon, target=goal, sampler=sampler)
        return chain.order == goal
    chain.close(target=goal)
    return chain.order == goal


def _is_id(g) -> bool:
    return is_identity(g)

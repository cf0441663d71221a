"""Permutations of {1..n} and cycle notation.

Points are 1-based in all text I/O and stored 0-based internally.  The action
is on the right and products are read left to right: ``x^(ab) = (x^a)^b``, so
``compose(a, b)`` first applies ``a`` and then ``b``.

Hot loops elsewhere in the package work directly on plain tuples of images;
:class:`Permutation` is a tuple subclass, so it can be passed anywhere a raw
image tuple is expected.
"""

from __future__ import annotations

import math
from operator import itemgetter
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "PermError",
    "PointOutOfRange",
    "RepeatedPointInCycle",
    "CycleSyntaxError",
    "DegreeMismatch",
    "parse_cycles",
    "print_cycles",
    "compose",
    "inverse",
    "element_order",
    "identity",
    "mul",
    "inv",
    "conj",
    "comm",
    "power",
    "is_identity",
]


class PermError(ValueError):
    pass


class PointOutOfRange(PermError):
    pass


class RepeatedPointInCycle(PermError):
    pass


class DegreeMismatch(PermError):
    pass


class CycleSyntaxError(PermError):
    """Malformed cycle notation; ``pos`` is the 0-based offset in the text."""

    def __init__(self, msg: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{msg} at position {pos}: {text!r}")


# ---------------------------------------------------------------------------
# raw tuple kernels


def mul(a: tuple, b: tuple) -> tuple:
    """Left-to-right product of two image tuples."""
    if len(a) > 1:
        return itemgetter(*a)(b)
    return tuple(b[x] for x in a)


def inv(a: Sequence[int]) -> tuple:
    r = [0] * len(a)
    for i, x in enumerate(a):
        r[x] = i
    return tuple(r)


def conj(a: tuple, g: tuple, g_inv: tuple | None = None) -> tuple:
    """``a^g = g^-1 a g``."""
    if g_inv is None:
        g_inv = inv(g)
    return mul(mul(g_inv, a), g)


def comm(a: tuple, b: tuple) -> tuple:
    """``[a, b] = a^-1 b^-1 a b``."""
    return mul(mul(inv(a), inv(b)), mul(a, b))


def power(a: tuple, e: int) -> tuple:
    n = len(a)
    if e < 0:
        a, e = inv(a), -e
    result = tuple(range(n))
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def is_identity(a: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(a))


def cycles_of(a: Sequence[int]) -> list[list[int]]:
    """Non-trivial cycles, each starting at its smallest point (0-based)."""
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if seen[i] or a[i] == i:
            continue
        cyc = [i]
        seen[i] = True
        j = a[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = a[j]
        out.append(cyc)
    return out


# ---------------------------------------------------------------------------
# public value type


class Permutation(tuple):
    """An immutable permutation of ``degree`` points.

    The underlying tuple holds 0-based images; :attr:`images` gives the
    1-based view used in I/O.
    """

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        t = tuple(images)
        if sorted(t) != list(range(len(t))):
            raise PermError(f"not a permutation of 0..{len(t) - 1}: {t!r}")
        return tuple.__new__(cls, t)

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return tuple.__new__(cls, range(degree))

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Permutation":
        """Build from 1-based images, e.g. ``[2, 3, 1]`` for (1 2 3)."""
        return cls(x - 1 for x in images)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        return parse_cycles(text, degree)

    @property
    def degree(self) -> int:
        return len(self)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self)

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        if not 1 <= point <= len(self):
            raise PointOutOfRange(f"point {point} not in 1..{len(self)}")
        return tuple.__getitem__(self, point - 1) + 1

    def __mul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        return compose(self, other)

    def __rmul__(self, other):
        return NotImplemented

    def __pow__(self, e: int) -> "Permutation":
        return Permutation._trusted(power(self, e))

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def inverse(self) -> "Permutation":
        return inverse(self)

    def order(self) -> int:
        return element_order(self)

    def is_identity(self) -> bool:
        return is_identity(self)

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles with 1-based points."""
        return [tuple(x + 1 for x in c) for c in cycles_of(self)]

    def __str__(self) -> str:
        return print_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation.parse({print_cycles(self)!r}, {len(self)})"


def identity(degree: int) -> Permutation:
    return Permutation.identity(degree)


def compose(a: Sequence[int], b: Sequence[int]) -> Permutation:
    """The permutation mapping x to b(a(x))."""
    if len(a) != len(b):
        raise DegreeMismatch(f"degrees differ: {len(a)} vs {len(b)}")
    return Permutation._trusted(mul(tuple(a), tuple(b)))


def inverse(a: Sequence[int]) -> Permutation:
    return Permutation._trusted(inv(a))


def element_order(a: Sequence[int]) -> int:
    return math.lcm(1, *(len(c) for c in cycles_of(a)))


def print_cycles(a: Sequence[int]) -> str:
    cs = cycles_of(a)
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cs)


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse cycle notation such as ``"(1 2 3)(4 5)"``.

    Cycles are multiplied left to right and need not be disjoint.  Commas are
    accepted as separators inside a cycle.  ``"()"`` and ``""`` give the
    identity.
    """
    if degree < 0:
        raise PermError("degree must be non-negative")
    images = list(range(degree))
    i, n = 0, len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        if text[i] != "(":
            raise CycleSyntaxError("expected '('", text, i)
        i += 1
        cycle: list[int] = []
        while True:
            while i < n and (text[i].isspace() or text[i] == ","):
                i += 1
            if i >= n:
                raise CycleSyntaxError("unterminated cycle", text, i)
            if text[i] == ")":
                i += 1
                break
            if not text[i].isdigit():
                raise CycleSyntaxError(f"unexpected {text[i]!r}", text, i)
            start = i
            while i < n and text[i].isdigit():
                i += 1
            pt = int(text[start:i])
            if not 1 <= pt <= degree:
                raise PointOutOfRange(
                    f"point {pt} at position {start} outside 1..{degree}"
                )
            if pt - 1 in cycle:
                raise RepeatedPointInCycle(f"point {pt} repeated at position {start}")
            cycle.append(pt - 1)
        if len(cycle) > 1:
            step = list(range(degree))
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                step[a] = b
            images = [step[x] for x in images]
    return Permutation._trusted(tuple(images))

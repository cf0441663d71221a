"""Test and benchmark groups, and a small DSL for describing them.

Grammar (whitespace is free between tokens)::

    spec   := NAME [ "(" [ arg { "," arg } ] ")" ]
    arg    := spec | INT | STRING
    STRING := '"' characters, backslash escapes '"'

Atoms: ``sym(n)``, ``alt(n)``, ``cyclic(n)``, ``dihedral(n)``, ``psl_3_2``,
``q8``, ``file("path")``, ``gens(n, "(1 2)", "(1 2 3)", ...)``.

Combinators: ``direct_product(A, B, ...)``, ``direct_power(A, k)``,
``wreath(G, H)`` (imprimitive action on ``deg G * deg H`` points) and
``crown_inversion(p, k)`` (``p^k : 2`` on ``p*k`` points).

Group files hold a ``degree n`` line followed by one generator per line in
cycle notation; ``#`` starts a comment.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Sequence, Union

from .bsgs import Group
from .perm import PermError, parse_cycles

__all__ = [
    "GroupSpec",
    "SpecSyntaxError",
    "BadGenerators",
    "GroupFileNotFound",
    "parse_spec",
    "format_spec",
    "elaborate",
    "build",
    "read_group_file",
    "sym",
    "alt",
    "cyclic",
    "dihedral",
    "psl_3_2",
    "q8",
    "direct_product",
    "direct_power",
    "wreath",
    "crown_inversion",
]


class SpecSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{msg} at position {pos}: {text!r}")


class BadGenerators(ValueError):
    pass


class GroupFileNotFound(FileNotFoundError):
    pass


Arg = Union["GroupSpec", int, str]


@dataclass(frozen=True)
class GroupSpec:
    name: str
    args: tuple[Arg, ...] = ()

    def __str__(self) -> str:
        return format_spec(self)


_BARE = {"psl_3_2", "q8"}


def format_spec(spec: GroupSpec) -> str:
    if not spec.args and spec.name in _BARE:
        return spec.name
    parts = []
    for a in spec.args:
        if isinstance(a, GroupSpec):
            parts.append(format_spec(a))
        elif isinstance(a, str):
            parts.append(json.dumps(a))
        else:
            parts.append(str(a))
    return f"{spec.name}({', '.join(parts)})"


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def error(self, msg: str, pos: int | None = None):
        raise SpecSyntaxError(msg, self.text, self.i if pos is None else pos)

    def skip(self):
        t = self.text
        while self.i < len(t) and t[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.i += 1

    def spec(self) -> GroupSpec:
        self.skip()
        start = self.i
        t = self.text
        while self.i < len(t) and (t[self.i].isalnum() or t[self.i] == "_"):
            self.i += 1
        name = t[start : self.i]
        if not name or not (name[0].isalpha() or name[0] == "_"):
            self.error("expected a group name", start)
        args: list[Arg] = []
        if self.peek() == "(":
            self.i += 1
            if self.peek() != ")":
                args.append(self.arg())
                while self.peek() == ",":
                    self.i += 1
                    args.append(self.arg())
            self.expect(")")
        return GroupSpec(name, tuple(args))

    def arg(self) -> Arg:
        c = self.peek()
        if c == '"':
            return self.string()
        if c.isdigit() or c == "-":
            start = self.i
            self.i += 1
            while self.i < len(self.text) and self.text[self.i].isdigit():
                self.i += 1
            try:
                return int(self.text[start : self.i])
            except ValueError:
                self.error("bad integer", start)
        return self.spec()

    def string(self) -> str:
        start = self.i
        self.i += 1
        out = []
        t = self.text
        while self.i < len(t):
            c = t[self.i]
            if c == "\\" and self.i + 1 < len(t):
                out.append(t[self.i + 1])
                self.i += 2
                continue
            if c == '"':
                self.i += 1
                return "".join(out)
            out.append(c)
            self.i += 1
        self.error("unterminated string", start)


def parse_spec(text: str) -> GroupSpec:
    p = _Parser(text)
    spec = p.spec()
    if p.peek():
        p.error("trailing input")
    return spec


# ---------------------------------------------------------------------------
# concrete groups


def _cycle(points: Sequence[int], degree: int) -> tuple:
    g = list(range(degree))
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        g[a] = b
    return tuple(g)


def sym(n: int) -> Group:
    if n < 1:
        raise BadGenerators("sym needs n >= 1")
    gens = []
    if n >= 2:
        gens = [_cycle(range(n), n), _cycle([0, 1], n)]
    return Group(gens, n, name=f"sym({n})")


def alt(n: int) -> Group:
    if n < 1:
        raise BadGenerators("alt needs n >= 1")
    gens = []
    if n >= 3:
        gens = [_cycle([0, 1, 2], n)]
        if n >= 4:
            gens.append(_cycle(range(n) if n % 2 else range(1, n), n))
    return Group(gens, n, name=f"alt({n})")


def cyclic(n: int) -> Group:
    if n < 1:
        raise BadGenerators("cyclic needs n >= 1")
    return Group([_cycle(range(n), n)] if n > 1 else [], n, name=f"cyclic({n})")


def dihedral(n: int) -> Group:
    """Symmetries of the regular ``n``-gon, order ``2n``."""
    if n < 3:
        raise BadGenerators("dihedral needs n >= 3")
    flip = tuple((-i) % n for i in range(n))
    return Group([_cycle(range(n), n), flip], n, name=f"dihedral({n})")


def psl_3_2() -> Group:
    """PSL(3,2) acting on the 7 points of the Fano plane."""
    a = parse_cycles("(1 2 3 4 5 6 7)", 7)
    b = parse_cycles("(2 3)(4 7)", 7)
    G = Group([a, b], 7, name="psl_3_2")
    if G.order != 168:
        raise AssertionError("PSL(3,2) generators give the wrong order")
    return G


def q8() -> Group:
    """Quaternion group in its regular action on 8 points."""
    # points: (sign, unit) with units 1, i, j, k encoded as 0..3
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def index(sign: int, unit: int) -> int:
        return unit + (4 if sign < 0 else 0)

    def right_mult(unit_g: int) -> tuple:
        img = [0] * 8
        for x in range(8):
            s, u = (-1 if x >= 4 else 1), x % 4
            s2, u2 = table[(u, unit_g)]
            img[x] = index(s * s2, u2)
        return tuple(img)

    return Group([right_mult(1), right_mult(2)], 8, name="q8")


def read_group_file(path: str) -> Group:
    if not os.path.exists(path):
        raise GroupFileNotFound(f"group file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    degree = None
    gens = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "degree" or not parts[1].isdigit():
                raise BadGenerators(f"{path}:{lineno}: expected 'degree n'")
            degree = int(parts[1])
            continue
        try:
            gens.append(parse_cycles(line, degree))
        except PermError as exc:
            raise BadGenerators(f"{path}:{lineno}: {exc}") from exc
    if degree is None:
        raise BadGenerators(f"{path}: missing 'degree n' line")
    return Group(gens, degree, name=f"file({json.dumps(path)})")


def _from_cycles(degree: int, texts: Sequence[str]) -> Group:
    try:
        gens = [parse_cycles(t, degree) for t in texts]
    except PermError as exc:
        raise BadGenerators(str(exc)) from exc
    return Group(gens, degree)


def direct_product(*groups: Group) -> Group:
    if not groups:
        raise BadGenerators("direct_product needs at least one factor")
    degree = sum(G.degree for G in groups)
    gens = []
    off = 0
    for G in groups:
        for g in G.generators:
            img = list(range(degree))
            for i, x in enumerate(g):
                img[off + i] = off + x
            gens.append(tuple(img))
        off += G.degree
    return Group(gens, degree)


def direct_power(G: Group, k: int) -> Group:
    if k < 1:
        raise BadGenerators("direct_power needs k >= 1")
    return direct_product(*([G] * k))


def wreath(G: Group, H: Group) -> Group:
    """``G wr H`` on ``m*k`` points, point ``b*m + i`` = point ``i`` of block ``b``.

    ``G`` acts on the first block of every ``H``-orbit; ``H`` permutes blocks.
    """
    m, k = G.degree, H.degree
    degree = m * k
    seen = set()
    leaders = []
    for b in range(k):
        if b in seen:
            continue
        leaders.append(b)
        orb = [b]
        seen.add(b)
        for x in orb:
            for h in H.generators:
                if h[x] not in seen:
                    seen.add(h[x])
                    orb.append(h[x])
    gens = []
    for b in leaders:
        for g in G.generators:
            img = list(range(degree))
            for i in range(m):
                img[b * m + i] = b * m + g[i]
            gens.append(tuple(img))
    for h in H.generators:
        gens.append(tuple(h[p // m] * m + p % m for p in range(degree)))
    return Group(gens, degree)


def crown_inversion(p: int, k: int) -> Group:
    """``C_p^k`` extended by simultaneous inversion, on ``p*k`` points."""
    if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, int(p**0.5) + 1, 2)):
        raise BadGenerators("crown_inversion needs an odd prime p")
    if k < 1:
        raise BadGenerators("crown_inversion needs k >= 1")
    degree = p * k
    gens = [_cycle(range(b * p, (b + 1) * p), degree) for b in range(k)]
    gens.append(tuple(b * p + (-(x - b * p)) % p for b in range(k) for x in range(b * p, (b + 1) * p)))
    return Group(gens, degree)


# ---------------------------------------------------------------------------
# elaboration


def _int_args(spec: GroupSpec, count: int) -> list[int]:
    if len(spec.args) != count or not all(isinstance(a, int) for a in spec.args):
        raise BadGenerators(f"{spec.name} takes {count} integer argument(s)")
    return list(spec.args)


def _group_arg(a: Arg) -> Group:
    if not isinstance(a, GroupSpec):
        raise BadGenerators(f"expected a group, got {a!r}")
    return elaborate(a)


def elaborate(spec: GroupSpec) -> Group:
    name = spec.name
    args = spec.args
    if name in ("sym", "alt", "cyclic", "dihedral"):
        (n,) = _int_args(spec, 1)
        G = {"sym": sym, "alt": alt, "cyclic": cyclic, "dihedral": dihedral}[name](n)
    elif name == "psl_3_2":
        _int_args(spec, 0)
        G = psl_3_2()
    elif name == "q8":
        _int_args(spec, 0)
        G = q8()
    elif name == "file":
        if len(args) != 1 or not isinstance(args[0], str):
            raise BadGenerators('file takes one string argument, e.g. file("g.txt")')
        G = read_group_file(args[0])
    elif name == "gens":
        if not args or not isinstance(args[0], int) or args[0] < 1:
            raise BadGenerators('gens takes a degree then cycle strings, e.g. gens(3, "(1 2 3)")')
        if not all(isinstance(a, str) for a in args[1:]):
            raise BadGenerators("gens expects cycle-notation strings after the degree")
        G = _from_cycles(args[0], args[1:])
    elif name == "direct_product":
        G = direct_product(*(_group_arg(a) for a in args))
    elif name == "direct_power":
        if len(args) != 2 or not isinstance(args[1], int):
            raise BadGenerators("direct_power takes a group and an integer")
        G = direct_power(_group_arg(args[0]), args[1])
    elif name == "wreath":
        if len(args) != 2:
            raise BadGenerators("wreath takes two groups")
        G = wreath(_group_arg(args[0]), _group_arg(args[1]))
    elif name == "crown_inversion":
        p, k = _int_args(spec, 2)
        G = crown_inversion(p, k)
    else:
        raise BadGenerators(f"unknown group constructor {name!r}")
    G.name = format_spec(spec)
    return G


def build(text: str) -> Group:
    """Parse and elaborate a DSL string."""
    return elaborate(parse_spec(text))

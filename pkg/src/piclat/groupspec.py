"""Group-spec strings: parsing and canonical printing.

Grammar (whitespace is ignored)::

    spec    := factor ( ("x" | "×") factor )*
    factor  := twist | atom
    twist   := "C[mu:" INT ( "@" INT )? "]" "(" spec ")"
    atom    := "torus:" INT | "GL:" INT | "SL:" INT ( "/mu:" INT )?
             | "PGL:" INT | "Sp:" INT | "PSp:" INT | "Spin:" INT | "SO:" INT
             | "PSO:" INT | "Omega+:" INT | "Omega-:" INT
             | "E6sc" | "E6ad" | "E7sc" | "E7ad" | "E8" | "F4" | "G2"

``C[mu:k](H)`` is the central twist ``(H x G_m)/mu_k``; the optional
``@i`` picks the simple-coroot node whose fundamental coweight supplies the
embedded ``mu_k``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = ["ParseError", "Atom", "Product", "Twist", "GroupSpec", "parse_group_spec", "format_group_spec"]


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class Product:
    parts: tuple["Node", ...]


@dataclass(frozen=True)
class Twist:
    k: int
    node: int | None
    inner: "Node"


Node = Union[Atom, Product, Twist]

_EXCEPTIONAL = ("E6sc", "E6ad", "E7sc", "E7ad", "E8", "F4", "G2")
_ATOM_RE = re.compile(
    r"(?P<name>torus|GL|SL|PGL|PSp|Sp|Spin|SO|PSO|Omega\+|Omega-):(?P<n>\d+)(?:/mu:(?P<r>\d+))?"
)
_TWIST_RE = re.compile(r"C\[mu:?(?P<k>\d+)(?:@(?P<node>\d+))?\]\(")


@dataclass(frozen=True)
class GroupSpec:
    """A parsed group spec; ``str()`` gives the canonical form."""

    text: str
    ast: Node

    def __str__(self):
        return format_group_spec(self.ast)


class _Parser:
    def __init__(self, text: str):
        self.s = re.sub(r"\s+", "", text)
        self.i = 0

    def fail(self, msg: str):
        raise ParseError(f"{msg} at position {self.i} in {self.s!r}")

    def spec(self) -> Node:
        parts = [self.factor()]
        while self.i < len(self.s) and self.s[self.i] in "x×":
            self.i += 1
            parts.append(self.factor())
        return parts[0] if len(parts) == 1 else Product(tuple(parts))

    def factor(self) -> Node:
        m = _TWIST_RE.match(self.s, self.i)
        if m:
            self.i = m.end()
            inner = self.spec()
            if self.i >= len(self.s) or self.s[self.i] != ")":
                self.fail("expected ')'")
            self.i += 1
            k = int(m["k"])
            node = int(m["node"]) if m["node"] else None
            return Twist(k, node, inner)
        for name in _EXCEPTIONAL:
            if self.s.startswith(name, self.i):
                self.i += len(name)
                return Atom(name)
        m = _ATOM_RE.match(self.s, self.i)
        if not m:
            self.fail("unrecognized group")
        self.i = m.end()
        args = (int(m["n"]),) if m["r"] is None else (int(m["n"]), int(m["r"]))
        if m["r"] is not None and m["name"] != "SL":
            self.fail("'/mu:' is only allowed after SL")
        return Atom(m["name"], args)


def parse_group_spec(text: str) -> GroupSpec:
    p = _Parser(text)
    if not p.s:
        raise ParseError("empty group spec")
    ast = p.spec()
    if p.i != len(p.s):
        p.fail("trailing characters")
    return GroupSpec(text, ast)


def format_group_spec(node: Node) -> str:
    if isinstance(node, Atom):
        if not node.args:
            return node.name
        if len(node.args) == 2:
            return f"{node.name}:{node.args[0]}/mu:{node.args[1]}"
        return f"{node.name}:{node.args[0]}"
    if isinstance(node, Product):
        return " x ".join(format_group_spec(p) for p in node.parts)
    at = f"@{node.node}" if node.node is not None else ""
    return f"C[mu:{node.k}{at}]({format_group_spec(node.inner)})"

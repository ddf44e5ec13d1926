"""Group constructor expressions.

Grammar (version 1, frozen; reports reference groups by these strings):

    expr  := term ( "x" term )*
    term  := NAME "(" args ")" | NAME | "perm" "[" gens "]" | "table" JSON
    NAME  := C | D | Dic | S | A | E | SL | Q8 | SL23 | M16

Atoms take the group order as argument where applicable: C(n), D(2n),
Dic(4n), S(n), A(n), E(p,k). Q8, SL23 and M16 are bare names; SL(2,3) is
accepted as an alias for SL23. perm generators use 1-based cycle notation,
e.g. perm[(1 2 3)(4 5), (1 2)]. Products associate to the left.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import groups
from .errors import ParseError

DSL_VERSION = 1

_ATOM_ARITY = {"C": 1, "D": 1, "Dic": 1, "S": 1, "A": 1, "E": 2, "SL": 2}
_BARE = ("Q8", "SL23", "M16")


@dataclass(frozen=True)
class GroupExpr:
    """Parsed expression tree; ``terms`` holds atoms in product order."""

    terms: tuple

    def canonical(self) -> str:
        return "x".join(t.canonical() for t in self.terms)

    def build(self, table_cap: int | None = None) -> groups.Group:
        out = None
        for t in self.terms:
            g = t.build(table_cap)
            out = g if out is None else groups.direct_product(
                out, g, table_cap=table_cap)
        out.name = self.canonical()
        return out


@dataclass(frozen=True)
class Atom:
    head: str
    args: tuple = ()

    def canonical(self) -> str:
        if self.head in _BARE:
            return self.head
        return f"{self.head}({','.join(str(a) for a in self.args)})"

    def build(self, table_cap=None) -> groups.Group:
        h, a = self.head, self.args
        try:
            if h == "C":
                return groups.cyclic(a[0], table_cap)
            if h == "D":
                return groups.dihedral(a[0], table_cap)
            if h == "Dic":
                return groups.dicyclic(a[0], table_cap)
            if h == "S":
                return groups.symmetric(a[0], table_cap)
            if h == "A":
                return groups.alternating(a[0], table_cap)
            if h == "E":
                return groups.elementary_abelian(a[0], a[1], table_cap)
            if h == "Q8":
                return groups.quaternion8(table_cap)
            if h == "SL23":
                return groups.special_linear_2_3(table_cap)
            if h == "M16":
                return groups.modular16(table_cap)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        raise ParseError(f"unknown atom {h!r}")


@dataclass(frozen=True)
class PermAtom:
    gens: tuple  # cycle strings, normalized

    def canonical(self) -> str:
        return "perm[" + ",".join(self.gens) + "]"

    def build(self, table_cap=None) -> groups.Group:
        return groups.build_from_permutations(list(self.gens),
                                              table_cap=table_cap)


@dataclass(frozen=True)
class TableAtom:
    table: tuple

    def canonical(self) -> str:
        return "table" + json.dumps([list(r) for r in self.table],
                                    separators=(",", ":"))

    def build(self, table_cap=None) -> groups.Group:
        return groups.build_from_table([list(r) for r in self.table],
                                       table_cap=table_cap)


def _split_product(text: str) -> list[str]:
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced brackets", text, i)
        elif ch in "xX" and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise ParseError("unbalanced brackets", text, len(text) - 1)
    parts.append(text[start:])
    return parts


def _parse_term(src: str, full: str):
    term = src.strip()
    if not term:
        raise ParseError("empty term", full, 0)
    if term.startswith("perm"):
        rest = term[4:].strip()
        if not (rest.startswith("[") and rest.endswith("]")):
            raise ParseError("perm needs [generators]", full, 0)
        gens = _split_gens(rest[1:-1])
        norm = []
        for gtext in gens:
            img = groups.parse_cycles(gtext)
            norm.append(groups.cycle_string(img))
        return PermAtom(tuple(norm))
    if term.startswith("table"):
        rest = term[5:].strip()
        try:
            data = json.loads(rest)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad table JSON: {exc}", full, 0) from exc
        if not isinstance(data, list):
            raise ParseError("table JSON must be a list of rows", full, 0)
        return TableAtom(tuple(tuple(int(x) for x in row) for row in data))
    if "(" in term:
        head, _, tail = term.partition("(")
        head = head.strip()
        if not tail.endswith(")"):
            raise ParseError("missing )", full, len(full) - 1)
        args_text = tail[:-1]
        try:
            args = tuple(int(a.strip()) for a in args_text.split(",") if a.strip())
        except ValueError:
            raise ParseError(f"non-integer argument in {term!r}", full, 0)
        if head == "SL":
            if args != (2, 3):
                raise ParseError("only SL(2,3) is supported", full, 0)
            return Atom("SL23")
        if head not in _ATOM_ARITY:
            raise ParseError(f"unknown constructor {head!r}", full, 0)
        if len(args) != _ATOM_ARITY[head]:
            raise ParseError(
                f"{head} takes {_ATOM_ARITY[head]} argument(s)", full, 0)
        return Atom(head, args)
    if term in _BARE:
        return Atom(term)
    raise ParseError(f"cannot parse term {term!r}", full, 0)


def _split_gens(body: str) -> list[str]:
    gens = []
    depth = 0
    start = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            gens.append(body[start:i])
            start = i + 1
    tailpiece = body[start:].strip()
    gens = [g for g in (s.strip() for s in gens) if g]
    if tailpiece:
        gens.append(tailpiece)
    return gens


def parse_expr(text: str) -> GroupExpr:
    if not text or not text.strip():
        raise ParseError("empty expression", text, 0)
    return GroupExpr(tuple(_parse_term(p, text) for p in _split_product(text)))


def build_from_expr(expr, table_cap: int | None = None) -> groups.Group:
    """Evaluate an expression (string or parsed) into a Group.

    Evaluation is deterministic: the same expression yields a bit-identical
    table.
    """
    if isinstance(expr, str):
        expr = parse_expr(expr)
    return expr.build(table_cap)

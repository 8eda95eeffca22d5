"""Text formats for sets and events.

Set definitions are a small stack language, one directive per line (``;``
also separates directives, ``#`` starts a comment):

    ideal m              push <X^m>
    coset m r0,r1,...    push the union of r_i + <X^m> (r_i canonical indices, < q^m)
    explicit i1,i2,...   push the set with these canonical indices
    pullback-even        push {f != 0 : deg f even}
    all / empty          push the universe / the empty set
    union, intersect     pop two, push the result
    complement           pop one, push its complement

Exactly one set must remain at the end.

Event files for systems use the same language over the state space of a
translation system, plus:

    states s1,s2,...     explicit state indices (any finite system)
    cylinder c1,c2 P|P   cylinder on coordinates c_i (canonical indices); each
                         pattern P lists one symbol per coordinate, joined by '.'
"""

from __future__ import annotations

from pathlib import Path

from .field import FieldSpec
from .mds import Cylinder, EventSet, MDSError
from .sets import NatSet, SetError, deg_pullback
from .universe import TruncatedSet, get_universe


class ParseError(ValueError):
    pass


def read_literal(text: str) -> str:
    """``@path`` reads the file; so does a bare path to an existing file.
    Anything else is the literal itself."""
    if text.startswith("@"):
        return Path(text[1:]).read_text()
    if "\n" not in text and Path(text).is_file():
        return Path(text).read_text()
    return text


def _directives(text: str):
    for raw in text.replace(";", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line.split()


def _int_list(tok: str, line) -> list[int]:
    try:
        return [int(x) for x in tok.split(",") if x != ""]
    except ValueError:
        raise ParseError(f"malformed index list {tok!r} in directive {' '.join(line)!r}") from None


def _int(tok: str, line) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"malformed integer {tok!r} in directive {' '.join(line)!r}") from None


def parse_set(text: str, field: FieldSpec, D: int) -> TruncatedSet:
    u = get_universe(field, D)
    stack: list[TruncatedSet] = []

    def pop(line):
        if not stack:
            raise ParseError(f"directive {line[0]!r} needs a set on the stack")
        return stack.pop()

    for line in _directives(text):
        op, args = line[0], line[1:]
        try:
            if op == "ideal" and len(args) == 1:
                stack.append(TruncatedSet.ideal(u, _int(args[0], line)))
            elif op == "coset" and len(args) == 2:
                stack.append(TruncatedSet.coset_union(u, _int(args[0], line), _int_list(args[1], line)))
            elif op == "explicit" and len(args) <= 1:
                stack.append(TruncatedSet.from_indices(u, _int_list(args[0], line) if args else []))
            elif op == "pullback-even" and not args:
                stack.append(deg_pullback(NatSet.evens(D), field, D))
            elif op == "all" and not args:
                stack.append(TruncatedSet.full(u))
            elif op == "empty" and not args:
                stack.append(TruncatedSet.empty(u))
            elif op == "union" and not args:
                b, a = pop(line), pop(line)
                stack.append(a | b)
            elif op == "intersect" and not args:
                b, a = pop(line), pop(line)
                stack.append(a & b)
            elif op == "complement" and not args:
                stack.append(~pop(line))
            else:
                raise ParseError(f"unknown or malformed directive {' '.join(line)!r}")
        except (SetError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"directive {' '.join(line)!r}: {exc}") from None
    if len(stack) != 1:
        raise ParseError(f"set definition leaves {len(stack)} sets on the stack, expected 1")
    return stack[0]


def parse_cylinder(coords_tok: str, patterns_tok: str) -> Cylinder:
    coords = _int_list(coords_tok, ["cylinder", coords_tok, patterns_tok])
    pats = []
    for p in patterns_tok.split("|"):
        try:
            pats.append(tuple(int(s) for s in p.split(".")))
        except ValueError:
            raise ParseError(f"malformed cylinder pattern {p!r}") from None
    try:
        return Cylinder(tuple(coords), frozenset(pats))
    except MDSError as exc:
        raise ParseError(str(exc)) from None


def parse_event(text: str, system):
    """Event for ``system`` from the event format (see module docstring)."""
    lines = list(_directives(text))
    if not lines:
        raise ParseError("empty event definition")
    head = lines[0]
    if head[0] == "cylinder":
        if len(lines) != 1 or len(head) != 3:
            raise ParseError("a cylinder event is a single 'cylinder coords patterns' line")
        return system.event(parse_cylinder(head[1], head[2]))
    if head[0] == "states":
        if len(lines) != 1 or len(head) > 2:
            raise ParseError("a states event is a single 'states s1,s2,...' line")
        return system.event(_int_list(head[1], head) if len(head) == 2 else [])
    if head[0] == "all" and len(lines) == 1 and hasattr(system, "n"):
        return EventSet.everything(system.n)
    if getattr(system, "kind", None) != "translation":
        raise ParseError("set-definition events are only meaningful for translation systems")
    s = parse_set(text, system.field, system.params["m"])
    return system.event(s.indices())

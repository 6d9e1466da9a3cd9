"""Group-spec and gens-spec mini language.

    spec    := family [":" params]
    params  := int (":" int)*                  cyclic:12, elemab:2:3
             | operand "," operand             product:cyclic:2,(product:q8,cyclic:3)
             | path                            table:fixtures/a4.tbl
    operand := "(" spec ")" | spec

    gens    := ("standard" | "all-nonid" | "random:" k ":" seed | "file:" path)
               ("+symmetric" | "+conj-close")*

A nested product in the left operand binds to the first comma, so
``product:product:a,b,c`` reads as ``((a, b), c)``; the printer always
parenthesises nested products.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

FAMILIES = ("cyclic", "dihedral", "sym", "q8", "elemab", "sl2", "wreath", "product", "table")
ARITY = {"cyclic": 1, "dihedral": 1, "sym": 1, "q8": 0, "elemab": 2, "sl2": 1, "wreath": 1}
GENS_KINDS = ("standard", "all-nonid", "random", "file")
MODIFIERS = ("symmetric", "conj-close")


@dataclass(frozen=True)
class GensSpec:
    kind: str
    params: tuple = ()
    modifiers: tuple = ()

    def __str__(self):
        head = self.kind
        if self.kind == "random":
            head = f"random:{self.params[0]}:{self.params[1]}"
        elif self.kind == "file":
            head = f"file:{self.params[0]}"
        return head + "".join("+" + m for m in self.modifiers)


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: tuple = ()
    gens: GensSpec | None = None

    def __str__(self):
        if self.family == "q8":
            return "q8"
        if self.family == "product":
            return "product:" + ",".join(
                f"({p})" if p.family == "product" else str(p) for p in self.params)
        return self.family + ":" + ":".join(str(p) for p in self.params)


def _offset(text, i):
    return len(text[:i].encode())


class _Parser:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def error(self, msg, at=None):
        return ParseError(msg, _offset(self.text, self.i if at is None else at))

    def peek(self):
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.i += 1

    def word(self):
        start = self.i
        while self.peek() and (self.peek().isalnum() or self.peek() in "-_"):
            self.i += 1
        return self.text[start:self.i], start

    def integer(self):
        start = self.i
        while self.peek().isdigit():
            self.i += 1
        if start == self.i:
            raise self.error("expected a non-negative integer")
        if self.peek().isalpha():
            raise self.error("expected a non-negative integer", at=start)
        return int(self.text[start:self.i])

    def spec(self):
        name, start = self.word()
        if name not in FAMILIES:
            raise self.error(f"unknown family {name!r}", at=start)
        if name == "q8":
            if self.peek() == ":":
                raise self.error("q8 takes no parameters")
            return GroupSpec("q8")
        self.expect(":")
        if name == "product":
            left = self.operand()
            self.expect(",")
            right = self.operand()
            return GroupSpec("product", (left, right))
        if name == "table":
            start = self.i
            while self.peek() and self.peek() not in ",)":
                self.i += 1
            if start == self.i:
                raise self.error("table needs a path")
            return GroupSpec("table", (self.text[start:self.i],))
        params = [self.integer()]
        while self.peek() == ":":
            self.i += 1
            params.append(self.integer())
        if len(params) != ARITY[name]:
            raise self.error(f"{name} takes {ARITY[name]} parameter(s), got {len(params)}", at=start)
        return GroupSpec(name, tuple(params))

    def operand(self):
        if self.peek() == "(":
            self.i += 1
            inner = self.spec()
            self.expect(")")
            return inner
        return self.spec()


def parse_group_spec(text: str) -> GroupSpec:
    p = _Parser(text.strip())
    spec = p.spec()
    if p.i != len(p.text):
        raise p.error("unexpected trailing text")
    return spec


def parse_gens_spec(text: str) -> GensSpec:
    text = text.strip()
    head, *mods = text.split("+")
    for m in mods:
        if m not in MODIFIERS:
            raise ParseError(f"unknown modifier {m!r}", _offset(text, text.index("+" + m) + 1))
    kind, _, rest = head.partition(":")
    if kind in ("standard", "all-nonid"):
        if rest:
            raise ParseError(f"{kind} takes no parameters", _offset(text, len(kind)))
        return GensSpec(kind, (), tuple(mods))
    if kind == "file":
        if not rest:
            raise ParseError("file needs a path", _offset(text, len(head)))
        return GensSpec("file", (rest,), tuple(mods))
    if kind == "random":
        parts = rest.split(":")
        pos = len("random:")
        values = []
        for part in parts:
            if not part.isdigit():
                raise ParseError("expected a non-negative integer", _offset(text, pos))
            values.append(int(part))
            pos += len(part) + 1
        if len(values) != 2 or values[0] < 1:
            raise ParseError("random takes k >= 1 and a seed", _offset(text, len("random:")))
        return GensSpec("random", tuple(values), tuple(mods))
    raise ParseError(f"unknown gens kind {kind!r}", 0)


def parse_corpus(text: str) -> list:
    """Corpus file: one group-spec and an optional gens-spec per line, ``#`` comments."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) > 2:
            raise ParseError(f"line {lineno}: expected 'group-spec [gens-spec]'")
        try:
            spec = parse_group_spec(fields[0])
            gens = parse_gens_spec(fields[1]) if len(fields) == 2 else None
        except ParseError as exc:
            err = ParseError(f"line {lineno}: {exc}")
            err.offset = exc.offset
            raise err from None
        entries.append(GroupSpec(spec.family, spec.params, gens))
    return entries

"""Presentation files and bracket expressions.

A presentation file is line oriented, ``#`` starts a comment::

    alphabet: x1 > x2
    kind: leibniz
    table: [x1,x1] = x2
    subalgebra: x2
    derivation d: d(x2) = x2
    antiderivation d': d'(x2) = 0
    relation: [x1,[x1,x2]] - 1/2*[x2,x2]

Brackets nest freely; ``[a -| b]`` and ``[a |- b]`` are the two di-products and a
trailing ``'`` marks a dotted letter.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pyparsing as pp

from .errors import PresentationSyntaxError
from .freealg import Polynomial, bracket, format_fraction, to_lyndon_basis
from .hnn import ANTI_DERIVATION, DERIVATION, DerivationSpec, SubalgebraSpec
from .models import Coords, MapSection, MapValue, PresentationFile, TableEntry
from .replication import DASHV, VDASH, DiNode, DiRelation, DiTerm
from .tables import StructureTable, vector
from .words import DOT, Alphabet

NAME_RE = r"[A-Za-z_][A-Za-z0-9_]*'?"
KEYWORDS = ("alphabet", "kind", "table", "subalgebra", "derivation", "antiderivation", "relation")

_HEADER = re.compile(r"^\s*(\w+)\b([^:]*):(.*)$")
_MAP_ENTRY = re.compile(rf"^\s*({NAME_RE})\s*\((.*)\)\s*=(.*)$")


@dataclass(frozen=True)
class Name:
    text: str
    loc: int


@dataclass(frozen=True)
class BracketExpr:
    op: str
    left: "SumExpr"
    right: "SumExpr"
    loc: int


@dataclass(frozen=True)
class Term:
    coef: Fraction
    atom: Union[Name, BracketExpr, "SumExpr", None]  # None for a bare number


@dataclass(frozen=True)
class SumExpr:
    terms: Tuple[Term, ...]
    loc: int


Node = Union[Name, BracketExpr, SumExpr]

_GRAMMAR: Dict[str, pp.ParserElement] = {}


def _make_sum(s: str, loc: int, toks: pp.ParseResults) -> SumExpr:
    terms = []
    items = list(toks)
    for sign, group in zip(items[0::2], items[1::2]):
        parts = list(group)
        if len(parts) == 1:
            coef, atom = Fraction(parts[0]), None
        else:
            coef, atom = Fraction(parts[0]), parts[1]
        terms.append(Term(-coef if sign == "-" else coef, atom))
    return SumExpr(tuple(terms), loc)


def _grammar() -> pp.ParserElement:
    if "expr" in _GRAMMAR:
        return _GRAMMAR["expr"]
    number = pp.Regex(r"\d+(/\d+)?")
    name = pp.Regex(NAME_RE).set_parse_action(lambda s, loc, t: Name(t[0], loc))
    expr = pp.Forward()
    op = pp.Literal(DASHV) | pp.Literal(VDASH) | pp.Literal(",")
    brk = (pp.Suppress("[") + expr + op + expr + pp.Suppress("]")).set_parse_action(
        lambda s, loc, t: BracketExpr(t[1], t[0], t[2], loc)
    )
    atom = brk | name | (pp.Suppress("(") + expr + pp.Suppress(")"))
    term = pp.Group(pp.Optional(number, "1") + pp.Optional(pp.Suppress("*")) + atom) | pp.Group(number)
    sign = pp.one_of("+ -")
    expr <<= (pp.Optional(sign, "+") + term + pp.ZeroOrMore(sign + term)).set_parse_action(_make_sum)
    _GRAMMAR["expr"] = expr
    return expr


def parse_tree(text: str, line: Optional[int] = None, offset: int = 0) -> SumExpr:
    try:
        return _grammar().parse_string(text, parse_all=True)[0]
    except pp.ParseException as e:
        raise PresentationSyntaxError(f"cannot parse {text.strip()!r}: {e.msg}", line, offset + e.col) from None


# -- evaluation -----------------------------------------------------------------------------


def _has_di(node: Optional[Node]) -> bool:
    if isinstance(node, SumExpr):
        return any(_has_di(t.atom) for t in node.terms)
    if isinstance(node, BracketExpr):
        return node.op != "," or _has_di(node.left) or _has_di(node.right)
    return False


class _Evaluator:
    def __init__(self, alphabet: Alphabet, line: Optional[int], offset: int):
        self.alphabet = alphabet
        self.line = line
        self.offset = offset

    def error(self, message: str, loc: int) -> PresentationSyntaxError:
        return PresentationSyntaxError(message, self.line, self.offset + loc + 1)

    def constant(self, term: Term, loc: int) -> None:
        if term.coef:
            raise self.error(f"constant term {format_fraction(term.coef)} in a homogeneous expression", loc)

    def lie(self, node: Node) -> Polynomial:
        if isinstance(node, Name):
            if node.text not in self.alphabet:
                raise self.error(f"undeclared letter {node.text!r}", node.loc)
            return Polynomial.letter(self.alphabet, self.alphabet.rank(node.text))
        if isinstance(node, BracketExpr):
            return bracket(self.lie(node.left), self.lie(node.right))
        out = Polynomial.zero(self.alphabet)
        for term in node.terms:
            if term.atom is None:
                self.constant(term, node.loc)
            else:
                out = out + self.lie(term.atom).scale(term.coef)
        return out

    def di(self, node: Node) -> List[Tuple[Fraction, DiTerm]]:
        if isinstance(node, Name):
            if node.text.endswith(DOT) or node.text not in self.alphabet:
                raise self.error(f"undeclared generator {node.text!r}", node.loc)
            return [(Fraction(1), node.text)]
        if isinstance(node, BracketExpr):
            return [
                (a * b, DiNode(node.op, u, v))
                for a, u in self.di(node.left)
                for b, v in self.di(node.right)
            ]
        out: List[Tuple[Fraction, DiTerm]] = []
        for term in node.terms:
            if term.atom is None:
                self.constant(term, node.loc)
            else:
                out += [(term.coef * c, t) for c, t in self.di(term.atom)]
        return out

    def coords(self, node: SumExpr, names: List[str]) -> Coords:
        acc: Dict[str, Fraction] = {}
        for term in node.terms:
            if term.atom is None:
                self.constant(term, node.loc)
                continue
            if isinstance(term.atom, SumExpr):
                for k, v in self.coords(term.atom, names).items():
                    acc[k] = acc.get(k, Fraction(0)) + term.coef * Fraction(v)
                continue
            if not isinstance(term.atom, Name):
                raise self.error("expected a linear combination of basis letters", node.loc)
            if term.atom.text not in names:
                raise self.error(f"undeclared letter {term.atom.text!r}", term.atom.loc)
            acc[term.atom.text] = acc.get(term.atom.text, Fraction(0)) + term.coef
        return {k: str(v) for k, v in acc.items() if v}


def _combine(terms: List[Tuple[Fraction, DiTerm]]) -> DiRelation:
    acc: Dict[DiTerm, Fraction] = {}
    for c, t in terms:
        acc[t] = acc.get(t, Fraction(0)) + c
    return DiRelation(tuple((c, t) for t, c in acc.items() if c))


def parse_expression(
    text: str, alphabet: Alphabet, line: Optional[int] = None, offset: int = 0
) -> Union[Polynomial, DiRelation]:
    """A Lie polynomial, or a di-relation when any ``-|`` / ``|-`` bracket occurs."""
    tree = parse_tree(text, line, offset)
    ev = _Evaluator(alphabet, line, offset)
    if _has_di(tree):
        return _combine(ev.di(tree))
    return ev.lie(tree)


# -- presentation files ---------------------------------------------------------------------


def _split_top(text: str) -> List[Tuple[str, int]]:
    """Comma separated pieces outside brackets, with their offsets."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append((text[start:i], start))
            start = i + 1
    out.append((text[start:], start))
    return out


class _FileParser:
    def __init__(self) -> None:
        self.alphabet: Optional[List[str]] = None
        self.kind = "leibniz"
        self.table: List[TableEntry] = []
        self.seen: Dict[Tuple[str, str], int] = {}
        self.subalgebra: Optional[List[Coords]] = None
        self.maps: Dict[str, Optional[MapSection]] = {"derivation": None, "antiderivation": None}
        self.relations: List[str] = []

    def letters(self, lineno: int) -> Alphabet:
        if self.alphabet is None:
            raise PresentationSyntaxError("the alphabet must be declared first", lineno, 1)
        return Alphabet.from_names(self.alphabet)

    def base_names(self) -> List[str]:
        return [n for n in self.alphabet or [] if not n.endswith(DOT)]

    def vector(self, text: str, lineno: int, offset: int) -> Coords:
        tree = parse_tree(text, lineno, offset)
        return _Evaluator(self.letters(lineno), lineno, offset).coords(tree, self.base_names())

    def line(self, raw: str, lineno: int) -> None:
        text = raw.split("#", 1)[0]
        if not text.strip():
            return
        m = _HEADER.match(text)
        if not m or m.group(1) not in KEYWORDS:
            raise PresentationSyntaxError(
                f"expected one of {', '.join(KEYWORDS)} followed by ':'", lineno, len(text) - len(text.lstrip()) + 1
            )
        key, arg, body = m.group(1), m.group(2).strip(), m.group(3)
        offset = m.start(3)
        if key in ("derivation", "antiderivation"):
            self.map_entry(key, arg, body, lineno, offset)
            return
        if arg:
            raise PresentationSyntaxError(f"unexpected {arg!r} after {key!r}", lineno, m.start(2) + 1)
        getattr(self, f"on_{key}")(body, lineno, offset)

    def on_alphabet(self, body: str, lineno: int, offset: int) -> None:
        if self.alphabet is not None:
            raise PresentationSyntaxError("alphabet declared twice", lineno, 1)
        names = [n.strip() for n in body.split(">")]
        for n in names:
            if not re.fullmatch(NAME_RE, n):
                raise PresentationSyntaxError(f"invalid letter name {n!r}", lineno, offset + body.find(n) + 1)
            if names.count(n) > 1:
                raise PresentationSyntaxError(f"letter {n!r} declared twice", lineno, offset + body.find(n) + 1)
        self.alphabet = names

    def on_kind(self, body: str, lineno: int, offset: int) -> None:
        value = body.strip()
        if value not in ("lie", "leibniz"):
            raise PresentationSyntaxError(f"kind must be 'lie' or 'leibniz', got {value!r}", lineno, offset + 1)
        self.kind = value

    def on_table(self, body: str, lineno: int, offset: int) -> None:
        self.letters(lineno)
        if "=" not in body:
            raise PresentationSyntaxError("expected '[x,y] = value'", lineno, offset + 1)
        lhs, rhs = body.split("=", 1)
        tree = parse_tree(lhs, lineno, offset)
        pair = None
        if len(tree.terms) == 1 and tree.terms[0].coef == 1:
            atom = tree.terms[0].atom
            if isinstance(atom, BracketExpr) and atom.op == ",":
                left, right = atom.left.terms, atom.right.terms
                if len(left) == 1 and len(right) == 1 and left[0].coef == 1 and right[0].coef == 1:
                    x, y = left[0].atom, right[0].atom
                    if isinstance(x, Name) and isinstance(y, Name):
                        pair = (x, y)
        if pair is None:
            raise PresentationSyntaxError("table entries must have the form [x,y] = value", lineno, offset + 1)
        names = self.base_names()
        for side in pair:
            if side.text not in names:
                raise PresentationSyntaxError(f"undeclared letter {side.text!r}", lineno, offset + side.loc + 1)
        key = (pair[0].text, pair[1].text)
        if key in self.seen:
            raise PresentationSyntaxError(
                f"duplicate table entry [{key[0]},{key[1]}] (first given on line {self.seen[key]})", lineno, offset + 1
            )
        self.seen[key] = lineno
        value = self.vector(rhs, lineno, offset + len(lhs) + 1)
        self.table.append(TableEntry(left=key[0], right=key[1], value=value))

    def on_subalgebra(self, body: str, lineno: int, offset: int) -> None:
        gens = self.subalgebra if self.subalgebra is not None else []
        if body.strip():
            for piece, at in _split_top(body):
                gens.append(self.vector(piece, lineno, offset + at))
        self.subalgebra = gens

    def on_relation(self, body: str, lineno: int, offset: int) -> None:
        parse_expression(body, self.letters(lineno), lineno, offset)
        self.relations.append(body.strip())

    def map_entry(self, key: str, name: str, body: str, lineno: int, offset: int) -> None:
        if not re.fullmatch(NAME_RE, name):
            raise PresentationSyntaxError(f"{key} needs a name, as in '{key} d: d(x) = y'", lineno, 1)
        section = self.maps[key]
        if section is None:
            section = self.maps[key] = MapSection(name=name)
        elif section.name != name:
            raise PresentationSyntaxError(f"{key} is already named {section.name!r}", lineno, 1)
        if not body.strip():
            return
        m = _MAP_ENTRY.match(body)
        if not m or m.group(1) != name:
            raise PresentationSyntaxError(f"expected '{name}(argument) = image'", lineno, offset + 1)
        arg = self.vector(m.group(2), lineno, offset + m.start(2))
        image = self.vector(m.group(3), lineno, offset + m.start(3))
        section.values.append(MapValue(argument=arg, image=image))

    def result(self) -> PresentationFile:
        if self.alphabet is None:
            raise PresentationSyntaxError("no alphabet declared")
        return PresentationFile(
            alphabet=self.alphabet,
            kind=self.kind,
            table=self.table,
            subalgebra=self.subalgebra,
            derivation=self.maps["derivation"],
            antiderivation=self.maps["antiderivation"],
            relations=self.relations,
        )


def parse_presentation(text: str) -> PresentationFile:
    parser = _FileParser()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parser.line(raw, lineno)
    return parser.result()


def format_vector(coords: Coords, names: List[str]) -> str:
    parts = []
    for n in names:
        c = Fraction(coords.get(n, 0))
        if not c:
            continue
        mag = abs(c)
        body = n if mag == 1 else f"{format_fraction(mag)}*{n}"
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"{'-' if c < 0 else '+'} {body}")
    return " ".join(parts) or "0"


def format_presentation(f: PresentationFile) -> str:
    names = f.alphabet
    out = [f"alphabet: {' > '.join(names)}", f"kind: {f.kind}"]
    for e in f.table:
        out.append(f"table: [{e.left},{e.right}] = {format_vector(e.value, names)}")
    if f.subalgebra is not None:
        out.append(("subalgebra: " + ", ".join(format_vector(g, names) for g in f.subalgebra)).rstrip())
    for key, section in (("derivation", f.derivation), ("antiderivation", f.antiderivation)):
        if section is None:
            continue
        if not section.values:
            out.append(f"{key} {section.name}:")
        for v in section.values:
            out.append(
                f"{key} {section.name}: {section.name}({format_vector(v.argument, names)}) = "
                f"{format_vector(v.image, names)}"
            )
    out += [f"relation: {r}" for r in f.relations]
    return "\n".join(out) + "\n"


def format_lie(f: Polynomial) -> str:
    """A Lie polynomial as a combination of standard bracketings, in parser syntax."""
    parts = []
    for c, tree in to_lyndon_basis(f):
        body = f.alphabet.format_tree(tree)
        mag = abs(c)
        if mag != 1:
            body = f"{format_fraction(mag)}*{body}"
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"{'-' if c < 0 else '+'} {body}")
    return " ".join(parts) or "0"


# -- conversions ----------------------------------------------------------------------------


def letters(f: PresentationFile) -> Alphabet:
    return Alphabet.from_names(f.alphabet)


def to_vector(coords: Coords, names: List[str]) -> np.ndarray:
    return vector(Fraction(coords.get(n, 0)) for n in names)


def to_table(f: PresentationFile) -> StructureTable:
    """Omitted entries are 0; for ``kind: lie`` a missing ``[y,x]`` is ``-[x,y]``."""
    names = [n for n in f.alphabet if not n.endswith(DOT)]
    entries: Dict[Tuple[int, int], np.ndarray] = {}
    for e in f.table:
        entries[(names.index(e.left), names.index(e.right))] = to_vector(e.value, names)
    if f.kind == "lie":
        for (i, j), v in list(entries.items()):
            entries.setdefault((j, i), -v)
    return StructureTable.from_entries(names, entries)


def to_subalgebra(f: PresentationFile) -> SubalgebraSpec:
    names = [n for n in f.alphabet if not n.endswith(DOT)]
    return SubalgebraSpec([to_vector(g, names) for g in f.subalgebra or []])


def to_map(f: PresentationFile, kind: str) -> DerivationSpec:
    names = [n for n in f.alphabet if not n.endswith(DOT)]
    section = f.derivation if kind == DERIVATION else f.antiderivation
    if section is None:
        return DerivationSpec.zero(kind, "d" if kind == DERIVATION else "d'")
    values = [(to_vector(v.argument, names), to_vector(v.image, names)) for v in section.values]
    return DerivationSpec(kind, values, section.name)


def to_maps(f: PresentationFile) -> Tuple[DerivationSpec, DerivationSpec]:
    return to_map(f, DERIVATION), to_map(f, ANTI_DERIVATION)


def to_relations(f: PresentationFile) -> List[Union[Polynomial, DiRelation]]:
    alphabet = letters(f)
    return [parse_expression(r, alphabet) for r in f.relations]


def table_relations(f: PresentationFile) -> List[DiRelation]:
    """``[x -| y] - mu(x, y)`` for every pair, the di-Lie presentation of a Leibniz table."""
    table = to_table(f)
    out = []
    for i, x in enumerate(table.names):
        for j, y in enumerate(table.names):
            terms: List[Tuple[Fraction, DiTerm]] = [(Fraction(1), DiNode(DASHV, x, y))]
            terms += [(-c, table.names[k]) for k, c in enumerate(table.c[i, j]) if c]
            out.append(DiRelation(tuple(terms)))
    return out

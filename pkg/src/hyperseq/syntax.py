"""Formulas, sequents and hypersequents: data model, parsing, printing.

The kernel language is exactly: bottom, atoms, negation, conjunction, box.
Disjunction, implication and diamond are input/output sugar and never
appear in a stored formula tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator


class ParseError(ValueError):
    """Raised on malformed formula/sequent text; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SortMismatch(ValueError):
    """Concatenation of sequents with different sorts."""


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    __slots__ = ()

    def __repr__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    __slots__ = ()


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class Neg(Formula):
    child: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Box(Formula):
    child: Formula


BOT = Bottom()


def disj(a: Formula, b: Formula) -> Formula:
    """A or B, expanded: not(not A and not B)."""
    return Neg(And(Neg(a), Neg(b)))


def impl(a: Formula, b: Formula) -> Formula:
    """A implies B, expanded: not(A and not B)."""
    return Neg(And(a, Neg(b)))


def diamond(a: Formula) -> Formula:
    """Possibly A, expanded: not box not A."""
    return Neg(Box(Neg(a)))


def big_and(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is not-bottom."""
    items = list(formulas)
    if not items:
        return Neg(BOT)
    acc = items[0]
    for f in items[1:]:
        acc = And(acc, f)
    return acc


def big_or(formulas: Iterable[Formula]) -> Formula:
    """Left-nested (sugared) disjunction; the empty disjunction is bottom."""
    items = list(formulas)
    if not items:
        return BOT
    acc = items[0]
    for f in items[1:]:
        acc = disj(acc, f)
    return acc


def degree(f: Formula) -> int:
    """Number of connective and modality nodes (the cut-elimination measure)."""
    if isinstance(f, (Bottom, Atom)):
        return 0
    if isinstance(f, (Neg, Box)):
        return 1 + degree(f.child)
    if isinstance(f, And):
        return 1 + degree(f.left) + degree(f.right)
    raise TypeError(f"not a formula: {f!r}")


def atoms_of(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Bottom):
        return set()
    if isinstance(f, (Neg, Box)):
        return atoms_of(f.child)
    return atoms_of(f.left) | atoms_of(f.right)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (Neg, Box)):
        yield from subformulas(f.child)
    elif isinstance(f, And):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


# ---------------------------------------------------------------------------
# Printing.  Precedence: ~ / box / dia  >  &  >  |  >  >  (> right-assoc).
# The printer re-sugars the patterns the parser expands, so that
# parse_formula(print_formula(f)) == f.

_PREC_IMP = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_UNARY = 4


def _sugar_view(f: Formula) -> tuple[str, tuple[Formula, ...]]:
    """Classify a node for printing, detecting | , > and dia patterns."""
    if isinstance(f, Neg):
        c = f.child
        if isinstance(c, And):
            if isinstance(c.left, Neg) and isinstance(c.right, Neg):
                return "or", (c.left.child, c.right.child)
            if isinstance(c.right, Neg):
                return "imp", (c.left, c.right.child)
        if isinstance(c, Box) and isinstance(c.child, Neg):
            return "dia", (c.child.child,)
        return "neg", (c,)
    if isinstance(f, And):
        return "and", (f.left, f.right)
    if isinstance(f, Box):
        return "box", (f.child,)
    if isinstance(f, Atom):
        return "atom", ()
    if isinstance(f, Bottom):
        return "bot", ()
    raise TypeError(f"not a formula: {f!r}")


def print_formula(f: Formula) -> str:
    def go(g: Formula, prec: int) -> str:
        kind, parts = _sugar_view(g)
        if kind == "atom":
            return g.name  # type: ignore[attr-defined]
        if kind == "bot":
            return "bot"
        if kind == "neg":
            return "~" + go(parts[0], _PREC_UNARY)
        if kind == "box":
            return "box " + go(parts[0], _PREC_UNARY)
        if kind == "dia":
            return "dia " + go(parts[0], _PREC_UNARY)
        if kind == "and":
            s = f"{go(parts[0], _PREC_AND)} & {go(parts[1], _PREC_AND + 1)}"
            return f"({s})" if prec > _PREC_AND else s
        if kind == "or":
            s = f"{go(parts[0], _PREC_OR)} | {go(parts[1], _PREC_OR + 1)}"
            return f"({s})" if prec > _PREC_OR else s
        # imp: right associative
        s = f"{go(parts[0], _PREC_IMP + 1)} > {go(parts[1], _PREC_IMP)}"
        return f"({s})" if prec > _PREC_IMP else s

    return go(f, 0)


# ---------------------------------------------------------------------------
# Parsing

_ALIASES = {
    "⇒": "=>",
    "→": "->",
    "∧": "&",
    "∨": "|",
    "⊃": ">",
    "¬": "~",
    "□": " box ",
    "◇": " dia ",
    "⊥": " bot ",
}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<hsep>\|\|)|(?P<seq>=>|->)|(?P<op>[&|>~(),])|(?P<word>[A-Za-z0-9_]+))"
)

_KEYWORDS = {"bot", "box", "dia"}


def _normalize(text: str) -> str:
    for uni, ascii_ in _ALIASES.items():
        text = text.replace(uni, ascii_)
    return text


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)  # type: ignore[arg-type]
        tokens.append((kind, value, m.start(kind)))  # type: ignore[arg-type]
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = _normalize(text)
        self.tokens = _tokenize(self.text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_end(self) -> None:
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {value!r}", pos)

    # formula := imp
    # imp := or ('>' imp)?
    # or := and ('|' and)*
    # and := unary ('&' unary)*
    # unary := '~' unary | 'box' unary | 'dia' unary | atom | 'bot' | '(' formula ')'
    def formula(self) -> Formula:
        return self._imp()

    def _imp(self) -> Formula:
        left = self._or()
        kind, value, _ = self.peek()
        if kind == "op" and value == ">":
            self.next()
            return impl(left, self._imp())
        return left

    def _or(self) -> Formula:
        acc = self._and()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "|":
                self.next()
                acc = disj(acc, self._and())
            else:
                return acc

    def _and(self) -> Formula:
        acc = self._unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "&":
                self.next()
                acc = And(acc, self._unary())
            else:
                return acc

    def _unary(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "op" and value == "~":
            return Neg(self._unary())
        if kind == "word" and value == "box":
            return Box(self._unary())
        if kind == "word" and value == "dia":
            return diamond(self._unary())
        if kind == "word" and value == "bot":
            return BOT
        if kind == "word":
            return Atom(value)
        if kind == "op" and value == "(":
            f = self.formula()
            k2, v2, p2 = self.next()
            if not (k2 == "op" and v2 == ")"):
                raise ParseError("expected ')'", p2)
            return f
        raise ParseError(f"expected a formula, found {value or kind!r}", pos)

    def formula_list(self, stop_kinds: tuple[str, ...]) -> list[Formula]:
        items: list[Formula] = []
        kind, value, _ = self.peek()
        if kind in stop_kinds or (kind == "end"):
            return items
        items.append(self.formula())
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == ",":
                self.next()
                items.append(self.formula())
            else:
                return items

    def sequent(self) -> "Sequent":
        ant = self.formula_list(stop_kinds=("seq",))
        kind, value, pos = self.next()
        if kind != "seq":
            raise ParseError("expected '=>' or '->'", pos)
        sort = Sort.MODAL if value == "=>" else Sort.PLAIN
        suc = self.formula_list(stop_kinds=("hsep",))
        return Sequent(sort, tuple(ant), tuple(suc))

    def hypersequent(self) -> "Hypersequent":
        seqs = [self.sequent()]
        while True:
            kind, _, _ = self.peek()
            if kind == "hsep":
                self.next()
                seqs.append(self.sequent())
            else:
                return Hypersequent(tuple(seqs))


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.expect_end()
    return f


def parse_sequent(text: str) -> "Sequent":
    p = _Parser(text)
    s = p.sequent()
    p.expect_end()
    return s


def parse_hypersequent(text: str) -> "Hypersequent":
    p = _Parser(text)
    h = p.hypersequent()
    p.expect_end()
    return h


# ---------------------------------------------------------------------------
# Sequents and hypersequents


class Sort(Enum):
    MODAL = "=>"
    PLAIN = "->"

    def __repr__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Sequent:
    """A sorted two-sided sequent; both sides are formula multisets.

    The tuples keep insertion order for deterministic addressing; equality
    of multisets is up to reordering (see `same_sequent`).
    """

    sort: Sort
    ant: tuple[Formula, ...] = ()
    suc: tuple[Formula, ...] = ()

    def __repr__(self) -> str:
        return print_sequent(self)

    def key(self) -> tuple:
        return (
            self.sort.value,
            tuple(sorted(map(print_formula, self.ant))),
            tuple(sorted(map(print_formula, self.suc))),
        )

    def is_empty(self) -> bool:
        return not self.ant and not self.suc

    def with_sort(self, sort: Sort) -> "Sequent":
        return Sequent(sort, self.ant, self.suc)


@dataclass(frozen=True)
class Hypersequent:
    seqs: tuple[Sequent, ...]

    def __post_init__(self) -> None:
        if not self.seqs:
            raise ValueError("hypersequents are nonempty")

    def __repr__(self) -> str:
        return print_hypersequent(self)

    def __len__(self) -> int:
        return len(self.seqs)

    def __getitem__(self, i: int) -> Sequent:
        return self.seqs[i]

    def __iter__(self) -> Iterator[Sequent]:
        return iter(self.seqs)

    def key(self) -> tuple:
        return tuple(sorted(s.key() for s in self.seqs))

    def replace(self, i: int, s: Sequent) -> "Hypersequent":
        seqs = list(self.seqs)
        seqs[i] = s
        return Hypersequent(tuple(seqs))

    def drop(self, i: int) -> "Hypersequent":
        seqs = list(self.seqs)
        del seqs[i]
        return Hypersequent(tuple(seqs))

    def append(self, *new: Sequent) -> "Hypersequent":
        return Hypersequent(self.seqs + tuple(new))


def hs(*seqs: Sequent) -> Hypersequent:
    return Hypersequent(tuple(seqs))


def seq(sort: Sort, ant: Iterable[Formula] = (), suc: Iterable[Formula] = ()) -> Sequent:
    return Sequent(sort, tuple(ant), tuple(suc))


def same_sequent(a: Sequent, b: Sequent) -> bool:
    return a.key() == b.key()


def same_hypersequent(a: Hypersequent, b: Hypersequent) -> bool:
    """Equality up to permutation of sequents (and of formulas within sides)."""
    return a.key() == b.key()


def print_sequent(s: Sequent) -> str:
    ant = ", ".join(print_formula(f) for f in s.ant)
    suc = ", ".join(print_formula(f) for f in s.suc)
    arrow = s.sort.value
    if ant and suc:
        return f"{ant} {arrow} {suc}"
    if ant:
        return f"{ant} {arrow}"
    if suc:
        return f"{arrow} {suc}"
    return arrow


def print_hypersequent(h: Hypersequent) -> str:
    return " || ".join(print_sequent(s) for s in h.seqs)


# ---------------------------------------------------------------------------
# Formula images and concatenation


def formula_image(s: Sequent) -> Formula:
    """The formula a sequent denotes; modalized sequents get one box."""
    body = impl(big_and(s.ant), big_or(s.suc))
    if s.sort is Sort.MODAL:
        return Box(body)
    return body


def hyper_image(h: Hypersequent) -> Formula:
    acc = formula_image(h.seqs[0])
    for s in h.seqs[1:]:
        acc = disj(acc, formula_image(s))
    return acc


def concat_sequents(a: Sequent, b: Sequent) -> Sequent:
    if a.sort is not b.sort:
        raise SortMismatch(f"cannot concatenate {a!r} with {b!r}")
    return Sequent(a.sort, a.ant + b.ant, a.suc + b.suc)


def concat_hyper(h: Hypersequent) -> Sequent:
    acc = h.seqs[0]
    for s in h.seqs[1:]:
        acc = concat_sequents(acc, s)
    return acc

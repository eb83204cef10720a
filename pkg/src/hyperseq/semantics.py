"""Finite Kripke models and bounded frame-class validity.

This is the desk-scale soundness oracle: it enumerates every frame up to a
small world bound, filters by the frame conditions of the system at hand,
and evaluates formula images over all valuations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .calculus import SystemId
from .syntax import And, Atom, Bottom, Box, Formula, Neg, atoms_of, print_formula


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    relation: frozenset[tuple[int, int]]
    valuation: frozenset[tuple[str, int]]  # (atom, world) pairs that are true

    def successors(self, w: int) -> list[int]:
        return [v for (u, v) in self.relation if u == w]

    def holds(self, atom: str, w: int) -> bool:
        return (atom, w) in self.valuation

    def describe(self) -> str:
        rel = sorted(self.relation)
        atoms = sorted({a for a, _ in self.valuation})
        lines = [
            f"worlds: {list(range(self.worlds))}",
            f"relation: {rel}",
        ]
        for a in atoms:
            true_at = sorted(w for (x, w) in self.valuation if x == a)
            lines.append(f"valuation {a}: true at {true_at}")
        if not atoms:
            lines.append("valuation: (all atoms false)")
        return "\n".join(lines)


CONDITIONS = ("serial", "reflexive", "transitive", "symmetric", "euclidean")


@dataclass(frozen=True)
class FrameClass:
    conditions: frozenset[str]

    def __post_init__(self) -> None:
        unknown = self.conditions - set(CONDITIONS)
        if unknown:
            raise ValueError(f"unknown frame conditions: {sorted(unknown)}")

    def admits(self, worlds: int, relation: frozenset[tuple[int, int]]) -> bool:
        rel = relation
        rng = range(worlds)
        if "serial" in self.conditions:
            if any(all((w, v) not in rel for v in rng) for w in rng):
                return False
        if "reflexive" in self.conditions:
            if any((w, w) not in rel for w in rng):
                return False
        if "transitive" in self.conditions:
            for (a, b) in rel:
                for (c, d) in rel:
                    if b == c and (a, d) not in rel:
                        return False
        if "symmetric" in self.conditions:
            if any((b, a) not in rel for (a, b) in rel):
                return False
        if "euclidean" in self.conditions:
            # forall x y z: xRy and xRz imply yRz
            for (a, b) in rel:
                for (c, d) in rel:
                    if a == c and (b, d) not in rel:
                        return False
        return True


_FRAME_CLASSES = {
    SystemId.K: frozenset(),
    SystemId.D: frozenset({"serial"}),
    SystemId.T: frozenset({"reflexive"}),
    SystemId.K4: frozenset({"transitive"}),
    SystemId.KB: frozenset({"symmetric"}),
    SystemId.K5: frozenset({"euclidean"}),
    SystemId.B: frozenset({"reflexive", "symmetric"}),
    SystemId.K45: frozenset({"transitive", "euclidean"}),
    SystemId.KD4: frozenset({"serial", "transitive"}),
    SystemId.KD5: frozenset({"serial", "euclidean"}),
    SystemId.KDB: frozenset({"serial", "symmetric"}),
    SystemId.KB5: frozenset({"symmetric", "euclidean"}),
    SystemId.KD45: frozenset({"serial", "transitive", "euclidean"}),
    SystemId.S4: frozenset({"reflexive", "transitive"}),
    SystemId.S5: frozenset({"reflexive", "euclidean"}),
}


def frame_class(sys: SystemId) -> FrameClass:
    return FrameClass(_FRAME_CLASSES[sys])


def eval_formula(f: Formula, m: KripkeModel, w: int) -> bool:
    """Standard satisfaction, straight recursion."""
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Atom):
        return m.holds(f.name, w)
    if isinstance(f, Neg):
        return not eval_formula(f.child, m, w)
    if isinstance(f, And):
        return eval_formula(f.left, m, w) and eval_formula(f.right, m, w)
    if isinstance(f, Box):
        return all(eval_formula(f.child, m, v) for v in m.successors(w))
    raise TypeError(f"not a formula: {f!r}")


def truth_set(f: Formula, m: KripkeModel) -> frozenset[int]:
    """Second evaluator: computes the set of worlds satisfying f."""
    rng = range(m.worlds)
    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, Atom):
        return frozenset(w for w in rng if m.holds(f.name, w))
    if isinstance(f, Neg):
        return frozenset(rng) - truth_set(f.child, m)
    if isinstance(f, And):
        return truth_set(f.left, m) & truth_set(f.right, m)
    if isinstance(f, Box):
        inner = truth_set(f.child, m)
        return frozenset(w for w in rng if all(v in inner for v in m.successors(w)))
    raise TypeError(f"not a formula: {f!r}")


def enumerate_frames(max_worlds: int, fc: FrameClass) -> Iterator[tuple[int, frozenset[tuple[int, int]]]]:
    """All frames with 1..max_worlds worlds meeting fc, in a fixed order.

    Relations are enumerated by bitmask over the n*n ordered pairs so the
    first countermodel found is reproducible.
    """
    for n in range(1, max_worlds + 1):
        pairs = [(a, b) for a in range(n) for b in range(n)]
        for mask in range(1 << len(pairs)):
            rel = frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)
            if fc.admits(n, rel):
                yield n, rel


def _valuations(atoms: Sequence[str], n: int) -> Iterator[frozenset[tuple[str, int]]]:
    cells = [(a, w) for a in atoms for w in range(n)]
    for mask in range(1 << len(cells)):
        yield frozenset(c for i, c in enumerate(cells) if mask >> i & 1)


def bounded_valid(
    f: Formula,
    fc: FrameClass,
    max_worlds: int = 3,
    atoms: Optional[Sequence[str]] = None,
) -> Optional[tuple[KripkeModel, int]]:
    """None when f holds at every world of every admissible model within the
    bound; otherwise the first countermodel and falsifying world."""
    if atoms is None:
        atoms = sorted(atoms_of(f))
    for n, rel in enumerate_frames(max_worlds, fc):
        for val in _valuations(atoms, n):
            m = KripkeModel(n, rel, val)
            sat = truth_set(f, m)
            for w in range(n):
                if w not in sat:
                    return m, w
    return None


def is_bounded_valid(
    f: Formula, fc: FrameClass, max_worlds: int = 3, atoms: Optional[Sequence[str]] = None
) -> bool:
    return bounded_valid(f, fc, max_worlds, atoms) is None


def describe_verdict(
    f: Formula, fc: FrameClass, max_worlds: int = 3, atoms: Optional[Sequence[str]] = None
) -> str:
    result = bounded_valid(f, fc, max_worlds, atoms)
    if result is None:
        return f"VALID (bound={max_worlds})"
    model, w = result
    return f"COUNTERMODEL (falsified at world {w})\n{model.describe()}"

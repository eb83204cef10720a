"""Shared plumbing for the proof transformations: error kinds, traces, fuel
accounting, tree surgery and turnstile-ancestry tracing."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..calculus import RuleApp, RuleId, SystemId, premise_layout
from ..proofs import Proof, check_proof, realign
from ..syntax import Hypersequent, Sort


class TransformError(RuntimeError):
    """A transformation hit a case it cannot rewrite."""


class WrongGroup(TransformError):
    pass


class WrongSystem(TransformError):
    pass


class FuelExhausted(TransformError):
    def __init__(self, trace: "TransformTrace"):
        super().__init__(f"rewrite budget exhausted after {trace.fuel_used} steps")
        self.trace = trace


DEFAULT_FUEL = 10**6


def default_fuel() -> int:
    env = os.environ.get("HYPERSEQ_FUEL")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_FUEL


@dataclass
class TransformTrace:
    steps: list[tuple[str, int, int]] = field(default_factory=list)
    fuel_used: int = 0
    fuel: int = DEFAULT_FUEL

    def spend(self, name: str, before: Optional[Proof] = None, after: Optional[Proof] = None) -> None:
        self.fuel_used += 1
        if before is not None and after is not None:
            self.steps.append((name, before.node_count(), after.node_count()))
        else:
            self.steps.append((name, 0, 0))
        if self.fuel_used > self.fuel:
            raise FuelExhausted(self)

    def render(self) -> str:
        lines = [f"fuel used: {self.fuel_used}"]
        for name, before, after in self.steps:
            lines.append(f"  {name}: {before} -> {after} nodes")
        return "\n".join(lines)


def replace_at(p: Proof, path: tuple[int, ...], new_subtree: Proof) -> Proof:
    """Swap the subtree at `path` for one concluding the same hypersequent."""
    if not path:
        if new_subtree.conclusion.key() != p.conclusion.key():
            raise TransformError("replacement changes the node conclusion")
        return realign(new_subtree, p.conclusion)
    i = path[0]
    premises = list(p.premises)
    premises[i] = replace_at(premises[i], path[1:], new_subtree)
    return Proof(p.conclusion, p.app, tuple(premises))


def subtree_at(p: Proof, path: tuple[int, ...]) -> Proof:
    for i in path:
        p = p.premises[i]
    return p


def find_node(p: Proof, pred: Callable[[Proof], bool]) -> Optional[tuple[int, ...]]:
    """Path of an uppermost matching node: none of its proper descendants
    (nodes above it, toward the leaves) match."""
    matches = [path for path, node in p.nodes() if pred(node)]
    if not matches:
        return None
    for path in matches:
        if not any(m != path and m[: len(path)] == path for m in matches):
            return path
    return matches[0]


def premise_region(
    app: RuleApp, conclusion: Hypersequent, region: frozenset[int], premises: list[Hypersequent]
) -> list[frozenset[int]]:
    """Push a set of conclusion sequent positions one premise up, following
    turnstile ancestry: a premise position is in the region when it feeds a
    region position and still carries the same (modal/plain) turnstile."""
    layouts = premise_layout(app, conclusion)
    out = []
    for i, layout in enumerate(layouts):
        positions = set()
        for c in region:
            for q in layout.get(c, []):
                if premises[i][q].sort is conclusion[c].sort:
                    positions.add(q)
        out.append(frozenset(positions))
    return out


def assert_same_end(before: Proof, after: Proof) -> None:
    if before.conclusion.key() != after.conclusion.key():
        raise TransformError(
            f"end hypersequent changed: {before.conclusion!r} became {after.conclusion!r}"
        )


def assert_checks(p: Proof, sys: SystemId, what: str) -> None:
    report = check_proof(p, sys)
    if not report.ok:
        raise TransformError(f"{what} produced an invalid proof: {report.summary()}")


def apply_original(node: Proof, premises: list[Proof]) -> Proof:
    """Rebuild node's rule application on replacement premises via the
    forward builders.  The premises must present the original premise
    sequents in their original order (possibly with changed sorts and with
    extra context sequents appended after them)."""
    from .. import builders as B

    app, C = node.app, node.conclusion
    r = app.rule
    if r in (RuleId.INIT_AX, RuleId.INIT_BOT):
        return node
    if r is RuleId.AND_L1:
        return B.and_l1(premises[0], app.seq, app.idx, C[app.seq].ant[app.idx].right)
    if r is RuleId.AND_L2:
        return B.and_l2(premises[0], app.seq, app.idx, C[app.seq].ant[app.idx].left)
    if r is RuleId.AND_R:
        return B.and_r(premises[0], premises[1], app.seq, app.idx)
    if r is RuleId.NEG_L:
        old = node.premises[0].conclusion[app.seq]
        return B.neg_l(premises[0], app.seq, len(old.suc) - 1)
    if r is RuleId.NEG_R:
        return B.neg_r(premises[0], app.seq, 0)
    if r is RuleId.IC_L:
        return B.ic_l(premises[0], app.seq, app.idx, app.idx + 1)
    if r is RuleId.IC_R:
        return B.ic_r(premises[0], app.seq, app.idx, app.idx + 1)
    if r is RuleId.IW_L:
        return B.iw_l(premises[0], app.seq, C[app.seq].ant[app.idx])
    if r is RuleId.IW_R:
        return B.iw_r(premises[0], app.seq, C[app.seq].suc[app.idx])
    if r is RuleId.T1:
        return B.t1(premises[0], app.seq, app.idx)
    if r is RuleId.T2:
        return B.t2(premises[0], app.seq)
    if r is RuleId.EW:
        return B.ew(premises[0], C[app.seq])
    if r is RuleId.MERGE:
        m = len(node.premises[0].conclusion)
        return B.merge(premises[0], m - 2, m - 1)
    if r is RuleId.SPLIT:
        m = len(node.premises[0].conclusion)
        return B.split(premises[0], m - 1, len(C[app.seq].ant), len(C[app.seq].suc))
    if r is RuleId.CUT:
        m1 = len(node.premises[0].conclusion)
        m2 = len(node.premises[1].conclusion)
        return B.cut(premises[0], m1 - 1, premises[1], m2 - 1, app.formula)
    if r is RuleId.NEC1:
        return B.nec1(premises[0], app.seq)
    if r is RuleId.FOUR_R:
        return B.four_r(premises[0], app.seq)
    if r is RuleId.NEC2:
        return B.nec2(premises[0])
    if r is RuleId.D:
        return B.d_rule(premises[0], app.seq)
    if r is RuleId.K:
        feed = app.seq2 - (1 if app.seq < app.seq2 else 0)
        return B.k_rule(premises[0], feed, 0)
    if r is RuleId.FOUR_L:
        feed = app.seq2 - (1 if app.seq < app.seq2 else 0)
        return B.four_l(premises[0], feed, 0)
    if r is RuleId.B1:
        feed = app.seq2 - (1 if app.seq < app.seq2 else 0)
        return B.b1(premises[0], feed, 0)
    if r is RuleId.FIVE1:
        feed = app.seq2 - (1 if app.seq < app.seq2 else 0)
        return B.five1(premises[0], feed, 0)
    if r is RuleId.B2:
        return B.b2(premises[0], app.seq)
    if r is RuleId.FIVE2:
        return B.five2(premises[0], app.seq)
    if r is RuleId.B25:
        flip = tuple(
            i for i, s in enumerate(C.seqs) if i != app.seq and s.sort is Sort.PLAIN
        )
        return B.b25(premises[0], app.seq, flip)
    raise TransformError(f"no rebuild for {r.value}")


def contract_duplicate_sequents(p: Proof, i: int, j: int) -> Proof:
    """Merge two identical-content sequents and contract the doubled formulas,
    the derived external contraction (merge + ic*)."""
    from .. import builders as B

    s1, s2 = p.conclusion[i], p.conclusion[j]
    if s1.key() != s2.key():
        raise TransformError("external contraction needs identical sequents")
    q = B.merge(p, i, j)
    pos = len(q.conclusion) - 1
    for _ in range(len(s1.ant)):
        s = q.conclusion[pos]
        # each original formula now occurs twice; contract the first pair
        seen: dict = {}
        target = None
        for k, f in enumerate(s.ant):
            r = repr(f)
            if r in seen:
                target = (seen[r], k)
                break
            seen[r] = k
        assert target is not None
        q = B.ic_l(q, pos, target[0], target[1])
    for _ in range(len(s1.suc)):
        s = q.conclusion[pos]
        seen = {}
        target = None
        for k, f in enumerate(s.suc):
            r = repr(f)
            if r in seen:
                target = (seen[r], k)
                break
            seen[r] = k
        assert target is not None
        q = B.ic_r(q, pos, target[0], target[1])
    return q

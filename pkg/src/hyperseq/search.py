"""Bounded backward cut-free proof search.

A test oracle, not a decision procedure: `Exhausted` means no proof was
found within the depth/budget under the loop-check normalization, nothing
more.  Found proofs are re-checked before being returned.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Optional, Sequence

from . import builders as B
from .calculus import RuleId, SystemId, system_rules
from .proofs import Proof, check_proof, realign
from .syntax import (
    And,
    Bottom,
    Box,
    Formula,
    Hypersequent,
    Neg,
    Sequent,
    Sort,
    print_formula,
)


class Outcome(Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted"
    BUDGET = "budget"


@dataclass
class SearchConfig:
    max_depth: int = 12
    allow_rules: Optional[frozenset[RuleId]] = None  # default: system minus cut
    loop_check: bool = True
    node_budget: int = 100_000
    semantic_pruning: bool = True  # drop subgoals refuted by a 2-world model

    def rules_for(self, sys: SystemId) -> frozenset[RuleId]:
        if self.allow_rules is not None:
            extra = self.allow_rules - system_rules(sys)
            if extra:
                raise ValueError(
                    f"allowed rules {sorted(r.value for r in extra)} not in {sys.value}"
                )
            return self.allow_rules
        return system_rules(sys) - {RuleId.CUT}


PROPOSITIONAL_RULES = frozenset(
    {
        RuleId.INIT_AX,
        RuleId.INIT_BOT,
        RuleId.AND_L1,
        RuleId.AND_L2,
        RuleId.AND_R,
        RuleId.NEG_L,
        RuleId.NEG_R,
        RuleId.IC_L,
        RuleId.IC_R,
        RuleId.IW_L,
        RuleId.IW_R,
        RuleId.EW,
        RuleId.MERGE,
        RuleId.SPLIT,
    }
)


@dataclass
class SearchResult:
    outcome: Outcome
    proof: Optional[Proof] = None
    nodes_visited: int = 0

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.FOUND


class _Budget(Exception):
    pass


def _loop_key(goal: Hypersequent) -> tuple:
    """Contraction-saturated normal form: multiplicities capped at 2."""

    def cap(side: tuple[Formula, ...]) -> tuple:
        c = Counter(print_formula(f) for f in side)
        return tuple(sorted((r, min(n, 2)) for r, n in c.items()))

    return tuple(sorted((s.sort.value, cap(s.ant), cap(s.suc)) for s in goal.seqs))


def _closure(goal: Hypersequent) -> Optional[Proof]:
    """Initial sequent plus weakenings, when one sequent closes the goal."""
    for i, s in enumerate(goal.seqs):
        base: Optional[Proof] = None
        if any(isinstance(f, Bottom) for f in s.ant):
            base = B.bot_init(s.sort)
        else:
            shared = set(map(print_formula, s.ant)) & set(map(print_formula, s.suc))
            if shared:
                pick = next(f for f in s.ant if print_formula(f) in shared)
                base = B.ax(pick, s.sort)
        if base is None:
            continue
        p = B.weaken_to(base, 0, s)
        p = B.ew_many(p, [t for j, t in enumerate(goal.seqs) if j != i])
        return p
    return None


Move = tuple[list[Hypersequent], Callable[[list[Proof]], Proof]]


def _invertible_move(goal: Hypersequent, rules: frozenset[RuleId]) -> Optional[Move]:
    """First applicable invertible decomposition; committing to it is safe
    (the usual inversion lemmas), so no alternatives are explored."""
    for i, s in enumerate(goal.seqs):
        if RuleId.NEG_L in rules:
            for pos, f in enumerate(s.ant):
                if isinstance(f, Neg):
                    sub = goal.replace(
                        i, Sequent(s.sort, s.ant[:pos] + s.ant[pos + 1 :], s.suc + (f.child,))
                    )
                    return [sub], lambda ps, i=i, pos=len(s.suc): B.neg_l(ps[0], i, pos)
        if RuleId.NEG_R in rules:
            for pos, f in enumerate(s.suc):
                if isinstance(f, Neg):
                    sub = goal.replace(
                        i, Sequent(s.sort, (f.child,) + s.ant, s.suc[:pos] + s.suc[pos + 1 :])
                    )
                    return [sub], lambda ps, i=i: B.neg_r(ps[0], i, 0)
        if RuleId.AND_L1 in rules and RuleId.AND_L2 in rules and RuleId.IC_L in rules:
            for pos, f in enumerate(s.ant):
                if isinstance(f, And):
                    # G3-style inversion: keep both conjuncts, then rebuild
                    # with and_l1 / and_l2 / ic_l.
                    ant = list(s.ant)
                    ant[pos : pos + 1] = [f.left, f.right]
                    sub = goal.replace(i, Sequent(s.sort, tuple(ant), s.suc))

                    def rebuild(ps, i=i, pos=pos, f=f):
                        q = B.and_l1(ps[0], i, pos, f.right)
                        q = B.and_l2(q, i, pos + 1, f.left)
                        return B.ic_l(q, i, pos, pos + 1)

                    return [sub], rebuild
        if RuleId.AND_R in rules:
            for pos, f in enumerate(s.suc):
                if isinstance(f, And):
                    subs = []
                    for part in (f.left, f.right):
                        suc = list(s.suc)
                        suc[pos] = part
                        subs.append(goal.replace(i, Sequent(s.sort, s.ant, tuple(suc))))
                    return subs, lambda ps, i=i, pos=pos: B.and_r(ps[0], ps[1], i, pos)
    return None


def _moves(goal: Hypersequent, rules: frozenset[RuleId]) -> Iterator[Move]:
    n = len(goal)

    # --- non-invertible propositional alternatives -----------------------
    if RuleId.AND_L1 in rules and not (RuleId.AND_L2 in rules and RuleId.IC_L in rules):
        for i, s in enumerate(goal.seqs):
            for pos, f in enumerate(s.ant):
                if isinstance(f, And):
                    for which in (0, 1):
                        kept = f.left if which == 0 else f.right
                        other = f.right if which == 0 else f.left
                        ant = list(s.ant)
                        ant[pos] = kept
                        sub = goal.replace(i, Sequent(s.sort, tuple(ant), s.suc))
                        if which == 0:
                            yield [sub], lambda ps, i=i, pos=pos, o=other: B.and_l1(ps[0], i, pos, o)
                        else:
                            yield [sub], lambda ps, i=i, pos=pos, o=other: B.and_l2(ps[0], i, pos, o)

    # --- modal --------------------------------------------------------------
    for i, s in enumerate(goal.seqs):
        if RuleId.T1 in rules:
            for pos, f in enumerate(s.ant):
                if isinstance(f, Box):
                    ant = list(s.ant)
                    ant[pos] = f.child
                    sub = goal.replace(i, Sequent(s.sort, tuple(ant), s.suc))
                    yield [sub], lambda ps, i=i, pos=pos: B.t1(ps[0], i, pos)
        if RuleId.NEC1 in rules and s.sort is Sort.PLAIN and not s.ant and len(s.suc) == 1:
            f = s.suc[0]
            if isinstance(f, Box):
                sub = goal.replace(i, Sequent(Sort.MODAL, (), (f.child,)))
                yield [sub], lambda ps, i=i: B.nec1(ps[0], i)
        if RuleId.FOUR_R in rules and s.sort is Sort.MODAL and not s.ant and len(s.suc) == 1:
            f = s.suc[0]
            if isinstance(f, Box):
                sub = goal.replace(i, Sequent(Sort.MODAL, (), (f.child,)))
                yield [sub], lambda ps, i=i: B.four_r(ps[0], i)
        if RuleId.D in rules and s.sort is Sort.PLAIN and s.is_empty():
            sub = goal.replace(i, Sequent(Sort.MODAL))
            yield [sub], lambda ps, i=i: B.d_rule(ps[0], i)

    # k / 4l / b1 / 51: a boxed singleton plus a target sequent
    for i, s in enumerate(goal.seqs):
        if len(s.ant) == 1 and not s.suc and isinstance(s.ant[0], Box):
            a = s.ant[0].child
            for j, t in enumerate(goal.seqs):
                if j == i:
                    continue
                if s.sort is Sort.PLAIN and t.sort is Sort.MODAL:
                    if RuleId.K in rules:
                        sub = goal.drop(i).replace(
                            j - (1 if i < j else 0),
                            Sequent(Sort.MODAL, (a,) + t.ant, t.suc),
                        )
                        yield [sub], lambda ps, i=i, j=j: B.k_rule(
                            ps[0], j - (1 if i < j else 0), 0
                        )
                    if RuleId.FOUR_L in rules:
                        sub = goal.drop(i).replace(
                            j - (1 if i < j else 0),
                            Sequent(Sort.MODAL, (Box(a),) + t.ant, t.suc),
                        )
                        yield [sub], lambda ps, i=i, j=j: B.four_l(
                            ps[0], j - (1 if i < j else 0), 0
                        )
                if s.sort is Sort.MODAL and t.sort is Sort.PLAIN:
                    if RuleId.B1 in rules:
                        sub = goal.drop(i).replace(
                            j - (1 if i < j else 0),
                            Sequent(Sort.PLAIN, (a,) + t.ant, t.suc),
                        )
                        yield [sub], lambda ps, i=i, j=j: B.b1(
                            ps[0], j - (1 if i < j else 0), 0
                        )
                    if RuleId.FIVE1 in rules:
                        sub = goal.drop(i).replace(
                            j - (1 if i < j else 0),
                            Sequent(Sort.PLAIN, (Box(a),) + t.ant, t.suc),
                        )
                        yield [sub], lambda ps, i=i, j=j: B.five1(
                            ps[0], j - (1 if i < j else 0), 0
                        )

    if RuleId.NEC2 in rules and n == 1 and goal[0].sort is Sort.MODAL:
        sub = Hypersequent((goal[0].with_sort(Sort.PLAIN),))
        yield [sub], lambda ps: B.nec2(ps[0])

    if RuleId.B2 in rules:
        for i, s in enumerate(goal.seqs):
            if s.sort is Sort.MODAL and all(
                t.sort is Sort.PLAIN for j, t in enumerate(goal.seqs) if j != i
            ):
                sub = Hypersequent(
                    tuple(
                        t.with_sort(Sort.PLAIN) if j == i else t.with_sort(Sort.MODAL)
                        for j, t in enumerate(goal.seqs)
                    )
                )
                yield [sub], lambda ps, i=i: B.b2(ps[0], i)

    if RuleId.FIVE2 in rules and all(t.sort is Sort.MODAL for t in goal.seqs):
        for i in range(n):
            sub = goal.replace(i, goal[i].with_sort(Sort.PLAIN))
            yield [sub], lambda ps, i=i: B.five2(ps[0], i)

    if RuleId.B25 in rules:
        for i, s in enumerate(goal.seqs):
            if s.sort is not Sort.MODAL:
                continue
            flipped = [j for j, t in enumerate(goal.seqs) if j != i and t.sort is Sort.PLAIN]
            if not flipped:
                continue  # the 52 case covers this
            sub = Hypersequent(
                tuple(
                    t.with_sort(Sort.PLAIN) if j == i else t.with_sort(Sort.MODAL)
                    for j, t in enumerate(goal.seqs)
                )
            )
            yield [sub], lambda ps, i=i, flipped=tuple(flipped): B.b25(ps[0], i, flipped)

    if RuleId.T2 in rules:
        for i, s in enumerate(goal.seqs):
            if s.sort is Sort.PLAIN:
                sub = goal.replace(i, s.with_sort(Sort.MODAL))
                yield [sub], lambda ps, i=i: B.t2(ps[0], i)

    # --- structural -----------------------------------------------------------
    if RuleId.MERGE in rules:
        for i, s in enumerate(goal.seqs):
            size = len(s.ant) + len(s.suc)
            if size == 0 or size > 6:
                continue
            half = 1 << (len(s.ant) + len(s.suc) - 1)
            for mask in range(half):  # fix the last formula in part 2
                amask = mask & ((1 << len(s.ant)) - 1)
                smask = mask >> len(s.ant)
                a1 = tuple(f for k, f in enumerate(s.ant) if amask >> k & 1)
                a2 = tuple(f for k, f in enumerate(s.ant) if not amask >> k & 1)
                s1 = tuple(f for k, f in enumerate(s.suc) if smask >> k & 1)
                s2 = tuple(f for k, f in enumerate(s.suc) if not smask >> k & 1)
                parts = (Sequent(s.sort, a1, s1), Sequent(s.sort, a2, s2))
                if len(goal) > 1:
                    sub = goal.drop(i).append(*parts)
                else:
                    sub = Hypersequent(parts)
                m = len(sub)
                yield [sub], lambda ps, m=m: B.merge(ps[0], m - 2, m - 1)

    if RuleId.SPLIT in rules:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                si, sj = goal[i], goal[j]
                if si.sort is Sort.PLAIN and sj.sort is Sort.PLAIN:
                    merged = Sequent(Sort.PLAIN, si.ant + sj.ant, si.suc + sj.suc)
                    keep = [s for k, s in enumerate(goal.seqs) if k not in (i, j)]
                    sub = Hypersequent(tuple(keep) + (merged,))
                    yield [sub], lambda ps, na=len(si.ant), ns=len(si.suc), m=len(sub): B.split(
                        ps[0], m - 1, na, ns
                    )

    if RuleId.IC_L in rules:
        for i, s in enumerate(goal.seqs):
            counts = Counter(print_formula(f) for f in s.ant)
            for pos, f in enumerate(s.ant):
                if counts[print_formula(f)] < 2:
                    ant = list(s.ant)
                    ant.insert(pos, f)
                    sub = goal.replace(i, Sequent(s.sort, tuple(ant), s.suc))
                    yield [sub], lambda ps, i=i, pos=pos: B.ic_l(ps[0], i, pos, pos + 1)
    if RuleId.IC_R in rules:
        for i, s in enumerate(goal.seqs):
            counts = Counter(print_formula(f) for f in s.suc)
            for pos, f in enumerate(s.suc):
                if counts[print_formula(f)] < 2:
                    suc = list(s.suc)
                    suc.insert(pos, f)
                    sub = goal.replace(i, Sequent(s.sort, s.ant, tuple(suc)))
                    yield [sub], lambda ps, i=i, pos=pos: B.ic_r(ps[0], i, pos, pos + 1)

    if RuleId.EW in rules and n > 1:
        for i in range(n):
            yield [goal.drop(i)], lambda ps, s=goal[i]: B.ew(ps[0], s)


class _Pruner:
    """Sound semantic pruning: a subgoal falsified by some small model of the
    system's frame class is unprovable (soundness), so the search can stop
    there.  Works on cached per-sequent truth masks over a fixed model list,
    since subgoals share sequents heavily.
    """

    def __init__(self, sys: SystemId, atoms: Sequence[str], max_worlds: int = 2):
        from .semantics import KripkeModel, enumerate_frames, frame_class
        from .syntax import formula_image
        from .semantics import truth_set

        self._truth_set = truth_set
        self._formula_image = formula_image
        self.atoms = list(atoms)[:3]
        self.models: list = []
        fc = frame_class(sys)
        for n, rel in enumerate_frames(max_worlds, fc):
            cells = [(a, w) for a in self.atoms for w in range(n)]
            for mask in range(1 << len(cells)):
                val = frozenset(c for i, c in enumerate(cells) if mask >> i & 1)
                self.models.append(KripkeModel(n, rel, val))
        self.total_bits = sum(m.worlds for m in self.models)
        self.full = (1 << self.total_bits) - 1
        self.seq_masks: dict[tuple, int] = {}

    def _mask(self, s: Sequent) -> int:
        key = s.key()
        cached = self.seq_masks.get(key)
        if cached is not None:
            return cached
        img = self._formula_image(s)
        mask = 0
        bit = 0
        for m in self.models:
            ts = self._truth_set(img, m)
            for w in range(m.worlds):
                if w in ts:
                    mask |= 1 << bit
                bit += 1
        self.seq_masks[key] = mask
        return mask

    def refuted(self, goal: Hypersequent) -> bool:
        mask = 0
        for s in goal.seqs:
            mask |= self._mask(s)
            if mask == self.full:
                return False
        return True


class _Searcher:
    """Iterative-deepening DFS with a failure memo.

    The memo records the largest remaining depth at which a goal failed;
    re-visits with no more depth are pruned.  Combined with the per-branch
    loop check this keeps the explored space near the set of distinct
    reachable goals, at the (documented) price of completeness.
    """

    def __init__(self, sys: SystemId, cfg: SearchConfig, goal: Hypersequent):
        from .syntax import atoms_of, hyper_image

        self.sys = sys
        self.cfg = cfg
        self.rules = cfg.rules_for(sys)
        self.visited = 0
        self.failed: dict[tuple, int] = {}
        self.pruner = (
            _Pruner(sys, sorted(atoms_of(hyper_image(goal))))
            if cfg.semantic_pruning
            else None
        )

    def search(self, goal: Hypersequent, depth: int, seen: frozenset) -> Optional[Proof]:
        self.visited += 1
        if self.visited > self.cfg.node_budget:
            raise _Budget()
        closed = _closure(goal)
        if closed is not None:
            return closed
        if depth <= 0:
            return None
        key = _loop_key(goal)
        if self.failed.get(key, -1) >= depth:
            return None
        if self.pruner is not None and self.pruner.refuted(goal):
            self.failed[key] = 10**9
            return None
        if self.cfg.loop_check:
            if key in seen:
                return None
            seen = seen | {key}
        inv = _invertible_move(goal, self.rules)
        moves = [inv] if inv is not None else list(_moves(goal, self.rules))
        for subs, rebuild in moves:
            proofs = []
            ok = True
            for sub in subs:
                child = self.search(sub, depth - 1, seen)
                if child is None:
                    ok = False
                    break
                proofs.append(realign(child, sub))
            if ok:
                return rebuild(proofs)
        if self.failed.get(key, -1) < depth:
            self.failed[key] = depth
        return None


def prove(goal: Hypersequent, sys: SystemId, cfg: Optional[SearchConfig] = None) -> SearchResult:
    cfg = cfg or SearchConfig()
    searcher = _Searcher(sys, cfg, goal)
    p = None
    try:
        for depth in range(1, cfg.max_depth + 1):
            p = searcher.search(goal, depth, frozenset())
            if p is not None:
                break
    except _Budget:
        return SearchResult(Outcome.BUDGET, None, searcher.visited)
    if p is None:
        return SearchResult(Outcome.EXHAUSTED, None, searcher.visited)
    p = realign(p, goal) if p.conclusion.key() == goal.key() else p
    report = check_proof(p, sys)
    if not report.ok or p.conclusion.key() != goal.key():
        raise AssertionError(f"search produced a bad proof: {report.summary()}")
    return SearchResult(Outcome.FOUND, p, searcher.visited)


def prove_tautology(f: Formula, sys: SystemId, depth: Optional[int] = None) -> SearchResult:
    """Discharges a propositional goal (-> f) with propositional rules only."""
    from .syntax import degree

    goal = Hypersequent((Sequent(Sort.PLAIN, (), (f,)),))
    cfg = SearchConfig(
        max_depth=depth if depth is not None else max(6, 2 * (degree(f) + 1)),
        allow_rules=frozenset(PROPOSITIONAL_RULES & system_rules(sys)),
    )
    return prove(goal, sys, cfg)

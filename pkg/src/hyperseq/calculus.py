"""Inference-rule schemas, system definitions and single-step checking.

Every rule application carries explicit addressing (`RuleApp`), so checking
reconstructs the expected premises and compares multisets; it never searches.
Context sequents are matched up to permutation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

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


class RuleId(Enum):
    INIT_AX = "ax"
    INIT_BOT = "bot"
    AND_L1 = "and_l1"
    AND_L2 = "and_l2"
    AND_R = "and_r"
    NEG_L = "neg_l"
    NEG_R = "neg_r"
    IC_L = "ic_l"
    IC_R = "ic_r"
    IW_L = "iw_l"
    IW_R = "iw_r"
    CUT = "cut"
    EW = "ew"
    MERGE = "merge"
    SPLIT = "split"
    NEC1 = "nec1"
    NEC2 = "nec2"
    K = "k"
    D = "d"
    T1 = "t1"
    T2 = "t2"
    FOUR_R = "4r"
    FOUR_L = "4l"
    B1 = "b1"
    B2 = "b2"
    FIVE1 = "51"
    FIVE2 = "52"
    B25 = "b25"


RULE_BY_NAME = {r.value: r for r in RuleId}


class SystemId(Enum):
    K = "K"
    D = "D"
    T = "T"
    K4 = "K4"
    KB = "KB"
    K5 = "K5"
    B = "B"
    K45 = "K45"
    KD4 = "KD4"
    KD5 = "KD5"
    KDB = "KDB"
    KB5 = "KB5"
    KD45 = "KD45"
    S4 = "S4"
    S5 = "S5"


SYSTEM_BY_NAME = {s.value: s for s in SystemId}


class Group(Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"


_BASE_RULES = frozenset(
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
        RuleId.CUT,
        RuleId.EW,
        RuleId.MERGE,
        RuleId.SPLIT,
        RuleId.NEC1,
        RuleId.NEC2,
        RuleId.K,
    }
)

_AXIOM_RULES = {
    "D": {RuleId.D},
    "T": {RuleId.T1, RuleId.T2},
    "4": {RuleId.FOUR_R, RuleId.FOUR_L},
    "B": {RuleId.B1, RuleId.B2},
    "5": {RuleId.FIVE1, RuleId.FIVE2},
}

_SYSTEM_AXIOMS = {
    SystemId.K: "",
    SystemId.D: "D",
    SystemId.T: "T",
    SystemId.K4: "4",
    SystemId.KB: "B",
    SystemId.K5: "5",
    SystemId.B: "TB",
    SystemId.K45: "45",
    SystemId.KD4: "D4",
    SystemId.KD5: "D5",
    SystemId.KDB: "DB",
    SystemId.KB5: "B5",
    SystemId.KD45: "D45",
    SystemId.S4: "T4",
    SystemId.S5: "T5",
}


def system_rules(sys: SystemId) -> frozenset[RuleId]:
    if sys is SystemId.KB5:
        # B is implemented by b1 + b25, without b2.
        return _BASE_RULES | _AXIOM_RULES["5"] | {RuleId.B1, RuleId.B25}
    if sys is SystemId.S5:
        return _BASE_RULES | _AXIOM_RULES["T"] | _AXIOM_RULES["5"] | _AXIOM_RULES["4"]
    rules = set(_BASE_RULES)
    for letter in _SYSTEM_AXIOMS[sys]:
        rules |= _AXIOM_RULES[letter]
    return frozenset(rules)


_GROUPS = {
    Group.ALPHA: {SystemId.K, SystemId.D, SystemId.T, SystemId.K4, SystemId.KD4, SystemId.S4},
    Group.BETA: {SystemId.K5, SystemId.K45, SystemId.KD5, SystemId.KD45, SystemId.KB5, SystemId.S5},
    Group.GAMMA: {SystemId.KB, SystemId.KDB, SystemId.B},
}


def group_of(sys: SystemId) -> Group:
    for group, members in _GROUPS.items():
        if sys in members:
            return group
    raise ValueError(sys)


def has_rule(sys: SystemId, rule: RuleId) -> bool:
    return rule in system_rules(sys)


# ---------------------------------------------------------------------------
# Rule applications


@dataclass(frozen=True)
class RuleApp:
    """A rule name plus the positions that pin its schema instance.

    seq/seq2 index sequents of the conclusion; idx indexes a formula inside
    the principal sequent's side; pseq indexes principal sequents inside the
    premises (cut, merge).  formula is the cut formula.
    """

    rule: RuleId
    seq: int = 0
    seq2: int = 0
    idx: int = 0
    formula: Optional[Formula] = None
    pseq: tuple[int, ...] = ()


class StepErrorKind(Enum):
    WRONG_ARITY = "WrongArity"
    BAD_ADDRESSING = "BadAddressing"
    SCHEMA_MISMATCH = "SchemaMismatch"
    SORT_VIOLATION = "SortViolation"
    CONTEXT_MISMATCH = "ContextMismatch"


@dataclass(frozen=True)
class StepError(Exception):
    kind: StepErrorKind
    message: str

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.message}"


RULE_ARITY = {
    RuleId.INIT_AX: 0,
    RuleId.INIT_BOT: 0,
    RuleId.AND_R: 2,
    RuleId.CUT: 2,
}


def rule_arity(rule: RuleId) -> int:
    return RULE_ARITY.get(rule, 1)


def _fail(kind: StepErrorKind, message: str) -> StepError:
    return StepError(kind, message)


def _ctx_counter(h: Hypersequent, skip: Sequence[int]) -> Counter:
    sk = set(skip)
    return Counter(s.key() for i, s in enumerate(h.seqs) if i not in sk)


def _check_index(h: Hypersequent, i: int, what: str) -> None:
    if not (0 <= i < len(h.seqs)):
        raise _fail(StepErrorKind.BAD_ADDRESSING, f"{what} index {i} out of range")


def _seqs_match(a: Hypersequent, b: Hypersequent) -> bool:
    return a.key() == b.key()


def _remove_one(items: tuple[Formula, ...], f: Formula) -> tuple[Formula, ...]:
    out = list(items)
    out.remove(f)
    return tuple(out)


def _is_singleton_box_plain(s: Sequent) -> Optional[Formula]:
    """Matches the `box A ->` shape produced by k/4l; returns A when boxed."""
    if s.sort is Sort.PLAIN and len(s.ant) == 1 and not s.suc and isinstance(s.ant[0], Box):
        return s.ant[0].child
    return None


def _is_singleton_box_modal(s: Sequent) -> Optional[Formula]:
    if s.sort is Sort.MODAL and len(s.ant) == 1 and not s.suc and isinstance(s.ant[0], Box):
        return s.ant[0].child
    return None


def expected_premises(app: RuleApp, conclusion: Hypersequent) -> list[Hypersequent]:
    """Canonical premises for rules whose premises are determined by the
    conclusion plus addressing.  cut and merge are handled separately in
    check_step because their premises carry information the conclusion lost.
    """
    r = app.rule
    C = conclusion

    if r in (RuleId.INIT_AX, RuleId.INIT_BOT):
        return []

    if r in (RuleId.AND_L1, RuleId.AND_L2):
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.ant)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        f = s.ant[app.idx]
        if not isinstance(f, And):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, f"principal {f!r} is not a conjunction")
        kept = f.left if r is RuleId.AND_L1 else f.right
        ant = list(s.ant)
        ant[app.idx] = kept
        return [C.replace(app.seq, Sequent(s.sort, tuple(ant), s.suc))]

    if r is RuleId.AND_R:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.suc)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        f = s.suc[app.idx]
        if not isinstance(f, And):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, f"principal {f!r} is not a conjunction")
        out = []
        for part in (f.left, f.right):
            suc = list(s.suc)
            suc[app.idx] = part
            out.append(C.replace(app.seq, Sequent(s.sort, s.ant, tuple(suc))))
        return out

    if r is RuleId.NEG_L:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.ant)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        f = s.ant[app.idx]
        if not isinstance(f, Neg):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, f"principal {f!r} is not a negation")
        ant = list(s.ant)
        del ant[app.idx]
        return [C.replace(app.seq, Sequent(s.sort, tuple(ant), s.suc + (f.child,)))]

    if r is RuleId.NEG_R:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.suc)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        f = s.suc[app.idx]
        if not isinstance(f, Neg):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, f"principal {f!r} is not a negation")
        suc = list(s.suc)
        del suc[app.idx]
        return [C.replace(app.seq, Sequent(s.sort, (f.child,) + s.ant, tuple(suc)))]

    if r is RuleId.IC_L:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.ant)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        f = s.ant[app.idx]
        ant = list(s.ant)
        ant.insert(app.idx, f)
        return [C.replace(app.seq, Sequent(s.sort, tuple(ant), s.suc))]

    if r is RuleId.IC_R:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.suc)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        f = s.suc[app.idx]
        suc = list(s.suc)
        suc.insert(app.idx, f)
        return [C.replace(app.seq, Sequent(s.sort, s.ant, tuple(suc)))]

    if r is RuleId.IW_L:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.ant)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        ant = list(s.ant)
        del ant[app.idx]
        return [C.replace(app.seq, Sequent(s.sort, tuple(ant), s.suc))]

    if r is RuleId.IW_R:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.suc)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        suc = list(s.suc)
        del suc[app.idx]
        return [C.replace(app.seq, Sequent(s.sort, s.ant, tuple(suc)))]

    if r is RuleId.EW:
        _check_index(C, app.seq, "seq")
        if len(C) == 1:
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "ew premise would be empty")
        return [C.drop(app.seq)]

    if r is RuleId.SPLIT:
        _check_index(C, app.seq, "seq")
        _check_index(C, app.seq2, "seq2")
        if app.seq == app.seq2:
            raise _fail(StepErrorKind.BAD_ADDRESSING, "split needs two distinct sequents")
        s1, s2 = C[app.seq], C[app.seq2]
        if s1.sort is not Sort.PLAIN or s2.sort is not Sort.PLAIN:
            raise _fail(StepErrorKind.SORT_VIOLATION, "split acts on -> sequents only")
        merged = Sequent(Sort.PLAIN, s1.ant + s2.ant, s1.suc + s2.suc)
        keep = [s for i, s in enumerate(C.seqs) if i not in (app.seq, app.seq2)]
        return [Hypersequent(tuple(keep) + (merged,))]

    if r is RuleId.NEC1:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if s.sort is not Sort.PLAIN:
            raise _fail(StepErrorKind.SORT_VIOLATION, "nec1 concludes a -> sequent")
        if s.ant or len(s.suc) != 1 or not isinstance(s.suc[0], Box):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "nec1 concludes `-> box A`")
        return [C.replace(app.seq, Sequent(Sort.MODAL, (), (s.suc[0].child,)))]

    if r is RuleId.FOUR_R:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if s.sort is not Sort.MODAL:
            raise _fail(StepErrorKind.SORT_VIOLATION, "4r concludes a => sequent")
        if s.ant or len(s.suc) != 1 or not isinstance(s.suc[0], Box):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "4r concludes `=> box A`")
        return [C.replace(app.seq, Sequent(Sort.MODAL, (), (s.suc[0].child,)))]

    if r is RuleId.NEC2:
        if len(C) != 1:
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "nec2 admits no side hypersequent")
        s = C[0]
        if s.sort is not Sort.MODAL:
            raise _fail(StepErrorKind.SORT_VIOLATION, "nec2 concludes a => sequent")
        return [Hypersequent((s.with_sort(Sort.PLAIN),))]

    if r is RuleId.D:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if s.sort is not Sort.PLAIN or not s.is_empty():
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "d concludes an empty -> sequent")
        return [C.replace(app.seq, Sequent(Sort.MODAL))]

    if r is RuleId.T2:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if s.sort is not Sort.PLAIN:
            raise _fail(StepErrorKind.SORT_VIOLATION, "t2 concludes a -> sequent")
        return [C.replace(app.seq, s.with_sort(Sort.MODAL))]

    if r is RuleId.T1:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if not (0 <= app.idx < len(s.ant)):
            raise _fail(StepErrorKind.BAD_ADDRESSING, "idx out of range")
        f = s.ant[app.idx]
        if not isinstance(f, Box):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, f"principal {f!r} is not boxed")
        ant = list(s.ant)
        ant[app.idx] = f.child
        return [C.replace(app.seq, Sequent(s.sort, tuple(ant), s.suc))]

    if r in (RuleId.K, RuleId.FOUR_L):
        _check_index(C, app.seq, "seq")
        _check_index(C, app.seq2, "seq2")
        if app.seq == app.seq2:
            raise _fail(StepErrorKind.BAD_ADDRESSING, "seq and seq2 must differ")
        boxed = _is_singleton_box_plain(C[app.seq])
        if boxed is None:
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "expected a `box A ->` sequent at seq")
        target = C[app.seq2]
        if target.sort is not Sort.MODAL:
            raise _fail(StepErrorKind.SORT_VIOLATION, "seq2 must be a => sequent")
        moved = boxed if r is RuleId.K else Box(boxed)
        keep = []
        for i, s in enumerate(C.seqs):
            if i == app.seq:
                continue
            if i == app.seq2:
                s = Sequent(Sort.MODAL, (moved,) + s.ant, s.suc)
            keep.append(s)
        return [Hypersequent(tuple(keep))]

    if r in (RuleId.B1, RuleId.FIVE1):
        _check_index(C, app.seq, "seq")
        _check_index(C, app.seq2, "seq2")
        if app.seq == app.seq2:
            raise _fail(StepErrorKind.BAD_ADDRESSING, "seq and seq2 must differ")
        boxed = _is_singleton_box_modal(C[app.seq])
        if boxed is None:
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "expected a `box A =>` sequent at seq")
        target = C[app.seq2]
        if target.sort is not Sort.PLAIN:
            raise _fail(StepErrorKind.SORT_VIOLATION, "seq2 must be a -> sequent")
        moved = boxed if r is RuleId.B1 else Box(boxed)
        keep = []
        for i, s in enumerate(C.seqs):
            if i == app.seq:
                continue
            if i == app.seq2:
                s = Sequent(Sort.PLAIN, (moved,) + s.ant, s.suc)
            keep.append(s)
        return [Hypersequent(tuple(keep))]

    if r is RuleId.B2:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if s.sort is not Sort.MODAL:
            raise _fail(StepErrorKind.SORT_VIOLATION, "b2 concludes a => principal sequent")
        for i, ctx in enumerate(C.seqs):
            if i != app.seq and ctx.sort is not Sort.PLAIN:
                raise _fail(
                    StepErrorKind.SORT_VIOLATION, f"b2 context sequent {i} must be -> in the conclusion"
                )
        seqs = [
            (ctx.with_sort(Sort.PLAIN) if i == app.seq else ctx.with_sort(Sort.MODAL))
            for i, ctx in enumerate(C.seqs)
        ]
        return [Hypersequent(tuple(seqs))]

    if r is RuleId.FIVE2:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if s.sort is not Sort.MODAL:
            raise _fail(StepErrorKind.SORT_VIOLATION, "52 concludes a => principal sequent")
        for i, ctx in enumerate(C.seqs):
            if i != app.seq and ctx.sort is not Sort.MODAL:
                raise _fail(
                    StepErrorKind.SORT_VIOLATION, f"52 context sequent {i} must be => "
                )
        return [C.replace(app.seq, s.with_sort(Sort.PLAIN))]

    if r is RuleId.B25:
        _check_index(C, app.seq, "seq")
        s = C[app.seq]
        if s.sort is not Sort.MODAL:
            raise _fail(StepErrorKind.SORT_VIOLATION, "b25 concludes a => principal sequent")
        # Conclusion context splits by sort: => sequents stay, -> sequents
        # were => in the premise.
        seqs = []
        for i, ctx in enumerate(C.seqs):
            if i == app.seq:
                seqs.append(s.with_sort(Sort.PLAIN))
            elif ctx.sort is Sort.PLAIN:
                seqs.append(ctx.with_sort(Sort.MODAL))
            else:
                seqs.append(ctx)
        return [Hypersequent(tuple(seqs))]

    raise _fail(StepErrorKind.SCHEMA_MISMATCH, f"rule {r.value} has no canonical premise")


def check_step(
    app: RuleApp, premises: Sequence[Hypersequent], conclusion: Hypersequent
) -> Optional[StepError]:
    """Returns None when the step instance is schema-correct, else the error."""
    try:
        _check_step(app, premises, conclusion)
    except StepError as e:
        return e
    return None


def _check_step(
    app: RuleApp, premises: Sequence[Hypersequent], conclusion: Hypersequent
) -> None:
    r = app.rule
    if len(premises) != rule_arity(r):
        raise _fail(
            StepErrorKind.WRONG_ARITY,
            f"{r.value} takes {rule_arity(r)} premise(s), got {len(premises)}",
        )

    if r is RuleId.INIT_AX:
        if len(conclusion) != 1:
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "initial sequents stand alone")
        s = conclusion[0]
        if not (len(s.ant) == 1 and len(s.suc) == 1 and s.ant[0] == s.suc[0]):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "expected `A >> A`")
        return

    if r is RuleId.INIT_BOT:
        if len(conclusion) != 1:
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "initial sequents stand alone")
        s = conclusion[0]
        if not (len(s.ant) == 1 and isinstance(s.ant[0], Bottom) and not s.suc):
            raise _fail(StepErrorKind.SCHEMA_MISMATCH, "expected `bot >>`")
        return

    if r is RuleId.CUT:
        _check_cut(app, premises, conclusion)
        return

    if r is RuleId.MERGE:
        _check_merge(app, premises, conclusion)
        return

    expected = expected_premises(app, conclusion)
    for i, (exp, got) in enumerate(zip(expected, premises)):
        if not _seqs_match(exp, got):
            raise _fail(
                StepErrorKind.CONTEXT_MISMATCH,
                f"premise {i} should be `{exp!r}` up to permutation, got `{got!r}`",
            )


def _check_cut(app: RuleApp, premises: Sequence[Hypersequent], conclusion: Hypersequent) -> None:
    if app.formula is None:
        raise _fail(StepErrorKind.BAD_ADDRESSING, "cut requires the cut formula")
    if len(app.pseq) != 2:
        raise _fail(StepErrorKind.BAD_ADDRESSING, "cut requires pseq=[left, right]")
    A = app.formula
    left, right = premises
    _check_index(conclusion, app.seq, "seq")
    il, ir = app.pseq
    _check_index(left, il, "pseq[0]")
    _check_index(right, ir, "pseq[1]")
    sl, sr, sc = left[il], right[ir], conclusion[app.seq]
    if not (sl.sort is sr.sort is sc.sort):
        raise _fail(StepErrorKind.SORT_VIOLATION, "cut sequents must share one sort")
    if A not in sl.suc:
        raise _fail(StepErrorKind.SCHEMA_MISMATCH, f"left premise lacks {A!r} in succedent")
    if A not in sr.ant:
        raise _fail(StepErrorKind.SCHEMA_MISMATCH, f"right premise lacks {A!r} in antecedent")
    ctx = _ctx_counter(conclusion, [app.seq])
    if _ctx_counter(left, [il]) != ctx or _ctx_counter(right, [ir]) != ctx:
        raise _fail(StepErrorKind.CONTEXT_MISMATCH, "cut premises must share the conclusion context")
    want_ant = Counter(map(print_formula, sl.ant)) + Counter(map(print_formula, _remove_one(sr.ant, A)))
    want_suc = Counter(map(print_formula, _remove_one(sl.suc, A))) + Counter(map(print_formula, sr.suc))
    if Counter(map(print_formula, sc.ant)) != want_ant or Counter(map(print_formula, sc.suc)) != want_suc:
        raise _fail(StepErrorKind.SCHEMA_MISMATCH, "cut conclusion sides do not add up")


def _check_merge(app: RuleApp, premises: Sequence[Hypersequent], conclusion: Hypersequent) -> None:
    if len(app.pseq) != 2:
        raise _fail(StepErrorKind.BAD_ADDRESSING, "merge requires pseq=[i, j]")
    (premise,) = premises
    i, j = app.pseq
    if i == j:
        raise _fail(StepErrorKind.BAD_ADDRESSING, "merge needs two distinct premise sequents")
    _check_index(premise, i, "pseq[0]")
    _check_index(premise, j, "pseq[1]")
    _check_index(conclusion, app.seq, "seq")
    s1, s2, sc = premise[i], premise[j], conclusion[app.seq]
    if not (s1.sort is s2.sort is sc.sort):
        raise _fail(StepErrorKind.SORT_VIOLATION, "merge sequents must share one sort")
    if _ctx_counter(premise, [i, j]) != _ctx_counter(conclusion, [app.seq]):
        raise _fail(StepErrorKind.CONTEXT_MISMATCH, "merge context changed")
    if Counter(map(print_formula, sc.ant)) != Counter(map(print_formula, s1.ant + s2.ant)) or Counter(
        map(print_formula, sc.suc)
    ) != Counter(map(print_formula, s1.suc + s2.suc)):
        raise _fail(StepErrorKind.SCHEMA_MISMATCH, "merge conclusion sides do not add up")


# ---------------------------------------------------------------------------
# Positional maps, used by the proof transformations.  They describe, for an
# aligned application (premises exactly as `expected_premises` builds them,
# merge/cut principals appended last), where each conclusion sequent comes
# from in each premise.  A conclusion position maps to a list of premise
# positions (empty when the rule introduces the sequent there).


def premise_layout(app: RuleApp, conclusion: Hypersequent) -> list[dict[int, list[int]]]:
    r = app.rule
    n = len(conclusion)
    arity = rule_arity(r)

    def identity() -> dict[int, list[int]]:
        return {i: [i] for i in range(n)}

    if arity == 0:
        return []

    if r in (
        RuleId.AND_L1,
        RuleId.AND_L2,
        RuleId.NEG_L,
        RuleId.NEG_R,
        RuleId.IC_L,
        RuleId.IC_R,
        RuleId.IW_L,
        RuleId.IW_R,
        RuleId.T1,
        RuleId.T2,
        RuleId.NEC1,
        RuleId.FOUR_R,
        RuleId.NEC2,
        RuleId.D,
        RuleId.B2,
        RuleId.FIVE2,
        RuleId.B25,
    ):
        return [identity()]

    if r is RuleId.AND_R:
        return [identity(), identity()]

    if r is RuleId.EW:
        m = {}
        for i in range(n):
            if i == app.seq:
                m[i] = []
            else:
                m[i] = [i if i < app.seq else i - 1]
        return [m]

    if r in (RuleId.K, RuleId.FOUR_L, RuleId.B1, RuleId.FIVE1):
        m = {}
        for i in range(n):
            if i == app.seq:
                m[i] = []  # the boxed singleton is created here
            else:
                m[i] = [i if i < app.seq else i - 1]
        return [m]

    if r is RuleId.SPLIT:
        # premise = ctx + [merged] at the end
        m = {}
        ctx_pos = 0
        for i in range(n):
            if i in (app.seq, app.seq2):
                m[i] = [n - 2]
            else:
                m[i] = [ctx_pos]
                ctx_pos += 1
        return [m]

    if r is RuleId.MERGE:
        # aligned premise = ctx (conclusion order minus seq) + [s1, s2]
        m = {}
        ctx_pos = 0
        for i in range(n):
            if i == app.seq:
                m[i] = [n - 1, n]
            else:
                m[i] = [ctx_pos]
                ctx_pos += 1
        return [m]

    if r is RuleId.CUT:
        # aligned premises = ctx + [principal] each
        left = {}
        right = {}
        ctx_pos = 0
        for i in range(n):
            if i == app.seq:
                left[i] = [n - 1]
                right[i] = [n - 1]
            else:
                left[i] = [ctx_pos]
                right[i] = [ctx_pos]
                ctx_pos += 1
        return [left, right]

    raise ValueError(f"no layout for {r}")

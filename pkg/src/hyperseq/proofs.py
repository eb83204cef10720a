"""Proof trees, whole-proof checking, realignment and the file format.

A proof is *aligned* when every node's premises are exactly the canonical
hypersequents `expected_premises` builds (merge/cut principals appended
last, contexts in conclusion order).  Checking tolerates permutations;
the transformations require aligned input and `align` produces it.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Sequence

from .calculus import (
    RULE_BY_NAME,
    RuleApp,
    RuleId,
    StepError,
    StepErrorKind,
    SystemId,
    check_step,
    expected_premises,
    rule_arity,
    system_rules,
)
from .syntax import (
    Formula,
    Hypersequent,
    ParseError,
    Sequent,
    parse_formula,
    parse_hypersequent,
    print_formula,
    print_hypersequent,
)


@dataclass(frozen=True)
class Proof:
    conclusion: Hypersequent
    app: RuleApp
    premises: tuple["Proof", ...] = ()

    @property
    def rule(self) -> RuleId:
        return self.app.rule

    def __repr__(self) -> str:
        return f"<{self.rule.value}: {print_hypersequent(self.conclusion)}>"

    def nodes(self, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], "Proof"]]:
        yield path, self
        for i, q in enumerate(self.premises):
            yield from q.nodes(path + (i,))

    def node_count(self) -> int:
        return 1 + sum(q.node_count() for q in self.premises)

    def rules_used(self) -> Counter:
        c: Counter = Counter()
        for _, node in self.nodes():
            c[node.rule] += 1
        return c

    def count_rule(self, rule: RuleId) -> int:
        return self.rules_used().get(rule, 0)


@dataclass
class CheckReport:
    ok: bool
    system: SystemId
    node_count: int
    rules_used: Counter
    failures: list[tuple[tuple[int, ...], StepError]] = field(default_factory=list)

    def summary(self) -> str:
        if self.ok:
            return f"ok: {self.node_count} nodes in {self.system.value}"
        first = self.failures[0]
        return f"FAIL at {list(first[0])}: {first[1]}"


def check_proof(p: Proof, sys: SystemId) -> CheckReport:
    allowed = system_rules(sys)
    failures: list[tuple[tuple[int, ...], StepError]] = []
    for path, node in p.nodes():
        if node.rule not in allowed:
            failures.append(
                (
                    path,
                    StepError(
                        StepErrorKind.SCHEMA_MISMATCH,
                        f"rule {node.rule.value} is not part of {sys.value}",
                    ),
                )
            )
            continue
        err = check_step(node.app, [q.conclusion for q in node.premises], node.conclusion)
        if err is not None:
            failures.append((path, err))
    return CheckReport(
        ok=not failures,
        system=sys,
        node_count=p.node_count(),
        rules_used=p.rules_used(),
        failures=failures,
    )


# ---------------------------------------------------------------------------
# Realignment


class AlignmentError(ValueError):
    pass


def _bijection(src: Sequence, dst: Sequence, key: Callable) -> list[int]:
    """For each src index, a distinct dst index with the same key."""
    buckets: dict = {}
    for j, d in enumerate(dst):
        buckets.setdefault(key(d), []).append(j)
    out = []
    for s in src:
        bucket = buckets.get(key(s))
        if not bucket:
            raise AlignmentError(f"no match for {s!r}")
        out.append(bucket.pop(0))
    return out


def _formula_perm(src: tuple[Formula, ...], dst: tuple[Formula, ...]) -> list[int]:
    return _bijection(src, dst, print_formula)


def realign(p: Proof, target: Hypersequent) -> Proof:
    """Equivalent proof whose conclusion is exactly `target` and whose whole
    subtree is aligned.  `target` must be the conclusion up to permutation
    of sequents and of formulas within sides."""
    seq_map = _bijection(p.conclusion.seqs, target.seqs, lambda s: s.key())

    def remap_seq(i: int) -> int:
        return seq_map[i]

    app = p.app
    new_app = replace(app, seq=remap_seq(app.seq) if _uses_seq(app.rule) else app.seq)
    if _uses_seq2(app.rule):
        new_app = replace(new_app, seq2=remap_seq(app.seq2))
    if _uses_idx(app.rule):
        side = _principal_side(app.rule)
        old_seq = p.conclusion[app.seq]
        new_seq = target[new_app.seq]
        perm = _formula_perm(
            old_seq.ant if side == "ant" else old_seq.suc,
            new_seq.ant if side == "ant" else new_seq.suc,
        )
        new_app = replace(new_app, idx=perm[app.idx])

    if app.rule is RuleId.MERGE:
        n = len(target)
        new_app = replace(new_app, pseq=(n - 1, n))
    if app.rule is RuleId.CUT:
        n = len(target)
        new_app = replace(new_app, pseq=(n - 1, n - 1))

    if rule_arity(app.rule) == 0:
        return Proof(target, new_app, ())

    if app.rule is RuleId.CUT:
        expected = _cut_aligned_premises(new_app, target, p)
    elif app.rule is RuleId.MERGE:
        expected = _merge_aligned_premises(new_app, target, p)
    else:
        expected = expected_premises(new_app, target)

    new_premises = tuple(realign(q, e) for q, e in zip(p.premises, expected))
    return Proof(target, new_app, new_premises)


def _cut_aligned_premises(app: RuleApp, target: Hypersequent, p: Proof) -> list[Hypersequent]:
    ctx = tuple(s for i, s in enumerate(target.seqs) if i != app.seq)
    old_left, old_right = p.premises
    il, ir = p.app.pseq
    s_l = old_left.conclusion[il]
    s_r = old_right.conclusion[ir]
    return [
        Hypersequent(ctx + (s_l,)),
        Hypersequent(ctx + (s_r,)),
    ]


def _merge_aligned_premises(app: RuleApp, target: Hypersequent, p: Proof) -> list[Hypersequent]:
    ctx = tuple(s for i, s in enumerate(target.seqs) if i != app.seq)
    (old,) = p.premises
    i, j = p.app.pseq
    return [Hypersequent(ctx + (old.conclusion[i], old.conclusion[j]))]


def align(p: Proof) -> Proof:
    return realign(p, p.conclusion)


_NO_SEQ = {RuleId.INIT_AX, RuleId.INIT_BOT, RuleId.NEC2}
_SEQ2_RULES = {RuleId.K, RuleId.FOUR_L, RuleId.B1, RuleId.FIVE1, RuleId.SPLIT}
_IDX_ANT = {RuleId.AND_L1, RuleId.AND_L2, RuleId.NEG_L, RuleId.IC_L, RuleId.IW_L, RuleId.T1}
_IDX_SUC = {RuleId.AND_R, RuleId.NEG_R, RuleId.IC_R, RuleId.IW_R}


def _uses_seq(r: RuleId) -> bool:
    return r not in _NO_SEQ


def _uses_seq2(r: RuleId) -> bool:
    return r in _SEQ2_RULES


def _uses_idx(r: RuleId) -> bool:
    return r in _IDX_ANT or r in _IDX_SUC


def _principal_side(r: RuleId) -> str:
    return "ant" if r in _IDX_ANT else "suc"


# ---------------------------------------------------------------------------
# File format: JSON tree with goals as hypersequent strings.


class ProofFormatError(ValueError):
    pass


def proof_to_obj(p: Proof) -> dict:
    args: dict = {}
    r = p.rule
    if _uses_seq(r):
        args["seq"] = p.app.seq
    if _uses_seq2(r):
        args["seq2"] = p.app.seq2
    if _uses_idx(r):
        args["idx"] = p.app.idx
    if p.app.formula is not None:
        args["formula"] = print_formula(p.app.formula)
    if p.app.pseq:
        args["pseq"] = list(p.app.pseq)
    return {
        "goal": print_hypersequent(p.conclusion),
        "rule": r.value,
        "args": args,
        "premises": [proof_to_obj(q) for q in p.premises],
    }


def proof_to_json(p: Proof, indent: int = 2) -> str:
    return json.dumps(proof_to_obj(p), indent=indent, sort_keys=True)


def proof_from_obj(obj: dict) -> Proof:
    try:
        goal = parse_hypersequent(obj["goal"])
        rule_name = obj["rule"]
    except KeyError as e:
        raise ProofFormatError(f"proof node missing field {e}")
    except ParseError as e:
        raise ProofFormatError(f"bad goal {obj.get('goal')!r}: {e}")
    if rule_name not in RULE_BY_NAME:
        raise ProofFormatError(f"unknown rule {rule_name!r}")
    args = obj.get("args", {})
    formula = None
    if args.get("formula") is not None:
        try:
            formula = parse_formula(args["formula"])
        except ParseError as e:
            raise ProofFormatError(f"bad formula in args: {e}")
    app = RuleApp(
        rule=RULE_BY_NAME[rule_name],
        seq=int(args.get("seq", 0)),
        seq2=int(args.get("seq2", 0)),
        idx=int(args.get("idx", 0)),
        formula=formula,
        pseq=tuple(args.get("pseq", ())),
    )
    premises = tuple(proof_from_obj(q) for q in obj.get("premises", []))
    return Proof(goal, app, premises)


def proof_from_json(text: str) -> Proof:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProofFormatError(f"not valid JSON: {e}")
    if not isinstance(obj, dict):
        raise ProofFormatError("proof file must hold a JSON object")
    return proof_from_obj(obj)


def end_matches(p: Proof, goal: Hypersequent) -> bool:
    return p.conclusion.key() == goal.key()

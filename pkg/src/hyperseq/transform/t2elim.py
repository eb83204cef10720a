"""Admissibility of T2: rewriting proofs to eliminate every T2 application.

The turnstile of the T2 premise is traced to its introduction points, the
region is retyped to plain sequents, and the introducing or crossing rules
are converted (K to T1+split, 4l to split, 4r to nec1, B2 to a column of
smaller-weight T2 applications that the outer loop removes next).
"""

from __future__ import annotations

from typing import Optional

from .. import builders as B
from ..calculus import Group, RuleId, SystemId, group_of
from ..proofs import Proof, align, realign
from ..syntax import Hypersequent, Sort
from .common import (
    TransformError,
    TransformTrace,
    WrongGroup,
    assert_checks,
    assert_same_end,
    default_fuel,
    find_node,
    premise_region,
    replace_at,
    subtree_at,
)


def _flip(h: Hypersequent, region: frozenset[int]) -> Hypersequent:
    seqs = [
        s.with_sort(Sort.PLAIN) if i in region else s for i, s in enumerate(h.seqs)
    ]
    return Hypersequent(tuple(seqs))


def _rewrite(node: Proof, region: frozenset[int], trace: TransformTrace) -> Proof:
    """Proof of node.conclusion with the region positions retyped plain."""
    if not region:
        return node
    trace.spend("t2-region")
    app, C = node.app, node.conclusion
    r = app.rule
    target = _flip(C, region)
    premises = [q.conclusion for q in node.premises]

    if r is RuleId.NEC2 and 0 in region:
        return node.premises[0]

    if r is RuleId.FOUR_R and app.seq in region:
        rest = premise_region(app, C, region - {app.seq}, premises)[0]
        q = _rewrite(node.premises[0], rest, trace)
        q = realign(q, _flip(premises[0], rest))
        return realign(B.nec1(q, app.seq), target)

    if r is RuleId.B2 and app.seq in region:
        q = node.premises[0]
        for i in range(len(C)):
            if i != app.seq:
                q = B.t2(q, i)
        return realign(q, target)

    if r is RuleId.EW and app.seq in region:
        rest = premise_region(app, C, region - {app.seq}, premises)[0]
        q = _rewrite(node.premises[0], rest, trace)
        q = realign(q, _flip(premises[0], rest))
        return realign(B.ew(q, C[app.seq].with_sort(Sort.PLAIN)), target)

    if r in (RuleId.K, RuleId.FOUR_L) and app.seq2 in region:
        rest = premise_region(app, C, region, premises)[0]
        q = _rewrite(node.premises[0], rest, trace)
        q = realign(q, _flip(premises[0], rest))
        f = app.seq2 - (1 if app.seq < app.seq2 else 0)
        if r is RuleId.K:
            q = B.t1(q, f, 0)
        q = B.split(q, f, 1, 0)
        return realign(q, target)

    if r in (RuleId.B1, RuleId.FIVE1) and app.seq in region:
        rest = premise_region(app, C, region - {app.seq}, premises)[0]
        q = _rewrite(node.premises[0], rest, trace)
        q = realign(q, _flip(premises[0], rest))
        f = app.seq2 - (1 if app.seq < app.seq2 else 0)
        if r is RuleId.B1:
            q = B.t1(q, f, 0)
        q = B.split(q, f, 1, 0)
        return realign(q, target)

    if r in (RuleId.FIVE2, RuleId.B25):
        raise TransformError(f"unexpected {r.value} while retyping a T2 region")

    # sort-generic rules plus any rule whose principals stay outside the
    # region: retype the region through and rebuild the same application.
    regions_up = premise_region(app, C, region, premises)
    new_premises = []
    for q, rg, old in zip(node.premises, regions_up, premises):
        nq = _rewrite(q, rg, trace)
        new_premises.append(realign(nq, _flip(old, rg)))
    rebuilt = Proof(target, app, tuple(new_premises))
    from ..calculus import check_step

    err = check_step(app, [q.conclusion for q in new_premises], target)
    if err is not None:
        raise TransformError(f"cannot retype {r.value} application: {err}")
    return rebuilt


def eliminate_T2(
    p: Proof, sys: SystemId, trace: Optional[TransformTrace] = None, validate: bool = True
) -> Proof:
    if group_of(sys) is Group.BETA:
        raise WrongGroup(f"T2 elimination needs a group alpha or gamma system, not {sys.value}")
    trace = trace if trace is not None else TransformTrace(fuel=default_fuel())
    original = p
    p = align(p)
    while True:
        path = find_node(p, lambda n: n.rule is RuleId.T2)
        if path is None:
            break
        node = subtree_at(p, path)
        trace.spend("t2-eliminate", node, node)
        new_sub = _rewrite(node.premises[0], frozenset({node.app.seq}), trace)
        p = replace_at(p, path, new_sub)
    if validate:
        assert_same_end(original, p)
        assert_checks(p, sys, "eliminate_T2")
        if any(n.rule is RuleId.T2 for _, n in p.nodes()):
            raise TransformError("a T2 application survived elimination")
    return p

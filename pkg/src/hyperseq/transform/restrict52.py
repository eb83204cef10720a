"""Restricting 52 applications so each sits directly on an initial-shaped
principal sequent (A => A from A -> A, bot => from bot ->).

The plain turnstile above a 52 principal is traced to its introductions and
retyped modalized: nec1 becomes 4r, D/T2 introductions vanish, the initial
sequent keeps a restricted 52 on top, and K/4l-created singletons are
flipped with 5_1, which leaves an empty plain sequent behind.  Those
residues ride down the proof (every rule tolerates an extra context
sequent except the all-modalized ones, where they are first merged away
into a plain sequent, a content no-op).
"""

from __future__ import annotations

from typing import Optional

from .. import builders as B
from ..calculus import RuleId, SystemId
from ..proofs import Proof, align, realign
from ..syntax import Hypersequent, Sequent, Sort
from .common import (
    TransformError,
    TransformTrace,
    WrongSystem,
    apply_original,
    assert_checks,
    assert_same_end,
    default_fuel,
    find_node,
    premise_region,
    subtree_at,
)

_EMPTY_PLAIN = Sequent(Sort.PLAIN)

RESTRICTABLE = {SystemId.K45, SystemId.KD45, SystemId.S5}


def is_restricted_52(node: Proof) -> bool:
    if node.rule is not RuleId.FIVE2:
        return True
    s = node.premises[0].conclusion[node.app.seq]
    if s.sort is not Sort.PLAIN:
        return False
    if len(s.ant) == 1 and len(s.suc) == 1 and s.ant[0] == s.suc[0]:
        return True
    from ..syntax import Bottom

    return len(s.ant) == 1 and isinstance(s.ant[0], Bottom) and not s.suc


def _flip_modal(h: Hypersequent, region: frozenset[int]) -> Hypersequent:
    seqs = [s.with_sort(Sort.MODAL) if i in region else s for i, s in enumerate(h.seqs)]
    return Hypersequent(tuple(seqs))


def _kill_residues(p: Proof, want: Hypersequent, nres: int) -> tuple[Proof, int]:
    """Merge trailing empty plain residues into any plain sequent of want."""
    while nres:
        plain = next(
            (j for j, s in enumerate(want.seqs) if s.sort is Sort.PLAIN), None
        )
        if plain is None:
            break
        p = B.merge(p, plain, len(want))
        nres -= 1
        tail = tuple(_EMPTY_PLAIN for _ in range(nres))
        p = realign(p, Hypersequent(want.seqs + tail))
    return p, nres


def _with_tail(h: Hypersequent, nres: int) -> Hypersequent:
    return Hypersequent(h.seqs + tuple(_EMPTY_PLAIN for _ in range(nres)))


class _Restricter:
    def __init__(self, sys: SystemId, trace: TransformTrace):
        self.sys = sys
        self.trace = trace

    def _flip_singleton(self, p: Proof, pos: int, want: Hypersequent) -> tuple[Proof, int]:
        """Turn the `box A ->` sequent at pos into `box A =>` via 5_1; the
        empty plain leftover becomes a residue (killed here if possible)."""
        p = B.five1(p, pos, 0)
        # builders.five1 appends the modalized singleton; the gutted plain
        # sequent stays where it was, now an empty residue
        p = realign(p, _with_tail(want, 1))
        return _kill_residues(p, want, 1)

    def run(self, node: Proof, region: frozenset[int]) -> tuple[Proof, int]:
        if not region:
            return node, 0
        self.trace.spend("restrict52-region")
        app, C = node.app, node.conclusion
        r = app.rule
        target = _flip_modal(C, region)
        premises = [q.conclusion for q in node.premises]

        if r is RuleId.INIT_AX:
            return B.five2(node, 0), 0
        if r is RuleId.INIT_BOT:
            return B.five2(node, 0), 0

        if r is RuleId.NEC1 and app.seq in region:
            rest = premise_region(app, C, region - {app.seq}, premises)[0]
            q, nres = self.run(node.premises[0], rest) if rest else (node.premises[0], 0)
            q = realign(q, _with_tail(_flip_modal(premises[0], rest), nres))
            out = B.four_r(q, app.seq)
            out = realign(out, _with_tail(target, nres))
            return _kill_residues(out, target, nres)

        if r is RuleId.D and app.seq in region:
            rest = premise_region(app, C, region - {app.seq}, premises)[0]
            q, nres = self.run(node.premises[0], rest) if rest else (node.premises[0], 0)
            q = realign(q, _with_tail(target, nres))
            return _kill_residues(q, target, nres)

        if r is RuleId.T2 and app.seq in region:
            rest = premise_region(app, C, region - {app.seq}, premises)[0]
            q, nres = self.run(node.premises[0], rest) if rest else (node.premises[0], 0)
            q = realign(q, _with_tail(target, nres))
            return _kill_residues(q, target, nres)

        if r is RuleId.EW and app.seq in region:
            rest = premise_region(app, C, region - {app.seq}, premises)[0]
            q, nres = self.run(node.premises[0], rest) if rest else (node.premises[0], 0)
            q = realign(q, _with_tail(_flip_modal(premises[0], rest), nres))
            out = B.ew(q, C[app.seq].with_sort(Sort.MODAL))
            out = realign(out, _with_tail(target, nres))
            return _kill_residues(out, target, nres)

        if r in (RuleId.K, RuleId.FOUR_L) and app.seq in region:
            rest = premise_region(app, C, region - {app.seq}, premises)[0]
            q, nres = self.run(node.premises[0], rest) if rest else (node.premises[0], 0)
            prem_flipped = _flip_modal(premises[0], rest)
            q = realign(q, _with_tail(prem_flipped, nres))
            feed = app.seq2 - (1 if app.seq < app.seq2 else 0)
            out = B.k_rule(q, feed, 0) if r is RuleId.K else B.four_l(q, feed, 0)
            # pre_want: the conclusion with everything but the new singleton
            # already retyped
            pre_want = _flip_modal(C, region - {app.seq})
            out = realign(out, _with_tail(pre_want, nres))
            out, nres = _kill_residues(out, pre_want, nres)
            out2, extra = self._flip_singleton(out, app.seq, target)
            return out2, nres + extra

        if r is RuleId.FIVE1 and app.seq2 in region:
            # retype the premise, rebuild as 4l, then flip the singleton
            rest = premise_region(app, C, region, premises)[0]
            q, nres = self.run(node.premises[0], rest)
            prem_flipped = _flip_modal(premises[0], rest)
            q = realign(q, _with_tail(prem_flipped, nres))
            feed = app.seq2 - (1 if app.seq < app.seq2 else 0)
            out = B.four_l(q, feed, 0)
            pre_want = Hypersequent(
                tuple(
                    s.with_sort(Sort.PLAIN) if i == app.seq else s
                    for i, s in enumerate(target.seqs)
                )
            )
            out = realign(out, _with_tail(pre_want, nres))
            out, nres = _kill_residues(out, pre_want, nres)
            out2, extra = self._flip_singleton(out, app.seq, target)
            return out2, nres + extra

        if r is RuleId.SPLIT and (app.seq in region or app.seq2 in region):
            raise TransformError(
                "a split acts on the traced plain turnstile; this shape is outside "
                "the supported 52-restriction fragment"
            )
        if r in (RuleId.FIVE2, RuleId.B25, RuleId.B1, RuleId.B2, RuleId.NEC2):
            raise TransformError(f"unexpected {r.value} while retyping a 52 region")

        # generic rebuild
        regions_up = premise_region(app, C, region, premises)
        new_premises = []
        nres_all = []
        for q, rg, old in zip(node.premises, regions_up, premises):
            nq, nres = self.run(q, rg) if rg else (q, 0)
            nq = realign(nq, _with_tail(_flip_modal(old, rg), nres))
            new_premises.append(nq)
            nres_all.append(nres)
        need = max(nres_all) if nres_all else 0
        padded = []
        for nq, nres in zip(new_premises, nres_all):
            for _ in range(need - nres):
                nq = B.ew(nq, _EMPTY_PLAIN)
            padded.append(nq)
        out = apply_original(node, padded)
        out = realign(out, _with_tail(target, need))
        return _kill_residues(out, target, need)


def _graft(p: Proof, path: tuple[int, ...], new_sub: Proof, nres: int, sys: SystemId) -> tuple[Proof, int]:
    """Replace the subtree at path, letting trailing residues ride down and
    die at the first plain sequent."""
    if not path:
        return new_sub, nres
    i = path[0]
    sub, nres = _graft(p.premises[i], path[1:], new_sub, nres, sys)
    premises = list(p.premises)
    if nres == 0:
        premises[i] = realign(sub, premises[i].conclusion)
        return Proof(p.conclusion, p.app, tuple(premises)), 0
    r = p.rule
    if r in (RuleId.NEC2, RuleId.FIVE2, RuleId.B25):
        # merge the residues into the plain principal before the flip
        want = premises[i].conclusion
        sub = realign(sub, _with_tail(want, nres))
        plain = next(j for j, s in enumerate(want.seqs) if s.sort is Sort.PLAIN)
        while nres:
            sub = B.merge(sub, plain, len(want))
            nres -= 1
            sub = realign(sub, _with_tail(want, nres))
        premises[i] = sub
        return Proof(p.conclusion, p.app, tuple(premises)), 0
    # generic: extras ride; pad sibling premises
    tails = tuple(_EMPTY_PLAIN for _ in range(nres))
    new_list = []
    for j, q in enumerate(p.premises):
        if j == i:
            new_list.append(realign(sub, Hypersequent(q.conclusion.seqs + tails)))
        else:
            padded = q
            for _ in range(nres):
                padded = B.ew(padded, _EMPTY_PLAIN)
            new_list.append(padded)
    out = apply_original(p, new_list)
    out = realign(out, Hypersequent(p.conclusion.seqs + tails))
    out, nres = _kill_residues(out, p.conclusion, nres)
    return out, nres


def restrict_52(
    p: Proof, sys: SystemId, trace: Optional[TransformTrace] = None, validate: bool = True
) -> Proof:
    if sys not in RESTRICTABLE:
        raise WrongSystem(
            f"the 52 restriction needs both the 5 and 4 rules ({sys.value} lacks them)"
        )
    trace = trace if trace is not None else TransformTrace(fuel=default_fuel())
    original = p
    p = align(p)
    while True:
        path = find_node(p, lambda n: not is_restricted_52(n))
        if path is None:
            break
        trace.spend("restrict52-step")
        node = subtree_at(p, path)
        worker = _Restricter(sys, trace)
        new_sub, nres = worker.run(node.premises[0], frozenset({node.app.seq}))
        new_sub = realign(new_sub, _with_tail(node.conclusion, nres))
        p, nres = _graft(p, path, new_sub, nres, sys)
        if nres:
            raise TransformError(
                "a 5_1 residue reached the end hypersequent; the end would change"
            )
    if validate:
        assert_same_end(original, p)
        assert_checks(p, sys, "restrict_52")
        for _, n in p.nodes():
            if not is_restricted_52(n):
                raise TransformError("an unrestricted 52 application survived")
    return p

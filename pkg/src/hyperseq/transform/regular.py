"""Regular proofs: the regularity predicate and the regularization rewrite.

A regular proof has no 4r application, and every nec1/D sits on top of a
pure K/4l column that starts from a single modalized sequent.  The rewrite
processes one uppermost nec1/4r/D at a time: the modalized turnstile above
it is traced to its introductions (nec2 or ew after atomization) and the
subproof is reorganized into either a weakening of the rest (the turnstile
came from nowhere useful) or a deferred-peel column in regular form.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .. import builders as B
from ..calculus import Group, RuleId, SystemId, group_of, premise_layout
from ..proofs import Proof, align, realign
from ..syntax import Box, Formula, Hypersequent, Sequent, Sort, print_formula
from .atomize import atomize_initials
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
from .t2elim import eliminate_T2


@dataclass
class RegularityReport:
    regular: bool
    offending: list[tuple[int, ...]]


def _column_walk(node: Proof) -> Optional[Proof]:
    """From a nec1/D node, walk up its K/4l column; returns the column top
    (whose conclusion must be a single modalized sequent) or None if the
    shape is not the regular one."""
    c = node.conclusion
    seq = node.app.seq
    for i, s in enumerate(c.seqs):
        if i == seq:
            continue
        if not (s.sort is Sort.PLAIN and len(s.ant) == 1 and not s.suc and isinstance(s.ant[0], Box)):
            return None
    main = seq
    cur = node.premises[0]
    while cur.rule in (RuleId.K, RuleId.FOUR_L) and cur.app.seq2 == main:
        main = main - (1 if cur.app.seq < main else 0)
        cur = cur.premises[0]
    if len(cur.conclusion) == 1 and cur.conclusion[0].sort is Sort.MODAL:
        return cur
    return None


def _column_info(node: Proof) -> tuple[Proof, list[str]]:
    """The column top above a regular nec1/D plus the peel kinds aligned
    with the top sequent's antecedent order."""
    main = node.app.seq
    cur = node.premises[0]
    kinds: list[str] = []
    while cur.rule in (RuleId.K, RuleId.FOUR_L) and cur.app.seq2 == main:
        kinds.append("4l" if cur.rule is RuleId.FOUR_L else "k")
        main = main - (1 if cur.app.seq < main else 0)
        cur = cur.premises[0]
    kinds.reverse()
    if len(cur.conclusion) != 1:
        raise TransformError("nec1/D application is not in regular form")
    return cur, kinds


def is_regular(p: Proof, sys: SystemId) -> RegularityReport:
    if group_of(sys) is not Group.ALPHA:
        raise WrongGroup(f"regularity is defined for group alpha, not {sys.value}")
    offending = []
    for path, node in p.nodes():
        if node.rule is RuleId.FOUR_R:
            offending.append(path)
        elif node.rule in (RuleId.NEC1, RuleId.D):
            if _column_walk(node) is None:
                offending.append(path)
    return RegularityReport(regular=not offending, offending=offending)


# ---------------------------------------------------------------------------
# The region recursion.  Results:
#   ("A", proof)        -- proof of (node.conclusion minus the region)
#   ("B", base, info)   -- base proves exactly the enriched region sequents;
#                          info[i] = (region position, peel list) for base
#                          position i; peels are ("k"|"4l", formula) pairs.

Peels = tuple[tuple[str, Formula], ...]
Info = list[tuple[int, Peels]]


def _drop(h: Hypersequent, region: frozenset[int]) -> Hypersequent:
    kept = [s for i, s in enumerate(h.seqs) if i not in region]
    return Hypersequent(tuple(kept))


def _shift(pos: int, region: frozenset[int]) -> int:
    return pos - sum(1 for r in region if r < pos)


def _invert_layout(layout: dict[int, list[int]]) -> dict[int, int]:
    out: dict[int, int] = {}
    for c, feeds in layout.items():
        for q in feeds:
            out[q] = c
    return out


_GENERIC_UNARY = {
    RuleId.AND_L1,
    RuleId.AND_L2,
    RuleId.NEG_L,
    RuleId.NEG_R,
    RuleId.IC_L,
    RuleId.IC_R,
    RuleId.IW_L,
    RuleId.IW_R,
    RuleId.T1,
}


def _find_ant(s: Sequent, f: Formula, skip: int = 0) -> int:
    hits = [i for i, g in enumerate(s.ant) if g == f]
    if len(hits) <= skip:
        raise TransformError(f"formula {f!r} not found in antecedent")
    return hits[skip]


def _find_suc(s: Sequent, f: Formula) -> int:
    for i, g in enumerate(s.suc):
        if g == f:
            return i
    raise TransformError(f"formula {f!r} not found in succedent")


class _Regularizer:
    def __init__(self, sys: SystemId, trace: TransformTrace):
        self.sys = sys
        self.trace = trace

    # -- rebuilding on an A-result (region dropped) -------------------------

    def _rebuild_without(self, node: Proof, region: frozenset[int], premise_regions, a_proofs: Sequence[Proof]) -> Proof:
        app, C = node.app, node.conclusion
        r = app.rule
        exact = [
            realign(pf, _drop(q.conclusion, rg))
            for pf, q, rg in zip(a_proofs, node.premises, premise_regions)
        ]
        seq = _shift(app.seq, region)
        if r in _GENERIC_UNARY:
            (pf,) = exact
            s = C[app.seq]
            if r is RuleId.AND_L1:
                return B.and_l1(pf, seq, app.idx, s.ant[app.idx].right)
            if r is RuleId.AND_L2:
                return B.and_l2(pf, seq, app.idx, s.ant[app.idx].left)
            if r is RuleId.NEG_L:
                return B.neg_l(pf, seq, len(pf.conclusion[seq].suc) - 1)
            if r is RuleId.NEG_R:
                return B.neg_r(pf, seq, 0)
            if r is RuleId.IC_L:
                return B.ic_l(pf, seq, app.idx, app.idx + 1)
            if r is RuleId.IC_R:
                return B.ic_r(pf, seq, app.idx, app.idx + 1)
            if r is RuleId.IW_L:
                return B.iw_l(pf, seq, s.ant[app.idx])
            if r is RuleId.IW_R:
                return B.iw_r(pf, seq, s.suc[app.idx])
            if r is RuleId.T1:
                return B.t1(pf, seq, app.idx)
        if r is RuleId.EW:
            (pf,) = exact
            return B.ew(pf, C[app.seq])
        if r in (RuleId.K, RuleId.FOUR_L):
            (pf,) = exact
            seq2 = _shift(app.seq2, region)
            return B.k_rule(pf, seq2, 0) if r is RuleId.K else B.four_l(pf, seq2, 0)
        if r is RuleId.MERGE:
            (pf,) = exact
            n = len(pf.conclusion)
            return B.merge(pf, n - 2, n - 1)
        if r is RuleId.SPLIT:
            (pf,) = exact
            n = len(pf.conclusion)
            s = C[app.seq]
            return B.split(pf, n - 1, len(s.ant), len(s.suc))
        if r is RuleId.AND_R:
            return B.and_r(exact[0], exact[1], seq, app.idx)
        if r is RuleId.CUT:
            n = len(exact[0].conclusion)
            return B.cut(exact[0], n - 1, exact[1], n - 1, app.formula)
        raise TransformError(f"cannot rebuild {r.value} without its region")

    # -- the main recursion --------------------------------------------------

    def run(self, node: Proof, region: frozenset[int]):
        self.trace.spend("regularize-region")
        app, C = node.app, node.conclusion
        r = app.rule
        premises = [q.conclusion for q in node.premises]

        if r in (RuleId.INIT_AX, RuleId.INIT_BOT):
            raise TransformError("a modalized initial sequent survived atomization")
        if r in (RuleId.NEC1, RuleId.FOUR_R, RuleId.D, RuleId.T2):
            raise TransformError(f"unexpected {r.value} above an uppermost nec1/4r/D")
        if r in (RuleId.B1, RuleId.B2, RuleId.FIVE1, RuleId.FIVE2, RuleId.B25):
            raise TransformError(f"{r.value} cannot occur in a group alpha proof")

        if r is RuleId.NEC2 and 0 in region:
            return ("B", node, [(0, ())])

        if r is RuleId.EW and app.seq in region:
            rest = premise_region(app, C, region - {app.seq}, premises)[0]
            if not rest:
                return ("A", node.premises[0])
            res = self.run(node.premises[0], rest)
            if res[0] == "A":
                return res
            _, base, info = res
            inv = _invert_layout(premise_layout(app, C)[0])
            info2 = [(inv[pos], peels) for pos, peels in info]
            base2 = B.ew(base, C[app.seq])
            return ("B", base2, info2 + [(app.seq, ())])

        if r in (RuleId.K, RuleId.FOUR_L) and app.seq2 in region:
            rest = premise_region(app, C, region, premises)[0]
            res = self.run(node.premises[0], rest)
            if res[0] == "A":
                return ("A", B.ew(res[1], C[app.seq]))
            _, base, info = res
            inv = _invert_layout(premise_layout(app, C)[0])
            feed = [q for q in rest if inv[q] == app.seq2][0]
            moved = node.premises[0].conclusion[feed].ant[0]
            kind = "k" if r is RuleId.K else "4l"
            info2 = []
            for bpos, (pos, peels) in enumerate(info):
                cpos = inv[pos]
                if pos == feed:
                    info2.append((cpos, ((kind, moved),) + peels))
                else:
                    info2.append((cpos, peels))
            return ("B", base, info2)

        principal_in_region = False
        if r in _GENERIC_UNARY or r is RuleId.AND_R or r is RuleId.CUT:
            principal_in_region = app.seq in region
        if r is RuleId.MERGE:
            principal_in_region = app.seq in region

        if principal_in_region and r in _GENERIC_UNARY:
            res = self.run(node.premises[0], region)
            if res[0] == "A":
                return res
            _, base, info = res
            b = next(i for i, (pos, _) in enumerate(info) if pos == app.seq)
            base2 = self._rebuild_on_base(node, base, b)
            return ("B", base2, info)

        if principal_in_region and r is RuleId.MERGE:
            rest = premise_region(app, C, region, premises)[0]
            res = self.run(node.premises[0], rest)
            if res[0] == "A":
                return res
            _, base, info = res
            layout = premise_layout(app, C)[0]
            f1, f2 = layout[app.seq]
            b1 = next(i for i, (pos, _) in enumerate(info) if pos == f1)
            b2 = next(i for i, (pos, _) in enumerate(info) if pos == f2)
            merged = B.merge(base, b1, b2)
            inv = _invert_layout(layout)
            info2 = [
                (inv[pos], peels)
                for i, (pos, peels) in enumerate(info)
                if i not in (b1, b2)
            ]
            info2.append((app.seq, info[b1][1] + info[b2][1]))
            return ("B", merged, info2)

        if principal_in_region and r in (RuleId.AND_R, RuleId.CUT):
            res1 = self.run(node.premises[0], region)
            if res1[0] == "A":
                return res1
            res2 = self.run(node.premises[1], region)
            if res2[0] == "A":
                return res2
            _, base1, info1 = res1
            _, base2, info2 = res2
            if r is RuleId.AND_R:
                base1, base2, info = self._pad_to_common(base1, info1, base2, info2, share_principal=True)
                b = next(i for i, (pos, _) in enumerate(info) if pos == app.seq)
                f = C[app.seq].suc[app.idx]
                pos1 = _find_suc(base1.conclusion[b], f.left)
                out = B.and_r(base1, base2, b, pos1)
                return ("B", out, info)
            # cut: pad the shared context, concatenate the principal peels
            base1, base2, info = self._pad_to_common(
                base1, info1, base2, info2, share_principal=False, principal=app.seq
            )
            b = next(i for i, (pos, _) in enumerate(info) if pos == app.seq)
            out = B.cut(base1, b, base2, b, app.formula)
            p1 = next(peels for pos, peels in info1 if pos == app.seq)
            p2 = next(peels for pos, peels in info2 if pos == app.seq)
            info_out = [
                (pos, peels) for pos, peels in info if pos != app.seq
            ]
            # builders.cut puts the merged sequent last
            info_out.append((app.seq, p1 + p2))
            return ("B", out, info_out)

        # generic: principals outside the region
        regions_up = premise_region(app, C, region, premises)
        results = []
        for q, rg in zip(node.premises, regions_up):
            res = self.run(q, rg) if rg else ("A", q)
            if res[0] == "B":
                _, base, info = res
                inv = _invert_layout(
                    premise_layout(app, C)[len(results)]
                )
                info2 = [(inv[pos], peels) for pos, peels in info]
                return ("B", base, info2)
            results.append(res[1])
        return ("A", self._rebuild_without(node, region, regions_up, results))

    def _rebuild_on_base(self, node: Proof, base: Proof, b: int) -> Proof:
        """Replays a sort-generic unary rule on the enriched base sequent."""
        app, C = node.app, node.conclusion
        r = app.rule
        s = C[app.seq]
        prem = node.premises[0].conclusion[app.seq]
        bs = base.conclusion[b]
        if r is RuleId.AND_L1:
            f = s.ant[app.idx]
            return B.and_l1(base, b, _find_ant(bs, f.left), f.right)
        if r is RuleId.AND_L2:
            f = s.ant[app.idx]
            return B.and_l2(base, b, _find_ant(bs, f.right), f.left)
        if r is RuleId.NEG_L:
            f = s.ant[app.idx]
            return B.neg_l(base, b, _find_suc(bs, f.child))
        if r is RuleId.NEG_R:
            f = s.suc[app.idx]
            return B.neg_r(base, b, _find_ant(bs, f.child))
        if r is RuleId.IC_L:
            f = s.ant[app.idx]
            i = _find_ant(bs, f)
            j = _find_ant(bs, f, skip=1)
            return B.ic_l(base, b, i, j)
        if r is RuleId.IC_R:
            f = s.suc[app.idx]
            hits = [i for i, g in enumerate(bs.suc) if g == f]
            return B.ic_r(base, b, hits[0], hits[1])
        if r is RuleId.IW_L:
            return B.iw_l(base, b, s.ant[app.idx])
        if r is RuleId.IW_R:
            return B.iw_r(base, b, s.suc[app.idx])
        if r is RuleId.T1:
            f = s.ant[app.idx]
            return B.t1(base, b, _find_ant(bs, f.child))
        raise TransformError(f"no base replay for {r.value}")

    def _pad_to_common(self, base1: Proof, info1: Info, base2: Proof, info2: Info, share_principal: bool, principal: Optional[int] = None):
        """iw the two bases so their enrichments agree (multiset max); for a
        cut the principal entries stay as they are."""
        by_pos2 = {pos: (i, peels) for i, (pos, peels) in enumerate(info2)}
        out_info: Info = []
        for i1, (pos, peels1) in enumerate(info1):
            i2, peels2 = by_pos2[pos]
            if not share_principal and pos == principal:
                out_info.append((pos, peels1))
                continue
            c1 = Counter((k, print_formula(f)) for k, f in peels1)
            c2 = Counter((k, print_formula(f)) for k, f in peels2)
            target = c1 | c2
            lookup = {(k, print_formula(f)): f for k, f in peels1 + peels2}
            for key, n in sorted(target.items()):
                f = lookup[key]
                for _ in range(n - c1[key]):
                    base1 = B.iw_l(base1, i1, f)
                for _ in range(n - c2[key]):
                    base2 = B.iw_l(base2, i2, f)
            merged_peels = tuple((key[0], lookup[key]) for key in sorted(target.elements()))
            out_info.append((pos, merged_peels))
        # align base2's sequent order with base1's info order
        order = [by_pos2[pos][0] for pos, _ in info1]
        target_seqs = tuple(base2.conclusion[i] for i in order)
        base2 = realign(base2, Hypersequent(target_seqs))
        return base1, base2, out_info


def _process_one(p: Proof, path: tuple[int, ...], sys: SystemId, trace: TransformTrace) -> Proof:
    node = subtree_at(p, path)
    q = node.premises[0]
    s = node.app.seq
    reg = _Regularizer(sys, trace)
    res = reg.run(q, frozenset({s}))
    if res[0] == "A":
        pf = res[1]
        new_sub = B.ew(pf, node.conclusion[s])
        return replace_at(p, path, new_sub)
    _, base, info = res
    (pos, peels) = info[0]
    assert pos == s and len(info) == 1
    col = base
    for kind, f in peels:
        idx = _find_ant(col.conclusion[0], f)
        col = B.k_rule(col, 0, idx) if kind == "k" else B.four_l(col, 0, idx)
    singles = [Sequent(Sort.PLAIN, (Box(f) if kind == "k" else f,), ()) for kind, f in peels]
    a = len(peels)
    if node.rule is RuleId.NEC1:
        out = B.nec1(col, 0)
    elif node.rule is RuleId.D:
        out = B.d_rule(col, 0)
    else:  # 4r: replace with the regular nec1 and rebox via nec2 + 4l
        out = B.nec1(col, 0)
        if a:
            out = B.merge_all(out, list(range(1, a + 1)) + [0])
        out = B.nec2(out)
        for kind, f in peels:
            g = Box(f) if kind == "k" else f
            out = B.four_l(out, 0, _find_ant(out.conclusion[0], g))
    # weaken the untouched context back in
    have = Counter(sq.key() for i, sq in enumerate(out.conclusion.seqs) if i != 0)
    need = Counter(sq.key() for i, sq in enumerate(node.conclusion.seqs) if i != s)
    leftover = need - have
    surplus = have - need
    if surplus:
        # a column singleton was consumed below its creation (weakened or
        # merged into another sequent); absorb it into a context sequent
        # that still contains it
        out, leftover = _absorb_surplus(out, surplus, leftover, node.conclusion)
    by_key = {sq.key(): sq for sq in node.conclusion.seqs}
    for key, n in sorted(leftover.items()):
        for _ in range(n):
            out = B.ew(out, by_key[key])
    return replace_at(p, path, out)


def _absorb_surplus(out: Proof, surplus: Counter, leftover: Counter, target: Hypersequent) -> tuple[Proof, Counter]:
    """Weaken unmatched rebuilt singletons up to leftover context sequents
    that extend them; raise when no absorption exists."""
    from ..syntax import print_formula

    by_key = {sq.key(): sq for sq in target.seqs}
    for key in sorted(surplus.elements()):
        pos = next(
            (
                i
                for i, sq in enumerate(out.conclusion.seqs)
                if i != 0 and sq.key() == key
            ),
            None,
        )
        if pos is None:
            raise TransformError("lost track of a rebuilt column singleton")
        s = out.conclusion[pos]
        host_key = None
        for cand, n in sorted(leftover.items()):
            if n <= 0:
                continue
            t = by_key[cand]
            if t.sort is not s.sort:
                continue
            if not (
                Counter(map(print_formula, s.ant)) - Counter(map(print_formula, t.ant))
            ) and not (
                Counter(map(print_formula, s.suc)) - Counter(map(print_formula, t.suc))
            ):
                host_key = cand
                break
        if host_key is None:
            raise TransformError(
                "a column singleton was consumed before the nec1/D application "
                "in a way weakening cannot restore; unsupported fragment"
            )
        out = B.weaken_to(out, pos, by_key[host_key])
        leftover = leftover - Counter([host_key])
    return out, leftover


def _needs_processing(node: Proof) -> bool:
    if node.rule is RuleId.FOUR_R:
        return True
    if node.rule in (RuleId.NEC1, RuleId.D):
        return _column_walk(node) is None
    return False


def regularize(
    p: Proof, sys: SystemId, trace: Optional[TransformTrace] = None, validate: bool = True
) -> Proof:
    if group_of(sys) is not Group.ALPHA:
        raise WrongGroup(f"regularization needs a group alpha system, not {sys.value}")
    trace = trace if trace is not None else TransformTrace(fuel=default_fuel())
    original = p
    p = atomize_initials(align(p))
    p = eliminate_T2(p, sys, trace, validate=False)
    while True:
        path = find_node(p, _needs_processing)
        if path is None:
            break
        trace.spend("regularize-step")
        p = _process_one(p, path, sys, trace)
    if validate:
        assert_same_end(original, p)
        assert_checks(p, sys, "regularize")
        rep = is_regular(p, sys)
        if not rep.regular:
            raise TransformError(f"regularization left offending nodes at {rep.offending}")
    return p

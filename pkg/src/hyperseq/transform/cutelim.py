"""Direct cut elimination for the groups alpha and beta.

The driver picks an uppermost cut, normalizes the subproofs above it
(atomization, T2 elimination and regularization for alpha, the 52
restriction for the 4-and-5 systems), reduces the cut formula to an atom
or a boxed formula, and then runs the topdown surgery: the ancestors of
the cut formula are rewritten from their introductions down, splicing the
other subproof in at the tops.  Boxed surgeries introduce cuts on the
unboxed formula, which recurse at smaller degree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .. import builders as B
from ..calculus import Group, RuleId, SystemId, group_of, system_rules
from ..proofs import Proof, align, realign
from ..syntax import (
    And,
    Atom,
    Bottom,
    Box,
    Formula,
    Hypersequent,
    Neg,
    Sequent,
    Sort,
    degree,
    print_formula,
)
from ..templates import five_lemma
from .atomize import atomize_initials
from .common import (
    TransformError,
    TransformTrace,
    WrongGroup,
    apply_original,
    assert_checks,
    assert_same_end,
    contract_duplicate_sequents,
    default_fuel,
    find_node,
    replace_at,
    subtree_at,
)
from .regular import _column_info, regularize
from .restrict52 import restrict_52
from .t2elim import eliminate_T2


Occ = tuple[int, int]  # (sequent position, formula index on the traced side)


def _content_match(concl_side, sources) -> list:
    """Greedy content bijection from conclusion formula positions to tagged
    premise positions; equal formulas are interchangeable."""
    out = []
    used = [False] * len(sources)
    for f in concl_side:
        hit = None
        for i, (tag, g) in enumerate(sources):
            if not used[i] and g == f:
                hit = i
                break
        if hit is None:
            raise TransformError(f"occurrence matching failed for {print_formula(f)}")
        used[hit] = True
        out.append(sources[hit][0])
    return out


# ---------------------------------------------------------------------------
# Occurrence maps: where a traced formula occurrence of the conclusion lives
# in the premises of an aligned application, or which introduction it is.


def _occ_up(node: Proof, side: str, occs: frozenset[Occ]):
    """Returns (per-premise occ sets, intros) where intros is a list of
    (kind, occ) for occurrences introduced at this node."""
    app, C = node.app, node.conclusion
    r = app.rule
    n_prem = len(node.premises)
    up: list[set[Occ]] = [set() for _ in range(n_prem)]
    intros: list[tuple[str, Occ]] = []

    def feed(i: int, occ: Occ) -> None:
        up[i].add(occ)

    for occ in occs:
        pos, idx = occ
        if r in (RuleId.INIT_AX, RuleId.INIT_BOT):
            intros.append(("ax" if r is RuleId.INIT_AX else "bot", occ))
            continue
        if r is RuleId.EW:
            if pos == app.seq:
                intros.append(("ew", occ))
            else:
                feed(0, (pos - (1 if pos > app.seq else 0), idx))
            continue
        if r in (RuleId.NEC2, RuleId.T2, RuleId.D, RuleId.B2, RuleId.FIVE2, RuleId.B25, RuleId.FOUR_R, RuleId.NEC1):
            if r is RuleId.NEC1 and side == "suc" and pos == app.seq:
                intros.append(("nec1", occ))
                continue
            if r is RuleId.FOUR_R and side == "suc" and pos == app.seq:
                intros.append(("4r", occ))
                continue
            feed(0, occ)
            continue
        if r in (RuleId.K, RuleId.FOUR_L, RuleId.B1, RuleId.FIVE1):
            shift = 1 if app.seq < pos else 0
            if pos == app.seq:
                if side == "ant" and r in (RuleId.K, RuleId.B1):
                    intros.append(("k" if r is RuleId.K else "b1", occ))
                elif side == "ant":
                    # 4l / 51 move the boxed formula out of the target sequent
                    f = app.seq2 - (1 if app.seq < app.seq2 else 0)
                    feed(0, (f, 0))
                else:
                    raise TransformError("traced succedent inside a boxed singleton")
            elif pos == app.seq2 and side == "ant":
                f = pos - shift
                feed(0, (f, idx + 1))
            else:
                feed(0, (pos - shift, idx))
            continue
        if r is RuleId.MERGE:
            # realignment may have reshuffled the merged sequent, so match the
            # conclusion occurrence against the premise parts by content
            prem = node.premises[0].conclusion
            m = len(prem)
            if pos == app.seq:
                s1, s2 = prem[m - 2], prem[m - 1]
                sources = [
                    ((0, (m - 2, i)), f)
                    for i, f in enumerate(s1.ant if side == "ant" else s1.suc)
                ] + [
                    ((0, (m - 1, i)), f)
                    for i, f in enumerate(s2.ant if side == "ant" else s2.suc)
                ]
                concl_side = C[pos].ant if side == "ant" else C[pos].suc
                target = _content_match(concl_side, sources)
                which, occ2 = target[idx]
                feed(which, occ2)
            else:
                feed(0, (pos - (1 if pos > app.seq else 0), idx))
            continue
        if r is RuleId.SPLIT:
            prem = node.premises[0].conclusion
            m = len(prem)
            if pos in (app.seq, app.seq2):
                merged = prem[m - 1]
                sources = [
                    ((0, (m - 1, i)), f)
                    for i, f in enumerate(merged.ant if side == "ant" else merged.suc)
                ]
                part1 = C[app.seq].ant if side == "ant" else C[app.seq].suc
                part2 = C[app.seq2].ant if side == "ant" else C[app.seq2].suc
                target = _content_match(tuple(part1) + tuple(part2), sources)
                offset = idx if pos == app.seq else len(part1) + idx
                which, occ2 = target[offset]
                feed(which, occ2)
            else:
                before = sum(1 for k in (app.seq, app.seq2) if k < pos)
                feed(0, (pos - before, idx))
            continue
        if r is RuleId.CUT:
            m1 = len(node.premises[0].conclusion)
            m2 = len(node.premises[1].conclusion)
            sl = node.premises[0].conclusion[m1 - 1]
            sr = node.premises[1].conclusion[m2 - 1]
            if pos == app.seq:
                a = app.formula
                if side == "ant":
                    skip = next(i for i, f in enumerate(sr.ant) if f == a)
                    sources = [((0, (m1 - 1, i)), f) for i, f in enumerate(sl.ant)] + [
                        ((1, (m2 - 1, i)), f) for i, f in enumerate(sr.ant) if i != skip
                    ]
                    target = _content_match(C[pos].ant, sources)
                else:
                    skip = max(i for i, f in enumerate(sl.suc) if f == a)
                    sources = [
                        ((0, (m1 - 1, i)), f) for i, f in enumerate(sl.suc) if i != skip
                    ] + [((1, (m2 - 1, i)), f) for i, f in enumerate(sr.suc)]
                    target = _content_match(C[pos].suc, sources)
                which, occ2 = target[idx]
                feed(which, occ2)
            else:
                feed(0, (pos, idx))
                feed(1, (pos, idx))
            continue
        if r is RuleId.AND_R:
            if side == "suc" and pos == app.seq and idx == app.idx:
                intros.append(("and_r", occ))
            else:
                feed(0, occ)
                feed(1, occ)
            continue
        # remaining: unary propositional / t1 / ic / iw
        if pos != app.seq:
            feed(0, occ)
            continue
        principal_side = {
            RuleId.AND_L1: "ant",
            RuleId.AND_L2: "ant",
            RuleId.NEG_L: "ant",
            RuleId.NEG_R: "suc",
            RuleId.IC_L: "ant",
            RuleId.IC_R: "suc",
            RuleId.IW_L: "ant",
            RuleId.IW_R: "suc",
            RuleId.T1: "ant",
        }[r]
        if side != principal_side:
            if r is RuleId.NEG_L and side == "suc":
                feed(0, occ)  # premise suc = suc + (child,) appended after
            elif r is RuleId.NEG_R and side == "ant":
                feed(0, (pos, idx + 1))
            else:
                feed(0, occ)
            continue
        if idx == app.idx:
            if r in (RuleId.IC_L, RuleId.IC_R):
                feed(0, (pos, idx))
                feed(0, (pos, idx + 1))
                continue
            kinds = {
                RuleId.AND_L1: "and_l",
                RuleId.AND_L2: "and_l",
                RuleId.NEG_L: "neg_l",
                RuleId.NEG_R: "neg_r",
                RuleId.IW_L: "iw",
                RuleId.IW_R: "iw",
                RuleId.T1: "t1",
            }
            intros.append((kinds[r], occ))
            continue
        if r in (RuleId.NEG_L, RuleId.NEG_R):
            feed(0, (pos, idx - (1 if idx > app.idx else 0)))
        elif r in (RuleId.IC_L, RuleId.IC_R):
            feed(0, (pos, idx + (1 if idx > app.idx else 0)))
        elif r in (RuleId.IW_L, RuleId.IW_R):
            feed(0, (pos, idx - (1 if idx > app.idx else 0)))
        else:  # and_l / t1 keep positions
            feed(0, occ)
    return [frozenset(s) for s in up], intros


def intro_kinds(node: Proof, side: str, occs: frozenset[Occ]) -> Counter:
    """Counts the introduction kinds of the traced occurrences."""
    if not occs:
        return Counter()
    up, intros = _occ_up(node, side, occs)
    out = Counter(kind for kind, _ in intros)
    for q, po in zip(node.premises, up):
        out += intro_kinds(q, side, po)
    return out


# ---------------------------------------------------------------------------
# The replay engine


@dataclass
class ReplaySpec:
    side: str  # which side of the traced sequents the occurrences live on
    repl: tuple[Formula, ...] = ()  # same-side in-place replacement
    repl_other: tuple[Formula, ...] = ()  # opposite-side additions (neg case)
    enrich: Optional[Sequent] = None  # content merged into occ-holding sequents
    extra: tuple[Sequent, ...] = ()  # context appended to every hypersequent
    force_modal: bool = False  # unused hook for the modalized variants
    handlers: dict = field(default_factory=dict)  # intro kind -> callable


class Replay:
    def __init__(self, spec: ReplaySpec, trace: TransformTrace):
        self.spec = spec
        self.trace = trace

    # -- the transformed shape -------------------------------------------

    def t_sequent(self, s: Sequent, idxs: list[int]) -> Sequent:
        sp = self.spec
        traced = set(idxs)
        if sp.side == "ant":
            ant: list[Formula] = []
            for i, f in enumerate(s.ant):
                ant.extend(sp.repl if i in traced else [f])
            suc = list(s.suc) + list(sp.repl_other) * len(traced)
        else:
            suc = []
            for i, f in enumerate(s.suc):
                suc.extend(sp.repl if i in traced else [f])
            ant = list(sp.repl_other) * len(traced) + list(s.ant)
        if sp.enrich is not None:
            ant = list(sp.enrich.ant) + ant
            suc = suc + list(sp.enrich.suc)
        return Sequent(s.sort, tuple(ant), tuple(suc))

    def t_hyper(self, h: Hypersequent, occs: frozenset[Occ]) -> Hypersequent:
        by_pos: dict[int, list[int]] = {}
        for pos, idx in occs:
            by_pos.setdefault(pos, []).append(idx)
        seqs = []
        for i, s in enumerate(h.seqs):
            if i in by_pos:
                seqs.append(self.t_sequent(s, by_pos[i]))
            else:
                seqs.append(s)
        return Hypersequent(tuple(seqs) + self.spec.extra)

    # -- recursion ----------------------------------------------------------

    def run(self, node: Proof, occs: frozenset[Occ]) -> Proof:
        self.trace.spend("replay")
        if not occs:
            return B.ew_many(node, self.spec.extra)
        up, intros = _occ_up(node, self.spec.side, occs)
        if intros:
            kind, occ = intros[0]
            handler = self.spec.handlers.get(kind)
            if handler is None:
                raise TransformError(
                    f"no handler for a cut-formula introduction by {kind} "
                    f"(rule {node.rule.value}); this proof is outside the supported fragment"
                )
            return handler(self, node, occs, up, intros)
        if (
            node.rule is RuleId.NEC2
            and "nec2_cross" in self.spec.handlers
            and (self.spec.extra or self.spec.enrich is not None)
        ):
            return self.spec.handlers["nec2_cross"](self, node, occs, up)
        if (
            node.rule in (RuleId.FIVE2, RuleId.B25)
            and "flip_cross" in self.spec.handlers
            and any(pos == node.app.seq for pos, _ in occs)
        ):
            return self.spec.handlers["flip_cross"](self, node, occs, up)
        premsT = []
        for q, po in zip(node.premises, up):
            pt = self.run(q, po)
            premsT.append(realign(pt, self.t_hyper(q.conclusion, po)))
        return self._rebuild(node, occs, up, premsT)

    # -- default intro handlers -------------------------------------------

    def handle_weakening_intro(self, node: Proof, occs: frozenset[Occ], up, intros) -> Proof:
        """iw intro: the occurrence never existed; ew intro: rebuild the ew
        with the transformed sequent.  Used by every surgery."""
        kind, occ = intros[0]
        sp = self.spec
        if kind == "iw":
            rest = frozenset(o for o in occs if o != occ)
            up2, _ = _occ_up(node, sp.side, rest)
            pt = self.run(node.premises[0], up2[0])
            pt = realign(pt, self.t_hyper(node.premises[0].conclusion, up2[0]))
            want = self.t_hyper(node.conclusion, occs)
            return self._pad_to(pt, want)
        if kind == "ew":
            pos, _ = occ
            seq_occs = frozenset(o for o in occs if o[0] == pos)
            rest = frozenset(o for o in occs if o[0] != pos)
            up2, _ = _occ_up(node, sp.side, rest)
            pt = self.run(node.premises[0], up2[0])
            pt = realign(pt, self.t_hyper(node.premises[0].conclusion, up2[0]))
            idxs = [i for p, i in seq_occs]
            new_seq = self.t_sequent(node.conclusion[pos], idxs)
            out = B.ew(pt, new_seq)
            return realign(out, self.t_hyper(node.conclusion, occs))
        raise TransformError(f"unexpected weakening kind {kind}")

    def _pad_to(self, p: Proof, want: Hypersequent) -> Proof:
        """Weaken p's conclusion up to want (iw within matched sequents,
        ew for sequents p lacks entirely)."""
        return realign(_pad_sequentwise(p, want), want)

    # -- rebuilding a non-intro node ----------------------------------------

    def _rebuild(self, node: Proof, occs, up, premsT: list[Proof]) -> Proof:
        app, C = node.app, node.conclusion
        r = app.rule
        sp = self.spec
        want = self.t_hyper(C, occs)

        def occ_shift(pos: int, side: str, idx: int, source=None) -> int:
            """Index of the original formula (pos, idx) inside the transformed
            sequent of `source` (default: the conclusion occs)."""
            occset = source if source is not None else occs
            traced = [i for p, i in occset if p == pos]
            shift = 0
            if sp.side == side:
                shift += sum(len(sp.repl) - 1 for t in traced if t < idx)
            if sp.enrich is not None and traced:
                if side == "ant":
                    shift += len(sp.enrich.ant)
            if side == "ant" and sp.side == "suc" and traced and sp.repl_other:
                shift += len(sp.repl_other)
            return idx + shift

        if r in (RuleId.NEC2, RuleId.T2, RuleId.D, RuleId.FOUR_R, RuleId.NEC1):
            (pt,) = premsT
            if r is RuleId.NEC2:
                if len(pt.conclusion) != 1:
                    raise TransformError(
                        "a nec2 application crosses the traced region with extra context; unsupported"
                    )
                return B.nec2(pt)
            if r is RuleId.T2:
                return B.t2(pt, app.seq)
            if r is RuleId.D:
                return B.d_rule(pt, app.seq)
            if r is RuleId.FOUR_R:
                return B.four_r(pt, app.seq)
            return B.nec1(pt, app.seq)
        if r in (RuleId.B2, RuleId.FIVE2, RuleId.B25):
            (pt,) = premsT
            try:
                return realign(apply_original(node, [pt]), want)
            except Exception:
                raise TransformError(
                    f"{r.value} cannot be replayed under the added context; unsupported fragment"
                )
        if r is RuleId.EW:
            (pt,) = premsT
            return B.ew(pt, C[app.seq])
        if r in (RuleId.K, RuleId.FOUR_L, RuleId.B1, RuleId.FIVE1):
            (pt,) = premsT
            feed = app.seq2 - (1 if app.seq < app.seq2 else 0)
            # is the moved formula itself traced?
            moved_traced = (app.seq, 0) in occs
            if not moved_traced:
                src = up[0]
                moved_idx = occ_shift(feed, "ant", 0, source=src)
                if r is RuleId.K:
                    return B.k_rule(pt, feed, moved_idx)
                if r is RuleId.FOUR_L:
                    return B.four_l(pt, feed, moved_idx)
                if r is RuleId.B1:
                    return B.b1(pt, feed, moved_idx)
                return B.five1(pt, feed, moved_idx)
            # moved and traced: only 4l / 51 reach here (k / b1 are intros)
            if not sp.repl:
                # deletion: the singleton becomes an empty placeholder
                empty = Sequent(Sort.PLAIN if r is RuleId.FOUR_L else Sort.MODAL)
                out = B.ew(pt, empty)
                return realign(out, want)
            # in-place replacement: move each replacement formula out, then
            # merge the singletons into one sequent
            src = up[0]
            out = pt
            positions = []
            for f in sp.repl:
                idx = _find_ant_from(out.conclusion[feed], f)
                out = B.four_l(out, feed, idx) if r is RuleId.FOUR_L else B.five1(out, feed, idx)
                positions.append(len(out.conclusion) - 1)
            if len(positions) > 1:
                out = B.merge_all(out, positions)
            return realign(out, want)
        if r is RuleId.MERGE:
            (pt,) = premsT
            m = len(node.premises[0].conclusion)
            out = B.merge(pt, m - 2, m - 1)
            # both parts enriched: contract the duplicated enrichment
            parts_traced = sum(1 for p in (m - 2, m - 1) if any(o[0] == p for o in up[0]))
            if sp.enrich is not None and parts_traced == 2:
                pos = len(out.conclusion) - 1
                for f in sp.enrich.ant:
                    hits = [i for i, g in enumerate(out.conclusion[pos].ant) if g == f]
                    out = B.ic_l(out, pos, hits[0], hits[1])
                for f in sp.enrich.suc:
                    hits = [i for i, g in enumerate(out.conclusion[pos].suc) if g == f]
                    out = B.ic_r(out, pos, hits[0], hits[1])
            return realign(out, want)
        if r is RuleId.SPLIT:
            (pt,) = premsT
            m = len(node.premises[0].conclusion)
            occs1 = [i for (q, i) in occs if q == app.seq]
            occs2 = [i for (q, i) in occs if q == app.seq2]
            t1 = self.t_sequent(C[app.seq], occs1) if occs1 else C[app.seq]
            t2 = self.t_sequent(C[app.seq2], occs2) if occs2 else C[app.seq2]
            # the transformed merged sequent carries one enrichment copy; give
            # it to the first part and weaken the second back up afterwards
            t2_lean = t2
            if sp.enrich is not None and occs1 and occs2:
                t2_lean = Sequent(
                    t2.sort,
                    t2.ant[len(sp.enrich.ant) :],
                    t2.suc[: len(t2.suc) - len(sp.enrich.suc)],
                )
            merged_target = Sequent(
                Sort.PLAIN, t1.ant + t2_lean.ant, t1.suc + t2_lean.suc
            )
            pt2 = realign(pt, pt.conclusion.replace(m - 1, merged_target))
            out = B.split(pt2, m - 1, len(t1.ant), len(t1.suc))
            if t2_lean is not t2:
                out = B.weaken_to(out, len(out.conclusion) - 1, t2)
            return realign(out, want)
        if r is RuleId.CUT:
            m1 = len(node.premises[0].conclusion)
            m2 = len(node.premises[1].conclusion)
            lt, rt = premsT
            a = app.formula
            # locate the cut formula in the transformed premises
            return realign(B.cut(lt, m1 - 1, rt, m2 - 1, a), want)
        if r is RuleId.AND_R:
            lt, rt = premsT
            idx = occ_shift(app.seq, "suc", app.idx)
            return realign(B.and_r(lt, rt, app.seq, idx), want)
        # unary propositional / t1 / ic / iw
        (pt,) = premsT
        s = C[app.seq]
        src = up[0]
        if r is RuleId.AND_L1:
            idx = occ_shift(app.seq, "ant", app.idx, source=src)
            return realign(B.and_l1(pt, app.seq, idx, s.ant[app.idx].right), want)
        if r is RuleId.AND_L2:
            idx = occ_shift(app.seq, "ant", app.idx, source=src)
            return realign(B.and_l2(pt, app.seq, idx, s.ant[app.idx].left), want)
        if r is RuleId.NEG_L:
            old = node.premises[0].conclusion[app.seq]
            idx = occ_shift(app.seq, "suc", len(old.suc) - 1, source=src)
            return realign(B.neg_l(pt, app.seq, idx), want)
        if r is RuleId.NEG_R:
            idx = occ_shift(app.seq, "ant", 0, source=src)
            return realign(B.neg_r(pt, app.seq, idx), want)
        if r is RuleId.IC_L:
            i = occ_shift(app.seq, "ant", app.idx, source=src)
            j = occ_shift(app.seq, "ant", app.idx + 1, source=src)
            traced_here = (
                sp.side == "ant"
                and (app.seq, app.idx) in up[0]
                and (app.seq, app.idx + 1) in up[0]
            )
            if traced_here:
                out = pt
                for f in sp.repl:
                    hits = [k for k, g in enumerate(out.conclusion[app.seq].ant) if g == f]
                    out = B.ic_l(out, app.seq, hits[0], hits[1])
                for f in sp.repl_other:
                    hits = [k for k, g in enumerate(out.conclusion[app.seq].suc) if g == f]
                    out = B.ic_r(out, app.seq, hits[0], hits[1])
                return realign(out, want)
            return realign(B.ic_l(pt, app.seq, i, j), want)
        if r is RuleId.IC_R:
            i = occ_shift(app.seq, "suc", app.idx, source=src)
            j = occ_shift(app.seq, "suc", app.idx + 1, source=src)
            traced_here = (
                sp.side == "suc"
                and (app.seq, app.idx) in up[0]
                and (app.seq, app.idx + 1) in up[0]
            )
            if traced_here:
                out = pt
                for f in sp.repl:
                    hits = [k for k, g in enumerate(out.conclusion[app.seq].suc) if g == f]
                    out = B.ic_r(out, app.seq, hits[0], hits[1])
                for f in sp.repl_other:
                    hits = [k for k, g in enumerate(out.conclusion[app.seq].ant) if g == f]
                    out = B.ic_l(out, app.seq, hits[0], hits[1])
                return realign(out, want)
            return realign(B.ic_r(pt, app.seq, i, j), want)
        if r is RuleId.IW_L:
            return realign(B.iw_l(pt, app.seq, s.ant[app.idx]), want)
        if r is RuleId.IW_R:
            return realign(B.iw_r(pt, app.seq, s.suc[app.idx]), want)
        if r is RuleId.T1:
            idx = occ_shift(app.seq, "ant", app.idx, source=src)
            return realign(B.t1(pt, app.seq, idx), want)
        raise TransformError(f"cannot replay through {r.value}")


def _pad_sequentwise(p: Proof, want: Hypersequent) -> Proof:
    """Weaken p's sequents until they match want (greedy by inclusion)."""
    avail = list(range(len(p.conclusion)))
    plan: list[tuple[int, Sequent]] = []
    extra: list[Sequent] = []
    for s in want.seqs:
        best = None
        for i in avail:
            t = p.conclusion[i]
            if t.sort is s.sort and not (
                Counter(map(print_formula, t.ant)) - Counter(map(print_formula, s.ant))
            ) and not (Counter(map(print_formula, t.suc)) - Counter(map(print_formula, s.suc))):
                best = i
                break
        if best is None:
            extra.append(s)
        else:
            avail.remove(best)
            plan.append((best, s))
    if avail:
        raise TransformError(
            f"cannot weaken `{p.conclusion!r}` up to `{want!r}`: leftover sequents"
        )
    for i, s in plan:
        p = B.weaken_to(p, i, s)
    for s in extra:
        p = B.ew(p, s)
    return p


def _find_ant_from(s: Sequent, f: Formula) -> int:
    for i, g in enumerate(s.ant):
        if g == f:
            return i
    raise TransformError(f"{f!r} missing from {s!r}")


# ---------------------------------------------------------------------------
# Shared handlers


def _h_pad(replay: Replay, node: Proof, occs, up, intros) -> Proof:
    """Intro by iw / and_l / neg_l / neg_r: recurse past the introduction and
    weaken whatever the transformed conclusion still needs."""
    pt = replay.run(node.premises[0], up[0])
    pt = realign(pt, replay.t_hyper(node.premises[0].conclusion, up[0]))
    want = replay.t_hyper(node.conclusion, occs)
    return replay._pad_to(pt, want)


def _h_pad_and_r(replay: Replay, node: Proof, occs, up, intros) -> Proof:
    """and_r intro during a conjunction split: keep the branch matching repl."""
    f = node.conclusion[node.app.seq].suc[node.app.idx]
    which = 0 if replay.spec.repl == (f.left,) else 1
    pt = replay.run(node.premises[which], up[which])
    pt = realign(pt, replay.t_hyper(node.premises[which].conclusion, up[which]))
    want = replay.t_hyper(node.conclusion, occs)
    return replay._pad_to(pt, want)


def _h_ew(replay: Replay, node: Proof, occs, up, intros) -> Proof:
    return replay.handle_weakening_intro(node, occs, up, intros)


def _h_iw(replay: Replay, node: Proof, occs, up, intros) -> Proof:
    return replay.handle_weakening_intro(node, occs, up, intros)


def _h_ax_expand(replay: Replay, node: Proof, occs, up, intros) -> Proof:
    """A compound initial sequent introduces the traced occurrence: expand it
    and replay the expansion, whose top rules are then handled normally."""
    from ..templates import init_expansion

    s = node.conclusion[0]
    if isinstance(s.ant[0], Atom):
        raise TransformError(
            "an atomic initial sequent introduces the cut formula with no splice handler"
        )
    exp = realign(init_expansion(s.ant[0], s.sort), node.conclusion)
    return replay.run(exp, occs)


_DECOMP_HANDLERS = {
    "iw": _h_iw,
    "ew": _h_ew,
    "and_l": _h_pad,
    "and_r": _h_pad_and_r,
    "neg_l": _h_pad,
    "neg_r": _h_pad,
    "ax": _h_ax_expand,
}


# ---------------------------------------------------------------------------
# Input normalization for the additive combination


def _normalize_left(left: Proof, il: int, a: Formula) -> Proof:
    s = left.conclusion[il]
    idx = list(s.suc).index(a)
    order = [i for i in range(len(s.suc)) if i != idx] + [idx]
    left = realign(
        left,
        left.conclusion.replace(il, Sequent(s.sort, s.ant, tuple(s.suc[i] for i in order))),
    )
    seqs = [q for j, q in enumerate(left.conclusion.seqs) if j != il] + [left.conclusion[il]]
    return realign(left, Hypersequent(tuple(seqs)))


def _normalize_right(right: Proof, ir: int, a: Formula, ctx: tuple[Sequent, ...]) -> Proof:
    s = right.conclusion[ir]
    idx = list(s.ant).index(a)
    order = [idx] + [i for i in range(len(s.ant)) if i != idx]
    right = realign(
        right,
        right.conclusion.replace(ir, Sequent(s.sort, tuple(s.ant[i] for i in order), s.suc)),
    )
    # place the principal last, context in the given order
    principal = right.conclusion[ir]
    return realign(right, Hypersequent(ctx + (principal,)))


def _contract_context(p: Proof, ctx: tuple[Sequent, ...], keep: Hypersequent) -> Proof:
    """p proves keep ++ ctx-copies; contract each duplicated context sequent
    and realign to keep."""
    for s in ctx:
        hyper = p.conclusion
        hits = [i for i, t in enumerate(hyper.seqs) if t.key() == s.key()]
        if len(hits) < 2:
            raise TransformError("expected a duplicated context sequent")
        p = contract_duplicate_sequents(p, hits[0], hits[1])
    return realign(p, keep)


# ---------------------------------------------------------------------------
# The combiner


class _Eliminator:
    def __init__(self, sys: SystemId, trace: TransformTrace):
        self.sys = sys
        self.trace = trace

    def combine(self, left: Proof, il: int, right: Proof, ir: int, a: Formula) -> Proof:
        """Cut-free proof of the additive cut conclusion."""
        self.trace.spend("combine")
        left = _normalize_left(align(left), il, a)
        ctx = left.conclusion.seqs[:-1]
        right = _normalize_right(align(right), ir, a, ctx)
        sl = left.conclusion[-1]
        sr = right.conclusion[-1]
        if sl.sort is not sr.sort:
            raise TransformError("cut sequents must share a sort")
        sort = sl.sort
        n = len(left.conclusion)
        goal_seq = Sequent(sort, sl.ant + sr.ant[1:], sl.suc[:-1] + sr.suc)
        goal = Hypersequent(ctx + (goal_seq,))

        locc = frozenset({(n - 1, len(sl.suc) - 1)})
        rocc = frozenset({(n - 1, 0)})

        lk = intro_kinds(left, "suc", locc)
        if set(lk) <= {"iw", "ew"}:
            spec = ReplaySpec(side="suc", handlers=dict(_DECOMP_HANDLERS))
            rep = Replay(spec, self.trace)
            pf = rep.run(left, locc)
            pf = realign(pf, rep.t_hyper(left.conclusion, locc))
            pf = B.weaken_to(pf, n - 1, goal_seq)
            return realign(pf, goal)
        rk = intro_kinds(right, "ant", rocc)
        if set(rk) <= {"iw", "ew"}:
            spec = ReplaySpec(side="ant", handlers=dict(_DECOMP_HANDLERS))
            rep = Replay(spec, self.trace)
            pf = rep.run(right, rocc)
            pf = realign(pf, rep.t_hyper(right.conclusion, rocc))
            pf = B.weaken_to(pf, n - 1, goal_seq)
            return realign(pf, goal)

        if isinstance(a, And):
            qb, qc, rr = self._decompose_and(left, right, a, locc, rocc)
            x1 = self.combine(qb, len(qb.conclusion) - 1, rr, len(rr.conclusion) - 1, a.left)
            # x1: ctx | (G, c, P >> D, T); cut the c against qc
            x2 = self.combine(qc, len(qc.conclusion) - 1, x1, len(x1.conclusion) - 1, a.right)
            # x2: ctx | (G, G, P >> D, D, T): contract the doubled G/D
            pos = len(x2.conclusion) - 1
            for f in sl.ant:
                hits = [i for i, g in enumerate(x2.conclusion[pos].ant) if g == f]
                x2 = B.ic_l(x2, pos, hits[0], hits[1])
            for f in sl.suc[:-1]:
                hits = [i for i, g in enumerate(x2.conclusion[pos].suc) if g == f]
                x2 = B.ic_r(x2, pos, hits[0], hits[1])
            return realign(x2, goal)

        if isinstance(a, Neg):
            qq, rr = self._decompose_neg(left, right, a, locc, rocc)
            out = self.combine(rr, len(rr.conclusion) - 1, qq, len(qq.conclusion) - 1, a.child)
            return realign(out, goal)

        if isinstance(a, (Atom, Bottom)):
            if isinstance(a, Bottom):
                raise TransformError(
                    "a bottom cut formula should have been degenerate on the left"
                )
            if sort is Sort.PLAIN:
                return realign(self._atomic_plain(left, right, a, ctx, goal), goal)
            return realign(self._atomic_modal(left, right, a, ctx, goal), goal)

        assert isinstance(a, Box)
        if sort is Sort.MODAL:
            raise TransformError(
                "boxed cut formulas on modalized cut sequents (nested boxes) are "
                "outside the supported fragment"
            )
        group = group_of(self.sys)
        if group is Group.ALPHA:
            return realign(self._boxed_alpha(left, right, a, ctx, goal), goal)
        if self.sys in (SystemId.K45, SystemId.KD45, SystemId.S5):
            return realign(self._boxed_beta4(left, right, a, ctx, goal), goal)
        return realign(self._boxed_beta_no4(left, right, a, ctx, goal), goal)

    # -- propositional cut-formula reduction ---------------------------------

    def _decompose_and(self, left, right, a, locc, rocc):
        handlers = dict(_DECOMP_HANDLERS)
        rep_b = Replay(ReplaySpec(side="suc", repl=(a.left,), handlers=handlers), self.trace)
        qb = rep_b.run(left, locc)
        qb = realign(qb, rep_b.t_hyper(left.conclusion, locc))
        rep_c = Replay(ReplaySpec(side="suc", repl=(a.right,), handlers=handlers), self.trace)
        qc = rep_c.run(left, locc)
        qc = realign(qc, rep_c.t_hyper(left.conclusion, locc))
        rep_r = Replay(
            ReplaySpec(side="ant", repl=(a.left, a.right), handlers=handlers), self.trace
        )
        rr = rep_r.run(right, rocc)
        rr = realign(rr, rep_r.t_hyper(right.conclusion, rocc))
        return qb, qc, rr

    def _decompose_neg(self, left, right, a, locc, rocc):
        handlers = dict(_DECOMP_HANDLERS)
        rep_q = Replay(
            ReplaySpec(side="suc", repl=(), repl_other=(a.child,), handlers=handlers),
            self.trace,
        )
        qq = rep_q.run(left, locc)
        qq = realign(qq, rep_q.t_hyper(left.conclusion, locc))
        # move the child to the suc end / ant front for the next cut
        s = qq.conclusion[-1]
        rep_r = Replay(
            ReplaySpec(side="ant", repl=(), repl_other=(a.child,), handlers=handlers),
            self.trace,
        )
        rr = rep_r.run(right, rocc)
        rr = realign(rr, rep_r.t_hyper(right.conclusion, rocc))
        return qq, rr

    # -- atomic cuts ---------------------------------------------------------

    def _atomic_plain(self, left, right, a, ctx, goal):
        sl = left.conclusion[-1]
        enrich = Sequent(Sort.PLAIN, sl.ant, sl.suc[:-1])
        handlers = dict(_DECOMP_HANDLERS)

        def h_ax(replay, node, occs, up, intros):
            want = replay.t_hyper(node.conclusion, occs)
            return realign(left, want)

        handlers["ax"] = h_ax
        spec = ReplaySpec(side="ant", enrich=enrich, extra=ctx, handlers=handlers)
        rep = Replay(spec, self.trace)
        out = rep.run(right, frozenset({(len(right.conclusion) - 1, 0)}))
        out = realign(out, rep.t_hyper(right.conclusion, frozenset({(len(right.conclusion) - 1, 0)})))
        return _contract_context(out, ctx, goal)

    def _atomic_modal(self, left, right, a, ctx, goal):
        sr = right.conclusion[-1]
        enrich = Sequent(Sort.MODAL, sr.ant[1:], sr.suc)
        handlers = dict(_DECOMP_HANDLERS)
        elim = self

        def h_flip(replay, node, occs, up, intros=None):
            """The sequent carrying the traced succedent occurrence flips from
            plain to modalized (nec2, a restricted 52, or b25): run the cut
            against the plain premise below the flip and splice the result in,
            with the flip's context riding through the inner replay."""
            r = node.rule
            seq = 0 if r is RuleId.NEC2 else node.app.seq
            prem = node.premises[0]
            idxs = sorted((i for pos, i in occs if pos == seq), reverse=True)
            if not idxs:
                raise TransformError(
                    f"traced occurrences only in the context of a {r.value}; unsupported"
                )
            while len(idxs) > 1:
                prem = B.ic_r(prem, seq, idxs[1], idxs[0])
                idxs = idxs[1:]
            occ_idx = idxs[0]
            s = prem.conclusion[seq]
            inner_enrich = Sequent(
                Sort.PLAIN, s.ant, tuple(f for i, f in enumerate(s.suc) if i != occ_idx)
            )
            prem_ctx = tuple(t for i, t in enumerate(prem.conclusion.seqs) if i != seq)
            inner_handlers = dict(_DECOMP_HANDLERS)

            def h_leaf(rep2, node2, occs2, up2, intros2):
                want2 = rep2.t_hyper(node2.conclusion, occs2)
                return rep2._pad_to(prem, want2)

            inner_handlers["ax"] = h_leaf
            spec2 = ReplaySpec(
                side="ant", enrich=inner_enrich, extra=prem_ctx, handlers=inner_handlers
            )
            rep2 = Replay(spec2, elim.trace)
            rocc2 = frozenset({(len(right.conclusion) - 1, 0)})
            res = rep2.run(right, rocc2)
            res = realign(res, rep2.t_hyper(right.conclusion, rocc2))
            want = replay.t_hyper(node.conclusion, occs)
            return replay._pad_to(res, want)

        handlers["nec2_cross"] = h_flip
        handlers["flip_cross"] = h_flip
        spec = ReplaySpec(side="suc", enrich=enrich, extra=ctx, handlers=handlers)
        rep = Replay(spec, self.trace)
        locc = frozenset({(len(left.conclusion) - 1, len(left.conclusion[-1].suc) - 1)})
        out = rep.run(left, locc)
        out = realign(out, rep.t_hyper(left.conclusion, locc))
        return _contract_context(out, ctx, goal)

    # -- boxed cuts, group alpha ----------------------------------------------

    def _boxed_alpha(self, left, right, a, ctx, goal):
        b = a.child
        # normalizations keep every node conclusion, so the principal stays last
        left = regularize(left, self.sys, self.trace, validate=False)
        right = eliminate_T2(atomize_initials(align(right)), self.sys, self.trace, validate=False)
        sl = left.conclusion[-1]
        sr = right.conclusion[-1]
        enrich = Sequent(Sort.PLAIN, sr.ant[1:], sr.suc)
        handlers = dict(_DECOMP_HANDLERS)
        elim = self

        def h_nec1(replay, node, occs, up, intros):
            if len(occs) != 1:
                raise TransformError("several traced occurrences at one nec1")
            top, kinds = _column_info(node)
            col_bottom = node.premises[0]
            members = list(top.conclusion[0].ant)
            repl = tuple(Box(f) if k == "k" else f for f, k in zip(members, kinds))
            rres = elim._case1_replay_right(right, b, repl, members, kinds, top, col_bottom)
            # split the singletons back off the combined sequent
            pos = len(rres.conclusion) - 1
            s = rres.conclusion[pos]
            rest = list(s.ant)
            for f in repl:
                rest.remove(f)
            rres = realign(
                rres,
                rres.conclusion.replace(
                    pos, Sequent(Sort.PLAIN, tuple(repl) + tuple(rest), s.suc)
                ),
            )
            for _ in repl:
                rres = B.split(rres, len(rres.conclusion) - 1, 1, 0)
                # split leaves (box X ->) at -2 and the remainder last
            want = replay.t_hyper(node.conclusion, occs)
            return realign(rres, want)

        handlers["nec1"] = h_nec1
        spec = ReplaySpec(side="suc", enrich=enrich, extra=ctx, handlers=handlers)
        rep = Replay(spec, self.trace)
        locc = frozenset({(len(left.conclusion) - 1, len(sl.suc) - 1)})
        out = rep.run(left, locc)
        out = realign(out, rep.t_hyper(left.conclusion, locc))
        return _contract_context(out, ctx, goal)

    def _case1_replay_right(self, right, b, repl, members, kinds, top, col_bottom):
        """Replay the right subproof substituting the column members for the
        boxed cut formula; K and T1 tops are cut against the column."""
        elim = self
        handlers = dict(_DECOMP_HANDLERS)
        sing_seqs = tuple(Sequent(Sort.PLAIN, (f,), ()) for f in repl)

        bpos_col = next(
            i
            for i, s in enumerate(col_bottom.conclusion.seqs)
            if s.sort is Sort.MODAL and not s.ant and list(s.suc) == [b]
        )

        def h_k(replay, node, occs, up, intros):
            pt = replay.run(node.premises[0], up[0])
            pt = realign(pt, replay.t_hyper(node.premises[0].conclusion, up[0]))
            feed = node.app.seq2 - (1 if node.app.seq < node.app.seq2 else 0)
            ctx_seqs = tuple(s for i, s in enumerate(pt.conclusion.seqs) if i != feed)
            qc = B.ew_many(col_bottom, ctx_seqs)
            rc = B.ew_many(pt, sing_seqs)
            x = elim.combine(qc, bpos_col, rc, feed, b)
            # merge the singletons into one sequent
            positions = []
            used = set()
            for f in repl:
                j = next(
                    i
                    for i, s in enumerate(x.conclusion.seqs)
                    if i not in used and s.sort is Sort.PLAIN and list(s.ant) == [f] and not s.suc
                )
                used.add(j)
                positions.append(j)
            if len(positions) > 1:
                x = B.merge_all(x, positions)
            elif not positions:
                x = B.ew(x, Sequent(Sort.PLAIN))
            want = replay.t_hyper(node.conclusion, occs)
            return realign(x, want)

        def h_t1(replay, node, occs, up, intros):
            pt = replay.run(node.premises[0], up[0])
            pt = realign(pt, replay.t_hyper(node.premises[0].conclusion, up[0]))
            s = node.conclusion[node.app.seq]
            lemma = top if s.sort is Sort.MODAL else B.t2(top, 0)
            ctx_seqs = tuple(t for i, t in enumerate(pt.conclusion.seqs) if i != node.app.seq)
            qc = B.ew_many(lemma, ctx_seqs)  # the column top stays at position 0
            x = elim.combine(qc, 0, pt, node.app.seq, b)
            # box the K-kind members back up; the merged sequent sits last
            pos = len(x.conclusion) - 1
            for f, k in zip(members, kinds):
                if k == "k":
                    idx = list(x.conclusion[pos].ant).index(f)
                    x = B.t1(x, pos, idx)
            want = replay.t_hyper(node.conclusion, occs)
            return realign(x, want)

        handlers["k"] = h_k
        handlers["t1"] = h_t1
        spec = ReplaySpec(side="ant", repl=repl, handlers=handlers)
        rep = Replay(spec, self.trace)
        rocc = frozenset({(len(right.conclusion) - 1, 0)})
        out = rep.run(right, rocc)
        return realign(out, rep.t_hyper(right.conclusion, rocc))

    # -- boxed cuts, beta without the 4 rules ---------------------------------

    def _boxed_beta_no4(self, left, right, a, ctx, goal):
        b = a.child
        left = atomize_initials(align(left))
        right = atomize_initials(align(right))
        sl = left.conclusion[-1]
        sr = right.conclusion[-1]
        bseq = Sequent(Sort.MODAL, (), (b,))
        elim = self

        # construction (a): the left subproof with the boxed formula dropped
        # and one (=> B) carried along
        handlers_a = dict(_DECOMP_HANDLERS)

        def h_nec1_a(replay, node, occs, up, intros):
            rest = frozenset(o for o in occs if o != intros[0][1])
            up2, _ = _occ_up(node, "suc", rest)
            pt = replay.run(node.premises[0], up2[0])
            pt = realign(pt, replay.t_hyper(node.premises[0].conclusion, up2[0]))
            # the premise's own (=> B) plus the carried extra: contract
            hits = [i for i, s in enumerate(pt.conclusion.seqs) if s.key() == bseq.key()]
            if len(hits) >= 2:
                pt = contract_duplicate_sequents(pt, hits[0], hits[1])
            pt = B.ew(pt, Sequent(Sort.PLAIN))
            want = replay.t_hyper(node.conclusion, occs)
            return realign(pt, want)

        handlers_a["nec1"] = h_nec1_a
        spec_a = ReplaySpec(side="suc", extra=(bseq,), handlers=handlers_a)
        rep_a = Replay(spec_a, self.trace)
        locc = frozenset({(len(left.conclusion) - 1, len(sl.suc) - 1)})
        q_a = rep_a.run(left, locc)
        q_a = realign(q_a, rep_a.t_hyper(left.conclusion, locc))
        # q_a: ctx | (G -> D) | (=> B)

        block = ctx + (Sequent(Sort.PLAIN, sl.ant, sl.suc[:-1]),)
        handlers_r = dict(_DECOMP_HANDLERS)

        bpos_a = len(q_a.conclusion) - 1  # the carried (=> B) sits last

        def h_k(replay, node, occs, up, intros):
            pt = replay.run(node.premises[0], up[0])
            pt = realign(pt, replay.t_hyper(node.premises[0].conclusion, up[0]))
            feed = node.app.seq2 - (1 if node.app.seq < node.app.seq2 else 0)
            qc, rc = _pad_for_cut(q_a, bpos_a, pt, feed)
            x = elim.combine(qc, bpos_a, rc, feed, b)
            x = B.ew(x, Sequent(Sort.PLAIN))
            want = replay.t_hyper(node.conclusion, occs)
            return realign(x, want)

        handlers_r["k"] = h_k
        spec_r = ReplaySpec(side="ant", extra=block, handlers=handlers_r)
        rep_r = Replay(spec_r, self.trace)
        rocc = frozenset({(len(right.conclusion) - 1, 0)})
        out = rep_r.run(right, rocc)
        out = realign(out, rep_r.t_hyper(right.conclusion, rocc))
        # out: ctx | (P -> T) | ctx | (G -> D): merge the plain pieces, contract
        gpos = [i for i, s in enumerate(out.conclusion.seqs) if s.key() == Sequent(Sort.PLAIN, sl.ant, sl.suc[:-1]).key()]
        ppos = [i for i, s in enumerate(out.conclusion.seqs) if s.key() == Sequent(Sort.PLAIN, sr.ant[1:], sr.suc).key()]
        out = B.merge(out, gpos[0], ppos[0])
        return _contract_context(out, ctx, goal)

    # -- boxed cuts, beta with the 4 rules ------------------------------------

    def _boxed_beta4(self, left, right, a, ctx, goal):
        b = a.child
        left = restrict_52(atomize_initials(align(left)), self.sys, self.trace, validate=False)
        right = restrict_52(atomize_initials(align(right)), self.sys, self.trace, validate=False)
        sl = left.conclusion[-1]
        sr = right.conclusion[-1]
        enrich = Sequent(Sort.PLAIN, sr.ant[1:], sr.suc)
        elim = self
        handlers = dict(_DECOMP_HANDLERS)

        def h_nec1(replay, node, occs, up, intros):
            if len(occs) != 1:
                raise TransformError(
                    "traced occurrences inside a nec1 context are outside the supported fragment"
                )
            p_i = node.premises[0]  # K_i | (=> B)
            bpos = node.app.seq
            rres = elim._beta4_replay_right(right, b, p_i, bpos)
            want = replay.t_hyper(node.conclusion, occs)
            return realign(rres, want)

        handlers["nec1"] = h_nec1
        spec = ReplaySpec(side="suc", enrich=enrich, extra=ctx, handlers=handlers)
        rep = Replay(spec, self.trace)
        locc = frozenset({(len(left.conclusion) - 1, len(sl.suc) - 1)})
        out = rep.run(left, locc)
        out = realign(out, rep.t_hyper(left.conclusion, locc))
        return _contract_context(out, ctx, goal)

    def _beta4_replay_right(self, right, b, p_i, bpos):
        """Replay the right subproof deleting the boxed cut formula; K tops
        (and T1 tops in S5) are cut against the nec1 premise."""
        elim = self
        handlers = dict(_DECOMP_HANDLERS)
        k_ctx = tuple(s for i, s in enumerate(p_i.conclusion.seqs) if i != bpos)

        def h_k(replay, node, occs, up, intros):
            pt = replay.run(node.premises[0], up[0])
            pt = realign(pt, replay.t_hyper(node.premises[0].conclusion, up[0]))
            feed = node.app.seq2 - (1 if node.app.seq < node.app.seq2 else 0)
            qc, rc = _pad_for_cut(p_i, bpos, pt, feed)
            x = elim.combine(qc, bpos, rc, feed, b)
            x = B.ew(x, Sequent(Sort.PLAIN))
            want = replay.t_hyper(node.conclusion, occs)
            return realign(x, want)

        def h_t1(replay, node, occs, up, intros):
            pt = replay.run(node.premises[0], up[0])
            pt = realign(pt, replay.t_hyper(node.premises[0].conclusion, up[0]))
            s = node.conclusion[node.app.seq]
            lemma = p_i if s.sort is Sort.MODAL else B.t2(p_i, bpos)
            qc, rc = _pad_for_cut(lemma, bpos, pt, node.app.seq)
            x = elim.combine(qc, bpos, rc, node.app.seq, b)
            want = replay.t_hyper(node.conclusion, occs)
            return realign(x, want)

        handlers["k"] = h_k
        handlers["t1"] = h_t1
        spec = ReplaySpec(side="ant", repl=(), extra=k_ctx, handlers=handlers)
        rep = Replay(spec, self.trace)
        rocc = frozenset({(len(right.conclusion) - 1, 0)})
        out = rep.run(right, rocc)
        return realign(out, rep.t_hyper(right.conclusion, rocc))


def _pad_for_cut(left: Proof, bl: int, right: Proof, br: int) -> tuple[Proof, Proof]:
    """ew-pad both sides so the contexts outside the cut sequents agree."""
    lctx = [s for i, s in enumerate(left.conclusion.seqs) if i != bl]
    rctx = [s for i, s in enumerate(right.conclusion.seqs) if i != br]
    lc = Counter(s.key() for s in lctx)
    rc = Counter(s.key() for s in rctx)
    by_key = {s.key(): s for s in lctx + rctx}
    for key, n in sorted((rc - lc).items()):
        for _ in range(n):
            left = B.ew(left, by_key[key])
    for key, n in sorted((lc - rc).items()):
        for _ in range(n):
            right = B.ew(right, by_key[key])
    return left, right


# ---------------------------------------------------------------------------
# Public operations


def reduce_cut_formula(p: Proof, trace: Optional[TransformTrace] = None) -> Proof:
    """Rewrite cuts over propositional compounds into cuts over their
    parts until every cut formula is an atom, bottom, or boxed."""
    trace = trace if trace is not None else TransformTrace(fuel=default_fuel())
    p = align(p)

    def offending(n: Proof) -> bool:
        return n.rule is RuleId.CUT and isinstance(n.app.formula, (And, Neg))

    elim = _Eliminator(SystemId.K, trace)
    while True:
        path = find_node(p, offending)
        if path is None:
            break
        trace.spend("reduce-cut")
        node = subtree_at(p, path)
        a = node.app.formula
        left, right = node.premises
        il, ir = node.app.pseq
        left = _normalize_left(align(left), il, a)
        ctx = left.conclusion.seqs[:-1]
        right = _normalize_right(align(right), ir, a, ctx)
        n = len(left.conclusion)
        locc = frozenset({(n - 1, len(left.conclusion[-1].suc) - 1)})
        rocc = frozenset({(n - 1, 0)})
        sl = left.conclusion[-1]
        if isinstance(a, And):
            qb, qc, rr = elim._decompose_and(left, right, a, locc, rocc)
            x1 = B.cut(qb, len(qb.conclusion) - 1, rr, len(rr.conclusion) - 1, a.left)
            x2 = B.cut(qc, len(qc.conclusion) - 1, x1, len(x1.conclusion) - 1, a.right)
            pos = len(x2.conclusion) - 1
            for f in sl.ant:
                hits = [i for i, g in enumerate(x2.conclusion[pos].ant) if g == f]
                x2 = B.ic_l(x2, pos, hits[0], hits[1])
            for f in sl.suc[:-1]:
                hits = [i for i, g in enumerate(x2.conclusion[pos].suc) if g == f]
                x2 = B.ic_r(x2, pos, hits[0], hits[1])
            new_sub = x2
        else:
            qq, rr = elim._decompose_neg(left, right, a, locc, rocc)
            new_sub = B.cut(rr, len(rr.conclusion) - 1, qq, len(qq.conclusion) - 1, a.child)
        p = replace_at(p, path, new_sub)
    return p


def cut_degrees(p: Proof) -> list[int]:
    return sorted(
        degree(n.app.formula) for _, n in p.nodes() if n.rule is RuleId.CUT
    )


def eliminate_cut(
    p: Proof, sys: SystemId, trace: Optional[TransformTrace] = None, validate: bool = True
) -> Proof:
    if group_of(sys) is Group.GAMMA:
        raise WrongGroup(
            f"cut elimination is unavailable for group gamma ({sys.value}); "
            "the calculus has a with-cut proof whose conclusion resists cut-free search"
        )
    trace = trace if trace is not None else TransformTrace(fuel=default_fuel())
    original = p
    p = atomize_initials(align(p))
    elim = _Eliminator(sys, trace)
    while True:
        path = find_node(p, lambda n: n.rule is RuleId.CUT)
        if path is None:
            break
        trace.spend("eliminate-cut")
        node = subtree_at(p, path)
        il, ir = node.app.pseq
        new_sub = elim.combine(node.premises[0], il, node.premises[1], ir, node.app.formula)
        p = replace_at(p, path, new_sub)
    if validate:
        assert_same_end(original, p)
        assert_checks(p, sys, "eliminate_cut")
        if any(n.rule is RuleId.CUT for _, n in p.nodes()):
            raise TransformError("a cut survived elimination")
    return p

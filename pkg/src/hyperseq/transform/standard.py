"""Extraction of regular all-plain proofs into the traditional sequent
calculi (LK plus the well-known modal rule, and its D variant), plus the
standard-mode checker and the re-embedding used for round-trip validation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

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
    print_formula,
)
from ..templates import modal_std
from .common import TransformError, WrongGroup
from .regular import _column_info, is_regular


@dataclass(frozen=True)
class StdSequent:
    ant: tuple[Formula, ...]
    suc: tuple[Formula, ...]

    def __repr__(self) -> str:
        a = ", ".join(map(print_formula, self.ant))
        s = ", ".join(map(print_formula, self.suc))
        return f"{a} -> {s}".strip()

    def key(self) -> tuple:
        return (
            tuple(sorted(map(print_formula, self.ant))),
            tuple(sorted(map(print_formula, self.suc))),
        )


@dataclass(frozen=True)
class StdProof:
    conclusion: StdSequent
    rule: str
    premises: tuple["StdProof", ...] = ()
    formula: Optional[Formula] = None  # principal / cut formula, for reading
    star: tuple[bool, ...] = ()  # modal rule: which members were boxed already

    def nodes(self, path=()):
        yield path, self
        for i, q in enumerate(self.premises):
            yield from q.nodes(path + (i,))

    def node_count(self) -> int:
        return 1 + sum(q.node_count() for q in self.premises)

    def count_rule(self, name: str) -> int:
        return sum(1 for _, n in self.nodes() if n.rule == name)


STD_RULES = {
    "ax",
    "bot",
    "and_l1",
    "and_l2",
    "and_r",
    "neg_l",
    "neg_r",
    "ic_l",
    "ic_r",
    "iw_l",
    "iw_r",
    "cut",
    "t1",
    "modal",
    "modal_d",
}


def _ms(items: Sequence[Formula]) -> Counter:
    return Counter(map(print_formula, items))


class StdCheckError(ValueError):
    pass


def check_std(p: StdProof, sys: SystemId) -> None:
    """Raises StdCheckError when some step violates the standard calculus."""
    if group_of(sys) is not Group.ALPHA:
        raise StdCheckError(f"the standard extraction covers group alpha, not {sys.value}")
    rules = system_rules(sys)
    for path, node in p.nodes():
        try:
            _check_std_node(node, rules)
        except StdCheckError as e:
            raise StdCheckError(f"at {list(path)}: {e}")


def _check_std_node(node: StdProof, rules) -> None:
    c = node.conclusion
    prems = [q.conclusion for q in node.premises]
    r = node.rule

    def need(n: int) -> None:
        if len(prems) != n:
            raise StdCheckError(f"{r} takes {n} premise(s)")

    if r == "ax":
        need(0)
        if not (len(c.ant) == 1 and len(c.suc) == 1 and c.ant[0] == c.suc[0]):
            raise StdCheckError("ax concludes A -> A")
        return
    if r == "bot":
        need(0)
        if not (len(c.ant) == 1 and isinstance(c.ant[0], Bottom) and not c.suc):
            raise StdCheckError("bot concludes bot ->")
        return
    if r == "cut":
        need(2)
        a = node.formula
        if a is None:
            raise StdCheckError("cut carries its cut formula")
        l, rr = prems
        if _ms(l.suc) - Counter([print_formula(a)]) + _ms(rr.suc) != _ms(c.suc) or _ms(
            l.ant
        ) + _ms(rr.ant) - Counter([print_formula(a)]) != _ms(c.ant):
            raise StdCheckError("cut sides do not add up")
        if print_formula(a) not in _ms(l.suc) or print_formula(a) not in _ms(rr.ant):
            raise StdCheckError("cut formula missing from a premise")
        return
    if r in ("modal", "modal_d"):
        need(1)
        if r == "modal_d" and RuleId.D not in rules:
            raise StdCheckError("the D modal rule needs a D system")
        (q,) = prems
        star = node.star
        if len(star) != len(q.ant):
            raise StdCheckError("modal rule star flags must cover the premise antecedent")
        if any(star) and RuleId.FOUR_L not in rules:
            raise StdCheckError("starred members need the 4 rules")
        boxed = []
        for s_flag, f in zip(star, q.ant):
            if s_flag:
                if not isinstance(f, Box):
                    raise StdCheckError("starred member must be boxed")
                boxed.append(f)
            else:
                boxed.append(Box(f))
        if _ms(c.ant) != _ms(boxed):
            raise StdCheckError("modal rule antecedent mismatch")
        if r == "modal":
            if len(q.suc) != 1 or _ms(c.suc) != _ms([Box(q.suc[0])]):
                raise StdCheckError("modal rule boxes exactly one succedent member")
        else:
            if q.suc or c.suc:
                raise StdCheckError("the D modal rule needs empty succedents")
        return

    if r == "and_r":
        need(2)
        a = node.formula
        if not isinstance(a, And):
            raise StdCheckError("and_r principal must be a conjunction")
        for q, part in zip(prems, (a.left, a.right)):
            if _ms(q.ant) != _ms(c.ant) or _ms(q.suc) != _ms(c.suc) - Counter(
                [print_formula(a)]
            ) + Counter([print_formula(part)]):
                raise StdCheckError("and_r premise mismatch")
        return

    need(1)
    (q,) = prems
    a = node.formula
    if a is None:
        raise StdCheckError(f"{r} carries its principal formula")
    ra = print_formula(a)
    if r == "and_l1" or r == "and_l2":
        if not isinstance(a, And):
            raise StdCheckError("principal must be a conjunction")
        kept = a.left if r == "and_l1" else a.right
        if _ms(q.ant) != _ms(c.ant) - Counter([ra]) + Counter([print_formula(kept)]) or _ms(
            q.suc
        ) != _ms(c.suc):
            raise StdCheckError(f"{r} premise mismatch")
        return
    if r == "neg_l":
        if not isinstance(a, Neg):
            raise StdCheckError("principal must be a negation")
        if _ms(q.ant) != _ms(c.ant) - Counter([ra]) or _ms(q.suc) != _ms(c.suc) + Counter(
            [print_formula(a.child)]
        ):
            raise StdCheckError("neg_l premise mismatch")
        return
    if r == "neg_r":
        if not isinstance(a, Neg):
            raise StdCheckError("principal must be a negation")
        if _ms(q.suc) != _ms(c.suc) - Counter([ra]) or _ms(q.ant) != _ms(c.ant) + Counter(
            [print_formula(a.child)]
        ):
            raise StdCheckError("neg_r premise mismatch")
        return
    if r == "ic_l":
        if _ms(q.ant) != _ms(c.ant) + Counter([ra]) or _ms(q.suc) != _ms(c.suc):
            raise StdCheckError("ic_l premise mismatch")
        return
    if r == "ic_r":
        if _ms(q.suc) != _ms(c.suc) + Counter([ra]) or _ms(q.ant) != _ms(c.ant):
            raise StdCheckError("ic_r premise mismatch")
        return
    if r == "iw_l":
        if _ms(q.ant) != _ms(c.ant) - Counter([ra]) or _ms(q.suc) != _ms(c.suc):
            raise StdCheckError("iw_l premise mismatch")
        return
    if r == "iw_r":
        if _ms(q.suc) != _ms(c.suc) - Counter([ra]) or _ms(q.ant) != _ms(c.ant):
            raise StdCheckError("iw_r premise mismatch")
        return
    if r == "t1":
        if not isinstance(a, Box):
            raise StdCheckError("t1 boxes its principal")
        if RuleId.T1 not in rules:
            raise StdCheckError("t1 needs a T system")
        if _ms(q.ant) != _ms(c.ant) - Counter([ra]) + Counter([print_formula(a.child)]) or _ms(
            q.suc
        ) != _ms(c.suc):
            raise StdCheckError("t1 premise mismatch")
        return
    raise StdCheckError(f"unknown standard rule {r}")


def _collapse(h: Hypersequent) -> StdSequent:
    ant: list[Formula] = []
    suc: list[Formula] = []
    for s in h.seqs:
        ant.extend(s.ant)
        suc.extend(s.suc)
    return StdSequent(tuple(ant), tuple(suc))


def to_standard(p: Proof, sys: SystemId) -> StdProof:
    """Collapse a regular all-plain proof into the traditional calculus."""
    if group_of(sys) is not Group.ALPHA:
        raise WrongGroup(f"standard extraction covers group alpha, not {sys.value}")
    p = align(p)
    rep = is_regular(p, sys)
    if not rep.regular:
        raise TransformError("to_standard needs a regular proof")
    if any(s.sort is not Sort.PLAIN for s in p.conclusion.seqs):
        raise TransformError("to_standard needs an all-plain end hypersequent")
    sp = _conv(p)
    check_std(sp, sys)
    return sp


def _conv(node: Proof) -> StdProof:
    r = node.rule
    c = _collapse(node.conclusion)

    if r in (RuleId.NEC1, RuleId.D):
        top, kinds = _column_info(node)
        inner = _conv(top)
        return StdProof(
            c,
            "modal" if r is RuleId.NEC1 else "modal_d",
            (inner,),
            formula=node.conclusion[node.app.seq].suc[0] if r is RuleId.NEC1 else None,
            star=tuple(k == "4l" for k in kinds),
        )
    if r in (RuleId.MERGE, RuleId.SPLIT, RuleId.NEC2, RuleId.T2):
        return _skip_through(_conv(node.premises[0]), c)
    if r is RuleId.EW:
        q = _conv(node.premises[0])
        s = node.conclusion[node.app.seq]
        for f in s.ant:
            q = StdProof(StdSequent(q.conclusion.ant + (f,), q.conclusion.suc), "iw_l", (q,), formula=f)
        for f in s.suc:
            q = StdProof(StdSequent(q.conclusion.ant, q.conclusion.suc + (f,)), "iw_r", (q,), formula=f)
        return _skip_through(q, c)
    if r is RuleId.INIT_AX:
        return StdProof(c, "ax")
    if r is RuleId.INIT_BOT:
        return StdProof(c, "bot")
    if r is RuleId.CUT:
        left = _conv(node.premises[0])
        right = _conv(node.premises[1])
        a = node.app.formula
        q = StdProof(
            StdSequent(
                left.conclusion.ant + tuple(_remove_one(right.conclusion.ant, a)),
                tuple(_remove_one(left.conclusion.suc, a)) + right.conclusion.suc,
            ),
            "cut",
            (left, right),
            formula=a,
        )
        # the kernel cut shares its context; the collapse doubled it
        ctx = [s for i, s in enumerate(node.conclusion.seqs) if i != node.app.seq]
        for s in ctx:
            for f in s.ant:
                q = StdProof(
                    StdSequent(tuple(_remove_one(q.conclusion.ant, f)), q.conclusion.suc),
                    "ic_l",
                    (q,),
                    formula=f,
                )
            for f in s.suc:
                q = StdProof(
                    StdSequent(q.conclusion.ant, tuple(_remove_one(q.conclusion.suc, f))),
                    "ic_r",
                    (q,),
                    formula=f,
                )
        return _skip_through(q, c)

    names = {
        RuleId.AND_L1: "and_l1",
        RuleId.AND_L2: "and_l2",
        RuleId.NEG_L: "neg_l",
        RuleId.NEG_R: "neg_r",
        RuleId.IC_L: "ic_l",
        RuleId.IC_R: "ic_r",
        RuleId.IW_L: "iw_l",
        RuleId.IW_R: "iw_r",
        RuleId.T1: "t1",
    }
    if r is RuleId.AND_R:
        s = node.conclusion[node.app.seq]
        f = s.suc[node.app.idx]
        return StdProof(c, "and_r", (_conv(node.premises[0]), _conv(node.premises[1])), formula=f)
    if r in names:
        s = node.conclusion[node.app.seq]
        side = s.ant if r in (RuleId.AND_L1, RuleId.AND_L2, RuleId.NEG_L, RuleId.IC_L, RuleId.IW_L, RuleId.T1) else s.suc
        f = side[node.app.idx]
        return StdProof(c, names[r], (_conv(node.premises[0]),), formula=f)
    raise TransformError(f"rule {r.value} cannot appear outside a critical part here")


def _remove_one(items: tuple[Formula, ...], f: Formula):
    out = list(items)
    out.remove(f)
    return tuple(out)


def _skip_through(q: StdProof, c: StdSequent) -> StdProof:
    if q.conclusion.key() != c.key():
        raise TransformError(
            f"standard collapse mismatch: built {q.conclusion!r}, wanted {c!r}"
        )
    return q


def std_to_kernel(sp: StdProof, sys: SystemId) -> Proof:
    """Re-embed a standard proof through the hypersequent macros; the result
    checks in the hypersequent calculus for sys."""
    c = sp.conclusion
    if sp.rule == "ax":
        return B.ax(c.ant[0])
    if sp.rule == "bot":
        return B.bot_init()
    prems = [std_to_kernel(q, sys) for q in sp.premises]

    def single(pf: Proof, target_ant, target_suc) -> Proof:
        want = Hypersequent((Sequent(Sort.PLAIN, tuple(target_ant), tuple(target_suc)),))
        return realign(pf, want)

    if sp.rule in ("modal", "modal_d"):
        (q,) = prems
        # line the premise antecedent up with the star flags; starred slots
        # need boxed members, so fill those first
        s = q.conclusion[0]
        pool = list(s.ant)
        slots: list[Optional[Formula]] = [None] * len(sp.star)
        for i, flag in enumerate(sp.star):
            if flag:
                pick = next((f for f in pool if isinstance(f, Box)), None)
                if pick is None:
                    raise TransformError("modal rule star flags do not fit the premise")
                pool.remove(pick)
                slots[i] = pick
        for i, flag in enumerate(sp.star):
            if not flag:
                slots[i] = pool.pop(0)
        q = realign(q, Hypersequent((Sequent(Sort.PLAIN, tuple(slots), s.suc),)))
        return modal_std(q, sp.star, d_variant=sp.rule == "modal_d")
    if sp.rule == "cut":
        l, r = prems
        a = sp.formula
        return B.cut(l, 0, r, 0, a)
    if sp.rule == "and_r":
        f = sp.formula
        idx = list(prems[0].conclusion[0].suc).index(f.left)
        return B.and_r(prems[0], prems[1], 0, idx)
    (q,) = prems
    f = sp.formula
    qs = q.conclusion[0]
    if sp.rule == "and_l1":
        return B.and_l1(q, 0, list(qs.ant).index(f.left), f.right)
    if sp.rule == "and_l2":
        return B.and_l2(q, 0, list(qs.ant).index(f.right), f.left)
    if sp.rule == "neg_l":
        return B.neg_l(q, 0, list(qs.suc).index(f.child))
    if sp.rule == "neg_r":
        return B.neg_r(q, 0, list(qs.ant).index(f.child))
    if sp.rule == "ic_l":
        hits = [i for i, g in enumerate(qs.ant) if g == f]
        return B.ic_l(q, 0, hits[0], hits[1])
    if sp.rule == "ic_r":
        hits = [i for i, g in enumerate(qs.suc) if g == f]
        return B.ic_r(q, 0, hits[0], hits[1])
    if sp.rule == "iw_l":
        return B.iw_l(q, 0, f)
    if sp.rule == "iw_r":
        return B.iw_r(q, 0, f)
    if sp.rule == "t1":
        return B.t1(q, 0, list(qs.ant).index(f.child))
    raise TransformError(f"unknown standard rule {sp.rule}")


def std_to_obj(sp: StdProof) -> dict:
    obj = {
        "goal": repr(sp.conclusion),
        "rule": sp.rule,
        "premises": [std_to_obj(q) for q in sp.premises],
    }
    if sp.formula is not None:
        obj["formula"] = print_formula(sp.formula)
    if sp.star:
        obj["star"] = list(sp.star)
    return obj

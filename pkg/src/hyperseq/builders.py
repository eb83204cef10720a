"""Forward construction of proof nodes, one helper per kernel rule.

Each helper takes premise proofs plus positions inside them, reshuffles the
premises (via realign) into the canonical layout the checker expects, and
returns an aligned node.  Every node built here passes check_step; a failed
assertion means a transformation bug, so the checks stay on.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .calculus import RuleApp, RuleId, check_step
from .proofs import Proof, realign
from .syntax import (
    And,
    BOT,
    Box,
    Formula,
    Hypersequent,
    Neg,
    Sequent,
    Sort,
)


class BuildError(AssertionError):
    pass


def _node(rule: RuleId, conclusion: Hypersequent, premises: Sequence[Proof], **kw) -> Proof:
    app = RuleApp(rule=rule, **kw)
    err = check_step(app, [q.conclusion for q in premises], conclusion)
    if err is not None:
        raise BuildError(f"building {rule.value}: {err}")
    return Proof(conclusion, app, tuple(premises))


def _move_formula(seq: Sequent, side: str, idx: int, to_front: bool) -> Sequent:
    items = list(seq.ant if side == "ant" else seq.suc)
    f = items.pop(idx)
    items.insert(0, f) if to_front else items.append(f)
    if side == "ant":
        return Sequent(seq.sort, tuple(items), seq.suc)
    return Sequent(seq.sort, seq.ant, tuple(items))


def _retarget(p: Proof, i: int, new_seq: Sequent) -> Proof:
    return realign(p, p.conclusion.replace(i, new_seq))


def _seq_to_end(p: Proof, i: int) -> Proof:
    seqs = [s for j, s in enumerate(p.conclusion.seqs) if j != i]
    seqs.append(p.conclusion[i])
    return realign(p, Hypersequent(tuple(seqs)))


# -- initial sequents --------------------------------------------------------


def ax(a: Formula, sort: Sort = Sort.PLAIN) -> Proof:
    return _node(RuleId.INIT_AX, Hypersequent((Sequent(sort, (a,), (a,)),)), [])


def bot_init(sort: Sort = Sort.PLAIN) -> Proof:
    return _node(RuleId.INIT_BOT, Hypersequent((Sequent(sort, (BOT,), ()),)), [])


# -- propositional -----------------------------------------------------------


def and_l1(p: Proof, seq: int, idx: int, right: Formula) -> Proof:
    s = p.conclusion[seq]
    ant = list(s.ant)
    ant[idx] = And(ant[idx], right)
    concl = p.conclusion.replace(seq, Sequent(s.sort, tuple(ant), s.suc))
    return _node(RuleId.AND_L1, concl, [p], seq=seq, idx=idx)


def and_l2(p: Proof, seq: int, idx: int, left: Formula) -> Proof:
    s = p.conclusion[seq]
    ant = list(s.ant)
    ant[idx] = And(left, ant[idx])
    concl = p.conclusion.replace(seq, Sequent(s.sort, tuple(ant), s.suc))
    return _node(RuleId.AND_L2, concl, [p], seq=seq, idx=idx)


def and_r(p1: Proof, p2: Proof, seq: int, idx: int) -> Proof:
    s1 = p1.conclusion[seq]
    a = s1.suc[idx]
    b_target = list(s1.suc)
    # locate B: realign p2 so its conclusion equals p1's with suc[idx] |-> B
    b = _find_and_r_partner(p1, p2, seq, idx)
    b_target[idx] = b
    p2a = realign(p2, p1.conclusion.replace(seq, Sequent(s1.sort, s1.ant, tuple(b_target))))
    suc = list(s1.suc)
    suc[idx] = And(a, b)
    concl = p1.conclusion.replace(seq, Sequent(s1.sort, s1.ant, tuple(suc)))
    return _node(RuleId.AND_R, concl, [p1, p2a], seq=seq, idx=idx)


def _find_and_r_partner(p1: Proof, p2: Proof, seq: int, idx: int) -> Formula:
    """The formula of p2 playing B against p1's suc[idx]=A (contexts equal)."""
    s1 = p1.conclusion[seq]
    base = list(s1.suc)
    del base[idx]
    from collections import Counter
    from .syntax import print_formula

    for cand in set(p2.conclusion[j].suc[k] for j in range(len(p2.conclusion)) for k in range(len(p2.conclusion[j].suc))):
        target = list(base)
        target.insert(idx, cand)
        want = p1.conclusion.replace(seq, Sequent(s1.sort, s1.ant, tuple(target)))
        if want.key() == p2.conclusion.key():
            return cand
    raise BuildError("and_r premises do not share a context")


def neg_l(p: Proof, seq: int, suc_idx: int) -> Proof:
    s = p.conclusion[seq]
    a = s.suc[suc_idx]
    q = _retarget(p, seq, _move_formula(s, "suc", suc_idx, to_front=False))
    s2 = q.conclusion[seq]
    concl = q.conclusion.replace(
        seq, Sequent(s2.sort, (Neg(a),) + s2.ant, s2.suc[:-1])
    )
    return _node(RuleId.NEG_L, concl, [q], seq=seq, idx=0)


def neg_r(p: Proof, seq: int, ant_idx: int) -> Proof:
    s = p.conclusion[seq]
    a = s.ant[ant_idx]
    q = _retarget(p, seq, _move_formula(s, "ant", ant_idx, to_front=True))
    s2 = q.conclusion[seq]
    concl = q.conclusion.replace(
        seq, Sequent(s2.sort, s2.ant[1:], s2.suc + (Neg(a),))
    )
    return _node(RuleId.NEG_R, concl, [q], seq=seq, idx=len(s2.suc))


def ic_l(p: Proof, seq: int, i: int, j: int) -> Proof:
    s = p.conclusion[seq]
    if s.ant[i] != s.ant[j]:
        raise BuildError("ic_l needs two equal formulas")
    order = [i, j] + [k for k in range(len(s.ant)) if k not in (i, j)]
    q = _retarget(p, seq, Sequent(s.sort, tuple(s.ant[k] for k in order), s.suc))
    s2 = q.conclusion[seq]
    concl = q.conclusion.replace(seq, Sequent(s2.sort, s2.ant[1:], s2.suc))
    return _node(RuleId.IC_L, concl, [q], seq=seq, idx=0)


def ic_r(p: Proof, seq: int, i: int, j: int) -> Proof:
    s = p.conclusion[seq]
    if s.suc[i] != s.suc[j]:
        raise BuildError("ic_r needs two equal formulas")
    order = [i, j] + [k for k in range(len(s.suc)) if k not in (i, j)]
    q = _retarget(p, seq, Sequent(s.sort, s.ant, tuple(s.suc[k] for k in order)))
    s2 = q.conclusion[seq]
    concl = q.conclusion.replace(seq, Sequent(s2.sort, s2.ant, s2.suc[1:]))
    return _node(RuleId.IC_R, concl, [q], seq=seq, idx=0)


def iw_l(p: Proof, seq: int, a: Formula) -> Proof:
    s = p.conclusion[seq]
    concl = p.conclusion.replace(seq, Sequent(s.sort, (a,) + s.ant, s.suc))
    return _node(RuleId.IW_L, concl, [p], seq=seq, idx=0)


def iw_r(p: Proof, seq: int, a: Formula) -> Proof:
    s = p.conclusion[seq]
    concl = p.conclusion.replace(seq, Sequent(s.sort, s.ant, s.suc + (a,)))
    return _node(RuleId.IW_R, concl, [p], seq=seq, idx=len(s.suc))


# -- structural ---------------------------------------------------------------


def ew(p: Proof, s: Sequent) -> Proof:
    concl = p.conclusion.append(s)
    return _node(RuleId.EW, concl, [p], seq=len(p.conclusion))


def ew_many(p: Proof, seqs: Iterable[Sequent]) -> Proof:
    for s in seqs:
        p = ew(p, s)
    return p


def merge(p: Proof, i: int, j: int) -> Proof:
    if i == j:
        raise BuildError("merge needs distinct sequents")
    s1, s2 = p.conclusion[i], p.conclusion[j]
    if s1.sort is not s2.sort:
        raise BuildError("merge needs one sort")
    ctx = [s for k, s in enumerate(p.conclusion.seqs) if k not in (i, j)]
    q = realign(p, Hypersequent(tuple(ctx) + (s1, s2)))
    merged = Sequent(s1.sort, s1.ant + s2.ant, s1.suc + s2.suc)
    concl = Hypersequent(tuple(ctx) + (merged,))
    n = len(concl)
    return _node(RuleId.MERGE, concl, [q], seq=n - 1, pseq=(n - 1, n))


def split(p: Proof, i: int, n_ant: int, n_suc: int) -> Proof:
    """Split -> sequent i: its first n_ant/n_suc formulas form the first part."""
    s = p.conclusion[i]
    if s.sort is not Sort.PLAIN:
        raise BuildError("split acts on -> sequents")
    q = _seq_to_end(p, i)
    ctx = q.conclusion.seqs[:-1]
    part1 = Sequent(Sort.PLAIN, s.ant[:n_ant], s.suc[:n_suc])
    part2 = Sequent(Sort.PLAIN, s.ant[n_ant:], s.suc[n_suc:])
    concl = Hypersequent(ctx + (part1, part2))
    n = len(concl)
    return _node(RuleId.SPLIT, concl, [q], seq=n - 2, seq2=n - 1)


def cut(p1: Proof, il: int, p2: Proof, ir: int, a: Formula) -> Proof:
    """Additive cut: p1 proves H | G >> D, A and p2 proves H | A, P >> T."""
    s_l = p1.conclusion[il]
    s_r = p2.conclusion[ir]
    if s_l.sort is not s_r.sort:
        raise BuildError("cut sequents must share one sort")
    # left: move A to the end of the succedent, principal sequent last
    idx = s_l.suc.index(a)
    p1a = _retarget(p1, il, _move_formula(s_l, "suc", idx, to_front=False))
    p1a = _seq_to_end(p1a, il)
    # right: move A to the front of the antecedent, context in p1's order
    idx = s_r.ant.index(a)
    p2a = _retarget(p2, ir, _move_formula(s_r, "ant", idx, to_front=True))
    ctx = p1a.conclusion.seqs[:-1]
    s_r2 = p2a.conclusion[ir]
    p2a = realign(p2a, Hypersequent(ctx + (s_r2,)))
    s_l2 = p1a.conclusion[-1]
    merged = Sequent(
        s_l.sort, s_l2.ant + s_r2.ant[1:], s_l2.suc[:-1] + s_r2.suc
    )
    concl = Hypersequent(ctx + (merged,))
    n = len(concl)
    return _node(
        RuleId.CUT, concl, [p1a, p2a], seq=n - 1, formula=a, pseq=(n - 1, n - 1)
    )


# -- modal --------------------------------------------------------------------


def nec1(p: Proof, seq: int) -> Proof:
    s = p.conclusion[seq]
    if s.sort is not Sort.MODAL or s.ant or len(s.suc) != 1:
        raise BuildError("nec1 premise sequent must be `=> A`")
    concl = p.conclusion.replace(seq, Sequent(Sort.PLAIN, (), (Box(s.suc[0]),)))
    return _node(RuleId.NEC1, concl, [p], seq=seq)


def four_r(p: Proof, seq: int) -> Proof:
    s = p.conclusion[seq]
    if s.sort is not Sort.MODAL or s.ant or len(s.suc) != 1:
        raise BuildError("4r premise sequent must be `=> A`")
    concl = p.conclusion.replace(seq, Sequent(Sort.MODAL, (), (Box(s.suc[0]),)))
    return _node(RuleId.FOUR_R, concl, [p], seq=seq)


def nec2(p: Proof) -> Proof:
    if len(p.conclusion) != 1:
        raise BuildError("nec2 admits no side hypersequent")
    s = p.conclusion[0]
    if s.sort is not Sort.PLAIN:
        raise BuildError("nec2 premise is a -> sequent")
    concl = Hypersequent((s.with_sort(Sort.MODAL),))
    return _node(RuleId.NEC2, concl, [p], seq=0)


def k_rule(p: Proof, seq2: int, ant_idx: int) -> Proof:
    s = p.conclusion[seq2]
    if s.sort is not Sort.MODAL:
        raise BuildError("k acts on a => sequent")
    a = s.ant[ant_idx]
    q = _retarget(p, seq2, _move_formula(s, "ant", ant_idx, to_front=True))
    s2 = q.conclusion[seq2]
    concl = Hypersequent(
        q.conclusion.replace(seq2, Sequent(Sort.MODAL, s2.ant[1:], s2.suc)).seqs
        + (Sequent(Sort.PLAIN, (Box(a),), ()),)
    )
    return _node(RuleId.K, concl, [q], seq=len(concl) - 1, seq2=seq2)


def four_l(p: Proof, seq2: int, ant_idx: int) -> Proof:
    s = p.conclusion[seq2]
    if s.sort is not Sort.MODAL:
        raise BuildError("4l acts on a => sequent")
    a = s.ant[ant_idx]
    if not isinstance(a, Box):
        raise BuildError("4l moves a boxed formula")
    q = _retarget(p, seq2, _move_formula(s, "ant", ant_idx, to_front=True))
    s2 = q.conclusion[seq2]
    concl = Hypersequent(
        q.conclusion.replace(seq2, Sequent(Sort.MODAL, s2.ant[1:], s2.suc)).seqs
        + (Sequent(Sort.PLAIN, (a,), ()),)
    )
    return _node(RuleId.FOUR_L, concl, [q], seq=len(concl) - 1, seq2=seq2)


def b1(p: Proof, seq2: int, ant_idx: int) -> Proof:
    s = p.conclusion[seq2]
    if s.sort is not Sort.PLAIN:
        raise BuildError("b1 acts on a -> sequent")
    a = s.ant[ant_idx]
    q = _retarget(p, seq2, _move_formula(s, "ant", ant_idx, to_front=True))
    s2 = q.conclusion[seq2]
    concl = Hypersequent(
        q.conclusion.replace(seq2, Sequent(Sort.PLAIN, s2.ant[1:], s2.suc)).seqs
        + (Sequent(Sort.MODAL, (Box(a),), ()),)
    )
    return _node(RuleId.B1, concl, [q], seq=len(concl) - 1, seq2=seq2)


def five1(p: Proof, seq2: int, ant_idx: int) -> Proof:
    s = p.conclusion[seq2]
    if s.sort is not Sort.PLAIN:
        raise BuildError("51 acts on a -> sequent")
    a = s.ant[ant_idx]
    if not isinstance(a, Box):
        raise BuildError("51 moves a boxed formula")
    q = _retarget(p, seq2, _move_formula(s, "ant", ant_idx, to_front=True))
    s2 = q.conclusion[seq2]
    concl = Hypersequent(
        q.conclusion.replace(seq2, Sequent(Sort.PLAIN, s2.ant[1:], s2.suc)).seqs
        + (Sequent(Sort.MODAL, (a,), ()),)
    )
    return _node(RuleId.FIVE1, concl, [q], seq=len(concl) - 1, seq2=seq2)


def d_rule(p: Proof, seq: int) -> Proof:
    s = p.conclusion[seq]
    if s.sort is not Sort.MODAL or not s.is_empty():
        raise BuildError("d premise sequent must be `=>`")
    concl = p.conclusion.replace(seq, Sequent(Sort.PLAIN))
    return _node(RuleId.D, concl, [p], seq=seq)


def t1(p: Proof, seq: int, idx: int) -> Proof:
    s = p.conclusion[seq]
    ant = list(s.ant)
    ant[idx] = Box(ant[idx])
    concl = p.conclusion.replace(seq, Sequent(s.sort, tuple(ant), s.suc))
    return _node(RuleId.T1, concl, [p], seq=seq, idx=idx)


def t2(p: Proof, seq: int) -> Proof:
    s = p.conclusion[seq]
    if s.sort is not Sort.MODAL:
        raise BuildError("t2 premise sequent is a => sequent")
    concl = p.conclusion.replace(seq, s.with_sort(Sort.PLAIN))
    return _node(RuleId.T2, concl, [p], seq=seq)


def b2(p: Proof, seq: int) -> Proof:
    for i, s in enumerate(p.conclusion.seqs):
        want = Sort.PLAIN if i == seq else Sort.MODAL
        if s.sort is not want:
            raise BuildError("b2 premise must be all-=> context plus one -> sequent")
    seqs = [
        (s.with_sort(Sort.MODAL) if i == seq else s.with_sort(Sort.PLAIN))
        for i, s in enumerate(p.conclusion.seqs)
    ]
    return _node(RuleId.B2, Hypersequent(tuple(seqs)), [p], seq=seq)


def five2(p: Proof, seq: int) -> Proof:
    for i, s in enumerate(p.conclusion.seqs):
        want = Sort.PLAIN if i == seq else Sort.MODAL
        if s.sort is not want:
            raise BuildError("52 premise must be all-=> context plus one -> sequent")
    concl = p.conclusion.replace(seq, p.conclusion[seq].with_sort(Sort.MODAL))
    return _node(RuleId.FIVE2, concl, [p], seq=seq)


def b25(p: Proof, seq: int, flip: Iterable[int] = ()) -> Proof:
    flip_set = set(flip)
    for i, s in enumerate(p.conclusion.seqs):
        want = Sort.PLAIN if i == seq else Sort.MODAL
        if s.sort is not want:
            raise BuildError("b25 premise must be all-=> context plus one -> sequent")
    seqs = []
    for i, s in enumerate(p.conclusion.seqs):
        if i == seq:
            seqs.append(s.with_sort(Sort.MODAL))
        elif i in flip_set:
            seqs.append(s.with_sort(Sort.PLAIN))
        else:
            seqs.append(s)
    return _node(RuleId.B25, Hypersequent(tuple(seqs)), [p], seq=seq)


# -- composites used all over the transformations ----------------------------


def merge_all(p: Proof, positions: Sequence[int]) -> Proof:
    """Merge the listed sequents (same sort) into one, left to right.

    After each merge the combined sequent sits at the end of the
    hypersequent; surviving positions are shifted accordingly.
    """
    pos = list(positions)
    while len(pos) > 1:
        i, j = pos[0], pos[1]
        p = merge(p, i, j)
        merged_at = len(p.conclusion) - 1

        def shift(k: int) -> int:
            return k - sum(1 for x in (i, j) if x < k)

        pos = [merged_at] + [shift(k) for k in pos[2:]]
    return p


def weaken_to(p: Proof, seq: int, target: Sequent) -> Proof:
    """iw the sequent up to `target` (which must extend it as a multiset)."""
    from collections import Counter
    from .syntax import print_formula

    s = p.conclusion[seq]
    if s.sort is not target.sort:
        raise BuildError("weaken_to cannot change the sort")
    need_ant = Counter(map(print_formula, target.ant)) - Counter(map(print_formula, s.ant))
    need_suc = Counter(map(print_formula, target.suc)) - Counter(map(print_formula, s.suc))
    by_repr = {print_formula(f): f for f in target.ant + target.suc}
    for r, n in sorted(need_ant.items()):
        for _ in range(n):
            p = iw_l(p, seq, by_repr[r])
    for r, n in sorted(need_suc.items()):
        for _ in range(n):
            p = iw_r(p, seq, by_repr[r])
    return p

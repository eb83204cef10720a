"""Axiom proof templates, derived-rule macro expansions and initial-sequent
expansion.

The macros return complete proofs given proofs of their premises, so a
"fragment" here is a function; plugging checked premises in and re-checking
is how the expansions are validated.
"""

from __future__ import annotations

from typing import Optional, Sequence

from . import builders as B
from .calculus import SystemId
from .proofs import Proof
from .syntax import (
    And,
    BOT,
    Atom,
    Bottom,
    Box,
    Formula,
    Neg,
    Sequent,
    Sort,
    impl,
)


class ShapeError(ValueError):
    """An instance does not match the derived-rule schema."""


# ---------------------------------------------------------------------------
# Propositional macros (sugar elaborations)


def imp_r(p: Proof, seq: int, ant_idx: int, suc_idx: int) -> Proof:
    """From H | A, G >> D, B conclude H | G >> D, A > B."""
    s = p.conclusion[seq]
    a = s.ant[ant_idx]
    b = s.suc[suc_idx]
    q = B.neg_l(p, seq, suc_idx)  # ~B, A, G >> D   (A now at ant_idx + 1)
    q = B.and_l2(q, seq, 0, a)  # A & ~B, A, G >> D
    q = B.and_l1(q, seq, ant_idx + 1, Neg(b))  # A & ~B, A & ~B, G >> D
    q = B.ic_l(q, seq, 0, ant_idx + 1)  # A & ~B, G >> D
    return B.neg_r(q, seq, 0)  # G >> D, ~(A & ~B)


def imp_l(p1: Proof, p2: Proof, seq: int, suc_idx: int, ant_idx: int) -> Proof:
    """From H | G >> D, A and H | B, G >> D conclude H | A > B, G >> D."""
    b = p2.conclusion[seq].ant[ant_idx]
    q2 = B.neg_r(p2, seq, ant_idx)  # G >> D, ~B
    a_idx = suc_idx
    q = B.and_r(p1, q2, seq, a_idx)  # G >> D, A & ~B
    return B.neg_l(q, seq, a_idx)  # ~(A & ~B), G >> D


def or_r(p: Proof, seq: int, idx_a: int, idx_b: int) -> Proof:
    """From H | G >> D, A, B conclude H | G >> D, A | B."""
    s = p.conclusion[seq]
    a, b = s.suc[idx_a], s.suc[idx_b]
    q = B.neg_l(p, seq, idx_a)  # ~A, G >> D, B
    b_pos = list(q.conclusion[seq].suc).index(b)
    q = B.neg_l(q, seq, b_pos)  # ~B, ~A, G >> D
    na_pos = list(q.conclusion[seq].ant).index(Neg(a), 1)
    q = B.and_l1(q, seq, na_pos, Neg(b))  # ~A & ~B, ~B, ...
    nb_pos = list(q.conclusion[seq].ant).index(Neg(b))
    q = B.and_l2(q, seq, nb_pos, Neg(a))  # ~A & ~B, ~A & ~B, ...
    dup = list(q.conclusion[seq].ant)
    i = dup.index(And(Neg(a), Neg(b)))
    j = dup.index(And(Neg(a), Neg(b)), i + 1)
    q = B.ic_l(q, seq, i, j)
    x = list(q.conclusion[seq].ant).index(And(Neg(a), Neg(b)))
    return B.neg_r(q, seq, x)  # G >> D, ~(~A & ~B)


def or_l(p1: Proof, p2: Proof, seq: int, idx_a: int, idx_b: int) -> Proof:
    """From H | A, G >> D and H | B, G >> D conclude H | A or B, G >> D."""
    q1 = B.neg_r(p1, seq, idx_a)  # G >> D, ~A   (appended at the end)
    q2 = B.neg_r(p2, seq, idx_b)  # G >> D, ~B
    pos = len(q1.conclusion[seq].suc) - 1
    q = B.and_r(q1, q2, seq, pos)  # G >> D, ~A & ~B
    return B.neg_l(q, seq, pos)


def mult_cut(p1: Proof, il: int, p2: Proof, ir: int, a: Formula) -> Proof:
    """Multiplicative cut: contexts are concatenated via ew, then cut."""
    ctx1 = [s for i, s in enumerate(p1.conclusion.seqs) if i != il]
    ctx2 = [s for i, s in enumerate(p2.conclusion.seqs) if i != ir]
    q1 = B.ew_many(p1, ctx2)
    q2 = B.ew_many(p2, ctx1)
    return B.cut(q1, il, q2, ir, a)


# ---------------------------------------------------------------------------
# Axiom proof templates


def five_lemma(a: Formula) -> Proof:
    """Proof of `-> box A, box ~box A`, the working core of the 5 axiom."""
    p = B.ax(a, Sort.MODAL)  # A => A
    p = B.k_rule(p, 0, 0)  # => A || box A ->
    p = B.neg_r(p, 1, 0)  # => A || -> ~box A
    p = B.five2(p, 1)  # => A || => ~box A
    p = B.nec1(p, 1)  # => A || -> box ~box A
    p = B.nec1(p, 0)  # -> box A || -> box ~box A
    return B.merge(p, 0, 1)  # -> box A, box ~box A


def axiom_template(name: str, a: Optional[Formula] = None, b: Optional[Formula] = None) -> Proof:
    """A derivation whose formula image is the named modal axiom.

    Ends at the single plain sequent whose image is the axiom:
    K: box(A>B) -> box A > box B;  T: box A -> A;  D: -> ~box bot;
    4: box A -> box box A;  B: ~A -> box ~box A;  5: ~box A -> box ~box A.
    """
    if name == "D":
        p = B.bot_init(Sort.MODAL)  # bot =>
        p = B.k_rule(p, 0, 0)  # => || box bot ->
        p = B.d_rule(p, 0)  # -> || box bot ->
        p = B.merge(p, 0, 1)  # box bot ->
        return B.neg_r(p, 0, 0)  # -> ~box bot
    if a is None:
        raise ShapeError(f"axiom {name} needs an instantiation formula")
    if name == "T":
        return B.t1(B.ax(a), 0, 0)  # box A -> A
    if name == "4":
        p = B.ax(a, Sort.MODAL)  # A => A
        p = B.k_rule(p, 0, 0)  # => A || box A ->
        p = B.four_r(p, 0)  # => box A || box A ->
        p = B.nec1(p, 0)  # -> box box A || box A ->
        return B.merge(p, 1, 0)  # box A -> box box A
    if name == "B":
        p = B.ax(a, Sort.MODAL)
        p = B.k_rule(p, 0, 0)  # => A || box A ->
        p = B.neg_r(p, 1, 0)  # => A || -> ~box A
        p = B.b2(p, 1)  # -> A || => ~box A
        p = B.nec1(p, 1)  # -> A || -> box ~box A
        p = B.merge(p, 0, 1)  # -> A, box ~box A
        return B.neg_l(p, 0, 0)  # ~A -> box ~box A
    if name == "5":
        p = five_lemma(a)  # -> box A, box ~box A
        return B.neg_l(p, 0, 0)  # ~box A -> box ~box A
    if name == "K":
        if b is None:
            raise ShapeError("axiom K needs two instantiation formulas")
        p1 = B.iw_r(B.ax(a), 0, b)  # A -> A, B
        p2 = B.iw_l(B.ax(b), 0, a)  # A, B -> B
        a_pos = list(p1.conclusion[0].suc).index(a)
        b_pos = list(p2.conclusion[0].ant).index(b)
        p = imp_l(p1, p2, 0, a_pos, b_pos)  # A > B, A -> B
        p = B.nec2(p)  # A > B, A => B
        a_pos = list(p.conclusion[0].ant).index(a)
        p = B.k_rule(p, 0, a_pos)  # A > B => B || box A ->
        ab_pos = list(p.conclusion[0].ant).index(impl(a, b))
        p = B.k_rule(p, 0, ab_pos)  # => B || box A -> || box (A>B) ->
        p = B.nec1(p, 0)  # -> box B || box A -> || box (A>B) ->
        p = B.merge(p, 1, 0)  # box(A>B) -> || box A -> box B
        p = B.merge(p, 1, 0)  # box A, box(A>B) -> box B
        boxa_pos = list(p.conclusion[0].ant).index(Box(a))
        boxb_pos = list(p.conclusion[0].suc).index(Box(b))
        return imp_r(p, 0, boxa_pos, boxb_pos)  # box(A>B) -> box A > box B
    raise ShapeError(f"unknown axiom {name!r}")


TEMPLATE_SYSTEM = {
    "K": SystemId.K,
    "T": SystemId.T,
    "D": SystemId.D,
    "4": SystemId.K4,
    "B": SystemId.KB,
    "5": SystemId.K5,
}


# ---------------------------------------------------------------------------
# Derived rules of the traditional calculi (section on standard systems)


def _single_plain(p: Proof) -> Sequent:
    if len(p.conclusion) != 1:
        raise ShapeError("this derived rule acts on a single-sequent premise")
    s = p.conclusion[0]
    if s.sort is not Sort.PLAIN:
        raise ShapeError("premise sequent must be plain")
    return s


def s4_box_l(p: Proof, ant_idx: int) -> Proof:
    """S4 box:l -- from (A, G -> D) conclude (box A, G -> D)."""
    _single_plain(p)
    q = B.nec2(p)  # A, G => D
    q = B.k_rule(q, 0, ant_idx)  # G => D || box A ->
    q = B.t2(q, 0)  # G -> D || box A ->
    return B.merge(q, 1, 0)  # box A, G -> D


def s4_box_r(p: Proof) -> Proof:
    """S4 box:r -- from (box G -> A) conclude (box G -> box A)."""
    s = _single_plain(p)
    if len(s.suc) != 1 or not all(isinstance(f, Box) for f in s.ant):
        raise ShapeError("box:r needs a fully boxed antecedent and one succedent")
    q = B.nec2(p)
    n = len(s.ant)
    for _ in range(n):
        q = B.four_l(q, 0, 0)  # peel each boxed member
    q = B.nec1(q, 0)  # -> box A || box Gi -> ...
    return B.merge_all(q, list(range(1, n + 1)) + [0])


def kd4_rule(p: Proof, gamma_idx: Sequence[int]) -> Proof:
    """KD4 rule -- from (G, box D -> ) conclude (box G, box D -> ).

    gamma_idx are the antecedent positions to box via K; the rest must be
    boxed already and go out via 4l.
    """
    s = _single_plain(p)
    if s.suc:
        raise ShapeError("the KD4 rule needs an empty succedent")
    gamma = set(gamma_idx)
    others = [i for i in range(len(s.ant)) if i not in gamma]
    if not all(isinstance(s.ant[i], Box) for i in others):
        raise ShapeError("non-gamma antecedent members must be boxed")
    q = B.nec2(p)
    total = len(s.ant)
    for i in sorted(range(total), reverse=True):
        if i in gamma:
            q = B.k_rule(q, 0, i)
        else:
            q = B.four_l(q, 0, i)
    q = B.d_rule(q, 0)  # -> || boxes ...
    return B.merge_all(q, list(range(1, total + 1)) + [0])


def s5_box_r_traditional(p: Proof) -> Proof:
    """Traditional S5 box:r -- from (box G -> box D, A) conclude
    (box G -> box D, box A), cutting against the 5-axiom lemma."""
    s = _single_plain(p)
    if not all(isinstance(f, Box) for f in s.ant):
        raise ShapeError("box:r needs a fully boxed antecedent")
    boxed_suc = [f for f in s.suc if isinstance(f, Box)]
    plain_suc = [f for f in s.suc if not isinstance(f, Box)]
    if len(plain_suc) != 1:
        raise ShapeError("box:r needs exactly one unboxed succedent member")
    a = plain_suc[0]
    q = B.nec2(p)  # box G => box D, A
    n_ant = len(s.ant)
    for _ in range(n_ant):
        q = B.four_l(q, 0, 0)  # ... || box Gi ->
    # antecedent now empty; negate each box Di into the antecedent
    for d in boxed_suc:
        pos = list(q.conclusion[0].suc).index(d)
        q = B.neg_l(q, 0, pos)  # ~box Di, ... => A
    # move each ~box Di out via K
    for d in boxed_suc:
        pos = list(q.conclusion[0].ant).index(Neg(d))
        q = B.k_rule(q, 0, pos)  # ... || box ~box Di ->
    # cut each box ~box Di -> against the 5-lemma -> box Di, box ~box Di
    for d in boxed_suc:
        lemma = five_lemma(d.child)  # -> box Di, box ~box Di
        target = None
        for i, sq in enumerate(q.conclusion.seqs):
            if sq.sort is Sort.PLAIN and list(sq.ant) == [Box(Neg(d))] and not sq.suc:
                target = i
                break
        assert target is not None
        q = mult_cut(lemma, 0, q, target, Box(Neg(d)))
    # now: => A, the box Gi ->, and one (-> box Di) per Di
    a_seq = next(
        i for i, sq in enumerate(q.conclusion.seqs) if sq.sort is Sort.MODAL
    )
    q = B.nec1(q, a_seq)
    return B.merge_all(q, list(range(len(q.conclusion))))


def s5std_box_r(p: Proof, seq: int) -> Proof:
    """Standard-S5 box:r -- from H= | (box G => A) conclude H= | (box G => box A)."""
    s = p.conclusion[seq]
    if s.sort is not Sort.MODAL or len(s.suc) != 1 or not all(isinstance(f, Box) for f in s.ant):
        raise ShapeError("std box:r needs (box G => A)")
    if any(t.sort is not Sort.MODAL for t in p.conclusion.seqs):
        raise ShapeError("std box:r needs an all-=> context")
    q = p
    n = len(s.ant)
    for _ in range(n):
        q = B.four_l(q, seq, 0)
    a_seq = seq
    q = B.nec1(q, a_seq)  # ... -> box A
    boxes = [i for i, sq in enumerate(q.conclusion.seqs) if sq.sort is Sort.PLAIN and i != a_seq]
    q = B.merge_all(q, boxes + [a_seq]) if boxes else q
    tgt = len(q.conclusion) - 1 if boxes else a_seq
    return B.five2(q, tgt)


def s5std_move(p: Proof, src: int, ant_idx: int, dst: int) -> Proof:
    """Standard-S5 move -- relocate box A from sequent src to sequent dst."""
    s = p.conclusion[src]
    a = s.ant[ant_idx]
    if not isinstance(a, Box):
        raise ShapeError("move relocates a boxed formula")
    if any(t.sort is not Sort.MODAL for t in p.conclusion.seqs):
        raise ShapeError("move needs an all-=> hypersequent")
    q = B.four_l(p, src, ant_idx)  # ... || box A ->
    box_pos = len(q.conclusion) - 1
    q = B.five2(q, box_pos)  # ... || box A =>
    return B.merge(q, box_pos, dst)


def modal_std(p: Proof, star: Sequence[bool], d_variant: bool = False) -> Proof:
    """The traditional modal rule: from (box*C1..box*Cm -> E) conclude
    (box C1..box Cm -> box E).  star[i] says antecedent member i is already
    boxed (goes out via 4l) rather than to be boxed (via K).  d_variant
    gives the D form: empty succedent, D instead of nec1."""
    s = _single_plain(p)
    m = len(s.ant)
    if len(star) != m:
        raise ShapeError("star must flag every antecedent member")
    if any(star[i] and not isinstance(s.ant[i], Box) for i in range(m)):
        raise ShapeError("starred members must be boxed")
    q = B.nec2(p)
    for i in sorted(range(m), reverse=True):
        q = B.four_l(q, 0, i) if star[i] else B.k_rule(q, 0, i)
    if d_variant:
        if s.suc:
            raise ShapeError("the D variant needs an empty succedent")
        q = B.d_rule(q, 0)
    else:
        if len(s.suc) != 1:
            raise ShapeError("the modal rule needs exactly one succedent member")
        q = B.nec1(q, 0)
    if m:
        q = B.merge_all(q, list(range(1, m + 1)) + [0])
    return q


def necessitation(p: Proof) -> Proof:
    """From (-> A) conclude (-> box A) via nec2 then nec1."""
    s = _single_plain(p)
    if s.ant or len(s.suc) != 1:
        raise ShapeError("necessitation starts from (-> A)")
    return B.nec1(B.nec2(p), 0)


# ---------------------------------------------------------------------------
# Initial-sequent expansion (used by atomization and the golden corpus)


def init_expansion(a: Formula, sort: Sort = Sort.PLAIN) -> Proof:
    """Derivation of (A >> A) from atomic initial sequents p -> p / bot ->."""
    if sort is Sort.MODAL:
        return B.nec2(init_expansion(a, Sort.PLAIN))
    if isinstance(a, Atom):
        return B.ax(a)
    if isinstance(a, Bottom):
        return B.iw_r(B.bot_init(), 0, BOT)
    if isinstance(a, Neg):
        e = init_expansion(a.child)
        e = B.neg_l(e, 0, 0)  # ~B, B ->
        return B.neg_r(e, 0, list(e.conclusion[0].ant).index(a.child))
    if isinstance(a, And):
        l = B.and_l1(init_expansion(a.left), 0, 0, a.right)  # B & C -> B
        r = B.and_l2(init_expansion(a.right), 0, 0, a.left)  # B & C -> C
        return B.and_r(l, r, 0, 0)
    if isinstance(a, Box):
        e = init_expansion(a.child)
        e = B.nec2(e)  # B => B
        e = B.k_rule(e, 0, 0)  # => B || box B ->
        e = B.nec1(e, 0)  # -> box B || box B ->
        return B.merge(e, 1, 0)  # box B -> box B
    raise TypeError(f"not a formula: {a!r}")


def bot_expansion(sort: Sort) -> Proof:
    """Derivation of (bot >>) with the plain form as the only leaf."""
    if sort is Sort.PLAIN:
        return B.bot_init()
    return B.nec2(B.bot_init())


DERIVED_RULES = {
    "imp_r": imp_r,
    "imp_l": imp_l,
    "or_r": or_r,
    "or_l": or_l,
    "cut_mult": mult_cut,
    "s4_box_l": s4_box_l,
    "s4_box_r": s4_box_r,
    "kd4_rule": kd4_rule,
    "s5_box_r": s5_box_r_traditional,
    "s5std_box_r": s5std_box_r,
    "s5std_move": s5std_move,
    "modal_std": modal_std,
    "necessitation": necessitation,
}

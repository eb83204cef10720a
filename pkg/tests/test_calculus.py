import pytest

from hyperseq import builders as B
from hyperseq.calculus import (
    Group,
    RuleApp,
    RuleId,
    StepErrorKind,
    SystemId,
    check_step,
    group_of,
    system_rules,
)
from hyperseq.syntax import (
    Atom,
    Box,
    Hypersequent,
    Sequent,
    Sort,
    parse_hypersequent as H,
    parse_formula,
)

p, q = Atom("p"), Atom("q")
BASE = system_rules(SystemId.K)


def test_system_rules():
    assert RuleId.K in BASE and RuleId.NEC1 in BASE and RuleId.SPLIT in BASE
    assert RuleId.T1 not in BASE and RuleId.D not in BASE
    assert system_rules(SystemId.K5) == BASE | {RuleId.FIVE1, RuleId.FIVE2}
    kb5 = system_rules(SystemId.KB5)
    assert kb5 == BASE | {RuleId.FIVE1, RuleId.FIVE2, RuleId.B1, RuleId.B25}
    assert RuleId.B2 not in kb5
    s5 = system_rules(SystemId.S5)
    assert s5 == BASE | {RuleId.T1, RuleId.T2, RuleId.FIVE1, RuleId.FIVE2, RuleId.FOUR_R, RuleId.FOUR_L}
    assert RuleId.B1 not in s5 and RuleId.B2 not in s5


def test_groups():
    assert group_of(SystemId.S4) is Group.ALPHA
    assert group_of(SystemId.KB5) is Group.BETA
    assert group_of(SystemId.B) is Group.GAMMA
    counts = {Group.ALPHA: 0, Group.BETA: 0, Group.GAMMA: 0}
    for sys in SystemId:
        counts[group_of(sys)] += 1
    assert counts == {Group.ALPHA: 6, Group.BETA: 6, Group.GAMMA: 3}


def ok(rule, premises, conclusion, **kw):
    err = check_step(RuleApp(rule=rule, **kw), premises, conclusion)
    assert err is None, err


def bad(rule, premises, conclusion, kind=None, **kw):
    err = check_step(RuleApp(rule=rule, **kw), premises, conclusion)
    assert err is not None
    if kind is not None:
        assert err.kind is kind, f"got {err.kind}: {err}"
    return err


def test_k_rule_positive():
    # K applied to (p, q => q) yields (box p -> || q => q)
    ok(RuleId.K, [H("p, q => q")], H("q => q || box p ->"), seq=1, seq2=0)


def test_nec2_no_side_hypersequent():
    bad(
        RuleId.NEC2,
        [H("p -> p || q -> q")],
        H("p => p || q -> q"),
        StepErrorKind.SCHEMA_MISMATCH,
    )


def test_split_sort_violation():
    bad(
        RuleId.SPLIT,
        [H("p, q => r")],
        H("p => || q => r"),
        StepErrorKind.SORT_VIOLATION,
        seq=0,
        seq2=1,
    )


def test_b2_positive_and_context_sorts():
    ok(RuleId.B2, [H("p => q || r -> s")], H("p -> q || r => s"), seq=1)
    bad(
        RuleId.B2,
        [H("p -> q || r -> s")],
        H("p -> q || r => s"),
        StepErrorKind.CONTEXT_MISMATCH,
        seq=1,
    )
    # context sequent of the conclusion must be plain
    bad(
        RuleId.B2,
        [H("p => q || r => s || t -> t")],
        H("p => q || r -> s || t => t"),
        StepErrorKind.SORT_VIOLATION,
        seq=2,
    )


NEGATIVE_CASES = [
    # one deliberately broken instance per rule
    (RuleId.INIT_AX, [], H("p => q"), StepErrorKind.SCHEMA_MISMATCH, {}),
    (RuleId.INIT_BOT, [], H("p ->"), StepErrorKind.SCHEMA_MISMATCH, {}),
    (RuleId.AND_L1, [H("q -> q")], H("p & q -> q"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.AND_L2, [H("p -> q")], H("p & q -> q"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.AND_R, [H("-> p"), H("-> p")], H("-> p & q"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.NEG_L, [H("-> q")], H("~p -> "), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.NEG_R, [H("q -> ")], H("-> ~p"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.IC_L, [H("p -> ")], H("p -> "), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.IC_R, [H("-> p, q")], H("-> p"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.IW_L, [H("q -> q")], H("p, q -> "), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.IW_R, [H("q ->")], H("p -> q"), StepErrorKind.BAD_ADDRESSING, {"seq": 0, "idx": 3}),
    (RuleId.CUT, [H("-> p"), H("q ->")], H("->"), StepErrorKind.SCHEMA_MISMATCH,
     {"seq": 0, "formula": parse_formula("p"), "pseq": (0, 0)}),
    (RuleId.EW, [H("p -> p || q -> q")], H("p -> p || r -> r"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 1}),
    (RuleId.MERGE, [H("p -> || -> q")], H("p -> q, q"), StepErrorKind.SCHEMA_MISMATCH,
     {"seq": 0, "pseq": (0, 1)}),
    (RuleId.SPLIT, [H("p, q => r")], H("p => || q => r"), StepErrorKind.SORT_VIOLATION,
     {"seq": 0, "seq2": 1}),
    (RuleId.NEC1, [H("p => p")], H("-> box p"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0}),
    (RuleId.NEC2, [H("p -> p || q -> q")], H("p => p || q -> q"), StepErrorKind.SCHEMA_MISMATCH, {}),
    (RuleId.K, [H("p, q => r")], H("q => r || box p =>"), StepErrorKind.SCHEMA_MISMATCH,
     {"seq": 1, "seq2": 0}),
    (RuleId.D, [H("=> p")], H("->"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0}),
    (RuleId.T1, [H("p -> q")], H("box q -> q"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0, "idx": 0}),
    (RuleId.T2, [H("p -> q")], H("p -> q"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0}),
    (RuleId.FOUR_R, [H("p => p")], H("=> box p"), StepErrorKind.CONTEXT_MISMATCH, {"seq": 0}),
    (RuleId.FOUR_L, [H("p, q => r")], H("q => r || box p ->"), StepErrorKind.CONTEXT_MISMATCH,
     {"seq": 1, "seq2": 0}),
    (RuleId.B1, [H("p, q -> r")], H("q -> r || box q =>"), StepErrorKind.CONTEXT_MISMATCH,
     {"seq": 1, "seq2": 0}),
    (RuleId.B2, [H("p => q || r => s || t -> t")], H("p => q || r -> s || t => t"),
     StepErrorKind.SORT_VIOLATION, {"seq": 2}),
    (RuleId.FIVE1, [H("p, q -> r")], H("q -> r || box p =>"), StepErrorKind.CONTEXT_MISMATCH,
     {"seq": 1, "seq2": 0}),
    (RuleId.FIVE2, [H("p -> q || r -> s")], H("p => q || r -> s"), StepErrorKind.SORT_VIOLATION,
     {"seq": 0}),
    (RuleId.B25, [H("p -> q || r -> s")], H("p => q || r -> s"), StepErrorKind.CONTEXT_MISMATCH,
     {"seq": 0}),
]


def test_negative_schema_suite_covers_every_rule():
    assert {case[0] for case in NEGATIVE_CASES} == set(RuleId)
    assert len(NEGATIVE_CASES) >= 24


@pytest.mark.parametrize("rule,premises,concl,kind,kw", NEGATIVE_CASES, ids=lambda c: str(c))
def test_negative_schema_case(rule, premises, concl, kind, kw):
    bad(rule, premises, concl, kind, **kw)


def test_positive_golden_per_rule():
    # one checked application of each of the 24 rules; every builder call
    # runs check_step internally and raises on a schema violation
    built = [
        B.ax(parse_formula("p & q"), Sort.MODAL),
        B.bot_init(),
        B.and_l1(B.ax(p), 0, 0, q),
        B.and_l2(B.ax(p), 0, 0, q),
        B.and_r(B.iw_l(B.ax(p), 0, q), B.iw_l(B.ax(q), 0, p), 0, 0),
        B.neg_l(B.ax(p), 0, 0),
        B.neg_r(B.ax(p), 0, 0),
        B.ic_l(B.iw_l(B.ax(p), 0, p), 0, 0, 1),
        B.ic_r(B.iw_r(B.ax(p), 0, p), 0, 0, 1),
        B.iw_l(B.ax(p), 0, q),
        B.iw_r(B.ax(p), 0, q),
        B.cut(B.ax(p), 0, B.ax(p), 0, p),
        B.ew(B.ax(p), Sequent(Sort.MODAL, (q,), ())),
        B.merge(B.split(B.iw_l(B.ax(p), 0, q), 0, 1, 0), 0, 1),
        B.nec1(B.k_rule(B.ax(p, Sort.MODAL), 0, 0), 0),
        B.nec2(B.ax(p)),
        B.k_rule(B.ax(p, Sort.MODAL), 0, 0),
        B.d_rule(B.ew(B.ax(p), Sequent(Sort.MODAL)), 1),
        B.t1(B.ax(p), 0, 0),
        B.t2(B.ax(p, Sort.MODAL), 0),
        B.four_r(B.k_rule(B.ax(p, Sort.MODAL), 0, 0), 0),
        B.four_l(B.ax(Box(p), Sort.MODAL), 0, 0),
        B.b1(B.ax(p), 0, 0),
        B.b2(_b2_instance(), 0),
        B.five1(B.ax(Box(p)), 0, 0),
        B.five2(_b2_instance(), 0),
        B.b25(B.ew(_b2_instance(), Sequent(Sort.MODAL, (), (q,))), 0, (1,)),
    ]
    assert len(built) >= 24


def _b2_instance():
    # a plain sequent next to a modalized context: p -> p || q => q
    return B.ew(B.ax(p), Sequent(Sort.MODAL, (q,), (q,)))


def test_check_step_deterministic():
    app = RuleApp(rule=RuleId.K, seq=1, seq2=0)
    prem = [H("p, q => q")]
    concl = H("q => q || box p ->")
    assert check_step(app, prem, concl) is None
    assert check_step(app, prem, concl) is None


def test_merge_split_inverse():
    base = B.iw_r(B.iw_l(B.ax(p), 0, q), 0, q)  # q, p -> p, q
    s = B.split(base, 0, 1, 1)
    m = B.merge(s, 0, 1)
    assert m.conclusion.key() == base.conclusion.key()
    from hyperseq.syntax import concat_hyper

    assert concat_hyper(s.conclusion).key() == base.conclusion[0].key()

"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the table.
"""

import random

import pytest

from genproofs import random_proof, _moves
from hyperseq import builders as B
from hyperseq import templates as T
from hyperseq.calculus import RuleApp, RuleId, SystemId, check_step, system_rules
from hyperseq.corpus import GAMMA_GOAL, gamma_cut_proof, run_corpus
from hyperseq.hilbert import AxiomStep, MPStep, NecStep, hilbert_to_hyperseq
from hyperseq.proofs import Proof, align, check_proof, realign
from hyperseq.search import Outcome, SearchConfig, prove
from hyperseq.semantics import frame_class, is_bounded_valid
from hyperseq.syntax import (
    And,
    Atom,
    Box,
    Hypersequent,
    Neg,
    Sequent,
    Sort,
    hyper_image,
    impl,
    parse_hypersequent,
)
from hyperseq.transform.common import TransformError, WrongGroup
from hyperseq.transform.cutelim import cut_degrees, eliminate_cut, reduce_cut_formula
from hyperseq.transform.regular import is_regular, regularize
from hyperseq.transform.restrict52 import is_restricted_52, restrict_52
from hyperseq.transform.standard import check_std, to_standard
from hyperseq.transform.t2elim import eliminate_T2

p, q = Atom("p"), Atom("q")


def _report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {criterion}" + (f" -- {detail}" if detail else ""))
    assert ok, f"{criterion}: {detail}"


def test_criterion_01_golden_corpus():
    results = run_corpus()
    ok = all(r.ok for r in results) and all(r.millis < 50 for r in results)
    slow = [f"{r.name}={r.millis:.0f}ms" for r in results if r.millis >= 50]
    _report(
        "1. golden corpus checks, each < 50 ms",
        ok,
        f"{sum(r.ok for r in results)}/{len(results)} pass" + (f", slow: {slow}" if slow else ""),
    )


def test_criterion_02_negative_schema_suite():
    from test_calculus import NEGATIVE_CASES

    failures = []
    for rule, premises, concl, kind, kw in NEGATIVE_CASES:
        err = check_step(RuleApp(rule=rule, **kw), premises, concl)
        if err is None or err.kind is not kind:
            failures.append(f"{rule.value}: got {err}")
    _report(
        "2. negative schema suite (>= 24 broken steps, correct error kinds)",
        len(NEGATIVE_CASES) >= 24 and not failures,
        f"{len(NEGATIVE_CASES)} cases" + (f"; wrong: {failures}" if failures else ""),
    )


def test_criterion_03_soundness_oracle(corpus_proofs):
    bad = []
    for name, sysid, proof in corpus_proofs:
        if not is_bounded_valid(hyper_image(proof.conclusion), frame_class(sysid), 3):
            bad.append(name)
    _report("3. soundness oracle on every corpus proof (3 worlds)", not bad, str(bad))


def test_criterion_04_lemma2_t2_elimination():
    cases = []
    base = B.iw_l(B.iw_r(B.ax(q), 0, Atom("r")), 0, p)
    cases.append((T.s4_box_l(base, 0), SystemId.S4))
    br_base = B.iw_l(T.axiom_template("T", p), 0, Box(q))
    cases.append((T.s4_box_r(br_base), SystemId.S4))
    randomized = 0
    seed = 0
    while randomized < 10:
        sysid = [SystemId.T, SystemId.S4, SystemId.B][seed % 3]
        proof = random_proof(sysid, steps=8, seed=seed, bias=RuleId.T2, require=RuleId.T2)
        cases.append((proof, sysid))
        randomized += 1
        seed += 1
    bad = []
    for proof, sysid in cases:
        out = eliminate_T2(align(proof), sysid)
        if (
            out.count_rule(RuleId.T2) != 0
            or out.conclusion.key() != proof.conclusion.key()
            or not check_proof(out, sysid).ok
        ):
            bad.append(sysid.value)
    _report(
        "4. Lemma 2: T2 elimination (S4 box rules + >= 10 randomized)",
        not bad,
        f"{len(cases)} proofs",
    )


def test_criterion_05_theorem4_regularization():
    cases = [(T.axiom_template("4", p), SystemId.K4)]
    base = B.iw_l(B.iw_r(B.ax(q), 0, Atom("r")), 0, p)
    cases.append((T.s4_box_l(base, 0), SystemId.S4))
    br_base = B.iw_l(T.axiom_template("T", p), 0, Box(q))
    cases.append((T.s4_box_r(br_base), SystemId.S4))
    for seed in range(10):
        sysid = [SystemId.K4, SystemId.KD4, SystemId.S4, SystemId.K, SystemId.T][seed % 5]
        cases.append((random_proof(sysid, steps=8, seed=100 + seed, bias=RuleId.FOUR_R), sysid))
    bad = []
    for proof, sysid in cases:
        out = regularize(proof, sysid)
        rep = is_regular(out, sysid)
        again = regularize(out, sysid)
        if (
            not rep.regular
            or out.count_rule(RuleId.FOUR_R) != 0
            or out.conclusion.key() != proof.conclusion.key()
            or not check_proof(out, sysid).ok
            or again.node_count() != out.node_count()
        ):
            bad.append(sysid.value)
    _report(
        "5. Theorem 4: regularization + idempotence (>= 10 randomized)",
        not bad,
        f"{len(cases)} proofs",
    )


def test_criterion_06_standard_extraction():
    cases = [
        (T.axiom_template("K", p, q), SystemId.K),
        (T.axiom_template("T", p), SystemId.T),
        (T.axiom_template("D"), SystemId.D),
        (T.axiom_template("4", p), SystemId.K4),
        (
            T.kd4_rule(
                B.iw_l(B.iw_l(B.neg_l(B.ax(p), 0, 0), 0, Box(q)), 0, q), [0, 2, 3]
            ),
            SystemId.KD4,
        ),
        (T.s4_box_l(B.iw_l(B.iw_r(B.ax(q), 0, Atom("r")), 0, p), 0), SystemId.S4),
        (T.s4_box_r(B.iw_l(T.axiom_template("T", p), 0, Box(q))), SystemId.S4),
    ]
    bad = []
    for proof, sysid in cases:
        reg = regularize(proof, sysid)
        sp = to_standard(reg, sysid)
        try:
            check_std(sp, sysid)
        except Exception as e:
            bad.append(f"{sysid.value}: {e}")
            continue
        from hyperseq.syntax import concat_hyper

        flat = concat_hyper(reg.conclusion)
        if sorted(map(repr, sp.conclusion.ant)) != sorted(map(repr, flat.ant)) or sorted(
            map(repr, sp.conclusion.suc)
        ) != sorted(map(repr, flat.suc)):
            bad.append(f"{sysid.value}: end mismatch")
    _report("6. standard-calculus extraction with end = concatenation", not bad, str(bad))


def test_criterion_07_lemma7_52_restriction():
    cases = [(T.axiom_template("5", p), SystemId.K45), (T.axiom_template("5", p), SystemId.KD45)]
    base = B.ew(B.nec2(B.t1(B.ax(p), 0, 0)), Sequent(Sort.MODAL, (), (q,)))
    cases.append((T.s5std_box_r(base, 0), SystemId.S5))
    done = 0
    seed = 0
    while done < 6 and seed < 60:
        sysid = [SystemId.K45, SystemId.KD45, SystemId.S5][seed % 3]
        proof = random_proof(sysid, steps=8, seed=200 + seed, bias=RuleId.FIVE2, require=RuleId.FIVE2)
        seed += 1
        try:
            restrict_52(proof, sysid)
        except TransformError:
            continue  # all-modalized end: outside the supported fragment
        cases.append((proof, sysid))
        done += 1
    bad = []
    for proof, sysid in cases:
        out = restrict_52(proof, sysid)
        if (
            out.conclusion.key() != proof.conclusion.key()
            or not check_proof(out, sysid).ok
            or not all(is_restricted_52(n) for _, n in out.nodes())
        ):
            bad.append(sysid.value)
    _report(
        "7. Lemma 7: every surviving 52 sits on an initial-shaped premise",
        not bad and len(cases) >= 9,
        f"{len(cases)} proofs",
    )


def test_criterion_08_lemma5_cut_reduction():
    lq = B.and_r(B.iw_l(B.ax(p), 0, q), B.iw_l(B.ax(q), 0, p), 0, 0)
    rq = B.and_l1(B.ax(p), 0, 0, q)
    cut_and = B.cut(lq, 0, rq, 0, And(p, q))

    ln = B.neg_r(B.ax(p), 0, 0)
    rn = B.neg_l(B.ax(p), 0, 0)
    cut_neg = B.cut(ln, 0, rn, 0, Neg(p))

    lnq = B.neg_r(lq, 0, 0)  # -> stuff, ~(p & q) ... build ~(p&q) cut
    rnq = B.neg_l(B.iw_r(rq, 0, q), 0, 1)
    # simpler: cut ~(p & q) between neg_r over rq-shaped and neg_l over lq
    a = Neg(And(p, q))
    left = B.neg_r(B.and_l1(B.ax(p), 0, 0, q), 0, 0)  # p & q gone: -> p, ~(p&q)? build:
    left = B.neg_r(rq, 0, 0)  # from (p & q -> p): -> p, ~(p & q)
    right = B.neg_l(lq, 0, 0)  # from (q, p -> p & q): ~(p & q), q, p ->
    cut_negand = B.cut(left, 0, right, 0, a)

    bad = []
    for c, label in ((cut_and, "p&q"), (cut_neg, "~p"), (cut_negand, "~(p&q)")):
        before = sorted(cut_degrees(c), reverse=True)
        out = reduce_cut_formula(c)
        after = sorted(cut_degrees(out), reverse=True)
        decreased = after < before  # strict multiset (lexicographic on sorted-desc)
        if (
            not decreased
            or out.conclusion.key() != c.conclusion.key()
            or not check_proof(out, SystemId.K).ok
            or any(d > 1 for d in after)
            or not all(
                isinstance(n.app.formula, (Atom, Box)) or n.app.formula == __import__("hyperseq.syntax", fromlist=["BOT"]).BOT
                for _, n in out.nodes()
                if n.rule is RuleId.CUT
            )
        ):
            bad.append(label)
    _report("8. Lemma 5: cut-formula reduction strictly decreases degrees", not bad, str(bad))


def _box_refl(a):
    e = B.nec2(T.init_expansion(a))
    e = B.k_rule(e, 0, 0)
    e = B.nec1(e, 0)
    return B.merge(e, 1, 0)


def _with_cut_proofs(sysid):
    """Two or three with-cut proofs for one system."""
    out = []
    # boxed cut: (box p -> box p) cut against itself
    lb = _box_refl(p)
    rb = _box_refl(p)
    out.append(B.cut(lb, 0, rb, 0, Box(p)))
    # atomic cut with real introductions on both sides
    la = B.iw_l(B.ax(p), 0, q)  # q, p -> p
    ra = B.iw_r(B.ax(p), 0, q)  # p -> p, q
    out.append(B.cut(la, 0, ra, 0, p))
    # T-systems: a T1-introduced boxed cut
    if RuleId.T1 in system_rules(sysid):
        out.append(B.cut(_box_refl(p), 0, B.t1(B.ax(p), 0, 0), 0, Box(p)))
    return out


ALPHA_BETA = [
    SystemId.K,
    SystemId.D,
    SystemId.T,
    SystemId.K4,
    SystemId.KD4,
    SystemId.S4,
    SystemId.K5,
    SystemId.KD5,
    SystemId.KB5,
    SystemId.K45,
    SystemId.KD45,
    SystemId.S5,
]


def test_criterion_09_cut_elimination():
    bad = []
    agreements = 0
    for sysid in ALPHA_BETA:
        for k, c in enumerate(_with_cut_proofs(sysid)):
            assert check_proof(c, sysid).ok
            out = eliminate_cut(c, sysid)
            if (
                out.count_rule(RuleId.CUT) != 0
                or out.conclusion.key() != c.conclusion.key()
                or not check_proof(out, sysid).ok
            ):
                bad.append(f"{sysid.value}#{k}")
                continue
            if sysid in (SystemId.K, SystemId.T, SystemId.K4, SystemId.K5, SystemId.K45, SystemId.S4) and k < 2:
                r = prove(out.conclusion, sysid, SearchConfig(max_depth=12, node_budget=100_000))
                if r.found:
                    agreements += 1
    _report(
        "9. Theorems 6/8: cut elimination across the 12 alpha+beta systems",
        not bad and agreements >= 6,
        f"{len(ALPHA_BETA)} systems, prover agreed on {agreements} goals" + (f"; failed {bad}" if bad else ""),
    )


def test_criterion_10_gamma_failure_evidence():
    g = gamma_cut_proof()
    checks = check_proof(g, SystemId.KB).ok and g.count_rule(RuleId.CUT) == 1
    goal = parse_hypersequent(GAMMA_GOAL)
    exhausted = []
    for sysid in (SystemId.KB, SystemId.KDB, SystemId.B):
        r = prove(goal, sysid, SearchConfig(max_depth=12, node_budget=100_000))
        exhausted.append(r.outcome is Outcome.EXHAUSTED)
    refused = []
    for sysid in (SystemId.KB, SystemId.KDB, SystemId.B):
        try:
            eliminate_cut(g, sysid)
            refused.append(False)
        except WrongGroup:
            refused.append(True)
    ok = checks and all(exhausted) and all(refused)
    _report(
        "10. gamma failure evidence: with-cut proof checks, search exhausts, cut-elim refuses",
        ok,
        f"checks={checks}, exhausted={exhausted}, refused={refused}",
    )


def _harvest_fragments():
    """Subtrees from beta-system proofs, at least 100 of them."""
    sources = []
    for seed in range(20):
        sysid = [SystemId.K5, SystemId.KD5, SystemId.KB5, SystemId.K45, SystemId.KD45, SystemId.S5][seed % 6]
        sources.append((random_proof(sysid, steps=10, seed=400 + seed), sysid))
    sources.append((align(T.axiom_template("5", p)), SystemId.K5))
    frags = []
    for proof, sysid in sources:
        for path, node in proof.nodes():
            if node.premises:
                frags.append((node, sysid))
    return frags


def _f7_append_ok(node: Proof, extra: Sequent, allow_rejustify: bool) -> bool:
    concl = Hypersequent(node.conclusion.seqs + (extra,))
    prems = [Hypersequent(pr.conclusion.seqs + (extra,)) for pr in node.premises]
    err = check_step(node.app, prems, concl)
    if err is None:
        return True
    if allow_rejustify and node.rule is RuleId.NEC2:
        app2 = RuleApp(rule=RuleId.FIVE2, seq=0)
        return check_step(app2, prems, concl) is None
    return False


def test_criterion_11_f7_property():
    frags = _harvest_fragments()
    assert len(frags) >= 100
    modal_extra = Sequent(Sort.MODAL, (Atom("x9"),), (Atom("x9"),))
    plain_extra = Sequent(Sort.PLAIN, (Atom("x9"),), (Atom("x9"),))
    bad = []
    for node, sysid in frags:
        subtree_rules = {n.rule for _, n in node.nodes()}
        blockers = subtree_rules & {RuleId.FIVE2, RuleId.B25, RuleId.NEC2}
        modal_ok = all(_f7_append_ok(n, modal_extra, True) for _, n in node.nodes() if n.premises)
        plain_ok = all(_f7_append_ok(n, plain_extra, False) for _, n in node.nodes() if n.premises)
        if not modal_ok:
            bad.append(f"modal append broke a {node.rule.value} fragment")
        if plain_ok != (not blockers):
            bad.append(
                f"plain append on a fragment with {sorted(r.value for r in blockers)}: {plain_ok}"
            )
    _report(
        "11. F7: modal append always preserved; plain append iff no 52/b25/nec2",
        not bad,
        f"{len(frags)} fragments" + (f"; {bad[:3]}" if bad else ""),
    )


def test_criterion_12_hilbert_bridge():
    pp = impl(p, p)
    bp = Box(p)
    cases = [
        ([AxiomStep("K", p, q)], SystemId.K),
        ([AxiomStep("T", p)], SystemId.T),
        ([AxiomStep("4", p), NecStep(0)], SystemId.K4),
        ([AxiomStep("5", p)], SystemId.K5),
        ([AxiomStep("taut", pp), AxiomStep("taut", impl(pp, pp)), MPStep(0, 1)], SystemId.K),
        (
            [AxiomStep("T", p), AxiomStep("taut", impl(impl(bp, p), impl(bp, p))), MPStep(0, 1)],
            SystemId.T,
        ),
        ([AxiomStep("taut", pp), NecStep(0), NecStep(1)], SystemId.K),
    ]
    bad = []
    for steps, sysid in cases:
        from hyperseq.hilbert import axiom_formula

        proof = hilbert_to_hyperseq(steps, sysid)
        # recompute the expected final formula
        formulas = []
        for s in steps:
            if isinstance(s, AxiomStep):
                formulas.append(axiom_formula(s))
            elif isinstance(s, NecStep):
                formulas.append(Box(formulas[s.i]))
            else:
                g = formulas[s.j]
                formulas.append(g.child.right.child)
        want = formulas[-1]
        end = proof.conclusion[0]
        if not check_proof(proof, sysid).ok or end.ant or end.suc != (want,) or len(proof.conclusion) != 1:
            bad.append(sysid.value)
    _report(
        "12. Hilbert bridge: >= 5 proofs translate with matching conclusions",
        not bad and len(cases) >= 5,
        f"{len(cases)} proofs",
    )

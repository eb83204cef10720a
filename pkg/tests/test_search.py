import pytest

from hyperseq import templates as T
from hyperseq.calculus import RuleId, SystemId, system_rules
from hyperseq.proofs import check_proof
from hyperseq.search import Outcome, SearchConfig, prove, prove_tautology
from hyperseq.syntax import Atom, parse_formula, parse_hypersequent

p, q = Atom("p"), Atom("q")


def test_propositional_goal_found():
    r = prove(parse_hypersequent("p & q -> q & p"), SystemId.K)
    assert r.found
    assert check_proof(r.proof, SystemId.K).ok
    assert r.proof.conclusion.key() == parse_hypersequent("p & q -> q & p").key()


def test_four_axiom_not_a_k_theorem():
    r = prove(parse_hypersequent("box p -> box box p"), SystemId.K, SearchConfig(max_depth=12))
    assert r.outcome is Outcome.EXHAUSTED
    # cross-checked by the bounded countermodel
    from hyperseq.semantics import bounded_valid, frame_class

    assert bounded_valid(parse_formula("box p > box box p"), frame_class(SystemId.K), 3) is not None


def test_gamma_goal_exhausts_in_gamma_systems():
    goal = parse_hypersequent("=> box ~box box box p || => p")
    for sysid in (SystemId.KB, SystemId.KDB, SystemId.B):
        r = prove(goal, sysid, SearchConfig(max_depth=12, node_budget=100_000))
        assert r.outcome is Outcome.EXHAUSTED, (sysid, r.outcome)


def test_templates_found_in_minimal_systems():
    cases = [
        ("T", (p,), SystemId.T),
        ("D", (), SystemId.D),
        ("4", (p,), SystemId.K4),
        ("B", (p,), SystemId.KB),
        ("5", (p,), SystemId.K5),
        ("K", (p, q), SystemId.K),
    ]
    for name, args, sysid in cases:
        t = T.axiom_template(name, *args)
        r = prove(t.conclusion, sysid, SearchConfig(max_depth=14, node_budget=300_000))
        assert r.found, f"{name} in {sysid.value}: {r.outcome}"
        assert check_proof(r.proof, sysid).ok
        assert r.proof.count_rule(RuleId.CUT) == 0


def test_deterministic():
    goal = parse_hypersequent("box p -> box box p")
    a = prove(goal, SystemId.K4, SearchConfig(max_depth=12))
    b = prove(goal, SystemId.K4, SearchConfig(max_depth=12))
    assert a.found and b.found
    assert a.nodes_visited == b.nodes_visited
    from hyperseq.proofs import proof_to_json

    assert proof_to_json(a.proof) == proof_to_json(b.proof)


def test_allow_rules_must_be_in_system():
    cfg = SearchConfig(allow_rules=frozenset({RuleId.T1}))
    with pytest.raises(ValueError):
        prove(parse_hypersequent("p -> p"), SystemId.K, cfg)


def test_tautology_discharge():
    for text in ("p > p", "p | ~p", "((p > q) > p) > p", "(p & q) > (q & p)"):
        r = prove_tautology(parse_formula(text), SystemId.K)
        assert r.found, text
        used = set(r.proof.rules_used())
        from hyperseq.search import PROPOSITIONAL_RULES

        assert used <= PROPOSITIONAL_RULES


def test_budget_exceeded_reported():
    goal = parse_hypersequent("box p -> box box p")
    r = prove(goal, SystemId.K, SearchConfig(max_depth=12, node_budget=5, semantic_pruning=False))
    assert r.outcome is Outcome.BUDGET

import pytest

from hyperseq.calculus import RuleId, SystemId
from hyperseq.hilbert import (
    AxiomStep,
    BadHilbertProof,
    MPStep,
    NecStep,
    UnavailableAxiom,
    axiom_formula,
    hilbert_to_hyperseq,
)
from hyperseq.proofs import check_proof
from hyperseq.syntax import Atom, Box, formula_image, impl, parse_formula, print_formula

p, q = Atom("p"), Atom("q")


def test_axiom_step_t():
    pr = hilbert_to_hyperseq([AxiomStep("T", p)], SystemId.T)
    assert check_proof(pr, SystemId.T).ok
    assert formula_image(pr.conclusion[0]) == impl(parse_formula("~bot"), impl(Box(p), p))


def test_necessitation_step():
    pr = hilbert_to_hyperseq([AxiomStep("taut", impl(p, p)), NecStep(0)], SystemId.K)
    assert check_proof(pr, SystemId.K).ok
    assert pr.conclusion.key() == __import__("hyperseq.syntax", fromlist=["parse_hypersequent"]).parse_hypersequent("-> box(p > p)").key()
    # the simulation ends with nec1 over nec2
    assert pr.rule is RuleId.NEC1
    assert pr.premises[0].rule is RuleId.NEC2


def test_mp_contains_cut():
    pp = impl(p, p)
    pr = hilbert_to_hyperseq(
        [AxiomStep("taut", pp), AxiomStep("taut", impl(pp, pp)), MPStep(0, 1)], SystemId.K
    )
    assert pr.count_rule(RuleId.CUT) >= 1
    assert check_proof(pr, SystemId.K).ok


def test_unavailable_axiom():
    with pytest.raises(UnavailableAxiom):
        hilbert_to_hyperseq([AxiomStep("5", p)], SystemId.K)
    with pytest.raises(UnavailableAxiom):
        hilbert_to_hyperseq([AxiomStep("B", p)], SystemId.S4)


def test_bad_references():
    with pytest.raises(BadHilbertProof):
        hilbert_to_hyperseq([MPStep(0, 1)], SystemId.K)
    pp = impl(p, p)
    with pytest.raises(BadHilbertProof):
        hilbert_to_hyperseq([AxiomStep("taut", pp), AxiomStep("taut", pp), MPStep(0, 1)], SystemId.K)


def test_end_image_matches_hilbert_conclusion():
    steps = [AxiomStep("4", p), NecStep(0)]
    pr = hilbert_to_hyperseq(steps, SystemId.K4)
    want = Box(axiom_formula(steps[0]))
    s = pr.conclusion[0]
    assert not s.ant and s.suc == (want,)

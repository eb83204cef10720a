import pytest

from hyperseq import builders as B
from hyperseq import templates as T
from hyperseq.calculus import RuleId, SystemId
from hyperseq.proofs import (
    Proof,
    align,
    check_proof,
    proof_from_json,
    proof_to_json,
)
from hyperseq.syntax import Atom, Hypersequent, Sort, parse_hypersequent

p, q = Atom("p"), Atom("q")


def test_check_proof_on_corpus(corpus_proofs):
    for name, sysid, proof in corpus_proofs:
        report = check_proof(proof, sysid)
        assert report.ok, f"{name}: {report.summary()}"
        assert report.node_count == proof.node_count()


def test_k_axiom_figure_checks_in_k():
    t = T.axiom_template("K", p, q)
    assert check_proof(t, SystemId.K).ok


def test_five_axiom_figure_rejected_in_k():
    t = T.axiom_template("5", p)
    report = check_proof(t, SystemId.K)
    assert not report.ok
    assert any("52" in str(e) for _, e in report.failures)


def test_single_ax_checks_everywhere():
    leaf = B.ax(p)
    for sysid in SystemId:
        assert check_proof(leaf, sysid).ok


def test_json_round_trip(corpus_proofs):
    for name, sysid, proof in corpus_proofs:
        text = proof_to_json(proof)
        back = proof_from_json(text)
        assert back.conclusion.key() == proof.conclusion.key()
        assert check_proof(back, sysid).ok, name
        assert proof_to_json(back) == text


def test_json_deterministic():
    t = T.axiom_template("4", p)
    assert proof_to_json(t) == proof_to_json(T.axiom_template("4", p))


def test_check_tolerates_permuted_contexts():
    t = B.k_rule(B.ax(p, Sort.MODAL), 0, 0)  # => p || box p ->
    t = B.nec1(t, 0)
    # permute the root conclusion and fix the addressing by hand
    from dataclasses import replace

    swapped = Hypersequent((t.conclusion[1], t.conclusion[0]))
    node = Proof(swapped, replace(t.app, seq=1), t.premises)
    assert check_proof(node, SystemId.K).ok


def test_realign_preserves_checking(corpus_proofs):
    for name, sysid, proof in corpus_proofs:
        aligned = align(proof)
        assert aligned.conclusion.key() == proof.conclusion.key()
        assert check_proof(aligned, sysid).ok, name


def test_expand_derived_fragments_check():
    # plugging checked premises into the macro builders yields checking proofs
    base = B.iw_r(B.iw_l(B.ax(q), 0, p), 0, p)  # p, q -> q, p
    frag = T.imp_r(base, 0, 0, 0)
    assert check_proof(frag, SystemId.K).ok
    frag2 = T.or_r(B.iw_r(B.ax(p), 0, q), 0, 0, 1)
    assert check_proof(frag2, SystemId.K).ok
    frag3 = T.or_l(B.iw_l(B.ax(p), 0, p), B.iw_l(B.ax(p), 0, q), 0, 0, 0)
    assert check_proof(frag3, SystemId.K).ok
    # shape errors
    with pytest.raises(T.ShapeError):
        T.s4_box_r(B.iw_l(B.ax(p), 0, q))  # antecedent not boxed


def test_mult_cut_macro():
    left = B.iw_r(B.ax(p), 0, q)  # p -> p, q
    right = B.iw_l(B.ax(q), 0, q)  # hmm q, q -> q; cut on p instead:
    right = B.iw_l(B.ax(p), 0, q)  # q, p -> p
    out = T.mult_cut(left, 0, right, 0, p)
    assert check_proof(out, SystemId.K).ok
    assert out.count_rule(RuleId.CUT) == 1

"""Cross-module invariants: rule soundness on random instances, template
instantiation at scale, and split/merge interaction."""

import random

import pytest

from genproofs import random_proof
from hyperseq import builders as B
from hyperseq import templates as T
from hyperseq.calculus import RuleId, SystemId
from hyperseq.proofs import check_proof
from hyperseq.semantics import frame_class, is_bounded_valid
from hyperseq.syntax import (
    And,
    Atom,
    Box,
    Formula,
    Neg,
    Sort,
    formula_image,
    hyper_image,
)

p, q = Atom("p"), Atom("q")


def _rand_formula(rng: random.Random, depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.35:
        return rng.choice([p, q])
    k = rng.randrange(3)
    if k == 0:
        return Neg(_rand_formula(rng, depth - 1))
    if k == 1:
        return And(_rand_formula(rng, depth - 1), _rand_formula(rng, depth - 1))
    return Box(_rand_formula(rng, depth - 1))


def test_initial_sequent_images_valid():
    rng = random.Random(1)
    for sort in (Sort.PLAIN, Sort.MODAL):
        for i in range(8):
            a = _rand_formula(rng, 2)
            img = formula_image(B.ax(a, sort).conclusion[0])
            assert is_bounded_valid(img, frame_class(SystemId.K), 3), (a, sort)


@pytest.mark.parametrize("sysid", list(SystemId))
def test_checked_steps_preserve_bounded_validity(sysid):
    """Random valid-by-construction proofs: every node conclusion's image is
    valid on the system's frames (leaves are valid, rules preserve it)."""
    fc = frame_class(sysid)
    seen_rules = set()
    for seed in range(3):
        proof = random_proof(sysid, steps=7, seed=900 + seed)
        assert check_proof(proof, sysid).ok
        for _, node in proof.nodes():
            seen_rules.add(node.rule)
            img = hyper_image(node.conclusion)
            assert is_bounded_valid(img, fc, 2), (sysid, node.rule, node.conclusion)
    # at least the workhorse rules showed up somewhere
    assert RuleId.INIT_AX in seen_rules


def test_axiom_templates_random_instantiations():
    rng = random.Random(2)
    minimal = T.TEMPLATE_SYSTEM
    for name in ("K", "T", "D", "4", "B", "5"):
        for i in range(20):
            a = _rand_formula(rng, 2)
            b = _rand_formula(rng, 2)
            t = T.axiom_template(name, a, b) if name == "K" else (
                T.axiom_template(name) if name == "D" else T.axiom_template(name, a)
            )
            assert check_proof(t, minimal[name]).ok, (name, a, b)
            if name == "D":
                break  # no instantiation freedom


def test_axiom_template_images_valid_on_frame_class():
    rng = random.Random(3)
    for name, sysid in T.TEMPLATE_SYSTEM.items():
        for i in range(3):
            a = _rand_formula(rng, 1)
            b = _rand_formula(rng, 1)
            t = T.axiom_template(name, a, b) if name == "K" else (
                T.axiom_template(name) if name == "D" else T.axiom_template(name, a)
            )
            img = hyper_image(t.conclusion)
            assert is_bounded_valid(img, frame_class(sysid), 2), (name, a)


def test_split_then_concat_restores_sequent():
    from hyperseq.syntax import concat_hyper

    rng = random.Random(4)
    for i in range(10):
        base = B.ax(p)
        for _ in range(3):
            base = B.iw_l(base, 0, _rand_formula(rng, 1))
            base = B.iw_r(base, 0, _rand_formula(rng, 1))
        s = base.conclusion[0]
        sp = B.split(base, 0, rng.randrange(len(s.ant) + 1), rng.randrange(len(s.suc) + 1))
        assert concat_hyper(sp.conclusion).key() == s.key()
        back = B.merge(sp, 0, 1)
        assert back.conclusion.key() == base.conclusion.key()


def test_boxed_compound_cut_elimination():
    """Cut on box(p & q): exercises the conjunction reduction inside the
    modalized splices."""
    from hyperseq.transform.cutelim import eliminate_cut

    a = And(p, q)
    lb = B.nec2(T.init_expansion(a))
    lb = B.k_rule(lb, 0, 0)
    lb = B.nec1(lb, 0)
    lb = B.merge(lb, 1, 0)  # box(p&q) -> box(p&q), nec1-introduced on the right
    rb = B.nec2(T.init_expansion(a))
    rb = B.k_rule(rb, 0, 0)
    rb = B.nec1(rb, 0)
    rb = B.merge(rb, 1, 0)
    for sysid in (SystemId.K, SystemId.T, SystemId.K4, SystemId.K5, SystemId.K45, SystemId.S5):
        c = B.cut(lb, 0, rb, 0, Box(a))
        out = eliminate_cut(c, sysid)
        assert out.count_rule(RuleId.CUT) == 0
        assert check_proof(out, sysid).ok
        assert out.conclusion.key() == c.conclusion.key()


def test_cut_with_context_sequents():
    """Boxed cut whose premises carry extra hypersequent context."""
    from hyperseq.transform.cutelim import eliminate_cut
    from hyperseq.syntax import Sequent

    lb = B.nec2(T.init_expansion(p))
    lb = B.k_rule(lb, 0, 0)
    lb = B.nec1(lb, 0)
    lb = B.merge(lb, 1, 0)
    lb = B.ew(lb, Sequent(Sort.MODAL, (q,), (q,)))  # box p -> box p || q => q
    rb = B.t1(B.ax(p), 0, 0)
    rb = B.iw_r(rb, 0, q)  # box p -> p, q
    rb = B.ew(rb, Sequent(Sort.MODAL, (q,), (q,)))
    for sysid in (SystemId.T, SystemId.S4, SystemId.S5):
        c = B.cut(lb, 0, rb, 0, Box(p))
        out = eliminate_cut(c, sysid)
        assert out.count_rule(RuleId.CUT) == 0
        assert check_proof(out, sysid).ok
        assert out.conclusion.key() == c.conclusion.key()

"""Random forward proof generation for the transformation tests.

Builds valid-by-construction proofs by applying randomly chosen forward
builders; the move set is weighted so the interesting modal/structural
rules show up, and callers can bias toward specific rules (t2, 4r, 52).
"""

from __future__ import annotations

import random
from typing import Optional

from hyperseq import builders as B
from hyperseq.calculus import RuleId, SystemId, system_rules
from hyperseq.proofs import Proof
from hyperseq.syntax import And, Atom, Box, Formula, Neg, Sequent, Sort

ATOMS = [Atom("p"), Atom("q")]


def _random_formula(rng: random.Random, depth: int = 2) -> Formula:
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(ATOMS)
    k = rng.randrange(3)
    if k == 0:
        return Neg(_random_formula(rng, depth - 1))
    if k == 1:
        return And(_random_formula(rng, depth - 1), _random_formula(rng, depth - 1))
    return Box(_random_formula(rng, depth - 1))


def _moves(p: Proof, sys: SystemId, rng: random.Random, bias: Optional[RuleId]):
    rules = system_rules(sys)
    h = p.conclusion
    out = []

    def add(rule: RuleId, weight: int, fn):
        if rule in rules:
            out.extend([(rule, fn)] * weight)

    for i, s in enumerate(h.seqs):
        add(RuleId.IW_L, 1, lambda i=i: B.iw_l(p, i, _random_formula(rng)))
        add(RuleId.IW_R, 1, lambda i=i: B.iw_r(p, i, _random_formula(rng)))
        for pos, f in enumerate(s.ant):
            add(RuleId.AND_L1, 1, lambda i=i, pos=pos: B.and_l1(p, i, pos, _random_formula(rng)))
            add(RuleId.NEG_R, 1, lambda i=i, pos=pos: B.neg_r(p, i, pos))
            if [g for g in s.ant].count(f) >= 2:
                j = [k for k, g in enumerate(s.ant) if g == f]
                add(RuleId.IC_L, 1, lambda i=i, j=j: B.ic_l(p, i, j[0], j[1]))
            add(RuleId.T1, 2, lambda i=i, pos=pos: B.t1(p, i, pos))
        for pos, f in enumerate(s.suc):
            add(RuleId.NEG_L, 1, lambda i=i, pos=pos: B.neg_l(p, i, pos))
        if s.sort is Sort.MODAL:
            for pos, f in enumerate(s.ant):
                add(RuleId.K, 3, lambda i=i, pos=pos: B.k_rule(p, i, pos))
                if isinstance(f, Box):
                    add(RuleId.FOUR_L, 3, lambda i=i, pos=pos: B.four_l(p, i, pos))
            if not s.ant and len(s.suc) == 1:
                add(RuleId.NEC1, 4, lambda i=i: B.nec1(p, i))
                add(RuleId.FOUR_R, 4 if bias is RuleId.FOUR_R else 2, lambda i=i: B.four_r(p, i))
            if not s.ant and not s.suc:
                add(RuleId.D, 3, lambda i=i: B.d_rule(p, i))
            add(RuleId.T2, 6 if bias is RuleId.T2 else 2, lambda i=i: B.t2(p, i))
        if s.sort is Sort.PLAIN:
            for pos, f in enumerate(s.ant):
                add(RuleId.B1, 2, lambda i=i, pos=pos: B.b1(p, i, pos))
                if isinstance(f, Box):
                    add(RuleId.FIVE1, 3, lambda i=i, pos=pos: B.five1(p, i, pos))
            if len(s.ant) + len(s.suc) >= 2:
                add(
                    RuleId.SPLIT,
                    1,
                    lambda i=i, s=s: B.split(
                        p, i, rng.randrange(len(s.ant) + 1), rng.randrange(len(s.suc) + 1)
                    ),
                )
    if len(h) == 1 and h[0].sort is Sort.PLAIN:
        add(RuleId.NEC2, 3, lambda: B.nec2(p))
    plain = [i for i, s in enumerate(h.seqs) if s.sort is Sort.PLAIN]
    modal = [i for i, s in enumerate(h.seqs) if s.sort is Sort.MODAL]
    if len(plain) >= 2:
        add(RuleId.MERGE, 2, lambda: B.merge(p, plain[0], plain[1]))
    if len(modal) >= 2:
        add(RuleId.MERGE, 2, lambda: B.merge(p, modal[0], modal[1]))
    if len(h) < 4:
        add(
            RuleId.EW,
            1,
            lambda: B.ew(
                p,
                Sequent(
                    rng.choice([Sort.PLAIN, Sort.MODAL]),
                    tuple([_random_formula(rng)] if rng.random() < 0.5 else []),
                    tuple([_random_formula(rng)] if rng.random() < 0.5 else []),
                ),
            ),
        )
    if len(plain) == 1 and len(modal) == len(h) - 1:
        add(RuleId.FIVE2, 5 if bias is RuleId.FIVE2 else 2, lambda: B.five2(p, plain[0]))
        if modal:
            flip = tuple(m for m in modal if rng.random() < 0.5)
            add(RuleId.B25, 2, lambda flip=flip: B.b25(p, plain[0], flip))
    if len(plain) == len(h) - 1 and len(modal) == 1:
        add(RuleId.B2, 2, lambda: B.b2(p, modal[0]))
    return out


def random_proof(
    sys: SystemId,
    steps: int = 8,
    seed: int = 0,
    bias: Optional[RuleId] = None,
    require: Optional[RuleId] = None,
) -> Proof:
    """A random checked proof in sys; with `require`, retries seeds until the
    rule shows up."""
    for attempt in range(40):
        rng = random.Random(seed * 1000 + attempt)
        p = B.ax(rng.choice(ATOMS), Sort.PLAIN)
        for _ in range(steps):
            moves = _moves(p, sys, rng, bias)
            if not moves:
                break
            rule, fn = rng.choice(moves)
            try:
                p = fn()
            except Exception:
                continue
        if require is None or p.count_rule(require) > 0:
            return p
    raise AssertionError(f"could not generate a proof containing {require}")

"""Restricting initial sequents to p -> p and bot ->."""

from __future__ import annotations

from ..calculus import RuleId
from ..proofs import Proof, realign
from ..syntax import Atom, Sort
from ..templates import bot_expansion, init_expansion


def is_atomized(p: Proof) -> bool:
    for _, node in p.nodes():
        if node.rule is RuleId.INIT_AX:
            s = node.conclusion[0]
            if s.sort is not Sort.PLAIN or not isinstance(s.ant[0], Atom):
                return False
        if node.rule is RuleId.INIT_BOT and node.conclusion[0].sort is not Sort.PLAIN:
            return False
    return True


def atomize_initials(p: Proof) -> Proof:
    """Replace compound or modalized initial sequents by their expansions;
    the end hypersequent is unchanged."""
    if p.rule is RuleId.INIT_AX:
        s = p.conclusion[0]
        if s.sort is Sort.PLAIN and isinstance(s.ant[0], Atom):
            return p
        return realign(init_expansion(s.ant[0], s.sort), p.conclusion)
    if p.rule is RuleId.INIT_BOT:
        s = p.conclusion[0]
        if s.sort is Sort.PLAIN:
            return p
        return realign(bot_expansion(s.sort), p.conclusion)
    if not p.premises:
        return p
    return Proof(p.conclusion, p.app, tuple(atomize_initials(q) for q in p.premises))

"""Translation of axiomatic (Hilbert-style) proofs into hypersequent proofs.

Modal axiom steps come from the axiom templates, modus ponens is simulated
by cuts, necessitation by nec2 followed by nec1, and propositional
tautologies are discharged by the bounded prover over the propositional
rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import builders as B
from .calculus import SystemId, system_rules
from .proofs import Proof, check_proof, realign
from .search import prove_tautology
from .syntax import (
    BOT,
    And,
    Box,
    Formula,
    Hypersequent,
    Neg,
    Sequent,
    Sort,
    impl,
    print_formula,
)
from .templates import TEMPLATE_SYSTEM, axiom_template, imp_r


class UnavailableAxiom(ValueError):
    pass


class TautologyDischargeFailed(RuntimeError):
    pass


class BadHilbertProof(ValueError):
    pass


@dataclass(frozen=True)
class AxiomStep:
    name: str  # "taut" | "K" | "D" | "T" | "4" | "B" | "5"
    a: Optional[Formula] = None  # the tautology itself for "taut"
    b: Optional[Formula] = None  # second instantiation formula for "K"


@dataclass(frozen=True)
class MPStep:
    i: int  # proves phi
    j: int  # proves phi > psi


@dataclass(frozen=True)
class NecStep:
    i: int


HilbertStep = Union[AxiomStep, MPStep, NecStep]

AXIOM_FORMULAS = {
    "K": lambda a, b: impl(Box(impl(a, b)), impl(Box(a), Box(b))),
    "D": lambda a, b: Neg(Box(BOT)),
    "T": lambda a, b: impl(Box(a), a),
    "4": lambda a, b: impl(Box(a), Box(Box(a))),
    "B": lambda a, b: impl(Neg(a), Box(Neg(Box(a)))),
    "5": lambda a, b: impl(Neg(Box(a)), Box(Neg(Box(a)))),
}


def axiom_formula(step: AxiomStep) -> Formula:
    if step.name == "taut":
        if step.a is None:
            raise BadHilbertProof("a tautology step carries its formula")
        return step.a
    if step.name not in AXIOM_FORMULAS:
        raise BadHilbertProof(f"unknown axiom {step.name!r}")
    return AXIOM_FORMULAS[step.name](step.a, step.b)


def _axiom_proof(step: AxiomStep, sys: SystemId) -> Proof:
    """A proof of (-> axiom formula)."""
    if step.name == "taut":
        result = prove_tautology(step.a, sys)
        if not result.found:
            raise TautologyDischargeFailed(
                f"bounded search failed on {print_formula(step.a)} ({result.outcome.value})"
            )
        return result.proof
    minimal = TEMPLATE_SYSTEM[step.name]
    if not system_rules(minimal) <= system_rules(sys):
        raise UnavailableAxiom(f"axiom {step.name} is not available in {sys.value}")
    t = axiom_template(step.name, step.a, step.b)
    if step.name == "D":
        return t  # already (-> ~box bot)
    s = t.conclusion[0]
    return imp_r(t, 0, 0, 0)


def _mp(phi_proof: Proof, imp_proof: Proof, phi: Formula, psi: Formula) -> Proof:
    """From (-> phi) and (-> phi > psi) derive (-> psi) via three cuts."""
    x = And(phi, Neg(psi))  # phi > psi is ~(phi & ~psi)
    c = B.neg_l(B.ax(x), 0, 0)  # ~X, X ->
    d = B.cut(imp_proof, 0, c, 0, Neg(x))  # X ->
    e1 = B.iw_r(B.ax(phi), 0, psi)  # phi -> phi, psi
    e2 = B.neg_r(B.iw_l(B.ax(psi), 0, phi), 0, 1)  # phi -> psi, ~psi
    # align: both need suc [psi, principal]
    e1 = realign(
        e1, Hypersequent((Sequent(Sort.PLAIN, (phi,), (psi, phi)),))
    )
    e = B.and_r(e1, e2, 0, 1)  # phi -> psi, X
    f = B.cut(e, 0, d, 0, x)  # phi -> psi
    return B.cut(phi_proof, 0, f, 0, phi)  # -> psi


def hilbert_to_hyperseq(steps: Sequence[HilbertStep], sys: SystemId) -> Proof:
    """A hypersequent proof of (-> f) for the final step formula f."""
    if not steps:
        raise BadHilbertProof("empty step list")
    formulas: list[Formula] = []
    proofs: list[Proof] = []
    for n, step in enumerate(steps):
        if isinstance(step, AxiomStep):
            f = axiom_formula(step)
            pr = _axiom_proof(step, sys)
        elif isinstance(step, MPStep):
            if not (0 <= step.i < n and 0 <= step.j < n):
                raise BadHilbertProof(f"step {n}: indices must reference earlier steps")
            phi = formulas[step.i]
            g = formulas[step.j]
            if not (isinstance(g, Neg) and isinstance(g.child, And) and g.child.left == phi and isinstance(g.child.right, Neg)):
                raise BadHilbertProof(
                    f"step {n}: step {step.j} is not an implication from step {step.i}"
                )
            psi = g.child.right.child
            f = psi
            pr = _mp(proofs[step.i], proofs[step.j], phi, psi)
        elif isinstance(step, NecStep):
            if not (0 <= step.i < n):
                raise BadHilbertProof(f"step {n}: index must reference an earlier step")
            f = Box(formulas[step.i])
            pr = B.nec1(B.nec2(proofs[step.i]), 0)
        else:
            raise BadHilbertProof(f"unknown step {step!r}")
        formulas.append(f)
        proofs.append(pr)
    final = proofs[-1]
    report = check_proof(final, sys)
    if not report.ok:
        raise BadHilbertProof(f"translation produced an invalid proof: {report.summary()}")
    return final


def hilbert_step_from_obj(obj: dict) -> HilbertStep:
    from .syntax import parse_formula

    kind = obj.get("step")
    if kind == "axiom":
        return AxiomStep(
            name=obj["name"],
            a=parse_formula(obj["a"]) if obj.get("a") else None,
            b=parse_formula(obj["b"]) if obj.get("b") else None,
        )
    if kind == "taut":
        return AxiomStep(name="taut", a=parse_formula(obj["formula"]))
    if kind == "mp":
        return MPStep(i=int(obj["i"]), j=int(obj["j"]))
    if kind == "nec":
        return NecStep(i=int(obj["i"]))
    raise BadHilbertProof(f"unknown step kind {kind!r}")

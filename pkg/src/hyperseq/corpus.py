"""The golden corpus of built-in derivations, each encoded as a checked proof.

Covers the six axiom templates, the necessitation simulation, the boxed
initial-sequent expansion, the derived rules of the traditional calculi,
and the group-gamma with-cut proof used as cut-elimination failure
evidence.  `run_corpus` re-checks everything and reports a table.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import builders as B
from . import templates as T
from .calculus import SystemId
from .proofs import Proof, check_proof
from .syntax import Atom, Box, Sequent, Sort

P = Atom("p")
Q = Atom("q")


@dataclass
class CorpusEntry:
    name: str
    system: SystemId
    build: Callable[[], Proof]
    note: str = ""


def _nec_simulation() -> Proof:
    base = T.imp_r(B.ax(P), 0, 0, 0)  # -> p > p
    return T.necessitation(base)  # -> box (p > p) via nec2 then nec1


def _boxed_initial() -> Proof:
    return T.init_expansion(Box(P), Sort.MODAL)  # box p => box p from p -> p


def _s4_box_l() -> Proof:
    base = B.iw_l(B.iw_r(B.ax(Q), 0, Atom("r")), 0, P)  # p, q -> q, r
    return T.s4_box_l(base, 0)


def _s4_box_r() -> Proof:
    base = B.iw_l(T.axiom_template("T", P), 0, Box(Q))  # box q, box p -> p
    return T.s4_box_r(base)


def _s5_box_r_traditional() -> Proof:
    base = B.iw_r(B.iw_r(T.axiom_template("T", P), 0, Box(Q)), 0, Box(P))
    return T.s5_box_r_traditional(base)  # box p -> box q, box p boxed up


def _kd4_rule() -> Proof:
    base = B.iw_l(B.iw_l(B.neg_l(B.ax(P), 0, 0), 0, Box(Q)), 0, Q)  # q, box q, ~p, p ->
    return T.kd4_rule(base, [0, 2, 3])


def _s5std_box_r() -> Proof:
    base = B.ew(B.nec2(B.t1(B.ax(P), 0, 0)), Sequent(Sort.MODAL, (), (Q,)))
    return T.s5std_box_r(base, 0)


def _s5std_move() -> Proof:
    base = B.ew(B.nec2(B.iw_l(B.ax(Q), 0, Box(P))), Sequent(Sort.MODAL, (Atom("r"),), (Atom("r"),)))
    return T.s5std_move(base, 0, 0, 1)


def gamma_cut_proof() -> Proof:
    """The with-cut proof behind the cut-elimination failure evidence:
    => box ~box box box p | => p, plus one empty plain sequent that the
    additive kernel cut leaves behind."""
    e = B.ax(Box(P), Sort.MODAL)  # box p => box p
    e = B.k_rule(e, 0, 0)  # => box p || box box p ->
    e = B.b1(e, 1, 0)  # => box p || -> || box box box p =>
    bpos = next(i for i, s in enumerate(e.conclusion.seqs) if s.sort is Sort.MODAL and s.ant)
    e = B.neg_r(e, bpos, 0)  # ... => ~box box box p
    e = B.nec1(e, bpos)  # ... -> box ~box box box p
    empty = next(i for i, s in enumerate(e.conclusion.seqs) if s.sort is Sort.PLAIN and s.is_empty())
    e = B.merge(e, bpos if bpos < empty else empty, empty if bpos < empty else bpos)
    # now: => box p || -> box ~box box box p
    main = next(i for i, s in enumerate(e.conclusion.seqs) if s.sort is Sort.PLAIN)
    left = B.b2(e, main)  # -> box p || => box ~box box box p
    right = B.k_rule(B.nec2(B.ax(P)), 0, 0)  # => p || box p ->
    ctx_l = Sequent(Sort.MODAL, (), (P,))
    ctx_r = next(s for s in left.conclusion.seqs if s.sort is Sort.MODAL)
    left = B.ew(left, ctx_l)
    right = B.ew(right, ctx_r)
    lpos = next(i for i, s in enumerate(left.conclusion.seqs) if s.sort is Sort.PLAIN)
    rpos = next(i for i, s in enumerate(right.conclusion.seqs) if s.sort is Sort.PLAIN)
    return B.cut(left, lpos, right, rpos, Box(P))


GAMMA_GOAL = "=> box ~box box box p || => p"


def corpus_entries() -> list[CorpusEntry]:
    entries = [
        CorpusEntry("axiom-K", SystemId.K, lambda: T.axiom_template("K", P, Q)),
        CorpusEntry("axiom-T", SystemId.T, lambda: T.axiom_template("T", P)),
        CorpusEntry("axiom-D", SystemId.D, lambda: T.axiom_template("D")),
        CorpusEntry("axiom-4", SystemId.K4, lambda: T.axiom_template("4", P)),
        CorpusEntry("axiom-B", SystemId.KB, lambda: T.axiom_template("B", P)),
        CorpusEntry("axiom-5", SystemId.K5, lambda: T.axiom_template("5", P)),
        CorpusEntry("necessitation", SystemId.K, _nec_simulation),
        CorpusEntry("boxed-initial", SystemId.K, _boxed_initial),
        CorpusEntry("s4-box-l", SystemId.S4, _s4_box_l),
        CorpusEntry("s4-box-r", SystemId.S4, _s4_box_r),
        CorpusEntry("s5-box-r-traditional", SystemId.S5, _s5_box_r_traditional),
        CorpusEntry("kd4-rule", SystemId.KD4, _kd4_rule),
        CorpusEntry("s5std-box-r", SystemId.S5, _s5std_box_r),
        CorpusEntry("s5std-move", SystemId.S5, _s5std_move),
        CorpusEntry(
            "gamma-with-cut-KB",
            SystemId.KB,
            gamma_cut_proof,
            note="with cut; conclusion carries one empty plain sequent",
        ),
        CorpusEntry("gamma-with-cut-KDB", SystemId.KDB, gamma_cut_proof, note="with cut"),
        CorpusEntry("gamma-with-cut-KTB", SystemId.B, gamma_cut_proof, note="with cut"),
    ]
    return entries


@dataclass
class CorpusResult:
    name: str
    system: str
    ok: bool
    millis: float
    nodes: int
    end: str
    note: str = ""


def run_corpus() -> list[CorpusResult]:
    results = []
    for entry in corpus_entries():
        t0 = time.perf_counter()
        proof = entry.build()
        report = check_proof(proof, entry.system)
        ms = (time.perf_counter() - t0) * 1000
        results.append(
            CorpusResult(
                name=entry.name,
                system=entry.system.value,
                ok=report.ok,
                millis=ms,
                nodes=proof.node_count(),
                end=repr(proof.conclusion),
                note=entry.note,
            )
        )
    return results


def corpus_table(results: Optional[list[CorpusResult]] = None) -> str:
    results = results if results is not None else run_corpus()
    width = max(len(r.name) for r in results) + 2
    lines = []
    for r in results:
        status = "pass" if r.ok else "FAIL"
        lines.append(
            f"{r.name:<{width}} {r.system:<5} {status}  {r.millis:7.1f} ms  {r.nodes:4d} nodes  {r.end}"
        )
    total = sum(1 for r in results if r.ok)
    lines.append(f"{total}/{len(results)} corpus proofs pass")
    return "\n".join(lines)

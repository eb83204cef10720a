"""HTTP service exposing the kernel, prover, oracle and transformations.

Stateless request/response wrappers over the core package; the CLI calls
the same handler functions in process.  Run with:

    uvicorn hyperseq.service:app
"""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .calculus import SYSTEM_BY_NAME, SystemId, group_of, system_rules
from .corpus import run_corpus
from .hilbert import (
    BadHilbertProof,
    TautologyDischargeFailed,
    UnavailableAxiom,
    hilbert_step_from_obj,
    hilbert_to_hyperseq,
)
from .proofs import Proof, ProofFormatError, check_proof, proof_from_obj, proof_to_obj
from .search import SearchConfig, prove
from .semantics import bounded_valid, frame_class
from .syntax import (
    ParseError,
    hyper_image,
    parse_formula,
    parse_hypersequent,
    print_formula,
    print_hypersequent,
)
from .transform.atomize import atomize_initials
from .transform.common import FuelExhausted, TransformError, TransformTrace, WrongGroup, WrongSystem
from .transform.cutelim import eliminate_cut, reduce_cut_formula
from .transform.regular import regularize
from .transform.restrict52 import restrict_52
from .transform.standard import std_to_obj, to_standard
from .transform.t2elim import eliminate_T2

app = FastAPI(title="hyperseq", version=__version__)


class ApiError(HTTPException):
    def __init__(self, status: int, message: str):
        super().__init__(status_code=status, detail=message)


def _system(name: str) -> SystemId:
    sys = SYSTEM_BY_NAME.get(name)
    if sys is None:
        raise ApiError(422, f"unknown system {name!r}; one of {sorted(SYSTEM_BY_NAME)}")
    return sys


def _load_proof(obj: dict) -> Proof:
    try:
        return proof_from_obj(obj)
    except ProofFormatError as e:
        raise ApiError(422, str(e))


# ---------------------------------------------------------------------------


class CheckRequest(BaseModel):
    system: str
    proof: dict


class CheckFailure(BaseModel):
    path: list[int]
    error: str


class CheckResponse(BaseModel):
    ok: bool
    system: str
    node_count: int
    rules_used: dict[str, int]
    failures: list[CheckFailure]


@app.post("/check", response_model=CheckResponse)
def check_handler(req: CheckRequest) -> CheckResponse:
    sys = _system(req.system)
    proof = _load_proof(req.proof)
    report = check_proof(proof, sys)
    return CheckResponse(
        ok=report.ok,
        system=sys.value,
        node_count=report.node_count,
        rules_used={r.value: n for r, n in sorted(report.rules_used.items(), key=lambda kv: kv[0].value)},
        failures=[CheckFailure(path=list(p), error=str(e)) for p, e in report.failures],
    )


class ImageRequest(BaseModel):
    text: str = Field(description="a sequent or hypersequent in concrete syntax")


class ImageResponse(BaseModel):
    formula: str


@app.post("/image", response_model=ImageResponse)
def image_handler(req: ImageRequest) -> ImageResponse:
    try:
        h = parse_hypersequent(req.text)
    except ParseError as e:
        raise ApiError(422, str(e))
    return ImageResponse(formula=print_formula(hyper_image(h)))


class ProveRequest(BaseModel):
    system: str
    goal: str
    depth: int = 12
    node_budget: int = 100_000
    allow_cut: bool = False
    loop_check: bool = True
    semantic_pruning: bool = True


class ProveResponse(BaseModel):
    outcome: Literal["found", "exhausted", "budget"]
    nodes_visited: int
    proof: Optional[dict] = None


@app.post("/prove", response_model=ProveResponse)
def prove_handler(req: ProveRequest) -> ProveResponse:
    sys = _system(req.system)
    try:
        goal = parse_hypersequent(req.goal)
    except ParseError as e:
        raise ApiError(422, str(e))
    allow = None
    if req.allow_cut:
        allow = frozenset(system_rules(sys))
    cfg = SearchConfig(
        max_depth=req.depth,
        node_budget=req.node_budget,
        allow_rules=allow,
        loop_check=req.loop_check,
        semantic_pruning=req.semantic_pruning,
    )
    result = prove(goal, sys, cfg)
    return ProveResponse(
        outcome=result.outcome.value,
        nodes_visited=result.nodes_visited,
        proof=proof_to_obj(result.proof) if result.proof is not None else None,
    )


class ValidateRequest(BaseModel):
    formula: Optional[str] = None
    hypersequent: Optional[str] = None
    system: str = "K"
    max_worlds: int = 3
    atoms: Optional[list[str]] = None


class CountermodelInfo(BaseModel):
    worlds: int
    relation: list[list[int]]
    valuation: dict[str, list[int]]
    falsified_at: int


class ValidateResponse(BaseModel):
    valid: bool
    bound: int
    countermodel: Optional[CountermodelInfo] = None


@app.post("/validate", response_model=ValidateResponse)
def validate_handler(req: ValidateRequest) -> ValidateResponse:
    sys = _system(req.system)
    try:
        if req.formula is not None:
            f = parse_formula(req.formula)
        elif req.hypersequent is not None:
            f = hyper_image(parse_hypersequent(req.hypersequent))
        else:
            raise ApiError(422, "provide `formula` or `hypersequent`")
    except ParseError as e:
        raise ApiError(422, str(e))
    result = bounded_valid(f, frame_class(sys), req.max_worlds, req.atoms)
    if result is None:
        return ValidateResponse(valid=True, bound=req.max_worlds)
    model, w = result
    atoms = sorted({a for a, _ in model.valuation})
    return ValidateResponse(
        valid=False,
        bound=req.max_worlds,
        countermodel=CountermodelInfo(
            worlds=model.worlds,
            relation=sorted([a, b] for a, b in model.relation),
            valuation={a: sorted(w2 for (x, w2) in model.valuation if x == a) for a in atoms},
            falsified_at=w,
        ),
    )


TRANSFORM_KINDS = (
    "atomize",
    "t2-elim",
    "regularize",
    "to-std",
    "restrict-52",
    "reduce-cut",
    "cut-elim",
)


class TransformRequest(BaseModel):
    kind: Literal[
        "atomize", "t2-elim", "regularize", "to-std", "restrict-52", "reduce-cut", "cut-elim"
    ]
    system: str
    proof: dict
    fuel: Optional[int] = None
    validate_steps: bool = Field(default=True, alias="validate")

    model_config = {"populate_by_name": True}


class TransformResponse(BaseModel):
    proof: Optional[dict] = None
    standard_proof: Optional[dict] = None
    trace: list[str]
    fuel_used: int


@app.post("/transform", response_model=TransformResponse)
def transform_handler(req: TransformRequest) -> TransformResponse:
    from .transform.common import default_fuel

    sys = _system(req.system)
    proof = _load_proof(req.proof)
    trace = TransformTrace(fuel=req.fuel if req.fuel is not None else default_fuel())
    try:
        std = None
        validate = req.validate_steps
        if req.kind == "atomize":
            out = atomize_initials(proof)
        elif req.kind == "t2-elim":
            out = eliminate_T2(proof, sys, trace, validate=validate)
        elif req.kind == "regularize":
            out = regularize(proof, sys, trace, validate=validate)
        elif req.kind == "to-std":
            std = to_standard(proof, sys)
            out = None
        elif req.kind == "restrict-52":
            out = restrict_52(proof, sys, trace, validate=validate)
        elif req.kind == "reduce-cut":
            out = reduce_cut_formula(proof, trace)
        else:
            out = eliminate_cut(proof, sys, trace, validate=validate)
    except (WrongGroup, WrongSystem) as e:
        raise ApiError(409, str(e))
    except FuelExhausted as e:
        raise ApiError(422, str(e))
    except TransformError as e:
        raise ApiError(422, str(e))
    return TransformResponse(
        proof=proof_to_obj(out) if out is not None else None,
        standard_proof=std_to_obj(std) if std is not None else None,
        trace=[f"{name}: {b} -> {a}" for name, b, a in trace.steps[:200]],
        fuel_used=trace.fuel_used,
    )


class BridgeRequest(BaseModel):
    system: str
    steps: list[dict]


class BridgeResponse(BaseModel):
    proof: dict
    conclusion: str


@app.post("/bridge", response_model=BridgeResponse)
def bridge_handler(req: BridgeRequest) -> BridgeResponse:
    sys = _system(req.system)
    try:
        steps = [hilbert_step_from_obj(o) for o in req.steps]
        proof = hilbert_to_hyperseq(steps, sys)
    except (BadHilbertProof, UnavailableAxiom, TautologyDischargeFailed, ParseError) as e:
        raise ApiError(422, str(e))
    return BridgeResponse(proof=proof_to_obj(proof), conclusion=print_hypersequent(proof.conclusion))


class SystemInfo(BaseModel):
    name: str
    group: str
    rules: list[str]
    frame_conditions: list[str]


@app.get("/systems", response_model=list[SystemInfo])
def systems_handler() -> list[SystemInfo]:
    out = []
    for sys in SystemId:
        out.append(
            SystemInfo(
                name=sys.value,
                group=group_of(sys).value,
                rules=sorted(r.value for r in system_rules(sys)),
                frame_conditions=sorted(frame_class(sys).conditions),
            )
        )
    return out


class CorpusRow(BaseModel):
    name: str
    system: str
    ok: bool
    millis: float
    nodes: int
    end: str


@app.post("/corpus/run", response_model=list[CorpusRow])
def corpus_handler() -> list[CorpusRow]:
    return [
        CorpusRow(name=r.name, system=r.system, ok=r.ok, millis=r.millis, nodes=r.nodes, end=r.end)
        for r in run_corpus()
    ]


class ExpandRequest(BaseModel):
    name: Literal["K", "T", "D", "4", "B", "5"]
    a: Optional[str] = None
    b: Optional[str] = None


class ExpandResponse(BaseModel):
    proof: dict
    conclusion: str
    system: str


@app.post("/expand", response_model=ExpandResponse)
def expand_handler(req: ExpandRequest) -> ExpandResponse:
    from .templates import TEMPLATE_SYSTEM, ShapeError, axiom_template

    try:
        a = parse_formula(req.a) if req.a else None
        b = parse_formula(req.b) if req.b else None
        proof = axiom_template(req.name, a, b)
    except (ShapeError, ParseError) as e:
        raise ApiError(422, str(e))
    return ExpandResponse(
        proof=proof_to_obj(proof),
        conclusion=print_hypersequent(proof.conclusion),
        system=TEMPLATE_SYSTEM[req.name].value,
    )

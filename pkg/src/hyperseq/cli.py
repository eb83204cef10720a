"""Batch command-line surface; a thin client over the service handlers.

Exit status: 0 success, 1 check/transform/search failure, 2 usage or
parse errors.  An optional config file (key=value lines) supplies default
system, fuel and search depth; flags override it, and HYPERSEQ_FUEL
overrides the fuel only.
"""

from __future__ import annotations

import json
import os
import sys as _sys
from pathlib import Path
from typing import Optional

import click
from fastapi import HTTPException

from . import service
from .syntax import ParseError


def _fail(code: int, message: str) -> None:
    click.echo(message, err=True)
    _sys.exit(code)


def _config_defaults(path: Optional[str]) -> dict:
    out: dict = {}
    candidates = [path] if path else [os.environ.get("HYPERSEQ_CONFIG"), "hyperseq.cfg"]
    for cand in candidates:
        if cand and Path(cand).is_file():
            for line in Path(cand).read_text().splitlines():
                line = line.strip()
                if not line or line.startswith("#") or "=" not in line:
                    continue
                key, value = line.split("=", 1)
                out[key.strip()] = value.strip()
            break
    if os.environ.get("HYPERSEQ_FUEL"):
        out["fuel"] = os.environ["HYPERSEQ_FUEL"]
    return out


def _call(handler, request):
    try:
        return handler(request)
    except HTTPException as e:
        _fail(2 if e.status_code == 422 else 1, f"error: {e.detail}")


def _read_proof_file(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        _fail(2, f"cannot read proof file {path}: {e}")


def _emit(data: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(data if data.endswith("\n") else data + "\n")
    else:
        click.echo(data)


@click.group()
@click.option("--config", type=str, default=None, help="config file (key=value lines)")
@click.pass_context
def main(ctx: click.Context, config: Optional[str]) -> None:
    """Proof kernel, checker and transformations for two-sorted hypersequent
    calculi over the modal logics K .. S5."""
    ctx.ensure_object(dict)
    ctx.obj.update(_config_defaults(config))


def _default_system(ctx: click.Context, system: Optional[str]) -> str:
    return system or ctx.obj.get("system") or "K"


@main.command()
@click.option("--system", "-s", default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.argument("proof_file")
@click.pass_context
def check(ctx, system, fmt, proof_file):
    """Check a proof file in the given system."""
    req = service.CheckRequest(system=_default_system(ctx, system), proof=_read_proof_file(proof_file))
    resp = _call(service.check_handler, req)
    if fmt == "json":
        click.echo(json.dumps(resp.model_dump(), indent=2, sort_keys=True))
    else:
        if resp.ok:
            click.echo(f"ok: {resp.node_count} nodes check in {resp.system}")
        else:
            for failure in resp.failures:
                click.echo(f"FAIL at {failure.path}: {failure.error}")
    _sys.exit(0 if resp.ok else 1)


@main.command()
@click.argument("text")
def image(text):
    """Print the formula image of a sequent or hypersequent."""
    resp = _call(service.image_handler, service.ImageRequest(text=text))
    click.echo(resp.formula)


@main.command()
@click.option("--system", "-s", default=None)
@click.option("--depth", type=int, default=None)
@click.option("--node-budget", type=int, default=100_000)
@click.option("--no-loop-check", is_flag=True)
@click.option("--no-semantic-pruning", is_flag=True)
@click.option("--allow", type=str, default=None, help="extra rules, e.g. `cut`")
@click.option("--emit", "emit_path", type=str, default=None, help="write the found proof here")
@click.argument("goal")
@click.pass_context
def prove(ctx, system, depth, node_budget, no_loop_check, no_semantic_pruning, allow, emit_path, goal):
    """Bounded backward search for a cut-free proof of GOAL."""
    depth = depth if depth is not None else int(ctx.obj.get("depth", 12))
    req = service.ProveRequest(
        system=_default_system(ctx, system),
        goal=goal,
        depth=depth,
        node_budget=node_budget,
        allow_cut=(allow or "").strip() == "cut",
        loop_check=not no_loop_check,
        semantic_pruning=not no_semantic_pruning,
    )
    resp = _call(service.prove_handler, req)
    if resp.outcome == "found":
        click.echo(f"FOUND ({resp.nodes_visited} nodes visited)")
        if emit_path:
            _emit(json.dumps(resp.proof, indent=2, sort_keys=True), emit_path)
        _sys.exit(0)
    label = "no proof within bound" if resp.outcome == "exhausted" else "node budget exceeded"
    click.echo(f"{resp.outcome.upper()}: {label} ({resp.nodes_visited} nodes visited)")
    _sys.exit(1)


@main.command()
@click.option("--system", "-s", default=None)
@click.option("--max-worlds", type=int, default=3)
@click.option("--hypersequent", "as_hyper", is_flag=True, help="treat the argument as a hypersequent")
@click.argument("formula")
@click.pass_context
def validate(ctx, system, max_worlds, as_hyper, formula):
    """Bounded Kripke validity over the system's frame class."""
    req = service.ValidateRequest(
        system=_default_system(ctx, system),
        formula=None if as_hyper else formula,
        hypersequent=formula if as_hyper else None,
        max_worlds=max_worlds,
    )
    resp = _call(service.validate_handler, req)
    if resp.valid:
        click.echo(f"VALID (bound={resp.bound})")
        _sys.exit(0)
    cm = resp.countermodel
    click.echo(f"COUNTERMODEL (falsified at world {cm.falsified_at})")
    click.echo(f"worlds: {list(range(cm.worlds))}")
    click.echo(f"relation: {[tuple(p) for p in cm.relation]}")
    for atom, worlds in sorted(cm.valuation.items()):
        click.echo(f"valuation {atom}: true at {worlds}")
    _sys.exit(1)


@main.command()
@click.option("--system", "-s", default=None)
@click.option("--fuel", type=int, default=None)
@click.option("--trace", "trace_path", type=str, default=None)
@click.option("--out", "out_path", type=str, default=None, help="write the result here")
@click.option(
    "--assert-each-step/--no-assert-each-step",
    default=True,
    help="re-check every rewritten node (on by default)",
)
@click.argument("kind", type=click.Choice(list(service.TRANSFORM_KINDS)))
@click.argument("proof_file")
@click.pass_context
def transform(ctx, system, fuel, trace_path, out_path, assert_each_step, kind, proof_file):
    """Run a proof transformation on a proof file."""
    fuel = fuel if fuel is not None else (int(ctx.obj["fuel"]) if "fuel" in ctx.obj else None)
    req = service.TransformRequest(
        kind=kind,
        system=_default_system(ctx, system),
        proof=_read_proof_file(proof_file),
        fuel=fuel,
        validate=assert_each_step,
    )
    resp = _call(service.transform_handler, req)
    payload = resp.proof if resp.proof is not None else resp.standard_proof
    _emit(json.dumps(payload, indent=2, sort_keys=True), out_path)
    if trace_path:
        Path(trace_path).write_text(
            "\n".join(resp.trace) + f"\nfuel used: {resp.fuel_used}\n"
        )
    _sys.exit(0)


@main.command()
@click.option("--system", "-s", default=None)
@click.option("--out", "out_path", type=str, default=None)
@click.argument("steps_file")
@click.pass_context
def bridge(ctx, system, out_path, steps_file):
    """Translate a Hilbert-style proof (JSON step list) into a hypersequent proof."""
    try:
        steps = json.loads(Path(steps_file).read_text())
    except (OSError, json.JSONDecodeError) as e:
        _fail(2, f"cannot read steps file: {e}")
    req = service.BridgeRequest(system=_default_system(ctx, system), steps=steps)
    resp = _call(service.bridge_handler, req)
    click.echo(f"conclusion: {resp.conclusion}")
    if out_path:
        _emit(json.dumps(resp.proof, indent=2, sort_keys=True), out_path)
    _sys.exit(0)


@main.command()
@click.option("--out", "out_path", type=str, default=None)
@click.argument("name", type=click.Choice(["K", "T", "D", "4", "B", "5"]))
@click.argument("formulas", nargs=-1)
def expand(out_path, name, formulas):
    """Print the axiom proof template for NAME instantiated at FORMULAS."""
    a = formulas[0] if len(formulas) > 0 else None
    b = formulas[1] if len(formulas) > 1 else None
    resp = _call(service.expand_handler, service.ExpandRequest(name=name, a=a, b=b))
    click.echo(f"conclusion: {resp.conclusion}  (checks in {resp.system})")
    if out_path:
        _emit(json.dumps(resp.proof, indent=2, sort_keys=True), out_path)


@main.group()
def corpus():
    """Golden corpus commands."""


@corpus.command("run")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def corpus_run(fmt):
    """Check every golden-corpus derivation and print a pass/fail table."""
    rows = service.corpus_handler()
    if fmt == "json":
        click.echo(json.dumps([r.model_dump() for r in rows], indent=2, sort_keys=True))
    else:
        from .corpus import corpus_table

        click.echo(corpus_table())
    _sys.exit(0 if all(r.ok for r in rows) else 1)


@main.command()
def systems():
    """List the fifteen systems with their rules, groups and frame classes."""
    for info in service.systems_handler():
        click.echo(
            f"{info.name:<5} group={info.group:<6} frames={','.join(info.frame_conditions) or '(all)'}"
        )
        click.echo(f"      rules: {' '.join(info.rules)}")


if __name__ == "__main__":
    main()

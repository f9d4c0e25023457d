"""Command-line entry point: python -m src.cli <command>

Exit codes: 0 success, 1 verification or convergence failure, 2 usage error.
"""
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click

from src import __version__
from src.approximator import (
    DEFAULT_D_WORD,
    DEFAULT_U_WORD,
    ConvergenceError,
    PreconditionError,
    check_density_witnesses,
    compile_entangler,
    emit_word,
)
from src.braid import BraidError, BraidWord, NamedBraid, named_braid
from src.config import get_search_config, load_yaml_config, settings
from src.gate_analysis import classify
from src.monitoring import MetricsCollector, start_metrics_server
from src.representation import (
    BASIS_LABELS,
    Backend,
    FibData,
    Label,
    RepresentationError,
    default_representation,
    format_exact,
    format_complex,
    format_float,
    fuse,
)
from src.search_engine import BackendPolicy, SearchConfig, run_search
from src.utils import format_float as fmt, serialize_record, setup_logging
from src.verification import run_identity_suite

logger = logging.getLogger(__name__)


def parse_word(text: str, strands: int) -> BraidWord:
    """Word text or the name of a named braid"""
    if text in {n.value for n in NamedBraid}:
        word = named_braid(text)
        if word.strands != strands:
            raise click.BadParameter(f"{text} is a {word.strands}-strand braid")
        return word
    try:
        return BraidWord.parse(text, strands)
    except BraidError as e:
        raise click.BadParameter(str(e)) from e


@click.group()
@click.option("--log-level", default=None, help="Override the configured log level")
@click.version_option(__version__, prog_name=settings.app_name)
def cli(log_level: Optional[str]):
    """Exact Fibonacci-anyon braiding gates"""
    setup_logging(log_level or settings.log_level)
    if settings.metrics_port:
        start_metrics_server(settings.metrics_port)


@cli.command()
def verify():
    """Run the exact identity suite"""
    report = run_identity_suite()
    for result in report.results:
        status = "INFO" if result.informational else ("PASS" if result.passed else "FAIL")
        line = f"{status}  {result.name}"
        if result.informational:
            line += f": {result.passed}"
        if result.detail:
            line += f"  ({result.detail})"
        click.echo(line)
    if not report.passed:
        click.echo(f"FAILED: {', '.join(report.failures)}", err=True)
        sys.exit(1)
    click.echo(f"all {sum(not r.informational for r in report.results)} identities passed")


@cli.command(name="eval")
@click.argument("word_text", metavar="WORD")
@click.option("--strands", type=click.Choice(["3", "6"]), default="6", show_default=True)
@click.option("--backend", type=click.Choice([b.value for b in Backend]), default="exact",
              show_default=True)
def eval_word(word_text: str, strands: str, backend: str):
    """Evaluate a braid word, e.g. "3 2 1 1 2 3" or Sigma"""
    word = parse_word(word_text, int(strands))
    try:
        matrix = default_representation().evaluate(word, backend)
    except RepresentationError as e:
        raise click.UsageError(str(e)) from e
    click.echo(f"word: {word or '(empty)'}  length {len(word)}")
    if backend == Backend.EXACT.value:
        click.echo(format_exact(matrix))
    else:
        click.echo(format_float(matrix))
    if word.strands == 6:
        report = classify(matrix, include_blocks=True)
        click.echo(json.dumps(report.model_dump(), indent=2))


@cli.command()
@click.option("--max-len", "max_length", type=int, default=None, help="Longest word length")
@click.option("--exact-only", is_flag=True, default=None, help="Skip the float pre-filter")
@click.option("--shards", type=int, default=None, help="Parallel workers")
@click.option("--prefix-depth", type=click.IntRange(1, 2), default=None)
@click.option("--normalize-commuting", is_flag=True, default=None,
              help="Order adjacent commuting letters by index")
@click.option("--out", "output", type=click.Path(dir_okay=False), default=None)
@click.option("--checkpoint-dir", type=click.Path(file_okay=False), default=None)
@click.option("--resume", is_flag=True, default=None, help="Reuse finished shard checkpoints")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="YAML file of search options")
def search(max_length, exact_only, shards, prefix_depth, normalize_commuting, output,
           checkpoint_dir, resume, config_path):
    """Exhaustively search B_6 words for leakage-free entangling gates"""
    options = get_search_config()
    if config_path:
        options.update(load_yaml_config(config_path))
    flags = {
        "max_length": max_length,
        "shards": shards,
        "prefix_depth": prefix_depth,
        "normalize_commuting": normalize_commuting,
        "output": output,
        "checkpoint_dir": checkpoint_dir,
        "resume": resume,
    }
    options.update({k: v for k, v in flags.items() if v is not None})
    if exact_only:
        options["policy"] = BackendPolicy.EXACT_ONLY.value
    try:
        cfg = SearchConfig(**options)
    except ValueError as e:
        raise click.UsageError(str(e)) from e
    metrics = MetricsCollector()
    outcome = run_search(cfg, metrics)
    click.echo(json.dumps(outcome.summary, indent=2))
    entangling = [r.word for r in outcome.records if r.entangling]
    click.echo(f"leakage-free gates: {len(outcome.records)}, entangling: {len(entangling)}")


@cli.command()
@click.option("--tol", type=float, default=None, help="Target off-diagonal magnitude")
@click.option("--max-iter", type=int, default=None)
@click.option("--d-word", default=str(DEFAULT_D_WORD), show_default=True,
              help="V-preserving word with diagonal V-block")
@click.option("--u-word", default=str(DEFAULT_U_WORD), show_default=True,
              help="V-preserving starting word")
@click.option("--emit-word", "emit_word_path", type=click.Path(dir_okay=False), default=None)
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None)
def approximate(tol, max_iter, d_word, u_word, emit_word_path, trace_path):
    """Compile a leakage-free entangling gate by iteration"""
    d = parse_word(d_word, 6)
    u = parse_word(u_word, 6)
    metrics = MetricsCollector()
    try:
        result = compile_entangler(d, u, tol=tol, max_iter=max_iter, metrics=metrics)
    except PreconditionError as e:
        click.echo(f"precondition failed: {e}", err=True)
        sys.exit(1)
    except ConvergenceError as e:
        if trace_path:
            _write_trace(trace_path, e.trace)
        click.echo(f"did not converge: {e}", err=True)
        sys.exit(1)

    if trace_path:
        _write_trace(trace_path, result.trace)
    if emit_word_path:
        emit_word(result, emit_word_path)
    click.echo(f"iterations: {len(result.trace) - 1}")
    click.echo(f"theta: {fmt(result.theta)}")
    click.echo(f"epsilon: {fmt(result.epsilon)}")
    click.echo(f"b_0: {fmt(result.trace[0].b)}")
    click.echo(f"b_final: {fmt(result.trace[-1].b)}")
    click.echo(f"word length: {result.word.length}")
    click.echo("limit diagonal phases: " + ", ".join(fmt(p) for p in result.limit["phases"]))
    re55, im55 = result.limit["u55"]
    click.echo(f"U_55: {format_complex(complex(re55, im55))}")
    click.echo(f"diagonal entangling gap: {fmt(result.limit['diagonal_gap'])}")
    click.echo(json.dumps(result.report.model_dump(), indent=2))
    witnesses = check_density_witnesses()
    click.echo(
        "density witnesses: real parts "
        + ", ".join(fmt(x) for x in witnesses["real_parts"])
        + f"; commutator distance {fmt(witnesses['commutator_distance'])}"
    )
    if not (result.report.leakage_free and result.report.entangling):
        click.echo("limit gate is not a leakage-free entangling gate", err=True)
        sys.exit(1)


def _write_trace(path: str, trace) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w") as f:
        for state in trace:
            f.write(serialize_record(state.to_json()) + "\n")
    logger.info(f"Wrote {len(trace)} trace lines to {target}")


@cli.command()
def info():
    """Print category data, basis order and tolerances"""
    data = FibData.standard()
    click.echo(f"{settings.app_name} {__version__}")
    click.echo("F =")
    click.echo(format_float(data.F.to_numpy()))
    click.echo(f"R^tt_1 = {data.R1}  ~ {format_complex(data.R1.to_complex())}")
    click.echo(f"R^tt_t = {data.Rtau}  ~ {format_complex(data.Rtau.to_complex())}")
    for a in Label:
        for b in Label:
            outcomes = " + ".join(x.value for x in fuse(a, b))
            click.echo(f"{a.value} x {b.value} = {outcomes}")
    click.echo("basis: " + ", ".join(f"{i}:|{label}>" for i, label in enumerate(BASIS_LABELS)))
    click.echo(f"leakage tolerance: {fmt(settings.leakage_tolerance)}")
    click.echo(f"entangling tolerance: {fmt(settings.entangling_tolerance)}")
    click.echo(f"unitarity tolerance: {fmt(settings.unitarity_tolerance)}")


if __name__ == "__main__":
    cli()

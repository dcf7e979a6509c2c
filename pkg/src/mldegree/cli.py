# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Command line interface.

Exit codes are stable: 2 for a reaction that does not parse, 3 for an unsupported
shape, 4 when a degenerate model yields no count, 5 when no critical point is
positive, 6 when a confirmed catalog row does not match, and 1 for any other error.
"""
import json
import logging.config
import os
import sys
from functools import wraps
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import click
import importlib_resources
import yaml
from pydantic import BaseModel

from mldegree.errors import (
    DegenerateModelError,
    MlDegreeError,
    NoPositiveCriticalPointError,
    PolynomialError,
    ReactionParseError,
    UnsupportedShapeError,
)
from mldegree.handler import (
    Method,
    handle_catalog,
    handle_ml_degree,
    handle_mle,
    handle_model,
    handle_model_dump,
    handle_parse,
    solver_config,
)
from mldegree.model import EquilibriumConstant

# We read this environment variable to find an alternate logging configuration
LOGGING_VAR = "MLDEGREE_LOGGING_PATH"

EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_SHAPE = 3
EXIT_DEGENERATE = 4
EXIT_NO_OPTIMUM = 5
EXIT_CATALOG = 6

EXIT_CODES = [
    (ReactionParseError, EXIT_PARSE),
    (UnsupportedShapeError, EXIT_SHAPE),
    (DegenerateModelError, EXIT_DEGENERATE),
    (NoPositiveCriticalPointError, EXIT_NO_OPTIMUM),
]

OUTPUTS = ["json", "tsv", "text"]

F = TypeVar("F", bound=Callable[..., Any])


def configure_logging(verbose: bool) -> None:
    """Configure logging from the packaged YAML, or the file named by the environment."""
    path = os.environ.get(LOGGING_VAR)
    if path:
        with open(path, "r", encoding="utf8") as fp:
            source = fp.read()
    else:
        source = importlib_resources.files("mldegree.data").joinpath("logging.yaml").read_text(encoding="utf8")
    logging.config.dictConfig(yaml.safe_load(source))
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


def exit_code(e: MlDegreeError) -> int:
    return next((code for cls, code in EXIT_CODES if isinstance(e, cls)), EXIT_ERROR)


def _handle_errors(func: F) -> F:
    """Report domain errors on stderr and exit with the matching code."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except MlDegreeError as e:
            message = getattr(e, "message", str(e))
            if isinstance(e, ReactionParseError):
                message = "%s at offset %d" % (e.message, e.offset)
            click.echo("Error: %s" % message, err=True)
            sys.exit(exit_code(e))

    return wrapper  # type: ignore[return-value]


def _parse_ke(_ctx: click.Context, _param: click.Parameter, value: str) -> EquilibriumConstant:
    try:
        return EquilibriumConstant.parse(value)
    except PolynomialError as e:
        raise click.BadParameter(e.message) from e


def _parse_counts(_ctx: click.Context, _param: click.Parameter, value: Optional[str]) -> Optional[Tuple[int, ...]]:
    if value is None:
        return None
    try:
        return tuple(int(part) for part in value.split(","))
    except ValueError as e:
        raise click.BadParameter("Counts must be comma-separated integers, like 7,3") from e


def _flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, str]:
    flat: Dict[str, str] = {}
    for key, value in data.items():
        if isinstance(value, dict):
            flat.update(_flatten(value, "%s%s." % (prefix, key)))
        elif isinstance(value, list):
            flat[prefix + key] = "; ".join(json.dumps(item) if isinstance(item, dict) else str(item) for item in value)
        else:
            flat[prefix + key] = "n/a" if value is None else str(value)
    return flat


def render(records: Sequence[BaseModel], output: str, many: bool = False) -> str:
    """Render records as JSON, TSV with a header row, or key: value text."""
    if output == "json":
        if many:
            return json.dumps([record.model_dump(mode="json") for record in records], indent=2)
        return records[0].model_dump_json(indent=2)
    rows = [_flatten(record.model_dump(mode="json")) for record in records]
    if output == "tsv":
        header = list(rows[0].keys()) if rows else []
        return "\n".join(["\t".join(header)] + ["\t".join(row[key] for key in header) for row in rows])
    blocks = ["\n".join("%s: %s" % (key, value) for key, value in row.items()) for row in rows]
    return "\n\n".join(blocks)


def _warn(warnings: List[str]) -> None:
    for warning in warnings:
        click.echo("Warning: %s" % warning, err=True)


def _solver_options(func: F) -> F:
    func = click.option("--tol-cluster", type=float, default=None, help="Root clustering tolerance.")(func)
    func = click.option("--tol-residual", type=float, default=None, help="Residual acceptance tolerance.")(func)
    func = click.option("--seed", type=int, default=None, help="Seed for randomized checks.")(func)
    return func


def _common_options(func: F) -> F:
    func = click.option("--output", type=click.Choice(OUTPUTS), default="text", show_default=True, help="Output format.")(func)
    func = click.option(
        "--ke", default="generic", show_default=True, callback=_parse_ke, help='Equilibrium constant, a rational or "generic".'
    )(func)
    return func


@click.group()
@click.option("--verbose", is_flag=True, help="Log debug output to stderr.")
def mldegree(verbose: bool) -> None:
    """Compute maximum likelihood degrees of chemical equilibrium models."""
    configure_logging(verbose)


@mldegree.command()
@click.argument("reaction")
@click.option("--output", type=click.Choice(OUTPUTS), default="text", show_default=True, help="Output format.")
@_handle_errors
def parse(reaction: str, output: str) -> None:
    """Parse a reaction and print it in canonical form."""
    click.echo(render([handle_parse(reaction)], output))


@mldegree.command()
@click.argument("reaction")
@_common_options
@_handle_errors
def model(reaction: str, ke: EquilibriumConstant, output: str) -> None:
    """Build the equilibrium model and its parameterization."""
    if output == "text":
        warnings, dump = handle_model_dump(reaction, ke)
        _warn(warnings)
        click.echo(dump)
        return
    record = handle_model(reaction, ke)
    _warn(record.warnings)
    click.echo(render([record], output))


@mldegree.command("ml-degree")
@click.argument("reaction")
@_common_options
@click.option("--method", type=click.Choice([m.value for m in Method]), default="faithful", show_default=True)
@click.option("--counts", default=None, callback=_parse_counts, help="Counts to cross-check the faithful count numerically.")
@_solver_options
@_handle_errors
def ml_degree(
    reaction: str,
    ke: EquilibriumConstant,
    output: str,
    method: str,
    counts: Optional[Tuple[int, ...]],
    seed: Optional[int],
    tol_residual: Optional[float],
    tol_cluster: Optional[float],
) -> None:
    """Compute the ML degree of a reaction."""
    record = handle_ml_degree(reaction, ke, Method(method), solver_config(seed, tol_residual, tol_cluster), counts)
    _warn(record.warnings)
    click.echo(render([record], output))
    if not record.has_count:
        click.echo("Error: degenerate model, no ML degree is available", err=True)
        sys.exit(EXIT_DEGENERATE)


@mldegree.command()
@click.argument("reaction")
@_common_options
@click.option("--counts", required=True, callback=_parse_counts, help="Observed counts, comma-separated, one per species.")
@_solver_options
@_handle_errors
def mle(
    reaction: str,
    ke: EquilibriumConstant,
    output: str,
    counts: Tuple[int, ...],
    seed: Optional[int],
    tol_residual: Optional[float],
    tol_cluster: Optional[float],
) -> None:
    """Find the maximum likelihood estimate for observed counts."""
    record = handle_mle(reaction, ke, counts, solver_config(seed, tol_residual, tol_cluster))
    click.echo(render([record], output))


@mldegree.command()
@click.option("--output", type=click.Choice(OUTPUTS), default="text", show_default=True, help="Output format.")
@_solver_options
@_handle_errors
def catalog(output: str, seed: Optional[int], tol_residual: Optional[float], tol_cluster: Optional[float]) -> None:
    """Run every catalog reaction and compare against the expected values."""
    records = handle_catalog(solver_config(seed, tol_residual, tol_cluster))
    click.echo(render(records, output, many=True))
    failed = [record for record in records if not record.passed]
    if failed:
        for record in failed:
            click.echo("Mismatch: %s, K_e=%s" % (record.reaction, record.ke), err=True)
        sys.exit(EXIT_CATALOG)

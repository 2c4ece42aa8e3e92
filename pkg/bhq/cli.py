"""
Command Line Interface for bhq.

Scriptable results go to stdout as plain lines; prose, tables and progress go
to stderr and only with --verbose.
"""

import json
import logging
import functools
from pathlib import Path
from typing import Callable, Optional

import click
import yaml
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from . import __version__
from .core.config import Config
from .core.errors import BhqError, InputError, VerificationFailure
from .modules.calculus import (
    OrderVerdict,
    characterize as characterize_tree,
    compare as compare_trees,
    corollary_table,
    describe,
    m_tree,
    m_two_level,
    order_matters as order_verdict,
    order_matters_message,
)
from .modules.capacity import capacity_search
from .modules.dot_export import hypercube_to_dot, tree_to_dot
from .modules.paths import PathDescription, detect_losses, path_mind_changes, witness as witness_path
from .modules.query_tree import LeafLabeling, QueryTree, load_tree
from .modules.verification import Direction, general_tree_count, run_exhaustive, run_random, verify_world_file
from .modules.world_io import load_world

err_console = Console(stderr=True)

logger = logging.getLogger(__name__)


def setup_logging(level: str) -> None:
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise InputError(f"unknown log level {level!r}")
    logging.basicConfig(
        level=numeric,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def handle_errors(f: Callable) -> Callable:
    """Map BhqError to a red one-line message and the error's exit code."""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except BhqError as e:
            err_console.print(f"[red]error: {e}[/red]", highlight=False)
            click.get_current_context().exit(e.exit_code)
    return wrapper


def _tree(text: str, as_json: bool) -> QueryTree:
    return load_tree(text, as_json=as_json)


def _verbose(ctx: click.Context) -> bool:
    return ctx.obj["verbose"]


json_option = click.option("--json", "as_json", is_flag=True, help="Read trees in JSON form instead of the grammar")

# Caps and counts that must be at least one
POSITIVE = click.IntRange(min=1)


@click.group()
@click.version_option(version=__version__, prog_name="bhq")
@click.option("--config", type=click.Path(), help="Path to configuration file")
@click.option("--verbose", "-v", is_flag=True, help="Explain results on stderr")
@click.option("--log-level", help="Logging level (DEBUG, INFO, WARNING, ...)")
@click.pass_context
def main(ctx, config, verbose, log_level):
    """bhq - query trees over the boolean hierarchy."""
    ctx.ensure_object(dict)
    config_path = Path(config) if config else None
    try:
        cfg = Config.load_config(config_path)
        verbose = verbose or cfg.preferences.verbose
        setup_logging("DEBUG" if verbose and not log_level else (log_level or cfg.preferences.log_level))
    except BhqError as e:
        err_console.print(f"[red]error: {e}[/red]", highlight=False)
        ctx.exit(e.exit_code)
    ctx.obj["config"] = cfg
    ctx.obj["config_path"] = config_path
    ctx.obj["verbose"] = verbose


@main.command()
@click.argument("tree")
@json_option
@click.pass_context
@handle_errors
def characterize(ctx, tree, as_json):
    """Print the R_{m-tt}(NP) class equal to P^(TREE)."""
    t = _tree(tree, as_json)
    expression = characterize_tree(t)
    click.echo(expression.rendering)
    if _verbose(ctx):
        err_console.print(f"{describe(t)} = {expression} (m = {expression.m})", highlight=False)


@main.command()
@click.argument("tree")
@json_option
@click.option("--brute-force", is_flag=True, help="Maximize mind changes over every leaf labeling")
@click.option("--max-dim", type=POSITIVE, help="Largest cube dimension to enumerate")
@click.option("--max-leaves", type=POSITIVE, help="Largest leaf count to enumerate")
@click.option("--workers", type=POSITIVE, help="Worker processes for the brute force")
@click.pass_context
@handle_errors
def capacity(ctx, tree, as_json, brute_force, max_dim, max_leaves, workers):
    """Print the mind-change capacity of TREE (closed form unless --brute-force)."""
    t = _tree(tree, as_json)
    if not brute_force:
        click.echo(m_tree(t))
        return
    limits = ctx.obj["config"].limits
    result = capacity_search(
        t,
        max_dim=limits.max_dim if max_dim is None else max_dim,
        max_leaves=limits.max_leaves if max_leaves is None else max_leaves,
        workers=limits.workers if workers is None else workers,
    )
    click.echo(result.capacity)
    if _verbose(ctx):
        err_console.print(
            f"witness labeling {result.witness.render()} "
            f"({result.labelings_checked} labelings scored, closed form m = {m_tree(t)})",
            highlight=False,
        )


@main.command()
@click.argument("tree1")
@click.argument("tree2")
@json_option
@click.pass_context
@handle_errors
def compare(ctx, tree1, tree2, as_json):
    """Decide whether P^(TREE1) = P^(TREE2) or equality collapses PH."""
    verdict = compare_trees(_tree(tree1, as_json), _tree(tree2, as_json))
    click.echo(verdict.render())
    if _verbose(ctx):
        err_console.print(f"m = {verdict.m_left} vs m = {verdict.m_right}", highlight=False)
        if verdict.collapse_message:
            err_console.print(verdict.collapse_message, highlight=False)


@main.command("order-matters")
@click.option("--j", "j", type=int, required=True, help="Level of the first query (j <= k)")
@click.option("--k", "k", type=int, required=True, help="Level of the second query")
@click.pass_context
@handle_errors
def order_matters(ctx, j, k):
    """Compare P^{BH_j[1]:BH_k[1]} with P^{BH_k[1]:BH_j[1]}."""
    click.echo(order_verdict(j, k).value)
    if _verbose(ctx):
        err_console.print(order_matters_message(j, k), highlight=False)


@main.command()
@click.option("--max", "max_level", type=int, default=5, show_default=True, help="Largest level in the table")
@click.pass_context
@handle_errors
def corollary(ctx, max_level):
    """Tabulate order_matters for 1 <= j <= k <= MAX."""
    rows = corollary_table(max_level)
    for j, k, verdict in rows:
        click.echo(f"{j} {k} {verdict.value}")
    if _verbose(ctx):
        table = Table(title="Does the order of the queries matter?")
        table.add_column("j", style="cyan")
        table.add_column("k", style="cyan")
        table.add_column("m(j,k)", style="yellow")
        table.add_column("m(k,j)", style="yellow")
        table.add_column("Verdict", style="green")
        for j, k, verdict in rows:
            style = "green" if verdict is OrderVerdict.ORDER_IRRELEVANT else "red"
            table.add_row(str(j), str(k), str(m_two_level(j, k)), str(m_two_level(k, j)), f"[{style}]{verdict.value}[/{style}]")
        err_console.print(table)


@main.command()
@click.option("--j", "j", type=int, required=True, help="Level of the first query")
@click.option("--k", "k", type=int, required=True, help="Level of the second queries")
@click.option("--path", "path_text", required=True, help="Ascending path such as e2,e2,e1,e3,e3,e1")
@click.pass_context
@handle_errors
def losses(ctx, j, k, path_text):
    """List the forced mind-change losses along an ascending path."""
    events = detect_losses(j, k, PathDescription.parse(path_text))
    for event in events:
        click.echo(str(event))
    if not events:
        click.echo("none")
    if _verbose(ctx):
        err_console.print(f"{len(events)} loss event(s); the cube has dimension {j + 2 * k}", highlight=False)


@main.command()
@click.option("--j", "j", type=int, required=True, help="Level of the first query")
@click.option("--k", "k", type=int, required=True, help="Level of the second queries")
@click.pass_context
@handle_errors
def witness(ctx, j, k):
    """Print a capacity-achieving path and its acceptance scheme."""
    path, scheme = witness_path(j, k)
    click.echo(path.render())
    click.echo(f"scheme {scheme}")
    if _verbose(ctx):
        achieved = path_mind_changes(QueryTree.two_level(j, k), LeafLabeling.scheme(scheme), path)
        err_console.print(f"{achieved} mind changes along the path; m = {m_two_level(j, k)}", highlight=False)


def _run_with_progress(ctx: click.Context, total: Optional[int], run: Callable) -> object:
    if not _verbose(ctx):
        return run(None)
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TimeElapsedColumn(),
        console=err_console,
    ) as progress:
        task = progress.add_task("Verifying...", total=total)
        return run(lambda n: progress.update(task, advance=n))


@main.command()
@click.argument("direction", type=click.Choice([d.value for d in Direction]))
@click.option("--world", "world_path", type=click.Path(exists=True, dir_okay=False), help="World file (JSON)")
@click.option("--exhaustive", is_flag=True, help="Enumerate every tiny world")
@click.option(
    "--random", "random_cases", type=click.IntRange(min=0), is_flag=False, flag_value=0,
    help="Number of seeded random cases (bare --random uses the configured count)",
)
@click.option("--seed", type=int, help="Run seed for --random")
@click.option("--j", "j", type=int, help="First-query level (bh-to-machine)")
@click.option("--k", "k", type=int, help="No-branch level (bh-to-machine)")
@click.option("--l", "l", type=int, help="Yes-branch level (bh-to-machine, defaults to k)")
@click.option("--workers", type=POSITIVE, help="Worker processes for --random")
@click.option("--save", "save_path", type=click.Path(dir_okay=False), help="With --world, write the world plus the constructed object")
@click.pass_context
@handle_errors
def verify(ctx, direction, world_path, exhaustive, random_cases, seed, j, k, l, workers, save_path):
    """Check a constructive reduction on finite worlds."""
    cfg = ctx.obj["config"]
    direction = Direction(direction)
    modes = sum([exhaustive, random_cases is not None, world_path is not None])
    if modes != 1:
        raise InputError("choose exactly one of --world FILE, --exhaustive or --random N")
    if save_path and world_path is None:
        raise InputError("--save needs --world")
    logger.debug("verify %s: exhaustive=%s random=%s world=%s", direction.value, exhaustive, random_cases, world_path)

    if exhaustive:
        report = _run_with_progress(ctx, None, lambda cb: run_exhaustive(
            direction,
            max_universe=cfg.verification.exhaustive_max_universe,
            max_m=cfg.verification.exhaustive_max_m,
            max_dim=cfg.limits.max_dim,
            on_batch=cb,
            max_arity=cfg.verification.exhaustive_max_arity,
        ))
    elif random_cases is not None:
        if random_cases == 0:
            random_cases = cfg.verification.random_cases
        run_seed = cfg.verification.seed if seed is None else seed
        general_cases = general_tree_count(direction, cfg.verification.general_tree_cases)
        report = _run_with_progress(ctx, random_cases + general_cases, lambda cb: run_random(
            direction,
            random_cases,
            run_seed,
            batch_size=cfg.verification.batch_size,
            workers=cfg.limits.workers if workers is None else workers,
            max_dim=cfg.limits.max_dim,
            on_batch=cb,
            general_cases=general_cases,
        ))
    else:
        report = verify_world_file(
            direction, load_world(Path(world_path)), j, k, l, cfg.limits.max_dim,
            save_to=Path(save_path) if save_path else None,
        )

    for line in report.lines():
        click.echo(line)
    click.echo(json.dumps(report.summary()))
    if not report.ok:
        raise VerificationFailure(f"{direction.value}: {len(report.failures)} failure(s)", report)


@main.command("export-dot")
@click.argument("tree")
@json_option
@click.option("--hypercube", is_flag=True, help="Export the answer hypercube instead of the tree")
@click.option("--labeling", help="Leaf outcomes such as RARA or 0101")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write DOT to a file")
@click.pass_context
@handle_errors
def export_dot(ctx, tree, as_json, hypercube, labeling, output):
    """Render TREE (or its answer hypercube) as Graphviz DOT."""
    t = _tree(tree, as_json)
    lab = LeafLabeling.from_text(labeling) if labeling else None
    if hypercube:
        dot = hypercube_to_dot(t, lab, ctx.obj["config"].limits.dot_max_dim)
    else:
        dot = tree_to_dot(t, lab)
    if output:
        Path(output).write_text(dot, encoding="utf-8")
        if _verbose(ctx):
            err_console.print(f"[green]DOT written to {output}[/green]")
    else:
        click.echo(dot, nl=False)


@main.command()
@click.option("--max-dim", type=POSITIVE, help="Default cube dimension cap")
@click.option("--max-leaves", type=POSITIVE, help="Default leaf cap")
@click.option("--workers", type=POSITIVE, help="Default worker processes")
@click.option("--seed", type=int, help="Default verification seed")
@click.option("--random-cases", type=POSITIVE, help="Default number of random cases")
@click.option("--log-level", help="Default logging level")
@click.option("--save", is_flag=True, help="Write the configuration file even without changes")
@click.pass_context
@handle_errors
def config(ctx, max_dim, max_leaves, workers, seed, random_cases, log_level, save):
    """Show or update the bhq configuration."""
    cfg = ctx.obj["config"]

    updates = {}
    limits = {k: v for k, v in (("max_dim", max_dim), ("max_leaves", max_leaves), ("workers", workers)) if v is not None}
    if limits:
        updates["limits"] = limits
    verification = {k: v for k, v in (("seed", seed), ("random_cases", random_cases)) if v is not None}
    if verification:
        updates["verification"] = verification
    if log_level:
        updates["preferences"] = {"log_level": log_level}

    if updates:
        cfg.update_config(updates)
    if updates or save:
        path = cfg.save_config(ctx.obj["config_path"])
        err_console.print(f"[green]Configuration saved to {path}[/green]", highlight=False)
    click.echo(yaml.dump(cfg.model_dump(), default_flow_style=False, indent=2), nl=False)


if __name__ == '__main__':
    main()

import contextlib
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click
import rich
import typer
from pydantic import ValidationError as PydanticValidationError
from rich.console import Console
from rich.logging import RichHandler
from typer import Typer
from typer.core import TyperGroup

from kexchange import consts, errors
from kexchange.baselines import (
    greedy,
    linear_nols,
    marginal_weights,
    naive_marginal_nols,
    oblivious_ls,
)
from kexchange.campaign import run_campaign, run_cells, write_csv
from kexchange.commands.rows import HistoryRow, RunSummary, WeightRow
from kexchange.config import config
from kexchange.enums import Algorithm, ConsoleFormat, ObjectiveKind
from kexchange.exact import CheckResult, audit as audit_solution, write_checks_csv
from kexchange.generate import generate_packing
from kexchange.instance import Instance
from kexchange.io import load_campaign, load_fixture, load_instance, serialize_instance
from kexchange.models import CampaignSpec
from kexchange.objective import certify_monotone_submodular
from kexchange.rational import format_rational
from kexchange.search import run as run_search
from kexchange.systems import ExplicitSystem
from kexchange.table import RichTableMixin, print_rows

logger = logging.getLogger(__name__)
error_console = Console(stderr=True)

OSCILLATION_FIXTURE = "oscillation"


def handler(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except errors.KExchangeError as e:
            error_console.print(f"[red]{e}[/]", highlight=False)
            raise typer.Exit(code=e.exit_code)

    return wrapper


# Options shared by the commands that take an instance.
InstanceOption = typer.Option(
    None, "--instance", "-i", help="Instance file.", dir_okay=False, exists=True
)
FixtureOption = typer.Option(None, "--fixture", help="Bundled instance name.")
NOption = typer.Option(8, "--n", "-n", min=0, help="Generated: element count.")
KOption = typer.Option(2, "--k", "-k", min=1, help="Generated: maximum set size.")
UniverseOption = typer.Option(
    None, "--universe", help="Generated: item count, default max(n, k)."
)
DensityOption = typer.Option("1/2", "--density", help="Generated: extra-item chance.")
SeedOption = typer.Option(0, "--seed", help="Generated: random seed.")
ObjectiveOption = typer.Option(
    ObjectiveKind.coverage, "--objective", help="Generated: objective kind."
)
EpsilonOption = typer.Option(None, "--epsilon", "-e", help="Epsilon in (0, 1].")
CapOption = typer.Option(
    None, "--cap-candidates", min=1, help="Largest candidate count per scan."
)
BruteCapOption = typer.Option(
    None, "--brute-cap", min=0, help="Largest n for the exact optimum."
)


def _load(
    instance: Optional[Path],
    fixture: Optional[str],
    n: int,
    k: int,
    universe: Optional[int],
    density: str,
    seed: int,
    objective: ObjectiveKind,
) -> Instance:
    if instance is not None:
        return load_instance(instance)
    if fixture is not None:
        return load_fixture(fixture)
    return generate_packing(
        n=n,
        k=k,
        universe_size=max(n, k) if universe is None else universe,
        density=density,
        seed=seed,
        objective=objective,
        name=f"gen-n{n}-k{k}-s{seed}",
    )


def _print(rows: list[RichTableMixin], cls=None):
    print_rows(rows, config.format, cls=cls)


def _text(message: str):
    if config.format == ConsoleFormat.text:
        rich.print(message)


def _write_json(path: Path, rows: list[RichTableMixin]):
    path.write_text(json.dumps([row.to_record() for row in rows], indent=2) + "\n")


def _campaign_spec(**fields) -> CampaignSpec:
    try:
        return CampaignSpec(**fields)
    except PydanticValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "campaign"
        raise errors.InstanceValidationError(
            first["msg"], context=location, error=e
        ) from e


config_app = Typer(name="config", help="Configuration management.")


@config_app.command(name="list")
def list_values():
    """List all configuration values."""
    if config.format == config.Format.text:
        rich.print(f"[dim]{config.config_file}[/]")
        for key, entries in config.entries.items():
            rich.print()
            rich.print(f"[cyan]\\[{key}][/]")
            for entry in entries:
                rich.print(f"[green]{entry.key}[/]: {entry.value}")

    elif config.format == config.Format.json:
        rich.print_json(
            data={
                section: {entry.key: json.loads(entry.value) for entry in entries}
                for section, entries in config.entries.items()
            }
        )


@config_app.command(name="set")
@handler
def set_value(key: str, value: str):
    """Set a configuration key given as `section.option`."""
    try:
        if key.count(".") != 1:
            raise ValueError(
                f"Invalid configuration key: {key}. Valid format: `section.option`"
            )
        field = config.find(*key.split("."))
    except ValueError as e:
        raise errors.InvalidConfiguration(
            key=key,
            value=value,
            error=e,
            operation=errors.InvalidConfiguration.Op.set,
        )
    config.set(field=field, value=value)
    config.save()
    list_values()


class UsageExitGroup(TyperGroup):
    """Command group whose usage errors exit with code 1."""

    @contextlib.contextmanager
    def _usage_exit_code(self):
        try:
            yield
        except click.UsageError as e:
            e.exit_code = errors.KExchangeError.exit_code
            raise

    def make_context(self, *args, **kwargs):
        with self._usage_exit_code():
            return super().make_context(*args, **kwargs)

    def invoke(self, ctx):
        with self._usage_exit_code():
            return super().invoke(ctx)


app = Typer(
    name="kx",
    cls=UsageExitGroup,
    help="Non-oblivious local search for submodular maximization over k-exchange "
    "systems.",
)
app.add_typer(config_app, name="config")


@app.callback()
@handler
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging."),
    fmt: Optional[ConsoleFormat] = typer.Option(
        None, "--format", "-f", help="Console output format."
    ),
):
    config.load()
    if fmt is not None:
        config.format = fmt
    logging.basicConfig(
        level=logging.DEBUG if verbose or config.debug else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=error_console, show_path=False)],
        force=True,
    )


@app.command()
@handler
def run(
    instance: Optional[Path] = InstanceOption,
    fixture: Optional[str] = FixtureOption,
    n: int = NOption,
    k: int = KOption,
    universe: Optional[int] = UniverseOption,
    density: str = DensityOption,
    seed: int = SeedOption,
    objective: ObjectiveKind = ObjectiveOption,
    algorithm: Algorithm = typer.Option(
        Algorithm.nols, "--algorithm", "-a", help="Algorithm to run."
    ),
    epsilon: Optional[str] = EpsilonOption,
    cap_candidates: Optional[int] = CapOption,
    literal_pseudocode: bool = typer.Option(
        False,
        "--literal-pseudocode",
        help="Accept a move only when it beats the potential of all of S.",
    ),
    trace: Optional[Path] = typer.Option(
        None, "--trace", dir_okay=False, help="Write one line per improvement."
    ),
    out: Optional[Path] = typer.Option(
        None, "--out", "-o", dir_okay=False, help="Write the summary as JSON."
    ),
):
    """Run one algorithm on one instance."""
    inst = _load(instance, fixture, n, k, universe, density, seed, objective)
    epsilon = epsilon or config.epsilon
    cap = cap_candidates or config.cap_candidates

    if algorithm == Algorithm.nols:
        state, search_trace = run_search(
            inst,
            epsilon,
            cap_candidates=cap,
            literal_pseudocode=literal_pseudocode or config.literal_pseudocode,
            check_invariants=config.check_invariants,
        )
        summary = RunSummary.from_search(state, search_trace)
        if trace is not None:
            lines = search_trace.to_lines()
            trace.write_text("".join(f"{line}\n" for line in lines))
    elif algorithm == Algorithm.greedy:
        summary = RunSummary.from_baseline(greedy(inst))
    elif algorithm == Algorithm.oblivious:
        summary = RunSummary.from_baseline(oblivious_ls(inst, epsilon, cap=cap))
    elif algorithm == Algorithm.linear_nols:
        summary = RunSummary.from_baseline(linear_nols(inst, epsilon, cap=cap))
    else:
        summary = RunSummary.from_baseline(naive_marginal_nols(inst, cap=cap))

    _print([summary])
    if out is not None:
        _write_json(out, [summary])


@app.command()
@handler
def compare(
    instance: Optional[Path] = InstanceOption,
    fixture: Optional[str] = FixtureOption,
    n: int = NOption,
    k: int = KOption,
    universe: Optional[int] = UniverseOption,
    density: str = DensityOption,
    seed: int = SeedOption,
    objective: ObjectiveKind = ObjectiveOption,
    algorithm: Optional[list[Algorithm]] = typer.Option(
        None, "--algorithm", "-a", help="Algorithms to compare, default all."
    ),
    epsilon: Optional[str] = EpsilonOption,
    cap_candidates: Optional[int] = CapOption,
    brute_cap: Optional[int] = BruteCapOption,
    out: Optional[Path] = typer.Option(
        None, "--out", "-o", dir_okay=False, help="Write the rows as CSV."
    ),
):
    """Run several algorithms on one instance against the exact optimum."""
    inst = _load(instance, fixture, n, k, universe, density, seed, objective)
    algorithms = algorithm or [
        a
        for a in Algorithm
        if a != Algorithm.linear_nols or inst.objective.kind == ObjectiveKind.linear
    ]
    spec = _campaign_spec(
        name=inst.name or "instance",
        epsilons=[epsilon or config.epsilon],
        algorithms=algorithms,
        brute_cap=config.brute_cap if brute_cap is None else brute_cap,
        cap_candidates=cap_candidates or config.cap_candidates,
        literal_pseudocode=config.literal_pseudocode,
        audit=True,
    )
    rows = run_cells(spec, 0, spec.name, inst)
    _print(rows)
    if out is not None:
        write_csv(rows, out)


@app.command()
@handler
def audit(
    instance: Optional[Path] = InstanceOption,
    fixture: Optional[str] = FixtureOption,
    n: int = NOption,
    k: int = KOption,
    universe: Optional[int] = UniverseOption,
    density: str = DensityOption,
    seed: int = SeedOption,
    objective: ObjectiveKind = ObjectiveOption,
    epsilon: Optional[str] = EpsilonOption,
    cap_candidates: Optional[int] = CapOption,
    brute_cap: Optional[int] = BruteCapOption,
    failures: bool = typer.Option(
        False, "--failures", help="Only list the checks that failed."
    ),
    out: Optional[Path] = typer.Option(
        None, "--out", "-o", dir_okay=False, help="CSV file for the checks."
    ),
):
    """Check the charging argument on a local optimum, inequality by inequality."""
    inst = _load(instance, fixture, n, k, universe, density, seed, objective)
    epsilon = epsilon or config.epsilon
    cap = cap_candidates or config.cap_candidates
    state, trace = run_search(inst, epsilon, cap_candidates=cap)
    report = audit_solution(
        inst,
        state,
        trace.ordering,
        epsilon,
        brute_cap=config.brute_cap if brute_cap is None else brute_cap,
        cap_candidates=cap,
    )
    checks = [c for c in report.checks if not c.passed] if failures else report.checks
    _print(checks, cls=CheckResult)
    if out is not None:
        write_checks_csv([*checks, report.summary], out)
        logger.info("Wrote %d checks to %s", len(checks), out)
    ratio = "-" if report.ratio is None else format_rational(report.ratio)
    _text(
        f"f(S)={report.value} f(O)={report.opt_value} "
        f"ratio={ratio} bound={format_rational(report.bound)}"
    )
    failure = report.first_failure
    if failure is not None:
        raise errors.AuditFailure(
            failure.check.value,
            failure.detail or f"{failure.lhs} {failure.relation} {failure.rhs} fails",
            failure.subject,
        )


@app.command()
@handler
def gen(
    n: int = NOption,
    k: int = KOption,
    universe: Optional[int] = UniverseOption,
    density: str = DensityOption,
    seed: int = SeedOption,
    objective: ObjectiveKind = ObjectiveOption,
    weighted: bool = typer.Option(False, "--weighted", help="Random weights 1-10."),
    cover_universe: Optional[int] = typer.Option(
        None, "--cover-universe", help="Separate item count for the covers."
    ),
    out: Optional[Path] = typer.Option(
        None, "--out", "-o", dir_okay=False, help="Instance file to write."
    ),
):
    """Generate a random k-set packing instance."""
    inst = generate_packing(
        n=n,
        k=k,
        universe_size=max(n, k) if universe is None else universe,
        density=density,
        seed=seed,
        objective=objective,
        weighted=weighted,
        cover_universe=cover_universe,
        name=f"gen-n{n}-k{k}-s{seed}",
    )
    text = serialize_instance(inst)
    if out is None:
        typer.echo(text, nl=False)
    else:
        out.write_text(text)


@app.command()
@handler
def check(
    instance: Optional[Path] = InstanceOption,
    fixture: Optional[str] = FixtureOption,
    n: int = NOption,
    k: int = KOption,
    universe: Optional[int] = UniverseOption,
    density: str = DensityOption,
    seed: int = SeedOption,
    objective: ObjectiveKind = ObjectiveOption,
    max_n: Optional[int] = typer.Option(
        None, "--max-n", min=0, help="Largest ground set to certify."
    ),
):
    """Certify that the objective is monotone and submodular."""
    inst = _load(instance, fixture, n, k, universe, density, seed, objective)
    report = certify_monotone_submodular(
        inst.objective, max_n=config.certify_cap if max_n is None else max_n
    )
    _print([report])
    if not report.passed:
        raise errors.PreconditionError(
            f"Objective is not monotone submodular: {report.describe()}"
        )


@app.command(name="demo-cycle")
@handler
def demo_cycle(
    instance: Optional[Path] = InstanceOption,
    epsilon: Optional[str] = EpsilonOption,
    max_iters: int = typer.Option(
        consts.DEFAULT_NAIVE_MAX_ITERS, "--max-iters", min=1, help="Naive move cap."
    ),
):
    """Show the marginal-weight search cycling where the rounded search stops.

    The marginal-weight search starts from the first maximal set of an
    explicit system.
    """
    if instance is None:
        inst = load_fixture(OSCILLATION_FIXTURE)
    else:
        inst = load_instance(instance)
    start = None
    if isinstance(inst.system, ExplicitSystem) and inst.system.maximal_sets:
        start = inst.system.maximal_sets[0]

    weights = marginal_weights(inst, start) if start is not None else {}
    weight_rows = [
        WeightRow(element=e, member=e in start, weight=w) for e, w in weights.items()
    ]
    naive = naive_marginal_nols(inst, max_iters=max_iters, start=start)
    history = HistoryRow.from_history(naive.history)
    state, trace = run_search(inst, epsilon or config.epsilon)
    runs = [RunSummary.from_baseline(naive), RunSummary.from_search(state, trace)]

    if config.format == ConsoleFormat.json:
        rich.print_json(
            data={
                "weights": [row.to_record() for row in weight_rows],
                "history": [row.to_record() for row in history],
                "runs": [row.to_record() for row in runs],
            }
        )
        return
    if weight_rows:
        rich.print(f"Marginal weights at S = {sorted(start)}:")
        _print(weight_rows, cls=WeightRow)
    rich.print("Marginal-weight search:")
    _print(history, cls=HistoryRow)
    _print(runs, cls=RunSummary)


@app.command()
@handler
def campaign(
    spec: Optional[Path] = typer.Option(
        None, "--spec", dir_okay=False, exists=True, help="Campaign file (JSON)."
    ),
    out: Optional[Path] = typer.Option(
        None, "--out", "-o", dir_okay=False, help="CSV file, default stdout."
    ),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", min=1),
    k: int = KOption,
    n_min: int = typer.Option(4, "--n-min", min=0),
    n_max: int = typer.Option(8, "--n-max", min=0),
    universe: Optional[int] = UniverseOption,
    density: str = DensityOption,
    seed: int = SeedOption,
    objective: ObjectiveKind = ObjectiveOption,
    repetitions: int = typer.Option(1, "--repetitions", "-r", min=0),
    epsilon: Optional[list[str]] = typer.Option(None, "--epsilon", "-e"),
    algorithm: Optional[list[Algorithm]] = typer.Option(None, "--algorithm", "-a"),
    brute_cap: Optional[int] = BruteCapOption,
    cap_candidates: Optional[int] = CapOption,
    literal_pseudocode: bool = typer.Option(False, "--literal-pseudocode"),
    audit: bool = typer.Option(False, "--audit", help="Audit every nols row."),
):
    """Run a grid of instances, algorithms and epsilons and emit CSV."""
    base_dir = None
    if spec is not None:
        campaign_spec = load_campaign(spec)
        base_dir = spec.parent
    else:
        campaign_spec = _campaign_spec(
            seed=seed,
            generators=[
                dict(
                    n_min=n_min,
                    n_max=n_max,
                    k=k,
                    universe_size=max(n_max, k) if universe is None else universe,
                    density=density,
                    objective=objective,
                    repetitions=repetitions,
                )
            ],
            epsilons=epsilon or [config.epsilon],
            algorithms=algorithm or [Algorithm.nols],
            brute_cap=config.brute_cap if brute_cap is None else brute_cap,
            cap_candidates=cap_candidates or config.cap_candidates,
            literal_pseudocode=literal_pseudocode or config.literal_pseudocode,
            audit=audit,
            workers=config.workers,
        )

    rows = run_campaign(campaign_spec, base_dir=base_dir, workers=workers)
    failed = [row for row in rows if row.error or row.audit == "fail"]
    if failed:
        logger.warning(
            "%d of %d rows failed or failed their audit.", len(failed), len(rows)
        )
    if out is None:
        write_csv(rows, sys.stdout)
    else:
        write_csv(rows, out)
        _text(f"Wrote {len(rows)} rows to {out}.")

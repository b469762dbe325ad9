"""Experiment campaigns: every algorithm on every instance for every epsilon.

Each instance is an independent job; its cells are run in the order
(algorithm, epsilon) of the campaign, and the finished rows are sorted by cell
key, so the CSV does not depend on the number of workers.
"""

__all__ = [
    "CSV_COLUMNS",
    "CampaignRow",
    "build_instances",
    "run_cells",
    "run_campaign",
    "write_csv",
]

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, TextIO, Union

from kexchange.baselines import greedy, linear_nols, naive_marginal_nols, oblivious_ls
from kexchange.enums import Algorithm
from kexchange.errors import KExchangeError
from kexchange.exact import audit, brute_force_opt
from kexchange.generate import generate_packing
from kexchange.instance import Instance
from kexchange.io import load_instance
from kexchange.models import CampaignSpec
from kexchange.objective import Element
from kexchange.rational import format_rational
from kexchange.search import run
from kexchange.table import Column, RichTableMixin

logger = logging.getLogger(__name__)

CellKey = tuple[int, int, int]


def _decimal(value: Optional[Fraction]) -> str:
    return "" if value is None else format_rational(value)


@dataclass
class CampaignRow(RichTableMixin):
    HEADERS = [
        Column(title="instance_id", path="instance_id"),
        Column(title="n", path="n", align=Column.Align.right),
        Column(title="k", path="k", align=Column.Align.right),
        Column(title="epsilon", path=lambda r: _decimal(r.epsilon)),
        Column(title="algorithm", path="algorithm"),
        Column(title="value", path=lambda r: _decimal(r.value)),
        Column(title="opt_value", path=lambda r: _decimal(r.opt_value)),
        Column(title="ratio", path=lambda r: _decimal(r.ratio)),
        Column(title="bound", path=lambda r: _decimal(r.bound)),
        Column(title="improvements", path="improvements", align=Column.Align.right),
        Column(title="oracle_calls", path="oracle_calls", align=Column.Align.right),
        Column(title="wall_time", path=lambda r: f"{r.wall_time:.6f}"),
        Column(title="audit", path="audit"),
        Column(title="note", path="note"),
        Column(title="error", path="error"),
    ]

    key: CellKey
    instance_id: str
    n: int
    k: int
    epsilon: Fraction
    algorithm: Algorithm
    bound: Fraction
    value: Optional[Fraction] = None
    opt_value: Optional[Fraction] = None
    ratio: Optional[Fraction] = None
    improvements: int = 0
    oracle_calls: int = 0
    wall_time: float = 0.0
    audit: str = ""
    note: str = ""
    error: str = ""


CSV_COLUMNS = [column.title for column in CampaignRow.HEADERS]


def build_instances(
    spec: CampaignSpec, base_dir: Optional[Path] = None
) -> list[tuple[str, Instance]]:
    """Instances of a campaign with their ids, generated ones first.

    Generated instance number i (counting from 0 over all generators) uses
    seed ``spec.seed + i``.
    """
    instances = []
    index = 0
    for g, generator in enumerate(spec.generators):
        for n in range(generator.n_min, generator.n_max + 1):
            for repetition in range(generator.repetitions):
                instance_id = f"{spec.name}-g{g}-n{n}-r{repetition}"
                instance = generate_packing(
                    n=n,
                    k=generator.k,
                    universe_size=generator.universe_size,
                    density=generator.density,
                    seed=spec.seed + index,
                    objective=generator.objective,
                    weighted=generator.weighted,
                    cover_universe=generator.cover_universe,
                    name=instance_id,
                )
                instances.append((instance_id, instance))
                index += 1
    for path in spec.instance_files:
        path = Path(path)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        instance = load_instance(path)
        instances.append((instance.name or path.stem, instance))
    return instances


def _run_cell(
    spec: CampaignSpec,
    instance: Instance,
    row: CampaignRow,
    optimum: Optional[tuple[frozenset[Element], Fraction]],
):
    epsilon, algorithm = row.epsilon, row.algorithm
    if algorithm == Algorithm.nols:
        state, trace = run(
            instance,
            epsilon,
            cap_candidates=spec.cap_candidates,
            literal_pseudocode=spec.literal_pseudocode,
        )
        row.value, row.improvements = state.value, trace.count
        row.oracle_calls = trace.oracle_calls
        if trace.degenerate:
            row.note = "degenerate"
        if spec.audit and optimum is not None:
            if spec.literal_pseudocode:
                row.note = "literal"
            else:
                report = audit(
                    instance,
                    state,
                    trace.ordering,
                    epsilon,
                    cap_candidates=spec.cap_candidates,
                    optimum=optimum,
                )
                row.audit = "pass" if report.passed else "fail"
        return

    if algorithm == Algorithm.greedy:
        result = greedy(instance)
    elif algorithm == Algorithm.oblivious:
        result = oblivious_ls(instance, epsilon, cap=spec.cap_candidates)
    elif algorithm == Algorithm.linear_nols:
        result = linear_nols(instance, epsilon, cap=spec.cap_candidates)
    else:
        result = naive_marginal_nols(
            instance, max_iters=spec.naive_max_iters, cap=spec.cap_candidates
        )
        if result.cycle_length is not None:
            row.note = f"cycle:{result.cycle_length}"
        elif not result.terminated:
            row.note = "max-iters"
    row.value, row.improvements = result.value, result.iterations
    row.oracle_calls = result.oracle_calls


def run_cells(
    spec: CampaignSpec, index: int, instance_id: str, instance: Instance
) -> list[CampaignRow]:
    """Rows of one instance, keyed by (index, algorithm, epsilon) position.

    The optimum is computed once per instance when n is within the brute-force
    cap. A failing cell keeps its row and records the error instead.
    """
    optimum = None
    if spec.algorithms and instance.n <= spec.brute_cap:
        optimum = brute_force_opt(instance, cap=spec.brute_cap)

    rows = []
    for a, algorithm in enumerate(spec.algorithms):
        for e, epsilon in enumerate(spec.epsilons):
            row = CampaignRow(
                key=(index, a, e),
                instance_id=instance_id,
                n=instance.n,
                k=instance.k,
                epsilon=epsilon,
                algorithm=algorithm,
                bound=Fraction(instance.k + 3, 2) + epsilon,
            )
            start = time.perf_counter()
            try:
                _run_cell(spec, instance, row, optimum)
            except KExchangeError as error:
                logger.warning("Cell %s %s failed: %s", instance_id, algorithm, error)
                row.error = f"{type(error).__name__}: {error.message}"
            row.wall_time = time.perf_counter() - start
            if optimum is not None:
                row.opt_value = optimum[1]
                if row.value:
                    row.ratio = optimum[1] / row.value
            rows.append(row)
    return rows


def run_campaign(
    spec: CampaignSpec,
    base_dir: Optional[Path] = None,
    workers: Optional[int] = None,
) -> list[CampaignRow]:
    """Run every cell of the campaign and return rows sorted by cell key.

    ``workers`` overrides ``spec.workers``; with more than one worker the
    instances are spread over a process pool.
    """
    instances = build_instances(spec, base_dir)
    workers = spec.workers if workers is None else workers
    jobs = [(spec, i, name, instance) for i, (name, instance) in enumerate(instances)]

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_cells, *zip(*jobs)))
    else:
        results = [run_cells(*job) for job in jobs]

    rows = [row for rows in results for row in rows]
    return sorted(rows, key=lambda row: row.key)


def write_csv(rows: list[CampaignRow], out: Union[str, Path, TextIO]):
    """Write rows under the fixed :data:`CSV_COLUMNS` header."""
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="", encoding="utf-8") as f:
            write_csv(rows, f)
        return
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.to_record())

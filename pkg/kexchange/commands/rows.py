from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from kexchange.baselines import BaselineResult
from kexchange.enums import Algorithm
from kexchange.objective import Element
from kexchange.search import SearchTrace, SolutionState
from kexchange.table import Column, RichTableMixin


@dataclass
class RunSummary(RichTableMixin):
    HEADERS = [
        Column(title="Algorithm", path="algorithm"),
        Column(title="Solution", path="solution"),
        Column(title="Value", path="value", align=Column.Align.right),
        Column(title="Moves", path="moves", align=Column.Align.right),
        Column(title="Oracle calls", path="oracle_calls", align=Column.Align.right),
        Column(title="Terminated", path="terminated"),
        Column(title="Note", path="note"),
    ]

    algorithm: Algorithm
    solution: frozenset[Element]
    value: Fraction
    moves: int
    oracle_calls: int
    terminated: bool = True
    note: str = ""

    @classmethod
    def from_search(cls, state: SolutionState, trace: SearchTrace) -> "RunSummary":
        note = "degenerate" if trace.degenerate else f"alpha={trace.alpha}"
        return cls(
            algorithm=Algorithm.nols,
            solution=state.solution,
            value=state.value,
            moves=trace.count,
            oracle_calls=trace.oracle_calls,
            note=note,
        )

    @classmethod
    def from_baseline(cls, result: BaselineResult) -> "RunSummary":
        note = ""
        if result.cycle_length is not None:
            note = f"cycle:{result.cycle_length}"
        return cls(
            algorithm=result.algorithm,
            solution=result.solution,
            value=result.value,
            moves=result.iterations,
            oracle_calls=result.oracle_calls,
            terminated=result.terminated,
            note=note,
        )


@dataclass
class WeightRow(RichTableMixin):
    HEADERS = [
        Column(title="Element", path="element", align=Column.Align.right),
        Column(title="In S", path="member"),
        Column(title="Weight", path="weight", align=Column.Align.right),
    ]

    element: Element
    member: bool
    weight: Fraction


@dataclass
class HistoryRow(RichTableMixin):
    HEADERS = [
        Column(title="Step", path="step", align=Column.Align.right),
        Column(title="Solution", path="solution"),
        Column(title="Repeats step", path="repeats"),
    ]

    step: int
    solution: frozenset[Element]
    repeats: Optional[int] = None

    @classmethod
    def from_history(cls, history: list[frozenset[Element]]) -> list["HistoryRow"]:
        first_seen: dict[frozenset[Element], int] = {}
        rows = []
        for step, solution in enumerate(history):
            repeats = first_seen.get(solution)
            rows.append(cls(step=step, solution=solution, repeats=repeats))
            first_seen.setdefault(solution, step)
        return rows

"""Trial-level ingestion: raw records, counts, empirical systems, bootstrap.

The on-disk format is CSV with header `context_i,context_j,a,b` and one
trial per row; context indices are 1 or 2 and outcomes are +1 or -1.
Malformed rows abort ingestion with the offending line number.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import MissingContext, TrialParseError
from .systems import CONTEXTS, ContextLabel, CyclicSystem, PairJoint, validate_outcome

#: Cell order within one context's counts: (pp, pm, mp, mm).
CELLS = ((1, 1), (1, -1), (-1, 1), (-1, -1))

CSV_HEADER = ("context_i", "context_j", "a", "b")


@dataclass(frozen=True)
class TrialRecord:
    """One observed trial: a context and the two outcomes."""

    context: ContextLabel
    a: int
    b: int

    def __post_init__(self):
        validate_outcome(self.a, "a outcome")
        validate_outcome(self.b, "b outcome")


@dataclass(frozen=True)
class CountTable:
    """Per-context outcome counts, cells ordered (pp, pm, mp, mm)."""

    counts: dict[ContextLabel, tuple[int, int, int, int]]

    def __post_init__(self):
        if set(self.counts) != set(CONTEXTS):
            raise MissingContext("count table must cover contexts 11, 12, 21, 22")
        for ctx, cells in self.counts.items():
            if len(cells) != 4 or any(
                    not isinstance(n, int) or isinstance(n, bool) or n < 0
                    for n in cells):
                raise ValueError(f"context {ctx}: counts must be four nonnegative ints")

    @property
    def totals(self) -> dict[ContextLabel, int]:
        return {ctx: sum(cells) for ctx, cells in self.counts.items()}

    def total(self, ctx: ContextLabel) -> int:
        return sum(self.counts[ctx])


def accumulate(records: Iterable[TrialRecord]) -> CountTable:
    """Tally records into per-context cell counts; empty contexts stay zero."""
    counts = {ctx: [0, 0, 0, 0] for ctx in CONTEXTS}
    for record in records:
        cell = CELLS.index((record.a, record.b))
        counts[record.context][cell] += 1
    return CountTable({ctx: tuple(cells) for ctx, cells in counts.items()})


def normalize(counts: CountTable) -> CyclicSystem:
    """Empirical system of relative frequencies; every context needs trials."""
    joints = []
    for ctx in CONTEXTS:
        total = counts.total(ctx)
        if total == 0:
            raise MissingContext(f"context {ctx} has no trials")
        pp, pm, mp, mm = (n / total for n in counts.counts[ctx])
        joints.append(PairJoint(pp=pp, pm=pm, mp=mp, mm=mm, context=ctx))
    return CyclicSystem.from_joints(joints)


def bootstrap_resample(counts: CountTable, seed: int, replicates: int) -> list[CyclicSystem]:
    """Nonparametric bootstrap: each context resampled independently.

    Replicate k draws its stream from (seed, k), so replicates are
    reproducible individually and the full list is reproducible as a
    whole.
    """
    if replicates < 0:
        raise ValueError("replicates must be >= 0")
    if seed < 0:
        raise ValueError("seed must be >= 0")
    empirical = normalize(counts)
    probs = {ctx: empirical.joint(ctx.i, ctx.j).entries() for ctx in CONTEXTS}
    systems = []
    for k in range(replicates):
        rng = np.random.default_rng([seed, k])
        joints = []
        for ctx in CONTEXTS:
            total = counts.total(ctx)
            cells = rng.multinomial(total, probs[ctx])
            pp, pm, mp, mm = (int(n) / total for n in cells)
            joints.append(PairJoint(pp=pp, pm=pm, mp=mp, mm=mm, context=ctx))
        systems.append(CyclicSystem.from_joints(joints))
    return systems


def _parse_int(field: str, line_number: int, what: str) -> int:
    try:
        return int(field.strip())
    except ValueError:
        raise TrialParseError(line_number, f"{what} must be an integer, got {field!r}")


def parse_trial_rows(rows: Iterable[Sequence[str]], first_line: int = 1) -> list[TrialRecord]:
    """Validate raw string rows into TrialRecords; empty rows are skipped."""
    records = []
    for offset, row in enumerate(rows):
        line_number = first_line + offset
        if not row or all(not field.strip() for field in row):
            continue
        if len(row) != 4:
            raise TrialParseError(line_number, f"expected 4 fields, got {len(row)}")
        i = _parse_int(row[0], line_number, "context_i")
        j = _parse_int(row[1], line_number, "context_j")
        a = _parse_int(row[2], line_number, "a")
        b = _parse_int(row[3], line_number, "b")
        if i not in (1, 2) or j not in (1, 2):
            raise TrialParseError(line_number, f"context ({i}, {j}) out of range")
        if a not in (-1, 1) or b not in (-1, 1):
            raise TrialParseError(line_number, f"outcomes ({a}, {b}) must be +1 or -1")
        records.append(TrialRecord(context=ContextLabel(i, j), a=a, b=b))
    return records


def read_trials_csv(path) -> list[TrialRecord]:
    """Read a trial CSV; header `context_i,context_j,a,b` is required."""
    with open(Path(path), newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise TrialParseError(1, "empty file, expected header "
                                  + ",".join(CSV_HEADER))
        if tuple(field.strip() for field in header) != CSV_HEADER:
            raise TrialParseError(1, f"bad header {header!r}, expected "
                                  + ",".join(CSV_HEADER))
        return parse_trial_rows(reader, first_line=2)

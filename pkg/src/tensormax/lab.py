"""Replicated experiments over (n, p, m, population) grids.

Each grid cell is simulated under the null for a number of replicates;
per replicate the maximum entry statistic is computed, centered, and
recorded.  The report aggregates the empirical CDF of the centered
statistic on a z grid, its exact Kolmogorov-Smirnov distance to the
limit law, an empirical type-I error table at the fixed levels, and the
mean/sd of W / sqrt(log p).

Reproducibility contract: replicate r of every cell draws from stream
(master_seed, r), cells run in declared order, and records are sorted by
(cell, replicate) before persistence, so records.csv is byte-identical
for any worker count.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import statcore
from .asymptotics import ONE_SIDED, TWO_SIDED, GumbelLimit, normalize
from .hypotest import LEVELS
from .populations import PopulationSpec, SeedSpec, sample_matrix

DEFAULT_Z_GRID = tuple(float(z) for z in np.linspace(-6.0, 12.0, 101))

RECORD_COLUMNS = ("cell_id", "replicate", "w_abs", "w_signed", "t_value", "ratio")


@dataclass(frozen=True)
class CellConfig:
    """One experiment cell: dimensions, order, population and sidedness."""

    n: int
    p: int
    m: int
    spec: PopulationSpec
    sided: str = TWO_SIDED

    def __post_init__(self):
        if self.p < 3:
            raise ValueError(f"cell p must be >= 3, got {self.p}")
        if not 2 <= self.m <= self.p:
            raise ValueError(f"cell m must satisfy 2 <= m <= p, got m={self.m}, p={self.p}")
        if self.n < 1:
            raise ValueError(f"cell n must be >= 1, got {self.n}")
        if self.sided not in (TWO_SIDED, ONE_SIDED):
            raise ValueError(f"cell sided must be {TWO_SIDED!r} or {ONE_SIDED!r}, got {self.sided!r}")

    def cell_id(self, index: int) -> str:
        return f"c{index:02d}_{self.spec.family}_m{self.m}_n{self.n}_p{self.p}"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "m": self.m,
            "spec": self.spec.to_json(),
            "sided": self.sided,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CellConfig":
        return cls(
            n=int(obj["n"]),
            p=int(obj["p"]),
            m=int(obj["m"]),
            spec=PopulationSpec.from_json(obj["spec"]),
            sided=obj.get("sided", TWO_SIDED),
        )


@dataclass(frozen=True)
class ExperimentConfig:
    grid: tuple[CellConfig, ...]
    reps: int
    master_seed: int
    z_grid: tuple[float, ...] = DEFAULT_Z_GRID
    output_path: str | None = None

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not self.grid:
            raise ValueError("grid must contain at least one cell")
        if len(self.z_grid) < 2:
            raise ValueError("z_grid must contain at least two points")

    def total_cost(self) -> int:
        return sum(
            self.reps * statcore.enumeration_cost(c.p, c.m, c.n).multiply_adds for c in self.grid
        )

    def to_json(self) -> dict:
        return {
            "grid": [c.to_json() for c in self.grid],
            "reps": self.reps,
            "master_seed": self.master_seed,
            "z_grid": list(self.z_grid),
            "output_path": self.output_path,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        return cls(
            grid=tuple(CellConfig.from_json(c) for c in obj["grid"]),
            reps=int(obj["reps"]),
            master_seed=int(obj["master_seed"]),
            z_grid=tuple(float(z) for z in obj.get("z_grid", DEFAULT_Z_GRID)),
            output_path=obj.get("output_path"),
        )


@dataclass(frozen=True)
class ReplicateRecord:
    cell_id: str
    replicate: int
    w_abs: float
    w_signed: float
    t_value: float
    ratio: float


@dataclass(frozen=True)
class CellReport:
    cell_id: str
    cell: CellConfig
    reps: int
    ecdf: tuple[float, ...]
    ks_distance: float
    type1: dict
    ratio_mean: float
    ratio_sd: float
    flagged_nonpositive: int
    runtime_seconds: float

    def to_json(self) -> dict:
        return {
            "cell_id": self.cell_id,
            "cell": self.cell.to_json(),
            "reps": self.reps,
            "ecdf": list(self.ecdf),
            "ks_distance": self.ks_distance,
            "type1": {f"{lvl:.2f}": rate for lvl, rate in self.type1.items()},
            "ratio_mean": self.ratio_mean,
            "ratio_sd": self.ratio_sd,
            "flagged_nonpositive": self.flagged_nonpositive,
            "runtime_seconds": self.runtime_seconds,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CellReport":
        return cls(
            cell_id=obj["cell_id"],
            cell=CellConfig.from_json(obj["cell"]),
            reps=int(obj["reps"]),
            ecdf=tuple(float(v) for v in obj["ecdf"]),
            ks_distance=float(obj["ks_distance"]),
            type1={float(k): float(v) for k, v in obj["type1"].items()},
            ratio_mean=float(obj["ratio_mean"]),
            ratio_sd=float(obj["ratio_sd"]),
            flagged_nonpositive=int(obj["flagged_nonpositive"]),
            runtime_seconds=float(obj["runtime_seconds"]),
        )


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    cells: tuple[CellReport, ...]
    records: tuple[ReplicateRecord, ...]


def ks_distance(samples, limit: GumbelLimit) -> float:
    """Exact one-sample Kolmogorov-Smirnov statistic against the limit law.

    Evaluates both one-sided envelopes at the sorted sample points, where
    the supremum of |F_hat - F| over the whole line is attained.
    """
    xs = np.sort(np.asarray(samples, dtype=np.float64))
    if xs.size == 0:
        raise ValueError("samples must be non-empty")
    r = xs.size
    grid = np.arange(1, r + 1, dtype=np.float64)
    cdf = limit.cdf_array(xs)
    d_plus = np.max(grid / r - cdf)
    d_minus = np.max(cdf - (grid - 1.0) / r)
    return float(max(d_plus, d_minus))


def _run_replicate(args) -> tuple[int, int, float, float, float, float]:
    cell_index, cell, master_seed, replicate = args
    X = sample_matrix(cell.spec, cell.n, cell.p, SeedSpec(master_seed, replicate))
    res = statcore.max_entry(X, cell.m)
    t = normalize(res.w_abs, cell.n, cell.p, cell.m).t_value
    ratio = res.w_abs / math.sqrt(math.log(cell.p))
    return (cell_index, replicate, res.w_abs, res.w_signed, t, ratio)


def _summarize_cell(
    cell_index: int,
    cell: CellConfig,
    rows: list[tuple],
    z_grid: tuple[float, ...],
    runtime: float,
) -> CellReport:
    w_signed = np.array([r[3] for r in rows])
    t_abs = np.array([r[4] for r in rows])
    ratios = np.array([r[5] for r in rows])
    limit = GumbelLimit(cell.m, cell.sided)
    flagged = 0
    if cell.sided == ONE_SIDED:
        # Centered signed statistic, recomputable from the w_signed column.
        positive = w_signed > 0.0
        flagged = int(np.count_nonzero(~positive))
        ws = w_signed[positive]
        t_cell = np.array([normalize(w, cell.n, cell.p, cell.m).t_value for w in ws])
        if t_cell.size == 0:
            t_cell = np.array([normalize(0.0, cell.n, cell.p, cell.m).t_value])
    else:
        t_cell = t_abs
    zg = np.asarray(z_grid)
    ecdf = tuple(float(np.count_nonzero(t_cell <= z) / t_cell.size) for z in zg)
    ks = ks_distance(t_cell, limit)
    pvals = np.array([limit.sf(t) for t in t_cell])
    type1 = {lvl: float(np.count_nonzero(pvals < lvl) / t_cell.size) for lvl in LEVELS}
    return CellReport(
        cell_id=cell.cell_id(cell_index),
        cell=cell,
        reps=len(rows),
        ecdf=ecdf,
        ks_distance=ks,
        type1=type1,
        ratio_mean=float(np.mean(ratios)),
        ratio_sd=float(np.std(ratios, ddof=1)) if len(rows) > 1 else 0.0,
        flagged_nonpositive=flagged,
        runtime_seconds=runtime,
    )


def run_experiment(
    config: ExperimentConfig,
    workers: int = 1,
    budget: int = statcore.DEFAULT_COST_CEILING,
) -> ExperimentReport:
    """Run every cell of the grid for the configured replicate count.

    Cells run sequentially; replicates within a cell are independent
    tasks (stream id = replicate index) and may run in parallel.  The
    returned report is identical for every worker count.  If
    ``config.output_path`` is set the report is persisted there.
    """
    total = config.total_cost()
    if total > budget:
        raise statcore.BudgetError(
            f"experiment needs an estimated {total:,} multiply-adds, above the budget of {budget:,}"
        )
    workers = max(1, int(workers))
    all_records: list[ReplicateRecord] = []
    cell_reports: list[CellReport] = []
    for cell_index, cell in enumerate(config.grid):
        t0 = time.perf_counter()
        tasks = [(cell_index, cell, config.master_seed, r) for r in range(config.reps)]
        if workers == 1:
            rows = [_run_replicate(t) for t in tasks]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_run_replicate, tasks, chunksize=max(1, config.reps // (4 * workers))))
        rows.sort(key=lambda r: (r[0], r[1]))
        runtime = time.perf_counter() - t0
        cid = cell.cell_id(cell_index)
        all_records.extend(
            ReplicateRecord(cid, r[1], r[2], r[3], r[4], r[5]) for r in rows
        )
        cell_reports.append(_summarize_cell(cell_index, cell, rows, config.z_grid, runtime))
    report = ExperimentReport(config=config, cells=tuple(cell_reports), records=tuple(all_records))
    if config.output_path is not None:
        persist(report, config.output_path)
    return report


def persist(report: ExperimentReport, path) -> None:
    """Write records.csv and summary.json under ``path``.

    The CSV uses LF line endings, '.' decimals and 17 significant digits,
    which round-trips float64 exactly; identical (config, seed) runs
    produce identical bytes regardless of worker count.
    """
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "records.csv", "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RECORD_COLUMNS)
            for rec in report.records:
                writer.writerow(
                    (
                        rec.cell_id,
                        rec.replicate,
                        f"{rec.w_abs:.17g}",
                        f"{rec.w_signed:.17g}",
                        f"{rec.t_value:.17g}",
                        f"{rec.ratio:.17g}",
                    )
                )
        summary = {
            "config": report.config.to_json(),
            "cells": [c.to_json() for c in report.cells],
        }
        with open(out / "summary.json", "w", encoding="ascii") as fh:
            json.dump(summary, fh, indent=2, sort_keys=False)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed to persist report under {out}: {exc}") from exc


def load_report(path) -> ExperimentReport:
    """Rebuild an ExperimentReport from a persisted directory."""
    out = Path(path)
    try:
        with open(out / "summary.json", encoding="ascii") as fh:
            summary = json.load(fh)
        records = []
        with open(out / "records.csv", newline="", encoding="ascii") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != RECORD_COLUMNS:
                raise ValueError(f"unexpected records.csv header {header}")
            for row in reader:
                records.append(
                    ReplicateRecord(
                        cell_id=row[0],
                        replicate=int(row[1]),
                        w_abs=float(row[2]),
                        w_signed=float(row[3]),
                        t_value=float(row[4]),
                        ratio=float(row[5]),
                    )
                )
    except OSError as exc:
        raise OSError(f"failed to load report from {out}: {exc}") from exc
    return ExperimentReport(
        config=ExperimentConfig.from_json(summary["config"]),
        cells=tuple(CellReport.from_json(c) for c in summary["cells"]),
        records=tuple(records),
    )

"""Benchmark records, normalization, and performance profiles."""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass

from .engine import compute_scores
from .graph import Graph
from .reduction import STANDARD_COMBINATIONS

BENCH_FIELDS = (
    "graph",
    "combination",
    "preprocess_s",
    "phase1_s",
    "phase2_s",
    "total_s",
    "remaining_edges",
    "components",
)


@dataclass
class BenchRecord:
    graph: str
    combination: str
    preprocess_s: float
    phase1_s: float
    phase2_s: float
    total_s: float
    remaining_edges: int
    components: int


def bench_graph(
    g: Graph,
    name: str,
    combinations=STANDARD_COMBINATIONS,
    reps: int = 3,
    max_side_degree: int = 4,
):
    """Run every combination ``reps`` times; report the median timings.

    Monotonic-clock timings come from the engine; repetitions run
    sequentially so they do not disturb each other.  Also returns the final
    per-component edge counts per combination.
    """
    records = []
    component_edges: dict[str, list[int]] = {}
    for combo in combinations:
        runs = [compute_scores(g, combo, max_side_degree=max_side_degree) for _ in range(max(1, reps))]
        records.append(
            BenchRecord(
                graph=name,
                combination=str(combo),
                preprocess_s=statistics.median(r.preprocess_seconds for r in runs),
                phase1_s=statistics.median(r.phase1_seconds for r in runs),
                phase2_s=statistics.median(r.phase2_seconds for r in runs),
                total_s=statistics.median(r.total_seconds for r in runs),
                remaining_edges=runs[0].remaining_edges,
                components=runs[0].component_count,
            )
        )
        component_edges[str(combo)] = runs[0].component_edges
    return records, component_edges


def write_bench_csv(path, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_FIELDS)
        for r in records:
            writer.writerow(
                [
                    r.graph,
                    r.combination,
                    f"{r.preprocess_s:.9f}",
                    f"{r.phase1_s:.9f}",
                    f"{r.phase2_s:.9f}",
                    f"{r.total_s:.9f}",
                    r.remaining_edges,
                    r.components,
                ]
            )


def read_bench_csv(path) -> list[BenchRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [f for f in BENCH_FIELDS if f not in (reader.fieldnames or ())]
        if missing:
            raise ValueError(f"bench CSV missing columns: {missing}")
        for row in reader:
            records.append(
                BenchRecord(
                    graph=row["graph"],
                    combination=row["combination"],
                    preprocess_s=float(row["preprocess_s"]),
                    phase1_s=float(row["phase1_s"]),
                    phase2_s=float(row["phase2_s"]),
                    total_s=float(row["total_s"]),
                    remaining_edges=int(row["remaining_edges"]),
                    components=int(row["components"]),
                )
            )
    return records


def normalized_totals(records, baseline: str = "o"):
    """Per graph, each combination's total divided by the baseline's.

    The baseline defaults to the ordering-only combination; a natural-order
    baseline ("" combination) reproduces the plain-versus-ordered comparison.
    """
    by_graph: dict[str, dict[str, float]] = {}
    for r in records:
        by_graph.setdefault(r.graph, {})[r.combination] = r.total_s
    rows = []
    for graph in sorted(by_graph):
        combos = by_graph[graph]
        if baseline not in combos:
            raise ValueError(f"graph {graph!r} has no baseline combination {baseline!r} to normalize against")
        base = combos[baseline]
        for combo in combos:
            rows.append((graph, combo, combos[combo] / base if base > 0 else float("inf")))
    return rows


@dataclass(frozen=True)
class ProfilePoint:
    combination: str
    r: float
    p: float


def performance_profile(records) -> list[ProfilePoint]:
    """Step functions p(r): the fraction of graphs on which a combination's
    total time is within a factor r of the per-graph best.

    Requires a full graph x combination matrix; any hole is an error.
    """
    table: dict[str, dict[str, float]] = {}
    combos: set[str] = set()
    for r in records:
        table.setdefault(r.graph, {})[r.combination] = r.total_s
        combos.add(r.combination)
    if len(combos) < 2:
        raise ValueError("performance profile needs at least two combinations")
    holes = [
        (graph, combo)
        for graph in sorted(table)
        for combo in sorted(combos)
        if combo not in table[graph]
    ]
    if holes:
        raise ValueError(f"bench data has holes (graph, combination): {holes}")
    graphs = sorted(table)
    best = {graph: min(table[graph].values()) for graph in graphs}
    points: list[ProfilePoint] = []
    for combo in sorted(combos):
        ratios = sorted(
            table[graph][combo] / best[graph] if best[graph] > 0 else 1.0 for graph in graphs
        )
        count = 0
        for i, ratio in enumerate(ratios):
            count += 1
            if i + 1 < len(ratios) and ratios[i + 1] == ratio:
                continue  # collapse equal ratios into one step
            points.append(ProfilePoint(combo, ratio, count / len(graphs)))
    return points


def write_profile_csv(path, points) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["combination", "r", "p"])
        for pt in points:
            writer.writerow([pt.combination, f"{pt.r:.9f}", f"{pt.p:.9f}"])

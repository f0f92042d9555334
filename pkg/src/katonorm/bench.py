"""Wall-clock comparison of the normalization methods across orders."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .lie import Style
from .normalform import Method, normalize
from .problem import ProblemSpec

__all__ = ["BenchRow", "run_benchmark", "format_table", "is_monotone"]


@dataclass(frozen=True)
class BenchRow:
    order: int
    method: Method
    seconds: float
    hamiltonian_terms: int
    generator_terms: int


def run_benchmark(spec: ProblemSpec, orders, methods, repeat: int = 1) -> list[BenchRow]:
    """Time ``normalize`` for every (order, method); the best of ``repeat`` runs is kept."""
    ctx, H0, Hi = spec.context(), spec.unperturbed(), spec.perturbation()
    rows = []
    for N in orders:
        for method in methods:
            style = Style.NONSECULAR if method is not Method.KATO_EXPLICIT else Style.KATO_F0
            best, result = None, None
            for _ in range(max(1, repeat)):
                t0 = time.perf_counter()
                result = normalize(ctx, H0, Hi, N, method, style)
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            rows.append(BenchRow(N, method, best, result.normalized.num_terms(),
                                 result.generator.series.num_terms()))
    return rows


def format_table(rows: list[BenchRow]) -> str:
    """Orders down, one time column per method, then term counts."""
    methods = list(dict.fromkeys(r.method for r in rows))
    orders = list(dict.fromkeys(r.order for r in rows))
    cell = {(r.order, r.method): r for r in rows}
    head = (["order"] + [f"{m.value} time (s)" for m in methods]
            + [f"{m.value} H terms" for m in methods] + [f"{m.value} G terms" for m in methods])
    body = []
    for N in orders:
        line = [str(N)]
        line += [f"{cell[N, m].seconds:.4f}" for m in methods]
        line += [str(cell[N, m].hamiltonian_terms) for m in methods]
        line += [str(cell[N, m].generator_terms) for m in methods]
        body.append(line)
    widths = [max(len(row[i]) for row in [head] + body) for i in range(len(head))]
    fmt = "  ".join("{:>%d}" % w for w in widths)
    return "\n".join(fmt.format(*row) for row in [head] + body) + "\n"


def is_monotone(rows: list[BenchRow]) -> bool:
    """Times nondecreasing in order within each method column."""
    by_method: dict[Method, list[BenchRow]] = {}
    for r in rows:
        by_method.setdefault(r.method, []).append(r)
    for col in by_method.values():
        col = sorted(col, key=lambda r: r.order)
        if any(b.seconds < a.seconds for a, b in zip(col, col[1:])):
            return False
    return True

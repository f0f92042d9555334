"""Command-line driver: ``normalize``, ``verify``, ``bench`` and ``compare``.

Exit codes: 0 success, 1 usage error, 2 problem-file error, 3 failed
verification or broken internal invariant.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from gmpy2 import mpq

from .bench import format_table, is_monotone, run_benchmark
from .emit import actions_to_text, series_to_json, series_to_text
from .field import FieldElement
from .lie import Style
from .liouville import BirkhoffContext, project_P0
from .normalform import (
    DegenerateIntegralError,
    Method,
    compare_styles,
    gustavson_from_result,
    normalize,
)
from .problem import ProblemSpec, SpecError, parse_spec
from .series import Chart, PSeries
from .verify import SUITE_BLOCKS, run_suite

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_FAILED = 0, 1, 2, 3

METHODS = {m.value: m for m in Method}
STYLES = {s.value: s for s in Style}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _henon_heiles() -> ProblemSpec:
    return ProblemSpec(2, (mpq(1), mpq(1)), Chart.PQ,
                       ((FieldElement(1), (2, 1, 0, 0)), (FieldElement(mpq(-1, 3)), (0, 3, 0, 0))))


def _load(path: str) -> ProblemSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text)


def _order(args, spec: ProblemSpec, default: int) -> int:
    if args.order is not None:
        return args.order
    return spec.order if spec.order is not None else default


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("orders must be non-negative")
    return vals


def _method_list(text: str) -> list[Method]:
    try:
        return [METHODS[x.strip()] for x in text.split(",") if x.strip()]
    except KeyError as exc:
        raise argparse.ArgumentTypeError(f"unknown method {exc.args[0]!r}") from None


def _method_style(text: str) -> tuple[Method, Style | None]:
    method, _, style = text.partition(":")
    if method not in METHODS or (style and style not in STYLES):
        raise argparse.ArgumentTypeError(f"expected method[:style], got {text!r}")
    return METHODS[method], STYLES[style] if style else None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="katonorm", description="Exact canonical perturbation theory for polynomial Hamiltonians.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", help="normalize the Hamiltonian of a problem file")
    p.add_argument("spec", help="problem file")
    p.add_argument("--order", type=int, help="truncation order N (default: file value, else 4)")
    p.add_argument("--method", choices=list(METHODS), default="kato")
    p.add_argument("--style", choices=list(STYLES), help="normalization style (default: the method's own)")
    p.add_argument("--emit", choices=["generator", "hamiltonian", "gustavson", "all"], default="hamiltonian")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--chart", choices=[c.value for c in Chart], default="pq", help="output chart")
    p.add_argument("--out", help="write to this file instead of standard output")
    p.add_argument("--threads", type=int, default=1, help="accepted for symmetry; normalization is sequential")

    v = sub.add_parser("verify", help="run the exact identity suite")
    v.add_argument("spec", nargs="?", help="problem file supplying omega and Hi (default: Henon-Heiles)")
    v.add_argument("--order", type=int, default=3)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--blocks", default=",".join(SUITE_BLOCKS),
                   help="comma-separated subset of " + ", ".join(SUITE_BLOCKS))
    v.add_argument("--threads", type=int, default=1, help="worker processes for independent trials")
    v.add_argument("--out")

    b = sub.add_parser("bench", help="time the methods across orders")
    b.add_argument("spec")
    b.add_argument("--orders", type=_int_list, default=[4, 8])
    b.add_argument("--methods", type=_method_list, default=[Method.DEPRIT, Method.KATO_EXPLICIT])
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--threads", type=int, default=1, help="accepted for symmetry; timings run sequentially")
    b.add_argument("--out")

    c = sub.add_parser("compare", help="compare two method/style choices")
    c.add_argument("spec")
    c.add_argument("--first", type=_method_style, default=(Method.KATO_EXPLICIT, None), help="method[:style]")
    c.add_argument("--second", type=_method_style, default=(Method.DEPRIT, Style.NONSECULAR), help="method[:style]")
    c.add_argument("--order", type=int)
    c.add_argument("--out")
    return ap


def _check_h0(spec: ProblemSpec, ctx: BirkhoffContext):
    try:
        ctx.check_diagonal(spec.unperturbed())
    except ValueError as exc:
        raise SpecError(f"H0: {exc}") from None


def _secular(ctx: BirkhoffContext, Ht: PSeries) -> bool:
    return project_P0(ctx, Ht) == Ht


def cmd_normalize(args) -> int:
    spec = _load(args.spec)
    N = _order(args, spec, 4)
    ctx = spec.context()
    method = METHODS[args.method]
    style = STYLES[args.style] if args.style else None
    _check_h0(spec, ctx)
    try:
        res = normalize(ctx, spec.unperturbed(), spec.perturbation(), N, method, style)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not _secular(ctx, res.normalized):
        print("internal error: normalized Hamiltonian is not secular", file=sys.stderr)
        return EXIT_FAILED

    chart = Chart(args.chart)
    items: list[tuple[str, PSeries]] = []
    gi = None
    if args.emit in ("generator", "all"):
        items.append(("generator", res.generator.series))
    if args.emit in ("hamiltonian", "all"):
        items.append(("hamiltonian", res.normalized))
    if args.emit in ("gustavson", "all"):
        if N < 1:
            raise UsageError("the Gustavson integral needs --order >= 1")
        try:
            gi = gustavson_from_result(res)
        except DegenerateIntegralError as exc:
            print(f"gustavson integral: {exc}", file=sys.stderr)
            return EXIT_FAILED
        items.append(("gustavson", gi.series))

    if args.format == "json":
        doc = {"method": method.value, "style": res.style.value, "order": N,
               "series": [series_to_json(name, F, chart) for name, F in items]}
        if gi is not None:
            doc["gustavson_shift"] = gi.shift
        _write(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK
    parts = []
    for name, F in items:
        if name == "gustavson":
            parts.append(f"# gustavson integral = (H - U H0) / alpha^{gi.shift}\n")
        parts.append(series_to_text(name, F, chart))
        if name == "hamiltonian":
            view = actions_to_text(name, F)
            if view:
                parts.append(view)
    _write("".join(parts), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _load(args.spec) if args.spec else _henon_heiles()
    blocks = [x.strip() for x in args.blocks.split(",") if x.strip()]
    if args.trials < 0 or args.order < 0:
        raise UsageError("--trials and --order must be non-negative")
    try:
        checks = run_suite(spec.context(), spec.perturbation(), args.order, args.trials,
                           args.seed, args.threads, blocks)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    failed = sum(not c.passed for c in checks)
    lines = [c.line() for c in checks]
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_bench(args) -> int:
    spec = _load(args.spec)
    rows = run_benchmark(spec, sorted(args.orders), args.methods, args.repeat)
    text = format_table(rows)
    text += f"monotone: {'yes' if is_monotone(rows) else 'no'}\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    spec = _load(args.spec)
    N = _order(args, spec, 4)
    ctx, H0, Hi = spec.context(), spec.unperturbed(), spec.perturbation()
    _check_h0(spec, ctx)
    try:
        r1 = normalize(ctx, H0, Hi, N, *args.first)
        r2 = normalize(ctx, H0, Hi, N, *args.second)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    head = [f"first: {r1.method.value}:{r1.style.value}", f"second: {r2.method.value}:{r2.style.value}"]
    _write("\n".join(head + compare_styles(ctx, r1, r2).lines()) + "\n", args.out)
    return EXIT_OK


COMMANDS = {"normalize": cmd_normalize, "verify": cmd_verify, "bench": cmd_bench, "compare": cmd_compare}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecError as exc:
        print(f"problem file error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

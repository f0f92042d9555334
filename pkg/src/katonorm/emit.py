"""Deterministic text and JSON renderings of series, with parsers for both.

Text block::

    [hamiltonian] chart=pq dim=1 order=3
    alpha^0: 1/2 * q1^2
    alpha^1: 3/32 * p1^4

Terms are listed by alpha power, then total degree, then exponent tuple.
A series depending only on the products ``xi_k eta_k`` may additionally be
shown in the actions ``J_k = i xi_k eta_k`` as an ``[name:actions]`` block;
that view is informational and skipped by the parser.

JSON: ``{"name": ..., "chart": ..., "dim": d, "order": N, "blocks":
[{"alpha_order": n, "terms": [{"chart", "exponents", "coeff": {"a", "b", "c", "d"}}]}]}``
with every coefficient component a ``"num/den"`` string.
"""
from __future__ import annotations

import json
import re

from . import _poly
from .field import FieldElement, as_rational, format_rational
from .problem import SpecError, format_coefficient, parse_term
from .series import Chart, PSeries, to_chart

__all__ = [
    "series_to_text",
    "parse_series_text",
    "parse_text_document",
    "series_to_json",
    "series_from_json",
    "actions_view",
    "actions_to_text",
]

_HEADER = re.compile(r"\[([^\]:]+)\]\s+chart=(\w+)\s+dim=(\d+)\s+order=(\S+)\s*$")
_LINE = re.compile(r"alpha\^(\d+):\s*(.*)$")


def series_to_text(name: str, F: PSeries, chart: Chart | None = None) -> str:
    if chart is not None:
        F = to_chart(F, chart)
    order = "exact" if F.order is None else str(F.order)
    lines = [f"[{name}] chart={F.chart.value} dim={F.dim} order={order}"]
    for n, mono, c in F.terms():
        lines.append(f"alpha^{n}: {format_coefficient(c)} * {mono}")
    return "\n".join(lines) + "\n"


def parse_series_text(text: str) -> tuple[str, PSeries]:
    """Inverse of :func:`series_to_text` for a single block."""
    doc = parse_text_document(text)
    if len(doc) != 1:
        raise SpecError(f"expected one series block, found {len(doc)}")
    return next(iter(doc.items()))


def parse_text_document(text: str) -> dict[str, PSeries]:
    blocks: dict[str, tuple] = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        if line.startswith("["):
            m = _HEADER.match(line)
            if m is None:
                current = None  # informational block (e.g. actions view)
                continue
            name, chart, dim, order = m.groups()
            if name in blocks:
                raise SpecError(f"duplicate series block {name!r}", lineno, 1)
            current = blocks[name] = (Chart(chart), int(dim), None if order == "exact" else int(order), {})
            continue
        if current is None:
            continue
        m = _LINE.match(line)
        if m is None:
            raise SpecError("expected 'alpha^<n>: <coefficient> * <monomial>'", lineno, 1)
        chart, dim, _, terms = current
        c, exps = parse_term(m.group(2), dim, chart, lineno, m.start(2) + 1)
        _poly.add_into(terms.setdefault(int(m.group(1)), {}), {exps: c})
    return {name: PSeries(dim, chart, terms, order) for name, (chart, dim, order, terms) in blocks.items()}


def _coeff_json(c: FieldElement) -> dict:
    return {k: format_rational(v) for k, v in zip("abcd", c.components())}


def series_to_json(name: str, F: PSeries, chart: Chart | None = None) -> dict:
    if chart is not None:
        F = to_chart(F, chart)
    blocks: dict[int, list] = {}
    for n, mono, c in F.terms():
        blocks.setdefault(n, []).append(
            {"chart": F.chart.value, "exponents": list(mono.exponents), "coeff": _coeff_json(c)})
    return {
        "name": name,
        "chart": F.chart.value,
        "dim": F.dim,
        "order": F.order,
        "blocks": [{"alpha_order": n, "terms": t} for n, t in sorted(blocks.items())],
    }


def series_from_json(obj: dict | str) -> PSeries:
    if isinstance(obj, str):
        obj = json.loads(obj)
    chart, dim = Chart(obj["chart"]), int(obj["dim"])
    terms: dict[int, dict] = {}
    for block in obj["blocks"]:
        poly = terms.setdefault(int(block["alpha_order"]), {})
        for t in block["terms"]:
            if Chart(t["chart"]) is not chart:
                raise ValueError("term chart differs from series chart")
            exps = tuple(int(e) for e in t["exponents"])
            if len(exps) != 2 * dim:
                raise ValueError(f"exponent vector {exps} does not match dim {dim}")
            c = FieldElement(*(as_rational(t["coeff"].get(k, "0")) for k in "abcd"))
            _poly.add_into(poly, {exps: c})
    return PSeries(dim, chart, terms, obj.get("order"))


def actions_view(F: PSeries) -> dict[int, dict[tuple, FieldElement]] | None:
    """Rewrite ``F`` as a polynomial in the actions ``J_k``, or ``None`` if impossible.

    ``xi^m eta^m = (-i)^|m| J^m``; any term with unequal exponents rules the view out.
    """
    F = to_chart(F, Chart.XIETA)
    d = F.dim
    out: dict[int, dict] = {}
    for n, mono, c in F.terms():
        e = mono.exponents
        if e[:d] != e[d:]:
            return None
        for _ in range(sum(e[:d]) % 4):
            c = -c.mul_i()
        out.setdefault(n, {})[e[:d]] = c
    return out


def actions_to_text(name: str, F: PSeries) -> str | None:
    view = actions_view(F)
    if view is None:
        return None
    order = "exact" if F.order is None else str(F.order)
    lines = [f"[{name}:actions] dim={F.dim} order={order}"]
    for n in sorted(view):
        for e in sorted(view[n], key=_poly.sort_key):
            mono = " ".join(f"J{k + 1}" if x == 1 else f"J{k + 1}^{x}" for k, x in enumerate(e) if x) or "1"
            lines.append(f"alpha^{n}: {format_coefficient(view[n][e])} * {mono}")
    return "\n".join(lines) + "\n"

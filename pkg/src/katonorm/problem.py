"""Hamiltonian problem files.

A problem file is line oriented::

    # Henon-Heiles
    dim = 2
    omega = [1, 1]
    chart = pq
    H0 = auto
    term = 1 * q1^2 q2
    term = -1/3 * q2^3
    order = 4

``term`` lines give the perturbation ``Hi`` as ``<coefficient> * <monomial>``.
The coefficient is a rational or a parenthesized field element such as
``(1/2 - 1/3*i*r2)``; the monomial is whitespace-separated ``q<k>^<e>`` /
``p<k>^<e>`` factors (``xi<k>`` / ``eta<k>`` in the Birkhoff chart) or ``1``.
With ``H0 = explicit`` the unperturbed part is spelled out by ``h0 = ...``
lines in the same syntax and must equal the diagonal harmonic Hamiltonian.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from gmpy2 import mpq

from .field import FieldElement, as_rational, format_rational
from .liouville import BirkhoffContext
from .series import Chart, PSeries, format_monomial

__all__ = ["H0Mode", "ProblemSpec", "SpecError", "parse_spec", "emit_spec", "format_coefficient",
           "parse_term"]


class SpecError(ValueError):
    """Problem-file error with a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message, self.line, self.column = message, line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class H0Mode(enum.Enum):
    AUTO_DIAGONAL = "auto"
    EXPLICIT = "explicit"


Term = tuple[FieldElement, tuple[int, ...]]


@dataclass(frozen=True)
class ProblemSpec:
    dim: int
    omega: tuple[mpq, ...]
    chart: Chart
    terms: tuple[Term, ...]
    h0_mode: H0Mode = H0Mode.AUTO_DIAGONAL
    h0_terms: tuple[Term, ...] = ()
    order: int | None = None

    def context(self) -> BirkhoffContext:
        return BirkhoffContext(self.omega)

    def _series(self, terms) -> PSeries:
        poly: dict = {}
        for c, exps in terms:
            poly[exps] = poly.get(exps, FieldElement()) + c
        return PSeries(self.dim, self.chart, {0: poly})

    def perturbation(self) -> PSeries:
        return self._series(self.terms)

    def unperturbed(self) -> PSeries:
        if self.h0_mode is H0Mode.EXPLICIT:
            return self._series(self.h0_terms)
        return self.context().h0(self.chart)


_KEY = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*")
_INT = re.compile(r"[+-]?\d+$")


def format_coefficient(c: FieldElement) -> str:
    return format_rational(c.to_rational()) if c.is_rational() else f"({c})"


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _parse_coefficient(text: str, lineno: int, col: int) -> FieldElement:
    s = text.strip()
    try:
        if s.startswith("("):
            if not s.endswith(")"):
                raise SpecError("unbalanced parenthesis in coefficient", lineno, col)
            return FieldElement.parse(s)
        return FieldElement(as_rational(s))
    except SpecError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"non-rational coefficient {s!r} ({exc})", lineno, col) from None


def _parse_monomial(text: str, dim: int, chart: Chart, lineno: int, col: int) -> tuple[int, ...]:
    exps = [0] * (2 * dim)
    stripped = text.strip()
    if stripped == "1":
        return tuple(exps)
    if not stripped:
        raise SpecError("empty monomial", lineno, col)
    lo, hi = ("q", "p") if chart is Chart.PQ else ("xi", "eta")
    pos = 0
    for tok in stripped.split():
        pos = text.index(tok, pos)
        tcol = col + pos
        m = re.fullmatch(r"([A-Za-z]+)(\d+)(?:\^(.*))?", tok)
        if m is None:
            raise SpecError(f"malformed factor {tok!r}", lineno, tcol)
        name, idx, exp = m.group(1), int(m.group(2)), m.group(3)
        if name not in (lo, hi):
            raise SpecError(f"unknown variable {name}{idx} for chart {chart.value}", lineno, tcol)
        if not 1 <= idx <= dim:
            raise SpecError(f"variable {name}{idx} exceeds dimension {dim}", lineno, tcol)
        if exp is None:
            e = 1
        elif re.fullmatch(r"\d+", exp):
            e = int(exp)
        else:
            ecol = tcol + tok.index("^") + 1
            raise SpecError(f"exponent must be a non-negative integer, got {exp!r}", lineno, ecol)
        exps[(idx - 1) if name == lo else (dim + idx - 1)] += e
        pos += len(tok)
    return tuple(exps)


def parse_term(text: str, dim: int, chart: Chart, lineno: int = 0, col: int = 1) -> Term:
    """Parse ``<coefficient> * <monomial>``."""
    s = text
    if s.lstrip().startswith("("):
        close = s.find(")")
        if close < 0:
            raise SpecError("unbalanced parenthesis in coefficient", lineno, col)
        rest = s[close + 1:]
        star = rest.find("*")
        if star < 0 or rest[:star].strip():
            raise SpecError("expected '*' after coefficient", lineno, col + close + 1)
        split = close + 1 + star
    else:
        split = s.find("*")
        if split < 0:
            raise SpecError("expected '<coefficient> * <monomial>'", lineno, col)
    coeff = _parse_coefficient(s[:split], lineno, col)
    mono = _parse_monomial(s[split + 1:], dim, chart, lineno, col + split + 1)
    return coeff, mono


def _parse_omega(text: str, lineno: int, col: int) -> tuple[mpq, ...]:
    s = text.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise SpecError("unterminated omega list", lineno, col)
        s = s[1:-1]
    items = [x for x in re.split(r"[,\s]+", s.strip()) if x]
    if not items:
        raise SpecError("omega needs at least one frequency", lineno, col)
    out = []
    for item in items:
        try:
            out.append(as_rational(item))
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"non-rational frequency {item!r}", lineno, col + text.index(item)) from None
    return tuple(out)


def parse_spec(text: str) -> ProblemSpec:
    """Parse a problem file; errors are :class:`SpecError` with line and column."""
    scalars: dict[str, tuple[str, int, int]] = {}
    term_lines: list[tuple[str, int, int]] = []
    h0_lines: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _KEY.match(line)
        if m is None:
            raise SpecError("expected 'key = value'", lineno, len(line) - len(line.lstrip()) + 1)
        key, value, vcol = m.group(1), line[m.end():], m.end() + 1
        if key == "term":
            term_lines.append((value, lineno, vcol))
        elif key == "h0":
            h0_lines.append((value, lineno, vcol))
        elif key in ("dim", "omega", "chart", "H0", "order"):
            if key in scalars:
                raise SpecError(f"duplicate key {key!r}", lineno, m.start(1) + 1)
            scalars[key] = (value, lineno, vcol)
        else:
            raise SpecError(f"unknown key {key!r}", lineno, m.start(1) + 1)

    if "dim" not in scalars:
        raise SpecError("missing 'dim'")
    value, ln, col = scalars["dim"]
    if not _INT.match(value.strip()) or int(value) < 1:
        raise SpecError(f"dim must be a positive integer, got {value.strip()!r}", ln, col)
    dim = int(value)

    if "omega" in scalars:
        value, ln, col = scalars["omega"]
        omega = _parse_omega(value, ln, col)
        if len(omega) != dim:
            raise SpecError(f"omega has {len(omega)} entries, dim is {dim}", ln, col)
    else:
        omega = tuple(mpq(1) for _ in range(dim))

    chart = Chart.PQ
    if "chart" in scalars:
        value, ln, col = scalars["chart"]
        try:
            chart = Chart(value.strip())
        except ValueError:
            raise SpecError(f"unknown chart {value.strip()!r} (use pq or xieta)", ln, col) from None

    mode = H0Mode.AUTO_DIAGONAL
    if "H0" in scalars:
        value, ln, col = scalars["H0"]
        try:
            mode = H0Mode(value.strip())
        except ValueError:
            raise SpecError(f"H0 must be 'auto' or 'explicit', got {value.strip()!r}", ln, col) from None
    if mode is H0Mode.AUTO_DIAGONAL and h0_lines:
        raise SpecError("h0 lines need 'H0 = explicit'", h0_lines[0][1], 1)
    if mode is H0Mode.EXPLICIT and not h0_lines:
        raise SpecError("'H0 = explicit' needs at least one h0 line", scalars["H0"][1], 1)

    order = None
    if "order" in scalars:
        value, ln, col = scalars["order"]
        if not _INT.match(value.strip()) or int(value) < 0:
            raise SpecError(f"order must be a non-negative integer, got {value.strip()!r}", ln, col)
        order = int(value)

    terms = tuple(parse_term(v, dim, chart, ln, col) for v, ln, col in term_lines)
    h0_terms = tuple(parse_term(v, dim, chart, ln, col) for v, ln, col in h0_lines)
    return ProblemSpec(dim, omega, chart, terms, mode, h0_terms, order)


def emit_spec(spec: ProblemSpec) -> str:
    """Canonical problem-file text; ``parse_spec(emit_spec(s)) == s``."""
    lines = [
        f"dim = {spec.dim}",
        "omega = [" + ", ".join(format_rational(w) for w in spec.omega) + "]",
        f"chart = {spec.chart.value}",
        f"H0 = {spec.h0_mode.value}",
    ]
    for c, exps in spec.h0_terms:
        lines.append(f"h0 = {format_coefficient(c)} * {format_monomial(exps, spec.chart)}")
    for c, exps in spec.terms:
        lines.append(f"term = {format_coefficient(c)} * {format_monomial(exps, spec.chart)}")
    if spec.order is not None:
        lines.append(f"order = {spec.order}")
    return "\n".join(lines) + "\n"

"""Truncated power series in the perturbation parameter with polynomial coefficients.

A :class:`PSeries` is ``sum_n alpha**n F_n(x)`` where every ``F_n`` is a sparse
polynomial in ``2d`` phase-space variables with coefficients in Q(i, sqrt 2).
Variables live in one of two charts: the real canonical chart ``(q, p)`` or the
complex Birkhoff chart ``(xi, eta)`` with ``q = (xi + i eta)/sqrt 2`` and
``p = i (xi - i eta)/sqrt 2``.  Both charts are canonical, so the same bracket
formula serves either one.

Series are immutable; every operation returns a new series.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from gmpy2 import mpq

from . import _poly
from .field import FieldElement, ONE, ZERO, as_rational

__all__ = [
    "Chart",
    "Monomial",
    "PSeries",
    "ChartMismatchError",
    "add",
    "mul",
    "scale",
    "poisson_bracket",
    "to_chart",
]


class ChartMismatchError(ValueError):
    """Operands live in different charts or have different dimensions."""


class Chart(enum.Enum):
    PQ = "pq"
    XIETA = "xieta"

    def variable_names(self, d: int) -> list[str]:
        lo, hi = ("q", "p") if self is Chart.PQ else ("xi", "eta")
        return [f"{lo}{k + 1}" for k in range(d)] + [f"{hi}{k + 1}" for k in range(d)]


@dataclass(frozen=True, order=False)
class Monomial:
    """Exponent vector over ``2d`` variables tagged with its chart."""

    chart: Chart
    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if len(exps) % 2:
            raise ValueError("a monomial needs an even number (2d) of exponents")
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)

    @property
    def dim(self) -> int:
        return len(self.exponents) // 2

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def lower(self) -> tuple[int, ...]:
        """Exponents of ``q`` (or ``xi``)."""
        return self.exponents[: self.dim]

    @property
    def upper(self) -> tuple[int, ...]:
        """Exponents of ``p`` (or ``eta``)."""
        return self.exponents[self.dim:]

    def sort_key(self):
        return _poly.sort_key(self.exponents)

    def __lt__(self, other: "Monomial"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return format_monomial(self.exponents, self.chart)


def format_monomial(exps: tuple[int, ...], chart: Chart) -> str:
    names = chart.variable_names(len(exps) // 2)
    factors = []
    for name, e in zip(names, exps):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    return " ".join(factors) if factors else "1"


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PSeries:
    """Immutable truncated series ``sum_n alpha**n F_n``.

    Parameters
    ----------
    dim : int
        Number of degrees of freedom ``d``.
    chart : Chart
        Chart of every monomial in the series.
    terms : mapping, optional
        ``{alpha_degree: {exponent_tuple: coefficient}}``.  Coefficients may be
        anything :meth:`FieldElement.coerce` accepts; zeros are dropped.
    order : int or None
        Truncation order ``N``: only ``alpha**n`` with ``n <= N`` are kept.
        ``None`` means the series is exact (no truncation).
    """

    __slots__ = ("_dim", "_chart", "_order", "_terms")

    def __init__(self, dim: int, chart: Chart, terms: Mapping | None = None, order: int | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        if order is not None and order < 0:
            raise ValueError("truncation order must be non-negative")
        canon: dict[int, dict] = {}
        for n, poly in (terms or {}).items():
            n = int(n)
            if n < 0:
                raise ValueError("negative alpha degree")
            if order is not None and n > order:
                continue
            clean = {}
            for exps, coeff in poly.items():
                if isinstance(exps, Monomial):
                    if exps.chart is not chart:
                        raise ChartMismatchError(f"monomial chart {exps.chart} in {chart} series")
                    exps = exps.exponents
                exps = tuple(int(e) for e in exps)
                if len(exps) != 2 * dim:
                    raise ChartMismatchError(f"monomial {exps} does not have {2 * dim} exponents")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = FieldElement.coerce(coeff)
                if c:
                    prev = clean.get(exps)
                    clean[exps] = c if prev is None else prev + c
            clean = {m: c for m, c in clean.items() if c}
            if clean:
                canon[n] = clean
        self._dim, self._chart, self._order, self._terms = dim, chart, order, canon

    @classmethod
    def _make(cls, dim, chart, terms, order) -> "PSeries":
        # trusted constructor: terms already canonical, zero polys removed
        obj = object.__new__(cls)
        obj._dim, obj._chart, obj._order = dim, chart, order
        obj._terms = {n: p for n, p in terms.items() if p and (order is None or n <= order)}
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, dim: int, chart: Chart = Chart.XIETA, order: int | None = None) -> "PSeries":
        return cls._make(dim, chart, {}, order)

    @classmethod
    def from_polynomial(cls, dim: int, chart: Chart, poly: Mapping, alpha: int = 0,
                        order: int | None = None) -> "PSeries":
        return cls(dim, chart, {alpha: poly}, order)

    @classmethod
    def monomial(cls, dim: int, chart: Chart, exponents, coeff=1, alpha: int = 0,
                 order: int | None = None) -> "PSeries":
        return cls(dim, chart, {alpha: {tuple(exponents): coeff}}, order)

    @classmethod
    def constant(cls, dim: int, chart: Chart, value=1, order: int | None = None) -> "PSeries":
        return cls(dim, chart, {0: {(0,) * (2 * dim): value}}, order)

    @classmethod
    def variable(cls, dim: int, chart: Chart, name: str) -> "PSeries":
        """A single canonical variable such as ``'q1'`` or ``'eta2'``."""
        names = chart.variable_names(dim)
        if name not in names:
            raise ValueError(f"unknown variable {name!r} for chart {chart.value}, d={dim}")
        exps = [0] * (2 * dim)
        exps[names.index(name)] = 1
        return cls.monomial(dim, chart, exps)

    # -- accessors -------------------------------------------------------
    @property
    def dim(self) -> int:
        return self._dim

    @property
    def chart(self) -> Chart:
        return self._chart

    @property
    def order(self) -> int | None:
        return self._order

    def alpha_degrees(self) -> list[int]:
        return sorted(self._terms)

    def min_alpha_degree(self) -> int | None:
        return min(self._terms) if self._terms else None

    def max_alpha_degree(self) -> int | None:
        return max(self._terms) if self._terms else None

    def poly(self, n: int) -> Mapping[tuple, FieldElement]:
        """Read-only view of the ``alpha**n`` coefficient polynomial."""
        return MappingProxyType(self._terms.get(n, {}))

    def coefficient(self, n: int) -> "PSeries":
        """The ``alpha**n`` coefficient as an exact alpha-independent series."""
        return PSeries._make(self._dim, self._chart, {0: self._terms.get(n, {})}, None)

    def coeff(self, exponents, alpha: int = 0) -> FieldElement:
        return self._terms.get(alpha, {}).get(tuple(exponents), ZERO)

    def terms(self) -> Iterator[tuple[int, Monomial, FieldElement]]:
        """Yield ``(alpha_degree, monomial, coefficient)`` in canonical order."""
        for n in sorted(self._terms):
            poly = self._terms[n]
            for exps in sorted(poly, key=_poly.sort_key):
                yield n, Monomial(self._chart, exps), poly[exps]

    def num_terms(self) -> int:
        return sum(len(p) for p in self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def is_alpha_independent(self) -> bool:
        return all(n == 0 for n in self._terms)

    def total_degrees(self, n: int) -> set[int]:
        return {sum(m) for m in self._terms.get(n, {})}

    # -- structural transforms -----------------------------------------
    def truncate(self, order: int | None) -> "PSeries":
        return PSeries._make(self._dim, self._chart, self._terms, _min_order(self._order, order))

    def with_order(self, order: int | None) -> "PSeries":
        """Re-declare the truncation order (dropping terms above it)."""
        return PSeries._make(self._dim, self._chart, self._terms, order)

    def shift(self, k: int) -> "PSeries":
        """Multiply by ``alpha**k`` (``k`` may be negative if no terms fall below zero)."""
        if self._terms and min(self._terms) + k < 0:
            raise ValueError("shift would create negative alpha powers")
        order = None if self._order is None else self._order + k
        if order is not None and order < 0:
            raise ValueError("shift would make the truncation order negative")
        return PSeries._make(self._dim, self._chart, {n + k: p for n, p in self._terms.items()}, order)

    def alpha_derivative(self) -> "PSeries":
        order = None if self._order is None else max(self._order - 1, 0)
        terms = {n - 1: _poly.scale(p, mpq(n)) for n, p in self._terms.items() if n >= 1}
        return PSeries._make(self._dim, self._chart, terms, order)

    def alpha_integral(self) -> "PSeries":
        """Term-wise ``int_0^alpha``: ``alpha**n -> alpha**(n+1)/(n+1)``."""
        order = None if self._order is None else self._order + 1
        terms = {n + 1: _poly.scale(p, mpq(1, n + 1)) for n, p in self._terms.items()}
        return PSeries._make(self._dim, self._chart, terms, order)

    def map_polys(self, fn) -> "PSeries":
        """Apply a linear polynomial map coefficient-wise."""
        return PSeries._make(self._dim, self._chart,
                             {n: fn(p) for n, p in self._terms.items()}, self._order)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "PSeries"):
        if not isinstance(other, PSeries):
            raise TypeError(f"expected PSeries, got {type(other).__name__}")
        if other._chart is not self._chart:
            raise ChartMismatchError(f"chart mismatch: {self._chart.value} vs {other._chart.value}")
        if other._dim != self._dim:
            raise ChartMismatchError(f"dimension mismatch: {self._dim} vs {other._dim}")

    def __add__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        self._check(other)
        order = _min_order(self._order, other._order)
        terms = {}
        for n in set(self._terms) | set(other._terms):
            if order is not None and n > order:
                continue
            terms[n] = _poly.add(self._terms.get(n, {}), other._terms.get(n, {}))
        return PSeries._make(self._dim, self._chart, terms, order)

    def __neg__(self):
        return self.map_polys(_poly.neg)

    def __sub__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PSeries):
            self._check(other)
            order = _min_order(self._order, other._order)
            terms: dict[int, dict] = {}
            for i, p in self._terms.items():
                for j, q in other._terms.items():
                    if order is not None and i + j > order:
                        continue
                    _poly.add_into(terms.setdefault(i + j, {}), _poly.mul(p, q))
            return PSeries._make(self._dim, self._chart, terms, order)
        try:
            c = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return self.map_polys(lambda p: _poly.scale(p, c))

    def __rmul__(self, other):
        if isinstance(other, PSeries):
            return other.__mul__(self)
        return self.__mul__(other)

    def __truediv__(self, other):
        c = FieldElement.coerce(other)
        return self * c.inverse()

    def bracket(self, other: "PSeries") -> "PSeries":
        return poisson_bracket(self, other)

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return (self._dim == other._dim and self._chart is other._chart
                and self._order == other._order and self._terms == other._terms)

    def __hash__(self):
        return hash((self._dim, self._chart, self._order, self.num_terms()))

    def agrees_with(self, other: "PSeries", through: int | None = None) -> bool:
        """Exact agreement of all ``alpha**n`` coefficients with ``n <= through``."""
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        return all(self._terms.get(n, {}) == other._terms.get(n, {})
                   for n in keys if through is None or n <= through)

    def first_difference(self, other: "PSeries", through: int | None = None) -> int | None:
        """Lowest alpha degree where the two series differ, or ``None``."""
        self._check(other)
        for n in sorted(set(self._terms) | set(other._terms)):
            if through is not None and n > through:
                break
            if self._terms.get(n, {}) != other._terms.get(n, {}):
                return n
        return None

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for n, mono, coeff in self.terms():
            c = str(coeff)
            if len(c.split()) > 1:
                c = f"({c})"
            a = "" if n == 0 else (" alpha" if n == 1 else f" alpha^{n}")
            out.append(f"{c}{a} * {mono}")
        return " + ".join(out)

    def __repr__(self):
        return f"PSeries(dim={self._dim}, chart={self._chart.value}, order={self._order}, terms={self.num_terms()})"


# -- free functions mirroring the module contract ---------------------------

def add(F: PSeries, G: PSeries) -> PSeries:
    return F + G


def mul(F: PSeries, G: PSeries) -> PSeries:
    return F * G


def scale(F: PSeries, c) -> PSeries:
    return F * FieldElement.coerce(c)


def poisson_bracket(F: PSeries, G: PSeries) -> PSeries:
    """``[F, G] = sum_k dF/dq_k dG/dp_k - dF/dp_k dG/dq_k``.

    In the Birkhoff chart ``(xi_k, eta_k)`` plays the role of ``(q_k, p_k)``;
    the chart change is canonical so the bracket has the same form.
    """
    F._check(G)
    d = F.dim
    order = _min_order(F.order, G.order)
    terms: dict[int, dict] = {}
    for i, p in F._terms.items():
        for j, q in G._terms.items():
            if order is not None and i + j > order:
                continue
            _poly.add_into(terms.setdefault(i + j, {}), _poly.bracket(p, q, d))
    return PSeries._make(d, F.chart, terms, order)


# -- chart change -----------------------------------------------------------

@lru_cache(maxsize=None)
def _inv_sqrt2_power(k: int) -> FieldElement:
    # (1/sqrt 2)**k = 2**(-k/2) or sqrt2 * 2**(-(k+1)/2)
    if k % 2 == 0:
        return FieldElement(mpq(1, 2 ** (k // 2)))
    return FieldElement(0, mpq(1, 2 ** ((k + 1) // 2)))


_I_POWERS = (ONE, FieldElement(0, 0, 1), FieldElement(-1), FieldElement(0, 0, -1))


@lru_cache(maxsize=None)
def _pair_expansion(a: int, b: int, to_xieta: bool) -> tuple[tuple[int, int, FieldElement], ...]:
    """Expand ``x^a y^b`` of one degree of freedom in the other chart.

    pq -> xieta: ``q = (xi + i eta)/r2``, ``p = (i xi + eta)/r2``.
    xieta -> pq: ``xi = (q - i p)/r2``, ``eta = (-i q + p)/r2``.
    Returns tuples ``(lower_exp, upper_exp, coeff)``.
    """
    sign = 1 if to_xieta else 3  # i or -i
    acc: dict[tuple[int, int], FieldElement] = {}
    pref = _inv_sqrt2_power(a + b)
    for j in range(a + 1):
        for l in range(b + 1):
            # x^a contributes C(a,j) lo^(a-j) (s*i*up)^j, y^b contributes C(b,l) (s*i*lo)^(b-l) up^l
            ipow = (sign * (j + b - l)) % 4
            coeff = (_I_POWERS[ipow] * (comb(a, j) * comb(b, l))) * pref
            key = (a - j + b - l, j + l)
            acc[key] = acc[key] + coeff if key in acc else coeff
    return tuple((lo, up, c) for (lo, up), c in acc.items() if c)


def _convert_poly(poly: dict, d: int, to_xieta: bool) -> dict:
    out: dict = {}
    for exps, coeff in poly.items():
        per_dof = [_pair_expansion(exps[k], exps[d + k], to_xieta) for k in range(d)]
        for choice in itertools.product(*per_dof):
            c = coeff
            mono = [0] * (2 * d)
            for k, (lo, up, ck) in enumerate(choice):
                mono[k], mono[d + k] = lo, up
                c = c * ck
            key = tuple(mono)
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
    return {m: c for m, c in out.items() if c}


def to_chart(F: PSeries, target: Chart) -> PSeries:
    """Re-express ``F`` in the ``target`` chart (identity if already there)."""
    if F.chart is target:
        return F
    to_xieta = target is Chart.XIETA
    terms = {n: _convert_poly(p, F.dim, to_xieta) for n, p in F._terms.items()}
    return PSeries._make(F.dim, target, terms, F.order)


def from_term_list(dim: int, chart: Chart, items: Iterable[tuple[int, tuple, object]],
                   order: int | None = None) -> PSeries:
    """Build a series from ``(alpha_degree, exponents, coeff)`` triples."""
    terms: dict[int, dict] = {}
    for n, exps, coeff in items:
        poly = terms.setdefault(int(n), {})
        exps = tuple(exps)
        c = FieldElement.coerce(coeff)
        poly[exps] = poly[exps] + c if exps in poly else c
    return PSeries(dim, chart, terms, order)


def rational(value) -> FieldElement:
    return FieldElement(as_rational(value))

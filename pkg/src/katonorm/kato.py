"""Truncated Kato expansion of the perturbed averaging and integrating operators.

Everything is expressed through the operator words

    Z_n^m = (-1)**(n+1) * sum over weak compositions p of m into n+1 parts of
            Sr(p_{n+1}) L Sr(p_n) ... L Sr(p_1),

with ``L = L_{Hi}``, ``Sr(0) = -P0`` and ``Sr(k) = S0**k``.  They obey
``Z_{n+1}^m = sum_i Z_0^{m-i} L Z_n^i`` so for a fixed seed function a whole
table of them is built row by row with one bracket per entry.  From the table

    P_H = sum_n alpha^n Z_n^n,   S_H = -sum_n alpha^n Z_n^{n+1},
    D_H = sum_{n>=1} alpha^n Z_n^{n-1},

and the normalizing generator is ``G = -S_H Hi = sum_n alpha^n Z_n^{n+1} Hi``.
Operators are never materialized; each word acts on a concrete series.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

from . import _poly
from .liouville import BirkhoffContext, liouville, project_P0, s0_poly, solve_S0
from .series import Chart, ChartMismatchError, PSeries

__all__ = [
    "WeakComposition",
    "ZTable",
    "enumerate_weak_compositions",
    "z_apply",
    "square_generator",
    "apply_sr",
    "apply_perturbed_P",
    "apply_perturbed_S",
    "apply_perturbed_D",
    "apply_projector_derivative",
    "brute_force_word_sum",
]


@dataclass(frozen=True)
class WeakComposition:
    """Ordered tuple of ``n + 1`` non-negative parts with a fixed sum."""

    parts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]


def enumerate_weak_compositions(n: int, total: int) -> list[WeakComposition]:
    """All length-``n+1`` non-negative sequences summing to ``total``, lexicographically."""
    if n < 0 or total < 0:
        raise ValueError("n and total must be non-negative")
    out = []
    # stars and bars: choose positions of the n bars among total + n slots
    for bars in itertools.combinations(range(total + n), n):
        parts, prev = [], -1
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(total + n - prev - 1)
        out.append(WeakComposition(tuple(parts)))
    out.sort(key=lambda w: w.parts)
    assert len(out) == comb(total + n, n)
    return out


def _hi_poly(Hi: PSeries) -> dict:
    if Hi.chart is not Chart.XIETA:
        raise ChartMismatchError("the perturbation must be in the Birkhoff (xieta) chart")
    if not Hi.is_alpha_independent():
        raise ValueError("the perturbation Hi must not depend on alpha")
    return dict(Hi.poly(0))


class ZTable:
    """Rows ``F_n^m = Z_n^m(seed)`` for ``0 <= m <= m_max``, built lazily.

    Row ``n + 1`` needs only the brackets ``L_{Hi} F_n^i`` of row ``n``; those
    are cached alongside the rows.  Row extension is serialized by a lock, so a
    table may be shared between threads.
    """

    def __init__(self, ctx: BirkhoffContext, hi: dict, seed: dict, m_max: int):
        if m_max < 0:
            raise ValueError("m_max must be non-negative")
        self.ctx, self.hi, self.m_max = ctx, hi, m_max
        self.d = ctx.d
        first = [{m: c for m, c in seed.items() if not ctx.frequency(m)}]
        s_pow = seed
        for _ in range(m_max):
            s_pow = s0_poly(ctx, s_pow)
            first.append(_poly.neg(s_pow))
        self._rows: list[list[dict]] = [first]
        self._brackets: list[list[dict]] = []
        self._lock = threading.Lock()

    @classmethod
    def build(cls, ctx: BirkhoffContext, Hi: PSeries, seed: PSeries, m_max: int) -> "ZTable":
        if seed.chart is not Chart.XIETA:
            raise ChartMismatchError("seed must be in the Birkhoff (xieta) chart")
        if not seed.is_alpha_independent():
            raise ValueError("a Z table seed must not depend on alpha")
        return cls(ctx, _hi_poly(Hi), dict(seed.poly(0)), m_max)

    def _extend(self):
        prev = self._rows[-1]
        lam = self.ctx.frequency
        hi, d = self.hi, self.d
        brackets = [_poly.bracket(f, hi, d) for f in prev]
        row: list[dict] = [dict() for _ in range(self.m_max + 1)]
        # Z_0^{m-i} applied to L F_n^i: P0 when m == i, -S0^{m-i} when m > i
        for i, lf in enumerate(brackets):
            for mono, c in lf.items():
                w = lam(mono)
                if not w:
                    acc = row[i]
                    old = acc.get(mono)
                    acc[mono] = c if old is None else old + c
                    continue
                inv = 1 / w
                term = c
                for m in range(i + 1, self.m_max + 1):
                    # multiply by 1/(i w) = -i/w
                    term = (-term.mul_i()).scale(inv)
                    acc = row[m]
                    old = acc.get(mono)
                    val = -term
                    acc[mono] = val if old is None else old + val
        self._brackets.append(brackets)
        self._rows.append([{k: v for k, v in r.items() if v} for r in row])

    def row(self, n: int) -> list[dict]:
        if n < 0:
            raise ValueError("row index must be non-negative")
        if n >= len(self._rows):
            with self._lock:
                while n >= len(self._rows):
                    self._extend()
        return self._rows[n]

    def entry_poly(self, n: int, m: int) -> dict:
        if n < 0 or m < 0:
            return {}
        if m > self.m_max:
            raise IndexError(f"column {m} exceeds table width {self.m_max}")
        return self.row(n)[m]

    def entry(self, n: int, m: int) -> PSeries:
        return PSeries._make(self.d, Chart.XIETA, {0: self.entry_poly(n, m)}, None)


def z_apply(ctx: BirkhoffContext, Hi: PSeries, n: int, m: int, seed: PSeries) -> PSeries:
    """``Z_n^m`` applied to ``seed`` (zero for negative indices)."""
    if seed.chart is not Chart.XIETA:
        raise ChartMismatchError("seed must be in the Birkhoff (xieta) chart")
    hi = _hi_poly(Hi)
    if n < 0 or m < 0:
        return PSeries.zero(seed.dim, Chart.XIETA, seed.order)
    terms = {j: ZTable(ctx, hi, dict(p), m).entry_poly(n, m) for j, p in seed._terms.items()}
    return PSeries._make(seed.dim, Chart.XIETA, terms, seed.order)


def square_generator(ctx: BirkhoffContext, Hi: PSeries, N: int) -> PSeries:
    """``G^[N] = -S_H^[N] Hi = sum_{n<=N} alpha^n Z_n^{n+1} Hi`` by the square table."""
    if N < 0:
        raise ValueError("order must be non-negative")
    table = ZTable.build(ctx, Hi, Hi, N + 1)
    terms = {n: table.entry_poly(n, n + 1) for n in range(N + 1)}
    return PSeries._make(Hi.dim, Chart.XIETA, terms, N)


def apply_sr(ctx: BirkhoffContext, Hi: PSeries, N: int, k: int, F: PSeries) -> PSeries:
    """Truncated Laurent coefficient ``Sr^[N](k) F = -sum_n alpha^n Z_n^{n+k} F``.

    ``F`` may itself be a series in alpha; the result is truncated at ``N``
    (or at ``F.order`` if that is smaller).
    """
    if N < 0:
        raise ValueError("order must be non-negative")
    if F.chart is not Chart.XIETA:
        raise ChartMismatchError("argument must be in the Birkhoff (xieta) chart")
    hi = _hi_poly(Hi)
    order = N if F.order is None else min(N, F.order)
    terms: dict[int, dict] = {}
    for j, fj in F._terms.items():
        if j > order:
            continue
        top = order - j
        width = top + k
        if width < 0:
            continue
        table = ZTable(ctx, hi, dict(fj), width)
        for n in range(top + 1):
            if n + k < 0:
                continue
            _poly.add_into(terms.setdefault(n + j, {}), _poly.neg(table.entry_poly(n, n + k)))
    return PSeries._make(F.dim, Chart.XIETA, terms, order)


def apply_perturbed_P(ctx: BirkhoffContext, Hi: PSeries, N: int, F: PSeries) -> PSeries:
    """``P_H^[N] F``."""
    return -apply_sr(ctx, Hi, N, 0, F)


def apply_perturbed_S(ctx: BirkhoffContext, Hi: PSeries, N: int, F: PSeries) -> PSeries:
    """``S_H^[N] F``."""
    return apply_sr(ctx, Hi, N, 1, F)


def apply_perturbed_D(ctx: BirkhoffContext, Hi: PSeries, N: int, F: PSeries) -> PSeries:
    """``D_H^[N] F``."""
    return -apply_sr(ctx, Hi, N, -1, F)


def apply_projector_derivative(ctx: BirkhoffContext, Hi: PSeries, N: int, F: PSeries) -> PSeries:
    """``(d P_H / d alpha)^[N] F = sum_{k<=N} (k+1) alpha^k Z_{k+1}^{k+1} F``."""
    if F.chart is not Chart.XIETA:
        raise ChartMismatchError("argument must be in the Birkhoff (xieta) chart")
    hi = _hi_poly(Hi)
    order = N if F.order is None else min(N, F.order)
    terms: dict[int, dict] = {}
    for j, fj in F._terms.items():
        if j > order:
            continue
        top = order - j
        table = ZTable(ctx, hi, dict(fj), top + 1)
        for n in range(top + 1):
            _poly.add_into(terms.setdefault(n + j, {}),
                           _poly.scale(table.entry_poly(n + 1, n + 1), mpq(n + 1)))
    return PSeries._make(F.dim, Chart.XIETA, terms, order)


def brute_force_word_sum(ctx: BirkhoffContext, Hi: PSeries, n: int, m: int, seed: PSeries) -> PSeries:
    """Literal evaluation of ``Z_n^m seed`` word by word (exponential cost; for tests).

    Each weak composition ``(p_1, ..., p_{n+1})`` of ``m`` yields the word
    ``Sr(p_{n+1}) L ... L Sr(p_1)`` applied right to left.
    """
    if seed.chart is not Chart.XIETA:
        raise ChartMismatchError("seed must be in the Birkhoff (xieta) chart")
    _hi_poly(Hi)
    total = PSeries.zero(seed.dim, Chart.XIETA, seed.order)
    if n < 0 or m < 0:
        return total

    def sr(power: int, X: PSeries) -> PSeries:
        return -project_P0(ctx, X) if power == 0 else solve_S0(ctx, X, power)

    for comp in enumerate_weak_compositions(n, m):
        X = sr(comp[0], seed)
        for p in comp.parts[1:]:
            X = sr(p, liouville(Hi, X))
        total = total + X
    return total if n % 2 else -total

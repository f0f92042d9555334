"""Deprit exponents, the Deprit triangle normalization and Dragt-Finn products.

Conventions: ``L_G F = [F, G]``.  The forward exponent ``U = sum alpha^n U_n``
solves ``dU/dalpha = L_G U`` and the inverse ``V = U^-1`` solves
``dV/dalpha = -V L_G``; the normalized Hamiltonian is ``V H``.

On a fixed function ``X`` the forward exponent is cheap: ``u_0 = X`` and
``u_n = (1/n) sum_k L_{G_{n-k-1}} u_k``.  The inverse on an alpha-series ``F``
is obtained from ``U W = F`` order by order,
``W_n = F_n - sum_{j<n} (U W_j)_{n-j}``, which keeps the cost cubic in the
order instead of the exponential cost of unrolling the ``V`` recursion.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from gmpy2 import mpq

from . import _poly
from .liouville import BirkhoffContext, p0_poly, s0_poly
from .series import Chart, ChartMismatchError, PSeries, to_chart

__all__ = [
    "Style",
    "Direction",
    "GeneratorSeries",
    "deprit_apply",
    "deprit_normalize",
    "dragt_finn_normalize",
    "dragt_finn_apply",
    "lie_exponential",
]


class Style(enum.Enum):
    KATO_F0 = "kato"
    NONSECULAR = "nonsecular"


class Direction(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


@dataclass(frozen=True)
class GeneratorSeries:
    """Generator ``G = sum_n alpha^n G_n`` together with its normalization style."""

    series: PSeries
    style: Style = Style.KATO_F0

    @property
    def order(self) -> int | None:
        return self.series.order

    @property
    def coefficients(self) -> list[PSeries]:
        top = self.series.order if self.series.order is not None else (self.series.max_alpha_degree() or 0)
        return [self.series.coefficient(n) for n in range(top + 1)]

    def coefficient(self, n: int) -> PSeries:
        return self.series.coefficient(n)

    def is_nonsecular(self, ctx: BirkhoffContext) -> bool:
        return all(not p0_poly(ctx, dict(self.series.poly(n))) for n in self.series.alpha_degrees())


class _ForwardCache:
    """Lazily extended ``[U_0 X, U_1 X, ...]`` for one fixed function ``X``."""

    __slots__ = ("u", "d")

    def __init__(self, seed: dict, d: int):
        self.u = [seed]
        self.d = d

    def extend_to(self, n: int, gens: list[dict]):
        d, u = self.d, self.u
        while len(u) <= n:
            m = len(u)
            acc: dict = {}
            for k in range(m):
                g = gens[m - k - 1] if m - k - 1 < len(gens) else None
                if g and u[k]:
                    _poly.add_into(acc, _poly.bracket(u[k], g, d))
            u.append(_poly.scale(acc, mpq(1, m)) if acc else {})
        return u[n]


def _gen_polys(G) -> tuple[list[dict], PSeries]:
    series = G.series if isinstance(G, GeneratorSeries) else G
    top = series.max_alpha_degree()
    gens = [dict(series.poly(n)) for n in range((top or 0) + 1)] if top is not None else []
    return gens, series


def _forward(gens: list[dict], F: dict[int, dict], N: int, d: int) -> dict[int, dict]:
    out: dict[int, dict] = {}
    for j, fj in F.items():
        if j > N:
            continue
        cache = _ForwardCache(fj, d)
        for k in range(N - j + 1):
            _poly.add_into(out.setdefault(j + k, {}), cache.extend_to(k, gens))
    return out


def _inverse(gens: list[dict], F: dict[int, dict], N: int, d: int) -> dict[int, dict]:
    W: list[dict] = []
    caches: list[_ForwardCache] = []
    for n in range(N + 1):
        acc = dict(F.get(n, {}))
        for j in range(n):
            _poly.add_into(acc, _poly.neg(caches[j].extend_to(n - j, gens)))
        acc = {m: c for m, c in acc.items() if c}
        W.append(acc)
        caches.append(_ForwardCache(acc, d))
    return {n: w for n, w in enumerate(W) if w}


def deprit_apply(G, F: PSeries, N: int, direction: Direction = Direction.FORWARD) -> PSeries:
    """Apply the forward or inverse Deprit exponent of ``G`` to ``F`` through ``alpha^N``.

    ``G`` is a :class:`GeneratorSeries` or a bare :class:`PSeries` in alpha.
    """
    if N < 0:
        raise ValueError("order must be non-negative")
    gens, series = _gen_polys(G)
    series._check(F)
    order = N if F.order is None else min(N, F.order)
    fn = _forward if direction is Direction.FORWARD else _inverse
    return PSeries._make(F.dim, F.chart, fn(gens, F._terms, order, F.dim), order)


def _prepare(ctx: BirkhoffContext, H0: PSeries, Hi: PSeries) -> tuple[dict, dict]:
    ctx.check_diagonal(H0)
    Hi = to_chart(Hi, Chart.XIETA)
    if not Hi.is_alpha_independent():
        raise ValueError("the perturbation Hi must not depend on alpha")
    if Hi.dim != ctx.d:
        raise ChartMismatchError("perturbation dimension does not match the context")
    return dict(ctx.h0().poly(0)), dict(Hi.poly(0))


def deprit_normalize(ctx: BirkhoffContext, H0: PSeries, Hi: PSeries, N: int,
                     style: Style = Style.NONSECULAR,
                     secular_parts: PSeries | None = None) -> tuple[GeneratorSeries, PSeries]:
    """Deprit's order-by-order normalization of ``H0 + alpha Hi``.

    At step ``n`` the transformed Hamiltonian coefficient is
    ``W_{n+1} = X + L_{H0} G_n / (n+1)`` where ``X`` collects everything already
    known.  The homological equation fixes ``(1 - P0) G_n = -(n+1) S0 X`` and
    leaves ``W_{n+1} = P0 X``.  The secular part of ``G_n`` is the style:
    zero for ``NONSECULAR``; for ``KATO_F0`` it is taken from the explicit
    generator ``-S_H Hi``, which makes the whole generator coincide with it.
    ``secular_parts`` overrides the style with arbitrary secular choices.

    Returns the generator through ``alpha^N`` (in the Birkhoff chart) and the
    normalized Hamiltonian through ``alpha^N``.
    """
    if N < 0:
        raise ValueError("order must be non-negative")
    h0, hi = _prepare(ctx, H0, Hi)
    d = ctx.d
    if secular_parts is None and style is Style.KATO_F0:
        from .kato import square_generator
        secular_parts = square_generator(ctx, PSeries(d, Chart.XIETA, {0: hi}), N)
    if secular_parts is not None and secular_parts.chart is not Chart.XIETA:
        secular_parts = to_chart(secular_parts, Chart.XIETA)

    F = {0: h0, 1: hi}
    W = [h0]
    caches = [_ForwardCache(h0, d)]
    gens: list[dict] = []
    for n in range(N + 1):
        # everything in W_{n+1} except the L_{G_n} W_0 / (n+1) term
        X = dict(F.get(n + 1, {}))
        for j in range(1, n + 1):
            _poly.add_into(X, _poly.neg(caches[j].extend_to(n + 1 - j, gens)))
        partial: dict = {}
        u0 = caches[0].u
        for k in range(1, n + 1):
            if gens[n - k] and u0[k]:
                _poly.add_into(partial, _poly.bracket(u0[k], gens[n - k], d))
        partial = _poly.scale(partial, mpq(1, n + 1))
        _poly.add_into(X, _poly.neg(partial))

        g = _poly.scale(s0_poly(ctx, X), mpq(-(n + 1)))
        if secular_parts is not None:
            _poly.add_into(g, p0_poly(ctx, dict(secular_parts.poly(n))))
        gens.append(g)
        u0.append(_poly.add(partial, _poly.scale(_poly.bracket(h0, g, d), mpq(1, n + 1))))
        w = p0_poly(ctx, X)
        W.append(w)
        caches.append(_ForwardCache(w, d))

    used_style = Style.NONSECULAR if secular_parts is None else Style.KATO_F0
    G = GeneratorSeries(PSeries._make(d, Chart.XIETA, {n: g for n, g in enumerate(gens) if g}, N), used_style)
    Ht = PSeries._make(d, Chart.XIETA, {n: w for n, w in enumerate(W[:N + 1]) if w}, N)
    return G, Ht


def lie_exponential(g: PSeries, power: int, F: PSeries, N: int, sign: int = 1) -> PSeries:
    """``exp(sign * alpha^power * L_g) F`` as a plain exponential series, through ``alpha^N``."""
    if power < 1:
        raise ValueError("the exponent must carry at least one power of alpha")
    g._check(F)
    gp = dict(g.poly(0)) if g.is_alpha_independent() else None
    if gp is None:
        raise ValueError("Dragt-Finn factor generators must not depend on alpha")
    order = N if F.order is None else min(N, F.order)
    return PSeries._make(F.dim, F.chart, _exp_terms(gp, power, F._terms, order, F.dim, sign), order)


def _exp_terms(g: dict, power: int, F: dict, N: int, d: int, sign: int) -> dict:
    out = {n: dict(p) for n, p in F.items() if n <= N}
    cur = dict(out)
    j = 0
    while cur and g:
        j += 1
        nxt = {}
        for n, p in cur.items():
            if n + power > N:
                continue
            b = _poly.bracket(p, g, d)
            if b:
                nxt[n + power] = _poly.scale(b, mpq(sign, j))
        cur = nxt
        for n, p in cur.items():
            _poly.add_into(out.setdefault(n, {}), p)
    return {n: p for n, p in out.items() if p}


def dragt_finn_normalize(ctx: BirkhoffContext, H0: PSeries, Hi: PSeries, N: int
                         ) -> tuple[list[PSeries], PSeries]:
    """Normalize by the product ``exp(-alpha^N L_{g_{N-1}}) ... exp(-alpha L_{g_0}) H``.

    The factor of order ``k`` is chosen after the previous ones are applied:
    with ``X`` the current ``alpha^k`` coefficient, ``g_{k-1} = -S0 X`` turns it
    into ``P0 X``.  Factor generators are nonsecular.
    """
    if N < 0:
        raise ValueError("order must be non-negative")
    h0, hi = _prepare(ctx, H0, Hi)
    d = ctx.d
    cur = {0: h0, 1: hi} if N >= 1 else {0: h0}
    factors: list[PSeries] = []
    for k in range(1, N + 1):
        g = _poly.neg(s0_poly(ctx, cur.get(k, {})))
        cur = _exp_terms(g, k, cur, N, d, -1)
        factors.append(PSeries._make(d, Chart.XIETA, {0: g}, None))
    return factors, PSeries._make(d, Chart.XIETA, cur, N)


def dragt_finn_apply(factors: list[PSeries], F: PSeries, N: int,
                     direction: Direction = Direction.FORWARD) -> PSeries:
    """Apply the Dragt-Finn product (``FORWARD``) or its inverse (``INVERSE``) to ``F``.

    ``INVERSE`` is the normalizing map ``exp(-alpha^n L_{g_{n-1}}) ... exp(-alpha L_{g_0})``;
    ``FORWARD`` is ``exp(alpha L_{g_0}) ... exp(alpha^n L_{g_{n-1}})``.
    """
    order = N if F.order is None else min(N, F.order)
    terms = {n: p for n, p in F._terms.items() if n <= order}
    seq = list(enumerate(factors, start=1))
    if direction is Direction.FORWARD:
        seq.reverse()
        sign = 1
    else:
        sign = -1
    for k, g in seq:
        F._check(g)
        terms = _exp_terms(dict(g.poly(0)), k, terms, order, F.dim, sign)
    return PSeries._make(F.dim, F.chart, terms, order)

"""Exact machine checks of the operator identities on seeded random polynomials.

Every check evaluates both sides of an identity on concrete functions and
records the difference.  A check passes only if the residual is identically
zero in every retained alpha order; there is no tolerance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .field import FieldElement
from .kato import (
    apply_perturbed_D,
    apply_perturbed_P,
    apply_perturbed_S,
    apply_projector_derivative,
    apply_sr,
    square_generator,
)
from .liouville import BirkhoffContext, liouville, project_P0, solve_S0
from .series import Chart, PSeries, poisson_bracket, to_chart

__all__ = [
    "IdentityCheck",
    "RandomPolyConfig",
    "random_polynomial",
    "random_series",
    "check_unperturbed_block",
    "check_truncated_block",
    "check_projector_transport",
    "run_suite",
]


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one identity evaluated on seeded random inputs."""

    name: str
    residual: PSeries
    seed: int
    order: int | None = None

    @property
    def passed(self) -> bool:
        return self.residual.is_zero()

    def line(self) -> str:
        order = "-" if self.order is None else str(self.order)
        return f"{self.name} order={order} {'PASS' if self.passed else 'FAIL'} seed={self.seed}"


@dataclass(frozen=True)
class RandomPolyConfig:
    """Bounds for random test polynomials.

    Coefficients are ``a + b*r2 + c*i + d*i*r2`` with small random rationals;
    ``field_components`` limits how many of the four parts may be nonzero.
    """

    max_degree: int = 6
    max_terms: int = 12
    min_degree: int = 1
    numerator_bound: int = 9
    denominator_bound: int = 6
    field_components: int = 4


DEFAULT_CONFIG = RandomPolyConfig()


def _random_rational(rng: random.Random, cfg: RandomPolyConfig) -> mpq:
    num = rng.randint(-cfg.numerator_bound, cfg.numerator_bound)
    return mpq(num, rng.randint(1, cfg.denominator_bound))


def random_polynomial(rng: random.Random, d: int, cfg: RandomPolyConfig = DEFAULT_CONFIG) -> dict:
    """Random Birkhoff-chart polynomial with nonzero coefficients."""
    poly: dict = {}
    for _ in range(rng.randint(1, cfg.max_terms)):
        deg = rng.randint(cfg.min_degree, cfg.max_degree)
        exps = [0] * (2 * d)
        for _ in range(deg):
            exps[rng.randrange(2 * d)] += 1
        parts = [mpq(0)] * 4
        for k in rng.sample(range(4), rng.randint(1, cfg.field_components)):
            parts[k] = _random_rational(rng, cfg)
        c = FieldElement(*parts)
        if c:
            poly[tuple(exps)] = c
    if not poly:
        exps = [0] * (2 * d)
        exps[0] = max(cfg.min_degree, 1)
        poly[tuple(exps)] = FieldElement(1)
    return poly


def random_series(rng: random.Random, d: int, alpha_orders: int = 1,
                  cfg: RandomPolyConfig = DEFAULT_CONFIG) -> PSeries:
    """Random series with polynomial coefficients at ``alpha^0 .. alpha^(alpha_orders-1)``."""
    return PSeries(d, Chart.XIETA, {n: random_polynomial(rng, d, cfg) for n in range(alpha_orders)})


def _check(name, lhs: PSeries, rhs: PSeries, seed: int, order: int | None = None) -> IdentityCheck:
    res = lhs - rhs
    if order is not None:
        res = res.with_order(order)
    return IdentityCheck(name, res, seed, order)


def check_unperturbed_block(ctx: BirkhoffContext, seed: int,
                            cfg: RandomPolyConfig = DEFAULT_CONFIG) -> list[IdentityCheck]:
    """Identities of ``P0``, ``S0`` and brackets on random ``F``, ``G``, ``Hi``."""
    rng = random.Random(seed)
    d = ctx.d
    F, G, Hi, K = (random_series(rng, d, 1, cfg) for _ in range(4))
    H0 = ctx.h0()

    def P(X):
        return project_P0(ctx, X)

    def S(X, k=1):
        return solve_S0(ctx, X, k)

    def L(A, X):
        return liouville(A, X)

    PF, SF, PG, SG = P(F), S(F), P(G), S(G)
    PHi, SHi = P(Hi), S(Hi)
    zero = PSeries.zero(d, Chart.XIETA)
    checks = [
        ("P0 H0 = H0", P(H0), H0),
        ("S0 H0 = 0", S(H0), zero),
        ("P0 L_H0 = 0", P(L(H0, F)), zero),
        ("L_H0 P0 = 0", L(H0, PF), zero),
        ("S0 L_H0 = 1 - P0", S(L(H0, F)), F - PF),
        ("L_H0 S0 = 1 - P0", L(H0, SF), F - PF),
        ("P0 P0 = P0", P(PF), PF),
        ("P0 S0 = 0", P(SF), zero),
        ("S0 P0 = 0", S(PF), zero),
        ("P0 (F . P0 G) = P0 F . P0 G", P(F * PG), PF * PG),
        ("P0 L_{P0 Hi} = L_{P0 Hi} P0", P(L(PHi, F)), L(PHi, PF)),
        ("S0 (F . P0 G) = S0 F . P0 G", S(F * PG), SF * PG),
        ("S0 L_{P0 Hi} = L_{P0 Hi} S0", S(L(PHi, F)), L(PHi, SF)),
        ("Friedrichs bracket",
         S(L(Hi, SF)),
         L(PHi, S(F, 2)) + L(SHi, SF) - S(L(SHi, F)) - P(L(SHi, SF)) + S(L(SHi, PF))),
        ("Friedrichs product",
         S(F * SG),
         PF * S(G, 2) + SF * SG - S(SF * G) - P(SF * SG) + S(SF * PG)),
        ("P0 L_Hi P0 = L_{P0 Hi} P0", P(L(Hi, PF)), L(PHi, PF)),
        ("S0 L_Hi P0 = L_{S0 Hi} P0", S(L(Hi, PF)), L(SHi, PF)),
        ("P0 L_Hi S0 = -P0 L_{S0 Hi}", P(L(Hi, SF)), -P(L(SHi, F))),
        ("L_H0 derivation", L(H0, F * G), L(H0, F) * G + F * L(H0, G)),
        ("Jacobi",
         poisson_bracket(F, poisson_bracket(G, K)) + poisson_bracket(G, poisson_bracket(K, F)),
         -poisson_bracket(K, poisson_bracket(F, G))),
    ]
    return [_check(name, lhs, rhs, seed) for name, lhs, rhs in checks]


def _liouville_full(ctx: BirkhoffContext, Hi: PSeries, X: PSeries, N: int) -> PSeries:
    """``L_H X = [X, H0] + alpha [X, Hi]`` truncated at ``alpha^N``."""
    return (liouville(ctx.h0(), X) + liouville(Hi, X).shift(1)).with_order(N)


def _eta(m: int) -> int:
    return 1 if m >= 1 else 0


def check_truncated_block(ctx: BirkhoffContext, Hi: PSeries, N: int, seed: int,
                          cfg: RandomPolyConfig = DEFAULT_CONFIG) -> list[IdentityCheck]:
    """Identities of the truncated perturbed operators, exact through ``alpha^N``.

    Checks run on a random two-term alpha series ``F`` and on ``H = H0 + alpha Hi``;
    they include the coefficient product rule
    ``Sr(m) Sr(n) = (eta_m + eta_n - 1) Sr(m + n)`` for ``m, n in {-1, 0, 1, 2}``.
    """
    if not 2 <= N <= 5:
        raise ValueError("truncated identity checks support 2 <= N <= 5")
    Hi = to_chart(Hi, Chart.XIETA)
    rng = random.Random(seed)
    d = ctx.d
    F = random_series(rng, d, 2, cfg).with_order(N)
    H = (ctx.h0() + Hi.shift(1)).with_order(N)

    def P(X):
        return apply_perturbed_P(ctx, Hi, N, X)

    def S(X):
        return apply_perturbed_S(ctx, Hi, N, X)

    def D(X):
        return apply_perturbed_D(ctx, Hi, N, X)

    def L(X):
        return _liouville_full(ctx, Hi, X, N)

    zero = PSeries.zero(d, Chart.XIETA, N)
    PF, SF, DF, LF = P(F), S(F), D(F), L(F)
    checks = [
        ("P_H P_H = P_H", P(PF), PF),
        ("P_H S_H = 0", P(SF), zero),
        ("S_H P_H = 0", S(PF), zero),
        ("D_H S_H = 0", D(SF), zero),
        ("S_H D_H = 0", S(DF), zero),
        ("P_H D_H = D_H", P(DF), DF),
        ("D_H P_H = D_H", D(PF), DF),
        ("S_H L_H = 1 - P_H", S(LF), F - PF),
        ("L_H S_H = 1 - P_H", L(SF), F - PF),
        ("L_H P_H = D_H", L(PF), DF),
        ("P_H L_H = D_H", P(LF), DF),
        ("L_H D_H = D_H^2", L(DF), D(DF)),
        ("D_H L_H = D_H^2", D(LF), D(DF)),
        ("P_H H = H", P(H), H),
        ("S_H H = 0", S(H), zero),
        ("D_H H = 0", D(H), zero),
    ]
    out = [_check(name, lhs, rhs, seed, N) for name, lhs, rhs in checks]
    for m in (-1, 0, 1, 2):
        inner = apply_sr(ctx, Hi, N, m, F)
        for n in (-1, 0, 1, 2):
            lhs = apply_sr(ctx, Hi, N, n, inner)
            rhs = apply_sr(ctx, Hi, N, m + n, F) * (_eta(m) + _eta(n) - 1)
            out.append(_check(f"Sr({n}) Sr({m}) product rule", lhs, rhs, seed, N))
    return out


def check_projector_transport(ctx: BirkhoffContext, Hi: PSeries, N: int, seed: int,
                              F: PSeries | None = None,
                              cfg: RandomPolyConfig = DEFAULT_CONFIG) -> IdentityCheck:
    """``dP_H/dalpha F = (L_G P_H - P_H L_G) F`` through ``alpha^N`` with ``G = -S_H Hi``."""
    if not 2 <= N <= 4:
        raise ValueError("the transport check supports 2 <= N <= 4")
    Hi = to_chart(Hi, Chart.XIETA)
    if F is None:
        F = random_series(random.Random(seed), ctx.d, 1, cfg)
    F = to_chart(F, Chart.XIETA).with_order(N)
    G = square_generator(ctx, Hi, N)

    def LG(X):
        return liouville(G, X).with_order(N)

    lhs = apply_projector_derivative(ctx, Hi, N, F)
    PF = apply_perturbed_P(ctx, Hi, N, F)
    rhs = LG(PF) - apply_perturbed_P(ctx, Hi, N, LG(F))
    return _check("projector transport", lhs, rhs, seed, N)


SUITE_BLOCKS = ("unperturbed", "truncated", "transport")


def _trial(args) -> list[IdentityCheck]:
    ctx, Hi, order, seed, blocks, cfg = args
    out = []
    if "unperturbed" in blocks:
        out += check_unperturbed_block(ctx, seed)
    if "truncated" in blocks and 2 <= order <= 5:
        out += check_truncated_block(ctx, Hi, order, seed, cfg)
    if "transport" in blocks and order >= 2:
        out.append(check_projector_transport(ctx, Hi, min(order, 4), seed, cfg=cfg))
    return out


TRUNCATED_CONFIG = RandomPolyConfig(max_degree=4, max_terms=8)


def run_suite(ctx: BirkhoffContext, Hi: PSeries, order: int, trials: int, seed: int = 0,
              threads: int = 1, blocks=SUITE_BLOCKS,
              cfg: RandomPolyConfig = TRUNCATED_CONFIG) -> list[IdentityCheck]:
    """Run ``trials`` seeded trials (seeds ``seed, seed+1, ...``) of the selected blocks.

    The truncated block needs ``2 <= order <= 5`` and the transport check runs
    at ``min(order, 4)``; outside those ranges they are skipped.  With
    ``threads > 1`` trials run in worker processes; results keep seed order.
    """
    unknown = set(blocks) - set(SUITE_BLOCKS)
    if unknown:
        raise ValueError(f"unknown verification blocks: {sorted(unknown)}")
    Hi = to_chart(Hi, Chart.XIETA)
    jobs = [(ctx, Hi, order, seed + t, tuple(blocks), cfg) for t in range(trials)]
    if threads > 1 and trials > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_trial, jobs))
    else:
        results = [_trial(j) for j in jobs]
    return [c for r in results for c in r]

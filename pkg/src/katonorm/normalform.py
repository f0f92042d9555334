"""Normal-form orchestration: one entry point per method, Gustavson integrals, style comparison."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .kato import apply_perturbed_D, apply_perturbed_P, square_generator
from .lie import (
    Direction,
    GeneratorSeries,
    Style,
    deprit_apply,
    deprit_normalize,
    dragt_finn_apply,
    dragt_finn_normalize,
)
from .liouville import BirkhoffContext, project_P0
from .series import Chart, PSeries, to_chart

__all__ = [
    "Method",
    "NormalFormResult",
    "GustavsonIntegral",
    "StyleReport",
    "DegenerateIntegralError",
    "normalize",
    "normalized_hamiltonian_direct",
    "gustavson_integral",
    "gustavson_integral_series",
    "gustavson_from_result",
    "gustavson_center_integrals",
    "compare_styles",
]


class Method(enum.Enum):
    DEPRIT = "deprit"
    DRAGT_FINN = "dragt-finn"
    KATO_EXPLICIT = "kato"


class DegenerateIntegralError(ValueError):
    """The Gustavson integral vanishes identically through the requested order."""


@dataclass(frozen=True)
class NormalFormResult:
    """Outcome of one normalization run.

    Attributes
    ----------
    generator
        Deprit generator for ``DEPRIT`` and ``KATO_EXPLICIT``.  For
        ``DRAGT_FINN`` it packs the factor generators as ``sum_k alpha^k g_k``;
        use :attr:`factors` and :meth:`forward` for the actual map.
    normalized
        Normalized Hamiltonian through ``alpha^order`` in the Birkhoff chart.
    """

    method: Method
    style: Style
    generator: GeneratorSeries
    normalized: PSeries
    order: int
    ctx: BirkhoffContext
    perturbation: PSeries
    style_function: PSeries | None = None
    factors: tuple[PSeries, ...] = field(default=())

    @property
    def hamiltonian(self) -> PSeries:
        return self.ctx.h0() + self.perturbation.shift(1)

    def forward(self, F: PSeries) -> PSeries:
        """Map a function of the normalized variables back to the original ones."""
        F = to_chart(F, Chart.XIETA)
        if self.method is Method.DRAGT_FINN:
            return dragt_finn_apply(list(self.factors), F, self.order, Direction.FORWARD)
        return deprit_apply(self.generator, F, self.order, Direction.FORWARD)

    def inverse(self, F: PSeries) -> PSeries:
        """Normalizing map; ``inverse(H)`` reproduces :attr:`normalized`."""
        F = to_chart(F, Chart.XIETA)
        if self.method is Method.DRAGT_FINN:
            return dragt_finn_apply(list(self.factors), F, self.order, Direction.INVERSE)
        return deprit_apply(self.generator, F, self.order, Direction.INVERSE)


def _natural_style(method: Method) -> Style:
    return Style.NONSECULAR if method is Method.DRAGT_FINN else Style.KATO_F0


def normalize(ctx: BirkhoffContext, H0: PSeries, Hi: PSeries, N: int,
              method: Method = Method.KATO_EXPLICIT, style: Style | None = None,
              style_function: PSeries | None = None) -> NormalFormResult:
    """Normalize ``H0 + alpha Hi`` through ``alpha^N``.

    ``KATO_EXPLICIT`` builds ``G = -S_H Hi + P_H F`` from the truncated Kato
    series (``F`` is ``style_function``, zero by default) and applies the
    inverse Deprit exponent.  ``DEPRIT`` solves the homological chain order by
    order with secular parts set by ``style``.  ``DRAGT_FINN`` uses a product
    of single exponentials with nonsecular factors.
    """
    if N < 0:
        raise ValueError("order must be non-negative")
    style = _natural_style(method) if style is None else style
    ctx.check_diagonal(H0)
    Hi = to_chart(Hi, Chart.XIETA)
    if style_function is not None and method is not Method.KATO_EXPLICIT:
        raise ValueError("a style function only applies to the explicit Kato method")

    if method is Method.KATO_EXPLICIT:
        if style is not Style.KATO_F0:
            raise ValueError("the explicit Kato generator has the Kato style by construction")
        G = square_generator(ctx, Hi, N)
        if style_function is not None:
            style_function = to_chart(style_function, Chart.XIETA)
            G = G + apply_perturbed_P(ctx, Hi, N, style_function)
        gen = GeneratorSeries(G, Style.KATO_F0)
        Ht = deprit_apply(gen, ctx.h0() + Hi.shift(1), N, Direction.INVERSE)
        return NormalFormResult(method, style, gen, Ht, N, ctx, Hi, style_function)

    if method is Method.DEPRIT:
        gen, Ht = deprit_normalize(ctx, H0, Hi, N, style)
        return NormalFormResult(method, style, gen, Ht, N, ctx, Hi)

    if style is not Style.NONSECULAR:
        raise ValueError("Dragt-Finn factors are always nonsecular")
    factors, Ht = dragt_finn_normalize(ctx, H0, Hi, N)
    packed = PSeries._make(ctx.d, Chart.XIETA,
                           {k: dict(g.poly(0)) for k, g in enumerate(factors)}, N)
    return NormalFormResult(method, style, GeneratorSeries(packed, Style.NONSECULAR), Ht, N,
                            ctx, Hi, None, tuple(factors))


def normalized_hamiltonian_direct(ctx: BirkhoffContext, Hi: PSeries, N: int,
                                  style_function: PSeries | None = None) -> PSeries:
    """``H0 + P0 int_0^alpha V(eps) (Hi + D_H F)(eps) d eps`` with ``G = -S_H Hi + P_H F``.

    ``V`` is the inverse Deprit exponent of ``G``; the integrand is needed
    through ``alpha^(N-1)`` and integrated term by term.
    """
    if N < 0:
        raise ValueError("order must be non-negative")
    Hi = to_chart(Hi, Chart.XIETA)
    h0 = ctx.h0()
    if N == 0:
        return h0.with_order(0)
    G = square_generator(ctx, Hi, N)
    integrand = Hi
    if style_function is not None:
        F = to_chart(style_function, Chart.XIETA)
        G = G + apply_perturbed_P(ctx, Hi, N, F)
        integrand = integrand + apply_perturbed_D(ctx, Hi, N - 1, F)
    inner = deprit_apply(G, integrand.with_order(N - 1), N - 1, Direction.INVERSE)
    return (h0 + project_P0(ctx, inner).alpha_integral()).with_order(N)


@dataclass(frozen=True)
class GustavsonIntegral:
    """``I_G = alpha^-shift (H - U_G H0)`` truncated at ``alpha^order``."""

    series: PSeries
    shift: int
    order: int


def _gustavson(ctx: BirkhoffContext, Hi: PSeries, N: int, forward) -> GustavsonIntegral:
    h0 = ctx.h0()
    X = (h0 + Hi.shift(1)).with_order(N) - forward(h0)
    s = X.min_alpha_degree()
    if s is None:
        raise DegenerateIntegralError(f"H - U_G H0 vanishes through alpha^{N}")
    return GustavsonIntegral(X.shift(-s), s, N - s)


def gustavson_integral(ctx: BirkhoffContext, Hi: PSeries, N: int,
                       generator: GeneratorSeries | PSeries | None = None) -> GustavsonIntegral:
    """Formal first integral ``H - exp_D(alpha L_G) H0`` divided by its leading alpha power.

    ``H - U_G H0`` is computed through ``alpha^N``; the smallest power present
    is divided out, so the returned series is known through ``N - shift``.
    ``generator`` defaults to the explicit Kato generator.
    """
    if N < 1:
        raise ValueError("the Gustavson integral needs order >= 1")
    Hi = to_chart(Hi, Chart.XIETA)
    if generator is None:
        generator = square_generator(ctx, Hi, N)
    return _gustavson(ctx, Hi, N, lambda F: deprit_apply(generator, F, N, Direction.FORWARD))


def gustavson_from_result(result: NormalFormResult) -> GustavsonIntegral:
    """Gustavson integral through the transformation of any normalization result."""
    if result.order < 1:
        raise ValueError("the Gustavson integral needs order >= 1")
    return _gustavson(result.ctx, result.perturbation, result.order, result.forward)


def gustavson_integral_series(ctx: BirkhoffContext, Hi: PSeries, N: int,
                              generator: GeneratorSeries | PSeries | None = None) -> PSeries:
    return gustavson_integral(ctx, Hi, N, generator).series


def gustavson_center_integrals(ctx: BirkhoffContext, result: NormalFormResult) -> list[PSeries]:
    """Push the center seeds ``(beta_i, J)`` through the normalizing transformation."""
    out = []
    for beta in ctx.center:
        seed = PSeries.zero(ctx.d, Chart.XIETA)
        for k, b in enumerate(beta):
            if b:
                seed = seed + ctx.action(k) * b
        out.append(result.forward(seed))
    return out


@dataclass(frozen=True)
class StyleReport:
    """Differences between two normalizations of the same Hamiltonian.

    ``*_difference_order`` is the first alpha power at which the two series
    differ, or ``None`` when they agree through the shared order.
    """

    generator_difference_order: int | None
    hamiltonian_difference_order: int | None
    difference_in_projector_image: bool
    gustavson_coincide: bool
    order: int

    def lines(self) -> list[str]:
        def show(v):
            return "none" if v is None else str(v)
        return [
            f"order: {self.order}",
            f"generator first difference: {show(self.generator_difference_order)}",
            f"hamiltonian first difference: {show(self.hamiltonian_difference_order)}",
            f"generator difference in image of P_H: {'yes' if self.difference_in_projector_image else 'no'}",
            f"gustavson integrals coincide: {'yes' if self.gustavson_coincide else 'no'}",
        ]


def compare_styles(ctx: BirkhoffContext, r1: NormalFormResult, r2: NormalFormResult) -> StyleReport:
    """Compare generators, normal forms and Gustavson integrals of two results."""
    if r1.ctx != ctx or r2.ctx != ctx:
        raise ValueError("both results must come from the given context")
    if r1.order != r2.order:
        raise ValueError(f"orders differ: {r1.order} vs {r2.order}")
    if r1.perturbation != r2.perturbation:
        raise ValueError("results normalize different Hamiltonians")
    N = r1.order
    dG = r1.generator.series - r2.generator.series
    residual = dG - apply_perturbed_P(ctx, r1.perturbation, N, dG)
    H = r1.hamiltonian.with_order(N)
    h0 = ctx.h0()
    I1 = H - r1.forward(h0)
    I2 = H - r2.forward(h0)
    return StyleReport(
        generator_difference_order=r1.generator.series.first_difference(r2.generator.series, N),
        hamiltonian_difference_order=r1.normalized.first_difference(r2.normalized, N),
        difference_in_projector_image=residual.is_zero(),
        gustavson_coincide=I1.first_difference(I2, N) is None,
        order=N,
    )

"""Unperturbed structure: frequencies, the Liouvillian of ``H0`` and its P / S operators.

With ``H0 = sum_k (omega_k/2)(p_k^2 + q_k^2) = sum_k i omega_k xi_k eta_k`` the
monomials ``xi^m eta^n`` are eigenvectors of ``L_{H0} F = [F, H0]`` with
eigenvalue ``i (omega, m - n)``.  The averaging projector keeps the secular
(zero-eigenvalue) terms, the integrating operator divides the rest by their
eigenvalue.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from gmpy2 import mpq

from . import _poly
from .field import FieldElement, as_rational
from .series import Chart, ChartMismatchError, Monomial, PSeries, poisson_bracket, to_chart

__all__ = [
    "BirkhoffContext",
    "eigenvalue",
    "liouville",
    "project_P0",
    "solve_S0",
    "center_basis",
    "integer_kernel",
    "lattice_rank",
]


def integer_kernel(rows: Sequence[Sequence[int]], d: int) -> list[tuple[int, ...]]:
    """Basis of ``{k in Z^d : A k = 0}`` by unimodular column reduction.

    Column operations bring ``A`` to column echelon form while the same
    operations accumulate in ``U``; the columns of ``U`` beyond the last pivot
    span the integer kernel.
    """
    A = [list(map(int, r)) for r in rows]
    U = [[int(i == j) for j in range(d)] for i in range(d)]

    def colop(dst: int, src: int, factor: int):
        # column dst -= factor * column src
        for M in (A, U):
            for row in M:
                row[dst] -= factor * row[src]

    def swap(c1: int, c2: int):
        for M in (A, U):
            for row in M:
                row[c1], row[c2] = row[c2], row[c1]

    pivot = 0
    for row in A:
        if pivot >= d:
            break
        while True:
            nz = [c for c in range(pivot, d) if row[c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda c: abs(row[c]))
            if best != pivot:
                swap(best, pivot)
            done = True
            for c in range(pivot + 1, d):
                if row[c]:
                    colop(c, pivot, row[c] // row[pivot])
                    if row[c]:
                        done = False
            if done:
                pivot += 1
                break
    basis = []
    for c in range(pivot, d):
        vec = [U[r][c] for r in range(d)]
        g = 0
        for v in vec:
            g = gcd(g, v)
        vec = [v // g for v in vec] if g > 1 else vec
        lead = next(v for v in vec if v)
        if lead < 0:
            vec = [-v for v in vec]
        basis.append(tuple(vec))
    return basis


def lattice_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over Q by exact Gaussian elimination."""
    M = [[mpq(v) for v in vec] for vec in vectors]
    rank, ncols = 0, len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][col]:
                f = M[r][col] / M[rank][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class BirkhoffContext:
    """Unperturbed harmonic part ``H0 = sum_k (omega_k / 2)(p_k^2 + q_k^2)``.

    ``omega`` must be rational so that resonance detection is exact.
    """

    omega: tuple
    resonance_basis: tuple = field(init=False)
    center: tuple = field(init=False)
    _lam_cache: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        omega = tuple(as_rational(w) for w in self.omega)
        if not omega:
            raise ValueError("need at least one frequency")
        if not any(omega):
            raise ValueError("all frequencies are zero; H0 would vanish")
        object.__setattr__(self, "omega", omega)
        d = len(omega)
        den = 1
        for w in omega:
            den = den * w.denominator // gcd(den, int(w.denominator))
        ints = [int(w * den) for w in omega]
        res = integer_kernel([ints], d)
        if lattice_rank(res) != len(res) or len(res) != d - 1:
            raise AssertionError("resonance basis does not span the integer kernel")
        cen = integer_kernel(res, d) if res else [tuple(int(i == j) for j in range(d)) for i in range(d)]
        for b in cen:
            if any(sum(x * y for x, y in zip(b, D)) for D in res):
                raise AssertionError("center vector not orthogonal to the resonance lattice")
        object.__setattr__(self, "resonance_basis", tuple(res))
        object.__setattr__(self, "center", tuple(cen))
        object.__setattr__(self, "_lam_cache", {})

    @property
    def d(self) -> int:
        return len(self.omega)

    @property
    def is_resonant(self) -> bool:
        return bool(self.resonance_basis)

    def frequency(self, exps: tuple) -> mpq:
        """``(omega, m - n)`` for the Birkhoff monomial ``xi^m eta^n``."""
        lam = self._lam_cache.get(exps)
        if lam is None:
            d = len(self.omega)
            lam = sum((w * (exps[k] - exps[d + k]) for k, w in enumerate(self.omega)), mpq(0))
            self._lam_cache[exps] = lam
        return lam

    def h0(self, chart: Chart = Chart.XIETA) -> PSeries:
        d = self.d
        terms = {}
        for k, w in enumerate(self.omega):
            e = [0] * (2 * d)
            e[k] = e[d + k] = 1
            terms[tuple(e)] = FieldElement(0, 0, w)
        return to_chart(PSeries(d, Chart.XIETA, {0: terms}), chart)

    def action(self, k: int, chart: Chart = Chart.XIETA) -> PSeries:
        """``J_k = (p_k^2 + q_k^2)/2 = i xi_k eta_k``."""
        d = self.d
        e = [0] * (2 * d)
        e[k] = e[d + k] = 1
        return to_chart(PSeries(d, Chart.XIETA, {0: {tuple(e): FieldElement(0, 0, 1)}}), chart)

    def check_diagonal(self, H0: PSeries) -> None:
        """Raise ``ValueError`` unless ``H0`` is exactly ``sum (omega_k/2)(p_k^2+q_k^2)``."""
        if H0.dim != self.d:
            raise ChartMismatchError(f"H0 has dimension {H0.dim}, context has {self.d}")
        if to_chart(H0, Chart.XIETA).with_order(None) != self.h0():
            raise ValueError("H0 is not the diagonal harmonic Hamiltonian of this context")


def _require_xieta(F: PSeries):
    if F.chart is not Chart.XIETA:
        raise ChartMismatchError("operation requires the Birkhoff (xieta) chart")


# -- polynomial-level kernels (used by the Kato and Lie engines) -------------

def p0_poly(ctx: BirkhoffContext, poly: dict) -> dict:
    lam = ctx.frequency
    return {m: c for m, c in poly.items() if not lam(m)}


def s0_poly(ctx: BirkhoffContext, poly: dict, power: int = 1) -> dict:
    """``S0**power``: divide each nonresonant term by ``(i lam)**power``."""
    lam = ctx.frequency
    out = {}
    for m, c in poly.items():
        w = lam(m)
        if w:
            out[m] = _div_i_lam(c, w, power)
    return out


def _div_i_lam(c: FieldElement, w, power: int) -> FieldElement:
    # 1/(i w)^k = (-i)^k / w^k
    k = power % 4
    for _ in range(k):
        c = -c.mul_i()
    return c.scale(1 / w ** power)


def z0_poly(ctx: BirkhoffContext, poly: dict, m: int) -> dict:
    """``Z_0^m``: ``P0`` for ``m == 0``, ``-S0**m`` for ``m > 0``, zero below."""
    if m < 0:
        return {}
    if m == 0:
        return p0_poly(ctx, poly)
    return _poly.neg(s0_poly(ctx, poly, m))


# -- series-level operations ------------------------------------------------

def eigenvalue(ctx: BirkhoffContext, m: Monomial) -> FieldElement:
    """``i (omega, m - n)`` for the Birkhoff monomial ``xi^m eta^n``."""
    if m.chart is not Chart.XIETA:
        raise ChartMismatchError("eigenvalues are defined for Birkhoff monomials")
    if m.dim != ctx.d:
        raise ChartMismatchError(f"monomial dimension {m.dim} != context dimension {ctx.d}")
    return FieldElement(0, 0, ctx.frequency(m.exponents))


def liouville(H: PSeries, F: PSeries) -> PSeries:
    """``L_H F = [F, H]``."""
    return poisson_bracket(F, H)


def project_P0(ctx: BirkhoffContext, F: PSeries) -> PSeries:
    _require_xieta(F)
    return F.map_polys(lambda p: p0_poly(ctx, p))


def solve_S0(ctx: BirkhoffContext, F: PSeries, power: int = 1) -> PSeries:
    _require_xieta(F)
    return F.map_polys(lambda p: s0_poly(ctx, p, power))


def center_basis(ctx: BirkhoffContext) -> list[tuple[int, ...]]:
    """Integer vectors orthogonal to every resonance vector."""
    return list(ctx.center)

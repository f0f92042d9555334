"""Reference values for the worked examples, transcribed as data."""
from __future__ import annotations

import sympy as sp
from gmpy2 import mpq

from katonorm import Chart, FieldElement, PSeries
from oracles import series_from_sympy, symbols

# quartic oscillator: coefficients c_n of alpha^n J^(n+1), n = 0..3
DUFFING_ACTION_COEFFS = [mpq(1), mpq(3, 8), mpq(-17, 64), mpq(375, 1024)]


def duffing_generator_pq() -> tuple[PSeries, PSeries]:
    q, p = (s[0] for s in symbols(1, Chart.PQ))
    g0 = p * q / 32 * (3 * p ** 2 + 5 * q ** 2)
    g1 = -p * q / 384 * (39 * p ** 4 + 104 * p ** 2 * q ** 2 + 57 * q ** 4)
    return series_from_sympy(g0, 1, Chart.PQ), series_from_sympy(g1, 1, Chart.PQ)


# Henon-Heiles normal form in Birkhoff variables: exponents (xi1, xi2, eta1, eta2)
HH_ALPHA2 = {
    (0, 2, 0, 2): mpq(5, 12),
    (0, 2, 2, 0): mpq(7, 12),
    (1, 1, 1, 1): mpq(-1, 3),
    (2, 0, 0, 2): mpq(7, 12),
    (2, 0, 2, 0): mpq(5, 12),
}
# the alpha^4 block carries an overall factor i
HH_ALPHA4 = {
    (0, 3, 0, 3): mpq(235, 432),
    (0, 3, 2, 1): mpq(-175, 144),
    (1, 2, 1, 2): mpq(-47, 16),
    (1, 2, 3, 0): mpq(161, 144),
    (2, 1, 0, 3): mpq(-175, 144),
    (2, 1, 2, 1): mpq(65, 16),
    (3, 0, 1, 2): mpq(161, 144),
    (3, 0, 3, 0): mpq(-101, 432),
}


def hh_normal_form_blocks() -> tuple[PSeries, PSeries]:
    a2 = PSeries(2, Chart.XIETA, {2: HH_ALPHA2})
    a4 = PSeries(2, Chart.XIETA, {4: {m: FieldElement(0, 0, c) for m, c in HH_ALPHA4.items()}})
    return a2, a4


def hh_gustavson_orders() -> tuple[PSeries, PSeries]:
    """The two leading orders of the Gustavson integral, in the pq chart."""
    (q1, q2), (p1, p2) = symbols(2, Chart.PQ)
    lead = -sp.Rational(1, 48) * (
        5 * p1 ** 4 + 2 * p1 ** 2 * (5 * p2 ** 2 + 5 * q1 ** 2 - 9 * q2 ** 2) + 56 * p1 * p2 * q1 * q2
        + 5 * p2 ** 4 - 2 * p2 ** 2 * (9 * q1 ** 2 - 5 * q2 ** 2) + 5 * (q1 ** 2 + q2 ** 2) ** 2)
    nxt = -sp.Rational(1, 36) * (
        -28 * p1 ** 4 * q2 + 28 * p1 ** 3 * p2 * q1
        + p1 ** 2 * q2 * (84 * p2 ** 2 - 27 * q1 ** 2 + 37 * q2 ** 2)
        + 42 * p1 * p2 * q1 * (-2 * p2 ** 2 + q1 ** 2 + q2 ** 2)
        - p2 ** 2 * (69 * q1 ** 2 * q2 + 5 * q2 ** 3)
        - 5 * q2 * (q2 ** 2 - 3 * q1 ** 2) * (q1 ** 2 + q2 ** 2))
    return series_from_sympy(lead, 2, Chart.PQ), series_from_sympy(nxt, 2, Chart.PQ)


def frequency_shift_generator(N: int) -> PSeries:
    """Taylor coefficients of ``pq / (4 (1 + alpha))``: ``(-1)^n pq / 4``."""
    return PSeries(1, Chart.PQ, {n: {(1, 1): mpq((-1) ** n, 4)} for n in range(N + 1)}, N)


def sqrt_one_plus_alpha(N: int) -> list[mpq]:
    """Taylor coefficients of ``sqrt(1 + alpha)`` from sympy's series expansion."""
    a = sp.Symbol("a")
    poly = sp.series(sp.sqrt(1 + a), a, 0, N + 1).removeO()
    return [mpq(int(c.p), int(c.q)) for c in (sp.Rational(poly.coeff(a, n)) for n in range(N + 1))]

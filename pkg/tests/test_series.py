import random

import pytest
import sympy as sp
from gmpy2 import mpq

from katonorm import Chart, ChartMismatchError, FieldElement, Monomial, PSeries, poisson_bracket, to_chart
from katonorm.series import format_monomial, from_term_list
from katonorm.verify import RandomPolyConfig, random_polynomial
from oracles import (
    distribute_product,
    poly_to_sympy,
    series_from_sympy,
    sympy_bracket,
    sympy_to_poly,
    sympy_to_xieta,
    symbols,
)

SMALL = RandomPolyConfig(max_degree=4, max_terms=5, field_components=2)


def rand_poly(seed, d, cfg=SMALL):
    return random_polynomial(random.Random(seed), d, cfg)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("chart", list(Chart))
def test_bracket_matches_sympy(seed, chart):
    d = 1 + seed % 2
    f, g = rand_poly(seed, d), rand_poly(1000 + seed, d)
    F, G = PSeries(d, chart, {0: f}), PSeries(d, chart, {0: g})
    expected = sympy_bracket(poly_to_sympy(f, d, chart), poly_to_sympy(g, d, chart), d, chart)
    assert dict(poisson_bracket(F, G).poly(0)) == sympy_to_poly(expected, d, chart)


def test_canonical_brackets():
    for chart in Chart:
        x, y = PSeries.variable(2, chart, chart.variable_names(2)[0]), PSeries.variable(2, chart, chart.variable_names(2)[2])
        assert x.bracket(y) == PSeries.constant(2, chart, 1)
        assert y.bracket(x) == PSeries.constant(2, chart, -1)


@pytest.mark.parametrize("seed", range(6))
def test_chart_change_matches_substitution(seed):
    d = 1 + seed % 2
    f = rand_poly(seed, d)
    F = PSeries(d, Chart.PQ, {0: f})
    assert dict(to_chart(F, Chart.XIETA).poly(0)) == sympy_to_xieta(f, d)
    assert to_chart(to_chart(F, Chart.XIETA), Chart.PQ) == F


def test_chart_change_of_h0():
    q, p = symbols(1, Chart.PQ)
    H0 = series_from_sympy((p[0] ** 2 + q[0] ** 2) / 2, 1, Chart.PQ)
    assert to_chart(H0, Chart.XIETA) == PSeries.monomial(1, Chart.XIETA, (1, 1), FieldElement(0, 0, 1))


@pytest.mark.parametrize("seed", range(6))
def test_chart_change_is_bracket_isomorphism(seed):
    d = 2
    F = PSeries(d, Chart.PQ, {0: rand_poly(seed, d), 1: rand_poly(seed + 50, d)})
    G = PSeries(d, Chart.PQ, {0: rand_poly(seed + 99, d)})
    lhs = to_chart(F.bracket(G), Chart.XIETA)
    rhs = to_chart(F, Chart.XIETA).bracket(to_chart(G, Chart.XIETA))
    assert lhs == rhs


@pytest.mark.parametrize("seed", range(6))
def test_product_matches_distribution(seed):
    f, g = rand_poly(seed, 2), rand_poly(seed + 7, 2)
    F, G = PSeries(2, Chart.XIETA, {0: f}), PSeries(2, Chart.XIETA, {0: g})
    assert dict((F * G).poly(0)) == distribute_product(f, g)


def test_truncation_drops_high_orders():
    F = PSeries(1, Chart.PQ, {0: {(1, 0): 1}, 2: {(0, 1): 1}, 5: {(1, 1): 1}}, order=3)
    assert F.alpha_degrees() == [0, 2]
    G = PSeries(1, Chart.PQ, {1: {(1, 0): 1}, 2: {(0, 1): 1}})
    prod = F * G
    assert prod.order == 3 and prod.max_alpha_degree() == 3
    assert (F + G).order == 3
    assert F.shift(1).order == 4 and F.shift(-0) == F
    assert F.with_order(1).alpha_degrees() == [0]


def test_agreement_and_first_difference():
    F = PSeries(1, Chart.PQ, {0: {(1, 0): 1}, 3: {(0, 1): 1}})
    G = PSeries(1, Chart.PQ, {0: {(1, 0): 1}})
    assert F.first_difference(G) == 3
    assert F.agrees_with(G, through=2)
    assert F.first_difference(F) is None


def test_alpha_calculus():
    F = PSeries(1, Chart.PQ, {0: {(1, 0): 1}, 2: {(0, 1): 3}})
    assert F.alpha_derivative() == PSeries(1, Chart.PQ, {1: {(0, 1): 6}})
    assert F.alpha_integral().alpha_derivative() == F


def test_chart_mismatch_is_rejected():
    F = PSeries.variable(1, Chart.PQ, "q1")
    G = PSeries.variable(1, Chart.XIETA, "xi1")
    with pytest.raises(ChartMismatchError):
        F + G
    with pytest.raises(ChartMismatchError):
        poisson_bracket(F, G)
    with pytest.raises(ChartMismatchError):
        F * PSeries.variable(2, Chart.PQ, "q1")
    with pytest.raises(ChartMismatchError):
        PSeries(1, Chart.PQ, {0: {(1, 0, 0): 1}})


def test_invalid_construction():
    with pytest.raises(ValueError):
        PSeries(0, Chart.PQ)
    with pytest.raises(ValueError):
        PSeries(1, Chart.PQ, {0: {(-1, 0): 1}})
    with pytest.raises(ValueError):
        PSeries.variable(1, Chart.PQ, "q2")


def test_monomial_order_and_text():
    a = Monomial(Chart.XIETA, (2, 0, 0, 1))
    b = Monomial(Chart.XIETA, (1, 0, 0, 0))
    assert b < a and a.degree == 3
    assert format_monomial((2, 0, 0, 1), Chart.XIETA) == "xi1^2 eta2"
    assert format_monomial((0, 0), Chart.PQ) == "1"


def test_term_list_accumulates():
    F = from_term_list(1, Chart.PQ, [(0, (1, 0), mpq(1, 2)), (0, (1, 0), mpq(1, 2)), (1, (0, 1), 0)])
    assert F == PSeries.variable(1, Chart.PQ, "q1")


def test_sympy_substitution_sanity():
    q, p = symbols(1, Chart.PQ)
    xi, eta = symbols(1, Chart.XIETA)
    expr = (q[0] ** 2).subs(q[0], (xi[0] + sp.I * eta[0]) / sp.sqrt(2))
    F = to_chart(PSeries.monomial(1, Chart.PQ, (2, 0)), Chart.XIETA)
    assert F == series_from_sympy(expr, 1, Chart.XIETA)

"""The ten acceptance criteria, one test each.

Every test records a ``criterion N: PASS|FAIL`` line that is printed in the
terminal summary (and immediately when run with ``-s``).
"""
import functools
import random
import time
from math import comb, isfinite
from pathlib import Path

import pytest
from gmpy2 import mpq

from conftest import ACCEPTANCE_LINES
from golden import (
    DUFFING_ACTION_COEFFS,
    duffing_generator_pq,
    frequency_shift_generator,
    hh_gustavson_orders,
    hh_normal_form_blocks,
)
from katonorm import (
    BirkhoffContext,
    Chart,
    Direction,
    FieldElement,
    Method,
    PSeries,
    Style,
    brute_force_word_sum,
    compare_styles,
    deprit_apply,
    enumerate_weak_compositions,
    gustavson_from_result,
    normalize,
    parse_spec,
    to_chart,
    z_apply,
)
from katonorm.bench import format_table, is_monotone, run_benchmark
from katonorm.emit import series_to_text
from katonorm.verify import RandomPolyConfig, random_polynomial, random_series, run_suite
from oracles import deprit_series_oracle

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
I = FieldElement(0, 0, 1)


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            status, note = "FAIL", ""
            try:
                note = fn(*args, **kwargs) or ""
                status = "PASS"
            finally:
                line = f"criterion {number:2d}: {status}  {title} ({time.perf_counter() - t0:.1f} s){' ' + note if note else ''}"
                ACCEPTANCE_LINES.append(line)
                print(line)
        return run
    return wrap


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def hh_order8(henon_heiles):
    ctx, Hi = henon_heiles
    t0 = time.perf_counter()
    runs = {
        "kato": normalize(ctx, ctx.h0(), Hi, 8, Method.KATO_EXPLICIT),
        "deprit": normalize(ctx, ctx.h0(), Hi, 8, Method.DEPRIT, Style.NONSECULAR),
    }
    return runs, time.perf_counter() - t0


@criterion(1, "Duffing normal form and generator")
def test_criterion_01_duffing(duffing):
    ctx, Hi = duffing
    res, dt = timed(normalize, ctx, ctx.h0(), Hi, 3, Method.KATO_EXPLICIT)
    expected = PSeries(1, Chart.XIETA,
                       {n: {(n + 1, n + 1): I ** (n + 1) * c} for n, c in enumerate(DUFFING_ACTION_COEFFS)}, 3)
    assert res.normalized == expected
    G = to_chart(res.generator.series, Chart.PQ)
    g0, g1 = duffing_generator_pq()
    assert G.coefficient(0) == g0 and G.coefficient(1) == g1
    assert dt < 5


@criterion(2, "Duffing order 16, three methods byte-identical")
def test_criterion_02_duffing_uniqueness(duffing):
    ctx, Hi = duffing
    t0 = time.perf_counter()
    texts = {series_to_text("hamiltonian", normalize(ctx, ctx.h0(), Hi, 16, m).normalized, Chart.PQ)
             for m in Method}
    assert len(texts) == 1
    assert time.perf_counter() - t0 < 600


@criterion(3, "Henon-Heiles alpha^2 and alpha^4 blocks")
def test_criterion_03_henon_heiles_blocks(henon_heiles):
    ctx, Hi = henon_heiles
    res, dt = timed(normalize, ctx, ctx.h0(), Hi, 4, Method.KATO_EXPLICIT)
    a2, a4 = hh_normal_form_blocks()
    assert len(a2.poly(2)) == 5 and len(a4.poly(4)) == 8
    assert res.normalized.coefficient(2) == a2.coefficient(2)
    assert res.normalized.coefficient(4) == a4.coefficient(4)
    assert dt < 60


@criterion(4, "Henon-Heiles Deprit vs explicit Kato at N=8")
def test_criterion_04_method_divergence(henon_heiles, hh_order8):
    ctx, _ = henon_heiles
    runs, dt = hh_order8
    report = compare_styles(ctx, runs["kato"], runs["deprit"])
    assert report.hamiltonian_difference_order == 8
    assert runs["kato"].normalized.agrees_with(runs["deprit"].normalized, through=7)
    assert report.generator_difference_order is not None
    assert report.difference_in_projector_image
    assert dt < 1800
    return f"[generators first differ at alpha^{report.generator_difference_order}]"


@criterion(5, "Gustavson integral: leading orders and style insensitivity")
def test_criterion_05_gustavson(henon_heiles, hh_order8):
    runs, _ = hh_order8
    integrals = {name: gustavson_from_result(r) for name, r in runs.items()}
    lead, nxt = hh_gustavson_orders()
    for gi in integrals.values():
        assert gi.shift == 2 and gi.order >= 6
        pq = to_chart(gi.series, Chart.PQ)
        assert pq.coefficient(0) == lead and pq.coefficient(1) == nxt
    a, b = integrals["kato"].series, integrals["deprit"].series
    assert a.first_difference(b, through=6) is None


@criterion(6, "frequency shift generator through alpha^10")
def test_criterion_06_frequency_shift(frequency_shift):
    ctx, Hi = frequency_shift
    res = normalize(ctx, ctx.h0(), Hi, 10, Method.KATO_EXPLICIT)
    assert to_chart(res.generator.series, Chart.PQ) == frequency_shift_generator(10)


@criterion(7, "identity suite: 1000 + 50 trials and transport")
def test_criterion_07_identity_suite(henon_heiles):
    ctx, Hi = henon_heiles
    t0 = time.perf_counter()
    unperturbed = run_suite(ctx, Hi, 3, 1000, seed=0, blocks=("unperturbed",))
    truncated = run_suite(ctx, Hi, 3, 50, seed=0, blocks=("truncated",))
    transport = run_suite(ctx, Hi, 3, 5, seed=0, blocks=("transport",))
    assert len(unperturbed) == 1000 * 20 and len(truncated) == 50 * 32 and len(transport) == 5
    failed = [c.line() for c in unperturbed + truncated + transport if not c.passed]
    assert not failed, failed[:5]
    assert all(c.order == 3 for c in truncated + transport)
    assert time.perf_counter() - t0 < 600


@criterion(8, "weak composition counts for n <= 8")
def test_criterion_08_counts():
    for n in range(9):
        assert len(enumerate_weak_compositions(n, n)) == comb(2 * n, n)
        assert len(enumerate_weak_compositions(n, n + 1)) == comb(2 * n + 1, n)


@criterion(9, "oracle equivalence of operator words and Deprit exponents")
def test_criterion_09_oracles():
    cubic = RandomPolyConfig(max_degree=3, min_degree=3, max_terms=5, field_components=2)
    seed_cfg = RandomPolyConfig(max_degree=4, max_terms=4, field_components=2)
    nonzero = 0
    for ctx in (BirkhoffContext((1, 1)), BirkhoffContext((1, mpq(1, 2)))):
        for seed in range(5):
            rng = random.Random(seed)
            Hi = PSeries(2, Chart.XIETA, {0: random_polynomial(rng, 2, cubic)})
            F = PSeries(2, Chart.XIETA, {0: random_polynomial(rng, 2, seed_cfg)})
            for n in range(7):
                for m in range(7 - n):
                    got = z_apply(ctx, Hi, n, m, F)
                    assert got == brute_force_word_sum(ctx, Hi, n, m, F), (ctx.omega, seed, n, m)
                    nonzero += not got.is_zero()
    assert nonzero > 100
    for N in range(5):
        rng = random.Random(100 + N)
        G = random_series(rng, 2, N + 1, seed_cfg)
        F = random_series(rng, 2, 2, seed_cfg)
        for direction in Direction:
            got = deprit_apply(G, F, N, direction)
            assert got == deprit_series_oracle(G, F, N, inverse=direction is Direction.INVERSE)


@criterion(10, "benchmark report")
def test_criterion_10_benchmark():
    spec = parse_spec((PROBLEMS / "duffing.txt").read_text())
    rows = run_benchmark(spec, [4, 8, 16], [Method.DEPRIT, Method.KATO_EXPLICIT])
    table = format_table(rows)
    print(table)
    assert len(rows) == 6 and all(isfinite(r.seconds) and r.seconds >= 0 for r in rows)
    assert "deprit time (s)" in table and "kato time (s)" in table
    assert is_monotone(rows)

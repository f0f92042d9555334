import random

import pytest
from gmpy2 import mpq

from katonorm import BirkhoffContext, Chart, PSeries
from katonorm import verify
from katonorm.verify import (
    SUITE_BLOCKS,
    TRUNCATED_CONFIG,
    IdentityCheck,
    RandomPolyConfig,
    check_projector_transport,
    check_truncated_block,
    check_unperturbed_block,
    random_polynomial,
    random_series,
    run_suite,
)

CONTEXTS = [BirkhoffContext((1,)), BirkhoffContext((1, 1)), BirkhoffContext((1, mpq(3, 7))),
            BirkhoffContext((mpq(2, 3), 1, 2))]


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: str(len(c.omega)))
@pytest.mark.parametrize("seed", range(5))
def test_unperturbed_block_passes(ctx, seed):
    checks = check_unperturbed_block(ctx, seed)
    assert len(checks) == 20
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]


@pytest.mark.parametrize("fixture", ["duffing", "henon_heiles"])
@pytest.mark.parametrize("N", [2, 3])
def test_truncated_block_passes(request, fixture, N):
    ctx, Hi = request.getfixturevalue(fixture)
    checks = check_truncated_block(ctx, Hi, N, seed=N, cfg=TRUNCATED_CONFIG)
    assert len(checks) == 16 + 16
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]
    assert all(c.order == N for c in checks)


def test_transport_examples(duffing, henon_heiles):
    ctx, Hi = duffing
    assert check_projector_transport(ctx, Hi, 2, seed=1).passed
    ctx, Hi = henon_heiles
    assert check_projector_transport(ctx, Hi, 3, seed=0, F=ctx.h0()).passed
    zero = PSeries.zero(2, Chart.XIETA)
    check = check_projector_transport(ctx, zero, 3, seed=4)
    assert check.passed


def test_range_guards(duffing):
    ctx, Hi = duffing
    with pytest.raises(ValueError):
        check_truncated_block(ctx, Hi, 1, 0)
    with pytest.raises(ValueError):
        check_truncated_block(ctx, Hi, 6, 0)
    with pytest.raises(ValueError):
        check_projector_transport(ctx, Hi, 5, 0)
    with pytest.raises(ValueError):
        run_suite(ctx, Hi, 3, 1, blocks=("bogus",))


def test_checks_detect_a_broken_operator(monkeypatch, henon_heiles):
    ctx, Hi = henon_heiles
    real = verify.apply_perturbed_P

    def off_by_one(ctx_, Hi_, N, F):
        out = real(ctx_, Hi_, N, F)
        return out + out.coefficient(1).shift(2) if N >= 2 else out

    monkeypatch.setattr(verify, "apply_perturbed_P", off_by_one)
    checks = check_truncated_block(ctx, Hi, 3, seed=0, cfg=TRUNCATED_CONFIG)
    assert any(not c.passed for c in checks)


def test_identity_check_reporting():
    ok = IdentityCheck("x", PSeries.zero(1, Chart.XIETA), seed=3, order=2)
    bad = IdentityCheck("y", PSeries.variable(1, Chart.XIETA, "xi1"), seed=4)
    assert ok.passed and ok.line() == "x order=2 PASS seed=3"
    assert not bad.passed and bad.line() == "y order=- FAIL seed=4"


def test_random_generators_respect_bounds():
    cfg = RandomPolyConfig(max_degree=3, max_terms=4, min_degree=2, field_components=1)
    rng = random.Random(0)
    for _ in range(50):
        poly = random_polynomial(rng, 2, cfg)
        assert 1 <= len(poly) <= 4
        assert all(2 <= sum(m) <= 3 for m in poly)
        assert all(sum(bool(x) for x in c.components()) == 1 for c in poly.values())
    S = random_series(random.Random(1), 2, 3)
    assert S.alpha_degrees() == [0, 1, 2]


def test_suite_is_deterministic(henon_heiles):
    ctx, Hi = henon_heiles
    a = run_suite(ctx, Hi, 2, trials=2, seed=7)
    b = run_suite(ctx, Hi, 2, trials=2, seed=7)
    assert [c.line() for c in a] == [c.line() for c in b]
    assert [c.residual for c in a] == [c.residual for c in b]
    assert {c.seed for c in a} == {7, 8}


def test_parallel_suite_matches_sequential(duffing):
    ctx, Hi = duffing
    seq = run_suite(ctx, Hi, 2, trials=3, seed=1)
    par = run_suite(ctx, Hi, 2, trials=3, seed=1, threads=2)
    assert [c.line() for c in seq] == [c.line() for c in par]
    assert all(c.passed for c in par)


def test_suite_block_selection(duffing):
    ctx, Hi = duffing
    only = run_suite(ctx, Hi, 3, trials=1, blocks=("transport",))
    assert [c.name for c in only] == ["projector transport"]
    assert set(SUITE_BLOCKS) == {"unperturbed", "truncated", "transport"}
    # the perturbed blocks are skipped outside their supported orders
    assert all(c.order is None for c in run_suite(ctx, Hi, 1, trials=1))

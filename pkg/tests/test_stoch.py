import random
from fractions import Fraction

import pytest

from oracles import cond_exp
from semimeas.stoch import (
    DPartition, ModelError, Partition, StoppingTime, UnsupportedGridError, build_model,
    canonical_maximal, chain_limit, context, doob_meyer, experiment_demo, extend_process,
    fixture_b, isometry_check, mu_alpha, pd_operator, phi_p, premeyer, quasinorm, riesz,
    stopped_value, stopping_diagnostics, validate_model,
)
from semimeas.stoch.extension import ring_of
from semimeas.stoch.generators import general_model, product_model, subtract_drift
from semimeas.stoch.model import FiniteProbSpace
from semimeas.stoch.quasi import lattice_pairs

F = Fraction


@pytest.fixture
def fb():
    m = fixture_b()
    return m, ring_of(m), context(m)


def test_fixture_b_is_martingale(fb):
    m, _, _ = fb
    assert validate_model(m).martingale


def test_phi_p_examples(fb):
    m, _, _ = fb
    full = m.space.full_event
    assert phi_p(m, full, [(1, 0), (0, 1)]) == (2, 0, 0, -2)
    assert not any(phi_p(m, full, ["inf"]))
    assert not any(phi_p(m, 0, [(1, 0)]))


def test_extended_process_values(fb):
    m, ring, ctx = fb
    x = ctx.ext.xbar
    up = ring.upset
    assert x[up((0, 0))] == (1, 1, 1, 1)
    assert x[0] == (3, 1, 1, -1)
    assert x[up((1, 0)) | up((0, 1))] == m.value((0, 0))
    mixed = tuple(a + b - c for a, b, c in zip(m.value((1, 0)), m.value((0, 1)), m.value((0, 0))))
    assert x[up((1, 0)) & up((0, 1))] == mixed == (3, 1, 1, -1)


def test_extended_filtration(fb):
    _, ring, ctx = fb
    assert ctx.filt.at(ring.upset((0, 0))).blocks == [[0, 1, 2, 3]]
    assert ctx.filt.at(0).blocks == [[0], [1], [2], [3]]


def test_doleans_dade_measure(fb):
    m, ring, ctx = fb
    u = ring.upset((1, 0)) | ring.upset((0, 1))
    assert ctx.dd.of_set(m.space.full_event, u) == 0
    assert ctx.dd.of_set(m.space.full_event, 0) == 0
    # orthogonality of martingale increments on lattice regions
    for t in ring.t1:
        for blk in ctx.filt.at(t).blocks:
            assert ctx.dd.of_set(sum(1 << w for w in blk), t) == 0


def test_quasinorm_and_single_pair(fb):
    m, ring, ctx = fb
    assert quasinorm(ctx) == 0
    assert not any(ctx.increment(ring.upset((0, 0)), 0))


def test_pd_operator_example(fb):
    m, ring, ctx = fb
    t, u = ring.upset((0, 0)), ring.upset((1, 0))
    h = pd_operator(ctx, DPartition([(t, u)]), m.space.indicator(0b0001))
    assert h and all(v == (F(1, 4),) * 4 for v in h.values())
    assert all((t & ~u) >> i & 1 for i in h)
    ones = pd_operator(ctx, DPartition([(t, u)]), (F(1),) * 4)
    assert all(v == (1, 1, 1, 1) for v in ones.values())


def test_non_adapted_input_names_point_and_block(fb):
    m, _, _ = fb
    x = dict(m.x)
    x[(1, 0)] = (3, 1, 0, 0)
    bad = m.with_process(x, m.x_inf)
    with pytest.raises(ModelError, match=r"\(1, 0\).*\[0, 1\]"):
        validate_model(bad)
    # the measure identity is algebraic and holds regardless
    ctx = context(bad)
    assert mu_alpha(ctx, canonical_maximal(ctx.ring), 0, m.space.full_event).mu_identity


def test_constant_process_flags():
    m = product_model((2, 2), 0, "martingale")
    const = m.with_process({g: (F(2),) * m.n for g in m.x}, (F(2),) * m.n)
    rep = validate_model(const)
    assert rep.martingale and rep.supermartingale and rep.increasing
    r = doob_meyer(const, samples=4)
    assert not any(r.M) and all(a == (F(-2),) * m.n for a in r.A.values())


def test_doob_meyer_on_fixture_b(fb):
    m, _, ctx = fb
    r = doob_meyer(m, samples=8)
    assert not any(r.M) and r.reconstruction and r.invariant_under_reordering
    assert all(r.A[t] == tuple(-v for v in ctx.ext.xbar[t]) for t in r.A)


def test_riesz_on_fixture_b(fb):
    m, _, _ = fb
    r = riesz(m)
    assert r.lattice_zero and r.z_empty_zero and r.M == m.x_inf and r.perturbation_detected


def test_riesz_supermartingale_from_fixture_b(fb):
    m, _, _ = fb
    sup = subtract_drift(m)
    assert validate_model(sup).supermartingale
    r = riesz(sup)
    assert r.lattice_nonnegative and r.lattice_supermartingale


def test_unsupported_grid_is_reported():
    with pytest.raises(UnsupportedGridError):
        extend_process(general_model((2, 3), 4, 0, "adapted"))


def test_stopped_value_at_a_single_region(fb):
    m, ring, ctx = fb
    t = ring.upset((1, 0))
    assert stopped_value(ctx, StoppingTime(((t, m.space.full_event),))) == ctx.ext.xbar[t]


def test_premeyer_hand_example():
    assert premeyer([1, 1, 1], 1) == (3, 6)


def test_class_inequalities_on_chains():
    for seed in range(6):
        m = product_model((3,), seed, "supermartingale")
        ctx = context(m)
        sigmas = [StoppingTime(((t, m.space.full_event),)) for t in ctx.ring.t1]
        rep = stopping_diagnostics(m, sigmas)
        assert rep.orientation == -1
        assert rep.d_to_dm and all(e["holds"] for e in rep.d_to_dm)
        assert all(e["holds"] for e in rep.dm_to_d)


def test_chain_limits_on_fixture_b(fb):
    m, ring, ctx = fb
    up = ring.upset
    a = chain_limit(m, [up((0, 0)), up((1, 0)), up((1, 1))])
    b = chain_limit(m, [up((0, 0)), up((0, 1)), up((1, 1))])
    assert a.limits[0] == b.limits[0] and a.terminal_value == b.terminal_value
    assert a.y_identity and b.y_identity
    p = m.space.p
    for k, t in enumerate([up((0, 0)), up((1, 0)), up((1, 1))]):
        assert a.limits[k] == cond_exp(p, ctx.filt.at(t).blocks, m.x_inf)
    const = chain_limit(m, [up((0, 0))] * 3)
    assert const.limits[0] == ctx.ext.xbar[up((0, 0))]


def test_chain_limit_rejects_growing_regions(fb):
    m, ring, _ = fb
    with pytest.raises(ModelError):
        chain_limit(m, [ring.upset((1, 1)), ring.upset((0, 0))])


def _deterministic_increasing():
    space = FiniteProbSpace(("w1", "w2"), (F(1, 2), F(1, 2)))
    pts = [(i, j) for i in range(2) for j in range(2)]
    parts = {g: Partition.trivial(2) for g in pts}
    x = {g: (F(sum(g)),) * 2 for g in pts}
    return build_model(space, [[0, 1], [0, 1]], parts, x, terminal=Partition.discrete(2))


def test_increasing_process_quasinorm_is_total_rise():
    m = _deterministic_increasing()
    assert validate_model(m).increasing
    ctx = context(m)
    rise = m.space.expect(tuple(a - b for a, b in zip(m.x_inf, m.value((0, 0)))))
    assert quasinorm(ctx) == rise == 2
    assert isometry_check(ctx).equal


def test_isometry_martingale_and_chain_supermartingale():
    rep = isometry_check(context(fixture_b()))
    assert rep.quasinorm == rep.operator_norm == 0
    for seed in range(4):
        m = product_model((3,), seed, "supermartingale")
        ctx = context(m)
        rep = isometry_check(ctx)
        first = m.ambient.points[0]
        rise = m.space.expect(tuple(a - b for a, b in zip(m.value(first), m.x_inf)))
        assert rep.equal and rep.quasinorm == rise


def test_martingale_collapse_on_chains():
    for seed in range(5):
        m = product_model((4,), seed, "martingale")
        ctx = context(m)
        assert all(not any(ctx.increment(t, u)) for t, u in lattice_pairs(ctx.ring))


def test_generic_grid_martingales_keep_the_mixed_difference():
    nonzero = 0
    for seed in range(8):
        m = general_model((2, 2), 6, seed, "martingale")
        ring = ring_of(m)
        ctx = context(m)
        rect = ring.upset((1, 0)) & ring.upset((0, 1))
        mixed = tuple(a - b - c + d for a, b, c, d in zip(m.value((1, 1)), m.value((1, 0)),
                                                          m.value((0, 1)), m.value((0, 0))))
        inc = ctx.increment(rect, ring.upset((1, 1)))
        assert inc == cond_exp(m.space.p, ctx.filt.at(rect).blocks, mixed)
        nonzero += any(inc)
    assert nonzero > 0


def test_additive_martingales_collapse():
    for seed in range(5):
        m = product_model((2, 2), seed, "additive_martingale")
        r = doob_meyer(m, samples=4)
        assert not any(r.M)


def test_demo_bound_is_groups_times_eta():
    for G in (1, 2, 4):
        rep = experiment_demo(4, 2, G, eta=F(5, 2))
        assert rep.bound == G * F(5, 2)
    rep = experiment_demo(2, 2, 1, seed=3)
    assert rep.quasinorm is None or rep.bound <= rep.quasinorm


def test_random_reconstruction_with_independent_conditional_expectation():
    rng = random.Random(0)
    for _ in range(6):
        m = general_model((2, 2), rng.randint(2, 6), rng.randrange(10 ** 6), "adapted")
        r = doob_meyer(m, samples=4)
        ctx = context(m)
        for t, a in r.A.items():
            lhs = cond_exp(m.space.p, ctx.filt.at(t).blocks, r.M)
            assert tuple(x - y for x, y in zip(lhs, a)) == ctx.ext.xbar[t]

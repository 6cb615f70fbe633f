import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from semimeas.order import (
    INF, FinitePreorder, GridAmbient, OrderPropertyError, all_preorder_relations,
    check_meet_lemma, check_meet_lemma_grid, check_order_property, check_order_property_grid,
    norberg_down, norberg_down_inverse, norberg_strict, norberg_strict_inverse,
)
from semimeas.semimodular import is_semiadditive, is_semimodular_solver


def coatoms():
    # 0 and 1 incomparable, both below 2
    return FinitePreorder([[1, 0, 1], [0, 1, 1], [0, 0, 1]])


def test_chain_has_order_property():
    assert check_order_property(FinitePreorder.chain(4)) == (True, None)


def test_incomparable_coatoms_fail_with_witness():
    ok, wit = check_order_property(coatoms())
    assert not ok and set(wit) == {0, 1}
    with pytest.raises(OrderPropertyError):
        norberg_strict(coatoms(), [(1,), (2,), (3,)])


def test_grid_has_order_property():
    assert check_order_property_grid(GridAmbient([[0, 1], [0, 1]]))[0]


def test_meet_lemma_examples():
    p = FinitePreorder.chain(3)
    assert check_meet_lemma(p, [1, 2], [1, 2])
    assert check_meet_lemma(p, [2], [0, 1])
    g = GridAmbient([[0, 1], [0, 1]])
    assert check_meet_lemma_grid(g, [(1, 0), (0, 1)], [(0, 0)])
    assert g.meet((1, 0), (0, 1)) == (0, 0)


def test_norberg_zero_and_chain():
    p = FinitePreorder.chain(3)
    assert all(v == (0,) for v in norberg_down(p, [(0,)] * 3).values.values())
    phi = norberg_down(p, [(1,), (2,), (3,)])
    assert phi.values == {0b001: (1,), 0b011: (2,), 0b111: (3,)}
    assert is_semiadditive(phi)[0]


def test_strict_correspondence_on_chain():
    p = FinitePreorder.chain(3)
    corr = norberg_strict(p, [(1,), (2,), (3,)])
    assert corr.y == (-3,)
    assert corr.psi.values[p.up_strict(0)] == (-2,)


def test_incomparable_pair_below_a_meet_is_semimodular():
    # 0 is the meet of the incomparable 1 and 2
    p = FinitePreorder([[1, 1, 1], [0, 1, 0], [0, 0, 1]])
    phi = norberg_down(p, [(5,), (-1,), (4,)])
    assert is_semimodular_solver(phi).verdict


def test_grid_pieces_one_dimension():
    g = GridAmbient([[0, 1]])
    assert g.cell_members(g.upset_of((0,))) == [(2,), (3,), (4,), INF]
    assert g.upset_of(INF) == 0


def test_grid_union_of_upsets_is_smaller_than_upset_of_meet():
    g = GridAmbient([[0, 1], [0, 1]])
    u = g.upset_of((1, 0)) | g.upset_of((0, 1))
    full = g.upset_of((0, 0))
    assert u != full and u & ~full == 0
    half = next(c for c in g.cells if c != INF and all(x == 2 for x in c))  # the open middle cell
    assert full >> g.cell_index[half] & 1 and not u >> g.cell_index[half] & 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_order_property_implies_chain_of_classes(seed):
    rng = random.Random(seed)
    p = all_preorder_relations(rng.randint(1, 6), rng)
    ok, _ = check_order_property(p)
    if ok:
        assert p.is_total()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=6), st.integers(0, 10 ** 9))
def test_norberg_round_trips(rank, seed):
    rng = random.Random(seed)
    n = len(rank)
    p = FinitePreorder([[rank[a] <= rank[b] for b in range(n)] for a in range(n)])
    base = {r: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for r in set(rank)}
    F = [(base[rank[x]],) for x in range(n)]
    assert norberg_down_inverse(p, norberg_down(p, F)) == F
    assert norberg_strict_inverse(p, norberg_strict(p, F)) == F

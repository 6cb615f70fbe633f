import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import to_mask
from semimeas.samplers import random_semilattice, random_semimodular, random_setfunction
from semimeas.semimodular import (
    NotSemimodularError, SetFunction, certify_positive_bounded, conjugate, dynkin_agree,
    extend_to_algebra, extend_to_lattice, extend_to_ring, is_semiadditive, is_semimodular_enum,
    is_semimodular_solver, semiadditive_translation, translate,
)
from semimeas.setcore import GroundSet, classify_family


def sf(n, table, dim=1):
    """Set function from ``{members: value}`` with 0-based members."""
    g = GroundSet.of_size(n)
    fam = classify_family(g, [to_mask(s) for s in table])
    vals = {to_mask(s): tuple(Fraction(x) for x in (v if isinstance(v, tuple) else (v,)))
            for s, v in table.items()}
    return SetFunction(fam, vals, dim)


def fixture_a():
    return sf(3, {(0,): 1, (0, 1): 2, (0, 2): 3})


def test_fixture_a_semimodular_with_atoms():
    f = fixture_a()
    e, s = is_semimodular_enum(f), is_semimodular_solver(f)
    assert e.answer == s.answer == "yes"
    ext = extend_to_ring(f)
    by_atom = dict(zip(ext.ring.atoms, ext.atom_values))
    assert by_atom == {1: (1,), 2: (1,), 4: (2,)}
    assert ext.translation == (0,)


def test_fixture_a_lattice_ring_and_translation():
    f = fixture_a()
    assert extend_to_lattice(f).values[0b111] == (4,)
    assert extend_to_ring(f).at(0b010) == (1,)
    y, g = semiadditive_translation(f)
    assert y == (0,) and g.values == f.values
    assert is_semiadditive(f)[0]
    assert is_semimodular_solver(translate(f, (5,))).verdict


def test_fixture_a_positive_bounded():
    rep = certify_positive_bounded(fixture_a())
    assert rep.positive and rep.bounded and rep.total_variation == 4 and rep.simple_consistent


def test_modular_failure_gives_witness():
    f = sf(2, {(): 0, (0,): 0, (1,): 0, (0, 1): 1})
    e, s = is_semimodular_enum(f), is_semimodular_solver(f)
    assert e.answer == s.answer == "no"
    assert set(e.witness["collection"]) == {0b01, 0b10}
    with pytest.raises(NotSemimodularError):
        extend_to_ring(f)


def test_union_property_family_is_always_semimodular():
    rng = random.Random(0)
    f = sf(3, {(0,): rng.randint(-5, 5), (0, 1): rng.randint(-5, 5), (0, 2): rng.randint(-5, 5)})
    assert f.domain.union_property and is_semimodular_solver(f).verdict


def test_dirac_on_cup_lattice():
    f = sf(3, {(): 0, (0,): 1, (1,): 0, (0, 1): 1, (0, 1, 2): 1})
    assert is_semimodular_solver(f).verdict and is_semiadditive(f)[0]


def test_zero_function():
    f = sf(2, {(0,): 0, (0, 1): 0})
    cert = is_semimodular_solver(f)
    assert cert.verdict and all(v == (0,) for v in cert.atom_values) and cert.c == (0,)


def test_translate_by_zero_and_double_conjugate():
    f = fixture_a()
    assert translate(f, (0,)).values == f.values
    back = conjugate(conjugate(f))
    assert back.values == f.values and back.domain.sets == f.domain.sets


def test_semiadditivity_examples():
    assert not is_semiadditive(sf(2, {(): 1, (0,): 2, (0, 1): 3}))[0]
    assert is_semiadditive(sf(2, {(0,): 1, (1,): 2, (0, 1): 3}))[0]


def test_cup_lattice_translation():
    f = sf(2, {(0,): 2, (1,): 3, (0, 1): 4})
    assert extend_to_lattice(f).values[0] == (1,)
    y, g = semiadditive_translation(f)
    assert y == (-1,) and is_semiadditive(g)[0]


def test_chain_lattice_extension_adds_only_empty_set():
    f = sf(3, {(0,): 2, (0, 1): 5, (0, 1, 2): 7})
    phi = extend_to_lattice(f)
    assert set(phi.values) == {0, 0b1, 0b11, 0b111}
    assert all(phi.values[s] == v for s, v in f.values.items())


def test_constant_function_vanishes_on_differences():
    f = sf(3, {(0,): 3, (0, 1): 3, (0, 2): 3})
    ext = extend_to_ring(f)
    assert ext.at(0b010) == ext.at(0b100) == (0,)


def test_flipped_atom_breaks_positivity():
    f = sf(3, {(0,): 1, (0, 1): 0, (0, 2): 3})
    rep = certify_positive_bounded(f)
    assert not rep.positive and rep.negative_atoms == (0b010,)


def test_algebra_extension_total():
    f = sf(2, {(0,): Fraction(1, 3)})
    ext = extend_to_algebra(f, (Fraction(1),))
    assert ext.at(0b10) == (Fraction(2, 3),) and ext.at(0b11) == (1,)
    with pytest.raises(ValueError):
        extend_to_algebra(fixture_a(), (Fraction(0),))


def test_dynkin_examples():
    p = sf(2, {(0,): Fraction(1, 4), (0, 1): 1})
    q = sf(2, {(0,): Fraction(1, 4), (0, 1): 1})
    assert dynkin_agree(p, q) == (True, None)
    r = sf(2, {(0,): Fraction(1, 2), (0, 1): 1})
    ok, wit = dynkin_agree(p, r)
    assert not ok and wit == 0b01


def test_dynkin_power_set_pi_system():
    table = {(): 0, (0,): Fraction(1, 2), (1,): Fraction(1, 3), (2,): Fraction(1, 6)}
    p = sf(3, table)
    q = sf(3, dict(table))
    assert dynkin_agree(p, q)[0]
    assert len(extend_to_algebra(p, (Fraction(1),)).function.values) == 8


def _instances(seed):
    rng = random.Random(seed)
    fam = random_semilattice(rng, rng.randint(1, 5), max_sets=7, with_empty=rng.random() < 0.3)
    return rng, fam


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_deciders_agree(seed):
    rng, fam = _instances(seed)
    f = random_setfunction(rng, fam) if rng.random() < 0.5 else random_semimodular(rng, fam)
    e, s = is_semimodular_enum(f), is_semimodular_solver(f)
    assert e.verdict == s.verdict or (e.verdict and e.incomplete)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_ring_extension_invariants(seed):
    rng, fam = _instances(seed)
    f = random_semimodular(rng, fam, dim=2)
    ext = extend_to_ring(f)
    vals = ext.function.values
    for a in vals:
        for b in vals:
            if a & b == 0:
                assert vals[a | b] == tuple(x + y for x, y in zip(vals[a], vals[b]))
    for s, v in f.values.items():
        assert vals[s] == tuple(x + c for x, c in zip(v, ext.translation))
    # conjugation preserves the answer
    assert is_semimodular_solver(conjugate(f)).verdict


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_lattice_extension_is_modular(seed):
    rng, fam = _instances(seed)
    f = random_semimodular(rng, fam)
    phi = extend_to_lattice(f).values
    for a in phi:
        for b in phi:
            assert phi[a | b][0] + phi[a & b][0] == phi[a][0] + phi[b][0]

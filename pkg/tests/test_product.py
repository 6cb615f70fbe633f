import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import to_mask
from semimeas.product import (
    ProductFamily, ProductPreconditionError, ProductSetFunction, disjoint_union_value,
    is_separately_semiadditive, is_separately_semimodular, product_extend_lattice,
    product_extend_ring, rectangle_mask,
)
from semimeas.samplers import random_product
from semimeas.semimodular import SetFunction
from semimeas.setcore import GroundSet, classify_family


def fixture_a():
    g = GroundSet.of_size(3)
    fam = classify_family(g, [0b001, 0b011, 0b101])
    return SetFunction(fam, {0b001: (1,), 0b011: (2,), 0b101: (3,)}, 1)


def test_tensor_of_fixture_a_on_the_full_rectangle():
    f = ProductSetFunction.tensor(fixture_a(), fixture_a())
    assert product_extend_lattice(f).values[(0b111, 0b111)] == (16,)


def test_product_of_semiadditive_scalars_is_separately_semiadditive():
    assert is_separately_semiadditive(ProductSetFunction.tensor(fixture_a(), fixture_a())).verdict


def test_zero_product_extends_to_zero():
    fam = fixture_a().domain
    f = ProductSetFunction(ProductFamily(fam, fam), {(a, b): (0,) for a in fam.sets for b in fam.sets}, 1)
    ext = product_extend_ring(f)
    assert all(v == (0,) for v in ext.function.values.values())


def test_bad_section_names_frozen_coordinate():
    g = GroundSet.of_size(2)
    left = classify_family(g, [0b01])
    right = classify_family(g, [0, 0b01, 0b10, 0b11])
    bad = {0: 0, 0b01: 0, 0b10: 0, 0b11: 1}
    f = ProductSetFunction(ProductFamily(left, right), {(0b01, b): (v,) for b, v in bad.items()}, 1)
    cert = is_separately_semimodular(f)
    assert not cert.verdict and cert.frozen == "left" and cert.frozen_set == 0b01
    with pytest.raises(ProductPreconditionError):
        product_extend_ring(f)


def _point_measure(n, w):
    g = GroundSet.of_size(n)
    fam = classify_family(g, range(1 << n))
    vals = {s: (sum((w[i] for i in range(n) if s >> i & 1), Fraction(0)),) for s in range(1 << n)}
    return SetFunction(fam, vals, 1)


def test_product_of_probabilities_gives_product_measure_on_atoms():
    p = _point_measure(2, [Fraction(1, 3), Fraction(2, 3)])
    q = _point_measure(2, [Fraction(1, 4), Fraction(3, 4)])
    ext = product_extend_ring(ProductSetFunction.tensor(p, q))
    for i in range(2):
        for j in range(2):
            assert ext.rectangle(1 << i, 1 << j) == (p.values[1 << i][0] * q.values[1 << j][0],)


def test_l_shaped_region():
    p = _point_measure(2, [Fraction(1), Fraction(2)])
    q = _point_measure(2, [Fraction(5), Fraction(7)])
    f = ProductSetFunction.tensor(p, q)
    ext = product_extend_ring(f)
    one, both = to_mask([0]), to_mask([0, 1])
    region = rectangle_mask(one, both, 2) | rectangle_mask(both, one, 2)
    expected = f.values[(one, both)][0] + f.values[(both, one)][0] - f.values[(one, one)][0]
    assert ext.at(region) == (expected,) == disjoint_union_value(ext, region)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_random_products_restrict_and_match_rectangle_forms(seed):
    rng = random.Random(seed)
    f = random_product(rng, rng.randint(1, 3), rng.randint(1, 3), dim=rng.choice((1, 2)))
    ext = product_extend_ring(f)
    for (a, b), v in f.values.items():
        assert ext.rectangle(a, b) == v
    for m in ext.function.values:
        assert disjoint_union_value(ext, m) == ext.at(m)
    lat = product_extend_lattice(f)
    for key, v in f.values.items():
        assert lat.values[key] == v

import json
from fractions import Fraction

import pytest

from conftest import FIXTURE_A, NOT_SEMILATTICE
from semimeas import io
from semimeas.product import ProductSetFunction
from semimeas.stoch import fixture_b
from semimeas.stoch.generators import general_model


@pytest.mark.parametrize("good,expected", [(3, Fraction(3)), ("-7/4", Fraction(-7, 4)), ("0", 0)])
def test_parse_rational_accepts_exact_forms(good, expected):
    assert io.parse_rational(good) == expected


@pytest.mark.parametrize("bad", [0.5, True, "x", "1/0", None])
def test_parse_rational_rejects_inexact_and_junk(bad):
    with pytest.raises(io.InputError):
        io.parse_rational(bad)


def test_parse_value_scalar_and_vector():
    assert io.parse_value("1/2") == (Fraction(1, 2),)
    assert io.parse_value([1, "2/3"]) == (1, Fraction(2, 3))
    with pytest.raises(io.InputError):
        io.parse_value([])


def test_setfunction_round_trip():
    f = io.parse_setfunction(FIXTURE_A)
    g = io.parse_setfunction(json.loads(io.dumps(io.setfunction_doc(f))))
    assert g.values == f.values and g.domain.sets == f.domain.sets and g.dim == 1


def test_product_round_trip():
    f = io.parse_setfunction(FIXTURE_A)
    p = ProductSetFunction.tensor(f, f)
    q = io.parse_product(json.loads(io.dumps(io.product_doc(p))))
    assert q.values == p.values


@pytest.mark.parametrize("model", [fixture_b(), general_model((2, 2), 5, 3, "adapted")])
def test_model_round_trip(model):
    back = io.parse_model(json.loads(io.dumps(io.model_doc(model))))
    assert back.x == model.x and back.x_inf == model.x_inf
    assert back.space.p == model.space.p


@pytest.mark.parametrize("doc", [
    {"dim": 1, "values": []},
    {"family": FIXTURE_A["family"], "dim": 1, "values": [{"set": ["1"], "value": 0.5}]},
    {"family": FIXTURE_A["family"], "dim": 1, "values": [{"set": ["9"], "value": "1"}]},
    {"family": FIXTURE_A["family"], "dim": 2, "values": [{"set": ["1"], "value": "1"}]},
])
def test_malformed_setfunctions_raise_input_error(doc):
    with pytest.raises(io.InputError):
        io.parse_setfunction(doc)


def test_semilattice_requirement():
    with pytest.raises(io.InputError):
        io.require_semilattice(io.parse_family(NOT_SEMILATTICE))


def test_fractions_serialize_as_strings():
    assert json.loads(io.dumps({"v": (Fraction(1, 3), Fraction(2))})) == {"v": ["1/3", "2"]}

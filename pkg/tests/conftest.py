import json

import pytest

from semimeas import io
from semimeas.stoch import fixture_b
from semimeas.stoch.generators import general_model, product_model

FIXTURE_A = {
    "family": {"ground": {"labels": ["1", "2", "3"]}, "sets": [["1"], ["1", "2"], ["1", "3"]]},
    "dim": 1,
    "values": [{"set": ["1"], "value": "1"}, {"set": ["1", "2"], "value": "2"},
               {"set": ["1", "3"], "value": "3"}],
}

NON_MODULAR = {
    "family": {"ground": {"labels": ["1", "2"]}, "sets": [[], ["1"], ["2"], ["1", "2"]]},
    "dim": 1,
    "values": [{"set": [], "value": "0"}, {"set": ["1"], "value": "1"},
               {"set": ["2"], "value": "1"}, {"set": ["1", "2"], "value": "3"}],
}

# a chain with no ground-set member, so the algebra total is free
OPEN_CHAIN = {
    "family": {"ground": {"labels": ["a", "b", "c"]}, "sets": [["a"], ["a", "b"]]},
    "dim": 1,
    "values": [{"set": ["a"], "value": "2"}, {"set": ["a", "b"], "value": "5"}],
}

NOT_SEMILATTICE = {"ground": {"labels": ["1", "2", "3"]}, "sets": [["1", "2"], ["2", "3"], ["1"]]}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)

    fa = {"family": FIXTURE_A["family"], "dim": 1, "values": FIXTURE_A["values"]}
    product = {
        "left": FIXTURE_A["family"], "right": FIXTURE_A["family"], "dim": 1,
        "values": [{"a": x["set"], "b": y["set"],
                    "value": str(int(x["value"]) * int(y["value"]))}
                   for x in FIXTURE_A["values"] for y in FIXTURE_A["values"]],
    }
    return {
        "fa": write("fa.json", fa),
        "nonmod": write("nonmod.json", NON_MODULAR),
        "open_chain": write("open_chain.json", OPEN_CHAIN),
        "not_semilattice": write("not_semilattice.json", {"family": NOT_SEMILATTICE, "dim": 1,
                                                          "values": []}),
        "broken": write("broken.json", "{not json"),
        "product": write("product.json", product),
        "fb": write("fb.json", io.model_doc(fixture_b())),
        "chain": write("chain.json", io.model_doc(product_model((3,), 1, "supermartingale"))),
        "g22": write("g22.json", io.model_doc(general_model((2, 2), 5, 2, "adapted"))),
        "g23": write("g23.json", io.model_doc(general_model((2, 3), 4, 0, "adapted"))),
    }

from fractions import Fraction

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import FIXTURE_A, OPEN_CHAIN
from semimeas import DoobMeyer, QuasiMartingaleNorm, Riesz, SemimodularExtender
from semimeas.stoch import context, fixture_b
from semimeas.stoch.generators import product_model


def test_extender_fit_returns_self_and_transforms_labels_and_masks():
    est = SemimodularExtender(target="ring")
    assert est.fit(FIXTURE_A) is est
    assert est.transform([["1", "2", "3"], 0]) == [(4,), (0,)]
    assert est.transform([0b010]) == [(1,)]


def test_extender_params_and_clone():
    est = SemimodularExtender(target="algebra", total=0)
    assert est.get_params() == {"target": "algebra", "total": 0, "verify": True}
    c = clone(est)
    assert c.get_params() == est.get_params() and not hasattr(c, "values_")


def test_extender_lattice_and_algebra_targets():
    lat = SemimodularExtender(target="lattice").fit(FIXTURE_A)
    assert lat.transform([["1", "2", "3"]]) == [(4,)]
    with pytest.raises(ValueError):
        lat.transform([["2"]])
    alg = SemimodularExtender(target="algebra", total=0).fit(OPEN_CHAIN)
    assert alg.transform([["c"], ["a", "b"]]) == [(-5,), (5,)]


def test_unfitted_and_invalid_use():
    with pytest.raises(NotFittedError):
        SemimodularExtender().transform([0])
    with pytest.raises(ValueError):
        SemimodularExtender(target="sigma").fit(FIXTURE_A)
    with pytest.raises(TypeError):
        SemimodularExtender().fit(FIXTURE_A).transform([True])


def test_doob_meyer_estimator_on_martingale():
    est = DoobMeyer(samples=4).fit(fixture_b())
    assert not any(est.M_)
    xbar = context(est.model_).ext.xbar
    a = est.transform()
    assert len(a) == est.ring_.full + 1
    assert all(v == tuple(-c for c in xbar[t]) for t, v in enumerate(a))
    with pytest.raises(ValueError):
        est.transform([est.ring_.full + 1])


def test_riesz_estimator_vanishes_on_lattice_regions():
    est = Riesz().fit(fixture_b())
    z = dict(zip(est.ring_.t1, est.transform(est.ring_.t1)))
    assert all(not any(v) for v in z.values())


def test_quasinorm_estimator_scores():
    m = fixture_b()
    assert QuasiMartingaleNorm().fit(m).quasinorm_ == 0
    sup = product_model((3,), 1, "supermartingale")
    q = QuasiMartingaleNorm().fit(sup).quasinorm_
    assert q > 0 and QuasiMartingaleNorm().score(sup) == -q
    assert isinstance(q, Fraction)

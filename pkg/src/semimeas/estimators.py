"""scikit-learn style wrappers.

``fit`` takes the object to analyse (a set function or a grid model, or their JSON form);
fitted attributes end in an underscore.  Outputs are exact fractions, not float arrays.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .semimodular import extend_to_algebra, extend_to_lattice, extend_to_ring
from .stoch import context, doob_meyer, quasinorm, riesz
from .validation import as_masks, as_model, as_setfunction, as_value

TARGETS = ("lattice", "ring", "algebra")


class SemimodularExtender(TransformerMixin, BaseEstimator):
    """Extend a semi-modular set function; ``transform`` evaluates the extension on sets."""

    def __init__(self, target: str = "ring", total=None, verify: bool = True):
        self.target = target
        self.total = total
        self.verify = verify

    def fit(self, X, y=None):
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}, not {self.target!r}")
        f = as_setfunction(X)
        if self.target == "lattice":
            self.values_ = extend_to_lattice(f, verify=self.verify).values
            ext = extend_to_ring(f, verify=self.verify)
        else:
            if self.target == "ring":
                ext = extend_to_ring(f, verify=self.verify)
            else:
                total = None if self.total is None else as_value(self.total, f.dim)
                ext = extend_to_algebra(f, total)
            self.values_ = ext.function.values
        self.input_ = f
        self.ground_ = f.ground
        self.atoms_ = ext.ring.atoms
        self.atom_values_ = ext.atom_values
        self.translation_ = ext.translation
        return self

    def transform(self, X):
        """Extended values of the given sets (bitmasks or label lists)."""
        check_is_fitted(self, "values_")
        out = []
        for m in as_masks(self.ground_, X):
            if m not in self.values_:
                raise ValueError(f"{self.ground_.members(m)} is outside the {self.target}")
            out.append(self.values_[m])
        return out


class _ModelEstimator(BaseEstimator):
    def _regions(self, X):
        check_is_fitted(self, "ring_")
        regions = list(X) if X is not None else list(range(self.ring_.full + 1))
        for t in regions:
            if not 0 <= t <= self.ring_.full:
                raise ValueError(f"region {t} is not in the predictable ring")
        return regions


class DoobMeyer(_ModelEstimator):
    """``X_tau = E[M | F_tau] - A_tau`` on every predictable region."""

    def __init__(self, seed: int = 0, samples: int = 24):
        self.seed = seed
        self.samples = samples

    def fit(self, X, y=None):
        m = as_model(X)
        res = doob_meyer(m, seed=self.seed, samples=self.samples)
        self.model_ = m
        self.ring_ = context(m).ring
        self.M_ = res.M
        self.A_ = dict(res.A)
        self.dstar_ = res.dstar
        self.result_ = res
        return self

    def transform(self, X=None):
        """Compensator values at the given regions (all regions when ``X`` is None)."""
        return [self.A_[t] for t in self._regions(X)]


class Riesz(_ModelEstimator):
    """``X_tau = E[M | F_tau] + Z_tau`` with ``Z`` vanishing at the empty region."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def fit(self, X, y=None):
        m = as_model(X)
        res = riesz(m, seed=self.seed)
        self.model_ = m
        self.ring_ = context(m).ring
        self.M_ = res.M
        self.Z_ = dict(res.Z)
        self.result_ = res
        return self

    def transform(self, X=None):
        return [self.Z_[t] for t in self._regions(X)]


class QuasiMartingaleNorm(BaseEstimator):
    """Exact quasi-martingale norm; ``score`` is its negative, so smaller norms score higher."""

    def fit(self, X, y=None):
        m = as_model(X)
        self.quasinorm_ = quasinorm(context(m))
        return self

    def score(self, X, y=None):
        return -QuasiMartingaleNorm().fit(X).quasinorm_


__all__ = ["SemimodularExtender", "DoobMeyer", "Riesz", "QuasiMartingaleNorm"]

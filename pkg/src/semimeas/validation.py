"""Input coercion shared by the estimators and the command line."""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable

from . import io
from .product import ProductSetFunction
from .semimodular import SetFunction
from .setcore import GroundSet
from .stoch.model import GridModel


def as_setfunction(obj: Any) -> SetFunction:
    """A :class:`SetFunction` from itself, a JSON document, or a path to one."""
    if isinstance(obj, SetFunction):
        return obj
    if isinstance(obj, str):
        obj = io.load(obj)
    if isinstance(obj, dict):
        return io.parse_setfunction(obj)
    raise TypeError(f"expected a set function, got {type(obj).__name__}")


def as_product(obj: Any) -> ProductSetFunction:
    if isinstance(obj, ProductSetFunction):
        return obj
    if isinstance(obj, str):
        obj = io.load(obj)
    if isinstance(obj, dict):
        return io.parse_product(obj)
    raise TypeError(f"expected a product set function, got {type(obj).__name__}")


def as_model(obj: Any) -> GridModel:
    if isinstance(obj, GridModel):
        return obj
    if isinstance(obj, str):
        obj = io.load(obj)
    if isinstance(obj, dict):
        return io.parse_model(obj)
    raise TypeError(f"expected a grid model, got {type(obj).__name__}")


def as_mask(ground: GroundSet, s) -> int:
    """Accept a bitmask or an iterable of labels."""
    if isinstance(s, bool):
        raise TypeError("a set cannot be a boolean")
    if isinstance(s, int):
        if not 0 <= s <= ground.full:
            raise ValueError(f"mask {s} is outside the ground set")
        return s
    return ground.mask(s)


def as_masks(ground: GroundSet, sets: Iterable) -> list[int]:
    return [as_mask(ground, s) for s in sets]


def as_value(v, dim: int) -> tuple[Fraction, ...]:
    vals = tuple(Fraction(x) for x in (v if isinstance(v, (list, tuple)) else (v,)))
    if len(vals) != dim:
        raise ValueError(f"expected a value of dimension {dim}, got {len(vals)}")
    return vals

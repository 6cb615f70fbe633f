"""JSON encoding of families, set functions, product functions and grid models.

Rationals travel as strings (``"3"``, ``"-1/4"``) so nothing passes through floating point.
"""
from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any, Mapping

from .product import ProductFamily, ProductSetFunction
from .semimodular import SetFunction
from .order import FinitePreorder, GridAmbient
from .setcore import GroundSet, SetFamily, classify_family
from .stoch.model import FiniteProbSpace, GridModel, Partition, build_model


class InputError(ValueError):
    """Malformed or inconsistent JSON input."""


def parse_rational(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"rationals must be integers or 'p/q' strings, got {x!r}")
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise InputError(f"not a rational: {x!r}") from err


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def parse_value(v) -> tuple[Fraction, ...]:
    if isinstance(v, list):
        if not v:
            raise InputError("empty value vector")
        return tuple(parse_rational(c) for c in v)
    return (parse_rational(v),)


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, Mapping):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _key(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, tuple):
        return "(" + ",".join(str(x) for x in k) + ")"
    return str(k)


def dumps(report: Any) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"


def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise InputError(f"{path} is not valid JSON: {err}") from err


# --- families and set functions ----------------------------------------------------------

def _require(doc, *keys, what="input"):
    if not isinstance(doc, Mapping):
        raise InputError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise InputError(f"{what} is missing the {missing[0]!r} field")


def parse_ground(doc) -> GroundSet:
    # a bare list of labels is accepted as shorthand
    if isinstance(doc, list):
        labels = doc
    else:
        _require(doc, "labels", what="ground set")
        labels = doc["labels"]
    try:
        return GroundSet(labels)
    except (TypeError, ValueError) as err:
        raise InputError(str(err)) from err


def ground_doc(g: GroundSet) -> dict:
    return {"labels": list(g.labels)}


def parse_family(doc) -> SetFamily:
    _require(doc, "ground", "sets", what="set family")
    ground = parse_ground(doc["ground"])
    try:
        sets = [ground.mask(s) for s in doc["sets"]]
    except (TypeError, ValueError) as err:
        raise InputError(str(err)) from err
    if len(set(sets)) != len(sets):
        raise InputError("set family lists a set twice")
    return classify_family(ground, sets)


def family_doc(fam: SetFamily) -> dict:
    return {"ground": ground_doc(fam.ground), "sets": [fam.ground.members(s) for s in fam.sets]}


def require_semilattice(fam: SetFamily, what: str = "the family") -> SetFamily:
    if not fam.is_semilattice:
        raise InputError(f"{what} is closed under neither intersection nor union, so it is not "
                         "a semi-lattice of sets")
    return fam


def _dim(doc, vals) -> int:
    dims = {len(v) for v in vals}
    d = doc.get("dim")
    if d is not None:
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise InputError("'dim' must be a positive integer")
        dims.add(d)
    if len(dims) != 1:
        raise InputError("values have inconsistent dimensions")
    return dims.pop()


def parse_setfunction(doc) -> SetFunction:
    _require(doc, "family", "values", what="set function")
    fam = require_semilattice(parse_family(doc["family"]), "the domain")
    vals = {}
    for e in doc["values"]:
        _require(e, "set", "value", what="value entry")
        try:
            m = fam.ground.mask(e["set"])
        except (TypeError, ValueError) as err:
            raise InputError(str(err)) from err
        if m not in fam:
            raise InputError(f"value given for {fam.ground.members(m)}, which is not in the family")
        if m in vals:
            raise InputError(f"two values given for {fam.ground.members(m)}")
        vals[m] = parse_value(e["value"])
    d = _dim(doc, vals.values())
    try:
        return SetFunction(fam, vals, d)
    except ValueError as err:
        raise InputError(str(err)) from err


def setfunction_doc(f: SetFunction) -> dict:
    g = f.ground
    return {"family": family_doc(f.domain), "dim": f.dim,
            "values": [{"set": g.members(s), "value": [format_rational(c) for c in f.values[s]]}
                       for s in f.domain.sets]}


def parse_product(doc) -> ProductSetFunction:
    _require(doc, "left", "right", "values", what="product set function")
    left = require_semilattice(parse_family(doc["left"]), "the left factor")
    right = require_semilattice(parse_family(doc["right"]), "the right factor")
    vals = {}
    for e in doc["values"]:
        _require(e, "a", "b", "value", what="value entry")
        try:
            key = (left.ground.mask(e["a"]), right.ground.mask(e["b"]))
        except (TypeError, ValueError) as err:
            raise InputError(str(err)) from err
        vals[key] = parse_value(e["value"])
    d = _dim(doc, vals.values())
    try:
        return ProductSetFunction(ProductFamily(left, right), vals, d)
    except ValueError as err:
        raise InputError(str(err)) from err


def product_doc(f: ProductSetFunction) -> dict:
    L, R = f.base.left, f.base.right
    return {"left": family_doc(L), "right": family_doc(R), "dim": f.dim,
            "values": [{"a": L.ground.members(a), "b": R.ground.members(b),
                        "value": [format_rational(c) for c in v]}
                       for (a, b), v in f.values.items()]}


def parse_preorder(doc) -> FinitePreorder:
    _require(doc, "n", "leq", what="preorder")
    try:
        p = FinitePreorder(doc["leq"])
    except (TypeError, ValueError) as err:
        raise InputError(str(err)) from err
    if p.n != doc["n"]:
        raise InputError("'n' does not match the size of 'leq'")
    return p


def preorder_doc(p: FinitePreorder) -> dict:
    return {"n": p.n, "leq": [list(r) for r in p.leq]}


def parse_ambient(doc) -> GridAmbient:
    _require(doc, "levels", what="grid")
    try:
        return GridAmbient([[parse_rational(v) for v in lv] for lv in doc["levels"]],
                           doc.get("formal_top", True))
    except InputError:
        raise
    except (TypeError, ValueError) as err:
        raise InputError(str(err)) from err


# --- grid models -------------------------------------------------------------------------

def _point(key: str):
    key = key.strip()
    if key in ("inf", "∞"):
        return "inf"
    try:
        inner = key.strip("()")
        return tuple(int(p) for p in inner.split(",") if p.strip() != "")
    except ValueError as err:
        raise InputError(f"bad grid point key {key!r}") from err


def parse_model(doc: Mapping) -> GridModel:
    try:
        omega = [str(w) for w in doc["omega"]]
        p = [parse_rational(x) for x in doc["p"]]
        levels = doc["grid"]["levels"]
        filt = doc["filtration"]
        proc = doc["process"]
    except (KeyError, TypeError) as err:
        raise InputError(f"model is missing a field: {err}") from err
    try:
        space = FiniteProbSpace(tuple(omega), tuple(p))
        index = {w: i for i, w in enumerate(omega)}

        def part(blocks):
            return Partition.from_blocks(len(omega), [[index[str(w)] for w in b] for b in blocks])

        parts, terminal = {}, None
        for k, blocks in filt.items():
            pt = _point(k)
            if pt == "inf":
                terminal = part(blocks)
            else:
                parts[pt] = part(blocks)
        x, x_inf = {}, None
        for k, vals in proc.items():
            pt = _point(k)
            vec = tuple(parse_rational(v) for v in vals)
            if pt == "inf":
                x_inf = vec
            else:
                x[pt] = vec
        levels = [[parse_rational(v) for v in lv] for lv in levels]
        return build_model(space, levels, parts, x, x_inf, terminal, doc.get("x_inf_mode", "max_grid"))
    except KeyError as err:
        raise InputError(f"unknown outcome label {err.args[0]!r}") from err
    except InputError:
        raise
    except ValueError as err:
        raise InputError(str(err)) from err


def model_doc(m: GridModel) -> dict:
    omega = list(m.space.omega)

    def blocks(p: Partition):
        return [[omega[w] for w in b] for b in p.blocks]

    filt = {_key(g): blocks(p) for g, p in m.filtration.parts.items()}
    filt["inf"] = blocks(m.filtration.terminal)
    proc = {_key(g): [format_rational(v) for v in x] for g, x in m.x.items()}
    proc["inf"] = [format_rational(v) for v in m.x_inf]
    return {
        "omega": omega,
        "p": [format_rational(w) for w in m.space.p],
        "grid": {"levels": [[format_rational(v) for v in lv] for lv in m.ambient.levels]},
        "filtration": filt,
        "process": proc,
        "x_inf_mode": m.x_inf_mode,
    }

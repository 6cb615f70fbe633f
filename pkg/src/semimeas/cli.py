"""``semimeas`` command-line interface.

Exit codes: 0 success, 1 a property or identity failed, 2 the input was malformed or outside
what the library supports.  Reports go to stdout (or ``--output``); progress goes to stderr.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import __version__, io
from .product import (
    ProductPreconditionError, _atom_route, _direct_solve, product_extend_ring, rectangle_mask,
)
from .semimodular import (
    NotSemimodularError, certify_positive_bounded, extend_to_algebra, extend_to_lattice,
    extend_to_ring, is_semiadditive, is_semimodular_enum, is_semimodular_solver,
)
from .setcore import InternalIdentityError, SetCoreError, generate_ring

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_MAX_ATOMS = 24
DEFAULT_MAX_CELLS = 64


class Failure(Exception):
    """An identity or property failed; the partial report is attached."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


def entry(name: str, lhs, rhs, at=None) -> dict:
    e = {"name": name, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs}
    if at is not None:
        e["at"] = at
    return e


def bound(name: str, lhs, rhs, at=None) -> dict:
    e = {"name": name, "lhs": lhs, "rhs": rhs, "relation": "<=", "holds": lhs <= rhs}
    if at is not None:
        e["at"] = at
    return e


def _ledger_ok(ledger: Sequence[dict]) -> bool:
    return all(e.get("equal", True) and e.get("holds", True) for e in ledger)


def _progress(msg: str) -> None:
    print(f"[semimeas] {msg}", file=sys.stderr)


# --- check / extend ----------------------------------------------------------------------

def _sets(ground, masks) -> list:
    return [ground.members(m) for m in masks]


def _family_flags(fam) -> dict:
    return {"cap_closed": fam.cap_closed, "cup_closed": fam.cup_closed, "kind": fam.kind,
            "is_semilattice": fam.is_semilattice, "members": len(fam)}


def _certificate(cert, ground) -> dict:
    out = {"verdict": cert.answer, "method": cert.method}
    if cert.method == "enumerative":
        out["incomplete"] = cert.incomplete
    w = cert.witness
    if w:
        if "collection" in w:
            out["witness"] = {"collection": _sets(ground, w["collection"]),
                              "combined": ground.members(w["combined"]), "lhs": w["lhs"],
                              "rhs": w["rhs"]}
        else:
            out["witness"] = {"coordinate": w["coordinate"], "residual": w["residual"],
                              "multipliers": [{"set": ground.members(s), "multiplier": m}
                                              for s, m in w["multipliers"].items()]}
    if cert.verdict and cert.atom_values is not None:
        out["translation"] = cert.c
        out["translation_free"] = cert.c_free
    return out


def cmd_check(args) -> dict:
    doc = io.load(args.input)
    if isinstance(doc, dict) and "family" in doc:
        f = io.parse_setfunction(doc)
        fam = f.domain
    else:
        fam = io.require_semilattice(io.parse_family(doc))
        f = None
    rep: dict[str, Any] = {"family": _family_flags(fam), "ledger": []}
    if f is None:
        return rep
    enum = is_semimodular_enum(f, max_collection=args.max_collection)
    solver = is_semimodular_solver(f)
    g = f.ground
    rep["verdicts"] = {"enumerative": _certificate(enum, g), "solver": _certificate(solver, g)}
    # a truncated enumeration that finds nothing is not evidence against the solver
    agree = enum.verdict == solver.verdict or (enum.verdict and enum.incomplete)
    rep["agree"] = agree
    rep["semimodular"] = solver.verdict
    if solver.verdict:
        rep["semiadditive"] = is_semiadditive(f)[0]
        ring = solver.ring
        for s in f.domain.sets:
            tot = [Fraction(0)] * f.dim
            for i in ring.atom_of[s]:
                tot = [a + b for a, b in zip(tot, solver.atom_values[i])]
            rhs = tuple(a + b for a, b in zip(f.values[s], solver.c))
            rep["ledger"].append(entry("atom_sum_equals_value_plus_translation", tuple(tot), rhs,
                                       g.members(s)))
    if not agree:
        raise Failure("the enumerative and solver deciders disagree", rep)
    return rep


def _ring_report(ext, g) -> dict:
    ring = ext.ring
    return {
        "atom_table": {",".join(g.members(a)): v for a, v in zip(ring.atoms, ext.atom_values)},
        "values": [{"set": g.members(s), "value": v} for s, v in ext.function.values.items()],
        "translation": ext.translation,
    }


def cmd_extend(args) -> dict:
    doc = io.load(args.input)
    if args.product:
        return _extend_product(io.parse_product(doc))
    f = io.parse_setfunction(doc)
    g = f.ground
    try:
        ext = extend_to_ring(f)
    except NotSemimodularError as err:
        raise io.InputError("the set function is not semi-modular, so it has no additive "
                            "extension: " + str(_certificate(err.certificate, g).get("witness")))
    ledger: list[dict] = []
    rep: dict[str, Any] = {"target": args.to, "semiadditive": is_semiadditive(f)[0],
                           "translation": ext.translation}
    for (a, b), v in ext.difference_map.items():
        ledger.append(entry("difference_rule", ext.at(a & ~b), v, [g.members(a), g.members(b)]))
    if args.to == "lattice":
        lat = extend_to_lattice(f)
        rep["values"] = [{"set": g.members(s), "value": v} for s, v in lat.values.items()]
        for s in f.domain.sets:
            ledger.append(entry("restricts_to_input", lat.values[s], f.values[s], g.members(s)))
        members = list(lat.values)
        bad = 0
        for a in members:
            for b in members:
                lhs = tuple(x + y for x, y in zip(lat.values[a | b], lat.values[a & b]))
                rhs = tuple(x + y for x, y in zip(lat.values[a], lat.values[b]))
                bad += lhs != rhs
        ledger.append(entry("modular_pairs_failing", bad, 0))
    elif args.to == "ring":
        rep.update(_ring_report(ext, g))
        for s in f.domain.sets:
            ledger.append(entry("restricts_to_translated_input", ext.at(s),
                                tuple(a + b for a, b in zip(f.values[s], ext.translation)),
                                g.members(s)))
    else:
        total = None if args.total is None else tuple(io.parse_rational(t) for t in args.total.split(","))
        try:
            alg = extend_to_algebra(f, total)
        except ValueError as err:
            raise io.InputError(str(err)) from err
        rep.update(_ring_report(alg, g))
        top = alg.function.values[g.full]
        rep["total"] = top
        for s, v in alg.function.values.items():
            ledger.append(entry("complement_rule", alg.function.values[g.full & ~s],
                                tuple(t - x for t, x in zip(top, v)), g.members(s)))
    if f.dim == 1:
        pos = certify_positive_bounded(f)
        rep["positivity"] = {"positive": pos.positive, "bounded": pos.bounded,
                             "total_variation": pos.total_variation,
                             "negative_atoms": _sets(g, pos.negative_atoms),
                             "simple_functions_checked": pos.simple_checked,
                             "simple_functions_consistent": pos.simple_consistent}
        if args.to == "algebra":
            # the complement atom can carry negative mass even when the ring part does not
            neg = [a for a, v in zip(alg.ring.atoms, alg.atom_values) if v[0] < 0]
            rep["positivity"].update({
                "positive": not neg, "negative_atoms": _sets(g, neg),
                "total_variation": sum((abs(v[0]) for v in alg.atom_values), Fraction(0))})
        ledger.append(entry("simple_function_integrals_consistent", pos.simple_consistent, True))
    rep["ledger"] = ledger
    if not _ledger_ok(ledger):
        raise Failure("an extension identity failed", rep)
    return rep


def _extend_product(f) -> dict:
    L, R = f.base.left, f.base.right
    try:
        ext = product_extend_ring(f)
    except ProductPreconditionError as err:
        raise io.InputError(f"{err}: a section fails ({err.certificate.frozen} coordinate frozen "
                            f"at {(L if err.certificate.frozen == 'left' else R).ground.members(err.certificate.frozen_set)})")
    ringL, ringR = generate_ring(L), generate_ring(R)
    left_first, right_first = _atom_route(f, True), _atom_route(f, False)
    direct = _direct_solve(f, ringL, ringR)
    ledger = [entry("left_first_equals_right_first", left_first, right_first),
              entry("left_first_equals_direct_solve", left_first, direct)]
    nr = R.ground.n
    for (a, b), v in f.values.items():
        ledger.append(entry("restricts_to_input", ext.at(rectangle_mask(a, b, nr)), v,
                            [L.ground.members(a), R.ground.members(b)]))
    rep = {
        "target": "product_ring",
        "left_atoms": _sets(L.ground, ext.left_atoms),
        "right_atoms": _sets(R.ground, ext.right_atoms),
        "atom_tensor": [{"a": L.ground.members(ext.left_atoms[i]),
                         "b": R.ground.members(ext.right_atoms[j]), "value": v}
                        for (i, j), v in sorted(ext.atom_values.items())],
        "ledger": ledger,
    }
    if not _ledger_ok(ledger):
        raise Failure("a product identity failed", rep)
    return rep


# --- process -----------------------------------------------------------------------------

def _region(ring, region: int) -> str:
    return "{" + ",".join(ring.ground.members(region)) + "}"


def _cell(c) -> Any:
    return c if isinstance(c, str) else list(c)


def _load_model(args):
    m = io.parse_model(io.load(args.input))
    cells = 1
    for p in m.ambient.pieces:
        cells *= p
    if cells > args.max_cells:
        raise io.InputError(f"grid has {cells} cells, above the cap {args.max_cells}")
    from .stoch import region_ring
    ring = region_ring(m.ambient)
    if ring.n_atoms > args.max_atoms:
        raise io.InputError(f"{ring.n_atoms} predictable atoms, above the cap {args.max_atoms}")
    return m, ring


def _greedy_chain(ring) -> list[int]:
    """A maximal decreasing chain of lattice regions from the full region to the empty one."""
    t1 = sorted(set(ring.t1) | {ring.full, 0}, key=lambda r: (-bin(r).count("1"), r))
    chain = [t1[0]]
    for r in t1[1:]:
        if r & ~chain[-1] == 0 and r != chain[-1]:
            chain.append(r)
    return chain


def cmd_process(args) -> dict:
    from .stoch import context, validate_model
    from .stoch.model import rv_add, rv_sub
    m, ring = _load_model(args)
    rep: dict[str, Any] = {"op": args.op, "atoms": {f"a{i}": [_cell(c) for c in ring.ambient.cell_members(a)]
                                                    for i, a in enumerate(ring.atoms)}}
    ledger: list[dict] = []
    sp = m.space
    if args.op == "validate":
        r = validate_model(m)
        rep.update({"martingale": r.martingale, "supermartingale": r.supermartingale,
                    "submartingale": r.submartingale, "increasing": r.increasing,
                    "pairs_checked": r.pairs_checked,
                    "witnesses": {k: [_cell(x) for x in v] for k, v in r.witnesses.items()}})
        if m.x_inf_mode == "max_grid":
            ledger.append(entry("x_inf_is_value_at_max", m.x_inf, m.x[m.ambient.max_point]))
        rep["ledger"] = ledger
        return rep

    ctx = context(m, ring=ring)
    ext = ctx.ext
    if args.op == "extend":
        from .stoch import adaptedness, check_strong_additivity
        rep["xbar"] = {_region(ring, t): v for t, v in sorted(ext.xbar.items())}
        for g in m.points():
            ledger.append(entry("xbar_at_strict_upset", ext.xbar[ring.upset(g)], m.value(g), _cell(g)))
        ledger.append(entry("xbar_at_empty_region", ext.xbar[0], m.x_inf))
        ok, wit = check_strong_additivity(ext)
        ledger.append(entry("strongly_additive", ok, True, None if ok else [_region(ring, w) for w in wit]))
        bad = adaptedness(m, ext, ctx.filt)
        rep["not_adapted"] = [_region(ring, t) for t in bad]
        rep["filtration"] = {_region(ring, t): ctx.filt.at(t).blocks for t in sorted(ctx.filt.parts)}
    elif args.op == "quasinorm":
        from .stoch.quasi import enumerate_dpartitions, quasinorm, variation
        q = quasinorm(ctx)
        rep["quasinorm"] = q
        if ring.n_atoms <= 12:
            brute = max(sp.expect(variation(ctx, d)[1]) for d in enumerate_dpartitions(ring))
            ledger.append(entry("quasinorm_equals_enumerated_maximum", q, brute))
    elif args.op == "isometry":
        from .stoch import isometry_check
        r = isometry_check(ctx)
        rep.update({"quasinorm": r.quasinorm, "operator_norm": r.operator_norm,
                    "partitions": r.partitions, "sign_patterns": r.sign_patterns})
        ledger.append(entry("quasinorm_equals_operator_norm", r.quasinorm, r.operator_norm))
    elif args.op == "riesz":
        from .stoch import riesz
        r = riesz(m, seed=args.seed)
        t1 = set(ring.t1)
        rep.update({"M": r.M,
                    "Z": {_region(ring, t): z for t, z in sorted(r.Z.items()) if t in t1},
                    "Z_outside_lattice": {_region(ring, t): z for t, z in sorted(r.Z.items())
                                          if t not in t1},
                    "lattice_supermartingale": r.lattice_supermartingale,
                    "lattice_nonnegative": r.lattice_nonnegative, "lattice_zero": r.lattice_zero,
                    "ring_supermartingale": r.ring_supermartingale, "nonnegative": r.nonnegative,
                    "perturbation_detected": r.perturbation_detected})
        for t, z in sorted(r.Z.items()):
            ledger.append(entry("riesz", ext.xbar[t], rv_add(ctx.cond(r.M, t), z), _region(ring, t)))
        ledger.append(entry("potential_vanishes_at_empty_region", r.Z[0], tuple([Fraction(0)] * m.n)))
    elif args.op == "doob-meyer":
        from .stoch import doob_meyer, mu_alpha, variation
        r = doob_meyer(m, seed=args.seed)
        rep.update({
            "M": r.M, "A": {_region(ring, t): a for t, a in sorted(r.A.items())},
            "dstar": [[_region(ring, t), _region(ring, u)] for t, u in r.dstar.pairs],
            "invariant_under_reordering": r.invariant_under_reordering,
            "adapted_everywhere": r.adapted_everywhere,
            "stabilization": r.stabilization, "orientation": r.orientation,
            "diagnostics": {
                "explicit_alpha_agrees_at": [_region(ring, t) for t in r.explicit_alpha_agrees],
                "naturality_holds_at": [_region(ring, t) for t in r.naturality_holds],
                "A_not_measurable_at": [_region(ring, t) for t in r.non_measurable],
            },
        })
        for t, a in sorted(r.A.items()):
            ledger.append(entry("doob_meyer", ext.xbar[t], rv_sub(ctx.cond(r.M, t), a), _region(ring, t)))
        ledger.append(entry("mu_density_equals_variation", r.M, variation(ctx, r.dstar)[0]))
        literal = 0
        total = 0
        for t in ring.t1:
            for w in range(sp.n):
                ma = mu_alpha(ctx, r.dstar, t, 1 << w)
                ledger.append(entry("mu_alpha_end_identity", ma.x_term, ma.corrected_rhs,
                                    [_region(ring, t), sp.omega[w]]))
                literal += ma.literal_holds
                total += 1
        rep["diagnostics"]["literal_mu_alpha_holds"] = {"holds": literal, "of": total}
        zero = tuple([Fraction(0)] * m.n)
        if validate_model(m).martingale:
            rep["martingale_collapse"] = {
                "M_zero": r.M == zero,
                "A_equals_minus_xbar": all(r.A[t] == tuple(-v for v in ext.xbar[t]) for t in r.A),
            }
    elif args.op == "chain":
        from .stoch import chain_limit
        chain = _greedy_chain(ring)
        r = chain_limit(m, chain)
        rep.update({"regions": [_region(ring, t) for t in chain], "limits": r.limits,
                    "stable_from": r.stable_from, "terminal_value": r.terminal_value})
        ledger.append(entry("limit_representation", r.y_identity, True))
    elif args.op == "stopping":
        from .stoch import StoppingTime, stopping_diagnostics
        sigmas, labels = [], []
        for t in sorted(set(ring.t1) | {ring.full}):
            sigmas.append(StoppingTime(((t, sp.full_event),)))
            labels.append([[_region(ring, t), list(sp.omega)]])
            for blk in ctx.filt.at(t).blocks:
                ev = sum(1 << w for w in blk)
                if ev != sp.full_event:
                    sigmas.append(StoppingTime(((t, ev),)))
                    labels.append([[_region(ring, t), [sp.omega[w] for w in blk]]])
        r = stopping_diagnostics(m, sigmas)
        rep.update({"stopping_times": labels, "values": r.values, "sup_l1": r.sup_l1,
                    "class_inequalities_on": {1: "process", -1: "negated process", 0: "not applicable"}[r.orientation]})
        for d in r.d_to_dm:
            at = {"sequence": [_region(ring, t) for t in d["sequence"]], "k": d["k"]}
            ledger.append(bound("class_d_to_dm_left", d["lhs"], d["middle"], at))
            ledger.append(bound("class_d_to_dm_right", d["middle"], d["rhs"], at))
        for d in r.dm_to_d:
            ledger.append(bound("class_dm_to_d", d["lhs"], d["rhs"], {"k": d["k"]}))
        if m.ambient.k != 1:
            rep["note"] = "class D / DM comparisons need a linearly ordered index"
    rep["ledger"] = ledger
    if not _ledger_ok(ledger):
        raise Failure("an identity failed", rep)
    return rep


# --- demo / selftest ---------------------------------------------------------------------

def cmd_demo(args) -> dict:
    from .stoch import experiment_demo
    try:
        groups = [int(g) for g in args.groups.split(",")]
    except ValueError as err:
        raise io.InputError("--groups takes a comma-separated list of integers") from err
    eta = None if args.eta is None else io.parse_rational(args.eta)
    K = args.locations
    if any(g < 1 or g > K for g in groups) or args.horizon < 1:
        raise io.InputError("every group count must lie between 1 and the number of locations")
    rows, ledger = [], []
    for G in groups:
        r = experiment_demo(K, args.horizon, G, seed=args.seed, eta=eta)
        rows.append({"groups": G, "bound": r.bound, "group_terms": r.group_terms,
                     "group_members": r.group_members, "quasinorm": r.quasinorm,
                     "note": r.quasinorm_note})
        if eta is not None:
            ledger.append(entry("bound_equals_groups_times_eta", r.bound, G * eta, G))
        if r.quasinorm is not None:
            ledger.append(bound("bound_below_quasinorm", r.bound, r.quasinorm, G))
    rep = {"locations": K, "horizon": args.horizon, "eta": eta, "table": rows, "ledger": ledger}
    if not _ledger_ok(ledger):
        raise Failure("a demo identity failed", rep)
    return rep


def cmd_selftest(args) -> dict:
    from .selftest import run_suite
    faults = [f for f in (args.inject_fault or "").split(",") if f]
    try:
        rep = run_suite(args.suite, args.samples, args.seed, faults, workers=args.parallel)
    except ValueError as err:
        raise io.InputError(str(err)) from err
    if not rep["passed"]:
        raise Failure("a property failed", rep)
    return rep


# --- plumbing ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semimeas", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"semimeas {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--max-ground", type=int, help="cap on ground-set size")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="classify a family, decide semi-modularity")
    c.add_argument("input")
    c.add_argument("--max-collection", type=int, default=4,
                   help="collection-size cap for the enumerative decider on large domains")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("extend", parents=[common], help="extend a set function")
    e.add_argument("input")
    e.add_argument("--to", choices=("lattice", "ring", "algebra"), default="ring")
    e.add_argument("--total", help="value on the whole ground set (comma-separated for vectors)")
    e.add_argument("--product", action="store_true", help="input is a product set function")
    e.set_defaults(func=cmd_extend)

    pr = sub.add_parser("process", parents=[common], help="operate on a grid-indexed process")
    pr.add_argument("input")
    pr.add_argument("--op", required=True, choices=("validate", "extend", "quasinorm", "riesz",
                                                    "doob-meyer", "isometry", "chain", "stopping"))
    pr.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS)
    pr.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)
    pr.set_defaults(func=cmd_process)

    d = sub.add_parser("demo", parents=[common], help="lower bounds for the sample-maximum demo")
    d.add_argument("name", choices=("experiment",))
    d.add_argument("--locations", type=int, default=4)
    d.add_argument("--horizon", type=int, default=1)
    d.add_argument("--groups", default="1,2,4")
    d.add_argument("--eta", help="deterministic increment per step (random increments if absent)")
    d.set_defaults(func=cmd_demo)

    s = sub.add_parser("selftest", parents=[common], help="run the property suites")
    s.add_argument("--suite", choices=("all", "core", "stoch"), default="all")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--parallel", type=int, default=1, help="worker processes")
    s.add_argument("--inject-fault", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return p


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    obj = io.to_jsonable(obj)
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {render_text(v, 0) if not isinstance(v, (dict, list)) else chr(10) + render_text(v, indent + 1)}"
                         for v in obj)
    return f"{pad}{obj}"


def _emit(report: dict, args) -> None:
    text = io.dumps(report) if args.format == "json" else render_text(report) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_ground is not None:
        os.environ["SEMIMEAS_MAX_GROUND"] = str(args.max_ground)
    head = {"tool": {"name": "semimeas", "version": __version__}, "command": args.command,
            "seed": args.seed}
    start = time.perf_counter()
    try:
        body = args.func(args)
        code, verdict = EXIT_OK, "pass"
    except Failure as err:
        body, code, verdict = {**err.report, "error": str(err)}, EXIT_FAIL, "fail"
    except InternalIdentityError as err:
        body, code, verdict = {"error": f"identity failure: {err}"}, EXIT_FAIL, "fail"
    except (io.InputError, SetCoreError, ValueError) as err:
        where = getattr(err, "where", None)
        body = {"error": str(err)}
        if where is not None:
            body["where"] = where
        code, verdict = EXIT_INPUT, "input_error"
    _progress(f"{args.command} finished in {time.perf_counter() - start:.2f}s ({verdict})")
    _emit({**head, **body, "verdict": verdict}, args)
    return code


if __name__ == "__main__":
    sys.exit(main())

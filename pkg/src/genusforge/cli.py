"""Command-line front end: dimension tables, enumeration, verification,
layer reconstruction, and the arithmetic queries, with JSON reports."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass
from itertools import combinations, product

from . import arith
from .expmaps import (CommVector, ThetaCocycle, build_phi_basis, coboundary,
                      cocycle_view, corner_operator, lcomm_check, phi_layer,
                      reconstruct_report, solve_cochain, theta, _context)
from .f2 import spans_equal
from .groups import (ResourceLimitError, augmentation_power_span,
                     build_universal, build_universal_general,
                     check_expansion_axioms, descending_central_series)
from .lie import (check_lie_axioms, governing_algebra,
                  governing_algebra_general, lie_epimorphism, lie_from_group)
from .tensors import (BlockShape, cons_dim_formula, cons_dim_formula_general,
                      gov_equals_cons_check)

SCHEMA = "genusforge-report/1"
SIZE_CAP = 8


@dataclass
class RunReport:
    command: str
    parameters: dict
    results: dict
    passed: bool
    elapsed: float
    schema: str = SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def _parse_shape(text: str) -> BlockShape:
    return BlockShape(tuple(int(v) for v in text.split(",")))


def _shape_arg(args) -> BlockShape:
    if getattr(args, "shape", None):
        return _parse_shape(args.shape)
    if getattr(args, "n", None):
        return BlockShape((1,) * args.n)
    raise ValueError("give either --n or --shape")


def _order_exponent(shape: BlockShape) -> int:
    return shape.N * 2 ** (shape.n - 1) - 2 ** shape.n + shape.n + 1


def _finish(command: str, params: dict, results: dict, passed: bool,
            t0: float) -> RunReport:
    return RunReport(command, params, results, bool(passed),
                     round(time.time() - t0, 6))


def _failed(command: str, params: dict, err: Exception, t0: float) -> RunReport:
    return _finish(command, params, {"error": str(err)}, False, t0)


# -- dims --

def cmd_dims(args) -> RunReport:
    t0 = time.time()
    params = {"n": args.n, "shape": args.shape, "i": args.i}
    try:
        plain = args.shape is None
        shape = _shape_arg(args)
        if shape.N > SIZE_CAP:
            raise ValueError(f"total support size capped at {SIZE_CAP}")
        span = [args.i] if args.i else list(range(1, shape.n + 1))
        rows = []
        ok = True
        for i in span:
            chk = gov_equals_cons_check(shape.n if plain else shape, i)
            want = (cons_dim_formula(shape.n, i) if plain
                    else cons_dim_formula_general(shape, i))
            good = chk["equal"] and chk["dim_cons"] == want \
                and chk["dim_gov"] == want
            rows.append({"i": i, "dim_gov": chk["dim_gov"],
                         "dim_cons": chk["dim_cons"], "formula": want,
                         "equal": good})
            ok = ok and good
        return _finish("dims", params, {"rows": rows}, ok, t0)
    except (ValueError, ResourceLimitError) as err:
        return _failed("dims", params, err, t0)


# -- universal --

def cmd_universal(args) -> RunReport:
    t0 = time.time()
    params = {"n": args.n, "shape": args.shape, "enumerate": args.enumerate}
    try:
        shape = _shape_arg(args)
        exp = _order_exponent(shape)
        results = {"exponent": exp, "predicted_order": 2 ** exp}
        ok = True
        if args.enumerate:
            G = (build_universal(shape.n) if args.shape is None
                 else build_universal_general(shape))
            axioms = check_expansion_axioms(G)
            results["order"] = G.order
            results["axioms"] = {k: bool(v) for k, v in axioms.items()}
            ok = G.order == 2 ** exp and all(axioms.values())
        return _finish("universal", params, results, ok, t0)
    except (ValueError, ResourceLimitError) as err:
        return _failed("universal", params, err, t0)


# -- verify --

def _check(checks: list, name: str, good: bool, detail: str = "") -> None:
    checks.append({"name": name, "passed": bool(good), "detail": detail})


def _verify_tensors(checks: list, max_n: int) -> None:
    for n in range(1, max_n + 1):
        for i in range(1, n + 1):
            chk = gov_equals_cons_check(n, i)
            want = cons_dim_formula(n, i)
            _check(checks, f"tensors n={n} i={i}",
                   chk["equal"] and chk["dim_cons"] == want,
                   f"dim {chk['dim_cons']} expected {want}")
    for k in ((1, 1), (2, 1), (2, 2), (1, 1, 1)):
        shape = BlockShape(k)
        for i in range(1, shape.n + 1):
            chk = gov_equals_cons_check(shape, i)
            want = cons_dim_formula_general(shape, i)
            _check(checks, f"tensors shape={k} i={i}",
                   chk["equal"] and chk["dim_cons"] == want,
                   f"dim {chk['dim_cons']} expected {want}")


def _verify_groups(checks: list) -> None:
    for k in ((1,), (1, 1), (1, 1, 1), (2, 1), (2, 2)):
        shape = BlockShape(k)
        G = build_universal_general(shape)
        _check(checks, f"groups order shape={k}",
               G.order == 2 ** _order_exponent(shape), f"order {G.order}")
        _check(checks, f"groups axioms shape={k}",
               all(check_expansion_axioms(G).values()))
    G = build_universal(3)
    series = descending_central_series(G)
    good = all(spans_equal(augmentation_power_span(G, i), series[i - 2])
               for i in range(2, 2 + len(series)))
    _check(checks, "groups augmentation powers n=3", good)


def _verify_lie(checks: list) -> None:
    for n in (2, 3):
        L = governing_algebra(n)
        _check(checks, f"lie axioms n={n}",
               all(check_lie_axioms(L).values()))
        LG = lie_from_group(build_universal(n))
        _check(checks, f"lie group match n={n}", LG.dims == L.dims,
               f"dims {LG.dims}")
        lie_epimorphism(L, LG)
        lie_epimorphism(LG, L)
        _check(checks, f"lie epimorphisms n={n}", True)
    for k in ((2, 1), (2, 2)):
        L = governing_algebra_general(BlockShape(k))
        _check(checks, f"lie axioms shape={k}",
               all(check_lie_axioms(L).values()))


def _verify_expmaps(checks: list, max_n: int, seed: int) -> None:
    shapes = [BlockShape(k) for k in ((1, 1), (2, 1), (1, 1, 1))
              if len(k) <= max_n]
    for shape in shapes:
        bad = 0
        for size in range(1, shape.n + 1):
            for A in combinations(range(shape.n), size):
                for i in A:
                    for x in shape.members(i):
                        for tup in product(range(shape.N), repeat=size):
                            left, right = lcomm_check(shape, A, x, tup)
                            bad += left != right
        _check(checks, f"expmaps lcomm shape={list(shape.k)}", bad == 0,
               f"{bad} mismatches")
        good = True
        for p in build_phi_basis(shape):
            v = CommVector(shape, [corner_operator(shape, i, p)
                                   for i in range(shape.n)])
            good = good and theta(shape, v).rows == coboundary(p).rows
            good = good and cocycle_view(p)["certified"]
        _check(checks, f"expmaps expansion eq shape={list(shape.k)}", good)
    rep = reconstruct_report(BlockShape((1, 1)), 2,
                             [phi_layer(BlockShape((1,)), 1)] * 2)
    direct = phi_layer(BlockShape((1, 1)), 2)
    _check(checks, "expmaps reconstruct (1,1) j=2",
           rep["obstruction_count"] == 0 and spans_equal(
               rep["basis_coords"], [p.coords for p in direct]))
    ctx = _context(BlockShape((2,)))
    th = ThetaCocycle.from_function(
        BlockShape((2,)),
        lambda a, b: (ctx.group.phi(a) & 1) & (ctx.group.phi(b) & 1))
    _check(checks, "expmaps obstruction detected",
           solve_cochain(ctx.group, th) is None)
    if max_n >= 4:
        shape = BlockShape((1, 1, 1, 1))
        ctx = _context(shape)
        rng = random.Random(seed)
        bad = 0
        for _ in range(2000):
            size = rng.randint(1, 4)
            A = tuple(sorted(rng.sample(range(4), size)))
            x = rng.choice(A)
            tup = tuple(rng.randrange(4) for _ in range(size))
            left, right = lcomm_check(shape, A, x, tup)
            bad += left != right
        _check(checks, "expmaps lcomm n=4 sampled", bad == 0,
               f"{bad} mismatches")


def cmd_verify(args) -> RunReport:
    t0 = time.time()
    params = {"suite": args.suite, "max_n": args.max_n, "n": args.n,
              "smoke": args.smoke, "seed": args.seed}
    checks: list[dict] = []
    try:
        tensor_cap = args.max_n or (4 if args.smoke else 5)
        exp_cap = args.n or 3
        if args.suite in ("tensors", "all"):
            _verify_tensors(checks, tensor_cap)
        if args.suite in ("groups", "all"):
            _verify_groups(checks)
        if args.suite in ("lie", "all"):
            _verify_lie(checks)
        if args.suite in ("expmaps", "all"):
            _verify_expmaps(checks, exp_cap, args.seed)
        passed = all(c["passed"] for c in checks) and bool(checks)
        return _finish("verify", params, {"checks": checks}, passed, t0)
    except (ValueError, ResourceLimitError) as err:
        return _failed("verify", params, err, t0)


# -- reconstruct --

def cmd_reconstruct(args) -> RunReport:
    t0 = time.time()
    params = {"shape": args.shape, "j": args.j}
    try:
        shape = _parse_shape(args.shape)
        corners = [phi_layer(shape.drop(i), args.j - 1)
                   for i in range(shape.n)]
        rep = reconstruct_report(shape, args.j, corners)
        direct = phi_layer(shape, args.j)
        equal = spans_equal(rep["basis_coords"], [p.coords for p in direct])
        width = len(_context(shape).labels)
        layer = {"shape": rep["shape"], "j": rep["j"], "dim": rep["dim"],
                 "basis_coords": [[(c >> t) & 1 for t in range(width)]
                                  for c in rep["basis_coords"]],
                 "obstruction_count": rep["obstruction_count"]}
        results = {"layer_report": layer,
                   "commvect_dim": rep["commvect_dim"],
                   "lifted_count": rep["lifted_count"],
                   "direct_dim": len(direct),
                   "equal": equal}
        return _finish("reconstruct", params, results, equal, t0)
    except (ValueError, ResourceLimitError) as err:
        return _failed("reconstruct", params, err, t0)


# -- arith --

def cmd_arith(args) -> RunReport:
    t0 = time.time()
    params = {"sub": args.sub}
    try:
        if args.sub == "validate":
            params["entries"] = args.entries
            v = arith.validate_acceptable(args.entries)
            return _finish("arith", params, {
                "a": list(v.a), "omega": list(v.omega),
                "factorizations": [list(f) for f in v.factorizations],
                "valid": True}, True, t0)
        if args.sub == "consistent":
            params["entries"] = args.entries
            v = arith.validate_acceptable(args.entries)
            cons = arith.is_strongly_consistent(v)
            maximal = (arith.decide_maximal_n2(v) if len(v.a) <= 2
                       else "undecidable at this scope")
            return _finish("arith", params,
                           {"consistent": cons, "maximal": maximal},
                           cons, t0)
        if args.sub == "bound":
            omega = (int(args.omega) if "," not in args.omega
                     else [int(v) for v in args.omega.split(",")])
            params.update({"n": args.n, "omega": args.omega})
            total, grades = arith.maximality_bound(args.n, omega)
            return _finish("arith", params,
                           {"total": total, "grades": grades}, True, t0)
        params.update({"k": args.k, "budget": args.budget})
        k = tuple(int(v) for v in args.k.split(","))
        v = arith.search_consistent(k, args.budget)
        if v is None:
            return _finish("arith", params, {"found": False}, False, t0)
        verified = (arith.is_strongly_consistent(v)
                    and arith.validate_acceptable(v.a).a == v.a)
        return _finish("arith", params, {
            "found": True, "a": list(v.a), "omega": list(v.omega),
            "factorizations": [list(f) for f in v.factorizations],
            "verified": verified}, verified, t0)
    except (ValueError, arith.FactorBudgetError) as err:
        return _failed("arith", params, err, t0)


# -- wiring --

def _render(report: RunReport) -> str:
    lines = [f"{report.command}  passed={report.passed}"
             f"  elapsed={report.elapsed}s"]
    for key, val in report.results.items():
        if key == "rows":
            for row in val:
                lines.append("  " + "  ".join(f"{k}={v}"
                                              for k, v in row.items()))
        elif key == "checks":
            for chk in val:
                mark = "ok" if chk["passed"] else "FAIL"
                tail = f"  {chk['detail']}" if chk["detail"] else ""
                lines.append(f"  [{mark}] {chk['name']}{tail}")
        elif key == "layer_report":
            short = {k: v for k, v in val.items() if k != "basis_coords"}
            lines.append(f"  layer_report: {short}")
        else:
            lines.append(f"  {key}: {val}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="genusforge",
        description="governing tensors, universal expansion groups, "
                    "expansion maps, and the arithmetic layer")
    ap.add_argument("--json", action="store_true", help="emit a JSON report")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for sampled sub-suites")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dims", help="governing/constraint dimension table")
    d.add_argument("--n", type=int)
    d.add_argument("--shape")
    d.add_argument("--i", type=int)
    d.set_defaults(fn=cmd_dims)

    u = sub.add_parser("universal", help="universal group size and axioms")
    u.add_argument("--n", type=int)
    u.add_argument("--shape")
    u.add_argument("--enumerate", action="store_true")
    u.set_defaults(fn=cmd_universal)

    v = sub.add_parser("verify", help="run a module invariant suite")
    v.add_argument("suite",
                   choices=["tensors", "groups", "lie", "expmaps", "all"])
    v.add_argument("--max-n", dest="max_n", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--smoke", action="store_true")
    v.set_defaults(fn=cmd_verify)

    r = sub.add_parser("reconstruct", help="rebuild a layer from corners")
    r.add_argument("--shape", required=True)
    r.add_argument("--j", type=int, required=True)
    r.set_defaults(fn=cmd_reconstruct)

    a = sub.add_parser("arith", help="acceptable-vector queries")
    asub = a.add_subparsers(dest="sub", required=True)
    av = asub.add_parser("validate")
    av.add_argument("entries", nargs="+", type=int)
    ac = asub.add_parser("consistent")
    ac.add_argument("entries", nargs="+", type=int)
    ab = asub.add_parser("bound")
    ab.add_argument("--n", type=int, required=True)
    ab.add_argument("--omega", required=True)
    asr = asub.add_parser("search")
    asr.add_argument("--k", required=True)
    asr.add_argument("--budget", type=int, default=10 ** 4)
    a.set_defaults(fn=cmd_arith)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    workers = os.environ.get("GENUSFORGE_THREADS")
    if workers is not None:
        os.environ.setdefault("OMP_NUM_THREADS", workers)
    report = args.fn(args)
    print(report.to_json() if args.json else _render(report))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())

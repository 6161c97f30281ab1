"""Command line entry point.

    abovelp solve {vc,oct,a2sat,bip2,multiway} INPUT [--k K | --auto] [--verify] [--stats] [--json]
    abovelp verify {vc,oct,a2sat,bip2,multiway} INPUT REPORT
    abovelp bench --family {bipartite,k3path} --sizes 1000,10000 [--reps R]
    abovelp generate {graph,cnf,bip2,multiway,bipartite,k3path} --n N [--seed S]

Input grammars are documented in :mod:`abovelp.formats`.  Budgets are
half-integers (``0.5`` or ``1/2``) except for multiway, which counts vertices.

Exit codes: 0 ok, 1 failed verification or unsolvable input,
2 no solution within the budget, 64 usage error, 65 parse error.
"""

from __future__ import annotations

import argparse
import gc
import hashlib
import json
import random
import sys
import time
from fractions import Fraction
from typing import Optional

import numpy as np

from . import oracle
from .bip2 import (
    Bip2Instance,
    InfeasibleInstanceError,
    InvalidPairError as Bip2PairError,
    LpPair,
    PairRequiredError,
    as_big,
    evaluate,
    solve_bip2,
    solve_bip2_auto,
)
from .formats import ParseError, format_bip2, format_cnf, format_graph, parse_bip2, parse_cnf, parse_graph
from .frontends import Almost2Sat, OddCycleTransversal, ProblemSolution, VertexCoverProblem, solve_problem
from .multiway import MultiwayInstance, is_multiway_cut, solve_multiway, solve_multiway_auto
from .vcal import InvalidPairError, solve_above_lp, solve_auto
from .vclp import VcInstance, compute_vc_pair

EXIT_OK, EXIT_FAIL, EXIT_NO_SOLUTION, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 64, 65
PROBLEM_KINDS = ("vc", "oct", "a2sat", "bip2", "multiway")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_half(text: str) -> int:
    """``"0.5"``, ``"1/2"`` or ``"3"`` -> doubled integer."""
    try:
        val = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"budget {text!r} is not a number") from None
    if val < 0 or (2 * val).denominator != 1:
        raise UsageError(f"budget {text!r} must be a nonnegative multiple of 1/2")
    return int(2 * val)


def _half_str(doubled: Optional[int]) -> Optional[str]:
    return None if doubled is None else str(Fraction(doubled, 2))


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _terminals(text: Optional[str], n: int) -> list[int]:
    if not text:
        return []
    out = []
    for part in text.split(","):
        try:
            v = int(part)
        except ValueError:
            raise UsageError(f"bad terminal {part!r}") from None
        if not 1 <= v <= n:
            raise UsageError(f"terminal {v} out of range 1..{n}")
        out.append(v - 1)
    return out


def load_problem(kind: str, text: str, terminals: Optional[str] = None):
    """Parse ``text`` for ``kind``; raises ParseError."""
    if kind in ("vc", "oct", "multiway"):
        n, edges, weights, terms = parse_graph(text)
        if kind == "vc":
            return VcInstance(weights, edges)
        if kind == "oct":
            return OddCycleTransversal(n, edges, weights)
        terms = sorted(set(terms) | set(_terminals(terminals, n)))
        if any(w != 1 for w in weights):
            raise UsageError("multiway cut is unweighted; drop the w lines")
        return MultiwayInstance(n, edges, terms)
    if kind == "a2sat":
        nvars, clauses = parse_cnf(text, max_len=2)
        return Almost2Sat(nvars, clauses)
    if kind == "bip2":
        return parse_bip2(text)
    raise UsageError(f"unknown problem {kind!r}")


def _load_pair(path: str) -> LpPair:
    raw = _read(path)
    try:
        doc = json.loads(raw)

        def dbl(v):
            f = Fraction(str(v))
            if (2 * f).denominator != 1:
                raise ValueError(f"{v} is not a multiple of 1/2")
            return int(2 * f)

        return LpPair(
            [dbl(v) for v in doc["x"]],
            [None if v is None else dbl(v) for v in doc["z"]],
            [as_big(dbl(v)) for v in doc["y"]],
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(1, 1, f"bad pair file: {exc}") from None


# -- solve ---------------------------------------------------------------------

def _solve(kind: str, prob, k: Optional[int], pair: Optional[LpPair]) -> dict:
    """Run the solver; returns the report fields that depend on the outcome."""
    if kind == "vc":
        vc_pair = compute_vc_pair(prob)
        if k is None:
            sol, stats, k = solve_auto(prob, vc_pair)
        else:
            sol, stats = solve_above_lp(prob, vc_pair, k)
        lp_d = sum(w * x for w, x in zip(prob.weights, vc_pair[0]))
        out = {"k": _half_str(k), "lp": str(Fraction(lp_d, 2)), "stats": stats.as_dict()}
        if sol is not None:
            out.update(objective=sol.weight, gap=_half_str(sol.gap_doubled),
                       solution=[v + 1 for v in sorted(sol.cover)])
        return out
    if kind == "multiway":
        if k is None:
            cut, stats, k = solve_multiway_auto(prob)
            if cut is None:
                raise InfeasibleInstanceError("two terminals are adjacent: no multiway cut exists")
        else:
            cut, stats = solve_multiway(prob, k)
        out = {"k": str(k), "lp": None, "stats": stats.as_dict()}
        if cut is not None:
            out.update(objective=len(cut), gap=None, solution=[v + 1 for v in cut])
        return out
    if kind == "bip2":
        res = solve_bip2_auto(prob, pair) if k is None else solve_bip2(prob, k, pair)
        out = {"lp": str(res.lp), "stats": res.stats.as_dict()}
        if k is not None:
            out["k"] = _half_str(k)
        if res.x is not None:
            out.update(objective=res.objective, gap=_half_str(res.gap_doubled), solution=list(res.x))
            if k is None:
                out["k"] = _half_str(res.gap_doubled)
        return out
    res = solve_problem(prob, k, pair)
    out = {"lp": str(res.lp), "stats": res.stats.as_dict()}
    if k is not None:
        out["k"] = _half_str(k)
    if res.solution is not None:
        value = res.solution.value
        payload = list(value) if kind == "a2sat" else [v + 1 for v in value]
        out.update(objective=res.solution.objective, gap=_half_str(res.gap_doubled), solution=payload)
        if k is None:
            out["k"] = _half_str(res.gap_doubled)
    return out


def verify_payload(kind: str, prob, solution, objective) -> list[str]:
    """Independent check of a report's certificate; returns violations."""
    bad: list[str] = []
    if not isinstance(solution, list) or not all(isinstance(v, int) for v in solution):
        return ["solution must be a list of integers"]
    if kind == "bip2":
        if len(solution) != prob.n:
            return [f"solution has {len(solution)} values, expected {prob.n}"]
        problems, obj = evaluate(prob, solution)
        bad += problems
    elif kind == "multiway":
        cut = [v - 1 for v in solution]
        if any(not 0 <= v < prob.n for v in cut):
            return ["vertex id out of range"]
        if len(set(cut)) != len(cut):
            bad.append("repeated vertex in the cut")
        if not is_multiway_cut(prob, cut):
            bad.append("some pair of terminals is still connected, or a terminal was removed")
        obj = len(set(cut))
    else:
        if kind == "a2sat":
            value = solution
        else:
            value = [v - 1 for v in solution]
            n = len(prob.weights) if kind == "vc" else prob.n
            if any(not 0 <= v < n for v in value):
                return ["vertex id out of range"]
        p = VertexCoverProblem(len(prob.weights), prob.edges, prob.weights) if kind == "vc" else prob
        rep = p.verify(ProblemSolution(kind, value, objective if isinstance(objective, int) else -1))
        return rep.violations
    if objective != obj:
        bad.append(f"claimed objective {objective} but the solution costs {obj}")
    return bad


def build_report(kind: str, data: bytes, prob, k: Optional[int], pair, want_verify: bool,
                 want_stats: bool, timing: bool) -> dict:
    start = time.perf_counter()
    fields = _solve(kind, prob, k, pair)
    elapsed = time.perf_counter() - start
    report = {
        "problem": kind,
        "digest": "sha256:" + hashlib.sha256(data).hexdigest(),
        "k": fields.get("k"),
        "lp": fields.get("lp"),
        "status": "optimal" if "solution" in fields else "no-solution-within-k",
        "objective": fields.get("objective"),
        "gap": fields.get("gap"),
        "solution": fields.get("solution"),
    }
    if want_stats or timing:
        stats = dict(fields["stats"]) if want_stats else {}
        if timing:
            stats["wall_seconds"] = round(elapsed, 6)
        report["stats"] = stats
    if want_verify and report["status"] == "optimal":
        bad = verify_payload(kind, prob, report["solution"], report["objective"])
        report["verified"] = not bad
        if bad:
            report["status"] = "error"
            report["violations"] = bad
    return report


def render_text(report: dict) -> str:
    lines = []
    for key, val in report.items():
        if isinstance(val, dict):
            lines.append(f"{key}:")
            lines += [f"  {k}: {v}" for k, v in val.items()]
        elif isinstance(val, list):
            lines.append(f"{key}: " + " ".join(str(v) for v in val))
        else:
            lines.append(f"{key}: {'-' if val is None else val}")
    return "\n".join(lines) + "\n"


def _emit(doc: dict, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(doc))


def cmd_solve(args) -> int:
    data = _read(args.input)
    prob = load_problem(args.problem, data.decode("utf-8", "replace"), args.terminals)
    if args.auto and args.k is not None:
        raise UsageError("--k and --auto are exclusive")
    if args.k is None:
        k = None
    elif args.problem == "multiway":
        kd = parse_half(args.k)
        if kd % 2:
            raise UsageError("multiway budgets count vertices and must be integers")
        k = kd // 2
    else:
        k = parse_half(args.k)
    pair = None
    if args.pair:
        if args.problem != "bip2":
            raise UsageError("--pair only applies to bip2")
        pair = _load_pair(args.pair)
    report = build_report(args.problem, data, prob, k, pair, args.verify, args.stats, args.timing)
    _emit(report, args.json)
    return {"optimal": EXIT_OK, "no-solution-within-k": EXIT_NO_SOLUTION}.get(report["status"], EXIT_FAIL)


def cmd_verify(args) -> int:
    data = _read(args.input)
    prob = load_problem(args.problem, data.decode("utf-8", "replace"), args.terminals)
    try:
        doc = json.loads(_read(args.solution))
    except ValueError as exc:
        raise ParseError(1, 1, f"solution file is not JSON: {exc}") from None
    if not isinstance(doc, dict) or "solution" not in doc or "objective" not in doc:
        raise ParseError(1, 1, "solution file needs 'solution' and 'objective' fields")
    bad = []
    if doc.get("problem", args.problem) != args.problem:
        bad.append(f"report is for {doc['problem']!r}, not {args.problem!r}")
    bad += verify_payload(args.problem, prob, doc["solution"], doc["objective"])
    _emit({"ok": not bad, "violations": bad}, args.json)
    return EXIT_OK if not bad else EXIT_FAIL


# -- bench ---------------------------------------------------------------------

def _family(name: str, n: int, rng: random.Random):
    if name == "bipartite":
        return oracle.bipartite_family(rng, n)
    return oracle.k3_path_family(n)


def linear_fit(ns, ts) -> dict:
    a, b = np.polyfit(np.asarray(ns, float), np.asarray(ts, float), 1)
    pred = a * np.asarray(ns, float) + b
    ss_res = float(np.sum((np.asarray(ts) - pred) ** 2))
    ss_tot = float(np.sum((np.asarray(ts) - np.mean(ts)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"a": float(a), "b": float(b), "r2": r2}


def run_bench(family: str, sizes, reps: int, seed: int) -> dict:
    rows = []
    for n in sizes:
        times = []
        info = {}
        for r in range(reps):
            n2, edges, weights, x, y, k = _family(family, n, random.Random(seed * 1000003 + r))
            inst = VcInstance(weights, edges)
            # cyclic GC pauses grow with the heap and would blur the scaling signal
            gc.collect()
            gc.disable()
            try:
                start = time.perf_counter()
                sol, stats = solve_above_lp(inst, (x, y), k)
                times.append(time.perf_counter() - start)
            finally:
                gc.enable()
            assert sol is not None and sol.gap_doubled == k
            info = {"n": n2, "m": len(edges), "objective": sol.weight, "nodes": stats.nodes}
        rows.append(dict(info, size=n, seconds=times, median=float(np.median(times))))
    fit = linear_fit([r["n"] for r in rows], [r["median"] for r in rows]) if len(rows) >= 2 else None
    return {"family": family, "reps": reps, "seed": seed, "rows": rows, "fit": fit}


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad size list {args.sizes!r}") from None
    if not sizes or any(s < 4 for s in sizes):
        raise UsageError("--sizes needs at least one size of 4 or more")
    if args.reps < 1:
        raise UsageError("--reps must be positive")
    doc = run_bench(args.family, sizes, args.reps, args.seed)
    if args.json:
        _emit(doc, True)
        return EXIT_OK
    out = [f"family {doc['family']}  reps {doc['reps']}", f"{'n':>8} {'m':>8} {'nodes':>6} {'median_s':>10}"]
    for r in doc["rows"]:
        out.append(f"{r['n']:>8} {r['m']:>8} {r['nodes']:>6} {r['median']:>10.4f}")
    if doc["fit"]:
        f = doc["fit"]
        out.append(f"fit t = {f['a']:.3e} * n + {f['b']:.3e}   r2 = {f['r2']:.4f}")
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


# -- generate ------------------------------------------------------------------

def cmd_generate(args) -> int:
    rng = random.Random(args.seed)
    n, m = args.n, args.m if args.m is not None else args.n
    if n < 1 or m < 0:
        raise UsageError("--n must be positive and --m nonnegative")
    if args.kind == "graph":
        edges, weights = oracle.random_graph(rng, n, m, args.w_max)
        text = format_graph(n, edges, weights)
    elif args.kind == "cnf":
        text = format_cnf(n, oracle.random_2cnf(rng, n, m))
    elif args.kind == "bip2":
        weights, rows = oracle.random_bip2_rows(rng, n, m, args.w_max)
        inst = Bip2Instance(weights, [True] * n)
        for row in rows:
            a, _, b, _, c, d = row
            if d is None and c > (a > 0) + (b > 0):
                continue  # hard row no binary point can meet
            try:
                inst.add(*row)
            except InfeasibleInstanceError:
                pass
        text = format_bip2(inst)
    elif args.kind == "multiway":
        if not 0 <= args.terminals_count <= n:
            raise UsageError("--terminals-count out of range")
        edges, terms = oracle.random_multiway(rng, n, args.terminals_count, args.p)
        edges = [(u, v) for u, v in edges if not (u in terms and v in terms)]  # keep it solvable
        text = format_graph(n, edges, None, terms)
    else:
        n2, edges, weights, _, _, _ = _family(args.kind, n, rng)
        text = format_graph(n2, edges)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abovelp", description="Exact solvers parameterized above the LP optimum.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("problem", choices=PROBLEM_KINDS)
    s.add_argument("input")
    s.add_argument("--k", help="budget above the LP value (0.5 and 1/2 both accepted)")
    s.add_argument("--auto", action="store_true", help="increase k until a solution appears (default)")
    s.add_argument("--verify", action="store_true", help="check the certificate independently")
    s.add_argument("--stats", action="store_true", help="include search statistics")
    s.add_argument("--timing", action="store_true", help="include wall time (breaks byte stability)")
    s.add_argument("--json", action="store_true")
    s.add_argument("--terminals", help="comma separated 1-based terminal ids (multiway)")
    s.add_argument("--pair", help="JSON file with an optimal half-integral LP pair (bip2)")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution report against an instance")
    v.add_argument("problem", choices=PROBLEM_KINDS)
    v.add_argument("input")
    v.add_argument("solution", help="JSON report from 'solve --json'")
    v.add_argument("--terminals")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time fixed-gap families at growing sizes")
    b.add_argument("--family", choices=("bipartite", "k3path"), default="bipartite")
    b.add_argument("--sizes", required=True, help="comma separated vertex counts")
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("generate", help="write a random instance to stdout")
    g.add_argument("kind", choices=("graph", "cnf", "bip2", "multiway", "bipartite", "k3path"))
    g.add_argument("--n", type=int, required=True, help="vertices or variables")
    g.add_argument("--m", type=int, help="edges, clauses or constraints (default n)")
    g.add_argument("--w-max", type=int, default=1)
    g.add_argument("--terminals-count", type=int, default=3)
    g.add_argument("--p", type=float, default=0.3, help="edge probability (multiway)")
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"abovelp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"abovelp: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InfeasibleInstanceError, PairRequiredError, InvalidPairError, Bip2PairError, ValueError) as exc:
        print(f"abovelp: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

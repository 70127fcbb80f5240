"""Command-line front end: build, check, witness, solve, verify, table.

Exit codes: 0 success, 1 semantic failure (invalid set, mismatch, strict
budget overrun), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .constructions import (
    diagonal_set,
    formula_table,
    formula_value,
    iji_set_s33,
    instance,
    mu_set_s3n,
    mu_set_sp2,
    mud_sets_s3n,
    mud_sets_sp2,
    outer_gp_x,
    outer_gp_y,
    outer_lower_bound,
)
from .errors import ConstructionError, SierpinskiError
from .graph_core import build_graph, to_dot, to_edgelist
from .metric import build_oracle
from .solvers import SolverOptions, enumerate_max_sets, max_set
from .variants import Variant, check_set, witness_failure

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DESK_CAMPAIGN = [(3, 2), (4, 2), (5, 2), (3, 3), (3, 4)]


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    """'3', '3,4,5' or '3-5'."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like 3, 3,4 or 3-5, got {text!r}") from None
    return out


def _variant(text: str) -> Variant:
    try:
        return Variant.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _variant_list(text: str) -> list[Variant]:
    return [_variant(t) for t in text.split(",") if t.strip()]


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read_set_words(args) -> list[str]:
    words: list[str] = []
    if args.set is not None:
        words.extend(w.strip() for w in args.set.split(","))
    if args.set_file is not None:
        try:
            text = Path(args.set_file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read set file: {exc}") from None
        for line in text.splitlines():
            line = line.split("#", 1)[0]
            words.extend(w.strip() for w in line.split(","))
    if args.set is None and args.set_file is None:
        raise UsageError("give the set with --set or --set-file")
    return [w for w in words if w]


# subcommands

def cmd_build(args) -> int:
    g = build_graph(args.p, args.n)
    if args.format == "edgelist":
        text = to_edgelist(g)
    elif args.format == "dot":
        text = to_dot(g)
    else:
        text = _dumps({"schema": 1, "p": g.p, "n": g.n, "order": g.order, "size": g.size,
                       "vertices": [g.label(v) for v in range(g.order)],
                       "edges": [[g.label(u), g.label(v)] for u, v in g.edges()]})
    _emit(text, args.output)
    if args.dump_distances:
        Path(args.dump_distances).write_text(build_oracle(g).to_csv())
    return EXIT_OK


def _check(args, always_witness: bool) -> int:
    g = build_graph(args.p, args.n)
    words = _read_set_words(args)
    X = g.parse_set(words)
    oracle = build_oracle(g)
    valid = check_set(oracle, args.variant, X, shortcuts=not args.no_shortcuts)
    witness = None if valid else witness_failure(oracle, args.variant, X, shortcuts=not args.no_shortcuts)
    if args.format == "json":
        out = {"schema": 1, "p": g.p, "n": g.n, "variant": args.variant.value, "set": g.format_set(X),
               "valid": valid, "witness": None}
        if witness is not None:
            out["witness"] = {"pair": [g.label(w) for w in witness.pair], "mode": witness.mode,
                              "blockers": [g.label(b) for b in witness.blockers],
                              "geodesics": [[g.label(w) for w in path] for path in witness.geodesics]}
        sys.stdout.write(_dumps(out))
    else:
        print(f"{args.variant.value}: {'valid' if valid else 'invalid'}")
        if witness is not None and (always_witness or not valid):
            print("witness: " + witness.describe(g.label))
    return EXIT_OK if valid else EXIT_FAIL


def cmd_check(args) -> int:
    return _check(args, always_witness=False)


def cmd_witness(args) -> int:
    return _check(args, always_witness=True)


def _options(args) -> SolverOptions:
    return SolverOptions(budget_seconds=args.budget_seconds, symmetry=args.symmetry, workers=args.workers,
                         strategy=getattr(args, "strategy", "auto"),
                         lower_bound=getattr(args, "lower_bound", "greedy"))


def cmd_solve(args) -> int:
    g, oracle = instance(args.p, args.n)
    opts = _options(args)
    solve = enumerate_max_sets if args.enumerate else max_set
    report = solve(g, oracle, args.variant, opts)
    out = report.to_dict(g)
    known = formula_value(args.variant, g.p, g.n)
    out["expected"] = None if known is None else {"value": known[0], "count": known[1]}
    # values with no closed form are new data, not checked ground truth
    out["derived"] = known is None
    if args.format == "json":
        sys.stdout.write(_dumps(out))
    else:
        status = "optimal" if report.optimal else "lower bound (budget exceeded)"
        print(f"{args.variant.symbol}(S_{g.p}^{g.n}) = {report.optimum} [{status}]")
        if report.count is not None:
            print(f"count: {report.count}")
        for s in report.sets[: args.show]:
            print("  {" + ", ".join(g.format_set(s)) + "}")
    if args.strict and report.budget_exceeded:
        return EXIT_FAIL
    return EXIT_OK


# verification campaign

@dataclass
class VerificationRecord:
    p: int
    n: int
    variant: str
    expected_value: int | None
    expected_count: int | None
    expected_lower_bound: int | None
    value: int
    count: int | None
    match: bool | None
    budget_exceeded: bool
    seconds: float
    derived: bool


@dataclass
class ConstructionRecord:
    p: int
    n: int
    name: str
    sizes: list[int]
    expected_sizes: list[int]
    valid: bool
    error: str | None = None
    binding: bool = True  # informational records do not affect the overall verdict


@dataclass
class VerificationReport:
    records: list[VerificationRecord] = field(default_factory=list)
    constructions: list[ConstructionRecord] = field(default_factory=list)
    strict: bool = False

    @property
    def passed(self) -> bool:
        for r in self.records:
            if r.match is False:
                return False
            if self.strict and r.budget_exceeded:
                return False
        return all(c.valid for c in self.constructions if c.binding)

    def to_dict(self, timing: bool = True) -> dict:
        records = [asdict(r) for r in self.records]
        if not timing:
            for r in records:
                r.pop("seconds")
        return {"schema": 1, "passed": self.passed, "strict": self.strict, "records": records,
                "constructions": [asdict(c) for c in self.constructions]}


def _construction_jobs(p: int, n: int):
    """(name, thunk returning a list of sets, expected sizes) for the constructions that apply."""
    jobs = [("diagonal_set", lambda: [diagonal_set(p, n)], [p])]
    if n == 2:
        mu = formula_value(Variant.MV, p, 2)[0]
        jobs.append(("mu_set_sp2", lambda: [mu_set_sp2(p)], [mu]))
        jobs.append(("mud_sets_sp2", lambda: mud_sets_sp2(p), [p] * (p + 1)))
    if p == 3 and n >= 3:
        jobs.append(("mu_set_s3n", lambda: [mu_set_s3n(n)], [3 ** (n - 2) + 3]))
        jobs.append(("mud_sets_s3n", lambda: mud_sets_s3n(n), [3] * 4))
        jobs.append(("outer_gp_x", lambda: [outer_gp_x(n)], [n]))
        if n >= 4:
            jobs.append(("outer_gp_y", lambda: [outer_gp_y(n)], [2 * n - 7]))
            jobs.append(("outer_gp_y_literal", lambda: [outer_gp_y(n, literal=True)], [4 * n - 15]))
    if p == 3 and n == 3:
        jobs.append(("iji_set_s33", lambda: [iji_set_s33()], [6]))
    return jobs


def _verify_constructions(p: int, n: int) -> list[ConstructionRecord]:
    out = []
    for name, make, expected in _construction_jobs(p, n):
        binding = not name.endswith("_literal")
        try:
            sets = make()
        except ConstructionError as exc:
            out.append(ConstructionRecord(p, n, name, [], expected, False, str(exc), binding))
            continue
        sizes = [len(s) for s in sets]
        out.append(ConstructionRecord(p, n, name, sizes, expected, sizes == expected, None, binding))
    return out


def verify_instance(p: int, n: int, variant: Variant, opts: SolverOptions) -> VerificationRecord:
    g, oracle = instance(p, n)
    known = formula_value(variant, p, n)
    lower = None
    if known is None and variant.kind == "outer" and p == 3 and n >= 3:
        lower = outer_lower_bound(n)
    want_count = known is not None and known[1] is not None
    start = time.monotonic()
    report = (enumerate_max_sets if want_count else max_set)(g, oracle, variant, opts)
    seconds = round(time.monotonic() - start, 3)
    value = report.optimum
    exceeded = report.budget_exceeded
    match: bool | None = None
    if known is not None:
        if exceeded:
            # only a lower bound is available: it must not contradict the formula
            match = value <= known[0]
        else:
            match = value == known[0] and (not want_count or report.count == known[1])
    elif lower is not None:
        match = value >= lower
    if match is not False and value < p and not exceeded:
        match = False  # every variant admits the p extreme vertices
    return VerificationRecord(p, n, variant.value, None if known is None else known[0],
                              None if known is None else known[1], lower, value,
                              report.count, match, exceeded, seconds, known is None)


def run_campaign(instances, variants, opts: SolverOptions, strict: bool = False,
                 constructions: bool = True, progress=None) -> VerificationReport:
    report = VerificationReport(strict=strict)
    for p, n in instances:
        for var in variants:
            rec = verify_instance(p, n, var, opts)
            report.records.append(rec)
            if progress:
                progress(rec)
        if constructions:
            report.constructions.extend(_verify_constructions(p, n))
    return report


def cmd_verify(args) -> int:
    if args.p is None and args.n is None:
        instances = DESK_CAMPAIGN
    else:
        instances = [(p, n) for p in (args.p or [3]) for n in (args.n or [2])]
    variants = args.variant or list(Variant)
    opts = SolverOptions(budget_seconds=args.budget_seconds, workers=args.workers, lower_bound="construction")

    def progress(rec: VerificationRecord) -> None:
        if not args.quiet:
            flag = {True: "ok", False: "MISMATCH", None: "data"}[rec.match]
            extra = " (budget exceeded)" if rec.budget_exceeded else ""
            print(f"S_{rec.p}^{rec.n} {rec.variant:9s} value={rec.value} count={rec.count} {flag}{extra}",
                  file=sys.stderr)

    report = run_campaign(instances, variants, opts, strict=args.strict, progress=progress)
    _emit(_dumps(report.to_dict()), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_table(args) -> int:
    rows = formula_table(args.p or [3, 4, 5], args.n or [2, 3, 4])
    if args.format == "json":
        sys.stdout.write(_dumps({"schema": 1, "rows": rows}))
    else:
        for r in rows:
            if r["value"] is not None:
                count = "?" if r["count"] is None else r["count"]
                print(f"S_{r['p']}^{r['n']} {r['variant']:9s} {r['value']:>5} {count:>6}")
            elif "lower_bound" in r:
                print(f"S_{r['p']}^{r['n']} {r['variant']:9s} >= {r['lower_bound']}")
    return EXIT_OK


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sierpinski-gp",
                                     description="Mutual-visibility and general position sets in Sierpinski graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p, required=True):
        p.add_argument("--p", type=int, required=required, help="alphabet size (>= 3)")
        p.add_argument("--n", type=int, required=required, help="word length (>= 1)")

    b = sub.add_parser("build", help="write S_p^n as an edge list, DOT or JSON")
    instance_args(b)
    b.add_argument("--format", choices=("edgelist", "dot", "json"), default="edgelist")
    b.add_argument("--output", "-o", help="write here instead of standard output")
    b.add_argument("--dump-distances", metavar="CSV", help="also write the distance matrix as CSV (debugging)")
    b.set_defaults(func=cmd_build)

    for name, func, help_ in (("check", cmd_check, "decide whether a set is a variant set"),
                              ("witness", cmd_witness, "like check, always printing the failing pair")):
        c = sub.add_parser(name, help=help_)
        instance_args(c)
        c.add_argument("--variant", type=_variant, required=True)
        c.add_argument("--set", help="comma-separated vertex words, e.g. 00,11,22")
        c.add_argument("--set-file", help="file with one vertex word per line")
        c.add_argument("--format", choices=("text", "json"), default="text")
        c.add_argument("--no-shortcuts", action="store_true", help="test every pair of the family")
        c.set_defaults(func=func)

    s = sub.add_parser("solve", help="exact optimum (and optionally all optimal sets)")
    instance_args(s)
    s.add_argument("--variant", type=_variant, required=True)
    s.add_argument("--enumerate", action="store_true", help="list and count every maximum set")
    s.add_argument("--budget-seconds", type=float, default=300.0)
    s.add_argument("--strict", action="store_true", help="exit 1 when the budget runs out")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--symmetry", action="store_true", help="group enumerated sets into digit-permutation orbits")
    s.add_argument("--strategy", choices=("auto", "branch_and_bound", "descending"), default="auto")
    s.add_argument("--lower-bound", choices=("greedy", "construction", "none"), default="greedy")
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.add_argument("--show", type=int, default=10, help="sets to print in text format")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="cross-check formulas, solver and constructions")
    v.add_argument("--p", type=_int_list, help="alphabet sizes, e.g. 3-5")
    v.add_argument("--n", type=_int_list, help="word lengths, e.g. 2,3")
    v.add_argument("--variant", type=_variant_list, help="comma-separated variants (default: all)")
    v.add_argument("--budget-seconds", type=float, default=300.0)
    v.add_argument("--strict", action="store_true", help="count budget overruns as failures")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--output", "-o")
    v.add_argument("--quiet", "-q", action="store_true")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="print the closed-form values")
    t.add_argument("--p", type=_int_list)
    t.add_argument("--n", type=_int_list)
    t.add_argument("--format", choices=("json", "text"), default="text")
    t.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SierpinskiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

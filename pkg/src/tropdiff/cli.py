"""Command-line front end.

Exit codes: 0 success or verdict ``yes``, 1 verdict ``no`` (or a failed
verification), 2 verdict ``unknown``, 3 usage or parse error, 4 engine error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .diffpoly import Verdict, eval_terms_bounded, is_solution, parse_diffpoly
from .errors import ParseError, TropDiffError, TruncationWarning
from .padic import _check_prime
from .semiring import TropExp, format_fraction, parse_fraction
from .seminorms import (
    grigoriev,
    linear_coefficients,
    padic_rank2,
    parse_rat_diffpoly,
    parse_rat_series,
    solve_linear_ode,
    trop_equation,
    trop_point,
)
from .series import (
    STRICT_SHIFT,
    boolean_pair,
    degenerate_differential,
    padic_differential,
    parse_series,
    rank2_pair,
)
from .solve import CoeffTemplate, enumerate_boolean_solutions, scan_template, solve_leading_coefficient
from .verify import SUITES, run_suite

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3, 4
VERDICT_EXIT = {Verdict.YES: EXIT_OK, Verdict.NO: EXIT_NO, Verdict.UNKNOWN: EXIT_UNKNOWN}

VERBS = ("check", "enumerate", "solve-coeff", "scan", "tropicalize", "classical-solve", "verify")
PAIRS = ("B", "T2")
DEMO_EQUATION = "(e^-4, 1)*x1 + (1, 8)*x1' + (e^-1, 8)*x1''"
DEMO_NAMES = ("alpha", "beta", "gamma", "delta", "epsilon")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    pair: str = "T2"
    prime: int = 2
    trunc_deg: int = 16
    output: str = "text"

    def validate(self):
        if self.pair not in PAIRS:
            raise UsageError(f"unknown pair {self.pair!r} (choose from {', '.join(PAIRS)})")
        try:
            _check_prime(self.prime)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.trunc_deg < 1:
            raise UsageError("trunc_deg must be at least 1")
        if self.output not in ("json", "text"):
            raise UsageError(f"unknown output format {self.output!r}")
        return self


@dataclass
class Command:
    verb: str
    config: RunConfig
    options: dict = field(default_factory=dict)


@dataclass
class Outcome:
    status: int
    report: dict


# parsing -----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _pair_name(text: str) -> str:
    if text not in PAIRS:
        raise argparse.ArgumentTypeError(f"unknown pair {text!r} (choose from {', '.join(PAIRS)})")
    return text


def _common(p):
    p.add_argument("--pair", type=_pair_name, help="B (boolean) or T2 (rank-2)")
    p.add_argument("--prime", type=int)
    p.add_argument("--deg", type=int, dest="trunc_deg", help="truncation degree")
    p.add_argument("--output", choices=("json", "text"))
    p.add_argument("--config", help="key=value file with pair, prime, trunc_deg, output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tropdiff", description="Tropical differential equations over truncated series.")
    parser.add_argument("--paper-demo", action="store_true", help="replay the five-slot rank-2 cascade")
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser)

    p = sub.add_parser("check", help="is a series a tropical solution?")
    _common(p)
    p.add_argument("--eq", required=True)
    p.add_argument("--sol", action="append", required=True, help="one series per variable")
    p.add_argument("--differential", choices=("padic", "degenerate", "strict"))

    p = sub.add_parser("enumerate", help="all boolean supports up to a degree")
    _common(p)
    p.add_argument("--eq", required=True)
    p.add_argument("--max-deg", type=int, required=True)
    p.add_argument("--budget", type=int, default=1 << 16)

    p = sub.add_parser("solve-coeff", help="solve for the coefficient at one slot")
    _common(p)
    p.add_argument("--eq", required=True)
    p.add_argument("--slot", type=int, required=True)
    p.add_argument("--prefix", default="1", help="constant term of x, e.g. '2'")

    p = sub.add_parser("scan", help="solve slots 1..max-slot in turn")
    _common(p)
    p.add_argument("--eq")
    p.add_argument("--max-slot", type=int)
    p.add_argument("--prefix", default="1")
    p.add_argument("--paper-demo", action="store_true")

    p = sub.add_parser("tropicalize", help="push a rational equation and solution through a seminorm")
    _common(p)
    p.add_argument("--eq", required=True)
    p.add_argument("--sol", action="append", default=[])
    p.add_argument("--enhancement", choices=("grigoriev", "padic"))

    p = sub.add_parser("classical-solve", help="series solution of a linear ODE")
    _common(p)
    p.add_argument("--eq", required=True)
    p.add_argument("--init", required=True, help="comma-separated x(0), x'(0), ...")
    p.add_argument("--enhancement", choices=("grigoriev", "padic"))

    p = sub.add_parser("verify", help="run a randomized property suite")
    _common(p)
    p.add_argument("--suite", required=True, choices=SUITES + ("all",))
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    return parser


def read_config(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip().replace("-", "_"), val.strip()
        if not sep or not val:
            raise UsageError(f"{path}:{n}: expected key=value")
        if key == "deg":
            key = "trunc_deg"
        if key not in ("pair", "prime", "trunc_deg", "output"):
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        if key in ("prime", "trunc_deg"):
            try:
                val = int(val)
            except ValueError:
                raise UsageError(f"{path}:{n}: {key} must be an integer") from None
        out[key] = val
    return out


def _config(ns) -> RunConfig:
    cfg = RunConfig()
    if getattr(ns, "config", None):
        cfg = replace(cfg, **read_config(ns.config))
    flags = {k: getattr(ns, k, None) for k in ("pair", "prime", "trunc_deg", "output")}
    return replace(cfg, **{k: v for k, v in flags.items() if v is not None}).validate()


def _eq_tag(cfg: RunConfig) -> str:
    return "T" if cfg.pair == "B" else "T2"


def _pair(cfg: RunConfig, differential=None):
    if cfg.pair == "B":
        d = {None: STRICT_SHIFT, "strict": STRICT_SHIFT, "padic": padic_differential(cfg.prime),
             "degenerate": degenerate_differential(cfg.prime)}[differential]
        return boolean_pair(d)
    d = {None: None, "padic": None, "strict": STRICT_SHIFT, "degenerate": degenerate_differential(cfg.prime)}[differential]
    return rank2_pair(cfg.prime, d)


def _enhancement(cfg: RunConfig, name):
    name = name or ("grigoriev" if cfg.pair == "B" else "padic")
    return grigoriev() if name == "grigoriev" else padic_rank2(cfg.prime)


def _need_pair(cfg: RunConfig, pair: str, verb: str):
    if cfg.pair != pair:
        raise UsageError(f"{verb} works over pair {pair}, not {cfg.pair}")


def _prefix(text: str, slot: int | None) -> dict:
    s = parse_rat_series(text, None)
    if any(c < 0 for c in s.coeffs.values()):
        raise UsageError("prefix coefficients must be nonnegative")
    if slot is not None and any(n >= slot for n in s.coeffs):
        raise UsageError(f"prefix has terms at or above slot {slot}")
    return s.coeffs


def parse_invocation(argv) -> Command:
    """Validate ``argv`` and parse every literal it carries."""
    argv = list(argv)
    if argv and argv[0] == "--paper-demo":
        argv = ["scan"] + argv
    ns = build_parser().parse_args(argv)
    if ns.verb is None:
        raise UsageError(f"a verb is required: {', '.join(VERBS)}")
    cfg = _config(ns)
    opts: dict = {}
    verb = ns.verb
    if verb == "check":
        pair = _pair(cfg, ns.differential)
        opts["pair"] = pair
        opts["eq"] = parse_diffpoly(ns.eq, _eq_tag(cfg))
        opts["sol"] = [parse_series(s, pair.coeff_kind, cfg.trunc_deg) for s in ns.sol]
        if len(opts["sol"]) < opts["eq"].nvars:
            raise UsageError(f"equation has {opts['eq'].nvars} variables but {len(opts['sol'])} series were given")
    elif verb == "enumerate":
        _need_pair(cfg, "B", verb)
        opts.update(eq=parse_diffpoly(ns.eq, "T"), max_deg=ns.max_deg, budget=ns.budget)
    elif verb == "solve-coeff":
        _need_pair(cfg, "T2", verb)
        if ns.slot < 1:
            raise UsageError("slot must be at least 1")
        opts.update(eq=parse_diffpoly(ns.eq, "T2"), slot=ns.slot, prefix=_prefix(ns.prefix, ns.slot))
    elif verb == "scan":
        _need_pair(cfg, "T2", verb)
        demo = ns.paper_demo
        if not demo and ns.eq is None:
            raise UsageError("scan needs --eq (or --paper-demo)")
        max_slot = ns.max_slot if ns.max_slot is not None else (5 if demo else None)
        if max_slot is None or max_slot < 1:
            raise UsageError("scan needs --max-slot >= 1")
        opts.update(eq=parse_diffpoly(ns.eq or DEMO_EQUATION, "T2"), max_slot=max_slot,
                    prefix=_prefix(ns.prefix, 1), demo=demo)
    elif verb == "tropicalize":
        opts["enhancement"] = _enhancement(cfg, ns.enhancement)
        opts["eq"] = parse_rat_diffpoly(ns.eq)
        opts["sol"] = [parse_rat_series(s, cfg.trunc_deg) for s in ns.sol]
    elif verb == "classical-solve":
        opts["eq"] = parse_rat_diffpoly(ns.eq)
        try:
            opts["init"] = [parse_fraction(x.strip()) for x in ns.init.split(",")]
        except ParseError as exc:
            raise UsageError(f"malformed --init: {exc}") from None
        opts["enhancement"] = _enhancement(cfg, ns.enhancement) if ns.enhancement else None
    elif verb == "verify":
        if ns.cases < 1:
            raise UsageError("cases must be at least 1")
        opts.update(suite=ns.suite, cases=ns.cases, seed=ns.seed)
    return Command(verb, cfg, opts)


# running -------------------------------------------------------------------------


def _bound_text(order) -> str:
    return f"<= {TropExp(order).to_literal()}"


def _term_reports(f, values) -> list:
    out = []
    for (m, c), p in zip(f.terms, values):
        out.append({
            "monomial": m.to_literal(),
            "coefficient": c.to_literal(),
            "value": None if p.order_bound is not None else p.value.to_literal(),
            "bound": None if p.order_bound is None else _bound_text(p.order_bound),
        })
    return out


def _run_check(cmd: Command) -> Outcome:
    o = cmd.options
    f, sol, pair = o["eq"], o["sol"], o["pair"]
    bounded = eval_terms_bounded(f, sol, pair)
    verdict = is_solution(f, sol, pair)
    return Outcome(VERDICT_EXIT[verdict], {
        "pair": pair.name,
        "equation": f.to_literal(),
        "solution": [s.to_literal() for s in sol],
        "terms": _term_reports(f, bounded),
        "verdict": verdict.value,
    })


def _run_enumerate(cmd: Command) -> Outcome:
    o = cmd.options
    res = enumerate_boolean_solutions(o["eq"], o["max_deg"], boolean_pair(), o["budget"])
    return Outcome(EXIT_OK, {
        "equation": o["eq"].to_literal(),
        "max_deg": o["max_deg"],
        "checked": res.checked,
        "solutions": [list(p.support) for p in res.solutions],
        "unknown": [list(p.support) for p in res.unknown],
    })


def _verdict_status(v) -> int:
    return {"none": EXIT_NO, "unresolved": EXIT_UNKNOWN}.get(v.kind.value, EXIT_OK)


def _run_solve_coeff(cmd: Command) -> Outcome:
    o = cmd.options
    v = solve_leading_coefficient(o["eq"], CoeffTemplate.of(o["slot"], o["prefix"]), rank2_pair(cmd.config.prime))
    return Outcome(_verdict_status(v), {"equation": o["eq"].to_literal(), "result": v.to_json()})


def _run_scan(cmd: Command) -> Outcome:
    o = cmd.options
    results = scan_template(o["eq"], o["max_slot"], rank2_pair(cmd.config.prime), o["prefix"])
    rows = []
    for m, v in results.items():
        row = v.to_json()
        if o["demo"] and m <= len(DEMO_NAMES):
            row["name"] = DEMO_NAMES[m - 1]
        rows.append(row)
    return Outcome(EXIT_OK, {"equation": o["eq"].to_literal(), "results": rows})


def _caught(fn):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        out = fn()
    return out, sorted({str(w.message) for w in caught if issubclass(w.category, TruncationWarning)})


def _tropical_check(f, sol, e) -> tuple:
    (tf, caveats) = _caught(lambda: trop_equation(f, e))
    point = trop_point(sol, e)
    if len(point) < max(tf.nvars, 1):
        raise UsageError(f"equation has {tf.nvars} variables but {len(point)} series were given")
    verdict = is_solution(tf, point, e.pair)
    report = {
        "tropical_equation": tf.to_literal(),
        "point": [p.to_literal() for p in point],
        "terms": _term_reports(tf, eval_terms_bounded(tf, point, e.pair)),
        "verdict": verdict.value,
    }
    if caveats:
        report["caveats"] = caveats
    return verdict, report


def _run_tropicalize(cmd: Command) -> Outcome:
    o = cmd.options
    f, e = o["eq"], o["enhancement"]
    report = {"enhancement": e.label, "equation": f.to_literal()}
    if o["sol"]:
        verdict, extra = _tropical_check(f, o["sol"], e)
        report.update(extra)
        return Outcome(VERDICT_EXIT[verdict], report)
    tf, caveats = _caught(lambda: trop_equation(f, e))
    report["tropical_equation"] = tf.to_literal()
    if caveats:
        report["caveats"] = caveats
    return Outcome(EXIT_OK, report)


def _run_classical(cmd: Command) -> Outcome:
    o = cmd.options
    x = solve_linear_ode(linear_coefficients(o["eq"]), o["init"], cmd.config.trunc_deg)
    report = {
        "equation": o["eq"].to_literal(),
        "init": [format_fraction(Fraction(q)) for q in o["init"]],
        "solution": x.to_literal(),
    }
    status = EXIT_OK
    if o["enhancement"] is not None:
        verdict, extra = _tropical_check(o["eq"], [x], o["enhancement"])
        report["enhancement"] = o["enhancement"].label
        report.update(extra)
        status = VERDICT_EXIT[verdict]
    return Outcome(status, report)


def _run_verify(cmd: Command) -> Outcome:
    o = cmd.options
    reps = run_suite(o["suite"], o["cases"], o["seed"], cmd.config.prime)
    rows = [r.to_json() for r in reps]
    ok = all(r["passed"] for r in rows)
    return Outcome(EXIT_OK if ok else EXIT_NO, {
        "suite": o["suite"], "cases": o["cases"], "seed": o["seed"], "passed": ok, "results": rows,
    })


RUNNERS = {
    "check": _run_check,
    "enumerate": _run_enumerate,
    "solve-coeff": _run_solve_coeff,
    "scan": _run_scan,
    "tropicalize": _run_tropicalize,
    "classical-solve": _run_classical,
    "verify": _run_verify,
}


def run(cmd: Command) -> Outcome:
    try:
        out = RUNNERS[cmd.verb](cmd)
    except UsageError as exc:
        return Outcome(EXIT_USAGE, {"error": {"code": EXIT_USAGE, "message": str(exc)}})
    except (TropDiffError, ValueError) as exc:
        return Outcome(EXIT_ENGINE, {"error": {"code": EXIT_ENGINE, "kind": type(exc).__name__, "message": str(exc)}})
    out.report = {"verb": cmd.verb, "status": out.status, **out.report}
    return out


# rendering -----------------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)


def _terms_text(terms) -> list:
    lines = []
    for t in terms:
        val = t["value"] if t["value"] is not None else f"{t['bound']} (truncated)"
        lines.append(f"  {t['coefficient']} * {t['monomial']}  ->  {val}")
    return lines


def render_text(report: dict) -> str:
    if "error" in report:
        return f"error: {report['error']['message']}"
    verb = report["verb"]
    lines = []
    if "equation" in report:
        lines.append(f"equation: {report['equation']}")
    if verb == "check":
        lines.append(f"pair: {report['pair']}")
        lines += [f"x{i + 1} = {s}" for i, s in enumerate(report["solution"])]
        lines.append("terms:")
        lines += _terms_text(report["terms"])
        lines.append(f"verdict: {report['verdict']}")
    elif verb == "enumerate":
        lines.append(f"{len(report['solutions'])} solutions among {report['checked']} supports up to t^{report['max_deg']}:")
        lines += ["  {" + ", ".join(map(str, s)) + "}" for s in report["solutions"]]
        if report["unknown"]:
            lines.append("undecided within truncation:")
            lines += ["  {" + ", ".join(map(str, s)) + "}" for s in report["unknown"]]
    elif verb in ("solve-coeff", "scan"):
        rows = [report["result"]] if verb == "solve-coeff" else report["results"]
        for r in rows:
            head = f"slot {r['slot']}" + (f" ({r['name']})" if "name" in r else "")
            verdict = r["verdict"] + (f" c = {r['c']}" if r["c"] is not None else "")
            lines.append(f"{head}: {verdict}")
            lines.append("  terms: " + " + ".join(r["witness_terms"]))
            for eq in r.get("equations", []):
                lines.append(f"  equation: {eq}")
            if "note" in r:
                lines.append(f"  note: {r['note']}")
    elif verb in ("tropicalize", "classical-solve"):
        if "solution" in report:
            lines.append(f"solution: {report['solution']}")
        if "enhancement" in report:
            lines.append(f"enhancement: {report['enhancement']}")
        if "tropical_equation" in report:
            lines.append(f"tropical equation: {report['tropical_equation']}")
        for i, p in enumerate(report.get("point", [])):
            lines.append(f"tropical x{i + 1} = {p}")
        if "terms" in report:
            lines.append("terms:")
            lines += _terms_text(report["terms"])
        lines += [f"caveat: {c}" for c in report.get("caveats", [])]
        if "verdict" in report:
            lines.append(f"verdict: {report['verdict']}")
    elif verb == "verify":
        for r in report["results"]:
            mark = "ok  " if r["passed"] else "FAIL"
            lines.append(f"{mark} {r['suite']}: {r['checked']} checked, {r['skipped']} skipped")
            if r["counterexample"]:
                lines.append(f"     {r['counterexample']}")
        lines.append("all passed" if report["passed"] else "failures found")
    return "\n".join(lines)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    want_json = "--output=json" in argv or any(a == "--output" and b == "json" for a, b in zip(argv, argv[1:]))
    try:
        cmd = parse_invocation(argv)
    except (UsageError, ParseError) as exc:
        report = {"verb": None, "status": EXIT_USAGE, "error": {"code": EXIT_USAGE, "message": str(exc)}}
        if want_json:
            print(render_json(report))
        else:
            print(f"tropdiff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = run(cmd)
    if "error" in out.report:
        out.report.setdefault("verb", cmd.verb)
        out.report.setdefault("status", out.status)
    if cmd.config.output == "json":
        print(render_json(out.report))
    elif "error" in out.report:
        print(f"tropdiff: {render_text(out.report)}", file=sys.stderr)
    else:
        print(render_text(out.report))
    return out.status


if __name__ == "__main__":
    sys.exit(main())

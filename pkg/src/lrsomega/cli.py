"""Command-line interface.

Exit codes: 0 accept / success, 1 reject, 2 unknown, 3 error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import automata, formulas, lrs_core, oracle, spectrum, words
from .algebra import format_rational, parse_rational
from .errors import LrsOmegaError, NotSimple

EXIT = {automata.ACCEPT: 0, automata.REJECT: 1, automata.UNKNOWN: 2}
ERROR = 3


@dataclass
class RunReport:
    verdict: str
    exit_code: int
    provenance: list = field(default_factory=list)
    timing_s: float = 0.0
    config: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(asdict(self), indent=2, sort_keys=True)
        lines = [f"verdict: {self.verdict}"]
        for k, v in self.detail.items():
            lines.append(f"{k}: {v}")
        labels = sorted({p["label"] for p in self.provenance})
        if labels:
            lines.append("provenance: " + ", ".join(labels))
        if "heuristic-threshold" in labels:
            lines.append(
                "caveat: horizon-mode answers trust occurrences past the configured threshold; "
                "the true threshold is not computable"
            )
        lines.append(f"time: {self.timing_s:.2f}s")
        return "\n".join(lines)


def _out(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _oracle_config(args) -> oracle.LrsWordConfig:
    return oracle.LrsWordConfig(
        horizon=args.horizon,
        trust_threshold=args.threshold,
        mode=args.mode,
        solver=args.solver,
        solver_timeout=args.solver_timeout,
        exponent_bound=args.exponent_bound,
    )


def _config_echo(args) -> dict:
    keep = ("mode", "horizon", "threshold", "solver", "solver_timeout", "exponent_bound", "poly")
    return {k: getattr(args, k) for k in keep if hasattr(args, k)}


# ---------------------------------------------------------------------------
# commands


def cmd_signdesc(args) -> int:
    u = lrs_core.load(args.lrs)
    s = lrs_core.sign_string(u, args.length)
    if args.json:
        _out(json.dumps({"length": args.length, "signs": s}))
    else:
        _out(s)
    return 0


def cmd_decompose(args) -> int:
    u = lrs_core.load(args.lrs)
    m = lrs_core.minimize(u)
    try:
        a = spectrum.analyze(m)
    except NotSimple as exc:
        sys.stderr.write(f"unsupported: {exc}\n")
        return ERROR
    info = {
        "minimal_order": m.order,
        "minimal_recurrence": {"coeffs": [format_rational(c) for c in m.coeffs],
                               "initial": [format_rational(c) for c in m.initial]},
        "simple": True,
        "characteristic_polynomial": str(m.char_poly()),
        "period": a.period,
        "zero_offsets": sorted(a.zero_offsets),
        "roots": [str(r.ball) for r in a.roots],
        "groups": [list(g) for g in a.groups],
        "dominant": {str(l): [list(a.groups[j]) for j in js] for l, js in enumerate(a.dominant)},
        "root_of_unity_ratios": {f"{i},{j}": o for (i, j), o in a.ratio_orders.items() if o},
    }
    if args.json:
        _out(json.dumps(info, indent=2))
        return 0
    _out(f"minimal order: {m.order}")
    _out(f"characteristic polynomial: {m.char_poly()} (simple)")
    _out(f"P={a.period}")
    _out("Z=" + ("{" + ", ".join(map(str, sorted(a.zero_offsets))) + "}" if a.zero_offsets else "∅"))
    for i, r in enumerate(a.roots):
        _out(f"root {i}: {r.ball}")
    for l, js in enumerate(a.dominant):
        shown = "; ".join("{" + ", ".join(f"root {i}" for i in a.groups[j]) + "}" for j in js) or "none (identically zero)"
        _out(f"offset {l}: dominant {shown}")
    cert = [f"root {i}/root {j} has order {o}" for (i, j), o in a.ratio_orders.items() if o]
    _out("root-of-unity ratios: " + ("; ".join(cert) if cert else "none"))
    _out(f"non-degenerate after stepping by {a.period}: ratios of distinct P-th powers are not roots of unity")
    return 0


def _run_check(args, seqs, A) -> int:
    t0 = time.perf_counter()
    bad = automata.suffix_closure_violations(A)
    if bad:
        sys.stderr.write(
            f"warning: automaton does not look prefix-independent "
            f"(cycle {bad[0]!r} gets different verdicts from different states); the verdict may be wrong\n"
        )
    orc = oracle.LrsWordOracle(seqs, _oracle_config(args))
    res = automata.model_check(orc, A)
    rep = RunReport(
        res.verdict,
        EXIT[res.verdict],
        [{"pattern": p, "label": lab} for p, lab in orc.provenance],
        round(time.perf_counter() - t0, 3),
        _config_echo(args) | {"trust_threshold": orc.threshold, "period": orc.period, "tracks": len(seqs)},
        {
            "fixpoint_word": orc.alphabet.render(res.word),
            "minimal_label": sorted(res.seen),
            "iterations": res.iterations,
        } | ({"reason": res.reason} if res.reason else {}),
    )
    _out(rep.render(args.json))
    return rep.exit_code


def cmd_check(args) -> int:
    seqs = [lrs_core.load(p) for p in args.lrs]
    A = automata.MullerAutomaton.load(args.automaton)
    return _run_check(args, seqs, A)


def cmd_zone(args) -> int:
    seqs = [lrs_core.load(p) for p in args.lrs]
    tracks = [lrs_core.apply_polynomial(F, seqs) for F in args.poly]
    A = automata.MullerAutomaton.load(args.automaton)
    return _run_check(args, tracks, A)


def _gap_table(ws: str, pattern: str) -> list[dict]:
    st = words.gap_statistics(ws, pattern)
    rows, best = [], 0
    for k, (a, b) in enumerate(zip(st.positions, st.positions[1:])):
        best = max(best, b - a)
        rows.append({"occurrence": k + 1, "position": b, "index": b + 1, "gap": b - a, "max_gap_so_far": best})
    return rows


def _write_csv(rows: list[dict], dest):
    if not rows:
        dest.write("occurrence,position,index,gap,max_gap_so_far\n")
        return
    w = csv.DictWriter(dest, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def cmd_counterexample(args) -> int:
    re_, im_ = (parse_rational(x) for x in args.lam)
    u = lrs_core.non_almost_periodic_lrs(re_, im_)
    N = args.horizon
    t0 = time.perf_counter()
    s = lrs_core.sign_string(u, N)
    st = words.gap_statistics(s, "+")
    early = words.gap_statistics(s[:1000], "+")
    records = words.running_max_gaps(s, "+")
    report = {
        "lambda": f"{format_rational(re_)} + {format_rational(im_)}i",
        "recurrence": {"coeffs": [format_rational(c) for c in u.coeffs], "initial": [format_rational(c) for c in u.initial]},
        "simple": lrs_core.is_simple(u),
        "horizon": N,
        "plus_count": st.count,
        "last_plus_index": st.positions[-1] + 1 if st.positions else None,
        "max_gap": st.max_gap,
        "record_gaps": [{"index": p + 1, "gap": g} for p, g in records],
        "time_s": round(time.perf_counter() - t0, 3),
    }
    if N > 1000:
        report["max_gap_first_1000"] = early.max_gap
        report["gap_growth"] = st.max_gap > early.max_gap
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            _write_csv(_gap_table(s, "+"), fh)
    if args.json:
        _out(json.dumps(report, indent=2))
        return 0
    _out(f"u_n = 1 - n + n*Re(lambda^n), lambda = {report['lambda']}; order {u.order}, simple: {report['simple']}")
    _out(f"scanned {N} exact signs: {st.count} occurrences of '+', max gap {st.max_gap}")
    for r in report["record_gaps"]:
        _out(f"  new record gap {r['gap']} ending at index {r['index']}")
    if N > 1000:
        _out(f"max gap within first 1000: {early.max_gap}; within first {N}: {st.max_gap}")
    else:
        _out("small sample; no growth claim")
    return 0


def cmd_gaps(args) -> int:
    u = lrs_core.load(args.lrs)
    s = lrs_core.sign_string(u, args.length)
    st = words.gap_statistics(s, args.pattern)
    rows = _gap_table(s, args.pattern)
    if args.csv:
        if args.csv == "-":
            _write_csv(rows, sys.stdout)
        else:
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                _write_csv(rows, fh)
    if args.json:
        _out(json.dumps({"count": st.count, "max_gap": st.max_gap, "positions": st.positions[:1000]}))
    elif args.csv != "-":
        _out(f"count: {st.count}\nmax_gap: {st.max_gap}")
    return 0


def cmd_emit_formula(args) -> int:
    u = lrs_core.load(args.lrs)
    a = spectrum.analyze(u)
    enc = formulas.Encoding(a, args.exponent_bound)
    if args.block:
        targets = [args.pattern]
    else:
        targets = oracle.lift_pattern(args.pattern, a.period, a.zero_offsets)
    comment = f"pattern {args.pattern!r}; block words: {', '.join(targets) or 'none'}"
    if args.what == "u":
        f = enc.u_formula(targets) if targets else formulas.FALSE
    elif args.what.startswith("phi:"):
        B = int(args.what[4:])
        f = enc.phi_formula(targets, B) if targets else formulas.FALSE
        comment += f"; B={B}; quantified query, solvers may answer unknown"
    else:
        raise LrsOmegaError(f"--what must be 'u' or 'phi:B', not {args.what!r}")
    _out(formulas.to_smtlib(f, comment))
    return 0


# ---------------------------------------------------------------------------


def _oracle_flags(p: argparse.ArgumentParser):
    p.add_argument("--automaton", "-a", required=True, help="Muller automaton JSON")
    p.add_argument("--mode", choices=["horizon", "certified"], default="horizon")
    p.add_argument("--horizon", type=int, default=200_000)
    p.add_argument("--threshold", type=int, default=None, help="trust threshold (default max(2dP, 1000))")
    p.add_argument("--solver", default=None, help="SMT solver binary (default: $LRSOMEGA_SOLVER, z3, cvc5)")
    p.add_argument("--solver-timeout", type=float, default=60.0)
    p.add_argument("--exponent-bound", type=int, default=64)
    p.add_argument("--json", action="store_true")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors share the generic error code; 2 means Unknown here
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lrsomega", description="Sign descriptions of linear recurrences vs. Muller automata")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("signdesc", help="print the first N signs")
    p.add_argument("lrs")
    p.add_argument("--length", "-n", type=int, default=50)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_signdesc)

    p = sub.add_parser("decompose", help="degeneracy period, zero offsets, dominant roots")
    p.add_argument("lrs")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check", help="model-check the (product) sign description")
    p.add_argument("lrs", nargs="+")
    _oracle_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("zone", help="model-check the zone description of polynomial predicates")
    p.add_argument("lrs", nargs="+")
    p.add_argument("--poly", nargs="+", required=True, help="polynomials in x (or x1..xm)")
    _oracle_flags(p)
    p.set_defaults(func=cmd_zone)

    p = sub.add_parser("counterexample", help="gap growth of the non-almost-periodic order-6 sequence")
    p.add_argument("--lambda", dest="lam", nargs=2, default=["3/5", "4/5"], metavar=("RE", "IM"))
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--csv", default=None, help="write the gap table to this file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("emit-formula", help="SMT-LIB text for U(w') or Phi(B)")
    p.add_argument("lrs")
    p.add_argument("--pattern", "-p", required=True)
    p.add_argument("--what", default="u", help="'u' or 'phi:B'")
    p.add_argument("--block", action="store_true", help="pattern is already a block word (no lifting)")
    p.add_argument("--exponent-bound", type=int, default=64)
    p.set_defaults(func=cmd_emit_formula)

    p = sub.add_parser("gaps", help="occurrence gaps of a pattern in the exact sign word")
    p.add_argument("lrs")
    p.add_argument("--pattern", "-p", default="+")
    p.add_argument("--length", "-n", type=int, default=10_000)
    p.add_argument("--csv", default=None, help="CSV gap table path ('-' for stdout)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gaps)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        sys.stderr.close()  # reader went away, e.g. piped into head
        return 0
    except (LrsOmegaError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver: ``gcflab <command> ...``.

Exit codes: 0 success, 1 invariant violation or cross-check disagreement,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from . import raney, rcf
from .exact import Mat2
from .formatting import csv_text, int_str, json_line, json_text, ratio_str, real_str, unlimited_int_digits
from .gcf import (
    GCFInput,
    InvariantViolation,
    convergents,
    diagnostics,
    diagnostics_csv,
    diagnostics_jsonl,
    enclosure,
    quadratic_approximant,
)
from .substitution import Substitution, fixed_point_prefix, folding_word, stammer_bound, stammer_scan

log = logging.getLogger("gcflab")

DEFAULT_RULE = "a->ab;b->aa"


class UsageError(Exception):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")


def parse_assignment(text: str) -> dict:
    out = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        letter, sep, value = chunk.partition("=")
        letter = letter.strip()
        if not sep or len(letter) != 1:
            raise UsageError("--assign", f"expected letter=value, got {chunk!r}")
        try:
            v = int(value)
        except ValueError:
            raise UsageError("--assign", f"{value.strip()!r} is not an integer") from None
        if v < 1:
            raise UsageError("--assign", f"value for {letter!r} must be a positive integer")
        out[letter] = v
    if not out:
        raise UsageError("--assign", "empty assignment")
    return out


def _rule(args) -> Substitution:
    try:
        return Substitution.parse(args.rule)
    except ValueError as exc:
        raise UsageError("--rule", str(exc)) from None


def _gcf_input(args) -> GCFInput:
    sub = _rule(args)
    assignment = parse_assignment(args.assign)
    try:
        return GCFInput.from_substitution(sub, assignment, seed=args.seed)
    except ValueError as exc:
        raise UsageError("--assign/--seed", str(exc)) from None


def _fraction(text: str, field: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(field, f"{text!r} is not a rational number") from None


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_convergents(args) -> int:
    if args.depth < 0:
        raise UsageError("--depth", "must be >= 0")
    inp = _gcf_input(args)
    rows = [(n, p, q, ratio_str(p, q)) for n, p, q in convergents(inp, args.depth)]
    if args.format == "json":
        text = "".join(
            f'{{"n": {n}, "p": {int_str(p)}, "q": {int_str(q)}, "value": {v}}}\n' for n, p, q, v in rows
        )
    else:
        text = csv_text(("n", "p", "q", "value"), [(n, int_str(p), int_str(q), v) for n, p, q, v in rows])
    _write(args, text)
    return 0


def cmd_diagnose(args) -> int:
    if args.depth < 2:
        raise UsageError("--depth", "diagnostics need depth >= 2")
    inp = _gcf_input(args)
    rows = []
    for row in diagnostics(inp, args.depth):
        rows.append(row)
        if row.n % 500 == 0:
            log.info("diagnostics: row %d", row.n)
    failing = [r.n for r in rows if r.n >= args.margin_from and not r.inequality_holds]
    if failing:
        print(f"warning: d_n < q_n/d_n fails at n = {failing[:20]}", file=sys.stderr)
    _write(args, diagnostics_jsonl(rows) if args.format == "json" else diagnostics_csv(rows))
    return 0


def _mat(text: str, field: str) -> Mat2:
    try:
        return Mat2.parse(text)
    except ValueError as exc:
        raise UsageError(field, str(exc)) from None


def cmd_raney(args) -> int:
    if args.det < 2:
        raise UsageError("--det", "must be >= 2")
    if args.action == "states":
        states = raney.enumerate_states(args.det)
        if args.format == "json":
            text = json_text({"det": args.det, "states": [str(s) for s in states]}) + "\n"
        else:
            text = csv_text(("a", "b", "c", "d"), [s.entries() for s in states])
    elif args.action == "table":
        table = raney.derive_table(args.det, args.max_input)
        if args.format == "json":
            text = table.to_json() + "\n"
        elif args.format == "dot":
            text = table.to_dot()
        else:
            text = csv_text(("from", "in", "out", "to"), [(str(e.src), e.inp, e.out, str(e.dst)) for e in table.edges])
    else:
        if args.state is None:
            raise UsageError("--state", "required for 'raney run'")
        start = _mat(args.state, "--state")
        if start.det != args.det:
            raise UsageError("--state", f"determinant {start.det} differs from --det {args.det}")
        if set(args.input) - {"L", "R"}:
            raise UsageError("--input", "letters must be L or R")
        try:
            trace = raney.run_trace(start, args.input)
        except ValueError as exc:
            raise UsageError("--state", str(exc)) from None
        output = "".join(o for _, o, _ in trace)
        final = trace[-1][2] if trace else start
        if args.format == "json":
            text = json_text(
                {
                    "start": str(start),
                    "input": args.input,
                    "output": output,
                    "final": str(final),
                    "trace": [{"letter": x, "emitted": o, "config": str(m)} for x, o, m in trace],
                }
            ) + "\n"
        else:
            rows, so_far = [], ""
            for i, (x, o, m) in enumerate(trace, 1):
                so_far += o
                rows.append((i, x, o, so_far, str(m)))
            text = csv_text(("step", "letter", "emitted", "output", "config"), rows)
    _write(args, text)
    return 0


def cmd_rcf(args) -> int:
    if args.foldings < 0:
        raise UsageError("--foldings", "must be >= 0")
    assignment = parse_assignment(args.assign)
    if set(assignment) != {"a", "b"}:
        raise UsageError("--assign", "the folding word uses letters a and b")
    word = folding_word(args.foldings)
    log.info("normalizing folding generation %d (%d letters)", args.foldings, len(word))
    nf = rcf.normalize(word, rcf.encoding_from_assignment(assignment))
    report = rcf.confirmed_quotients(nf)
    if not args.crosscheck:
        _write(args, _reports_text(args, [report]))
        return 0
    if args.depth < 1:
        raise UsageError("--depth", "must be >= 1")
    log.info("interval arm at depth %d", args.depth)
    inp = GCFInput.from_substitution(Substitution.parse(DEFAULT_RULE), assignment)
    check = rcf.compare(report, rcf.interval_report(enclosure(inp, args.depth)))
    if args.format == "json":
        text = json_text({**check.to_dict(), "agreement": not check.discrepancy}) + "\n"
    else:
        text = _reports_text(args, [check.transducer, check.interval])
        text += f"# agreed={check.agreed} agreement={str(not check.discrepancy).lower()}\n"
    _write(args, text)
    return 1 if check.discrepancy else 0


def _reports_text(args, reports) -> str:
    if args.format == "json":
        return "".join(r.to_json() + "\n" for r in reports)
    return csv_text(
        ("source", "confirmed", "next_lower_bound"),
        [(r.source, " ".join(map(str, r.confirmed)), r.next_lower_bound) for r in reports],
    )


def cmd_stammer(args) -> int:
    r = _fraction(args.exponent, "--exponent")
    if r <= 1:
        raise UsageError("--exponent", "must exceed 1")
    if args.length < 1:
        raise UsageError("--length", "must be >= 1")
    sub = _rule(args)
    seed = args.seed or sub.alphabet[0]
    try:
        prefix = fixed_point_prefix(sub, seed, args.length)
        bound = stammer_bound(sub, seed)
    except ValueError as exc:
        raise UsageError("--seed", str(exc)) from None
    hits = stammer_scan(prefix, r, args.min_len)
    if args.format == "json":
        text = json_text(
            {"bound": str(bound), "hits": [{"length": len(h.w), "exponent": str(h.exponent), "w": h.w} for h in hits]}
        ) + "\n"
    else:
        rows = [("bound", "", str(bound), "")]
        rows += [("hit", len(h.w), str(h.exponent), h.w) for h in hits]
        text = csv_text(("kind", "length", "exponent", "w"), rows)
    _write(args, text)
    return 0


def cmd_quadratic(args) -> int:
    if args.period < 1:
        raise UsageError("--period", "must be >= 1")
    inp = _gcf_input(args)
    width = _fraction(args.width, "--width")
    qa = quadratic_approximant(inp, args.period, literal=args.literal, width=width)
    A, B, C = qa.coefficients
    lo, hi = qa.root.lo, qa.root.hi
    record = {"period": args.period, "A": A, "B": B, "C": C, "lo": lo, "hi": hi}
    if args.format == "json":
        text = json_line(record, reals=("lo", "hi")) + "\n"
    else:
        text = csv_text(record.keys(), [[args.period, A, B, C, real_str(lo), real_str(hi)]])
    _write(args, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    def common_opts(default_format="csv", formats=("csv", "json")):
        # a fresh parent per subcommand: parents share Action objects
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--format", choices=formats, default=default_format)
        common.add_argument("--out", metavar="PATH")
        common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
        return common

    gcf_opts = argparse.ArgumentParser(add_help=False)
    gcf_opts.add_argument("--rule", default=DEFAULT_RULE, help="substitution, e.g. 'a->ab;b->aa'")
    gcf_opts.add_argument("--assign", default="a=1,b=3", help="letter values, e.g. 'a=1,b=3'")
    gcf_opts.add_argument("--seed", help="fixed-point seed letter (default: first self-prefixed letter)")

    parser = argparse.ArgumentParser(prog="gcflab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convergents", parents=[common_opts(), gcf_opts], help="p_n, q_n and p_n/q_n")
    p.add_argument("--depth", type=int, default=10)
    p.set_defaults(func=cmd_convergents)

    p = sub.add_parser("diagnose", parents=[common_opts(), gcf_opts], help="gcd, growth and approximation diagnostics")
    p.add_argument("--depth", type=int, default=200)
    p.add_argument("--margin-from", type=int, default=10, help="first n at which d_n < q_n/d_n is checked")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("raney", help="balanced-matrix transducers")
    p.set_defaults(func=cmd_raney)
    rsub = p.add_subparsers(dest="action", required=True)
    r = rsub.add_parser("states", parents=[common_opts()])
    r.add_argument("--det", type=int, required=True)
    r = rsub.add_parser("table", parents=[common_opts(formats=("csv", "json", "dot"))])
    r.add_argument("--det", type=int, required=True)
    r.add_argument("--max-input", type=int, default=16)
    r = rsub.add_parser("run", parents=[common_opts()])
    r.add_argument("--det", type=int, required=True)
    r.add_argument("--state", help="start matrix, row-major 'a,b,c,d'")
    r.add_argument("--input", default="", help="word over L and R")

    p = sub.add_parser("rcf", parents=[common_opts("json")], help="regular continued fraction quotients")
    p.add_argument("--foldings", type=int, default=3)
    p.add_argument("--assign", default="a=1,b=3")
    p.add_argument("--crosscheck", action="store_true")
    p.add_argument("--depth", type=int, default=4096, help="GCF depth of the interval arm")
    p.set_defaults(func=cmd_rcf)

    p = sub.add_parser("stammer", parents=[common_opts()], help="stammering prefixes of a fixed point")
    p.add_argument("--rule", default=DEFAULT_RULE)
    p.add_argument("--seed")
    p.add_argument("--length", type=int, default=2**12)
    p.add_argument("--exponent", default="4/3")
    p.add_argument("--min-len", type=int, default=1)
    p.set_defaults(func=cmd_stammer)

    p = sub.add_parser("quadratic", parents=[common_opts(), gcf_opts], help="periodic quadratic approximant")
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--literal", action="store_true", help="use q_{k-1}x^2 + (q_k - p_{k-1})x - p_k")
    p.add_argument("--width", default="1/1000000000000000000000000000000")
    p.set_defaults(func=cmd_quadratic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    try:
        with unlimited_int_digits():
            return args.func(args)
    except UsageError as exc:
        print(f"gcflab: error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"gcflab: invariant violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

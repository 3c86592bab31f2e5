"""Command-line interface.

    forgetfulness fit        estimate (x0, m) from an event log
    forgetfulness simulate   write a synthetic cohort and its ground truth
    forgetfulness decay      emit a plot-ready decay curve
    forgetfulness match      compare two users' decayed tag profiles
    forgetfulness intervals  list retag intervals

Exit codes: 0 success, 1 runtime error, 2 fit not accepted, 64 usage error.
Durations take s/h/d/w suffixes (bare numbers are seconds); rates take an
optional ``/unit`` suffix (bare numbers are per second, except in
``simulate`` where ``--rate-unit`` defaults to days).
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys

from . import __version__
from .decay import DecayParams, decay_curve
from .errors import ForgetfulnessError
from .estimation import fit as run_fit
from .ingestion import ANY_SCOPE, bin_usage, read_events, retag_intervals, write_events
from .matching import build_profile, similarity
from .simulation import DEFAULT_ORIGIN, CohortSpec, simulate_cohort
from .units import DAY, format_instant, parse_duration, parse_instant, parse_rate

EXIT_OK, EXIT_ERROR, EXIT_NOT_ACCEPTED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _err(message: str) -> None:
    print(message, file=sys.stderr)


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _load(path: str, format: str | None):
    events, diagnostics = read_events(path, format)
    for diag in diagnostics:
        _err(str(diag))
    return events


def _duration(text):
    try:
        return parse_duration(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _instant(text):
    try:
        return parse_instant(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid timestamp {text!r}: {exc}") from None


def _rate(text, per=1.0):
    text = str(text).strip()
    try:
        return parse_rate(text) if "/" in text else float(text) / per
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _range(text, per=1.0):
    lo, sep, hi = str(text).partition(":")
    if not sep:
        raise UsageError(f"range must look like a:b, got {text!r}")
    a, b = _rate(lo, per), _rate(hi, per)
    if a > b:
        raise UsageError(f"range {text!r} has a > b")
    return a, b


# --- fit ---------------------------------------------------------------------


def cmd_fit(args) -> int:
    events = _load(args.input, args.format)
    if not events:
        _err("no events in input")
        return EXIT_ERROR
    width = args.bin
    if not width > 0:
        raise UsageError("--bin must be > 0")
    start = args.start if args.start is not None else min(ev.timestamp for ev in events)
    if args.end is None:
        latest = max(ev.timestamp for ev in events)
        end = start + (math.floor((latest - start) / width) + 1) * width
    else:
        try:
            if args.end.startswith("+"):
                end = start + parse_duration(args.end[1:])
            else:
                end = parse_instant(args.end)
        except ValueError as exc:
            raise UsageError(f"invalid --end {args.end!r}: {exc}") from None

    users = args.user
    if users == [ANY_SCOPE]:
        users = sorted({ev.user_id for ev in events})
    results, code = {}, EXIT_OK
    for user in users:
        try:
            series = bin_usage(events, user, args.scope, width, (start, end))
            result = run_fit(series, args.method)
        except ForgetfulnessError as exc:
            if len(users) == 1:
                raise
            results[user] = {"error": str(exc)}
            code = EXIT_ERROR
            continue
        results[user] = result.to_dict()
        for warning in result.warnings:
            _err(f"{user}: {warning}")
        if not result.accepted and code == EXIT_OK:
            code = EXIT_NOT_ACCEPTED
    payload = results[users[0]] if len(users) == 1 else results
    with _open_out(args.output) as out:
        out.write(json.dumps(payload, indent=2) + "\n")
    return code


# --- simulate ----------------------------------------------------------------


def cmd_simulate(args) -> int:
    per = parse_duration("1" + args.rate_unit)
    if args.users < 1:
        raise UsageError("--users must be >= 1")
    if not args.days > 0:
        raise UsageError("--days must be > 0")
    m_range = _range(args.m_range, per)
    if not m_range[0] > 0:
        raise UsageError("--m-range lower bound must be > 0")
    x0_lo, x0_hi = _range(args.x0_range)
    if x0_lo < 0:
        raise UsageError("--x0-range must be non-negative")
    try:
        spec = CohortSpec(
            n_users=args.users,
            horizon=args.days * DAY,
            lambda0=_rate(args.lambda0, per),
            x0_range=(x0_lo, x0_hi),
            m_range=m_range,
            tags_per_user=args.tags_per_user,
            seed=args.seed,
            object_id=args.object_id,
            origin=args.origin,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    events, truth = simulate_cohort(spec)
    fmt = args.format or ("jsonl" if args.out_events.endswith(".jsonl") else "csv")
    with _open_out(args.out_events) as out:
        write_events(events, out, fmt)
    if args.out_truth:
        with _open_out(args.out_truth) as out:
            out.write(truth.to_json(indent=2) + "\n")
    _err(f"wrote {len(events)} events for {len(truth)} users")
    return EXIT_OK


# --- decay -------------------------------------------------------------------


def cmd_decay(args) -> int:
    params = DecayParams(args.x0, _rate(args.m))
    rows = decay_curve(params, args.t_max, args.samples)
    with _open_out(args.output) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["t", "x"])
        writer.writerows((repr(t), repr(x)) for t, x in rows)
    return EXIT_OK


# --- match -------------------------------------------------------------------


def cmd_match(args) -> int:
    m = _rate(args.m)
    events = _load(args.input, args.format)
    visible = [ev for ev in events if ev.timestamp <= args.at]
    if len(visible) < len(events):
        _err(f"ignoring {len(events) - len(visible)} event(s) after {format_instant(args.at)}")
    pa = build_profile(visible, args.user_a, m, args.at)
    pb = build_profile(visible, args.user_b, m, args.at)
    payload = {"similarity": similarity(pa, pb), "profile_a": pa.to_dict(), "profile_b": pb.to_dict()}
    with _open_out(args.output) as out:
        out.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


# --- intervals ---------------------------------------------------------------


def cmd_intervals(args) -> int:
    intervals = retag_intervals(_load(args.input, args.format))
    with _open_out(args.output) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["user_id", "object_id", "gap_seconds"])
        writer.writerows((iv.user_id, iv.object_id, repr(iv.gap)) for iv in intervals)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="forgetfulness", description="Exponential forgetting of tag interest.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    fmt = dict(choices=("csv", "jsonl"), default=None, help="input format (default: from file extension)")

    p = sub.add_parser("fit", help="estimate the tedium coefficient from an event log")
    p.add_argument("--input", required=True)
    p.add_argument("--format", **fmt)
    p.add_argument("--user", required=True, action="append", help="user id; repeat, or '*' for every user")
    p.add_argument("--scope", default=ANY_SCOPE, help="tag name, ontology:<id>, or '*' (default)")
    p.add_argument("--bin", required=True, type=_duration, help="bin width, e.g. 1w")
    p.add_argument("--method", choices=("loglinear", "nonlinear"), default="nonlinear")
    p.add_argument("--start", type=_instant, default=None, help="span start (default: earliest event)")
    p.add_argument("--end", default=None, help="span end: timestamp or +duration from start")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="generate a synthetic cohort")
    p.add_argument("--users", type=int, default=20)
    p.add_argument("--days", type=float, default=150.0)
    p.add_argument("--lambda0", default="10/d", help="event rate at x = 1")
    p.add_argument("--m-range", default="0.02:0.1")
    p.add_argument("--x0-range", default="1:5")
    p.add_argument("--tags-per-user", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rate-unit", choices=("s", "h", "d", "w"), default="d", help="unit for bare rates")
    p.add_argument("--object-id", default="o1")
    p.add_argument("--origin", type=_instant, default=DEFAULT_ORIGIN)
    p.add_argument("--format", choices=("csv", "jsonl"), default=None)
    p.add_argument("--out-events", required=True)
    p.add_argument("--out-truth", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decay", help="emit a decay curve as CSV")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--t-max", type=_duration, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("match", help="similarity of two users' tag profiles")
    p.add_argument("--input", required=True)
    p.add_argument("--format", **fmt)
    p.add_argument("--user-a", required=True)
    p.add_argument("--user-b", required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--at", type=_instant, required=True)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("intervals", help="list retag intervals as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--format", **fmt)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_intervals)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _err(f"forgetfulness {args.command}: error: {exc}")
        return EXIT_USAGE
    except (ForgetfulnessError, ValueError, OSError) as exc:
        _err(f"forgetfulness {args.command}: {exc}")
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())

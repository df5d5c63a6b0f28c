"""Command-line interface.

One-shot verbs desugar to dialogue commands on a throwaway session, so a
--json run emits exactly the Reply JSON the HTTP service would return for
the same query. Exit codes: 0 executed, 1 usage/parse/data error,
2 negative verdict under --strict, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import IO, Optional

from .engine import NEGATIVE_STATUSES, EngineConfig
from .session import Reply, Session, execute, transcript

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2
EXIT_RESOURCE = 3

_NEGATIVE_OUTCOMES = frozenset({"fails", "biased"})


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexdialog",
        description="Interrogate laws: model checking, consistency, "
                    "entailment and bias audits over case files.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p: argparse.ArgumentParser, bound: bool = False) -> None:
        p.add_argument("--sig", required=True, help="signature file (.sig)")
        p.add_argument("--json", action="store_true",
                       help="machine-readable reply on stdout")
        p.add_argument("--strict", action="store_true",
                       help="exit 2 on a negative verdict")
        p.add_argument("--budget", type=int, default=None,
                       help="search budget (states and candidate models)")
        if bound:
            p.add_argument("--bound", type=int, default=None,
                           help="domain size bound for relational queries")

    p = sub.add_parser("check", help="does a case satisfy a law")
    p.add_argument("case", help="case file (.case or .trace)")
    p.add_argument("law", help="law file (.law)")
    common(p)

    p = sub.add_parser("consistent", help="is some situation lawful at all")
    p.add_argument("law")
    common(p, bound=True)

    p = sub.add_parser("implies", help="does the law entail the property")
    p.add_argument("law")
    p.add_argument("property")
    common(p, bound=True)

    p = sub.add_parser("audit", help="counterfactual bias audit of a case")
    p.add_argument("case")
    p.add_argument("--protected", required=True,
                   help="protected function name")
    p.add_argument("--score", required=True, help="score function name")
    common(p)

    p = sub.add_parser("repl", help="interactive dialogue session")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--transcript", default=None,
                   help="write the session transcript here on exit")

    p = sub.add_parser("serve", help="run the HTTP dialogue service")
    p.add_argument("--addr", default=None, help="host:port to bind")
    return parser


def _config(budget: Optional[int]) -> EngineConfig:
    if budget is None:
        return EngineConfig()
    if budget < 1:
        raise ValueError("--budget must be positive")
    return EngineConfig(candidate_budget=budget, state_budget=budget)


def _session_with(commands: list[str], config: EngineConfig,
                  err: IO[str]) -> tuple[Optional[Session], Optional[Reply]]:
    """Run setup commands; any failure is terminal."""
    s = Session(config=config)
    for command in commands:
        s, reply = execute(s, command)
        if reply.is_error:
            print(reply.human_text, file=err)
            return None, reply
    return s, None


def _emit(reply: Reply, as_json: bool, out: IO[str]) -> None:
    if as_json:
        print(json.dumps(reply.to_json()), file=out)
        return
    print(reply.human_text, file=out)
    if reply.detail:
        print(reply.detail, file=out)


def _is_negative(reply: Reply) -> bool:
    payload = reply.payload
    if payload.get("status") in NEGATIVE_STATUSES:
        return True
    return payload.get("outcome") in _NEGATIVE_OUTCOMES


def _finish(reply: Reply, args: argparse.Namespace, out: IO[str],
            err: IO[str]) -> int:
    if reply.is_error:
        print(reply.human_text, file=err)
        return EXIT_RESOURCE if reply.error_code == "resource_limit" else EXIT_ERROR
    _emit(reply, args.json, out)
    if args.strict and _is_negative(reply):
        return EXIT_NEGATIVE
    return EXIT_OK


def _bound_suffix(args: argparse.Namespace) -> str:
    bound = getattr(args, "bound", None)
    return f" bound {bound}" if bound is not None else ""


def run(argv: list[str], out: Optional[IO[str]] = None,
        err: Optional[IO[str]] = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        config = _config(getattr(args, "budget", None))
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR

    if args.verb == "repl":
        return _repl(args, config, out, err)
    if args.verb == "serve":
        from .service import serve
        serve(args.addr)
        return EXIT_OK

    setup = [f"load sig s {args.sig}"]
    if args.verb == "check":
        setup.append(f"load case case {args.case} sig=s")
        setup.append(f"load law law {args.law} sig=s")
        query = "check case law"
    elif args.verb == "consistent":
        setup.append(f"load law law {args.law} sig=s")
        query = "consistent law" + _bound_suffix(args)
    elif args.verb == "implies":
        setup.append(f"load law law {args.law} sig=s")
        setup.append(f"load law prop {args.property} sig=s")
        query = "implies law prop" + _bound_suffix(args)
    else:  # audit
        setup.append(f"load case case {args.case} sig=s")
        query = f"audit case protected={args.protected} score={args.score}"

    s, failure = _session_with(setup, config, err)
    if s is None:
        return (EXIT_RESOURCE if failure is not None
                and failure.error_code == "resource_limit" else EXIT_ERROR)
    _, reply = execute(s, query)
    return _finish(reply, args, out, err)


def _repl(args: argparse.Namespace, config: EngineConfig, out: IO[str],
          err: IO[str]) -> int:
    s = Session(config=config)
    interactive = sys.stdin.isatty()
    if interactive:
        print("lexdialog — type 'help' for commands, 'exit' to leave", file=out)
    while True:
        if interactive:
            out.write("lexdialog> ")
            out.flush()
        line = sys.stdin.readline()
        if not line:
            break
        command = line.strip()
        if not command:
            continue
        if command in ("exit", "quit"):
            break
        s, reply = execute(s, command)
        _emit(reply, False, out)
        print(file=out)
    if args.transcript:
        with open(args.transcript, "w", encoding="utf-8") as fh:
            fh.write(transcript(s))
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

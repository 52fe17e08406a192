"""Command-line front door: validate, recommend, test, diagnose-kb, serve.

Requirement flags are positional-order-significant: the first -r flag is
the first-entered (most important) requirement, and that order drives which
requirements a diagnosis prefers to keep. `--json` emits exactly the bytes
the HTTP service would return for the same operation.

Exit codes: 0 success (or all tests passing), 1 domain-level failure
(parse error, unknown variable or value, no solution, failing tests),
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Sequence

from . import payloads
from .dsl import ParseError, parse, render_constraint
from .kbtest import ORDERING_DEFINITION, ORDERINGS, diagnose_kb, run_tests
from .model import (
    IntegerRangeDomain,
    KnowledgeBase,
    ModelError,
    Requirement,
    UnrepairableError,
)
from .repair import (
    DEFAULT_N_DIAGNOSES,
    STATUS_REPAIRS,
    STATUS_SOLUTIONS,
    RecommendationResult,
    recommend,
    recommend_for_item,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _emit_json(payload: dict) -> None:
    sys.stdout.buffer.write(payloads.to_json_bytes(payload))
    sys.stdout.buffer.flush()


def _load_kb(path: str, as_json: bool) -> tuple[str, KnowledgeBase] | int:
    """Parse the file or return an exit code after reporting the problem."""
    try:
        source = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return source, parse(source)
    except ParseError as exc:
        if as_json:
            _emit_json(payloads.parse_error_payload(exc))
        else:
            print(
                f"{path}:{exc.line}:{exc.column}: {exc.kind}: {exc.message}",
                file=sys.stderr,
            )
        return EXIT_FAILURE


def _parse_requirements(
    kb: KnowledgeBase, pairs: Sequence[str]
) -> list[Requirement] | None:
    requirements = []
    for rank, pair in enumerate(pairs, start=1):
        var, sep, raw = pair.partition("=")
        if not sep:
            print(f"error: -r expects var=value, got {pair!r}", file=sys.stderr)
            return None
        value: object = raw
        if (
            kb.has_user_var(var)
            and isinstance(kb.user_var(var).domain, IntegerRangeDomain)
            and _is_int_text(raw)
        ):
            value = int(raw)
        requirements.append(Requirement(var=var, value=value, entry_rank=rank))
    return requirements


def _is_int_text(text: str) -> bool:
    return re.fullmatch(r"-?\d+", text.strip()) is not None


def _render_value(value: object) -> str:
    return str(value)


def _print_recommendation(
    result: RecommendationResult, requirements: Sequence[Requirement]
) -> None:
    if result.status == STATUS_SOLUTIONS:
        print("solutions: " + (", ".join(result.items) if result.items else "none"))
        return
    if result.status != STATUS_REPAIRS:
        print("unrepairable: no change of requirements leads to a solution")
        return
    entry_rank = {r.var: r.entry_rank for r in requirements}
    print("no solution; repair proposals follow")
    for group in result.groups:
        removed = sorted(group.diagnosis.elements, key=lambda var: entry_rank[var])
        print("remove: " + ", ".join(removed))
        for repair in group.repairs:
            changes = ", ".join(
                f"{var}={_render_value(value)}"
                for var, value in repair.adaptation.items()
            )
            items = ", ".join(repair.items)
            support = f"{repair.diagnosis.cardinality}/{len(requirements)}"
            print(
                f"  {changes} -> {items}"
                f" (support {support}, {float(repair.support):.3f})"
            )


def _cmd_validate(args: argparse.Namespace) -> int:
    loaded = _load_kb(args.file, args.json)
    if isinstance(loaded, int):
        return loaded
    source, kb = loaded
    if args.json:
        _emit_json(payloads.kb_summary_payload(source, kb))
    else:
        print(
            f"ok: questions={len(kb.user_vars)} products={len(kb.products)}"
            f" constraints={len(kb.kb_constraints)} tests={len(kb.tests)}"
        )
    return EXIT_OK


def _cmd_recommend(args: argparse.Namespace) -> int:
    loaded = _load_kb(args.file, args.json)
    if isinstance(loaded, int):
        return loaded
    _, kb = loaded
    requirements = _parse_requirements(kb, args.require)
    if requirements is None:
        return EXIT_USAGE
    try:
        if args.item is not None:
            result = recommend_for_item(kb, requirements, args.item)
        else:
            result = recommend(kb, requirements, n_diagnoses=args.n)
    except ModelError as exc:
        if args.json:
            _emit_json(payloads.error_payload(str(exc)))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if args.json:
        _emit_json(payloads.recommendation_payload(result, requirements))
    else:
        _print_recommendation(result, requirements)
    return EXIT_OK if result.status == STATUS_SOLUTIONS else EXIT_FAILURE


def _cmd_test(args: argparse.Namespace) -> int:
    loaded = _load_kb(args.file, args.json)
    if isinstance(loaded, int):
        return loaded
    _, kb = loaded
    results = run_tests(kb)
    if args.json:
        _emit_json(payloads.test_run_payload(results))
    elif not results:
        print("no tests")
    else:
        for r in results:
            print(f"{r.status}: {r.name}" + (" |show|" if r.show else ""))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


def _cmd_diagnose_kb(args: argparse.Namespace) -> int:
    loaded = _load_kb(args.file, args.json)
    if isinstance(loaded, int):
        return loaded
    _, kb = loaded
    try:
        result = diagnose_kb(kb, ordering=args.ordering, n=args.n)
    except UnrepairableError as exc:
        if args.json:
            _emit_json(payloads.error_payload(str(exc)))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if args.json:
        _emit_json(payloads.kb_diagnosis_payload(kb, result))
    elif result.all_pass:
        print("all tests pass")
    else:
        for i, diagnosis in enumerate(result.diagnoses, start=1):
            ranked = sorted(
                diagnosis.elements,
                key=lambda cid: kb.constraint(cid).definition_rank,
            )
            print(f"diagnosis {i}: remove " + ", ".join(ranked))
            for cid in ranked:
                print(f"  {cid}: {render_constraint(kb.constraint(cid))}")
    return EXIT_OK if result.all_pass else EXIT_FAILURE


def _cmd_serve(args: argparse.Namespace) -> int:
    host, sep, port_text = args.addr.rpartition(":")
    if not sep or not port_text.isdigit():
        print(f"error: --addr expects HOST:PORT, got {args.addr!r}", file=sys.stderr)
        return EXIT_USAGE
    import uvicorn

    from .service import KbStore, create_app

    app = create_app(KbStore(args.kb_dir))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port_text))
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wrec",
        description="Constraint-based recommender: query, explain, repair, debug.",
    )
    parser.add_argument(
        "--json", action="store_true", help="emit the service JSON body"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument(
            "--json",
            action="store_true",
            default=argparse.SUPPRESS,
            help="emit the service JSON body",
        )
        return p

    p = add("validate", "parse a knowledge base file and report its shape")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = add("recommend", "items for the given requirements, or repairs")
    p.add_argument("file")
    p.add_argument(
        "-r",
        "--require",
        action="append",
        default=[],
        metavar="VAR=VALUE",
        help="one requirement; flag order is entry order (first = most important)",
    )
    p.add_argument("-n", type=_positive_int, default=DEFAULT_N_DIAGNOSES,
                   help="max diagnoses to report")
    p.add_argument("--item", help="target one product: why is it excluded?")
    p.set_defaults(handler=_cmd_recommend)

    p = add("test", "run the knowledge base regression tests")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_test)

    p = add("diagnose-kb", "find constraints responsible for failing tests")
    p.add_argument("file")
    p.add_argument("--ordering", choices=ORDERINGS, default=ORDERING_DEFINITION)
    p.add_argument("-n", type=_positive_int, default=DEFAULT_N_DIAGNOSES)
    p.set_defaults(handler=_cmd_diagnose_kb)

    p = add("serve", "start the HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8000", help="HOST:PORT to bind")
    p.add_argument("--kb-dir", help="directory for persistent .wrec storage")
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "json"):
        args.json = False
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())

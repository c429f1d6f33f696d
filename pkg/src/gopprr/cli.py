"""Command-line entry point.

Subcommands: ``validate``, ``export``, ``verify``, ``stats``. Exit
status is a stable scripting contract: 0 for success/valid, 1 when
validation or verification finds failures, 2 for usage, I/O or parse
errors. All output is UTF-8 with LF endings and byte-deterministic for
fixed inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import (
    COUNT_TABLE_KINDS,
    MetaModel,
    ValidationReport,
    connector_arithmetic,
    count_summary,
)
from .dsl import (
    DocumentSchemaError,
    DocumentSemanticError,
    DocumentSyntaxError,
    parse_metamodel,
    parse_model,
)
from .kgexport import NTriplesSyntaxError, Vocabulary, parse_ntriples, serialize_ntriples, serialize_turtle
from .query import completeness_report, logic_report, verify


class _Failure(Exception):
    """Internal: carries an exit status and pre-rendered output."""

    def __init__(self, status: int, text: str):
        super().__init__(text)
        self.status = status
        self.text = text


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_output(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def _report_payload(report: ValidationReport) -> dict:
    return {
        "ok": report.ok,
        "violations": [
            {"code": v.code, "message": v.message, "ids": list(v.ids)} for v in report.violations
        ],
    }


def _report_text(report: ValidationReport, as_json: bool) -> str:
    if as_json:
        return _json_text(_report_payload(report))
    if report.ok:
        return "OK"
    lines = ["FAIL"]
    lines += [f"{v.code}\t{v.message}\t{','.join(v.ids)}" for v in report.violations]
    return "\n".join(lines)


def _parse_metamodel(args, path: str) -> MetaModel:
    try:
        return parse_metamodel(_read(path))
    except DocumentSemanticError as exc:
        raise _Failure(1, _report_text(exc.report, args.json)) from exc


def _parse_model(args, path: str, mm: MetaModel):
    try:
        return parse_model(_read(path), mm)
    except DocumentSemanticError as exc:
        raise _Failure(1, _report_text(exc.report, args.json)) from exc


def _figure_target(args, input_path: str, command: str) -> Path:
    stem = Path(input_path).name.split(".")[0]
    directory = Path(args.figures)
    directory.mkdir(parents=True, exist_ok=True)
    return directory / f"{command}_{stem}.png"


def format_stats(mm: MetaModel) -> str:
    """Tab-separated header and value row of declaration and rule counts."""
    counts = count_summary(mm)
    arith = connector_arithmetic(mm)
    plurals = {"Property": "properties"}
    header = ["language"]
    header += [plurals.get(k.value, k.value.lower() + "s") for k in COUNT_TABLE_KINDS]
    header += ["rules", "connectors", "savings"]
    row = [mm.language_name] + [str(counts[k]) for k in COUNT_TABLE_KINDS]
    row += [str(arith.rules), str(arith.connectors), str(arith.savings)]
    return "\t".join(header) + "\n" + "\t".join(row)


def cmd_validate(args) -> int:
    mm = _parse_metamodel(args, args.metamodel)
    if args.model:
        _parse_model(args, args.model, mm)
    _write_output(args, _report_text(ValidationReport(), args.json))
    return 0


def cmd_export(args) -> int:
    vocab = Vocabulary(args.base_iri)
    mm = _parse_metamodel(args, args.metamodel)
    if args.model:
        from .kgexport import export_model

        model = _parse_model(args, args.model, mm)
        ts = export_model(mm, model, vocab)
    else:
        from .kgexport import export_metamodel

        ts = export_metamodel(mm, vocab)
    text = serialize_ntriples(ts) if args.format == "nt" else serialize_turtle(ts, vocab)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    vocab = Vocabulary(args.base_iri)
    mm = _parse_metamodel(args, args.metamodel)
    model = _parse_model(args, args.model, mm)
    ts = parse_ntriples(_read(args.triples))

    completeness = completeness_report(ts, vocab)
    logic = logic_report(ts, vocab)
    diff = verify(model, mm, ts, vocab)

    if args.json:
        text = _json_text(
            {
                "ok": diff.empty,
                "completeness": completeness.to_dict(),
                "logic": logic.to_dict(),
                "diff": diff.to_dict(),
            }
        )
    else:
        lines = ["# completeness"]
        lines += completeness.to_lines()
        lines.append("# logic")
        lines += logic.to_lines()
        lines.append("# diff")
        lines += diff.to_lines()
        lines.append("# result")
        lines.append("OK" if diff.empty else "FAIL")
        text = "\n".join(lines)
    _write_output(args, text)

    if args.figures:
        from .figures import render_verify_figure

        render_verify_figure(completeness, logic, diff, _figure_target(args, args.model, "verify"))
    return 0 if diff.empty else 1


def cmd_stats(args) -> int:
    mm = _parse_metamodel(args, args.metamodel)
    if args.json:
        counts = count_summary(mm)
        arith = connector_arithmetic(mm)
        text = _json_text(
            {
                "language": mm.language_name,
                "counts": {k.value: n for k, n in counts.items()},
                "rules": arith.rules,
                "connectors": arith.connectors,
                "savings": arith.savings,
            }
        )
    else:
        text = format_stats(mm)
    _write_output(args, text)

    if args.figures:
        from .figures import render_stats_figure

        render_stats_figure(
            mm.language_name, count_summary(mm), connector_arithmetic(mm), _figure_target(args, args.metamodel, "stats")
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--json", action="store_true", help="machine-readable JSON output")
    shared.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    shared.add_argument("--format", choices=("nt", "ttl"), default="nt", help="triple serialization format")
    shared.add_argument(
        "--base-iri",
        default=Vocabulary().base,
        metavar="IRI",
        help="namespace for minted IRIs (default: %(default)s)",
    )
    shared.add_argument("--figures", metavar="DIR", help="also render report figures as PNG files into DIR")

    parser = argparse.ArgumentParser(prog="gopprr", description="GOPPRR metamodeling kernel")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[shared], help="validate a language definition and optionally a model")
    p.add_argument("metamodel")
    p.add_argument("model", nargs="?")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("export", parents=[shared], help="export triples for a language definition or a model")
    p.add_argument("metamodel")
    p.add_argument("model", nargs="?")
    p.set_defaults(handler=cmd_export)

    p = sub.add_parser("verify", parents=[shared], help="check a triple file against its source model")
    p.add_argument("metamodel")
    p.add_argument("model")
    p.add_argument("triples")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("stats", parents=[shared], help="declaration counts and connector arithmetic")
    p.add_argument("metamodel")
    p.set_defaults(handler=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _Failure as failure:
        _write_output(args, failure.text)
        return failure.status
    except (DocumentSyntaxError, DocumentSchemaError, NTriplesSyntaxError) as exc:
        print(f"gopprr: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gopprr: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

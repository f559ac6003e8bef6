"""``cmaf`` command line.

Exit codes: 0 success, 1 validation findings or invalid input documents,
2 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, _jsonio
from .assessment import (
    assessment_from_dict,
    bind,
    blank_assessment,
    serialize_assessment,
)
from .benchmark import (
    DEFAULT_K_MIN,
    aggregate,
    anonymize,
    correlations,
    record_from_dict,
    serialize_record,
    summaries_to_csv,
    summaries_to_dict,
)
from .catalog import (
    builtin_catalog,
    catalog_from_dict,
    parse_catalog,
    validate_catalog,
)
from .errors import CmafError, DocumentSyntaxError, SchemaError
from .reporting import render_gaps, render_radar, render_report, render_seal
from .scoring import gap_analysis, score_card, scorecard_from_dict, serialize_scorecard
from .trend import diff, render_trend_markdown, serialize_trend

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2

_GROUP_FLAGS = {"sector": "sector", "size": "size_class", "kind": "entity_kind", "all": "all", "tag": "tag"}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _stamp(args) -> str | None:
    if getattr(args, "stamp", False):
        return datetime.now(timezone.utc).isoformat(timespec="seconds")
    return None


def _catalog(args):
    if getattr(args, "catalog", None):
        return parse_catalog(_read(args.catalog), source=args.catalog)
    return builtin_catalog()


def _load_card(path: str, catalog):
    """Score an assessment document, or load an already computed score card."""
    doc = _jsonio.loads(_read(path), path)
    if isinstance(doc, dict) and "responses" in doc:
        return score_card(bind(assessment_from_dict(doc), catalog))
    return scorecard_from_dict(doc)


def _bound(args):
    if not args.assessment:
        raise UsageError("--assessment is required")
    catalog = _catalog(args)
    doc = _jsonio.loads(_read(args.assessment), args.assessment)
    return bind(assessment_from_dict(doc), catalog)


def _salt(args) -> bytes:
    if not args.salt:
        raise UsageError("--salt <hex> is required")
    try:
        salt = bytes.fromhex(args.salt)
    except ValueError:
        raise UsageError("--salt must be hexadecimal") from None
    if not salt:
        raise UsageError("--salt must not be empty")
    return salt


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    if args.assessment:
        findings = []
        coverage = None
        try:
            coverage = _bound(args).coverage
        except CmafError as exc:
            findings.append({"severity": "error", "path": getattr(exc, "path", args.assessment), "message": str(exc)})
        payload = {"errors": len(findings), "warnings": 0, "coverage": coverage, "findings": findings}
        _emit(args, _jsonio.dumps(payload))
        return EXIT_FINDINGS if findings else EXIT_OK

    source = args.catalog
    text = _read(source) if source else None
    try:
        catalog = catalog_from_dict(_jsonio.loads(text, source)) if source else builtin_catalog()
    except (DocumentSyntaxError, SchemaError) as exc:
        payload = {
            "errors": 1,
            "warnings": 0,
            "findings": [{"severity": "error", "path": getattr(exc, "path", source), "message": str(exc)}],
        }
        _emit(args, _jsonio.dumps(payload))
        return EXIT_FINDINGS
    report = validate_catalog(catalog)
    _emit(args, _jsonio.dumps(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_FINDINGS


def cmd_score(args) -> int:
    card = score_card(_bound(args))
    if args.format in (None, "json"):
        _emit(args, serialize_scorecard(card))
        return EXIT_OK
    raise UsageError("score emits json only; use `report` for md/csv")


def cmd_gap(args) -> int:
    bound = _bound(args)
    gaps = gap_analysis(bound, lang=args.lang)
    _emit(args, render_gaps(gaps, args.format or "md"))
    return EXIT_OK


def cmd_report(args) -> int:
    if args.blank:
        _emit(args, serialize_assessment(blank_assessment(_catalog(args))))
        return EXIT_OK
    bound = _bound(args)
    card = score_card(bound)
    gaps = gap_analysis(bound, card, lang=args.lang)
    _emit(args, render_report(card, gaps, args.format or "md", catalog=bound.catalog, stamp=_stamp(args)))
    return EXIT_OK


def cmd_chart(args) -> int:
    if not args.assessment:
        raise UsageError("--assessment is required")
    card = _load_card(args.assessment, _catalog(args))
    _emit(args, render_radar(card, sub_requirements=args.sub_requirements, stamp=_stamp(args)))
    return EXIT_OK


def cmd_seal(args) -> int:
    if args.level is None or not 0 <= args.level <= 5:
        raise UsageError("--level must be 0..5")
    _emit(args, render_seal(args.level, stamp=_stamp(args)))
    return EXIT_OK


def cmd_diff(args) -> int:
    catalog = _catalog(args)
    earlier = _load_card(args.earlier, catalog)
    later = _load_card(args.later, catalog)
    report = diff(earlier, later)
    if (args.format or "json") == "md":
        _emit(args, render_trend_markdown(report, earlier, later))
    else:
        _emit(args, serialize_trend(report))
    return EXIT_OK


def cmd_anonymize(args) -> int:
    if not args.assessment:
        raise UsageError("--assessment is required")
    salt = _salt(args)
    card = _load_card(args.assessment, _catalog(args))
    _emit(args, serialize_record(anonymize(card, salt)))
    return EXIT_OK


def _input_files(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files.extend(sorted(p.glob("*.json")))
        elif p.exists():
            files.append(p)
        else:
            raise FileNotFoundError(raw)
    return files


def _load_records(args):
    catalog = None
    records = []
    for path in _input_files(args.inputs):
        doc = _jsonio.loads(path.read_text(encoding="utf-8"), str(path))
        if isinstance(doc, dict) and "pseudonym" in doc:
            records.append(record_from_dict(doc))
            continue
        if catalog is None:
            catalog = _catalog(args)
        if isinstance(doc, dict) and "responses" in doc:
            card = score_card(bind(assessment_from_dict(doc), catalog))
        else:
            card = scorecard_from_dict(doc)
        records.append(anonymize(card, _salt(args)))
    return records


def cmd_aggregate(args) -> int:
    records = _load_records(args)
    k_min = args.k_min if args.k_min is not None else DEFAULT_K_MIN
    summaries = aggregate(records, _GROUP_FLAGS[args.group_by], k_min=k_min)
    if (args.format or "json") == "csv":
        _emit(args, summaries_to_csv(summaries))
    else:
        _emit(args, _jsonio.dumps(summaries_to_dict(summaries, k_min)))
    return EXIT_OK


def cmd_correlate(args) -> int:
    matrix = correlations(_load_records(args))
    if (args.format or "csv") == "json":
        _emit(args, _jsonio.dumps(matrix.to_dict()))
    else:
        _emit(args, matrix.to_csv())
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", help="catalog JSON document (default: the built-in CMAF catalog)")
    common.add_argument("--out", help="write output to this path instead of standard output")
    common.add_argument("--lang", help="language tag for control statements (default: English)")
    common.add_argument("--stamp", action="store_true", help="embed a generation timestamp (breaks byte-identical output)")

    parser = argparse.ArgumentParser(
        prog="cmaf",
        description="Cybersecurity Maturity Assessment Framework toolkit. "
        "When --catalog is omitted the built-in CMAF catalog is used.",
    )
    parser.add_argument("--version", action="version", version=f"cmaf {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def add(name, func, help_text, *, assessment=True, fmt=None):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if assessment:
            p.add_argument("--assessment", help="assessment JSON document")
        if fmt:
            p.add_argument("--format", choices=fmt)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "validate a catalog (or an assessment against a catalog)")
    add("score", cmd_score, "score an assessment and print its score card", fmt=["json"])
    add("gap", cmd_gap, "list controls blocking each unit's next level", fmt=["md", "json", "csv"])
    p = add("report", cmd_report, "render a full report", fmt=["md", "json", "csv"])
    p.add_argument("--blank", action="store_true", help="emit a blank assessment template instead")
    p = add("chart", cmd_chart, "render the radar chart (SVG) of an assessment or score card")
    p.add_argument("--sub-requirements", action="store_true", help="one axis per scored leaf unit")
    p = add("seal", cmd_seal, "render the maturity seal (SVG) for a level", assessment=False)
    p.add_argument("--level", type=int, required=True, help="maturity level 0..5")
    p = add("diff", cmd_diff, "compare two assessments or score cards of one organization", assessment=False,
            fmt=["json", "md"])
    p.add_argument("--earlier", required=True)
    p.add_argument("--later", required=True)
    p = add("anonymize", cmd_anonymize, "emit a pseudonymized benchmark record")
    p.add_argument("--salt", help="pseudonymization salt, hex encoded")
    for name, func, text, fmt in (
        ("aggregate", cmd_aggregate, "k-suppressed statistics over many records", ["json", "csv"]),
        ("correlate", cmd_correlate, "Spearman correlations between requirement levels", ["csv", "json"]),
    ):
        p = add(name, func, text, assessment=False, fmt=fmt)
        p.add_argument("inputs", nargs="+", help="record, score card or assessment files, or directories of them")
        p.add_argument("--salt", help="salt (hex) used to pseudonymize score cards and assessments")
        if name == "aggregate":
            p.add_argument("--group-by", choices=sorted(_GROUP_FLAGS), default="all")
            p.add_argument("--k-min", type=int, default=None, help=f"suppression threshold (default {DEFAULT_K_MIN})")
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _fail(EXIT_USAGE, "usage", str(exc))
    except CmafError as exc:
        return _fail(EXIT_FINDINGS, type(exc).__name__, str(exc))
    except OSError as exc:
        return _fail(EXIT_USAGE, "io", str(exc))


if __name__ == "__main__":
    sys.exit(main())

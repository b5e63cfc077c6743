"""Batch command-line interface.

Commands map one-to-one onto the library: validate and metrics inspect
a model file, run executes one clamp scenario, compare lays several
scenarios side by side, convert rewrites between the supported file
formats, and reproduce-paper reruns the bundled fixtures and scores
the engine against their recorded reference outcomes.

Every command accepts --format structured for machine-readable JSON.
Identical invocations on identical files produce byte-identical
output. Exit codes are documented in --help.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import calibrate
from .core import ModelError, validate_model
from .fixtures import FIXTURE_IDS, UnknownFixture, load_fixture_document
from .inference import (
    ClampOutOfRange,
    InferenceError,
    UnknownClampId,
    config_from_obj,
    config_to_obj,
    outcome_to_obj,
    run_scenario,
)
from .io import (
    DocumentError,
    ImportValidationFailed,
    MatrixParseError,
    ModelDocument,
    XmlImportError,
    import_mentalmodeler_xml,
    parse_matrix_delimited,
    read_document,
    write_document,
    write_matrix_delimited,
)
from .metrics import rank_by_centrality, report_to_obj, structural_metrics
from .scenario import (
    ReportFormat,
    ScenarioError,
    ScenarioSpec,
    UnknownModelRef,
    compare_scenarios,
    render_report,
    report_to_obj as comparison_to_obj,
    scenario_to_obj,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_PARSE = 4
EXIT_INVALID = 5
EXIT_UNKNOWN_REF = 6

_EXIT_TABLE = """\
exit codes:
  0  success
  2  usage error
  3  file not found
  4  parse or schema error in an input file
  5  invalid model, clamp, or config
  6  unknown reference (scenario name, model ref, fixture id)
"""

CONFIG_ENV_VAR = "FCMSIM_CONFIG"


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


# ---- input loading ----


def detect_format(path: str, text: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "matrix"
    if suffix == ".json":
        return "document"
    if suffix == ".xml":
        return "xml"
    head = text.lstrip()[:1]
    if head == "<":
        return "xml"
    if head == "{":
        return "document"
    return "matrix"


def load_document(path: str, forced_format: str | None = None) -> ModelDocument:
    text = Path(path).read_text(encoding="utf-8")
    kind = forced_format or detect_format(path, text)
    if kind == "matrix":
        return ModelDocument(model=parse_matrix_delimited(text))
    if kind == "document":
        return read_document(text)
    return import_mentalmodeler_xml(text)


def _effective_config(args: argparse.Namespace) -> "object":
    """Config from the env-named file, overridden by explicit flags."""
    merged: dict = {}
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        text = Path(env_path).read_text(encoding="utf-8")
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"config file {env_path}: not valid JSON: {exc.msg}")
        if not isinstance(obj, dict):
            raise DocumentError(f"config file {env_path}: expected an object")
        merged.update(obj)
    if getattr(args, "kernel", None):
        merged["kernel"] = args.kernel
    if getattr(args, "squash", None):
        merged["squash"] = args.squash
    if getattr(args, "steepness", None) is not None:
        merged["steepness"] = args.steepness
    if getattr(args, "tolerance", None) is not None:
        merged["tolerance"] = args.tolerance
    if getattr(args, "max_iter", None) is not None:
        merged["max_iterations"] = args.max_iter
    try:
        return config_from_obj(merged)
    except ValueError as exc:
        raise DocumentError(f"config: {exc}")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group(
        "inference config",
        f"defaults come from the file named by ${CONFIG_ENV_VAR}, if set",
    )
    group.add_argument(
        "--kernel", choices=["kosko", "modified-kosko", "rescaled"], default=None
    )
    group.add_argument(
        "--squash",
        choices=["logistic", "hyperbolic-tangent", "linear-clip"],
        default=None,
    )
    group.add_argument("--steepness", type=float, default=None, metavar="LAMBDA")
    group.add_argument("--tolerance", type=float, default=None)
    group.add_argument("--max-iter", type=int, default=None, metavar="N")


def _add_format_flag(
    parser: argparse.ArgumentParser, choices: tuple[str, ...] = ("human", "structured")
) -> None:
    parser.add_argument("--format", choices=list(choices), default=choices[0])


def _print_json(obj: object) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def _fmt_signed(value: float) -> str:
    # avoid the "-0.00" rendering for tiny negatives at display precision
    rounded = round(value, 2)
    return f"{abs(value) if rounded == 0 else value:+.2f}"


# ---- commands ----


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        doc = load_document(args.path)
    except ModelError as exc:
        if args.format == "structured":
            _print_json(
                {
                    "valid": False,
                    "violations": [
                        {"code": type(exc).__name__, "message": str(exc)}
                    ],
                }
            )
        else:
            print(f"{type(exc).__name__}: {exc}")
        return EXIT_INVALID
    except ImportValidationFailed as exc:
        if args.format == "structured":
            _print_json(
                {
                    "valid": False,
                    "violations": [
                        {"code": v.code, "message": v.message, "subject": v.subject}
                        for v in exc.violations
                    ],
                }
            )
        else:
            for v in exc.violations:
                print(f"{v.code}: {v.message}")
        return EXIT_INVALID

    violations = validate_model(doc.model)
    if args.format == "structured":
        _print_json(
            {
                "valid": not violations,
                "violations": [
                    {"code": v.code, "message": v.message, "subject": v.subject}
                    for v in violations
                ],
                "model": {
                    "name": doc.model.name,
                    "concept_count": len(doc.model.concepts),
                    "connection_count": len(doc.model.edges),
                    "scenario_count": len(doc.scenarios or ()),
                },
            }
        )
    elif violations:
        for v in violations:
            print(f"{v.code}: {v.message}")
    else:
        extras = ""
        if doc.scenarios:
            extras = f", {len(doc.scenarios)} scenarios"
        print(
            f"OK: {doc.model.name or Path(args.path).name}: "
            f"{len(doc.model.concepts)} concepts, {len(doc.model.edges)} edges{extras}"
        )
    return EXIT_INVALID if violations else EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    doc = load_document(args.path)
    report = structural_metrics(doc.model, include_self_pairs=args.density_self_pairs)
    ranking = rank_by_centrality(doc.model)
    if args.format == "structured":
        obj = report_to_obj(report)
        obj["model"] = doc.model.name
        obj["ranking"] = [[cid, value] for cid, value in ranking]
        _print_json(obj)
        return EXIT_OK

    print(f"model: {doc.model.name}")
    print(f"concepts: {report.concept_count}")
    print(f"connections: {report.connection_count}")
    print(f"density: {report.density:.6f}")
    print(f"connections per component: {report.connections_per_component:.6f}")
    if report.complexity_score is None:
        print("complexity score: n/a (no transmitters)")
    else:
        print(f"complexity score: {report.complexity_score:.6f}")
    for warning in report.warnings:
        print(f"warning: {warning}")
    print()
    id_width = max((len(c.id) for c in doc.model.concepts), default=2)
    print(f"{'concept'.ljust(id_width)}  class        in    out  centrality")
    for concept in doc.model.concepts:
        cid = concept.id
        kind = report.classes.get(cid)
        print(
            f"{cid.ljust(id_width)}  {(kind.value if kind else 'isolated').ljust(11)}"
            f"{report.indegree[cid]:>6.2f}{report.outdegree[cid]:>7.2f}"
            f"{report.centrality[cid]:>12.2f}"
        )
    print()
    top = ranking[:5]
    print("top 5 by centrality: " + ", ".join(f"{c} {v:.2f}" for c, v in top))
    return EXIT_OK


def _parse_clamp_args(pairs: list[str]) -> dict[str, float]:
    clamps: dict[str, float] = {}
    for pair in pairs:
        concept_id, sep, raw = pair.partition("=")
        if not sep or not concept_id:
            raise argparse.ArgumentTypeError(
                f"clamp {pair!r} is not in ID=VALUE form"
            )
        try:
            clamps[concept_id] = float(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"clamp {pair!r} has a non-numeric value"
            )
    return clamps


def cmd_run(args: argparse.Namespace) -> int:
    doc = load_document(args.path)
    config = _effective_config(args)
    if args.scenario and args.clamp:
        return _fail("--scenario and --clamp are mutually exclusive", EXIT_USAGE)

    if args.scenario:
        available = {s.name: s for s in (doc.scenarios or ())}
        if args.scenario not in available:
            known = ", ".join(available) or "none"
            return _fail(
                f"scenario {args.scenario!r} not found in {args.path} (known: {known})",
                EXIT_UNKNOWN_REF,
            )
        spec = available[args.scenario]
    else:
        try:
            clamps = _parse_clamp_args(args.clamp)
        except argparse.ArgumentTypeError as exc:
            return _fail(str(exc), EXIT_USAGE)
        spec = ScenarioSpec(name="custom", model_ref=doc.model.name, clamps=clamps)

    outcome = run_scenario(doc.model, spec, config)
    if args.format == "structured":
        obj = outcome_to_obj(outcome)
        obj["model"] = doc.model.name
        obj["config"] = config_to_obj(config)
        _print_json(obj)
        return EXIT_OK

    print(f"model: {doc.model.name}")
    print(f"scenario: {outcome.scenario_name}")
    base, clamped = outcome.baseline, outcome.clamped
    print(f"baseline: {base.status.value} after {base.iterations} iterations")
    extra = f" (period {clamped.period})" if clamped.period else ""
    print(f"clamped: {clamped.status.value}{extra} after {clamped.iterations} iterations")
    print()
    id_width = max((len(c.id) for c in doc.model.concepts), default=7)
    id_width = max(id_width, len("concept"))
    print(f"{'concept'.ljust(id_width)}  baseline  clamped  change")
    for concept in doc.model.concepts:
        cid = concept.id
        mark = " *" if cid in spec.clamps else ""
        print(
            f"{cid.ljust(id_width)}  {_fmt_signed(base.final_state[cid]):>8}"
            f"  {_fmt_signed(clamped.final_state[cid]):>7}"
            f"  {_fmt_signed(outcome.relative_change[cid]):>6}{mark}"
        )
    if spec.clamps:
        print()
        print("* clamped concept")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    documents = [load_document(path) for path in args.paths]
    config = _effective_config(args)

    models: dict[str, object] = {}
    for doc, path in zip(documents, args.paths):
        name = doc.model.name
        if name in models and models[name] != doc.model:
            return _fail(
                f"two inputs define different models named {name!r}", EXIT_INVALID
            )
        models[name] = doc.model

    scenarios: list[ScenarioSpec] = []
    for doc in documents:
        scenarios.extend(doc.scenarios or ())
    if args.scenario:
        by_name = {s.name: s for s in scenarios}
        missing = [n for n in args.scenario if n not in by_name]
        if missing:
            return _fail(
                "unknown scenario names: " + ", ".join(missing), EXIT_UNKNOWN_REF
            )
        scenarios = [by_name[n] for n in args.scenario]
    if not scenarios:
        return _fail(
            "no scenarios found in the input files; add a scenarios section",
            EXIT_INVALID,
        )

    report = compare_scenarios(scenarios, models, config)
    print(render_report(report, args.format), end="")
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    source_format = args.from_format
    target_format = args.to_format or detect_format(args.output, "")
    if target_format == "xml":
        return _fail("XML export is not supported (import only)", EXIT_USAGE)
    doc = load_document(args.input, source_format)
    if target_format == "matrix":
        if doc.scenarios or doc.config:
            print(
                "note: scenarios and config do not fit the matrix format "
                "and were dropped",
                file=sys.stderr,
            )
        text = write_matrix_delimited(doc.model)
    else:
        text = write_document(doc)
    Path(args.output).write_text(text, encoding="utf-8")
    print(f"wrote {args.output} ({target_format})", file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    documents = {fid: load_fixture_document(fid) for fid in FIXTURE_IDS}
    models = {doc.model.name: doc.model for doc in documents.values()}
    specs = [documents[fid].scenarios[0] for fid in FIXTURE_IDS]
    comparison = compare_scenarios(specs, models, config)
    metrics_by_fixture = {
        fid: structural_metrics(documents[fid].model) for fid in FIXTURE_IDS
    }
    calibration = calibrate.run_calibration()

    if args.write_docs:
        Path(args.write_docs).write_text(
            calibrate.render_markdown(calibration), encoding="utf-8"
        )

    if args.format == "structured":
        _print_json(
            {
                "fixtures": list(FIXTURE_IDS),
                "clamps": {
                    fid: scenario_to_obj(documents[fid].scenarios[0])
                    for fid in FIXTURE_IDS
                },
                "metrics": {
                    fid: report_to_obj(metrics_by_fixture[fid]) for fid in FIXTURE_IDS
                },
                "comparison": comparison_to_obj(comparison),
                "calibration": calibrate.report_to_obj(calibration),
            }
        )
        return EXIT_OK

    first = metrics_by_fixture[FIXTURE_IDS[0]]
    print("bundled scenarios: " + ", ".join(FIXTURE_IDS))
    print()
    print("shared structure:")
    print(f"  concepts: {first.concept_count}")
    print(f"  connections: {first.connection_count}")
    print(f"  density: {first.density:.6f}")
    print(f"  connections per component: {first.connections_per_component:.6f}")
    print(f"  complexity score: {first.complexity_score:.6f}")
    transmitters = [c for c, k in first.classes.items() if k.value == "transmitter"]
    receivers = [c for c, k in first.classes.items() if k.value == "receiver"]
    print("  transmitters: " + ", ".join(transmitters))
    print("  receivers: " + ", ".join(receivers))
    print()

    print("clamp values:")
    for i, fid in enumerate(FIXTURE_IDS):
        print(f"  col{i + 1} = {documents[fid].scenarios[0].name}")
    order = documents[FIXTURE_IDS[0]].model.concept_ids
    id_width = max(len("concept"), max(len(c) for c in order))
    print(
        f"  {'concept'.ljust(id_width)}  "
        + "  ".join(f" col{i + 1}" for i in range(len(FIXTURE_IDS)))
    )
    for cid in order:
        cells = []
        for fid in FIXTURE_IDS:
            clamps = documents[fid].scenarios[0].clamps
            cells.append(_fmt_signed(clamps[cid]) if cid in clamps else "    -")
        print(f"  {cid.ljust(id_width)}  " + "  ".join(c.rjust(5) for c in cells))
    print()
    print(render_report(comparison, ReportFormat.PLAIN_TABLE), end="")
    print()

    print("calibration sweep (MAD and sign agreement vs recorded reference):")
    print("  kernel           squash              steepness     MAD   signs")
    for row in calibration.rows:
        print(
            f"  {row.kernel.value:<15}  {row.squash.value:<18}  {row.steepness:>9g}"
            f"  {row.mad:>6.4f}  {row.sign_agreement:>6.1%}"
        )
    best = calibration.best
    print()
    print(
        f"best config: kernel={best.kernel.value} squash={best.squash.value} "
        f"steepness={best.steepness:g} (MAD {best.mad:.4f}, "
        f"sign agreement {best.sign_agreement:.1%} over {best.cells} cells)"
    )
    print()
    print("residuals of the best config:")
    print("  scenario          concept  engine   reference  deviation")
    for r in calibration.residuals:
        print(
            f"  {r.fixture_id:<16}  {r.concept_id:<7}  {r.engine:+.4f}"
            f"  {r.reference:>+9.2f}  {r.deviation:>9.4f}"
        )
    return EXIT_OK


# ---- parser ----


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fcmsim",
        description="Fuzzy cognitive map simulation toolkit.",
        epilog=_EXIT_TABLE,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file for structural problems")
    p.add_argument("path")
    _add_format_flag(p)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("metrics", help="centrality, classes, and network parameters")
    p.add_argument("path")
    p.add_argument(
        "--density-self-pairs",
        action="store_true",
        help="use N*N as the density denominator instead of N*(N-1)",
    )
    _add_format_flag(p)
    p.set_defaults(handler=cmd_metrics)

    p = sub.add_parser("run", help="run one clamp scenario against a model")
    p.add_argument("path")
    p.add_argument("--scenario", help="scenario name from the document")
    p.add_argument(
        "--clamp",
        action="append",
        default=[],
        metavar="ID=VALUE",
        help="hold a concept at a value (repeatable)",
    )
    _add_config_flags(p)
    _add_format_flag(p)
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("compare", help="run several scenarios side by side")
    p.add_argument("paths", nargs="+")
    p.add_argument(
        "--scenario",
        action="append",
        metavar="NAME",
        help="restrict and order the comparison to these scenario names",
    )
    _add_config_flags(p)
    _add_format_flag(p, ("plain-table", "delimited", "structured"))
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("convert", help="rewrite between matrix/document/xml formats")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument(
        "--from",
        dest="from_format",
        choices=["matrix", "document", "xml"],
        default=None,
        help="override input format detection",
    )
    p.add_argument(
        "--to",
        dest="to_format",
        choices=["matrix", "document"],
        default=None,
        help="override output format detection",
    )
    p.set_defaults(handler=cmd_convert)

    p = sub.add_parser(
        "reproduce-paper",
        help="rerun the bundled scenarios and report calibration "
        "against their recorded reference outcomes",
    )
    p.add_argument(
        "--write-docs",
        metavar="FILE",
        help="also write the calibration report as markdown to FILE",
    )
    _add_config_flags(p)
    _add_format_flag(p)
    p.set_defaults(handler=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except FileNotFoundError as exc:
        return _fail(f"file not found: {exc.filename or exc}", EXIT_NOT_FOUND)
    except IsADirectoryError as exc:
        return _fail(f"is a directory: {exc.filename}", EXIT_NOT_FOUND)
    except (MatrixParseError, DocumentError) as exc:
        return _fail(str(exc), EXIT_PARSE)
    except ImportValidationFailed as exc:
        return _fail(str(exc), EXIT_INVALID)
    except XmlImportError as exc:
        return _fail(str(exc), EXIT_PARSE)
    except (UnknownClampId, UnknownModelRef, UnknownFixture) as exc:
        return _fail(str(exc), EXIT_UNKNOWN_REF)
    except (ModelError, ClampOutOfRange, InferenceError, ScenarioError) as exc:
        return _fail(str(exc), EXIT_INVALID)


if __name__ == "__main__":
    sys.exit(main())

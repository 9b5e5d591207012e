"""Command-line frontend.

Subcommands:
    analyze   derive, classify and optionally instantiate a concept's complexity
    klm       execution-time estimate from an operator model
    estimate  time estimate from an IS count and an interaction-speed model
    logs      task and step speed tables from an event log
    synth     generate a deterministic synthetic event log
    oracle    brute-force action counts for a concept and binding

Exit codes: 0 success, 1 domain or validation error, 2 usage error.
Bindings come only from explicit --set flags or a --bindings file; there
are no default variable values.  Set IXCOMPLEX_NO_COLOR to disable the
minimal styling on terminals.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path
from typing import Sequence

from .bigi import (
    NormalizedComplexity,
    analyze,
    factored_text,
    report_to_dict,
    simplify,
    vector_to_dict,
)
from .concept import InteractionConcept, parse_concept, validate
from .errors import IxComplexError
from .expr import evaluate, format_expr, is_variable_name, parse_expr
from .klm import (
    DEFAULT_MAPPING,
    KlmModel,
    klm_from_concept,
    klm_parse,
    klm_speed,
    klm_time,
    mapping_from_dict,
    model_from_dict,
)
from .logs import (
    AnalyticsWarning,
    load_log,
    dump_log,
    step_table,
    table_to_csv,
    table_to_dicts,
    table_to_text,
    task_table,
)
from .rounding import format_fixed
from .speed import SpeedModel, estimate_time, get_speed_model
from .synth import SynthConfig, count_actions, generate_log


def _binding_pair(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep or not name or not value.isdigit():
        raise argparse.ArgumentTypeError(
            f"expected <name>=<nonnegative integer>, got {text!r}"
        )
    if not is_variable_name(name):
        raise argparse.ArgumentTypeError(f"invalid variable name {name!r}")
    return name, int(value)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ixcomplex",
        description="Interaction-complexity calculator and interaction-speed analytics.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add_bindings(sub: argparse.ArgumentParser) -> None:
        sub.add_argument(
            "--set",
            dest="bindings",
            type=_binding_pair,
            action="append",
            default=[],
            metavar="NAME=VALUE",
            help="bind a variable to a nonnegative integer (repeatable)",
        )
        sub.add_argument(
            "--bindings",
            dest="bindings_file",
            metavar="FILE",
            help="JSON file with variable bindings; --set overrides it",
        )

    sub = commands.add_parser("analyze", help="complexity of a concept")
    sub.add_argument("concept", help="concept file")
    add_bindings(sub)
    sub.add_argument(
        "--formula",
        help="separately published IS formula to report next to the derived one",
    )
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.set_defaults(func=cmd_analyze)

    sub = commands.add_parser("klm", help="execution-time estimate")
    sub.add_argument("concept", nargs="?", help="concept file")
    add_bindings(sub)
    sub.add_argument("--formula", help="operator formula, e.g. '(m + 2)*Q + 9*T'")
    sub.add_argument("--map", dest="mapping_file", metavar="FILE", help="action-to-operator mapping (JSON)")
    sub.add_argument("--model", dest="model_file", metavar="FILE", help="operator unit-time overrides (JSON)")
    sub.add_argument(
        "--is",
        dest="is_count",
        type=_nonnegative_int,
        metavar="N",
        help="IS count for deriving an interaction speed",
    )
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.set_defaults(func=cmd_klm)

    sub = commands.add_parser("estimate", help="time estimate from interaction speed")
    sub.add_argument("concept", help="concept file")
    add_bindings(sub)
    sub.add_argument(
        "--formula",
        help="use this IS formula instead of the one derived from the concept",
    )
    sub.add_argument("--speed", default="overall", help="speed model name (overall, v1, v2)")
    sub.add_argument("--speed-file", metavar="FILE", help="JSON speed model file")
    sub.add_argument("--speed-mean", type=float, help="custom mean IS/sec")
    sub.add_argument("--speed-min", type=float, help="custom minimum IS/sec")
    sub.add_argument("--speed-max", type=float, help="custom maximum IS/sec")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.set_defaults(func=cmd_estimate)

    sub = commands.add_parser("logs", help="speed tables from an event log")
    sub.add_argument("log", help="event-log file, or - for stdin")
    sub.add_argument("--concept", help="concept file for cross-checking task IS counts")
    sub.add_argument("--group-by", choices=("task_id", "concept_name"), default="task_id")
    sub.add_argument("--table", choices=("task", "step", "both"), default="both")
    sub.add_argument("--format", choices=("text", "csv", "json"), default="text")
    sub.set_defaults(func=cmd_logs)

    sub = commands.add_parser("synth", help="generate a synthetic event log")
    sub.add_argument("concept", help="concept file")
    add_bindings(sub)
    sub.add_argument("--sessions", type=_positive_int, required=True)
    sub.add_argument("--speed-mean", type=float, required=True, help="mean IS/sec")
    sub.add_argument("--speed-sd", type=float, default=0.0, help="IS/sec standard deviation")
    sub.add_argument("--seed", type=int, default=0, help="64-bit generator seed")
    sub.add_argument("--out", required=True, help="output file, or - for stdout")
    sub.set_defaults(func=cmd_synth)

    sub = commands.add_parser("oracle", help="brute-force action counts")
    sub.add_argument("concept", help="concept file")
    add_bindings(sub)
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.set_defaults(func=cmd_oracle)

    return parser


def _styled(text: str) -> str:
    if sys.stdout.isatty() and not os.environ.get("IXCOMPLEX_NO_COLOR"):
        return f"\033[1m{text}\033[0m"
    return text


def _read_concept(path: str) -> InteractionConcept:
    concept = parse_concept(Path(path).read_text(encoding="utf-8"))
    for diagnostic in validate(concept):
        if diagnostic.severity == "warning":
            where = f" (step {diagnostic.step!r})" if diagnostic.step else ""
            print(f"warning: {diagnostic.message}{where}", file=sys.stderr)
    return concept


def _collect_bindings(args: argparse.Namespace) -> dict[str, int]:
    binding: dict[str, int] = {}
    if getattr(args, "bindings_file", None):
        raw = json.loads(Path(args.bindings_file).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise IxComplexError("bindings file must hold a JSON object")
        for name, value in raw.items():
            if not is_variable_name(str(name)) or isinstance(value, bool) \
                    or not isinstance(value, int) or value < 0:
                raise IxComplexError(
                    f"bindings file entry {name!r} must map a variable "
                    "to a nonnegative integer"
                )
            binding[str(name)] = value
    for name, value in args.bindings:
        binding[name] = value
    return binding


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_analyze(args: argparse.Namespace) -> int:
    concept = _read_concept(args.concept)
    binding = _collect_bindings(args)
    report = analyze(concept, binding or None)
    published = parse_expr(args.formula) if args.formula else None

    if args.format == "json":
        payload = report_to_dict(report)
        if published is not None:
            simplified = simplify(NormalizedComplexity(published))
            entry = {
                "normalized": format_expr(published),
                "simplified": {
                    "retained": format_expr(simplified.retained),
                    "class_label": simplified.class_label,
                },
                "instantiated": None,
            }
            if binding:
                entry["instantiated"] = {
                    "binding": dict(sorted(binding.items())),
                    "is": evaluate(published, binding),
                }
            payload["as_published"] = entry
        _print_json(payload)
        return 0

    print(_styled(f"concept: {concept.name}"))
    if report.per_step:
        print("per-step complexity:")
        for label, vector in report.per_step:
            print(f"  {label}: {_vector_text(vector)}")
    print(f"summed: {_vector_text(report.summed)}")
    print(f"normalized: {format_expr(report.normalized.is_function)}")
    print(
        f"simplified: I({factored_text(report.simplified.retained)}) "
        f"[{report.simplified.class_label}]"
    )
    if published is not None:
        simplified = simplify(NormalizedComplexity(published))
        print(f"as-published normalized: {format_expr(published)}")
        print(
            f"as-published simplified: I({factored_text(simplified.retained)}) "
            f"[{simplified.class_label}]"
        )
    if report.instantiated is not None:
        if published is not None:
            print(f"as-defined: IS = {report.instantiated[1]}")
            print(f"as-published: IS = {evaluate(published, binding)}")
        else:
            print(f"IS = {report.instantiated[1]}")
    return 0


def _vector_text(vector) -> str:
    items = vector_to_dict(vector)
    if not items:
        return "0"
    return "; ".join(f"{letter}: {text}" for letter, text in items.items())


def cmd_klm(args: argparse.Namespace) -> int:
    if not args.concept and not args.formula:
        print("error: provide a concept file, a --formula, or both", file=sys.stderr)
        return 2
    model = KlmModel()
    if args.model_file:
        model = model_from_dict(json.loads(Path(args.model_file).read_text(encoding="utf-8")))
    mapping = DEFAULT_MAPPING
    if args.mapping_file:
        mapping = mapping_from_dict(json.loads(Path(args.mapping_file).read_text(encoding="utf-8")))
    binding = _collect_bindings(args)

    results: list[tuple[str, float]] = []
    if args.concept:
        concept = _read_concept(args.concept)
        results.append(("as-defined", klm_time(klm_from_concept(concept, mapping), model, binding)))
    if args.formula:
        results.append(("as-published", klm_time(klm_parse(args.formula), model, binding)))

    if args.format == "json":
        payload = {
            label: {
                "seconds": float(format_fixed(seconds)),
                "is_per_sec": float(format_fixed(klm_speed(args.is_count, seconds)))
                if args.is_count is not None and seconds > 0
                else None,
            }
            for label, seconds in results
        }
        _print_json(payload)
        return 0

    labelled = len(results) > 1
    for label, seconds in results:
        prefix = f"{label}: " if labelled else ""
        print(f"{prefix}{format_fixed(seconds)} sec")
        if args.is_count is not None and seconds > 0:
            print(f"{prefix}{format_fixed(klm_speed(args.is_count, seconds))} IS/sec")
    return 0


def _resolve_speed_model(args: argparse.Namespace) -> SpeedModel:
    if args.speed_file:
        raw = json.loads(Path(args.speed_file).read_text(encoding="utf-8"))
        return SpeedModel(
            name=str(raw.get("name", "custom")),
            mean=float(raw["mean"]),
            min=float(raw["min"]) if raw.get("min") is not None else None,
            max=float(raw["max"]) if raw.get("max") is not None else None,
            source=str(raw.get("source", "")),
        )
    if args.speed_mean is not None:
        return SpeedModel("custom", args.speed_mean, args.speed_min, args.speed_max)
    if args.speed_min is not None or args.speed_max is not None:
        raise IxComplexError("--speed-min/--speed-max need --speed-mean")
    return get_speed_model(args.speed)


def cmd_estimate(args: argparse.Namespace) -> int:
    concept = _read_concept(args.concept)
    binding = _collect_bindings(args)
    model = _resolve_speed_model(args)

    defined_count = evaluate(analyze(concept).normalized.is_function, binding)
    results = [("as-defined", defined_count, estimate_time(defined_count, model))]
    if args.formula:
        published_count = evaluate(parse_expr(args.formula), binding)
        results.append(
            ("as-published", published_count, estimate_time(published_count, model))
        )

    if args.format == "json":
        payload = {
            label.replace("-", "_"): {
                "is": is_count,
                "expected_s": estimate.expected,
                "fastest_s": estimate.fastest,
                "slowest_s": estimate.slowest,
            }
            for label, is_count, estimate in results
        }
        payload["model"] = model.name
        _print_json(payload)
        return 0

    labelled = len(results) > 1
    for label, is_count, estimate in results:
        prefix = f"{label}: " if labelled else ""
        print(f"{prefix}IS = {is_count}")
        print(f"{prefix}expected: {format_fixed(estimate.expected)} sec")
        if estimate.fastest is not None and estimate.slowest is not None:
            print(f"{prefix}fastest: {format_fixed(estimate.fastest)} sec")
            print(f"{prefix}slowest: {format_fixed(estimate.slowest)} sec")
        else:
            print(f"{prefix}speed range unavailable for model {model.name!r}")
    return 0


def cmd_logs(args: argparse.Namespace) -> int:
    if args.log == "-":
        raw: bytes | str = sys.stdin.buffer.read()
    else:
        raw = Path(args.log).read_bytes()
    log = load_log(raw)
    if not any(session.tasks for session in log.sessions):
        print("warning: log contains no tasks", file=sys.stderr)

    if args.concept:
        _cross_check_concept(args.concept, log)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AnalyticsWarning)
        tables: dict[str, list] = {}
        if args.table in ("task", "both"):
            tables["task"] = task_table(log, args.group_by)
        if args.table in ("step", "both"):
            tables["step"] = step_table(log)
    for warning in caught:
        print(f"warning: {warning.message}", file=sys.stderr)

    if args.format == "json":
        _print_json({f"{name}_table": table_to_dicts(rows) for name, rows in tables.items()})
        return 0
    if args.format == "csv":
        print("\n".join(table_to_csv(rows).rstrip("\n") for rows in tables.values()))
        return 0
    blocks = []
    for name, rows in tables.items():
        blocks.append(_styled(f"{name} table:") + "\n" + table_to_text(rows))
    print("\n\n".join(blocks))
    return 0


def _cross_check_concept(concept_path: str, log) -> None:
    from .bigi import instantiate, normalize, sum_steps

    concept = _read_concept(concept_path)
    expected_cache: dict[tuple, int] = {}
    for session in log.sessions:
        for task in session.tasks:
            if task.concept_name != concept.name or not task.binding:
                continue
            key = tuple(sorted(task.binding.items()))
            if key not in expected_cache:
                expected_cache[key] = instantiate(normalize(sum_steps(concept)), task.binding)
            expected = expected_cache[key]
            if expected != task.is_count:
                print(
                    f"warning: task {task.task_id!r} in session {session.session_id!r} "
                    f"records {task.is_count} IS but the concept yields {expected}",
                    file=sys.stderr,
                )


def cmd_synth(args: argparse.Namespace) -> int:
    concept = _read_concept(args.concept)
    binding = _collect_bindings(args)
    config = SynthConfig(
        concept=concept,
        binding=binding,
        sessions=args.sessions,
        speed_mean=args.speed_mean,
        speed_sd=args.speed_sd,
        seed=args.seed,
    )
    payload = dump_log(generate_log(config))
    if args.out == "-":
        sys.stdout.write(payload)
    else:
        Path(args.out).write_text(payload, encoding="utf-8")
        print(f"wrote {args.out}: {args.sessions} sessions", file=sys.stderr)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    concept = _read_concept(args.concept)
    binding = _collect_bindings(args)
    counts = count_actions(concept, binding)
    if args.format == "json":
        payload = {kind.value: count for kind, count in counts.per_kind.items()}
        payload["total"] = counts.total
        _print_json(payload)
        return 0
    parts = [f"{kind.value}:{count}" for kind, count in counts.per_kind.items()]
    parts.append(f"total:{counts.total}")
    print(" ".join(parts))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except IxComplexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

"""``rsp`` command line: run a protocol batch, run invariant suites, sweep a parameter.

Exit codes: 0 success, 2 bad input (missing file, malformed JSON, schema or
parameter error, unknown suite, empty sweep axis), 3 a non-discarded run
with fidelity below ``1 - 1e-8``.  Failed verify suites exit 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import jsonschema

from . import engine, rsp_phase, verify

RUN_COLUMNS = (
    "outcome_id", "message_kind", "message_value", "probability",
    "fidelity", "discarded", "dropped_weight",
)
SWEEP_COLUMNS = ("axis", "value", "metric", "analytic", "simulated", "abs_deviation")

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

_OUTPUT = {
    "type": "object",
    "additionalProperties": False,
    "properties": {"format": {"enum": ["csv", "json"]}, "path": {"type": "string"}},
}
_MODE = {
    "oneOf": [
        {"const": "enumerate"},
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["sample"],
            "properties": {
                "sample": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["runs", "seed"],
                    "properties": {
                        "runs": {"type": "integer", "minimum": 1},
                        "seed": {"type": "integer", "minimum": 0},
                    },
                }
            },
        },
    ]
}
RUN_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["protocol", "params"],
    "properties": {
        "protocol": {"enum": list(engine.PROTOCOLS)},
        "params": {"type": "object"},
        "mode": _MODE,
        "output": _OUTPUT,
    },
}
SWEEP_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["protocol", "params", "axis"],
    "properties": {
        "protocol": {"enum": list(engine.PROTOCOLS)},
        "params": {"type": "object"},
        "axis": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name", "values"],
            "properties": {"name": {"type": "string"}, "values": {"type": "array"}},
        },
        "output": _OUTPUT,
    },
}


class InputError(Exception):
    pass


def fmt(x) -> str:
    """Byte-stable text for a report cell; blank for ``None``."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _num(x):
    """Round-trip a float through 17 significant digits for JSON output."""
    if x is None or isinstance(x, (str, bool, int)):
        return x
    x = float(x)
    return float(format(x, ".17g")) if math.isfinite(x) else None


def load_config(path: str, schema: dict) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"{path}: invalid config at {where}: {exc.message}") from None
    return data


def write_report(text: str, path: str | None):
    """Write ``text`` to ``path`` atomically, or to stdout when no path is given."""
    if not path:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rsp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def run_rows(batch: engine.RunBatch) -> list[dict]:
    rows = []
    for t in batch.runs:
        rows.append({
            "outcome_id": int(t.outcome),
            "message_kind": t.message.kind if t.message else None,
            "message_value": t.message.value if t.message else None,
            "probability": t.probability,
            "fidelity": t.fidelity,
            "discarded": bool(t.discarded),
            "dropped_weight": t.dropped_weight,
        })
    return rows


def render_run(batch: engine.RunBatch, fmt_name: str) -> str:
    rows = run_rows(batch)
    if fmt_name == "csv":
        return _table(RUN_COLUMNS, rows)
    summary = dict(batch.summary)
    summary["histogram"] = {str(k): v for k, v in summary["histogram"].items()}
    report = {
        "protocol": batch.protocol,
        "mode": batch.mode,
        "seed": batch.seed,
        "columns": list(RUN_COLUMNS),
        "rows": [{k: _num(v) for k, v in row.items()} for row in rows],
        "summary": {k: _num(v) if not isinstance(v, dict) else v for k, v in summary.items()},
    }
    return json.dumps(report, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _output_opts(data: dict, args) -> tuple[str, str | None]:
    out = data.get("output", {})
    fmt_name = args.format or out.get("format", "csv")
    path = args.out or out.get("path")
    return fmt_name, path


def cmd_run(args) -> int:
    data = load_config(args.config, RUN_SCHEMA)
    protocol = data["protocol"]
    try:
        config, params = engine.split_params(protocol, data["params"])
        mode = data.get("mode", "enumerate")
        if mode == "enumerate":
            if args.seed is not None:
                print("rsp: --seed ignored in enumerate mode", file=sys.stderr)
            batch = engine.execute(protocol, config, params)
        else:
            seed = mode["sample"]["seed"] if args.seed is None else args.seed
            batch = engine.execute(protocol, config, params, "sample",
                                   runs=mode["sample"]["runs"], seed=seed)
    except engine.ConfigError as exc:
        raise InputError(str(exc)) from None
    fmt_name, path = _output_opts(data, args)
    write_report(render_run(batch, fmt_name), path)
    bad = engine.invariant_violations(batch)
    if bad:
        worst = min(t.fidelity for t in bad)
        print(f"rsp: {len(bad)} run(s) below fidelity 1 - {engine.EXACT_FIDELITY_TOL:g} "
              f"(worst {worst:.17g})", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        results = verify.run_suites(args.suite, seed=args.seed if args.seed is not None else 2024,
                                    perturb=args.perturb)
    except KeyError:
        names = ", ".join(["all", *verify.SUITES, *verify.ALIASES])
        raise InputError(f"unknown suite {args.suite!r}; choose from {names}") from None
    failed = 0
    for suite, check in results:
        status = "PASS" if check.passed else "FAIL"
        failed += not check.passed
        print(f"{status} {suite}.{check.name} deviation={check.deviation:.3e} tol={check.tol:.1e}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAILED


def sweep_point(protocol: str, merged: dict) -> tuple[str, float | None, float]:
    """(metric, analytic, simulated) for one parameter setting."""
    config, params = engine.split_params(protocol, merged)
    batch = engine.execute(protocol, config, params)
    if protocol == "phase":
        simulated = math.fsum(t.probability for t in batch.runs if not t.discarded)
        analytic = rsp_phase.success_probability(float(config["r"]), int(config["n_meas"]))
        return "success_probability", analytic, simulated
    return "min_fidelity", 1.0, batch.summary["min_fidelity"]


def cmd_sweep(args) -> int:
    data = load_config(args.config, SWEEP_SCHEMA)
    protocol, axis = data["protocol"], data["axis"]
    if not axis["values"]:
        raise InputError("sweep axis has no values")
    rows = []
    for value in axis["values"]:
        merged = dict(data["params"], **{axis["name"]: value})
        try:
            metric, analytic, simulated = sweep_point(protocol, merged)
        except engine.ConfigError as exc:
            raise InputError(f"{axis['name']}={value}: {exc}") from None
        rows.append({
            "axis": axis["name"], "value": value, "metric": metric,
            "analytic": analytic, "simulated": simulated,
            "abs_deviation": None if analytic is None else abs(simulated - analytic),
        })
    fmt_name, path = _output_opts(data, args)
    if fmt_name == "csv":
        text = _table(SWEEP_COLUMNS, rows)
    else:
        text = json.dumps({
            "protocol": protocol,
            "columns": list(SWEEP_COLUMNS),
            "rows": [{k: _num(v) for k, v in r.items()} for r in rows],
        }, indent=2, allow_nan=False) + "\n"
    write_report(text, path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsp", description="Remote state preparation simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, help="override the sampling seed")
        p.add_argument("--out", help="report path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="report format")

    p = sub.add_parser("run", help="run one protocol batch from a JSON config")
    p.add_argument("config")
    add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("suite", nargs="?", default="all")
    p.add_argument("--seed", type=int, help="seed for the random test settings")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="sweep one parameter and compare with closed forms")
    p.add_argument("config")
    add_common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"rsp: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""
Batch command line: one JSON/TOML job in, one JSON or CSV document out.

Exit codes: 0 success, 2 invalid input, 3 size cap exceeded, 4 a numerical
contract failed (``check``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__, fock
from .checks import check_suite
from .dualaffine import azema_convergence, azema_free
from .errors import FreeLevyError, SizeLimitError
from .levy import (
    GeneratorTuple,
    classify,
    ito_levy_split,
    minimal_tuple,
    process_moments,
    tuple_cumulants,
)
from .mixedmoments import MarginalLaw, free_mixed_moment, tensor_mixed_moment
from .moments import (
    ROUNDTRIP_TOL,
    SUM_TOL,
    CumulantSequence,
    MomentSequence,
    bercovici_pata,
    convolve,
    cumulants_to_moments,
    moments_to_cumulants,
)

EXIT_OK, EXIT_SCHEMA, EXIT_SIZE, EXIT_CONTRACT = 0, 2, 3, 4

_NUM = {"type": "number"}
_SEQ = {"type": "array", "items": _NUM, "minItems": 1}
_FLAVOR = {"enum": ["classical", "tensor", "free", "boolean"]}
_TUPLE = {
    "type": "object",
    "required": ["d", "T", "u"],
    "properties": {
        "d": {"type": "integer", "minimum": 0},
        "T": {"type": "array", "items": {"type": "array", "items": _NUM}},
        "u": {"type": "array", "items": _NUM},
        "v": {"type": "array", "items": _NUM},
        "lambda": _NUM,
    },
}
_LETTER = {
    "oneOf": [
        {"type": "integer"},
        {"type": "array", "prefixItems": [{"type": "integer"}, {"type": ["integer", "string"]}], "minItems": 2, "maxItems": 2},
    ]
}
_TERM = {
    "type": "object",
    "required": ["block"],
    "properties": {
        "block": {"type": "integer", "minimum": 0},
        "creation": {"type": "array", "items": _NUM},
        "annihilation": {"type": "array", "items": _NUM},
        "conservation": {"type": "array", "items": {"type": "array", "items": _NUM}},
        "scalar": _NUM,
    },
    "additionalProperties": False,
}


def _obj(required, **props):
    return {"type": "object", "required": list(required), "properties": props}


SCHEMAS = {
    "cumulants": _obj(["flavor", "m"], flavor=_FLAVOR, m=_SEQ),
    "convolve": _obj(["flavor", "m1", "m2"], flavor=_FLAVOR, m1=_SEQ, m2=_SEQ),
    "bp-map": _obj(["m"], m=_SEQ),
    "mixed-moment": _obj(
        ["flavor", "word", "marginals"],
        flavor={"enum": ["tensor", "free"]},
        word={"type": "array", "items": _LETTER},
        marginals={
            "type": "array",
            "items": _obj(
                ["family"],
                family={"type": "integer"},
                sequence=_SEQ,
                moments={"type": "array", "items": _obj(["word", "value"], word={"type": "array"}, value=_NUM)},
            ),
        },
    ),
    "fock-oracle": _obj(
        ["dims", "depth", "operators", "word"],
        dims={"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        depth={"type": "integer", "minimum": 0},
        operators={"type": "object", "additionalProperties": {"type": "array", "items": _TERM}},
        word={"type": "array", "items": {"type": "string"}},
    ),
    "levy-moments": _obj(
        ["tuple", "t", "order"],
        tuple=_TUPLE,
        t={"type": "number", "exclusiveMinimum": 0},
        order={"type": "integer", "minimum": 1},
        flavor=_FLAVOR,
    ),
    "classify": _obj(["tuple"], tuple=_TUPLE),
    "ito-split": _obj(["tuple"], tuple=_TUPLE, order={"type": "integer", "minimum": 1}),
    "minimal": _obj(["tuple"], tuple=_TUPLE),
    "azema": _obj(
        ["gamma_re", "t"],
        gamma_re=_NUM,
        gamma_im=_NUM,
        t={"type": "number", "exclusiveMinimum": 0},
        steps={"type": "integer", "minimum": 1},
        depth={"type": "integer", "minimum": 0},
        max_order={"type": "integer", "minimum": 1},
        converge={"type": "boolean"},
    ),
    "check": _obj([], filter={"type": "string"}, perturb=_NUM, seed={"type": "integer"}),
}


class SchemaViolation(Exception):
    pass


def validate(command: str, payload) -> None:
    try:
        jsonschema.validate(payload, SCHEMAS[command], cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<payload>"
        raise SchemaViolation(f"{command}: field '{where}': {exc.message}") from None


# ---------------------------------------------------------------- serialization


def _plain(x):
    """Convert numpy scalars/arrays and complex numbers into JSON values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (MomentSequence, CumulantSequence)):
        return _plain(x.values)
    if isinstance(x, GeneratorTuple):
        return x.to_dict()
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        return float(x.real) if x.imag == 0 else {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def dumps_json(doc) -> str:
    return json.dumps(_plain(doc), sort_keys=True, indent=2, allow_nan=True) + "\n"


def dumps_csv(rows: list[dict]) -> str:
    rows = _plain(rows)
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def _seq_rows(values, key="k", name="value"):
    return [{key: i, name: v} for i, v in enumerate(_plain(list(values)), start=1)]


# ---------------------------------------------------------------- commands


def _cmd_cumulants(p):
    k = moments_to_cumulants(MomentSequence(p["m"]), p["flavor"])
    return {"flavor": k.flavor.value, "order": k.order, "cumulants": k.values}, _seq_rows(k.values, name="cumulant")


def _cmd_convolve(p):
    m = convolve(MomentSequence(p["m1"]), MomentSequence(p["m2"]), p["flavor"])
    return {"order": m.order, "moments": m.values}, _seq_rows(m.values, name="moment")


def _cmd_bp(p):
    m = bercovici_pata(MomentSequence(p["m"]))
    return {"order": m.order, "moments": m.values}, _seq_rows(m.values, name="moment")


def _marginal(doc) -> MarginalLaw:
    fam = doc["family"]
    if "sequence" in doc:
        return MarginalLaw.from_sequence(fam, doc["sequence"])
    return MarginalLaw(fam, {tuple(e["word"]): e["value"] for e in doc.get("moments", [])})


def _cmd_mixed(p):
    laws = [_marginal(doc) for doc in p["marginals"]]
    word = [tuple(x) if isinstance(x, list) else x for x in p["word"]]
    fn = free_mixed_moment if p["flavor"] == "free" else tensor_mixed_moment
    value = fn(word, laws)
    return {"value": value}, [{"value": value}]


def _cmd_fock(p):
    space, injections = fock.free_embedding(p["dims"], p["depth"])
    ops = {}
    for name, terms in p["operators"].items():
        op = fock.zero(space)
        for term in terms:
            if term["block"] >= len(injections):
                raise SchemaViolation(f"fock-oracle: field 'operators/{name}/block': no block {term['block']}")
            inj = injections[term["block"]]
            if "creation" in term:
                op = op + inj.creation(term["creation"])
            if "annihilation" in term:
                op = op + inj.annihilation(term["annihilation"])
            if "conservation" in term:
                op = op + inj.conservation(term["conservation"])
            if "scalar" in term:
                op = op + term["scalar"]
        ops[name] = op
    missing = [w for w in p["word"] if w not in ops]
    if missing:
        raise SchemaViolation(f"fock-oracle: field 'word': unknown operator(s) {missing}")
    value = fock.vacuum_expectation([ops[w] for w in p["word"]])
    return {"value": value}, [{"value": value}]


def _cmd_levy(p):
    tup = GeneratorTuple.from_dict(p["tuple"])
    flavor = p.get("flavor", "free")
    k = tuple_cumulants(tup, p["t"], flavor, p["order"])
    m = cumulants_to_moments(k)
    result = {"flavor": k.flavor.value, "cumulants": k.values, "moments": m.values}
    rows = [{"k": i + 1, "cumulant": a, "moment": b} for i, (a, b) in enumerate(zip(k.values, m.values))]
    if k.flavor.value == "free":
        oracle = process_moments(tup, p["t"], p["order"])
        result["fock_moments"] = oracle.values
        result["max_deviation"] = float(np.abs(oracle.values - m.values).max())
    return result, rows


def _cmd_classify(p):
    kind = classify(GeneratorTuple.from_dict(p["tuple"]))
    return {"kind": kind.value}, [{"kind": kind.value}]


def _cmd_split(p):
    tup = GeneratorTuple.from_dict(p["tuple"])
    order = p.get("order", 8)
    split = ito_levy_split(tup)
    total = tuple_cumulants(tup, 1.0, "free", order).values
    parts = tuple_cumulants(split.gaussian, 1.0, "free", order).values + tuple_cumulants(split.jump, 1.0, "free", order).values
    dev = float(np.abs(total - parts).max())
    result = {"gaussian": split.gaussian, "jump": split.jump, "omega": split.omega, "exact": split.exact, "additivity_deviation": dev}
    rows = [{"part": "gaussian", "tuple": split.gaussian.to_dict()}, {"part": "jump", "tuple": split.jump.to_dict()}]
    return result, rows


def _cmd_minimal(p):
    m = minimal_tuple(GeneratorTuple.from_dict(p["tuple"]))
    return {"tuple": m}, [{"d": m.d, "tuple": m.to_dict()}]


def _cmd_azema(p):
    gamma = complex(p["gamma_re"], p.get("gamma_im", 0.0))
    gamma = gamma.real if gamma.imag == 0 else gamma
    steps, max_order = p.get("steps", 16), p.get("max_order", 6)
    depth = p.get("depth", max_order)
    m = azema_free(gamma, p["t"], steps, depth, max_order)
    result = {f"order_{k}": v for k, v in enumerate(_plain(m.values), start=1)}
    rows = _seq_rows(m.values, name="moment")
    if p.get("converge"):
        conv = azema_convergence(gamma, p["t"], tuple(steps * 2**i for i in range(4)), max_order, depth)
        result["convergence"] = {
            "steps": conv["steps"],
            "moments": [r.values for r in conv["moments"]],
            "differences": conv["differences"],
            "ratios": conv["ratios"],
        }
        diffs = [None, *conv["differences"]]
        rows = [
            {"steps": n, "difference": d if d is not None else "", "moments": _plain(r.values)}
            for n, d, r in zip(conv["steps"], diffs, conv["moments"])
        ]
    return result, rows


def _cmd_check(p):
    results = check_suite(p.get("filter"), p.get("perturb", 0.0), p.get("seed", 0))
    for r in results:
        print(r.line(), file=sys.stderr)
    doc = {"checks": {r.name: {"passed": r.passed, "max_deviation": r.max_deviation} for r in results}}
    doc["passed"] = all(r.passed for r in results)
    rows = [{"check": r.name, "passed": r.passed, "max_deviation": r.max_deviation} for r in results]
    return doc, rows


COMMANDS = {
    "cumulants": _cmd_cumulants,
    "convolve": _cmd_convolve,
    "bp-map": _cmd_bp,
    "mixed-moment": _cmd_mixed,
    "fock-oracle": _cmd_fock,
    "levy-moments": _cmd_levy,
    "classify": _cmd_classify,
    "ito-split": _cmd_split,
    "minimal": _cmd_minimal,
    "azema": _cmd_azema,
    "check": _cmd_check,
}


def run(command: str, payload: dict, fmt: str = "json", timing: bool = False) -> tuple[int, str]:
    """Validate and execute one job; returns ``(exit status, emitted text)``."""
    start = time.perf_counter()
    try:
        validate(command, payload)
        result, rows = COMMANDS[command](payload)
    except SchemaViolation as exc:
        return EXIT_SCHEMA, f"error: {exc}\n"
    except SizeLimitError as exc:
        return EXIT_SIZE, f"error: size limit: {exc}\n"
    except (FreeLevyError, ValueError) as exc:
        return EXIT_SCHEMA, f"error: {command}: {exc}\n"

    status = EXIT_OK
    if command == "check" and not result["passed"]:
        status = EXIT_CONTRACT
    if fmt == "csv":
        return status, dumps_csv(rows)
    doc = {
        "command": command,
        "inputs": payload,
        "result": result,
        "tolerances": {"roundtrip": ROUNDTRIP_TOL, "sum": SUM_TOL},
        "version": __version__,
    }
    if timing:
        doc["elapsed_seconds"] = time.perf_counter() - start
    return status, dumps_json(doc)


# ---------------------------------------------------------------- argument parsing


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()] if text.strip() else []


# (flag, payload key, parser)
INLINE = {
    "cumulants": [("--flavor", "flavor", str), ("--m", "m", _floats)],
    "convolve": [("--flavor", "flavor", str), ("--m1", "m1", _floats), ("--m2", "m2", _floats)],
    "bp-map": [("--m", "m", _floats)],
    "mixed-moment": [("--flavor", "flavor", str), ("--word", "word", json.loads), ("--marginals", "marginals", json.loads)],
    "fock-oracle": [
        ("--dims", "dims", lambda s: [int(x) for x in s.split(",")]),
        ("--depth", "depth", int),
        ("--operators", "operators", json.loads),
        ("--word", "word", lambda s: s.split(",")),
    ],
    "levy-moments": [("--tuple", "tuple", json.loads), ("--t", "t", float), ("--order", "order", int), ("--flavor", "flavor", str)],
    "classify": [("--tuple", "tuple", json.loads)],
    "ito-split": [("--tuple", "tuple", json.loads), ("--order", "order", int)],
    "minimal": [("--tuple", "tuple", json.loads)],
    "azema": [
        ("--gamma-re", "gamma_re", float),
        ("--gamma-im", "gamma_im", float),
        ("--t", "t", float),
        ("--steps", "steps", int),
        ("--depth", "depth", int),
        ("--max-order", "max_order", int),
        ("--converge", "converge", None),
    ],
    "check": [("--filter", "filter", str), ("--perturb", "perturb", float), ("--seed", "seed", int)],
}


def load_spec(path: str) -> dict:
    text = Path(path).read_text()
    if path.endswith(".toml"):
        import tomli

        return tomli.loads(text)
    return json.loads(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freelevy", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"freelevy {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, flags in INLINE.items():
        p = sub.add_parser(name)
        p.add_argument("--spec", help="JSON or TOML file holding the payload or a full job spec")
        p.add_argument("--output", "-o", help="write the result here instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--timing", action="store_true", help="add elapsed time (breaks byte-for-byte determinism)")
        for flag, key, conv in flags:
            if conv is None:
                p.add_argument(flag, dest=key, action="store_true", default=None)
            else:
                p.add_argument(flag, dest=key, type=conv, default=None)
    p = sub.add_parser("run", help="execute a full job spec {command, payload, output, format}")
    p.add_argument("spec")
    p.add_argument("--timing", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    output, fmt = None, "json"
    try:
        if args.command == "run":
            job = load_spec(args.spec)
            command, payload = job.get("command"), job.get("payload", {})
            output, fmt = job.get("output"), job.get("format", "json")
            if command not in COMMANDS:
                print(f"error: field 'command': unknown command {command!r}", file=sys.stderr)
                return EXIT_SCHEMA
        else:
            command = args.command
            payload = {}
            if args.spec:
                doc = load_spec(args.spec)
                if "command" in doc or isinstance(doc.get("payload"), dict):
                    if doc.get("command", command) != command:
                        print(f"error: field 'command': spec is for {doc['command']!r}, not {command!r}", file=sys.stderr)
                        return EXIT_SCHEMA
                    output, fmt = doc.get("output"), doc.get("format", "json")
                    doc = doc.get("payload", {})
                payload.update(doc)
            for _, key, _ in INLINE[command]:
                value = getattr(args, key)
                if value is not None:
                    payload[key] = value
            output = args.output or output
            fmt = args.format or fmt
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: cannot read job: {exc}", file=sys.stderr)
        return EXIT_SCHEMA

    status, text = run(command, payload, fmt, getattr(args, "timing", False))
    if status in (EXIT_SCHEMA, EXIT_SIZE):
        sys.stderr.write(text)
        return status
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``qsem <subcommand> ...``.

Every subcommand writes one JSON report (to ``--out`` or stdout).  The
report is a pure function of the effective configuration and seed except
for the ``meta`` block, which holds the timestamp and wall time.

Exit codes: 0 all selected checks pass, 1 some check fails, 2 usage or
configuration error, 3 file could not be read or written.
"""

from __future__ import annotations

import argparse
import dataclasses
import fnmatch
import json
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__, qcat
from .cpm import HObject
from .freecat import FWM, FwmObject, PlusCategory, PlusObject
from .linalg import Tolerance, matrix_from_json, matrix_to_json
from .modelcheck import (
    HYPOTHESES,
    NEGATIVE_CONTROLS,
    Universe,
    check_concrete_embedding,
    check_hypotheses,
    config_hash,
    negative_control_instance,
)
from .report import FAIL, PASS, CheckRecord

SCHEMA = "qsem.report/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class IOFailure(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise IOFailure(f"cannot read {path}: {e.strerror or e}") from e


def _read_json(path: str):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from e


def _threads() -> int:
    raw = os.environ.get("QSEM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"QSEM_THREADS must be an integer, got {raw!r}")


def _select(records: list[CheckRecord], pattern: str | None) -> list[CheckRecord]:
    if pattern is None:
        return records
    return [r for r in records if fnmatch.fnmatchcase(r.name, pattern)]


def _tolerance(value: float | None, base: Tolerance) -> Tolerance:
    return base if value is None else Tolerance(value, value)


def build_report(command: str, config: dict, seed: int, checks: list[CheckRecord], extra: dict | None = None) -> dict:
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config": config,
        "config_hash": config_hash(config),
        "seed": seed,
        "checks": [c.to_json() for c in checks],
        "all_pass": all(c.status != FAIL for c in checks),
    }
    if extra:
        report.update(extra)
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _emit(report: dict, out: str | None, started: float) -> None:
    report["meta"] = {
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "elapsed_seconds": round(time.perf_counter() - started, 3),
    }
    text = dumps(report)
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise IOFailure(f"cannot write {out}: {e.strerror or e}") from e


def _summary(checks: list[CheckRecord]) -> None:
    for c in checks:
        print(f"{c.status:>15}  {c.name}", file=sys.stderr)


# subcommands


def cmd_check_cpm(args) -> dict:
    from .laws import LawUniverse
    from .suites import cpm_suite

    cfg = _read_json(args.config) if args.config else {}
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    tol = _tolerance(args.tol, Tolerance.from_json(cfg.get("tol", {})))
    config = {"seed": seed, "tol": tol.to_json()}
    keep = None if args.filter is None else (lambda n: fnmatch.fnmatchcase(n, args.filter))
    checks = cpm_suite(seed, tol, LawUniverse(seed=seed, tol=tol), keep)
    return build_report("check-cpm", config, seed, checks)


def _universe(args) -> Universe:
    cfg = _read_json(args.config) if args.config else {}
    cfg = {k: v for k, v in cfg.items() if not k.startswith("_")}
    try:
        u = Universe.from_json(cfg)
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad universe configuration: {e}") from e
    if args.seed is not None:
        u = dataclasses.replace(u, seed=args.seed)
    if args.tol is not None:
        u = dataclasses.replace(u, tol=Tolerance(args.tol, args.tol))
    return u


def cmd_check_model(args) -> dict:
    u = _universe(args)
    instance = None
    if args.negative_control:
        instance = negative_control_instance(args.negative_control, u)
    names = None
    if args.filter is not None:
        names = [n for n in HYPOTHESES if fnmatch.fnmatchcase(n, args.filter)]
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            report = check_hypotheses(u, instance, names, pool)
    else:
        report = check_hypotheses(u, instance, names)
    checks = list(report.records)
    if instance is None and not args.skip_embedding:
        emb = [CheckRecord(f"embedding.{r.name}", r.status, r.evidence) for r in check_concrete_embedding(u).records]
        checks += _select(emb, args.filter)
    config = {"universe": u.to_json(), "negative_control": args.negative_control}
    extra = {}
    if args.negative_control:
        extra["targeted"] = sorted(NEGATIVE_CONTROLS[args.negative_control])
    return build_report("check-model", config, u.seed, checks, extra)


def cmd_check_presheaf(args) -> dict:
    from .presheaflab import run_lab_checks

    checks = _select(run_lab_checks(), args.filter)
    return build_report("check-presheaf", {}, 0, checks)


def _parse_state(data, dims) -> list[np.ndarray]:
    """One density matrix per input part; a bare matrix is accepted for one part."""
    states = data.get("states", data) if isinstance(data, dict) else data
    if isinstance(states, dict):
        states = [states]
    if not isinstance(states, list) or len(states) != len(dims):
        raise UsageError(f"input must give {len(dims)} state(s), one per input part")
    out = []
    for m, d in zip(states, dims):
        arr = matrix_from_json(m) if isinstance(m, dict) else np.array(m, dtype=complex)
        if arr.shape != (d, d):
            raise UsageError(f"input state of shape {arr.shape}, expected {(d, d)}")
        out.append(arr)
    return out


def cmd_denote(args) -> dict:
    from .qlc import QlcError, denote_program, parse_program

    source = _read_text(args.program)
    tol = _tolerance(args.tol, Tolerance())
    try:
        prog = parse_program(source)
        f = denote_program(prog)
    except QlcError as e:
        rec = CheckRecord("typecheck", FAIL, {"error": type(e).__name__, "message": str(e),
                                              "line": e.loc.line if e.loc else None,
                                              "col": e.loc.col if e.loc else None})
        return build_report("denote", {"program": source}, 0, [rec])
    checks = [
        CheckRecord("typecheck", PASS, {}),
        CheckRecord("in_Q", PASS if qcat.is_Q(f, tol) else FAIL, {}),
    ]
    extra = {"channel": f.to_json()}
    if args.input:
        states = _parse_state(_read_json(args.input), f.src.dims)
        outs = qcat.apply(f, states)
        extra["output"] = [matrix_to_json(s) for s in outs]
        extra["output_traces"] = [float(np.real(np.trace(s))) for s in outs]
    elif f.src.dims == (1,) * len(f.src):
        # closed program: run it on the unit input
        outs = qcat.apply(f, [np.eye(1)] * len(f.src))
        extra["output"] = [matrix_to_json(s) for s in outs]
        extra["output_traces"] = [float(np.real(np.trace(s))) for s in outs]
    return build_report("denote", {"program": source}, 0, checks, extra)


_LABEL = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _hobject(label: str) -> HObject:
    m = re.fullmatch(r"C(\d+)", label)
    return HObject(label, int(m.group(1)) if m else 1)


def _parse_seq(text: str) -> FwmObject:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise UsageError(f"a sequence is written like (A,B), got {text!r}")
    body = text[1:-1].strip()
    labels = [s.strip() for s in body.split(",")] if body else []
    for s in labels:
        if not _LABEL.fullmatch(s):
            raise UsageError(f"bad object label {s!r}")
    return FwmObject(tuple(_hobject(s) for s in labels))


def parse_free_object(text: str):
    """``(A,B)`` is a sequence of ``Fwm(K)``; ``[(A),(A,B)]`` a family of ``Q''``."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise UsageError(f"unclosed family {text!r}")
        seqs = re.findall(r"\([^()]*\)", text[1:-1])
        rest = re.sub(r"\([^()]*\)", "", text[1:-1]).replace(",", "").strip()
        if rest:
            raise UsageError(f"cannot parse family {text!r}")
        return PlusObject(tuple(_parse_seq(s) for s in seqs))
    return _parse_seq(text)


def cmd_enumerate_hom(args) -> dict:
    x, y = parse_free_object(args.src), parse_free_object(args.dst)
    if type(x) is not type(y):
        raise UsageError("--src and --dst must both be sequences or both be families")
    cat = PlusCategory(FWM) if isinstance(x, PlusObject) else FWM
    morphisms = list(cat.hom(x, y))
    config = {"src": args.src, "dst": args.dst}
    rec = CheckRecord("enumerate", PASS, {"count": len(morphisms)})
    return build_report("enumerate-hom", config, 0, [rec], {
        "category": "Q''" if isinstance(x, PlusObject) else "Fwm",
        "count": len(morphisms),
        "morphisms": [m.to_json() for m in morphisms],
    })


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsem", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qsem {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True, seed=True, filt=True):
        if config:
            sp.add_argument("--config", help="JSON configuration file")
        if seed:
            sp.add_argument("--seed", type=int, help="override the configured seed")
        sp.add_argument("--tol", type=float, help="equality and positivity tolerance")
        sp.add_argument("--out", help="write the report here instead of stdout")
        if filt:
            sp.add_argument("--filter", help="only run checks whose name matches this glob")

    sp = sub.add_parser("check-cpm", help="Choi/Kraus suite and category laws")
    common(sp)
    sp.set_defaults(run=cmd_check_cpm)

    sp = sub.add_parser("check-model", help="verify the model hypotheses on a finite universe")
    common(sp)
    sp.add_argument("--negative-control", choices=sorted(NEGATIVE_CONTROLS),
                    help="run on a deliberately broken instance instead")
    sp.add_argument("--skip-embedding", action="store_true", help="omit the concrete embedding checks")
    sp.set_defaults(run=cmd_check_model)

    sp = sub.add_parser("check-presheaf", help="presheaf laboratory on built-in finite categories")
    common(sp, config=False, seed=False)
    sp.set_defaults(run=cmd_check_presheaf)

    sp = sub.add_parser("denote", help="typecheck a program and print its denotation")
    sp.add_argument("program", help="source file")
    sp.add_argument("--input", help="JSON input state(s), one density matrix per input part")
    common(sp, config=False, seed=False, filt=False)
    sp.set_defaults(run=cmd_denote)

    sp = sub.add_parser("enumerate-hom", help="list the morphisms between two free objects")
    sp.add_argument("--src", required=True, help="e.g. '(A,A)' or '[(A),(A,B)]'")
    sp.add_argument("--dst", required=True)
    common(sp, config=False, seed=False, filt=False)
    sp.set_defaults(run=cmd_enumerate_hom)
    return p


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    started = time.perf_counter()
    try:
        report = args.run(args)
        _emit(report, args.out, started)
    except UsageError as e:
        print(f"qsem: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IOFailure as e:
        print(f"qsem: {e}", file=sys.stderr)
        return EXIT_IO
    _summary([CheckRecord.from_json(c) for c in report["checks"]])
    return EXIT_OK if report["all_pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Command line: ``analyze``, ``verify`` and ``corpus`` over JSON job files.

Exit codes: 0 success, 2 verdict mismatch or failed assertion, 3 invalid
input (I/O, JSON, polynomial syntax, hypotheses), 4 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .groebner import ResourceLimitError
from .idealops import Ideal, PolyMatrix
from .polyring import ParseError, PrimeField, RingSpec, field_from_descriptor
from .rees import (
    AnalysisReport,
    DegenerateColumnRank,
    I1NotMaximal,
    NonLinearEntry,
    ShapeNotNormalForm,
    TransitionIdentityFailure,
    analyze,
    classify_shape,
    column_instance,
    gs_profile,
    row_instance,
    validate_presentation,
)

SCHEMA = 1
EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_RESOURCE = 0, 2, 3, 4
DEFAULT_TIMEOUT = {"q": 600, "zp": 120}
CORPUS_DIR = Path(__file__).parent / "corpus"


class JobError(ValueError):
    """Invalid job file; ``where`` locates the problem when known."""

    def __init__(self, message, where=None):
        super().__init__(message if where is None else f"{message} ({where})")
        self.where = where


@dataclass
class JobSpec:
    name: str
    x_count: int
    field: str
    matrix: list
    rank_e: int
    s_hint: int | None = None
    minimal_primes: list | None = None
    mode: str = "analyze"
    flags: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)


def load_job(path) -> JobSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise JobError(f"cannot read {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    return job_from_dict(raw, path.stem)


def job_from_dict(raw: dict, default_name="job") -> JobSpec:
    if not isinstance(raw, dict):
        raise JobError("job must be a JSON object")
    matrix = raw.get("matrix")
    if not matrix or not isinstance(matrix, list) or not all(isinstance(r, list) and r for r in matrix):
        raise JobError("matrix must be a nonempty array of nonempty rows")
    if len({len(r) for r in matrix}) != 1:
        raise JobError("matrix rows have different lengths")
    if not all(isinstance(c, str) for r in matrix for c in r):
        raise JobError("matrix entries must be polynomial strings")
    ring = raw.get("ring", {})
    try:
        x_count = int(ring["x_count"])
    except (KeyError, TypeError, ValueError):
        raise JobError("ring.x_count is required") from None
    n = len(matrix)
    rank_e = int(raw.get("rank_e", n - len(matrix[0])))
    if rank_e != n - len(matrix[0]):
        raise JobError(f"rank_e = {rank_e} does not match a {n}x{len(matrix[0])} matrix")
    mode = raw.get("mode", "analyze")
    if mode not in ("analyze", "verify"):
        raise JobError(f"unknown mode {mode!r}")
    return JobSpec(
        name=raw.get("name", default_name),
        x_count=x_count,
        field=ring.get("field", "q"),
        matrix=matrix,
        rank_e=rank_e,
        s_hint=raw.get("s_hint"),
        minimal_primes=raw.get("minimal_primes"),
        mode=mode,
        flags=dict(raw.get("flags", {})),
        provenance=dict(raw.get("provenance", {})),
    )


def job_to_dict(job: JobSpec) -> dict:
    out = {
        "schema": SCHEMA,
        "name": job.name,
        "mode": job.mode,
        "ring": {"x_count": job.x_count, "field": job.field},
        "matrix": job.matrix,
        "rank_e": job.rank_e,
    }
    if job.s_hint is not None:
        out["s_hint"] = job.s_hint
    if job.minimal_primes:
        out["minimal_primes"] = job.minimal_primes
    if job.flags:
        out["flags"] = job.flags
    if job.provenance:
        out["provenance"] = job.provenance
    return out


def dump_job(job: JobSpec) -> str:
    """Job JSON with one matrix row per line."""
    raw = job_to_dict(job)
    rows = raw.pop("matrix")
    text = json.dumps(raw, indent=2)
    body = ",\n".join("    " + json.dumps(r) for r in rows)
    return text[:-2] + ',\n  "matrix": [\n' + body + "\n  ]\n}\n"


def make_instance_job(kind: str, d: int, s: int, n: int, e: int, seed: int = 0) -> JobSpec:
    """Job for a reproducible random column/row instance (over Z/32003)."""
    build = column_instance if kind == "column" else row_instance
    p, attempts = build(d, s, n, e, seed=seed, field=PrimeField(32003))
    return JobSpec(
        name=f"{kind}_{d}_{s}_{n}_{e}",
        x_count=d,
        field="zp:32003",
        matrix=p.phi.to_strings(),
        rank_e=e,
        s_hint=s,
        mode="verify",
        flags={"shape": kind},
        provenance={"generator": kind, "params": [d, s, n, e], "seed": seed, "rejected_draws": attempts},
    )


# ---------------------------------------------------------------------------
# running a job


@dataclass
class Options:
    field: str | None = None
    order: str = "grevlex"
    depth: int | None = None
    seed: int | None = None
    timeout: float | None = None
    allow_nonlinear: bool | None = None
    timings: bool = False


def _field_kind(descriptor: str) -> str:
    return "q" if descriptor.strip().lower() in ("q", "qq") else "zp"


@contextmanager
def _deadline(seconds):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def handler(signum, frame):
        raise ResourceLimitError(f"timeout after {seconds} s", {"timeout": seconds})

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def build_presentation(job: JobSpec, field_desc: str | None = None, allow_nonlinear: bool | None = None):
    """(Presentation, minimal primes or None) for a job."""
    field_desc = field_desc or job.field
    if allow_nonlinear is None:
        allow_nonlinear = bool(job.flags.get("allow_nonlinear", False))
    try:
        field_obj = field_from_descriptor(field_desc)
    except ValueError as exc:
        raise JobError(str(exc)) from None
    ring = RingSpec(job.x_count, len(job.matrix), field_obj)
    rows = []
    for i, r in enumerate(job.matrix):
        row = []
        for j, text in enumerate(r):
            try:
                row.append(ring.parse(text))
            except ParseError as exc:
                raise JobError(f"matrix[{i}][{j}]: {exc.message}", f"position {exc.position} in {text!r}") from None
        rows.append(row)
    phi = PolyMatrix(rows, ring)
    p = validate_presentation(phi, job.rank_e, allow_nonlinear=allow_nonlinear)
    primes = None
    if job.minimal_primes:
        try:
            primes = [Ideal.parse(P, p.ring) for P in job.minimal_primes]
        except ParseError as exc:
            raise JobError(f"minimal_primes: {exc}") from None
    return p, primes


def run_job(job: JobSpec, mode: str | None = None, opts: Options | None = None):
    """Run ``job``; returns (report dict, exit code)."""
    opts = opts or Options()
    mode = mode or job.mode
    flags = job.flags
    field_desc = opts.field or flags.get("field") or job.field
    allow_nonlinear = opts.allow_nonlinear if opts.allow_nonlinear is not None else bool(flags.get("allow_nonlinear", False))
    order = opts.order or flags.get("order", "grevlex")
    seed = opts.seed if opts.seed is not None else int(flags.get("seed", job.provenance.get("seed", 0)))
    timeout = opts.timeout if opts.timeout is not None else flags.get("timeout")
    if timeout is None:
        timeout = DEFAULT_TIMEOUT[_field_kind(field_desc)]
    report = {
        "schema": SCHEMA,
        "tool": "reesalg",
        "version": __version__,
        "mode": mode,
        "job": job.name,
        "field": field_desc,
        "order": order,
        "seed": seed,
    }
    if job.provenance:
        report["provenance"] = job.provenance
    rep = AnalysisReport(data={})
    code = EXIT_OK
    try:
        if order != "grevlex":
            raise JobError(f"unsupported order {order!r}; only grevlex is available")
        with _deadline(timeout):
            p, primes = build_presentation(job, field_desc, allow_nonlinear)
            depth = opts.depth if opts.depth is not None else flags.get("depth")
            if mode == "verify":
                if depth is None:
                    depth = min(3, p.m)
                s = job.s_hint if job.s_hint is not None else None
                if s is None:
                    gs = gs_profile(p)
                    if gs.s_max == math.inf or not 2 <= gs.s_max < p.d:
                        raise ShapeNotNormalForm(f"G_s profile gives s = {gs.s_max}, outside 2..d-1")
                    s = gs.s_max
                shape = classify_shape(p, s, prefer=flags.get("shape"))
                if not shape.is_normal:
                    raise ShapeNotNormalForm(
                        f"phi mod (x1..x{s}) is {shape.kind} (residual rank {shape.residual_rank})"
                    )
                if not p.linear:
                    raise ShapeNotNormalForm("verify needs a linear presentation")
            else:
                s = job.s_hint
            analyze(p, s=s, shape_hint=flags.get("shape"), minimal_primes=primes, depth=depth, report=rep)
        verdicts = rep.data.get("verdicts", {})
        if mode == "verify":
            failed = [k for k, v in verdicts.items() if not v]
            report["assertions"] = verdicts
            if failed or not verdicts:
                code = EXIT_MISMATCH
                report["failed"] = failed
        elif verdicts.get("candidate_equals_oracle") is False:
            code = EXIT_MISMATCH
        report["status"] = "ok" if code == EXIT_OK else "mismatch"
    except ResourceLimitError as exc:
        code = EXIT_RESOURCE
        report["status"] = "resource_limit"
        report["error"] = {"type": "ResourceLimitError", "message": str(exc), "diagnostics": exc.diagnostics}
    except (JobError, ParseError, NonLinearEntry, DegenerateColumnRank, I1NotMaximal,
            ShapeNotNormalForm, TransitionIdentityFailure, ValueError) as exc:
        code = EXIT_INVALID
        report["status"] = "invalid"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        pos = getattr(exc, "position", None)
        if pos is not None:
            report["error"]["position"] = list(pos) if isinstance(pos, tuple) else pos
    report.update(rep.data)
    if opts.timings:
        report["timings"] = rep.timings
    report["exit_code"] = code
    return report, code


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write(text: str, out):
    if out:
        out = Path(out)
        tmp = out.with_suffix(out.suffix + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, out)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# corpus


def _lookup(report: dict, dotted: str):
    cur = report
    for part in dotted.split("."):
        if isinstance(cur, dict) and part in cur:
            cur = cur[part]
        else:
            return _MISSING
    return cur


class _Missing:
    def __repr__(self):
        return "<missing>"


_MISSING = _Missing()


def compare_expected(report: dict, expected: dict) -> list:
    """Field-by-field differences: list of (path, expected, got)."""
    diffs = []
    if "exit_code" in expected and report.get("exit_code") != expected["exit_code"]:
        diffs.append(("exit_code", expected["exit_code"], report.get("exit_code")))
    for path, want in sorted(expected.get("fields", {}).items()):
        got = _lookup(report, path)
        if got != want:
            diffs.append((path, want, got))
    return diffs


def _corpus_one(args):
    path, opts = args
    t0 = time.perf_counter()
    try:
        job = load_job(path)
    except JobError as exc:
        return {"schema": SCHEMA, "status": "invalid", "error": {"message": str(exc)}, "exit_code": EXIT_INVALID}, 0.0
    report, _ = run_job(job, opts=opts)
    return report, time.perf_counter() - t0


def run_corpus(directory, opts: Options | None = None, workers: int = 1, out=None) -> int:
    out = out or sys.stdout
    directory = Path(directory)
    if not directory.is_dir():
        raise JobError(f"{directory} is not a directory")
    jobs = sorted(p for p in directory.glob("*.json") if not p.name.endswith(".expected.json"))
    runnable, skipped = [], []
    for path in jobs:
        sidecar = path.with_name(path.stem + ".expected.json")
        if sidecar.exists():
            runnable.append((path, sidecar))
        else:
            skipped.append(path)
            print(f"warning: no sidecar for {path.name}; skipped", file=sys.stderr)
    opts = opts or Options()
    tasks = [(p, opts) for p, _ in runnable]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_corpus_one, tasks))
    else:
        results = [_corpus_one(t) for t in tasks]
    passed = 0
    width = max([len(p.stem) for p, _ in runnable] + [4])
    for (path, sidecar), (report, secs) in zip(runnable, results):
        try:
            expected = json.loads(sidecar.read_text())
        except json.JSONDecodeError as exc:
            expected, bad = None, f"bad sidecar: {exc.msg}"
        diffs = compare_expected(report, expected) if expected is not None else [("sidecar", bad, None)]
        ok = not diffs
        passed += ok
        print(f"{path.stem:<{width}}  {'PASS' if ok else 'FAIL'}  {secs:8.2f}s", file=out)
        for where, want, got in diffs:
            print(f"    {where}: expected {json.dumps(want)} got {json.dumps(got, default=repr)}", file=out)
    total = len(runnable)
    print(f"{passed}/{total} pass" + (f", {len(skipped)} skipped" if skipped else ""), file=out)
    return EXIT_OK if passed == total else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reesalg", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"reesalg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--field", help="q or zp:<prime> (overrides the job)")
        p.add_argument("--order", default="grevlex", choices=["grevlex"])
        p.add_argument("--depth", type=int, help="approximation-chain depth")
        p.add_argument("--seed", type=int, help="recorded in the report; results are exact and do not depend on it")
        p.add_argument("--timeout", type=float, help="seconds per job")
        p.add_argument("--allow-nonlinear", action="store_true", default=None)
        p.add_argument("--timings", action="store_true", help="add wall-clock per stage")

    helps = {
        "analyze": "full pipeline; exit 2 if the matrix formula disagrees with the saturation",
        "verify": "assert every prediction for a column/row-shaped presentation",
    }
    for name in ("analyze", "verify"):
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("job")
        p.add_argument("--out", help="write the report here instead of stdout")
        common(p)
    p = sub.add_parser("corpus", help="run every job in a directory against its .expected.json sidecar")
    p.add_argument("directory", nargs="?", default=str(CORPUS_DIR))
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(p)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    opts = Options(
        field=args.field, order=args.order, depth=args.depth, seed=args.seed,
        timeout=args.timeout, allow_nonlinear=args.allow_nonlinear, timings=args.timings,
    )
    if args.command == "corpus":
        try:
            return run_corpus(args.directory, opts, workers=args.jobs)
        except JobError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
    try:
        job = load_job(args.job)
    except JobError as exc:
        report = {"schema": SCHEMA, "status": "invalid", "exit_code": EXIT_INVALID,
                  "error": {"type": "JobError", "message": str(exc)}}
        _write(dump_report(report), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report, code = run_job(job, mode=args.command, opts=opts)
    _write(dump_report(report), args.out)
    if code:
        reason = report.get("error", {}).get("message") or ", ".join(report.get("failed", [])) or report["status"]
        print(f"{args.command}: {report['status']}: {reason}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

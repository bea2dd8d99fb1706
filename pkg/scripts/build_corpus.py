"""Regenerate the shipped corpus jobs and their expected-report sidecars.

Sidecars freeze selected report fields.  Run once, inspect the diff, commit.
"""

import json
import sys
from pathlib import Path

from reesalg.cli import CORPUS_DIR, JobSpec, dump_job, make_instance_job, run_job

EXAMPLES = {
    "example_6_1": dict(
        x_count=4, field="zp:32003",
        matrix=[["0", "0", "0", "0", "x2"],
                ["x2", "x1+x2", "0", "x1+x2", "x1"],
                ["0", "0", "x3", "x3", "x4"],
                ["0", "x2", "x1+x2", "0", "x1+x2"],
                ["x4", "x3+x4", "0", "0", "x3"],
                ["0", "0", "x4", "0", "x1"]],
        minimal_primes=[["x1", "x2"], ["x3", "x4"]],
    ),
    "example_6_2": dict(
        x_count=4, field="q",
        matrix=[["x1-x2", "x2", "x2", "x1"],
                ["x2", "0", "x2", "x1"],
                ["x1+x2", "0", "x2", "x1"],
                ["x4", "x1", "x3", "0"],
                ["x1", "x3", "x1", "x4"]],
        minimal_primes=[["x1", "x2"], ["x1", "x3", "x4"]],
    ),
    "example_6_3": dict(
        x_count=4, field="q",
        matrix=[["x2", "0", "x2", "0"],
                ["x2", "x1", "x4", "x2"],
                ["0", "x1", "x2", "x3"],
                ["0", "x2", "x3", "x1"],
                ["x1", "x2", "x1", "x4"]],
    ),
    "example_6_4": dict(
        x_count=4, field="q",
        matrix=[["x1^2", "x1", "x2", "0"],
                ["0", "0", "x1", "x1"],
                ["x2^2", "x2", "x1", "0"],
                ["0", "x1", "x2", "x2"],
                ["x2^2", "x1", "x3", "x4"]],
        flags={"allow_nonlinear": True},
    ),
}

INSTANCES = [
    ("column", 4, 2, 5, 1),
    ("column", 4, 2, 6, 2),
    ("row", 4, 2, 6, 1),
    ("row", 4, 3, 5, 1),
]

COMMON_FIELDS = [
    "status", "s", "gs_profile.s_max", "shape.kind", "shape.residual_rank",
    "fitting.height", "fitting.unique_minimal_prime",
    "oracle.exponent", "oracle.height", "oracle.generators",
    "fiber.census", "fiber.analytic_spread",
]


def jobs():
    for name, entry in EXAMPLES.items():
        yield JobSpec(name=name, x_count=entry["x_count"], field=entry["field"], matrix=entry["matrix"],
                      rank_e=1, s_hint=2, minimal_primes=entry.get("minimal_primes"),
                      flags=entry.get("flags", {}))
    for kind, d, s, n, e in INSTANCES:
        yield make_instance_job(kind, d, s, n, e, seed=1)


def expected_for(report):
    fields = {}
    keys = list(COMMON_FIELDS)
    if "certificate" in report.get("fitting", {}):
        keys += ["fitting.certificate.passed", "fitting.certificate.heights"]
    if "assertions" in report:
        keys += [f"assertions.{k}" for k in sorted(report["assertions"])]
        keys += ["fiber_type", "predicted_analytic_spread", "candidate.generators", "chain.heights"]
    for key in keys:
        cur = report
        for part in key.split("."):
            cur = cur[part]
        fields[key] = cur
    return {"exit_code": report["exit_code"], "fields": fields}


def main(out_dir=CORPUS_DIR):
    out_dir = Path(out_dir)
    for job in jobs():
        (out_dir / f"{job.name}.json").write_text(dump_job(job))
        report, code = run_job(job)
        (out_dir / f"{job.name}.expected.json").write_text(json.dumps(expected_for(report), indent=2, sort_keys=True) + "\n")
        print(job.name, code, report["status"], flush=True)


if __name__ == "__main__":
    main(*sys.argv[1:])

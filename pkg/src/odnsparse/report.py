"""Canonical JSON/CSV report serialization.

Reports are serialized with sorted keys and no NaN/Inf, so two runs with
identical configuration produce byte-identical JSON apart from the
`timings` subtree (wall-clock stage timings and the start timestamp live
there and nowhere else).
"""

from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path

from .applications import PcaComparison, QuadFormReport
from .sparsify import RatioCheck, SparsifierResult, VerificationRecord
from .spectra import (
    NormComparison,
    SparsifierNormCheck,
    SpectralReport,
    WeylCheck,
)

SCHEMA_VERSION = "1.0"


def verification_to_dict(v: VerificationRecord) -> dict:
    return {
        "n": v.n,
        "epsilon": v.epsilon,
        "probes": v.probes,
        "seed": v.seed,
        "probe_min": v.probe_min,
        "probe_max": v.probe_max,
        "gen_min": v.gen_min,
        "gen_max": v.gen_max,
        "kernel_leak": v.kernel_leak,
        "passed": v.passed,
        "mode": v.mode,
    }


def sparsifier_to_dict(r: SparsifierResult) -> dict:
    return {
        "epsilon": r.epsilon,
        "seed": r.seed,
        "samples_drawn": r.samples_drawn,
        "distinct_edges": r.distinct_edges,
        "oversample_constant": r.oversample_constant,
        "epsilon_above_small_regime": r.epsilon_above_small_regime,
        "nnz_after": r.nnz_after,
    }


def ratio_check_to_dict(r: RatioCheck) -> dict:
    return {
        "epsilon": r.epsilon,
        "passed": r.passed,
        "worst_low": r.worst_low,
        "worst_high": r.worst_high,
    }


def spectral_to_dict(r: SpectralReport) -> dict:
    return {
        "epsilon": r.epsilon,
        "n": r.n,
        "bound": r.bound,
        "r_norm": r.r_norm,
        "max_deviation": r.max_deviation,
        "nnz_before": r.nnz_before,
        "nnz_after": r.nnz_after,
        "eigenvalue_bound_passed": r.eigenvalue_bound_passed,
        "angles_passed": r.angles_passed,
        "inertia": vars(r.inertia).copy(),
        "inertia_hat": vars(r.inertia_hat).copy(),
        "inertia_match": r.inertia_match,
        "inertia_guaranteed": r.inertia_guaranteed,
        "pairs": [
            {
                "index": i + 1,
                "value": float(r.values[i]),
                "value_hat": float(r.values_hat[i]),
                "deviation": float(r.deviations[i]),
                "sin_theta": r.angles[i].sin_theta,
                "dk_bound": r.angles[i].bound,
                "dk_bound_swapped": r.dk_bounds_swapped[i],
                "dk_passed": r.angles[i].passed,
            }
            for i in range(r.n)
        ],
    }


def norm_check_to_dict(c) -> dict:
    if isinstance(c, WeylCheck):
        return {"max_deviation": c.max_deviation, "norm": c.norm, "passed": c.passed}
    if isinstance(c, NormComparison):
        return {"lhs": c.lhs, "rhs": c.rhs, "passed": c.passed}
    if isinstance(c, SparsifierNormCheck):
        return {
            "norm_diff": c.norm_diff,
            "bound": c.bound,
            "status": c.status,
            "passed": c.passed,
        }
    raise TypeError(f"unknown check type {type(c)!r}")


def pca_to_dict(p: PcaComparison) -> dict:
    return {
        "n": p.n,
        "p": p.p,
        "epsilon": p.epsilon,
        "seed": p.seed,
        "per_component_bound": p.per_component_bound,
        "rho_laplacian": p.rho_laplacian,
        "components": [
            {
                "index": i + 1,
                "variance": float(p.variances[i]),
                "variance_hat": float(p.variances_hat[i]),
                "gap": float(p.gaps[i]),
            }
            for i in range(len(p.variances))
        ],
        "cumulative": p.cumulative,
        "cumulative_hat": p.cumulative_hat,
        "cumulative_bound": p.cumulative_bound,
        "cumulative_bound_literal": p.cumulative_bound_literal,
        "psd_ok": p.psd_ok,
        "psd_hat_ok": p.psd_hat_ok,
        "status": p.status,
        "iterative_converged": p.iterative_converged,
        "nnz_before": p.nnz_before,
        "nnz_after": p.nnz_after,
        "verification": verification_to_dict(p.verification),
    }


def quadform_to_dict(q: QuadFormReport) -> dict:
    # Probe vectors are summarized by norm; the raw vectors stay in the
    # in-memory records only.
    return {
        "norm_diff": q.norm_diff,
        "inertia": vars(q.inertia).copy(),
        "inertia_hat": vars(q.inertia_hat).copy(),
        "inertia_match": q.inertia_match,
        "records": [
            {
                "x_norm": float((r.x @ r.x) ** 0.5),
                "value": r.value,
                "value_hat": r.value_hat,
                "gap": r.gap,
                "bound": r.bound,
            }
            for r in q.records
        ],
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(report: dict, path) -> None:
    Path(path).write_text(dumps_report(report))


def strip_timings(report: dict) -> dict:
    out = dict(report)
    out.pop("timings", None)
    return out


def load_schema() -> dict:
    text = resources.files("odnsparse").joinpath("report.schema.json").read_text()
    return json.loads(text)


def validate_report(report: dict) -> None:
    """Validate a report dict against the shipped schema (needs jsonschema)."""
    import jsonschema

    jsonschema.validate(report, load_schema())


def write_spectral_csv(r: SpectralReport, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["i", "lambda", "lambda_hat", "deviation", "sin_theta", "dk_bound"]
        )
        for i in range(r.n):
            bound = r.angles[i].bound
            writer.writerow(
                [
                    i + 1,
                    repr(float(r.values[i])),
                    repr(float(r.values_hat[i])),
                    repr(float(r.deviations[i])),
                    repr(r.angles[i].sin_theta),
                    "undefined" if bound is None else repr(bound),
                ]
            )


def write_pca_csv(p: PcaComparison, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "variance", "variance_hat", "gap", "bound"])
        for i in range(len(p.variances)):
            writer.writerow(
                [
                    i + 1,
                    repr(float(p.variances[i])),
                    repr(float(p.variances_hat[i])),
                    repr(float(p.gaps[i])),
                    repr(p.per_component_bound),
                ]
            )

"""Command-line front-end for the sparsification pipeline.

Subcommands: sparsify (full pipeline + report), verify (compare two
matrices against every bound), pca-demo (correlation PCA comparison from
a CSV), bounds (print the certified deviation bound without sparsifying).

Exit codes: 0 all checks passed, 1 usage/input error, 2 bound violation.
Set ODN_SPARSIFY_THREADS to cap library-internal (BLAS) parallelism.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .core import center_diagonal, decompose, reconstruct
from .errors import NotOdnError, OdnError
from .generators import generate_odn, parse_generator_spec
from .mmio import read_matrix_market, write_matrix_market
from .applications import correlation_from_data, pca_compare
from .report import (
    SCHEMA_VERSION,
    norm_check_to_dict,
    pca_to_dict,
    ratio_check_to_dict,
    sparsifier_to_dict,
    spectral_to_dict,
    verification_to_dict,
    write_pca_csv,
    write_report,
    write_spectral_csv,
)
from .sparsify import (
    DENSE_LIMIT,
    EPSILON_SMALL_REGIME,
    eigenvalue_ratio_check,
    sample_count,
    sparsify_laplacian,
    verify_sparsifier,
)
from .spectra import (
    adjacency_norm_check,
    sparsifier_norm_check,
    spectral_norm,
    spectral_report,
    weyl_check,
)

_thread_limiter = None


def _apply_thread_cap() -> None:
    global _thread_limiter
    raw = os.environ.get("ODN_SPARSIFY_THREADS")
    if not raw:
        return
    try:
        cap = max(1, int(raw))
    except ValueError:
        print(f"warning: ignoring ODN_SPARSIFY_THREADS={raw!r}", file=sys.stderr)
        return
    try:
        import threadpoolctl

        _thread_limiter = threadpoolctl.threadpool_limits(limits=cap)
    except ImportError:
        os.environ.setdefault("OMP_NUM_THREADS", str(cap))


class _Parser(argparse.ArgumentParser):
    # Usage problems are exit code 1; argparse defaults to 2, which this
    # tool reserves for bound violations.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(parser):
    parser.add_argument("--epsilon", type=float, default=0.25,
                        help="target spectral approximation (default 0.25)")
    parser.add_argument("--constant", type=float, default=9.0,
                        help="oversampling constant C (default 9)")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--probes", type=int, default=1000,
                        help="random probe vectors for verification (default 1000)")
    parser.add_argument("--dense-limit", type=int, default=DENSE_LIMIT,
                        help=f"max n for dense/exact paths (default {DENSE_LIMIT})")
    parser.add_argument("--out-report", metavar="PATH", help="write the JSON report")
    parser.add_argument("--out-csv", metavar="PATH", help="write the flat CSV")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def _add_input(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", metavar="PATH", help="Matrix Market input file")
    group.add_argument("--gen", metavar="SPEC",
                       help="generator spec, e.g. complete:n=50,seed=1")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="odn-sparsify",
                     description="Sparsify symmetric matrices with nonnegative "
                                 "off-diagonal entries and verify the spectral bounds.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sparsify = sub.add_parser("sparsify", help="run the full pipeline")
    _add_input(sparsify)
    _add_common(sparsify)
    sparsify.add_argument("--out-matrix", metavar="PATH",
                          help="write the sparsified matrix (Matrix Market)")

    verify = sub.add_parser("verify", help="check every bound on a matrix pair")
    verify.add_argument("matrix_a", help="reference matrix (Matrix Market)")
    verify.add_argument("matrix_b", help="candidate sparsifier (Matrix Market)")
    _add_common(verify)

    pca = sub.add_parser("pca-demo", help="correlation PCA comparison from CSV data")
    pca.add_argument("--input", metavar="PATH", required=True,
                     help="CSV with a header row, one sample per row")
    pca.add_argument("--components", type=int, default=3, metavar="P",
                     help="number of principal components (default 3)")
    _add_common(pca)

    bounds = sub.add_parser("bounds", help="print the deviation bound, no sparsification")
    _add_input(bounds)
    _add_common(bounds)
    return parser


def _load_matrix(args):
    if getattr(args, "gen", None):
        spec = parse_generator_spec(args.gen)
        return generate_odn(**spec), f"generator:{args.gen}"
    return read_matrix_market(args.input), f"file:{args.input}"


def _report_skeleton(source, matrix, args, extra_params=None) -> dict:
    params = {
        "epsilon": args.epsilon,
        "constant": args.constant,
        "seed": args.seed,
        "probes": args.probes,
        "dense_limit": args.dense_limit,
        "resistance_mode": "exact",
        "epsilon_above_small_regime": bool(args.epsilon > EPSILON_SMALL_REGIME),
    }
    if extra_params:
        params.update(extra_params)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "odnsparse", "version": __version__},
        "input": {
            "source": source,
            "n": matrix.n,
            "stored_pairs": matrix.stored_pairs,
            "nnz_offdiag": matrix.nnz_offdiag,
            "nnz": matrix.nnz,
        },
        "parameters": params,
    }


def _warn_small_regime(epsilon):
    if EPSILON_SMALL_REGIME < epsilon < 1.0:
        print(
            f"warning: epsilon={epsilon:g} is above 1/120; the strictest "
            "sparsity guarantees are stated only at or below that value",
            file=sys.stderr,
        )


def _finish(report, failures, timings, args, spectral=None, pca=None) -> int:
    report["checks"] = {"all_passed": not failures, "failures": sorted(failures)}
    report["timings"] = timings
    if args.out_report:
        write_report(report, args.out_report)
    if args.out_csv and spectral is not None:
        write_spectral_csv(spectral, args.out_csv)
    if args.out_csv and pca is not None:
        write_pca_csv(pca, args.out_csv)
    if args.verbose:
        for stage, seconds in timings.get("stages", {}).items():
            print(f"timing: {stage} {seconds * 1e3:.2f} ms", file=sys.stderr)
    if failures:
        print("FAIL: " + ", ".join(sorted(failures)))
        return 2
    print("PASS: all checks passed")
    return 0


def cmd_sparsify(args) -> int:
    timings: dict = {"started_at": datetime.now(timezone.utc).isoformat()}
    stages: dict = {}
    matrix, source = _load_matrix(args)
    _warn_small_regime(args.epsilon)

    t0 = time.perf_counter()
    decomp = decompose(matrix)
    centered = center_diagonal(matrix)
    stages["decompose"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    result = sparsify_laplacian(
        decomp, args.epsilon, args.seed, args.constant, dense_limit=args.dense_limit
    )
    stages["sparsify"] = time.perf_counter() - t0
    m_hat = reconstruct(result.adjacency, decomp.center)

    t0 = time.perf_counter()
    verification = verify_sparsifier(
        decomp.laplacian, result.laplacian, args.epsilon,
        probes=args.probes, seed=args.seed, dense_limit=args.dense_limit,
    )
    ratios = None
    if matrix.n <= args.dense_limit:
        ratios = eigenvalue_ratio_check(decomp.laplacian, result.laplacian, args.epsilon)
    stages["verify"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    spect = spectral_report(matrix, m_hat, args.epsilon, dense_limit=args.dense_limit)
    stages["spectral"] = time.perf_counter() - t0

    if args.out_matrix:
        write_matrix_market(m_hat, args.out_matrix)

    failures = []
    if not verification.passed:
        failures.append("sparsifier-inequality")
    if ratios is not None and not ratios.passed:
        failures.append("eigenvalue-ratios")
    if not spect.eigenvalue_bound_passed:
        failures.append("eigenvalue-deviation-bound")
    if not spect.angles_passed:
        failures.append("angle-bounds")

    report = _report_skeleton(source, matrix, args)
    report["sparsifier"] = sparsifier_to_dict(result)
    report["verification"] = verification_to_dict(verification)
    report["eigenvalue_ratios"] = None if ratios is None else ratio_check_to_dict(ratios)
    report["spectral"] = spectral_to_dict(spect)
    timings["stages"] = stages

    print(f"n={matrix.n} nnz_before={matrix.nnz} nnz_after={result.nnz_after} "
          f"samples={result.samples_drawn} distinct_edges={result.distinct_edges}")
    print(f"bound={spect.bound:.6g} max_deviation={spect.max_deviation:.6g} "
          f"centered_diag={centered.diag[0]:.6g}")
    if verification.gen_min is not None:
        print(f"ratio extremes: [{verification.gen_min:.6f}, {verification.gen_max:.6f}] "
              f"target [{1 - args.epsilon:.6f}, {1 + args.epsilon:.6f}]")
    return _finish(report, failures, timings, args, spectral=spect)


def cmd_verify(args) -> int:
    timings: dict = {"started_at": datetime.now(timezone.utc).isoformat()}
    stages: dict = {}
    matrix_a = read_matrix_market(args.matrix_a)
    matrix_b = read_matrix_market(args.matrix_b)
    _warn_small_regime(args.epsilon)

    t0 = time.perf_counter()
    decomp_a = decompose(matrix_a)
    decomp_b = decompose(matrix_b)
    verification = verify_sparsifier(
        decomp_a.laplacian, decomp_b.laplacian, args.epsilon,
        probes=args.probes, seed=args.seed, dense_limit=args.dense_limit,
    )
    lap_check = sparsifier_norm_check(
        decomp_a.laplacian, decomp_b.laplacian, args.epsilon,
        sparsifier_ok=verification.passed,
    )
    adj_check = adjacency_norm_check(decomp_a, decomp_b)
    weyl = weyl_check(matrix_a.to_dense(), matrix_b.to_dense())
    ratios = eigenvalue_ratio_check(decomp_a.laplacian, decomp_b.laplacian, args.epsilon)
    stages["checks"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    spect = spectral_report(matrix_a, matrix_b, args.epsilon, dense_limit=args.dense_limit)
    stages["spectral"] = time.perf_counter() - t0

    failures = []
    if not verification.passed:
        failures.append("sparsifier-inequality")
    if lap_check.status == "fail":
        failures.append("laplacian-norm-bound")
    if not adj_check.passed:
        failures.append("adjacency-norm-bound")
    if not weyl.passed:
        failures.append("weyl-bound")
    if not ratios.passed:
        failures.append("eigenvalue-ratios")
    if not spect.eigenvalue_bound_passed:
        failures.append("eigenvalue-deviation-bound")
    if not spect.angles_passed:
        failures.append("angle-bounds")

    report = _report_skeleton(f"file:{args.matrix_a}", matrix_a, args)
    report["input"]["source"] += f" vs file:{args.matrix_b}"
    report["verification"] = verification_to_dict(verification)
    report["eigenvalue_ratios"] = ratio_check_to_dict(ratios)
    report["norm_checks"] = {
        "laplacian": norm_check_to_dict(lap_check),
        "adjacency": norm_check_to_dict(adj_check),
        "weyl": norm_check_to_dict(weyl),
    }
    report["spectral"] = spectral_to_dict(spect)
    timings["stages"] = stages

    print(f"||L-L_hat||={lap_check.norm_diff:.6g} eps*rho(L)={lap_check.bound:.6g} "
          f"[{lap_check.status}]")
    print(f"||A-A_hat||={adj_check.lhs:.6g} sqrt(n)*||L-L_hat||={adj_check.rhs:.6g}")
    print(f"weyl: max|a_i-b_i|={weyl.max_deviation:.6g} ||A-B||={weyl.norm:.6g}")
    return _finish(report, failures, timings, args, spectral=spect)


def cmd_pca_demo(args) -> int:
    timings: dict = {"started_at": datetime.now(timezone.utc).isoformat()}
    stages: dict = {}
    data = np.loadtxt(args.input, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] < 2:
        raise ValueError(f"need at least 2 data columns, got {data.shape[1]}")
    _warn_small_regime(args.epsilon)

    t0 = time.perf_counter()
    matrix = correlation_from_data(data)
    stages["correlation"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    comparison = pca_compare(
        matrix, args.epsilon, args.components, args.seed,
        constant=args.constant, probes=args.probes, dense_limit=args.dense_limit,
    )
    stages["pca"] = time.perf_counter() - t0
    stages["solve_dense"] = comparison.dense_seconds
    stages["solve_iterative"] = comparison.iterative_seconds

    failures = []
    if not comparison.verification.passed:
        failures.append("sparsifier-inequality")
    if comparison.status == "fail":
        failures.append("pca-variance-bound")

    report = _report_skeleton(
        f"file:{args.input}", matrix, args,
        extra_params={"components": args.components},
    )
    report["applications"] = {"pca": pca_to_dict(comparison)}
    timings["stages"] = stages

    print(f"n={comparison.n} p={comparison.p} "
          f"per-component bound={comparison.per_component_bound:.6g}")
    for i in range(comparison.p):
        print(f"  component {i + 1}: var={comparison.variances[i]:.6f} "
              f"var_hat={comparison.variances_hat[i]:.6f} gap={comparison.gaps[i]:.3g}")
    print(f"dense solve {comparison.dense_seconds * 1e3:.2f} ms, "
          f"iterative solve {comparison.iterative_seconds * 1e3:.2f} ms")
    return _finish(report, failures, timings, args, pca=comparison)


def cmd_bounds(args) -> int:
    timings: dict = {"started_at": datetime.now(timezone.utc).isoformat()}
    matrix, source = _load_matrix(args)
    _warn_small_regime(args.epsilon)

    t0 = time.perf_counter()
    decomp = decompose(matrix)
    rho = spectral_norm(decomp.laplacian, dense_limit=args.dense_limit)
    spread = (decomp.delta_max - decomp.delta_min) / 2.0
    bound = args.epsilon * math.sqrt(matrix.n) * rho + spread
    q = sample_count(matrix.n, args.epsilon, args.constant)
    predicted_nnz = 2 * min(q, matrix.stored_pairs) + matrix.n
    timings["stages"] = {"bounds": time.perf_counter() - t0}

    print(f"n={matrix.n} stored_pairs={matrix.stored_pairs} "
          f"nnz_offdiag={matrix.nnz_offdiag}")
    print(f"rho(L)={rho:.12g}")
    print(f"delta_max={decomp.delta_max:.12g} delta_min={decomp.delta_min:.12g} "
          f"diagonal_spread_term={spread:.12g}")
    print(f"deviation_bound={bound:.12g}")
    print(f"sample_budget={q} predicted_nnz<={predicted_nnz}")

    if args.out_report:
        report = _report_skeleton(source, matrix, args)
        report["checks"] = {"all_passed": True, "failures": []}
        report["timings"] = timings
        write_report(report, args.out_report)
    return 0


_COMMANDS = {
    "sparsify": cmd_sparsify,
    "verify": cmd_verify,
    "pca-demo": cmd_pca_demo,
    "bounds": cmd_bounds,
}


def main(argv=None) -> int:
    _apply_thread_cap()
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NotOdnError as exc:
        print(f"error: input data is not nonnegatively correlated: {exc}",
              file=sys.stderr)
        for i, j, value in exc.pairs[:20]:
            print(f"  columns ({i}, {j}): correlation {value:.6g}", file=sys.stderr)
        return 2
    except OdnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

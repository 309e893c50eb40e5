"""The `biuni` command line.

Data goes to stdout (JSON, or CSV with `--csv`), diagnostics to stderr.
Exit codes: 0 on success, 1 on bad input or I/O errors, 2 when a search or
numerical routine does not converge.
"""

import argparse
import json
import logging
import sys

import numpy as np
from typing_extensions import Any, Callable, List, Optional

from . import api
from .errors import ConvergenceError, SearchFailedError
from .experiments import BenchConfig, run_bench
from .formatters import bench_csv, census_csv, ensure_dir, region_grid_csv, write_text
from .fourier import census
from .io import to_jsonable, write_json
from .linalg import UnitaryMatrix
from .manifold import EPreset
from .search import SearchConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2

# Factorizations must rebuild the input to this accuracy to exit 0.
FACTOR_TOLERANCE = 1e-8


def _add_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("matrix", nargs="?", help="matrix file in the JSON matrix schema")
    parser.add_argument("--fourier", type=int, metavar="N", help="use the Fourier matrix F_N")
    parser.add_argument("--haar", type=int, metavar="N", help="use a Haar random U(N) drawn with --seed")


def _source(args: argparse.Namespace) -> UnitaryMatrix:
    return api.load_source(path=args.matrix, fourier=args.fourier, haar=args.haar, seed=args.seed)


def _optional_source(args: argparse.Namespace) -> Optional[UnitaryMatrix]:
    if args.matrix is None and args.fourier is None and args.haar is None:
        return None
    return _source(args)


def _print_json(payload: Any) -> None:
    print(json.dumps(payload, indent=2))


def _artifact(args: argparse.Namespace, name: str) -> Optional[str]:
    if args.out_dir is None:
        return None
    return f"{ensure_dir(args.out_dir)}/{name}"


def _cmd_search(args: argparse.Namespace) -> int:
    matrix = _source(args)
    cfg = SearchConfig(
        delta=args.delta,
        max_iters=args.iters,
        max_starts=args.starts,
        seed=args.seed,
        projection=args.projection,
        workers=args.workers,
    )
    start = None if args.start_vector is None else np.ones(matrix.n)
    result = api.search_vector(matrix, cfg, start_vector=start)
    _print_json(to_jsonable(result) if args.json else result.summary())
    if (path := _artifact(args, "search.json")) is not None:
        write_json(result, path)
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = BenchConfig(
        dims=tuple(args.dims),
        matrices_per_dim=args.matrices,
        delta=args.delta,
        max_starts=args.starts,
        max_iters=args.iters,
        seed=args.seed,
        workers=args.workers,
    )
    report = run_bench(cfg)
    if args.csv:
        print(bench_csv(report), end="")
    else:
        _print_json(to_jsonable(report) if args.json else report.summary())
    if (path := _artifact(args, "bench.json")) is not None:
        write_json(report, path)
        write_text(bench_csv(report), path[: -len(".json")] + ".csv")
    return EXIT_OK


def _cmd_census(args: argparse.Namespace) -> int:
    cfg = SearchConfig(
        delta=args.delta,
        max_iters=args.iters,
        max_starts=args.starts,
        seed=args.seed,
        workers=args.workers,
    )
    result = census(args.n, cfg, tau=args.tau)
    if args.csv:
        print(census_csv(result), end="")
    else:
        _print_json(to_jsonable(result) if args.json else result.summary())
    if (path := _artifact(args, f"census_{args.n}.json")) is not None:
        write_json(result, path)
        write_text(census_csv(result), path[: -len(".json")] + ".csv")
    return EXIT_OK


def _cmd_factor(args: argparse.Namespace) -> int:
    matrix = _source(args)
    cfg = SearchConfig(
        delta=args.delta,
        max_iters=args.iters,
        max_starts=args.starts,
        seed=args.seed,
        workers=args.workers,
    )
    outcome = api.factor(matrix, args.mode, cfg)
    payload = {
        "mode": outcome.mode,
        "record": to_jsonable(outcome.record),
        "reconstruction_error": outcome.reconstruction_error,
    }
    if not args.json:
        payload.pop("record")
    _print_json(payload)
    if (path := _artifact(args, f"factor_{args.mode}.json")) is not None:
        write_json(
            {"mode": outcome.mode, "record": outcome.record, "reconstruction_error": outcome.reconstruction_error},
            path,
        )
    if outcome.reconstruction_error > FACTOR_TOLERANCE:
        logger.error(f"Reconstruction error {outcome.reconstruction_error:.3e} exceeds {FACTOR_TOLERANCE}")
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _cmd_regions(args: argparse.Namespace) -> int:
    preset: Any = "abs"
    matrix: Optional[UnitaryMatrix] = None
    if args.e_preset is not None:
        preset = EPreset(*args.e_preset)
    else:
        matrix = _source(args)
    grid, clusters = api.regions(
        matrix, args.resolution, preset, out_dir=args.out_dir, prefix=args.prefix
    )
    if args.csv:
        print(region_grid_csv(grid), end="")
    else:
        _print_json(
            {
                "resolution": grid.resolution,
                "preset": grid.preset,
                "regions": len(grid.values),
                "covered": grid.covered,
                "coverage": [float(np.mean(mask)) for mask in grid.values],
                "triple_clusters": clusters,
            }
        )
    return EXIT_OK


def _cmd_diag(args: argparse.Namespace) -> int:
    matrix = _optional_source(args)
    report = api.diagnose(args.mode, matrix=matrix, n=args.n, tol=args.tol)
    _print_json(to_jsonable(report))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biuni",
        description="Search, factorize and classify biunimodular vectors of unitary matrices.",
    )
    parser.add_argument("--seed", type=int, default=0, help="root seed (default: 0)")
    parser.add_argument("--json", action="store_true", help="print full records instead of summaries")
    parser.add_argument("--csv", action="store_true", help="print CSV where the command has a table")
    parser.add_argument("--workers", type=int, default=None, help="worker threads (capped by BIUNI_WORKERS)")
    parser.add_argument("--out-dir", default=None, help="directory or fsspec URL for artifacts")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")
    verbosity.add_argument("--verbose", action="store_true", help="debug output on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    search = commands.add_parser("search", help="find a biunimodular vector")
    _add_source(search)
    search.add_argument("--delta", type=float, default=1e-10)
    search.add_argument("--starts", type=int, default=1_000)
    search.add_argument("--iters", type=int, default=10_000)
    search.add_argument("--start-vector", choices=["ones"], default=None, help="single run from this vector")
    search.add_argument("--projection", choices=["sign", "sign1"], default="sign")
    search.set_defaults(handler=_cmd_search)

    bench = commands.add_parser("bench", help="count the starts needed on Haar random matrices")
    bench.add_argument("--dims", type=int, nargs="+", default=[3, 5, 10, 25])
    bench.add_argument("--matrices", type=int, default=100, help="matrices per dimension")
    bench.add_argument("--delta", type=float, default=1e-10)
    bench.add_argument("--starts", type=int, default=1_000)
    bench.add_argument("--iters", type=int, default=10_000)
    bench.set_defaults(handler=_cmd_bench)

    orbits = commands.add_parser("census", help="orbits of biunimodular vectors of F_n")
    orbits.add_argument("n", type=int)
    orbits.add_argument("--delta", type=float, default=1e-7)
    orbits.add_argument("--tau", type=float, default=1e-5)
    orbits.add_argument("--starts", type=int, default=1_000)
    orbits.add_argument("--iters", type=int, default=30_000)
    orbits.set_defaults(handler=_cmd_census)

    factor = commands.add_parser("factor", help="decompose a unitary matrix")
    _add_source(factor)
    factor.add_argument("--mode", choices=list(api.FACTOR_MODES), required=True)
    factor.add_argument("--delta", type=float, default=1e-10)
    factor.add_argument("--starts", type=int, default=1_000)
    factor.add_argument("--iters", type=int, default=10_000)
    factor.set_defaults(handler=_cmd_factor)

    regions = commands.add_parser("regions", help="region grid of a 3x3 unitary")
    _add_source(regions)
    regions.add_argument("--resolution", type=int, default=512)
    regions.add_argument("--e-preset", type=float, nargs=2, metavar=("S", "T"), default=None)
    regions.add_argument("--prefix", default="regions", help="artifact file prefix")
    regions.set_defaults(handler=_cmd_regions)

    diag = commands.add_parser("diag", help="rank and phasing diagnostics")
    diag.add_argument("mode", choices=list(api.DIAG_MODES))
    _add_source(diag)
    diag.add_argument("--n", type=int, default=None, help="size of the default matrix")
    diag.add_argument("--tol", type=float, default=1e-9)
    diag.set_defaults(handler=_cmd_diag)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.WARNING if args.quiet else logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except (SearchFailedError, ConvergenceError) as ex:
        logger.error(str(ex))
        return EXIT_NO_CONVERGENCE
    except (ValueError, OSError) as ex:
        logger.error(f"{type(ex).__name__}: {ex}")
        return EXIT_INPUT

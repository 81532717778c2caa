# Copyright 2024 The lltkde Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
Command line interface.

Subcommands: estimate, lscv-scan, bench, asymptotics, sample. Exit codes:
0 success, 1 usage or parameter error, 2 data error, 3 numerical failure.
"""
import os
import sys
import json
import hashlib
import logging
import argparse
from dataclasses import dataclass, field, asdict
import numpy as np
import pandas as pd
from lltkde._version import __version__
from lltkde.asymptotics import asymptotic_table
from lltkde.bench import Benchmark, emit_tables
from lltkde.estimators import get_estimator, LLTKDE, NaiveTKDE
from lltkde.genf import get_density
from lltkde.lscv import lscv_scan, smoothing_candidates
from lltkde.transforms import ProbexTransformation
from lltkde.exceptions import (
    LLTKDEParameterError,
    LLTKDEDataError,
    LLTKDENumericalError)

logger = logging.getLogger(__name__)

EXIT_PARAMETER = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

@dataclass
class Sample:
    """
    A cleaned sample and the bookkeeping of how it was obtained.

    Attributes
    ----------
    values : ndarray
        positive observations, divided by `scale`

    scale : float
        the observations were divided by this factor (1.0 if not rescaled)

    column : str
        the column the values were read from

    n_read : int
        rows read

    n_missing : int
        blank or missing cells dropped

    n_dropped : int
        nonpositive values dropped
    """
    values: np.ndarray
    scale: float = 1.
    column: str = None
    n_read: int = 0
    n_missing: int = 0
    n_dropped: int = 0

@dataclass
class RunManifest:
    """
    Everything needed to reproduce a command's output files.
    """
    command: str
    config: dict
    input_digest: str = None
    version: str = __version__
    seed: int = None
    outputs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def write(self, path: str):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, default=str)

def file_digest(path: str) -> str:
    """
    Return the sha256 hex digest of a file.
    """
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()

def _is_number(value) -> bool:
    try:
        float(value)
    except (TypeError, ValueError):
        return False
    return True

def ingest(
    path: str,
    column: str = None,
    rescale: bool = False,
    drop_nonpositive: bool = False
    ) -> Sample:
    """
    Read one column of a CSV file as a positive sample.

    Missing cells are dropped. The file has a header row if its first cell
    is not a number.

    Parameters
    ----------
    path : str, required
        CSV file

    column : str, optional
        column name, or zero-based position; defaults to the first column

    rescale : bool
        divide the values by their mean (default False)

    drop_nonpositive : bool
        drop values <= 0 instead of failing (default False)

    Returns
    -------
    Sample
    """
    if not os.path.exists(path):
        raise LLTKDEDataError("input file {0} does not exist".format(path))
    raw = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=False)
    if raw.empty:
        raise LLTKDEDataError("input file {0} is empty".format(path))
    has_header = not _is_number(raw.iat[0, 0])
    if has_header:
        raw.columns = [str(name) for name in raw.iloc[0]]
        raw = raw.iloc[1:].reset_index(drop=True)
    else:
        raw.columns = [str(i) for i in range(raw.shape[1])]

    if column is None:
        column = raw.columns[0]
    elif column not in raw.columns:
        if str(column).isdigit() and int(column) < raw.shape[1]:
            column = raw.columns[int(column)]
        else:
            raise LLTKDEDataError(
                "column {0} not found in {1}, columns are {2}".format(
                    column, path, ", ".join(raw.columns)))

    cells = raw[column].str.strip()
    missing = cells.isna() | (cells == "")
    values = pd.to_numeric(cells[~missing], errors="coerce")
    unparsed = values.isna()
    if unparsed.any():
        rows = (values.index[unparsed] + 1 + has_header).tolist()
        raise LLTKDEDataError(
            "column {0} has non-numeric values in rows {1}".format(column, rows[:10]))

    nonpositive = values <= 0
    n_dropped = int(nonpositive.sum())
    if n_dropped and not drop_nonpositive:
        rows = (values.index[nonpositive] + 1 + has_header).tolist()
        raise LLTKDEDataError(
            "{0} nonpositive values in column {1} (rows {2}); pass "
            "--drop-nonpositive to drop them".format(n_dropped, column, rows[:10]))
    values = values[~nonpositive].to_numpy(dtype=float)
    if not len(values):
        raise LLTKDEDataError("no positive values left in column {0}".format(column))

    scale = float(values.mean()) if rescale else 1.
    return Sample(
        values=values / scale,
        scale=scale,
        column=column,
        n_read=len(raw),
        n_missing=int(missing.sum()),
        n_dropped=n_dropped)

class ArgumentParser(argparse.ArgumentParser):
    """
    Argument parser that exits with the parameter-error code.
    """
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMETER, "{0}: error: {1}\n".format(self.prog, message))

def _auto_or_float(value):
    if value == "auto":
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'auto' or a number, got {0}".format(value))

def _float_list(value):
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated numbers, got {0}".format(value))

def _status(message):
    print(message, file=sys.stderr)

def _write(text: str, out: str, manifest: RunManifest):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w") as f:
        f.write(text)
    manifest.outputs.append(out)
    _status("wrote {0}".format(out))

def _finish(manifest: RunManifest, out: str):
    if out is None:
        return
    path = out + ".manifest.json"
    manifest.outputs.append(path)
    manifest.write(path)

def _config(args) -> dict:
    return {key: value for key, value in vars(args).items() if key != "func"}

def _build_estimator(args):
    estimator_class = get_estimator(args.estimator)
    alpha = None if args.alpha == "auto" else args.alpha
    bandwidth = None if args.h == "auto" else args.h
    kwargs = {"kernel": args.kernel, "bandwidth": bandwidth}
    if issubclass(estimator_class, (LLTKDE, NaiveTKDE)):
        kwargs["transformation"] = args.transformation
    if issubclass(estimator_class, LLTKDE):
        if args.alpha == "auto" and args.h == "auto":
            raise LLTKDEParameterError("--alpha auto and --h auto cannot be combined")
        # --h auto: LSCV over bandwidths instead of nearest-neighbour fractions
        kwargs.update(
            alpha=alpha, alpha_grid=args.alpha_grid, degree=args.degree,
            selection="bandwidth" if args.h == "auto" else None,
            bandwidth_grid=args.h_grid)
    elif any(value is not None for value in (alpha, args.degree, args.alpha_grid, args.h_grid)):
        raise LLTKDEParameterError(
            "--alpha, --alpha-grid, --h-grid and --degree only apply to local likelihood estimators")
    return estimator_class(**kwargs)

def _wants_rescale(args, transformation) -> bool:
    if args.rescale == "auto":
        return transformation is ProbexTransformation
    return args.rescale == "on"

def _ingest(args, transformation) -> Sample:
    sample = ingest(
        args.input,
        column=args.column,
        rescale=_wants_rescale(args, transformation),
        drop_nonpositive=args.drop_nonpositive)
    _status("read {0} rows: {1} missing, {2} nonpositive dropped, n={3}, scale={4:g}".format(
        sample.n_read, sample.n_missing, sample.n_dropped, len(sample.values), sample.scale))
    return sample

def estimate_command(args):
    estimator = _build_estimator(args)
    sample = _ingest(args, getattr(estimator, "transformation", None))
    estimate = estimator.estimate(sample.values)
    _status("{0}: {1}".format(estimator.CODE, estimate.smoothing))
    if sample.scale != 1:
        estimate = estimate.rescaled(sample.scale)

    if args.format == "json":
        text = json.dumps(estimate.to_dict(), indent=2)
    else:
        text = estimate.to_frame().to_csv(index=False)

    config = _config(args)
    config.update(
        smoothing=estimate.smoothing.to_dict() if estimate.smoothing else None,
        scale=sample.scale,
        n=len(sample.values))
    manifest = RunManifest(
        command="estimate", config=config,
        input_digest=file_digest(args.input), seed=args.seed)
    _write(text, args.out, manifest)
    _finish(manifest, args.out)

def lscv_scan_command(args):
    selection = "bandwidth" if args.over == "h" else "alpha"
    estimator = LLTKDE(
        alpha_grid=args.alpha_grid, bandwidth_grid=args.h_grid, selection=selection,
        degree=args.degree or 2, transformation=args.transformation or "probex",
        kernel=args.kernel)
    sample = _ingest(args, estimator.transformation)
    transformed = estimator.transform_sample(sample.values, check_scale=True)
    grid = estimator.alpha_grid if selection == "alpha" else estimator.bandwidth_grid
    scan = lscv_scan(
        transformed,
        smoothing_candidates(transformed, selection, grid),
        degree=estimator.degree,
        kernel=estimator.kernel)
    selected = scan.loc[scan["selected"], "value"].iloc[0]
    _status("selected {0}={1:g}".format(args.over, selected))

    if args.format == "json":
        text = scan.to_json(orient="records", double_precision=15)
    else:
        text = scan.to_csv(index=False)
    manifest = RunManifest(
        command="lscv-scan", config=_config(args),
        input_digest=file_digest(args.input), seed=args.seed)
    _write(text, args.out, manifest)
    _finish(manifest, args.out)

def bench_command(args):
    benchmark = Benchmark.from_json(args.config) if args.config else Benchmark()
    overrides = {
        "replications": args.replications,
        "workers": args.workers,
        "seed": args.seed,
    }
    for name, value in overrides.items():
        if value is not None:
            setattr(benchmark, name, value)
    if args.no_cache:
        benchmark.use_cache = False
    benchmark._validate()

    result = benchmark.run()
    _status(emit_tables(result, "text"))

    manifest = RunManifest(
        command="bench", config=benchmark.config(),
        input_digest=file_digest(args.config) if args.config else None,
        seed=benchmark.seed)
    _write(emit_tables(result, args.format), args.out, manifest)
    if args.out is not None:
        replications_path = args.out + ".replications.csv"
        result.replications.to_csv(replications_path, index=False)
        manifest.outputs.append(replications_path)
    _finish(manifest, args.out)

def asymptotics_command(args):
    density = get_density(args.density)
    x = np.linspace(args.x_min, args.x_max, args.points)
    table = asymptotic_table(
        density, args.transformation or "log", x,
        degree=args.degree or 2, kernel=args.kernel)
    if args.format == "json":
        text = table.to_json(orient="records", double_precision=15)
    else:
        text = table.to_csv(index=False)
    manifest = RunManifest(command="asymptotics", config=_config(args), seed=args.seed)
    _write(text, args.out, manifest)
    _finish(manifest, args.out)

def sample_command(args):
    seed = 0 if args.seed is None else args.seed
    values = get_density(args.density).sample(args.n, seed=seed)
    frame = pd.DataFrame({"x": values})
    if args.format == "json":
        text = frame.to_json(orient="records", double_precision=17)
    else:
        text = frame.to_csv(index=False, float_format="%.17g")
    manifest = RunManifest(command="sample", config=_config(args), seed=seed)
    _write(text, args.out, manifest)
    _finish(manifest, args.out)

def _density_arg(value):
    if value.isdigit():
        return int(value)
    if value.lstrip().startswith("{"):
        try:
            return json.loads(value)
        except ValueError:
            raise argparse.ArgumentTypeError("invalid density parameters {0}".format(value))
    return value

def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="output format")
    common.add_argument(
        "--log-level", default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging level")

    data = ArgumentParser(add_help=False)
    data.add_argument("input", help="CSV file with the observations")
    data.add_argument("--column", default=None, help="column name or position")
    data.add_argument(
        "--rescale", choices=["auto", "on", "off"], default="auto",
        help="divide the data by its mean before estimating (auto: for probex)")
    data.add_argument(
        "--drop-nonpositive", action="store_true", help="drop values <= 0 instead of failing")

    smoothing = ArgumentParser(add_help=False)
    smoothing.add_argument("--transformation", choices=["log", "probex"], default=None)
    smoothing.add_argument("--degree", type=int, choices=[1, 2], default=None)
    smoothing.add_argument("--kernel", choices=["gaussian", "epanechnikov"], default=None)
    smoothing.add_argument(
        "--alpha-grid", type=_float_list, default=None,
        help="comma-separated nearest-neighbour fractions for LSCV")
    smoothing.add_argument(
        "--h-grid", type=_float_list, default=None,
        help="comma-separated transformed-scale bandwidths for LSCV over h")

    parser = ArgumentParser(
        prog="lltkde",
        description="Local likelihood transformation kernel density estimation")
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    estimate = subparsers.add_parser(
        "estimate", parents=[common, data, smoothing], help="estimate a density")
    estimate.add_argument("--estimator", default="ll-pt", help="estimator id (default ll-pt)")
    estimate.add_argument(
        "--alpha", type=_auto_or_float, default=None,
        help="nearest-neighbour fraction, or 'auto' for LSCV")
    estimate.add_argument(
        "--h", type=_auto_or_float, default=None,
        help="bandwidth, or 'auto' for the estimator's rule (LSCV over h for local likelihood)")
    estimate.set_defaults(func=estimate_command)

    scan = subparsers.add_parser(
        "lscv-scan", parents=[common, data, smoothing], help="LSCV score of each candidate")
    scan.add_argument(
        "--over", choices=["alpha", "h"], default="alpha",
        help="scan nearest-neighbour fractions (default) or fixed bandwidths")
    scan.set_defaults(func=lscv_scan_command)

    bench = subparsers.add_parser("bench", parents=[common], help="run a Monte Carlo benchmark")
    bench.add_argument("--config", default=None, help="JSON benchmark config")
    bench.add_argument("--replications", type=int, default=None)
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--no-cache", action="store_true", help="ignore and do not write the cache")
    bench.set_defaults(func=bench_command)

    asymptotics = subparsers.add_parser(
        "asymptotics", parents=[common], help="tabulate asymptotic bias and variance")
    asymptotics.add_argument("--density", type=_density_arg, default="density-1")
    asymptotics.add_argument("--transformation", choices=["log", "probex"], default=None)
    asymptotics.add_argument("--degree", type=int, choices=[0, 1, 2], default=None)
    asymptotics.add_argument("--kernel", choices=["gaussian", "epanechnikov"], default="gaussian")
    asymptotics.add_argument("--x-min", type=float, default=0.1)
    asymptotics.add_argument("--x-max", type=float, default=5.)
    asymptotics.add_argument("--points", type=int, default=50)
    asymptotics.set_defaults(func=asymptotics_command)

    sample = subparsers.add_parser(
        "sample", parents=[common], help="draw a sample from a test density")
    sample.add_argument("--density", type=_density_arg, default="density-1")
    sample.add_argument("--n", type=int, required=True)
    sample.set_defaults(func=sample_command)

    return parser

def main(argv: list = None) -> int:
    """
    Run the command line interface and return the exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    try:
        args.func(args)
    except LLTKDEParameterError as e:
        _status("lltkde: error: {0}".format(e))
        return EXIT_PARAMETER
    except (LLTKDEDataError, OSError) as e:
        _status("lltkde: data error: {0}".format(e))
        return EXIT_DATA
    except LLTKDENumericalError as e:
        _status("lltkde: numerical error: {0}".format(e))
        return EXIT_NUMERICAL
    return 0

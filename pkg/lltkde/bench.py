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
Monte Carlo comparison of density estimators on the generalized F test
densities, scored by the mean integrated absolute relative error (MIARE).
"""
import sys
import json
import time
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Union
import numpy as np
import pandas as pd
from lltkde._cache import Cache
from lltkde._version import __version__
from lltkde.estimators import get_estimator
from lltkde.genf import GeneralizedF, get_density
from lltkde.results import DensityEstimate
from lltkde.exceptions import (
    LLTKDEError,
    LLTKDEParameterError,
    LLTKDEDomainError)

logger = logging.getLogger(__name__)

MIARE_SCALES = ("mean", "sum", "integral")
TABLE_FORMATS = ("csv", "json", "text")

def protocol_grid(density: GeneralizedF, size: int = 1000, start: float = 0.001) -> np.ndarray:
    """
    Return `size` equally spaced points from `start` to the 0.999 quantile
    of the density; with start=None, the points i q/size for i = 1..size.
    """
    upper = density.quantile(0.999)
    if start is None:
        return upper * np.arange(1, size + 1) / size
    return np.linspace(start, upper, size)

def miare(
    estimate: DensityEstimate,
    truth: Union[GeneralizedF, str, dict],
    tail_quantile: float = None,
    scale: str = "mean"
    ) -> float:
    """
    Return the integrated absolute relative error of one estimate, built
    from the terms |f_hat(x_i) - f(x_i)| / f(x_i) over the grid points in
    the region.

    Parameters
    ----------
    estimate : DensityEstimate, required
        the estimate on the protocol grid

    truth : GeneralizedF or density id, required
        the true density

    tail_quantile : float, optional
        restrict the error to grid points above this quantile of the truth
        (default None: the whole grid)

    scale : str
        "mean" (default): the average term over the region, as if the
        region carried its own grid of equally spaced points; "sum": the
        plain sum over the region; "integral": the sum times the grid
        spacing

    Returns
    -------
    float
    """
    if scale not in MIARE_SCALES:
        raise LLTKDEParameterError(
            "MIARE scale must be one of {0}, got {1}".format(", ".join(MIARE_SCALES), scale))
    truth = get_density(truth)
    grid = np.asarray(estimate.grid, dtype=float)
    values = np.asarray(estimate.values, dtype=float)
    region = np.ones(len(grid), dtype=bool)
    if tail_quantile is not None:
        region = grid > truth.quantile(tail_quantile)
    f = truth.pdf(grid[region])
    if np.any(f <= 0):
        raise LLTKDEDomainError(
            "the true density is 0 at x={0}; relative errors are undefined there".format(
                grid[region][f <= 0][0]))
    errors = np.abs(values[region] - f) / f
    if scale == "mean":
        return float(errors.mean()) if len(errors) else 0.
    total = float(errors.sum())
    if scale == "integral" and len(grid) > 1:
        total *= float(np.mean(np.diff(grid)))
    return total

@dataclass
class BenchResult:
    """
    Benchmark results.

    Attributes
    ----------
    summary : DataFrame
        indexed by (Density, N, Estimator), columns MIARE, MIARE_SE,
        TailMIARE, TailMIARE_SE, Replications (successful) and Failures

    replications : DataFrame
        one row per (Density, N, Estimator, Replication) with the MIARE,
        TailMIARE, the smoothing used and the error message of failures

    metadata : dict
        the benchmark config, the MIARE scale and the library version
    """
    summary: pd.DataFrame
    replications: pd.DataFrame
    metadata: dict = field(default_factory=dict)

class Benchmark:
    """
    Monte Carlo benchmark of density estimators.

    For every density, sample size and replication a sample is drawn from
    a random stream seeded by (SEED, density index, size index, replication),
    so the samples do not depend on the estimators or on the number of
    workers. Every estimator is fitted to the same sample, evaluated on the
    protocol grid and scored by the MIARE over the grid and over the tail
    beyond the TAIL_QUANTILE quantile. Estimator failures are logged and
    counted without stopping the run.

    Class attributes are defaults which can be overridden by passing the
    corresponding lowercase argument to __init__ or keys of a JSON config
    to `from_json`.

    Parameters
    ----------
    DENSITIES : list
        density ids ("density-1".."density-7"), integers 1..7 or dicts of
        generalized F parameters

    ESTIMATORS : list of str
        estimator ids

    SAMPLE_SIZES : list of int
        sample sizes

    REPLICATIONS : int
        Monte Carlo replications per density and sample size (default 100)

    GRID_SIZE : int
        protocol grid size (default 1000)

    GRID_START : float or None
        first protocol grid point (default 0.001); None uses i q/GRID_SIZE

    TAIL_QUANTILE : float
        the tail MIARE covers x above this quantile (default 0.80)

    SEED : int
        master seed (default 0)

    MIARE_SCALE : str
        "mean" (default), "sum" or "integral", see `miare`

    WORKERS : int
        worker processes (default 1: run in process)

    USE_CACHE : bool
        cache finished replications so an interrupted run resumes
        (default True)

    Examples
    --------
    Compare the log and probex estimators on the exponential density:

    >>> class ExponentialBench(Benchmark):
    >>>     DENSITIES = ["density-1"]
    >>>     ESTIMATORS = ["ll-lt", "ll-pt"]
    >>>     SAMPLE_SIZES = [100, 500]
    >>>
    >>> result = ExponentialBench().run()
    >>> print(emit_tables(result, "text"))
    """
    DENSITIES: list = ["density-1"]
    ESTIMATORS: list = ["naive-lt", "ll-lt", "ll-pt", "reflect", "can"]
    SAMPLE_SIZES: list = [100]
    REPLICATIONS: int = 100
    GRID_SIZE: int = 1000
    GRID_START: float = 0.001
    TAIL_QUANTILE: float = 0.80
    SEED: int = 0
    MIARE_SCALE: str = "mean"
    WORKERS: int = 1
    USE_CACHE: bool = True

    _UNSET = object()

    def __init__(
        self,
        densities: list = None,
        estimators: list = None,
        sample_sizes: list = None,
        replications: int = None,
        grid_size: int = None,
        grid_start: float = _UNSET,
        tail_quantile: float = None,
        seed: int = None,
        miare_scale: str = None,
        workers: int = None,
        use_cache: bool = None
        ):
        self.densities = list(densities or self.DENSITIES)
        self.estimators = list(estimators or self.ESTIMATORS)
        self.sample_sizes = [int(n) for n in (sample_sizes or self.SAMPLE_SIZES)]
        self.replications = int(self.REPLICATIONS if replications is None else replications)
        self.grid_size = int(self.GRID_SIZE if grid_size is None else grid_size)
        self.grid_start = self.GRID_START if grid_start is self._UNSET else grid_start
        self.tail_quantile = self.TAIL_QUANTILE if tail_quantile is None else tail_quantile
        self.seed = self.SEED if seed is None else int(seed)
        self.miare_scale = miare_scale or self.MIARE_SCALE
        self.workers = int(self.WORKERS if workers is None else workers)
        self.use_cache = self.USE_CACHE if use_cache is None else use_cache
        self._validate()

    def _validate(self):
        if self.replications < 1:
            raise LLTKDEParameterError(
                "replications must be at least 1, got {0}".format(self.replications))
        if self.grid_size < 2:
            raise LLTKDEParameterError(
                "grid size must be at least 2, got {0}".format(self.grid_size))
        if not 0 < self.tail_quantile < 1:
            raise LLTKDEParameterError(
                "tail quantile must be in (0, 1), got {0}".format(self.tail_quantile))
        if self.grid_start is not None and not self.grid_start > 0:
            raise LLTKDEParameterError(
                "grid start must be positive, got {0}".format(self.grid_start))
        if self.seed < 0:
            raise LLTKDEParameterError("seed must be nonnegative, got {0}".format(self.seed))
        if self.miare_scale not in MIARE_SCALES:
            raise LLTKDEParameterError(
                "MIARE scale must be one of {0}, got {1}".format(
                    ", ".join(MIARE_SCALES), self.miare_scale))
        if self.workers < 1:
            raise LLTKDEParameterError("workers must be at least 1, got {0}".format(self.workers))
        if any(n < 1 for n in self.sample_sizes):
            raise LLTKDEParameterError("sample sizes must be positive")
        for density in self.densities:
            get_density(density)
        for estimator in self.estimators:
            get_estimator(estimator)

    @classmethod
    def from_dict(cls, config: dict) -> "Benchmark":
        """
        Return a Benchmark from a dict whose keys are the lowercase
        attribute names.
        """
        allowed = {
            "densities", "estimators", "sample_sizes", "replications", "grid_size",
            "grid_start", "tail_quantile", "seed", "miare_scale", "workers", "use_cache"}
        unknown = set(config) - allowed
        if unknown:
            raise LLTKDEParameterError(
                "unknown benchmark config keys: {0}".format(", ".join(sorted(unknown))))
        return cls(**config)

    @classmethod
    def from_json(cls, path: str) -> "Benchmark":
        """
        Return a Benchmark from a JSON config file.
        """
        with open(path) as f:
            try:
                config = json.load(f)
            except ValueError as e:
                raise LLTKDEParameterError(
                    "cannot parse benchmark config {0}: {1}".format(path, e))
        if not isinstance(config, dict):
            raise LLTKDEParameterError("benchmark config must be a JSON object")
        return cls.from_dict(config)

    def config(self) -> dict:
        """
        Return the configuration as a JSON-serializable dict. Worker count
        and caching are excluded: they do not affect the results.
        """
        return {
            "densities": [_density_config(density) for density in self.densities],
            "estimators": [get_estimator(estimator).CODE for estimator in self.estimators],
            "sample_sizes": self.sample_sizes,
            "replications": self.replications,
            "grid_size": self.grid_size,
            "grid_start": self.grid_start,
            "tail_quantile": self.tail_quantile,
            "seed": self.seed,
            "miare_scale": self.miare_scale,
        }

    def sample_seed(self, density_index: int, size_index: int, replication: int) -> np.random.SeedSequence:
        return np.random.SeedSequence([self.seed, density_index, size_index, replication])

    def work_units(self) -> list:
        return [
            (density_index, size_index, replication)
            for density_index in range(len(self.densities))
            for size_index in range(len(self.sample_sizes))
            for replication in range(self.replications)]

    def run_replication(self, density_index: int, size_index: int, replication: int) -> list:
        """
        Fit every estimator to one sample and return one result row per
        estimator.
        """
        density = get_density(self.densities[density_index])
        n = self.sample_sizes[size_index]
        rng = np.random.default_rng(self.sample_seed(density_index, size_index, replication))
        sample = density.sample(n, seed=rng)
        grid = protocol_grid(density, self.grid_size, self.grid_start)

        rows = []
        for estimator_id in self.estimators:
            estimator_class = get_estimator(estimator_id)
            row = {
                "Density": _density_label(density),
                "N": n,
                "Estimator": estimator_class.CODE,
                "Replication": replication,
                "MIARE": np.nan,
                "TailMIARE": np.nan,
                "Smoothing": None,
                "Error": None,
            }
            try:
                estimate = estimator_class().estimate(sample, grid)
                row["MIARE"] = miare(estimate, density, scale=self.miare_scale)
                row["TailMIARE"] = miare(
                    estimate, density, tail_quantile=self.tail_quantile, scale=self.miare_scale)
                row["Smoothing"] = str(estimate.smoothing)
            except (LLTKDEError, ValueError, FloatingPointError, np.linalg.LinAlgError) as e:
                logger.warning(
                    "{0} failed on {1}, n={2}, replication {3}: {4}".format(
                        estimator_class.CODE, row["Density"], n, replication, e))
                row["Error"] = "{0}: {1}".format(e.__class__.__name__, e)
            rows.append(row)
        return rows

    def _cached_replication(self, unit):
        if not self.use_cache:
            return self.run_replication(*unit)
        key = [self.config(), __version__] + list(unit)
        rows = Cache.get(key, prefix="bench", unless_file_modified=_watched_modules())
        if rows is None:
            rows = self.run_replication(*unit)
            Cache.set(key, rows, prefix="bench")
        return rows

    def run(self) -> BenchResult:
        """
        Run the benchmark.

        Returns
        -------
        BenchResult
        """
        units = self.work_units()
        started = time.time()
        logger.info("running {0} replications on {1} worker(s)".format(len(units), self.workers))
        if self.workers > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                results = list(executor.map(
                    _run_work_unit, [(self, unit) for unit in units],
                    chunksize=max(1, len(units) // (4 * self.workers))))
        else:
            results = [self._cached_replication(unit) for unit in units]

        rows = []
        for unit, unit_rows in zip(units, results):
            rows.extend(unit_rows)
            density_index, size_index, replication = unit
            if replication == self.replications - 1:
                logger.info("finished {0}, n={1}".format(
                    unit_rows[0]["Density"], self.sample_sizes[size_index]))
        logger.info("benchmark finished in {0:.1f}s".format(time.time() - started))

        replications = pd.DataFrame(rows)
        return BenchResult(
            summary=summarize(replications),
            replications=replications,
            metadata={
                "config": self.config(),
                "miare_scale": self.miare_scale,
                "version": __version__,
            })

def _run_work_unit(args):
    """
    Run one replication. Module level so ProcessPoolExecutor can pickle it.
    """
    benchmark, unit = args
    return benchmark._cached_replication(unit)

def _watched_modules() -> list:
    from lltkde import loclik, lscv, bandwidth
    from lltkde.estimators import base, tkde, gamma, boundary
    return [sys.modules[__name__], loclik, lscv, bandwidth, base, tkde, gamma, boundary]

def _density_config(density):
    if isinstance(density, GeneralizedF):
        return density.CODE or density.to_dict()
    return density

def _density_label(density: GeneralizedF) -> str:
    if density.CODE:
        return density.CODE
    return "genf(m1={m1:g}, m2={m2:g}, s={s:g}, beta={beta:.4g})".format(**density.to_dict())

def summarize(replications: pd.DataFrame) -> pd.DataFrame:
    """
    Aggregate per-replication results into means and standard errors per
    (Density, N, Estimator), failures excluded from the statistics.
    """
    def standard_error(values):
        values = values.dropna()
        if len(values) < 2:
            return 0. if len(values) else np.nan
        return values.std(ddof=1) / np.sqrt(len(values))

    grouped = replications.groupby(["Density", "N", "Estimator"], sort=False)
    summary = pd.DataFrame({
        "MIARE": grouped["MIARE"].mean(),
        "MIARE_SE": grouped["MIARE"].agg(standard_error),
        "TailMIARE": grouped["TailMIARE"].mean(),
        "TailMIARE_SE": grouped["TailMIARE"].agg(standard_error),
        "Replications": grouped["MIARE"].count(),
        "Failures": grouped["Error"].count(),
    })
    return summary

def run_benchmark(config: Union[Benchmark, dict, str]) -> BenchResult:
    """
    Run a benchmark given as a Benchmark, a config dict or the path of a
    JSON config file.
    """
    if isinstance(config, dict):
        config = Benchmark.from_dict(config)
    elif isinstance(config, str):
        config = Benchmark.from_json(config)
    return config.run()

def mark_minimum(summary: pd.DataFrame, column: str = "MIARE") -> pd.Series:
    """
    Flag, within each (Density, N) row, the smallest value of `column`
    and every value whose 2-standard-error interval overlaps that of the
    smallest.
    """
    se_column = column + "_SE"
    marks = pd.Series(False, index=summary.index)
    for _, block in summary.groupby(level=["Density", "N"], sort=False):
        values = block[column]
        if values.notna().sum() == 0:
            continue
        best = values.idxmin()
        threshold = values[best] + 2 * block.loc[best, se_column]
        marks.loc[block.index] = ((values - 2 * block[se_column]) <= threshold).values
    return marks

def _text_table(summary: pd.DataFrame, column: str) -> str:
    marks = mark_minimum(summary, column)
    cells = [
        "-" if pd.isnull(value) else "{0:.3f}{1}".format(value, "*" if marked else "")
        for value, marked in zip(summary[column], marks)]
    table = pd.Series(cells, index=summary.index).unstack("Estimator")
    estimators = list(dict.fromkeys(summary.index.get_level_values("Estimator")))
    return table[estimators].to_string()

def emit_tables(result: BenchResult, format: str = "csv") -> str:
    """
    Serialize the benchmark summary.

    Parameters
    ----------
    result : BenchResult, required
        the benchmark result

    format : str
        "csv" (default), "json" (summary records plus metadata) or "text"
        (MIARE and tail MIARE tables with the best estimator of each row,
        and those not significantly worse, marked *)

    Returns
    -------
    str
    """
    if format not in TABLE_FORMATS:
        raise LLTKDEParameterError(
            "format must be one of {0}, got {1}".format(", ".join(TABLE_FORMATS), format))
    summary = result.summary
    if summary.empty:
        raise LLTKDEParameterError("benchmark result is empty")
    if format == "csv":
        return summary.to_csv()
    if format == "json":
        records = json.loads(summary.reset_index().to_json(orient="records", double_precision=15))
        return json.dumps({"metadata": result.metadata, "summary": records}, indent=2)
    return "MIARE\n{0}\n\nMIARE in the tail (x > q{1:g})\n{2}\n".format(
        _text_table(summary, "MIARE"),
        result.metadata.get("config", {}).get("tail_quantile", Benchmark.TAIL_QUANTILE),
        _text_table(summary, "TailMIARE"))

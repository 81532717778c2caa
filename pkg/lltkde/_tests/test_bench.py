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

# To run: python3 -m unittest discover -s lltkde/_tests/ -p test_*.py -t . -v

import io
import os
import json
import unittest
from unittest.mock import patch
import tempfile
import numpy as np
import pandas as pd
from lltkde.bench import (
    Benchmark,
    BenchResult,
    protocol_grid,
    miare,
    summarize,
    mark_minimum,
    emit_tables,
    run_benchmark)
from lltkde.estimators import DensityEstimator
from lltkde.genf import get_density
from lltkde.results import DensityEstimate
from lltkde.exceptions import (
    LLTKDEParameterError,
    LLTKDEDomainError,
    LLTKDENumericalError)

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

class AlwaysFails(DensityEstimator):
    """
    Estimator whose smoothing selection always fails.
    """
    CODE = "always-fails"

    def select_smoothing(self, sample):
        raise LLTKDENumericalError("no smoothing for you")

def small_benchmark(**kwargs):
    config = dict(
        densities=["density-1"],
        estimators=["naive-lt", "reflect"],
        sample_sizes=[40],
        replications=3,
        grid_size=50,
        use_cache=False)
    config.update(kwargs)
    return Benchmark(**config)

class MIARETestCase(unittest.TestCase):

    def setUp(self):
        self.density = get_density(1)
        self.grid = protocol_grid(self.density, size=100)

    def estimate(self, values):
        return DensityEstimate(grid=self.grid, values=values, estimator="test")

    def test_protocol_grid(self):
        """
        Tests that the protocol grid runs from 0.001 to the 0.999 quantile,
        or from q/size with start=None.
        """
        upper = -np.log(0.001)
        self.assertEqual(self.grid[0], 0.001)
        self.assertAlmostEqual(self.grid[-1], upper, places=8)
        grid = protocol_grid(self.density, size=4, start=None)
        np.testing.assert_allclose(grid, upper * np.array([0.25, 0.5, 0.75, 1.]))

    def test_exact_estimate_scores_zero(self):
        """
        Tests that the true density scores 0.
        """
        self.assertEqual(miare(self.estimate(self.density.pdf(self.grid)), self.density), 0.)

    def test_doubled_estimate(self):
        """
        Tests that twice the true density scores 1 on the mean scale, the
        number of grid points as a sum, and that times the spacing as an
        integral.
        """
        estimate = self.estimate(2 * self.density.pdf(self.grid))
        self.assertAlmostEqual(miare(estimate, self.density), 1.)
        self.assertAlmostEqual(miare(estimate, self.density, scale="sum"), 100.)
        self.assertAlmostEqual(
            miare(estimate, self.density, scale="integral"),
            100 * (self.grid[1] - self.grid[0]))

    def test_tail_restriction(self):
        """
        Tests that the tail MIARE only counts points above the quantile:
        its sum is at most the full sum and its mean is the average over
        the tail points.
        """
        estimate = self.estimate(2 * self.density.pdf(self.grid))
        count = int((self.grid > np.log(5)).sum())
        self.assertAlmostEqual(
            miare(estimate, "density-1", tail_quantile=0.8, scale="sum"), count)
        self.assertAlmostEqual(miare(estimate, "density-1", tail_quantile=0.8), 1.)

        relative = np.where(self.grid > np.log(5), 0.5, 0.1)
        noisy = self.estimate(self.density.pdf(self.grid) * (1 + relative))
        self.assertAlmostEqual(miare(noisy, self.density, tail_quantile=0.8), 0.5)
        self.assertLessEqual(
            miare(noisy, self.density, tail_quantile=0.8, scale="sum"),
            miare(noisy, self.density, scale="sum"))

    def test_zero_truth_is_a_domain_error(self):
        """
        Tests that a grid point where the true density is 0 is rejected.
        """
        estimate = DensityEstimate(grid=np.array([0., 1.]), values=np.ones(2), estimator="test")
        with self.assertRaises(LLTKDEDomainError):
            miare(estimate, "density-3")

    def test_unknown_scale(self):
        """
        Tests that only the mean, sum and integral scales exist.
        """
        with self.assertRaises(LLTKDEParameterError):
            miare(self.estimate(self.density.pdf(self.grid)), self.density, scale="median")

class BenchmarkTestCase(unittest.TestCase):

    def test_run(self):
        """
        Tests the shape of the results of a small benchmark.
        """
        result = small_benchmark().run()
        self.assertIsInstance(result, BenchResult)
        self.assertEqual(len(result.replications), 6)
        self.assertListEqual(
            list(result.replications.columns),
            ["Density", "N", "Estimator", "Replication", "MIARE", "TailMIARE", "Smoothing", "Error"])
        self.assertListEqual(
            result.summary.index.tolist(),
            [("density-1", 40, "naive-lt"), ("density-1", 40, "reflect")])
        self.assertListEqual(result.summary["Replications"].tolist(), [3, 3])
        self.assertListEqual(result.summary["Failures"].tolist(), [0, 0])
        self.assertTrue((result.summary["MIARE"] > 0).all())
        self.assertTrue((result.summary["TailMIARE"] > 0).all())
        self.assertEqual(result.metadata["miare_scale"], "mean")
        self.assertEqual(result.metadata["config"]["replications"], 3)

    def test_deterministic(self):
        """
        Tests that equal configs give identical results, and that the
        samples do not depend on which other estimators run.
        """
        first = small_benchmark().run()
        second = small_benchmark().run()
        pd.testing.assert_frame_equal(first.replications, second.replications)

        alone = small_benchmark(estimators=["reflect"]).run()
        np.testing.assert_array_equal(
            alone.replications["MIARE"].values,
            first.replications.loc[first.replications["Estimator"] == "reflect", "MIARE"].values)

    def test_seed_changes_samples(self):
        """
        Tests that a different master seed gives different results.
        """
        first = small_benchmark(replications=1).run()
        second = small_benchmark(replications=1, seed=1).run()
        self.assertNotEqual(first.replications["MIARE"].iloc[0], second.replications["MIARE"].iloc[0])

    def test_workers_give_identical_results(self):
        """
        Tests that a run on worker processes gives the same results as an
        in-process run.
        """
        serial = small_benchmark(replications=2).run()
        parallel = small_benchmark(replications=2, workers=2).run()
        pd.testing.assert_frame_equal(serial.replications, parallel.replications)

    def test_failures_are_counted(self):
        """
        Tests that a failing estimator is logged and counted without
        stopping the run.
        """
        with self.assertLogs("lltkde.bench", level="WARNING") as cm:
            result = small_benchmark(estimators=["can", AlwaysFails]).run()

        self.assertIn("always-fails failed on density-1", cm.output[0])
        failures = result.summary.xs("always-fails", level="Estimator")
        self.assertListEqual(failures["Failures"].tolist(), [3])
        self.assertListEqual(failures["Replications"].tolist(), [0])
        self.assertTrue(np.isnan(failures["MIARE_SE"].iloc[0]))
        errors = result.replications.loc[result.replications["Estimator"] == "always-fails", "Error"]
        self.assertTrue(errors.str.contains("LLTKDENumericalError: no smoothing for you").all())

    def test_cache_resumes_run(self):
        """
        Tests that cached replications are reused instead of recomputed.
        """
        with tempfile.TemporaryDirectory() as tmpdir:
            with patch("lltkde._cache.TMP_DIR", tmpdir):
                first = small_benchmark(use_cache=True, replications=2).run()
                with patch.object(Benchmark, "run_replication", side_effect=AssertionError("recomputed")):
                    second = small_benchmark(use_cache=True, replications=2).run()

        pd.testing.assert_frame_equal(first.replications, second.replications)

    def test_config_excludes_execution_settings(self):
        """
        Tests that workers and caching are not part of the config.
        """
        config = small_benchmark(workers=2).config()
        self.assertNotIn("workers", config)
        self.assertNotIn("use_cache", config)
        self.assertListEqual(config["estimators"], ["naive-lt", "reflect"])
        self.assertEqual(config["grid_start"], 0.001)
        self.assertIsNone(small_benchmark(grid_start=None).config()["grid_start"])

    def test_validation(self):
        """
        Tests that bad settings and unknown config keys are rejected.
        """
        for kwargs in ({"replications": 0}, {"tail_quantile": 1.}, {"grid_start": 0.},
                       {"miare_scale": "median"}, {"workers": 0}, {"estimators": ["kde"]},
                       {"densities": ["density-9"]}, {"sample_sizes": [0]}):
            with self.assertRaises(LLTKDEParameterError, msg=str(kwargs)):
                small_benchmark(**kwargs)

        with self.assertRaises(LLTKDEParameterError) as cm:
            Benchmark.from_dict({"replications": 2, "sample_size": 10})

        self.assertIn("unknown benchmark config keys: sample_size", repr(cm.exception))

    def test_from_json(self):
        """
        Tests loading a JSON config and running it through run_benchmark.
        """
        benchmark = Benchmark.from_json(os.path.join(FIXTURES, "bench.json"))
        self.assertListEqual(benchmark.densities, ["density-1", "density-5"])
        self.assertEqual(benchmark.seed, 11)
        self.assertEqual(benchmark.tail_quantile, 0.8)

        result = run_benchmark(dict(benchmark.config(), use_cache=False))
        self.assertEqual(len(result.summary), 4)

class SummaryTestCase(unittest.TestCase):

    def test_single_replication_has_zero_standard_error(self):
        """
        Tests that one replication gives a standard error of 0.
        """
        replications = pd.DataFrame({
            "Density": ["density-1"], "N": [50], "Estimator": ["can"], "Replication": [0],
            "MIARE": [0.4], "TailMIARE": [0.2], "Smoothing": ["h=0.1"], "Error": [None]})
        summary = summarize(replications)
        self.assertEqual(summary["MIARE_SE"].iloc[0], 0.)
        self.assertEqual(summary["Failures"].iloc[0], 0)

    def test_standard_error(self):
        """
        Tests that the standard error is the sample standard deviation over
        the square root of the number of replications.
        """
        replications = pd.DataFrame({
            "Density": ["density-1"] * 4, "N": [50] * 4, "Estimator": ["can"] * 4,
            "Replication": range(4), "MIARE": [1., 2., 3., 4.], "TailMIARE": [1.] * 4,
            "Smoothing": ["h=0.1"] * 4, "Error": [None] * 4})
        summary = summarize(replications)
        self.assertAlmostEqual(summary["MIARE"].iloc[0], 2.5)
        self.assertAlmostEqual(summary["MIARE_SE"].iloc[0], np.std([1, 2, 3, 4], ddof=1) / 2)
        self.assertEqual(summary["TailMIARE_SE"].iloc[0], 0.)

class TablesTestCase(unittest.TestCase):

    def summary(self):
        index = pd.MultiIndex.from_tuples(
            [("density-1", 100, "ll-pt"), ("density-1", 100, "can"), ("density-1", 100, "reflect")],
            names=["Density", "N", "Estimator"])
        return pd.DataFrame({
            "MIARE": [1.0, 1.1, 2.0],
            "MIARE_SE": [0.05, 0.05, 0.05],
            "TailMIARE": [3.0, 1.0, 1.02],
            "TailMIARE_SE": [0.1, 0.001, 0.001],
            "Replications": [10, 10, 10],
            "Failures": [0, 0, 0]}, index=index)

    def result(self):
        return BenchResult(
            summary=self.summary(), replications=pd.DataFrame(),
            metadata={"config": {"tail_quantile": 0.8}, "miare_scale": "mean"})

    def test_mark_minimum(self):
        """
        Tests that the minimum and every value whose 2-SE interval overlaps
        it are marked.
        """
        self.assertListEqual(mark_minimum(self.summary()).tolist(), [True, True, False])
        self.assertListEqual(mark_minimum(self.summary(), "TailMIARE").tolist(), [False, True, False])

    def test_mark_minimum_uses_both_intervals(self):
        """
        Tests that a value is marked when its lower bound falls below the
        upper bound of the minimum, even if it lies above the minimum itself.
        """
        summary = self.summary()
        summary["MIARE"] = [1.0, 1.15, 1.25]

        # 1.15 - 0.1 = 1.05 is above 1.0 but below 1.0 + 0.1
        self.assertListEqual(mark_minimum(summary).tolist(), [True, True, False])

    def test_csv_and_json_agree(self):
        """
        Tests that the CSV and JSON tables carry the same numbers.
        """
        result = self.result()
        from_csv = pd.read_csv(io.StringIO(emit_tables(result, "csv")))
        from_json = json.loads(emit_tables(result, "json"))
        self.assertDictEqual(from_json["metadata"], result.metadata)
        self.assertListEqual(from_csv["MIARE"].tolist(), [r["MIARE"] for r in from_json["summary"]])
        self.assertListEqual(from_csv["Estimator"].tolist(), ["ll-pt", "can", "reflect"])
        self.assertListEqual(
            [r["Estimator"] for r in from_json["summary"]], ["ll-pt", "can", "reflect"])

    def test_text_table(self):
        """
        Tests that the text tables mark the best estimators and keep the
        estimator order.
        """
        text = emit_tables(self.result(), "text")
        self.assertIn("MIARE in the tail (x > q0.8)", text)
        self.assertIn("1.000*", text)
        self.assertIn("1.100*", text)
        self.assertIn("2.000", text)
        self.assertNotIn("2.000*", text)
        header = text.splitlines()[1]
        self.assertLess(header.index("ll-pt"), header.index("can"))
        self.assertLess(header.index("can"), header.index("reflect"))

    def test_rejects_unknown_format_and_empty_results(self):
        """
        Tests that unknown formats and empty results are rejected.
        """
        with self.assertRaises(LLTKDEParameterError):
            emit_tables(self.result(), "xml")

        empty = BenchResult(summary=pd.DataFrame(), replications=pd.DataFrame())
        with self.assertRaises(LLTKDEParameterError) as cm:
            emit_tables(empty, "csv")

        self.assertIn("benchmark result is empty", repr(cm.exception))

if __name__ == '__main__':
    unittest.main()

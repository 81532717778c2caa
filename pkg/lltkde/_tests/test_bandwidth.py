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

import unittest
import numpy as np
from lltkde.bandwidth import (
    SmoothingSpec,
    nn_count,
    nn_distance,
    plugin_bandwidth,
    gamma_reference_bandwidth)
from lltkde.exceptions import LLTKDEParameterError, LLTKDEDataError

class SmoothingSpecTestCase(unittest.TestCase):

    def test_constructors(self):
        """
        Tests the fixed and nearest-neighbour constructors and their string
        and dict forms.
        """
        fixed = SmoothingSpec.fixed(0.25)
        nn = SmoothingSpec.nn(0.7)
        self.assertFalse(fixed.is_nn)
        self.assertTrue(nn.is_nn)
        self.assertEqual(str(fixed), "h=0.25")
        self.assertEqual(str(nn), "alpha=0.7")
        self.assertDictEqual(nn.to_dict(), {"kind": "nn", "value": 0.7})
        self.assertEqual(SmoothingSpec.nn(0.7), nn)

    def test_validation(self):
        """
        Tests that nonpositive values, fractions above 1 and unknown kinds
        are rejected.
        """
        for kind, value in (("fixed", 0.), ("fixed", -1.), ("fixed", np.inf),
                            ("nn", 1.5), ("nn", 0.), ("width", 1.)):
            with self.assertRaises(LLTKDEParameterError):
                SmoothingSpec(kind, value)

class NearestNeighbourTestCase(unittest.TestCase):

    def test_nn_count(self):
        """
        Tests that the neighbour count is floor(alpha n) without losing a
        neighbour to rounding, and that a zero count is rejected.
        """
        self.assertEqual(nn_count(0.29, 100), 29)
        self.assertEqual(nn_count(1., 7), 7)
        self.assertEqual(nn_count(0.5, 7), 3)

        with self.assertRaises(LLTKDEParameterError) as cm:
            nn_count(0.05, 10)

        self.assertIn("too small for n=10", repr(cm.exception))

    def test_nn_distance(self):
        """
        Tests that D_alpha(y) is the distance to the floor(alpha n)-th
        closest sample point.
        """
        sample = np.array([0., 1., 2., 3., 4.])
        np.testing.assert_allclose(nn_distance([0., 2.5, 10.], sample, 0.4), [1., 0.5, 7.])
        np.testing.assert_allclose(nn_distance(2., sample, 1.), 2.)

    def test_nn_distance_floor(self):
        """
        Tests that a zero distance is floored at 1e-12.
        """
        sample = np.array([0., 1., 2., 3., 4.])
        self.assertEqual(float(nn_distance(1., sample, 0.2)), 1e-12)

    def test_nn_distance_leave_one_out(self):
        """
        Tests that excluding the point itself counts floor(alpha (n-1))
        neighbours among the others.
        """
        sample = np.array([0., 1., 2., 3., 4.])
        distances = nn_distance(sample, sample, 0.4, exclude=np.arange(5))
        np.testing.assert_allclose(distances, [1., 1., 1., 1., 1.])
        distances = nn_distance(sample, sample, 0.5, exclude=np.arange(5))
        np.testing.assert_allclose(distances, [2., 1., 1., 1., 2.])

class PluginBandwidthTestCase(unittest.TestCase):

    def test_close_to_normal_reference_for_normal_data(self):
        """
        Tests that both plug-in variants land near the normal reference
        bandwidth for normal data and near each other.
        """
        sample = np.random.default_rng(3).normal(size=500)
        reference = 1.06 * sample.std(ddof=1) * 500**(-1 / 5)
        ste = plugin_bandwidth(sample, method="ste")
        dpi = plugin_bandwidth(sample, method="dpi")
        self.assertGreater(ste, 0.6 * reference)
        self.assertLess(ste, 1.5 * reference)
        self.assertLess(abs(ste - dpi) / dpi, 0.25)

    def test_scale_equivariance(self):
        """
        Tests that rescaling the data rescales the bandwidth.
        """
        sample = np.random.default_rng(4).normal(size=200)
        self.assertAlmostEqual(
            plugin_bandwidth(5 * sample), 5 * plugin_bandwidth(sample), places=8)

    def test_rejects_bad_input(self):
        """
        Tests that small samples, constant samples and unknown methods are
        rejected.
        """
        with self.assertRaises(LLTKDEDataError) as cm:
            plugin_bandwidth(np.arange(9.))

        self.assertIn("at least 10 observations", repr(cm.exception))

        with self.assertRaises(LLTKDEDataError):
            plugin_bandwidth(np.ones(20))

        with self.assertRaises(LLTKDEParameterError):
            plugin_bandwidth(np.arange(20.), method="rot")

class GammaReferenceBandwidthTestCase(unittest.TestCase):

    def test_exponential_reference(self):
        """
        Tests that for a sample with moment shape below 2 the rule is the
        exponential reference mean * (0.4/n)^(2/5).
        """
        sample = np.random.default_rng(5).exponential(size=100)
        self.assertAlmostEqual(
            gamma_reference_bandwidth(sample), sample.mean() * (0.4 / 100)**0.4, places=10)

    def test_scale_equivariance(self):
        """
        Tests that rescaling the data rescales b, here for a Gamma(4)
        sample that uses the fitted Gamma reference.
        """
        sample = np.random.default_rng(6).gamma(4., size=300)
        np.testing.assert_allclose(
            gamma_reference_bandwidth(3 * sample), 3 * gamma_reference_bandwidth(sample))

    def test_rejects_nonpositive_data(self):
        """
        Tests that the Gamma reference rule refuses nonpositive data.
        """
        sample = np.random.default_rng(5).exponential(size=20)
        sample[3] = 0.

        with self.assertRaises(LLTKDEDataError) as cm:
            gamma_reference_bandwidth(sample)

        self.assertIn("requires positive data", repr(cm.exception))

if __name__ == '__main__':
    unittest.main()

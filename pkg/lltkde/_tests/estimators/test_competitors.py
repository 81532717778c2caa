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
from scipy.stats import gamma
from lltkde.estimators import (
    GammaKDE,
    ModifiedGammaKDE,
    ReflectionKDE,
    BoundaryCorrectedKDE,
    gamma_kde,
    raw_kde,
    reflection_kde,
    cut_and_normalise_kde,
    boundary_corrected_kde)
from lltkde.estimators.gamma import BLOCK_SIZE
from lltkde.exceptions import (
    LLTKDEParameterError,
    LLTKDEDataError,
    LLTKDEDomainError)

def exponential_sample(n=200, seed=31):
    return np.random.default_rng(seed).exponential(size=n)

class GammaKDETestCase(unittest.TestCase):

    def test_single_observation_at_boundary(self):
        """
        Tests that one observation at 1 with b = 1 gives the unit
        exponential density exp(-1) at x = 0.
        """
        self.assertAlmostEqual(float(gamma_kde(0., [1.], 1.)), np.exp(-1))

    def test_matches_gamma_mixture_across_blocks(self):
        """
        Tests that the blocked evaluation equals the average of Gamma
        densities with shape x/b + 1 and scale b over more than one block.
        """
        sample = exponential_sample(n=40)
        b = 0.2
        x = np.linspace(0., 6., BLOCK_SIZE + 37)
        expected = gamma.pdf(sample, (x / b + 1)[:, np.newaxis], scale=b).mean(axis=1)
        np.testing.assert_allclose(gamma_kde(x, sample, b), expected, rtol=1e-12)

    def test_modified_shape_is_continuous(self):
        """
        Tests that the modified shape function meets x/b at x = 2b, so the
        modified estimate is continuous there.
        """
        b = 0.3
        self.assertAlmostEqual(float(ModifiedGammaKDE.shape(np.array(2 * b), b)), 2.)
        sample = exponential_sample(n=50)
        below = gamma_kde(2 * b * (1 - 1e-10), sample, b, modified=True)
        at = gamma_kde(2 * b, sample, b, modified=True)
        np.testing.assert_allclose(below, at, rtol=1e-7)

    def test_modified_differs_from_plain_inside_boundary_region(self):
        """
        Tests that the two Gamma estimators use different shapes near 0 and
        beyond 2b.
        """
        b = 0.3
        x = np.array([0.1, 1.])
        np.testing.assert_allclose(GammaKDE.shape(x, b), x / b + 1)
        np.testing.assert_allclose(ModifiedGammaKDE.shape(x, b), [(0.1 / 0.6)**2 + 1, 1 / 0.3])

    def test_reference_rule_and_metadata(self):
        """
        Tests that the estimator uses the Gamma reference rule by default
        and reports the Gamma kernel.
        """
        estimate = GammaKDE().estimate(exponential_sample(), grid=np.linspace(0.01, 4, 50))
        self.assertEqual(estimate.estimator, "gamma")
        self.assertDictEqual(estimate.metadata, {"kernel": "gamma"})
        self.assertGreater(estimate.smoothing.value, 0)

    def test_rejects_bad_input(self):
        """
        Tests that negative points, nonpositive data and nonpositive b are
        rejected.
        """
        sample = exponential_sample(n=20)
        with self.assertRaises(LLTKDEDomainError):
            gamma_kde([-0.1, 1.], sample, 0.2)
        with self.assertRaises(LLTKDEDataError):
            gamma_kde([1.], np.append(sample, 0.), 0.2)
        with self.assertRaises(LLTKDEParameterError):
            gamma_kde([1.], sample, -0.2)

class BoundaryCorrectionTestCase(unittest.TestCase):

    def test_reflection_doubles_raw_estimate_at_zero(self):
        """
        Tests that reflection gives twice the raw estimate at x = 0 for
        both kernels.
        """
        sample = exponential_sample()
        for kernel in ("gaussian", "epanechnikov"):
            self.assertAlmostEqual(
                float(reflection_kde(0., sample, 0.3, kernel=kernel)),
                2 * float(raw_kde(0., sample, 0.3, kernel=kernel)))

    def test_cut_and_normalise_doubles_raw_estimate_at_zero(self):
        """
        Tests that cut-and-normalise divides the raw estimate at 0 by
        W_0(0) = 1/2.
        """
        sample = exponential_sample()
        for kernel in ("gaussian", "epanechnikov"):
            self.assertAlmostEqual(
                float(cut_and_normalise_kde(0., sample, 0.3, kernel=kernel)),
                2 * float(raw_kde(0., sample, 0.3, kernel=kernel)))

    def test_boundary_corrected_is_nonnegative(self):
        """
        Tests that the boundary-corrected estimate is finite and
        nonnegative everywhere, including at 0 and past the data.
        """
        sample = exponential_sample(n=50)
        x = np.linspace(0., 12., 200)
        for kernel in ("gaussian", "epanechnikov"):
            values = boundary_corrected_kde(x, sample, 0.4, kernel=kernel)
            self.assertTrue(np.isfinite(values).all())
            self.assertTrue((values >= 0).all())

    def test_boundary_corrected_zero_without_data(self):
        """
        Tests that the compact-kernel estimate is exactly 0 where no
        observation is within the kernel window.
        """
        values = boundary_corrected_kde([20.], [1., 2., 3.], 0.5, kernel="epanechnikov")
        self.assertEqual(float(values[0]), 0.)

    def test_interior_points_are_uncorrected(self):
        """
        Tests that at x >= 8h all three corrections reduce to the raw
        kernel density estimate.
        """
        sample = exponential_sample()
        h = 0.1
        x = np.linspace(8 * h, 3., 20)
        raw = raw_kde(x, sample, h)
        for corrected in (reflection_kde, cut_and_normalise_kde, boundary_corrected_kde):
            np.testing.assert_allclose(
                corrected(x, sample, h), raw, rtol=1e-9, err_msg=corrected.__name__)

    def test_renormalized_estimate(self):
        """
        Tests that a renormalized reflection estimate with the plug-in
        bandwidth integrates to nearly 1 over the default grid.
        """
        estimate = ReflectionKDE().estimate(exponential_sample())
        self.assertEqual(estimate.estimator, "reflect")
        self.assertGreater(estimate.integral(), 0.97)
        self.assertLess(estimate.integral(), 1.001)

    def test_rejects_negative_points(self):
        """
        Tests that the corrected estimators are only defined for x >= 0.
        """
        with self.assertRaises(LLTKDEDomainError):
            BoundaryCorrectedKDE(bandwidth=0.2, renormalize=False).estimate(
                exponential_sample(n=20), grid=[-1., 1.])
        with self.assertRaises(LLTKDEDomainError):
            reflection_kde(-0.5, exponential_sample(n=20), 0.2)

if __name__ == '__main__':
    unittest.main()

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
from scipy.integrate import quad
from lltkde.kernels import (
    get_kernel,
    GaussianKernel,
    EpanechnikovKernel)
from lltkde.exceptions import LLTKDEParameterError

class KernelMomentsTestCase(unittest.TestCase):

    def test_moment_constants_match_numerical_integration(self):
        """
        Tests that the tabulated moments mu_j and nu_j of both kernels agree
        with numerical integrals of u^j K(u) and u^j K(u)^2.
        """
        for kernel in (GaussianKernel, EpanechnikovKernel):
            limit = kernel.SUPPORT
            mu, nu = kernel.moments()
            for j, expected in enumerate(mu):
                actual, _ = quad(lambda u: u**j * float(kernel.evaluate(u)), -limit, limit)
                np.testing.assert_allclose(
                    actual, expected, rtol=1e-7, atol=1e-9, err_msg="{0} mu_{1}".format(kernel.CODE, j))
            for j, expected in enumerate(nu):
                actual, _ = quad(lambda u: u**j * float(kernel.evaluate(u))**2, -limit, limit)
                np.testing.assert_allclose(
                    actual, expected, rtol=1e-7, atol=1e-9, err_msg="{0} nu_{1}".format(kernel.CODE, j))

    def test_epanechnikov_moments(self):
        """
        Tests that the unit-variance Epanechnikov kernel has mu_4 = 15/7 and
        mu_6 = 125/21.
        """
        mu, _ = EpanechnikovKernel.moments()
        self.assertEqual(mu[0], 1.)
        self.assertEqual(mu[2], 1.)
        self.assertAlmostEqual(mu[4], 15 / 7)
        self.assertAlmostEqual(mu[6], 125 / 21)

    def test_gaussian_variance_inflation(self):
        """
        Tests that the Gaussian log-quadratic variance constant is 27/16
        times nu_0, and that degrees 0 and 1 share nu_0.
        """
        self.assertAlmostEqual(GaussianKernel.variance_inflation(2), 27 / 16)
        self.assertAlmostEqual(
            GaussianKernel.variance_constant(2), 27 / (32 * np.sqrt(np.pi)))
        self.assertEqual(
            GaussianKernel.variance_constant(0), GaussianKernel.variance_constant(1))

    def test_gaussian_bias_constant(self):
        """
        Tests that the Gaussian log-quadratic bias constant is
        (1*15 - 9)/(24*2) = 1/8.
        """
        self.assertAlmostEqual(GaussianKernel.bias_constant(), 1 / 8)

    def test_variance_constant_rejects_degree(self):
        """
        Tests that a degree other than 0, 1 or 2 is rejected.
        """
        with self.assertRaises(LLTKDEParameterError) as cm:
            GaussianKernel.variance_constant(3)

        self.assertIn("degree must be 0, 1 or 2", repr(cm.exception))

class KernelEvaluationTestCase(unittest.TestCase):

    def test_epanechnikov_support(self):
        """
        Tests that the Epanechnikov kernel is positive inside |u| < sqrt(5)
        and zero outside.
        """
        values = EpanechnikovKernel.evaluate([-2.5, -2., 0., 2., 2.5])
        self.assertEqual(values[0], 0.)
        self.assertEqual(values[4], 0.)
        self.assertGreater(values[1], 0.)
        self.assertGreater(values[3], 0.)
        self.assertAlmostEqual(values[2], 3 / (4 * np.sqrt(5)))

    def test_gaussian_is_standard_normal(self):
        """
        Tests that the Gaussian kernel is the standard normal density.
        """
        self.assertAlmostEqual(GaussianKernel.evaluate(0.), 1 / np.sqrt(2 * np.pi))
        self.assertAlmostEqual(
            float(GaussianKernel.evaluate(1.)), np.exp(-0.5) / np.sqrt(2 * np.pi))

    def test_get_kernel(self):
        """
        Tests that kernels are looked up by id, classes pass through and
        unknown ids raise a parameter error listing the choices.
        """
        self.assertIs(get_kernel("gaussian"), GaussianKernel)
        self.assertIs(get_kernel("epanechnikov"), EpanechnikovKernel)
        self.assertIs(get_kernel(EpanechnikovKernel), EpanechnikovKernel)

        with self.assertRaises(LLTKDEParameterError) as cm:
            get_kernel("triweight")

        self.assertIn("unknown kernel triweight", repr(cm.exception))
        self.assertIn("epanechnikov, gaussian", repr(cm.exception))

class PartialMomentsTestCase(unittest.TestCase):

    def test_partial_moments_match_numerical_integration(self):
        """
        Tests that W_j(c), the moments over [-c, inf), agree with numerical
        integration at an interior truncation point.
        """
        c = 0.7
        for kernel in (GaussianKernel, EpanechnikovKernel):
            upper = kernel.SUPPORT
            for j in range(3):
                expected, _ = quad(lambda u: u**j * float(kernel.evaluate(u)), -c, upper)
                self.assertAlmostEqual(
                    float(kernel.partial_moment(j, c)), expected, places=9,
                    msg="{0} W_{1}".format(kernel.CODE, j))

    def test_partial_moments_beyond_support(self):
        """
        Tests that the Epanechnikov partial moments are the full moments
        (1, 0, 1) once c exceeds the support, and (0, 0, 0) once c is below
        minus the support.
        """
        for j, expected in enumerate((1., 0., 1.)):
            self.assertAlmostEqual(float(EpanechnikovKernel.partial_moment(j, 3.)), expected)
            self.assertAlmostEqual(float(EpanechnikovKernel.partial_moment(j, -3.)), 0.)

    def test_partial_moments_at_zero(self):
        """
        Tests that at c = 0 the partial moments are half the full moments
        for j = 0 and 2.
        """
        for kernel in (GaussianKernel, EpanechnikovKernel):
            self.assertAlmostEqual(float(kernel.partial_moment(0, 0.)), 0.5)
            self.assertAlmostEqual(float(kernel.partial_moment(2, 0.)), 0.5)

class ExponentialMomentsTestCase(unittest.TestCase):

    def test_exponential_moments_match_numerical_integration(self):
        """
        Tests that m_j = int u^j K(u) exp(b1 u + b2 u^2) du agrees with
        numerical integration for both kernels, including a positive b2 for
        the compact kernel.
        """
        cases = [
            (GaussianKernel, 0.3, -0.2),
            (GaussianKernel, -0.8, 0.3),
            (EpanechnikovKernel, 0.3, -0.2),
            (EpanechnikovKernel, -0.5, 0.6),
        ]
        for kernel, b1, b2 in cases:
            limit = kernel.SUPPORT
            moments = kernel.exponential_moments(np.array([b1]), np.array([b2]), 4)[0]
            for j in range(5):
                expected, _ = quad(
                    lambda u: u**j * float(kernel.evaluate(u)) * np.exp(b1 * u + b2 * u**2),
                    -limit, limit)
                np.testing.assert_allclose(
                    moments[j], expected, rtol=1e-7, atol=1e-9,
                    err_msg="{0} m_{1} at ({2}, {3})".format(kernel.CODE, j, b1, b2))

    def test_gaussian_divergent_integral(self):
        """
        Tests that the Gaussian exponential moments are not finite once
        b2 >= 1/2, and that is_feasible flags it.
        """
        moments = GaussianKernel.exponential_moments(np.array([0.3]), np.array([0.6]), 2)
        self.assertFalse(np.isfinite(moments).all())
        self.assertListEqual(
            GaussianKernel.is_feasible(np.array([0.49, 0.6])).tolist(), [True, False])

    def test_compact_kernel_always_feasible(self):
        """
        Tests that every quadratic coefficient is feasible for the
        Epanechnikov kernel.
        """
        self.assertTrue(EpanechnikovKernel.is_feasible(np.array([-5., 0., 5.])).all())

if __name__ == '__main__':
    unittest.main()

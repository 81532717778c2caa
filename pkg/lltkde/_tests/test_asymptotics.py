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
from lltkde.asymptotics import (
    DensityDerivatives,
    bias_naive,
    bias_loclin,
    bias_locquad,
    locquad_terms,
    variance_factor,
    transformed_derivatives,
    asymptotic_table)
from lltkde.genf import get_density
from lltkde.transforms import LogTransformation, ProbexTransformation, probex
from lltkde.exceptions import LLTKDEParameterError, LLTKDEDomainError

X = np.array([0.05, 0.3, 1., 2.5, 6.])

class ExponentialClosedFormsTestCase(unittest.TestCase):

    def test_log_transformation(self):
        """
        Tests the three bias functions for the standard exponential under
        the log transformation against their closed forms.
        """
        d = DensityDerivatives.exponential(X)
        np.testing.assert_allclose(bias_naive(X, "log", d), np.exp(-X) * (X**2 - 3 * X + 1))
        np.testing.assert_allclose(bias_loclin(X, "log", d), -X * np.exp(-X))
        np.testing.assert_allclose(bias_locquad(X, "log", d), np.exp(-X) * X * (4 * X - 5))

    def test_probex_transformation(self):
        """
        Tests that for the standard exponential under probex the
        transformed density is exactly normal: the log-quadratic bias
        vanishes and the log-linear bias is -exp(-x).
        """
        d = DensityDerivatives.exponential(X)
        z = probex(X)
        np.testing.assert_allclose(bias_naive(X, "probex", d), np.exp(-X) * (z**2 - 1), rtol=1e-9)
        np.testing.assert_allclose(bias_loclin(X, "probex", d), -np.exp(-X), rtol=1e-9)
        np.testing.assert_allclose(bias_locquad(X, "probex", d), 0., atol=1e-8)
        half = DensityDerivatives.exponential(np.log(2))
        self.assertAlmostEqual(float(bias_loclin(np.log(2), "probex", half)), -0.5)

    def test_log_density_coefficient_vanishes(self):
        """
        Tests that under the log transformation the group multiplying f
        itself is identically 0, whatever the density.
        """
        d = DensityDerivatives(x=X, f=np.ones(5), f1=np.zeros(5), f2=np.zeros(5),
                               f3=np.zeros(5), f4=np.zeros(5))
        np.testing.assert_allclose(locquad_terms(X, "log", d)["f"], 0., atol=1e-9)

class ChainRuleTestCase(unittest.TestCase):

    def _check(self, transformation, d):
        y = transformation.forward(d.x)
        slope = transformation.derivative(d.x, 1)
        f, f1, f2 = transformed_derivatives(y, transformation, d, order=2)
        g, g1, g2, g3, g4 = transformed_derivatives(y, transformation, d, order=4)
        np.testing.assert_allclose([g, g1, g2], [f, f1, f2], rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(bias_naive(d.x, transformation, d), slope * f2, rtol=1e-8, atol=1e-12)
        np.testing.assert_allclose(
            bias_loclin(d.x, transformation, d), slope * (f2 - f1**2 / f), rtol=1e-8, atol=1e-12)
        np.testing.assert_allclose(
            bias_locquad(d.x, transformation, d),
            slope * (g4 - 3 * g2**2 / g + 2 * g1**4 / g**3),
            rtol=1e-7, atol=1e-8)

    def test_bias_equals_transformed_domain_expression(self):
        """
        Tests that each bias function equals T'(x) times its
        transformed-domain expression at T(x), the latter computed from
        the chain-rule derivatives of f_Y.
        """
        for transformation in (LogTransformation, ProbexTransformation):
            self._check(transformation, DensityDerivatives.exponential(X))
            for code in ("density-5", "density-6"):
                density = get_density(code)
                self._check(transformation, DensityDerivatives.from_pdf(density.pdf, X))

    def test_transformed_density_under_log(self):
        """
        Tests that under log the standard exponential becomes
        f_Y(y) = e^y exp(-e^y).
        """
        d = DensityDerivatives.exponential(X)
        f, f1, _ = transformed_derivatives(np.log(X), "log", d)
        np.testing.assert_allclose(f, X * np.exp(-X))
        np.testing.assert_allclose(f1, X * np.exp(-X) * (1 - X))

    def test_rejects_mismatched_points(self):
        """
        Tests that y must equal T(x) and that only orders 2 and 4 exist.
        """
        d = DensityDerivatives.exponential(X)
        with self.assertRaises(LLTKDEParameterError):
            transformed_derivatives(X, "log", d)
        with self.assertRaises(LLTKDEParameterError):
            transformed_derivatives(np.log(X), "log", d, order=3)

class DensityDerivativesTestCase(unittest.TestCase):

    def test_finite_differences_match_analytic(self):
        """
        Tests that the finite-difference derivatives of the exponential
        pdf agree with the analytic ones.
        """
        x = np.array([0.2, 1., 3.])
        numeric = DensityDerivatives.from_pdf(get_density(1).pdf, x)
        exact = DensityDerivatives.exponential(x)
        for name, rtol in (("f", 1e-12), ("f1", 1e-8), ("f2", 1e-6), ("f3", 1e-4), ("f4", 1e-3)):
            np.testing.assert_allclose(
                getattr(numeric, name), getattr(exact, name), rtol=rtol, err_msg=name)

    def test_for_density(self):
        """
        Tests that the standard exponential preset uses the analytic
        derivatives and other presets use finite differences.
        """
        d = DensityDerivatives.for_density(get_density(1), X)
        np.testing.assert_array_equal(d.f4, np.exp(-X))
        d = DensityDerivatives.for_density(get_density(3), np.array([1.]))
        # Gamma(2) with mean 1: f(x) = 4x exp(-2x), f'(1) = -4 exp(-2)
        self.assertAlmostEqual(float(d.f1[0]), -4 * np.exp(-2), places=7)

    def test_domain(self):
        """
        Tests that derivatives need x > 0 and the likelihood-based bias
        functions need f(x) > 0.
        """
        with self.assertRaises(LLTKDEDomainError):
            DensityDerivatives.from_pdf(get_density(1).pdf, [0., 1.])

        d = DensityDerivatives(x=np.array([1.]), f=np.array([0.]), f1=np.array([0.]),
                               f2=np.array([1.]), f3=np.array([0.]), f4=np.array([0.]))
        with self.assertRaises(LLTKDEDomainError):
            bias_loclin(d.x, "log", d)
        with self.assertRaises(LLTKDEDomainError):
            bias_locquad(d.x, "probex", d)

class VarianceFactorTestCase(unittest.TestCase):

    def test_fixed_and_nearest_neighbour(self):
        """
        Tests the fixed-bandwidth factor V_p f T' and the
        nearest-neighbour factor 2 V_p f^2.
        """
        d = DensityDerivatives.exponential(X)
        v2 = 27 / (32 * np.sqrt(np.pi))
        np.testing.assert_allclose(variance_factor(X, "log", d), v2 * np.exp(-X) / X)
        np.testing.assert_allclose(
            variance_factor(X, "log", d, degree=1), np.exp(-X) / X / (2 * np.sqrt(np.pi)))
        np.testing.assert_allclose(
            variance_factor(X, "probex", d, nearest_neighbour=True), 2 * v2 * np.exp(-2 * X))

class AsymptoticTableTestCase(unittest.TestCase):

    def test_table(self):
        """
        Tests the columns and values of the asymptotic table.
        """
        table = asymptotic_table(get_density(1), "log", X)
        self.assertListEqual(list(table.columns), ["x", "b_T", "b_T1", "b_T2", "v_T2"])
        np.testing.assert_allclose(table["b_T2"], np.exp(-X) * X * (4 * X - 5))
        np.testing.assert_allclose(table["b_T1"], -X * np.exp(-X))

        with self.assertRaises(LLTKDEDomainError):
            asymptotic_table(get_density(1), "log", [0., 1.])

if __name__ == '__main__':
    unittest.main()

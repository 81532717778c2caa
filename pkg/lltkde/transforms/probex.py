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

from collections import defaultdict
import numpy as np
from scipy.special import ndtri, ndtri_exp, log_ndtr
from .base import Transformation, MAX_DERIVATIVE_ORDER

LOG_SQRT_2PI = 0.5 * np.log(2 * np.pi)

def _derivative_polynomials(max_order):
    """
    Express T^(k) as polynomials in z = T(x) and g = T'(x).

    Differentiating Phi(z) = 1 - exp(-x) gives g = exp(-x)/phi(z) and
    dg/dx = z g^2 - g, so d/dx maps z^i g^j to
    i z^(i-1) g^(j+1) + j z^(i+1) g^(j+1) - j z^i g^j.
    """
    polynomials = [{(0, 1): 1}]
    for _ in range(max_order - 1):
        derived = defaultdict(int)
        for (i, j), coef in polynomials[-1].items():
            if i:
                derived[(i - 1, j + 1)] += i * coef
            derived[(i + 1, j + 1)] += j * coef
            derived[(i, j)] -= j * coef
        polynomials.append({key: coef for key, coef in derived.items() if coef})
    return polynomials

DERIVATIVE_POLYNOMIALS = _derivative_polynomials(MAX_DERIVATIVE_ORDER)

class ProbexTransformation(Transformation):
    """
    T(x) = Phi^-1(1 - exp(-x)), which maps the standard exponential law onto
    the standard normal law.

    Right of log(2) the transformation is evaluated as -Phi^-1(exp(-x)) with
    a log-domain normal quantile, which keeps it finite and monotone far
    into the right tail.
    """
    CODE = "probex"

    @classmethod
    def _forward(cls, x):
        with np.errstate(over="ignore", under="ignore"):
            return np.where(
                x <= np.log(2),
                ndtri(-np.expm1(-np.minimum(x, np.log(2)))),
                -ndtri_exp(-np.maximum(x, np.log(2))))

    @classmethod
    def _inverse(cls, y):
        return -log_ndtr(-y)

    @classmethod
    def _first_derivative(cls, x, z):
        return np.exp(-x + 0.5 * z**2 + LOG_SQRT_2PI)

    @classmethod
    def _derivative(cls, x, order):
        z = cls._forward(x)
        g = cls._first_derivative(x, z)
        return sum(
            coef * z**i * g**j
            for (i, j), coef in DERIVATIVE_POLYNOMIALS[order - 1].items())

    @classmethod
    def derivatives(cls, x, max_order=MAX_DERIVATIVE_ORDER):
        x = cls.check_domain(x)
        z = cls._forward(x)
        g = cls._first_derivative(x, z)
        return [
            sum(coef * z**i * g**j for (i, j), coef in polynomial.items())
            for polynomial in DERIVATIVE_POLYNOMIALS[:max_order]]

def probex(x):
    """
    Return Phi^-1(1 - exp(-x)) for strictly positive x.
    """
    return ProbexTransformation.forward(x)

def variance_ratio(x):
    """
    Return T'(x) / (log x)' = x exp(-x) / phi(Phi^-1(1 - exp(-x))) for the
    probex transformation. The ratio is below 1 on (0, 1) and vanishes as
    x -> 0+.
    """
    x = ProbexTransformation.check_domain(x)
    return x * ProbexTransformation.derivative(x, 1)

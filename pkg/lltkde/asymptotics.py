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
Leading asymptotic bias and variance terms of the transformation
estimators, written in the original domain.

With T1..T5 the derivatives of T and f, f1..f4 those of f_X at x, the
estimators have bias (mu_2/2) h^2 b(x) for the naive and log-linear
estimators and a kernel constant times h^4 b(x) for the log-quadratic one.
All three bias functions equal T'(x) times the corresponding
transformed-domain expression at T(x):

    naive          f_Y''
    log-linear     f_Y'' - f_Y'^2/f_Y
    log-quadratic  f_Y'''' - 3 f_Y''^2/f_Y + 2 f_Y'^4/f_Y^3
"""
from dataclasses import dataclass
from typing import Callable, Union
import numpy as np
import pandas as pd
from scipy.special import comb
from lltkde.kernels import get_kernel
from lltkde.transforms import get_transformation
from lltkde.exceptions import LLTKDEParameterError, LLTKDEDomainError

# finite-difference step per derivative order, relative to max(x, 1)
FINITE_DIFFERENCE_STEPS = {1: 1e-4, 2: 1e-4, 3: 1e-3, 4: 1e-2}

@dataclass
class DensityDerivatives:
    """
    f_X and its first four derivatives at the points x.
    """
    x: np.ndarray
    f: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    f4: np.ndarray

    def as_list(self) -> list:
        return [self.f, self.f1, self.f2, self.f3, self.f4]

    @classmethod
    def exponential(cls, x: Union[float, np.ndarray]) -> "DensityDerivatives":
        """
        Derivatives of the standard exponential density e^(-x).
        """
        x = np.asarray(x, dtype=float)
        f = np.exp(-x)
        return cls(x=x, f=f, f1=-f, f2=f, f3=-f, f4=f)

    @classmethod
    def from_pdf(cls, pdf: Callable, x: Union[float, np.ndarray]) -> "DensityDerivatives":
        """
        Derivatives by five-point central differences.

        The step for derivative order k is FINITE_DIFFERENCE_STEPS[k]
        times max(x, 1), capped at x/4 so that every node stays positive.
        Higher orders use larger steps to bound the roundoff error.
        """
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise LLTKDEDomainError("density derivatives require x > 0")

        def nodes(order):
            h = np.minimum(FINITE_DIFFERENCE_STEPS[order] * np.maximum(x, 1), x / 4)
            return h, [pdf(x + k * h) for k in (-2, -1, 1, 2)]

        f = pdf(x)
        h, (m2, m1, p1, p2) = nodes(1)
        f1 = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h)
        h, (m2, m1, p1, p2) = nodes(2)
        f2 = (-m2 + 16 * m1 - 30 * f + 16 * p1 - p2) / (12 * h**2)
        h, (m2, m1, p1, p2) = nodes(3)
        f3 = (-m2 + 2 * m1 - 2 * p1 + p2) / (2 * h**3)
        h, (m2, m1, p1, p2) = nodes(4)
        f4 = (m2 - 4 * m1 + 6 * f - 4 * p1 + p2) / h**4
        return cls(x=x, f=f, f1=f1, f2=f2, f3=f3, f4=f4)

    @classmethod
    def for_density(cls, density, x) -> "DensityDerivatives":
        """
        Derivatives of a GeneralizedF density: analytic for the standard
        exponential, finite differences otherwise.
        """
        if density.to_dict() == {"m1": 1., "m2": np.inf, "s": 1., "beta": 1.}:
            return cls.exponential(x)
        return cls.from_pdf(density.pdf, x)

def _transformation_derivatives(x, transformation):
    transformation = get_transformation(transformation)
    return transformation.derivatives(x, 5)

def _check_positive_density(d):
    if np.any(np.asarray(d.f) <= 0):
        raise LLTKDEDomainError("the bias expression is undefined where f(x) = 0")

def bias_naive(x, transformation, d: DensityDerivatives) -> np.ndarray:
    """
    Return b_T(x) = f''/T1^2 - 3 f' T2/T1^3 + f (3 T2^2/T1^4 - T3/T1^3).
    """
    T1, T2, T3, _, _ = _transformation_derivatives(x, transformation)
    return (d.f2 / T1**2
            - 3 * d.f1 * T2 / T1**3
            + d.f * (3 * T2**2 / T1**4 - T3 / T1**3))

def bias_loclin(x, transformation, d: DensityDerivatives) -> np.ndarray:
    """
    Return b_T^(1)(x) = (f'' - f'^2/f)/T1^2 - f' T2/T1^3
    + f (2 T2^2/T1^4 - T3/T1^3).
    """
    _check_positive_density(d)
    T1, T2, T3, _, _ = _transformation_derivatives(x, transformation)
    return ((d.f2 - d.f1**2 / d.f) / T1**2
            - d.f1 * T2 / T1**3
            + d.f * (2 * T2**2 / T1**4 - T3 / T1**3))

def locquad_terms(x, transformation, d: DensityDerivatives) -> dict:
    """
    Return the six groups of b_T^(2)(x), keyed by the density functional
    they multiply:

    "f4": (f'''' - 3 f''^2/f + 2 f'^4/f^3) / T1^4
    "f3": -(2 T2/T1^5) (5 f''' - 9 f' f''/f + 4 f'^3/f^2)
    "f2_T2": (3 T2^2/T1^6) (9 f'' - 5 f'^2/f)
    "f2_T3": -4 T3 f''/T1^5
    "f1": -(59 T2^3/T1^7 - 42 T2 T3/T1^6 + 5 T4/T1^5) f'
    "f": (80 T2^4/T1^8 - 87 T2^2 T3/T1^7 + 7 T3^2/T1^6
          + 15 T2 T4/T1^6 - T5/T1^5) f

    The coefficient of f vanishes identically for T = log.
    """
    _check_positive_density(d)
    T1, T2, T3, T4, T5 = _transformation_derivatives(x, transformation)
    f, f1, f2, f3, f4 = d.as_list()
    return {
        "f4": (f4 - 3 * f2**2 / f + 2 * f1**4 / f**3) / T1**4,
        "f3": -(2 * T2 / T1**5) * (5 * f3 - 9 * f1 * f2 / f + 4 * f1**3 / f**2),
        "f2_T2": (3 * T2**2 / T1**6) * (9 * f2 - 5 * f1**2 / f),
        "f2_T3": -4 * T3 * f2 / T1**5,
        "f1": -(59 * T2**3 / T1**7 - 42 * T2 * T3 / T1**6 + 5 * T4 / T1**5) * f1,
        "f": (80 * T2**4 / T1**8
              - 87 * T2**2 * T3 / T1**7
              + 7 * T3**2 / T1**6
              + 15 * T2 * T4 / T1**6
              - T5 / T1**5) * f,
    }

def bias_locquad(x, transformation, d: DensityDerivatives) -> np.ndarray:
    """
    Return b_T^(2)(x), the sum of the groups of `locquad_terms`.
    """
    return sum(locquad_terms(x, transformation, d).values())

def variance_factor(
    x,
    transformation,
    d: DensityDerivatives,
    degree: int = 2,
    kernel: str = "gaussian",
    nearest_neighbour: bool = False
    ) -> np.ndarray:
    """
    Return the leading variance factor of a degree-p estimator.

    Parameters
    ----------
    x : float or array-like, required
        evaluation points

    transformation : str or Transformation, required
        the transformation

    d : DensityDerivatives, required
        the density at x

    degree : int
        0 or 1 (V = nu_0) or 2 (default)

    kernel : str
        kernel id (default "gaussian")

    nearest_neighbour : bool
        False (default): V_p f(x) T'(x), the variance times nh for a fixed
        bandwidth. True: 2 V_p f(x)^2, the variance times n alpha for a
        nearest-neighbour bandwidth.

    Returns
    -------
    ndarray
    """
    constant = get_kernel(kernel).variance_constant(degree)
    if nearest_neighbour:
        return 2 * constant * np.asarray(d.f)**2
    return constant * d.f * get_transformation(transformation).derivative(x, 1)

def _jet_product(a: list, b: list) -> list:
    length = min(len(a), len(b))
    return [
        sum(comb(k, i, exact=True) * a[i] * b[k - i] for i in range(k + 1))
        for k in range(length)]

def _jet_reciprocal(a: list) -> list:
    r = [1 / a[0]]
    for k in range(1, len(a)):
        r.append(-sum(comb(k, i, exact=True) * a[i] * r[k - i] for i in range(1, k + 1)) / a[0])
    return r

def transformed_derivatives(y, transformation, d: DensityDerivatives, order: int = 2) -> tuple:
    """
    Return the density of Y = T(X) and its derivatives at y = T(x), x
    being the points of `d`.

    Parameters
    ----------
    y : float or array-like, required
        transformed points; must equal T(d.x)

    transformation : str or Transformation, required
        the transformation

    d : DensityDerivatives, required
        derivatives of f_X at T^-1(y)

    order : int
        2 (default) returns (f_Y, f_Y', f_Y'') by the chain rule; 4 adds
        f_Y''' and f_Y'''', obtained by exact Taylor-jet arithmetic with
        d/dy = (1/T') d/dx

    Returns
    -------
    tuple of ndarray
    """
    transformation = get_transformation(transformation)
    if not np.allclose(transformation.forward(d.x), y, rtol=1e-10, atol=1e-12):
        raise LLTKDEParameterError("y must equal T(x) at the points of the derivatives")
    T1, T2, T3, T4, T5 = transformation.derivatives(d.x, 5)
    f, f1, f2, _, _ = d.as_list()
    if order == 2:
        return (
            f / T1,
            f1 / T1**2 - f * T2 / T1**3,
            f2 / T1**3 - 3 * f1 * T2 / T1**4 - f * T3 / T1**4 + 3 * f * T2**2 / T1**5)
    if order != 4:
        raise LLTKDEParameterError("order must be 2 or 4, got {0}".format(order))

    inverse_slope = _jet_reciprocal([T1, T2, T3, T4, T5])
    jet = _jet_product(d.as_list(), inverse_slope)
    derivatives = [jet[0]]
    for _ in range(4):
        jet = _jet_product(jet[1:], inverse_slope)
        derivatives.append(jet[0])
    return tuple(derivatives)

def asymptotic_table(
    density,
    transformation,
    x: np.ndarray,
    degree: int = 2,
    kernel: str = "gaussian"
    ) -> pd.DataFrame:
    """
    Return a DataFrame with columns x, b_T, b_T1, b_T2, v_T2: the three
    bias functions and the fixed-bandwidth variance factor of a
    GeneralizedF density.
    """
    x = get_transformation(transformation).check_domain(x)
    d = DensityDerivatives.for_density(density, x)
    return pd.DataFrame({
        "x": x,
        "b_T": bias_naive(x, transformation, d),
        "b_T1": bias_loclin(x, transformation, d),
        "b_T2": bias_locquad(x, transformation, d),
        "v_T2": variance_factor(x, transformation, d, degree=degree, kernel=kernel)})

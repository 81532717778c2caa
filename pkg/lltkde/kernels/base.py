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

from typing import Union
import numpy as np
from numpy.polynomial.legendre import leggauss
from lltkde.exceptions import LLTKDEParameterError

# Gauss-Legendre rule used for the local likelihood integral of compact kernels
QUADRATURE_POINTS = 40

class Kernel:
    """
    Base class for symmetric, unit-variance kernels.

    All kernel classes are used through their classmethods and are not
    instantiated. Subclasses must set the class attributes below and
    implement `evaluate`.

    Parameters
    ----------
    CODE : str, required
        the string id used in configs and on the command line

    SUPPORT : float
        half-width of the support; np.inf for kernels with unbounded support

    MOMENTS : tuple of float, required
        mu_j = integral of u^j K(u) du for j = 0..6

    SQUARED_MOMENTS : tuple of float, required
        nu_j = integral of u^j K(u)^2 du for j = 0..4
    """
    CODE: str = None
    SUPPORT: float = np.inf
    MOMENTS: tuple = ()
    SQUARED_MOMENTS: tuple = ()

    @classmethod
    def evaluate(cls, u: Union[float, np.ndarray]) -> np.ndarray:
        """
        Return K(u).

        Parameters
        ----------
        u : float or array-like, required
            kernel argument(s)

        Returns
        -------
        ndarray
            kernel values, same shape as u
        """
        raise NotImplementedError("kernels must implement evaluate")

    @classmethod
    def moments(cls) -> tuple:
        """
        Return the moment constants (mu_0..mu_6, nu_0..nu_4).
        """
        return tuple(cls.MOMENTS), tuple(cls.SQUARED_MOMENTS)

    @classmethod
    def variance_constant(cls, degree: int) -> float:
        """
        Return the variance constant V_p of a local likelihood fit of the
        given degree (0 or 1 -> nu_0; 2 -> the log-quadratic constant).

        Parameters
        ----------
        degree : int, required
            polynomial degree of the local fit (0, 1 or 2)

        Returns
        -------
        float
        """
        mu = cls.MOMENTS
        nu = cls.SQUARED_MOMENTS
        if degree in (0, 1):
            return nu[0]
        if degree == 2:
            numerator = mu[4]**2 * nu[0] - 2 * mu[2] * mu[4] * nu[2] + mu[2]**2 * nu[4]
            return numerator / (mu[4] - mu[2]**2)**2
        raise LLTKDEParameterError(
            "degree must be 0, 1 or 2, got {0}".format(degree))

    @classmethod
    def variance_inflation(cls, degree: int) -> float:
        """
        Return V_p / V_1, the variance inflation of a degree-p fit relative
        to the log-linear (or naive) fit. Equals 27/16 for the Gaussian
        kernel at p=2.
        """
        return cls.variance_constant(degree) / cls.SQUARED_MOMENTS[0]

    @classmethod
    def bias_constant(cls) -> float:
        """
        Return (mu_2 mu_6 - mu_4^2) / (24 (mu_4 - mu_2^2)), the kernel
        constant of the leading bias of a local log-quadratic fit.
        """
        mu = cls.MOMENTS
        return (mu[2] * mu[6] - mu[4]**2) / (mu[4] - mu[2]**2) / 24

    @classmethod
    def partial_moment(cls, j: int, c: Union[float, np.ndarray]) -> np.ndarray:
        """
        Return W_j(c) = integral over [-c, inf) of u^j K(u) du.

        Parameters
        ----------
        j : int, required
            moment order (0, 1 or 2)

        c : float or array-like, required
            truncation point(s)

        Returns
        -------
        ndarray
        """
        raise NotImplementedError("kernels must implement partial_moment")

    @classmethod
    def exponential_moments(
        cls,
        b1: np.ndarray,
        b2: np.ndarray,
        max_order: int
        ) -> np.ndarray:
        """
        Return m_j = integral of u^j K(u) exp(b1 u + b2 u^2) du for
        j = 0..max_order.

        Parameters
        ----------
        b1, b2 : array-like, required
            linear and quadratic coefficients (broadcast together)

        max_order : int, required
            highest moment order to return

        Returns
        -------
        ndarray
            array of shape b1.shape + (max_order + 1,); non-finite where
            the integral diverges
        """
        log_scale, moments = cls.log_exponential_moments(b1, b2, max_order)
        with np.errstate(over="ignore", invalid="ignore"):
            return np.exp(log_scale)[..., np.newaxis] * moments

    @classmethod
    def log_exponential_moments(
        cls,
        b1: np.ndarray,
        b2: np.ndarray,
        max_order: int
        ) -> tuple:
        """
        Return the exponential moments as (log c, m / c) for a scale c
        chosen so that m / c stays representable when m itself overflows
        or underflows.

        The default implementation applies a Gauss-Legendre rule on the
        support and therefore requires a compact support; c is the largest
        value of exp(b1 u + b2 u^2) over the nodes.
        """
        if not np.isfinite(cls.SUPPORT):
            raise NotImplementedError(
                "kernels with unbounded support must implement log_exponential_moments")
        nodes, weights = leggauss(QUADRATURE_POINTS)
        nodes = nodes * cls.SUPPORT
        weights = weights * cls.SUPPORT * cls.evaluate(nodes)
        b1 = np.asarray(b1, dtype=float)[..., np.newaxis]
        b2 = np.asarray(b2, dtype=float)[..., np.newaxis]
        with np.errstate(over="ignore", invalid="ignore"):
            exponent = b1 * nodes + b2 * nodes**2
            log_scale = exponent.max(axis=-1)
            integrand = weights * np.exp(exponent - log_scale[..., np.newaxis])
            moments = np.stack(
                [(integrand * nodes**j).sum(axis=-1) for j in range(max_order + 1)],
                axis=-1)
        return log_scale, moments

    @classmethod
    def is_feasible(cls, b2: np.ndarray) -> np.ndarray:
        """
        Return a boolean mask of quadratic coefficients for which the
        exponential moments are finite.
        """
        return np.ones(np.shape(b2), dtype=bool)

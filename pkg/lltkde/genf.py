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
Generalized F test densities.

The density is

    f(x) = s (x/beta)^(s m1 - 1) / (beta B(m1, m2)) [1 + (x/beta)^s]^-(m1 + m2)

and, for m2 = inf, its generalized Gamma limit

    f(x) = s (x/beta)^(s m1 - 1) exp(-(x/beta)^s) / (beta Gamma(m1)).

The family contains the Exponential, Gamma, Weibull, half-normal,
Singh-Maddala and Lomax distributions, and the log-normal as a limit.
"""
from typing import Union
import numpy as np
from scipy.optimize import brentq
from scipy.special import betaln, betainc, gammaln, gammainc, xlogy
from lltkde.exceptions import LLTKDEParameterError, LLTKDEDomainError

QUANTILE_XTOL = 1e-12

class GeneralizedF:
    """
    Generalized F distribution on the positive half-line.

    Class attributes are defaults which can be overridden by passing the
    corresponding lowercase argument to __init__.

    Parameters
    ----------
    M1 : float, required
        first shape parameter, > 0

    M2 : float, required
        second shape parameter, > 0; np.inf selects the generalized Gamma
        limit

    S : float, required
        power parameter, > 0

    BETA : float, optional
        scale parameter; None (default) solves for mean 1, which requires
        M2 > 1/S

    CODE : str, optional
        id of the preset
    """
    CODE: str = None
    M1: float = None
    M2: float = None
    S: float = None
    BETA: float = None

    def __init__(
        self,
        m1: float = None,
        m2: float = None,
        s: float = None,
        beta: float = None
        ):
        self.m1 = self.M1 if m1 is None else float(m1)
        self.m2 = self.M2 if m2 is None else float(m2)
        self.s = self.S if s is None else float(s)
        for name in ("m1", "m2", "s"):
            value = getattr(self, name)
            if value is None or not value > 0:
                raise LLTKDEParameterError(
                    "generalized F parameter {0} must be positive, got {1}".format(name, value))
        beta = self.BETA if beta is None else beta
        self.beta = self._unit_mean_scale() if beta is None else float(beta)
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise LLTKDEParameterError(
                "generalized F parameter beta must be positive, got {0}".format(self.beta))

    def __repr__(self):
        return "{0}(m1={1:g}, m2={2:g}, s={3:g}, beta={4:.6g})".format(
            self.__class__.__name__, self.m1, self.m2, self.s, self.beta)

    @property
    def is_generalized_gamma(self) -> bool:
        return np.isinf(self.m2)

    def _log_mean_ratio(self) -> float:
        # log E[X / beta]
        m1, m2, s = self.m1, self.m2, self.s
        if self.is_generalized_gamma:
            return gammaln(m1 + 1 / s) - gammaln(m1)
        if not m2 > 1 / s:
            return np.inf
        return betaln(m1 + 1 / s, m2 - 1 / s) - betaln(m1, m2)

    def _unit_mean_scale(self) -> float:
        log_ratio = self._log_mean_ratio()
        if not np.isfinite(log_ratio):
            raise LLTKDEParameterError(
                "the mean is infinite for m2={0} and s={1}; pass beta explicitly".format(
                    self.m2, self.s))
        return float(np.exp(-log_ratio))

    def mean(self) -> float:
        return float(self.beta * np.exp(self._log_mean_ratio()))

    def to_dict(self) -> dict:
        return {"m1": self.m1, "m2": self.m2, "s": self.s, "beta": self.beta}

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise LLTKDEDomainError("generalized F densities are supported on x >= 0")
        return x

    def logpdf(self, x: Union[float, np.ndarray]) -> np.ndarray:
        x = self._check(x)
        m1, m2, s, beta = self.m1, self.m2, self.s, self.beta
        z = x / beta
        with np.errstate(divide="ignore"):
            logz = np.log(z)
        base = np.log(s) - np.log(beta) + xlogy(s * m1 - 1, z)
        with np.errstate(over="ignore"):
            if self.is_generalized_gamma:
                return base - np.exp(s * logz) - gammaln(m1)
            # log(1 + z^s) without overflow
            return base - betaln(m1, m2) - (m1 + m2) * np.logaddexp(0, s * logz)

    def pdf(self, x: Union[float, np.ndarray]) -> np.ndarray:
        """
        Return the density at x >= 0.
        """
        return np.exp(self.logpdf(x))

    def cdf(self, x: Union[float, np.ndarray]) -> np.ndarray:
        """
        Return the distribution function at x >= 0, as a regularized
        incomplete beta (or Gamma) function.
        """
        x = self._check(x)
        with np.errstate(divide="ignore", over="ignore"):
            zs = (x / self.beta)**self.s
            if self.is_generalized_gamma:
                return gammainc(self.m1, zs)
            return betainc(self.m1, self.m2, zs / (1 + zs))

    def quantile(self, p: float) -> float:
        """
        Return the x with cdf(x) = p, found with brentq on the bracket
        [1e-12, u], u doubled until cdf(u) > p.
        """
        if not 0 < p < 1:
            raise LLTKDEParameterError("p must be in (0, 1), got {0}".format(p))
        lower = 1e-12
        if self.cdf(lower) >= p:
            return lower
        upper = max(self.beta, 1.)
        while self.cdf(upper) <= p:
            lower, upper = upper, 2 * upper
            if upper > 1e300:
                raise LLTKDEParameterError("quantile {0} is not finite".format(p))
        return float(brentq(lambda x: self.cdf(x) - p, lower, upper, xtol=QUANTILE_XTOL))

    def sample(self, n: int, seed: Union[int, np.random.Generator] = None) -> np.ndarray:
        """
        Return n independent draws, as beta (G1/G2)^(1/s) with
        G1 ~ Gamma(m1), G2 ~ Gamma(m2) (beta G1^(1/s) in the generalized
        Gamma case).

        Parameters
        ----------
        n : int, required
            number of draws

        seed : int or numpy Generator, optional
            seed of (or the) random generator

        Returns
        -------
        ndarray
        """
        if n < 1:
            raise LLTKDEParameterError("n must be at least 1, got {0}".format(n))
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        numerator = rng.standard_gamma(self.m1, size=n)
        if self.is_generalized_gamma:
            ratio = numerator
        else:
            ratio = numerator / rng.standard_gamma(self.m2, size=n)
        return self.beta * ratio**(1 / self.s)

class Density1(GeneralizedF):
    """
    Standard exponential.
    """
    CODE = "density-1"
    M1 = 1.
    M2 = np.inf
    S = 1.

class Density2(GeneralizedF):
    """
    Unbounded at 0 with a heavy right tail.
    """
    CODE = "density-2"
    M1 = 0.6
    M2 = 2.5
    S = 1.

class Density3(GeneralizedF):
    """
    Gamma(2): zero at the boundary.
    """
    CODE = "density-3"
    M1 = 2.
    M2 = np.inf
    S = 1.

class Density4(GeneralizedF):
    """
    Weibull with shape 2: zero at the boundary.
    """
    CODE = "density-4"
    M1 = 1.
    M2 = np.inf
    S = 2.

class Density5(GeneralizedF):
    """
    Lomax: positive at the boundary, polynomial tail.
    """
    CODE = "density-5"
    M1 = 1.
    M2 = 6.
    S = 1.

class Density6(GeneralizedF):
    """
    Close to a log-normal.
    """
    CODE = "density-6"
    M1 = 4.
    M2 = 4.
    S = 0.5

class Density7(GeneralizedF):
    """
    Half-normal: very light right tail.
    """
    CODE = "density-7"
    M1 = 0.5
    M2 = np.inf
    S = 2.

DENSITIES = {
    density.CODE: density for density in (
        Density1, Density2, Density3, Density4, Density5, Density6, Density7)
}

def get_density(density: Union[str, int, dict, GeneralizedF]) -> GeneralizedF:
    """
    Return a GeneralizedF instance from a preset id ("density-1" ...
    "density-7" or the integer 1..7), a dict of parameters
    {m1, m2, s, beta} (beta optional) or an instance (returned unchanged).
    """
    if isinstance(density, GeneralizedF):
        return density
    if isinstance(density, dict):
        unknown = set(density) - {"m1", "m2", "s", "beta"}
        if unknown:
            raise LLTKDEParameterError(
                "unknown generalized F parameters: {0}".format(", ".join(sorted(unknown))))
        return GeneralizedF(**density)
    if isinstance(density, (int, np.integer)) and not isinstance(density, bool):
        density = "density-{0}".format(density)
    try:
        return DENSITIES[density]()
    except (KeyError, TypeError):
        raise LLTKDEParameterError(
            "unknown density {0}, choices are {1}".format(density, ", ".join(DENSITIES)))

def genf_pdf(x, params) -> np.ndarray:
    """
    Return the generalized F density at x; params as accepted by get_density.
    """
    return get_density(params).pdf(x)

def genf_quantile(p: float, params) -> float:
    return get_density(params).quantile(p)

def genf_sample(n: int, params, seed=None) -> np.ndarray:
    return get_density(params).sample(n, seed=seed)

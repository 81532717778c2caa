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
from scipy.integrate import trapezoid
from lltkde.bandwidth import SmoothingSpec
from lltkde.kernels import get_kernel
from lltkde.results import DensityEstimate
from lltkde.exceptions import (
    LLTKDEDataError,
    LLTKDEDomainError,
    LLTKDEParameterError,
    LLTKDENumericalError)

class DensityEstimator:
    """
    Base class for density estimators on the positive half-line.

    `estimate` runs the pipeline

        sample -> select_smoothing -> density (on the grid) -> renormalize

    Subclasses implement `select_smoothing` and `density` and may add
    class attributes of their own.

    Parameters
    ----------
    CODE : str, required
        the estimator id used in configs and on the command line

    KERNEL : str
        kernel id. Default "gaussian".

    BANDWIDTH : float, optional
        fixed bandwidth (or Gamma smoothing parameter b); None selects it
        from the data with the estimator's default rule

    RENORMALIZE : bool
        divide the values by their integral (default True)

    RENORMALIZATION_POINTS : int
        points of the trapezoid rule used for renormalizing (default 4000)

    RENORMALIZATION_EXTENT : float
        the trapezoid rule extends to RENORMALIZATION_EXTENT times the grid
        maximum (default 1.5)

    GRID_SIZE, GRID_START, GRID_QUANTILE
        the default grid has GRID_SIZE equally spaced points from
        GRID_START to the GRID_QUANTILE empirical quantile of the sample
        (defaults 1000, 0.001, 0.999)
    """
    CODE: str = None
    KERNEL: str = "gaussian"
    BANDWIDTH: float = None
    RENORMALIZE: bool = True
    RENORMALIZATION_POINTS: int = 4000
    RENORMALIZATION_EXTENT: float = 1.5
    GRID_SIZE: int = 1000
    GRID_START: float = 0.001
    GRID_QUANTILE: float = 0.999

    def __init__(
        self,
        bandwidth: float = None,
        kernel: str = None,
        renormalize: bool = None
        ):
        self.bandwidth = self.BANDWIDTH if bandwidth is None else bandwidth
        self.kernel = get_kernel(kernel or self.KERNEL)
        self.renormalize = self.RENORMALIZE if renormalize is None else renormalize
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise LLTKDEParameterError(
                "bandwidth must be positive, got {0}".format(self.bandwidth))

    def __repr__(self):
        return "{0}(code={1})".format(self.__class__.__name__, self.CODE)

    @staticmethod
    def validate_sample(sample) -> np.ndarray:
        """
        Return the sample as a float array, rejecting empty, non-finite or
        nonpositive data.
        """
        sample = np.asarray(sample, dtype=float).ravel()
        if not len(sample):
            raise LLTKDEDataError("sample is empty")
        if not np.all(np.isfinite(sample)):
            raise LLTKDEDataError("sample contains non-finite values")
        if np.any(sample <= 0):
            raise LLTKDEDataError(
                "sample must be strictly positive, found {0} nonpositive values".format(
                    int((sample <= 0).sum())))
        return sample

    @staticmethod
    def validate_grid(grid) -> np.ndarray:
        grid = np.asarray(grid, dtype=float).ravel()
        if np.any(grid <= 0):
            raise LLTKDEDomainError(
                "estimates are only defined for x > 0; no mass is placed on x <= 0")
        if np.any(np.diff(grid) <= 0):
            raise LLTKDEParameterError("grid must be strictly increasing")
        return grid

    @classmethod
    def default_grid(cls, sample: np.ndarray) -> np.ndarray:
        """
        Return GRID_SIZE equally spaced points from GRID_START to the
        GRID_QUANTILE empirical quantile of the sample.
        """
        upper = np.quantile(sample, cls.GRID_QUANTILE)
        if upper <= cls.GRID_START:
            upper = np.max(sample)
        if upper <= cls.GRID_START:
            raise LLTKDEDataError(
                "sample is concentrated below the grid start {0}; rescale it".format(
                    cls.GRID_START))
        return np.linspace(cls.GRID_START, upper, cls.GRID_SIZE)

    def select_smoothing(self, sample: np.ndarray) -> SmoothingSpec:
        """
        Return the smoothing parameter to use for this sample.
        """
        raise NotImplementedError("estimators must implement select_smoothing")

    def density(self, x: np.ndarray, sample: np.ndarray, smoothing: SmoothingSpec) -> np.ndarray:
        """
        Return the (unnormalized) density estimate at x.
        """
        raise NotImplementedError("estimators must implement density")

    def metadata(self) -> dict:
        return {"kernel": self.kernel.CODE}

    def normalizing_constant(
        self,
        grid: np.ndarray,
        sample: np.ndarray,
        smoothing: SmoothingSpec
        ) -> float:
        """
        Return the integral of the estimate: a trapezoid rule from the grid
        minimum to RENORMALIZATION_EXTENT times the grid maximum, plus the
        rectangle between 0 and the grid minimum.
        """
        fine = np.linspace(
            grid[0], self.RENORMALIZATION_EXTENT * grid[-1], self.RENORMALIZATION_POINTS)
        values = self.density(fine, sample, smoothing)
        constant = trapezoid(values, fine) + values[0] * fine[0]
        if not np.isfinite(constant) or constant <= 0:
            raise LLTKDENumericalError(
                "cannot renormalize {0}: integral is {1}".format(self.CODE, constant))
        return float(constant)

    def estimate(self, sample: np.ndarray, grid: np.ndarray = None) -> DensityEstimate:
        """
        Estimate the density of the sample on the grid.

        Parameters
        ----------
        sample : array-like, required
            strictly positive observations

        grid : array-like, optional
            strictly increasing positive evaluation points; defaults to
            `default_grid(sample)`

        Returns
        -------
        DensityEstimate
        """
        sample = self.validate_sample(sample)
        grid = self.default_grid(sample) if grid is None else self.validate_grid(grid)
        smoothing = self.select_smoothing(sample)
        values = self.density(grid, sample, smoothing) if len(grid) else np.array([])
        constant = 1.
        if self.renormalize and len(grid):
            constant = self.normalizing_constant(grid, sample, smoothing)
            values = values / constant
        return DensityEstimate(
            grid=grid,
            values=values,
            estimator=self.CODE,
            smoothing=smoothing,
            normalization=constant,
            metadata=self.metadata())

def check_nonnegative(x: Union[float, np.ndarray]) -> np.ndarray:
    """
    Return x as a float array, raising LLTKDEDomainError for negative
    values.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise LLTKDEDomainError("estimator is only defined for x >= 0")
    return x

def check_bandwidth(h: float) -> float:
    if not h > 0:
        raise LLTKDEParameterError("bandwidth must be positive, got {0}".format(h))
    return float(h)

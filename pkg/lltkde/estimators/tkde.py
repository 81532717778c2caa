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
Transformation kernel density estimators: estimate the density of
Y = T(X) on the real line, then back-transform with
f_X(x) = f_Y(T(x)) T'(x).
"""
from typing import Iterable
import numpy as np
from lltkde.bandwidth import SmoothingSpec, plugin_bandwidth
from lltkde.loclik import LocalLikelihood, LocalFits
from lltkde.lscv import SELECTION_KINDS, smoothing_candidates, select_smoothing
from lltkde.mixins import TransformationMixin
from lltkde.results import DensityEstimate
from lltkde.transforms import get_transformation
from lltkde.exceptions import LLTKDEParameterError
from .base import DensityEstimator, check_bandwidth

class NaiveTKDE(TransformationMixin, DensityEstimator):
    """
    Naive transformation estimator: a kernel density estimate of T(X)
    back-transformed to the original scale.

    With T = log and the Gaussian kernel this is the log-normal kernel
    density estimator. The default bandwidth is the plug-in bandwidth of
    the transformed sample.

    Parameters
    ----------
    TRANSFORMATION : str
        transformation id (default "log")
    """
    CODE = "naive-lt"
    TRANSFORMATION: str = "log"

    def __init__(
        self,
        bandwidth: float = None,
        transformation: str = None,
        kernel: str = None,
        renormalize: bool = None
        ):
        super().__init__(bandwidth=bandwidth, kernel=kernel, renormalize=renormalize)
        self.transformation = self.resolve_transformation(transformation or self.TRANSFORMATION)

    def metadata(self):
        return {"kernel": self.kernel.CODE, "transformation": self.transformation.CODE}

    def select_smoothing(self, sample):
        self.check_scale(sample)
        if self.bandwidth is not None:
            return SmoothingSpec.fixed(self.bandwidth)
        return SmoothingSpec.fixed(plugin_bandwidth(self.transform_sample(sample)))

    def density(self, x, sample, smoothing):
        x = self.transformation.check_domain(x)
        h = smoothing.value
        y = self.transformation.forward(x)
        transformed = self.transform_sample(sample)
        weights = self.kernel.evaluate((y[..., np.newaxis] - transformed) / h)
        return self.back_transform(x, weights.sum(axis=-1) / (len(transformed) * h))

class NaiveProbexTKDE(NaiveTKDE):
    """
    Naive transformation estimator with the probex transformation.
    """
    CODE = "naive-pt"
    TRANSFORMATION = "probex"

class LLTKDE(TransformationMixin, DensityEstimator):
    """
    Local likelihood transformation kernel density estimator: a local
    log-polynomial likelihood fit of the density of T(X), back-transformed
    to the original scale.

    Smoothing is, in order of precedence: the fixed nearest-neighbour
    fraction ALPHA, the fixed bandwidth BANDWIDTH, or the parameter selected
    by LSCV on the transformed sample, over ALPHA_GRID when SELECTION is
    "alpha" and over BANDWIDTH_GRID when it is "bandwidth".

    Parameters
    ----------
    TRANSFORMATION : str
        transformation id (default "probex")

    DEGREE : int
        local polynomial degree, 1 or 2 (default 2)

    ALPHA : float, optional
        nearest-neighbour fraction; None (default) selects it by LSCV

    ALPHA_GRID : list of float, optional
        LSCV candidates; None (default) uses 0.10, 0.15, ..., 1.00

    SELECTION : str
        what LSCV selects when neither ALPHA nor BANDWIDTH is set: "alpha"
        (default) or "bandwidth"

    BANDWIDTH_GRID : list of float, optional
        LSCV bandwidth candidates on the transformed scale; None (default)
        uses 20 values log-spaced from 0.1 s n^(-1/5) to 3 s, s being the
        standard deviation of the transformed sample

    WARM_START : bool
        fit grid points sequentially, each starting from the previous
        point's coefficients (default False: independent fits)

    Examples
    --------
    Log-quadratic probex estimate with alpha chosen by LSCV:

    >>> estimate = LLTKDE().estimate(sample)

    A log-linear variant on the log scale with a fixed fraction:

    >>> class LogLinear(LLTKDE):
    >>>     TRANSFORMATION = "log"
    >>>     DEGREE = 1
    >>>     ALPHA = 0.7
    """
    CODE = "ll-pt"
    TRANSFORMATION: str = "probex"
    DEGREE: int = 2
    ALPHA: float = None
    ALPHA_GRID: Iterable[float] = None
    SELECTION: str = "alpha"
    BANDWIDTH_GRID: Iterable[float] = None
    WARM_START: bool = False

    def __init__(
        self,
        alpha: float = None,
        bandwidth: float = None,
        alpha_grid: Iterable[float] = None,
        selection: str = None,
        bandwidth_grid: Iterable[float] = None,
        degree: int = None,
        transformation: str = None,
        kernel: str = None,
        renormalize: bool = None,
        warm_start: bool = None
        ):
        super().__init__(bandwidth=bandwidth, kernel=kernel, renormalize=renormalize)
        self.alpha = self.ALPHA if alpha is None else alpha
        self.alpha_grid = self.ALPHA_GRID if alpha_grid is None else alpha_grid
        self.selection = self.SELECTION if selection is None else selection
        self.bandwidth_grid = self.BANDWIDTH_GRID if bandwidth_grid is None else bandwidth_grid
        self.degree = self.DEGREE if degree is None else degree
        self.transformation = self.resolve_transformation(transformation or self.TRANSFORMATION)
        self.warm_start = self.WARM_START if warm_start is None else warm_start
        if self.degree not in (1, 2):
            raise LLTKDEParameterError(
                "LLTKDE degree must be 1 or 2, got {0}".format(self.degree))
        if self.alpha is not None:
            SmoothingSpec.nn(self.alpha)
        if self.selection not in SELECTION_KINDS:
            raise LLTKDEParameterError(
                "selection must be one of {0}, got {1}".format(
                    ", ".join(SELECTION_KINDS), self.selection))

    def metadata(self):
        return {
            "kernel": self.kernel.CODE,
            "transformation": self.transformation.CODE,
            "degree": self.degree}

    def select_smoothing(self, sample):
        self.check_scale(sample)
        if self.alpha is not None:
            return SmoothingSpec.nn(self.alpha)
        if self.bandwidth is not None:
            return SmoothingSpec.fixed(self.bandwidth)
        transformed = self.transform_sample(sample)
        grid = self.alpha_grid if self.selection == "alpha" else self.bandwidth_grid
        return select_smoothing(
            transformed,
            smoothing_candidates(transformed, self.selection, grid),
            degree=self.degree,
            kernel=self.kernel)

    def local_likelihood(self, smoothing: SmoothingSpec) -> LocalLikelihood:
        return LocalLikelihood(smoothing, degree=self.degree, kernel=self.kernel)

    def transformed_fits(self, x, sample, smoothing) -> LocalFits:
        """
        Return the transformed-domain local likelihood fits at T(x).
        """
        x = self.transformation.check_domain(x)
        fitter = self.local_likelihood(smoothing)
        y = self.transformation.forward(x)
        transformed = self.transform_sample(sample)
        if self.warm_start:
            return fitter.fit_grid(y, transformed, warm_start=True).metadata["fits"]
        return fitter.fit_points(y, transformed)

    def density(self, x, sample, smoothing):
        fits = self.transformed_fits(x, sample, smoothing)
        return self.back_transform(x, fits.densities)

class LogLLTKDE(LLTKDE):
    """
    Local log-quadratic estimator with the log transformation.
    """
    CODE = "ll-lt"
    TRANSFORMATION = "log"

class ProbexLogLinearTKDE(LLTKDE):
    """
    Local log-linear estimator with the probex transformation.
    """
    CODE = "ll-pt-1"
    DEGREE = 1

class LogLogLinearTKDE(LLTKDE):
    """
    Local log-linear estimator with the log transformation.
    """
    CODE = "ll-lt-1"
    TRANSFORMATION = "log"
    DEGREE = 1

def naive_tkde(
    x: np.ndarray,
    sample: np.ndarray,
    h: float,
    transformation: str = "log",
    kernel: str = "gaussian"
    ) -> np.ndarray:
    """
    Return (1/(nh)) sum_k K((T(x) - T(X_k))/h) T'(x).

    Parameters
    ----------
    x : float or array-like, required
        strictly positive evaluation points

    sample : array-like, required
        strictly positive observations

    h : float, required
        bandwidth on the transformed scale

    transformation : str
        transformation id (default "log")

    kernel : str
        kernel id (default "gaussian")

    Returns
    -------
    ndarray
    """
    estimator = NaiveTKDE(
        bandwidth=check_bandwidth(h), transformation=transformation,
        kernel=kernel, renormalize=False)
    sample = estimator.validate_sample(sample)
    return estimator.density(x, sample, SmoothingSpec.fixed(h))

def lltkde(
    grid: np.ndarray,
    sample: np.ndarray,
    smoothing: SmoothingSpec = None,
    transformation: str = "probex",
    degree: int = 2,
    kernel: str = "gaussian",
    renormalize: bool = True
    ) -> DensityEstimate:
    """
    Return the local likelihood transformation estimate on the grid.

    Parameters
    ----------
    grid : array-like, required
        strictly increasing positive evaluation points

    sample : array-like, required
        strictly positive observations

    smoothing : SmoothingSpec, optional
        fixed bandwidth or nearest-neighbour fraction on the transformed
        scale; None selects the fraction by LSCV

    transformation : str
        "probex" (default) or "log"

    degree : int
        1 or 2 (default 2)

    kernel : str
        kernel id (default "gaussian")

    renormalize : bool
        divide by the integral of the estimate (default True)

    Returns
    -------
    DensityEstimate
    """
    transformation = get_transformation(transformation)
    variants = {
        ("probex", 2): LLTKDE,
        ("log", 2): LogLLTKDE,
        ("probex", 1): ProbexLogLinearTKDE,
        ("log", 1): LogLogLinearTKDE,
    }
    try:
        estimator_class = variants[(transformation.CODE, degree)]
    except KeyError:
        raise LLTKDEParameterError(
            "no LLTKDE variant for transformation {0} and degree {1}".format(
                transformation.CODE, degree))
    alpha = bandwidth = None
    if smoothing is not None:
        if smoothing.is_nn:
            alpha = smoothing.value
        else:
            bandwidth = smoothing.value
    estimator = estimator_class(
        alpha=alpha, bandwidth=bandwidth, kernel=kernel, renormalize=renormalize)
    return estimator.estimate(sample, grid)

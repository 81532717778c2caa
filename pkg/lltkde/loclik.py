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
Local likelihood density estimation on the real line.

At each evaluation point y the log-density is approximated by a polynomial
of degree p in (t - y), whose coefficients maximize the kernel-weighted
local likelihood

    sum_i K((Y_i - y)/h) P(Y_i - y) - n int K((t - y)/h) exp(P(t - y)) dt.

Internally the problem is solved in kernel-scaled coefficients
b_j = a_j h^j, in which the objective only depends on the data through the
weighted sums S_j = sum_i K(u_i) u_i^j, u_i = (Y_i - y)/h.
"""
import logging
from dataclasses import dataclass
import numpy as np
import pandas as pd
from lltkde.bandwidth import SmoothingSpec, nn_distance
from lltkde.kernels import get_kernel, GaussianKernel
from lltkde.results import DensityEstimate
from lltkde.exceptions import (
    LLTKDEParameterError,
    LLTKDEDataError,
    LLTKDEConvergenceError)

logger = logging.getLogger(__name__)

# evaluation points per block when accumulating the weighted sums
CHUNK_SIZE = 512

@dataclass(frozen=True)
class LocalFitResult:
    """
    Result of a local likelihood fit at one point.

    Attributes
    ----------
    coefficients : ndarray
        the fitted polynomial coefficients a_0..a_p

    density : float
        exp(a_0), or 0 where no observation carries kernel weight

    converged : bool
        whether the first-order conditions hold to tolerance

    iterations : int
        Newton iterations used

    bandwidth : float
        the effective bandwidth h(y)
    """
    coefficients: np.ndarray
    density: float
    converged: bool
    iterations: int
    bandwidth: float

@dataclass
class LocalFits:
    """
    Local likelihood fits at many points, as parallel arrays.
    """
    points: np.ndarray
    densities: np.ndarray
    coefficients: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray
    bandwidths: np.ndarray

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i) -> LocalFitResult:
        return LocalFitResult(
            coefficients=self.coefficients[i],
            density=float(self.densities[i]),
            converged=bool(self.converged[i]),
            iterations=int(self.iterations[i]),
            bandwidth=float(self.bandwidths[i]))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({
            "y": self.points,
            "density": self.densities,
            "converged": self.converged,
            "iterations": self.iterations,
            "bandwidth": self.bandwidths})
        for j in range(self.coefficients.shape[1]):
            frame["a{0}".format(j)] = self.coefficients[:, j]
        return frame

class LocalLikelihood:
    """
    Local polynomial likelihood density estimator on the real line.

    Class attributes are defaults which can be overridden by passing the
    corresponding lowercase argument to __init__ (or by subclassing).

    Parameters
    ----------
    DEGREE : int
        degree p of the local log-polynomial: 0 (local constant, equal to
        the kernel density estimator), 1 (log-linear) or 2 (log-quadratic).
        Default 2.

    KERNEL : str
        kernel id. Default "gaussian".

    TOLERANCE : float
        Newton stops once the sup-norm of the gradient in kernel-scaled
        coefficients is at most TOLERANCE times the local kernel weight
        sum_i K(u_i). Default 1e-8.

    MAX_ITERATIONS : int
        Newton iterations before giving up. Default 50.

    MAX_HALVINGS : int
        step halvings per Newton iteration. Default 30.

    FEASIBILITY_MARGIN : float
        for unbounded kernels the quadratic coefficient must stay below
        1/(2h^2) - FEASIBILITY_MARGIN. Default 1e-8.

    NO_DATA_THRESHOLD : float
        points where sum_i K(u_i) < NO_DATA_THRESHOLD * n get density 0
        without solving. Default 1e-12.

    DEGENERATE_VARIANCE : float
        log-quadratic fits at points where the kernel-weighted variance of
        the u_i is at most DEGENERATE_VARIANCE (the weight sits on a single
        observation, so the likelihood has no maximizer) get density 0
        without solving. Default 1e-6.

    Examples
    --------
    Log-quadratic fit with a nearest-neighbour bandwidth:

    >>> fitter = LocalLikelihood(SmoothingSpec.nn(0.7), degree=2)
    >>> fits = fitter.fit_points(np.linspace(-3, 3, 61), sample)
    """
    DEGREE: int = 2
    KERNEL: str = "gaussian"
    TOLERANCE: float = 1e-8
    MAX_ITERATIONS: int = 50
    MAX_HALVINGS: int = 30
    FEASIBILITY_MARGIN: float = 1e-8
    NO_DATA_THRESHOLD: float = 1e-12
    DEGENERATE_VARIANCE: float = 1e-6

    def __init__(
        self,
        smoothing: SmoothingSpec,
        degree: int = None,
        kernel: str = None,
        tolerance: float = None,
        max_iterations: int = None
        ):
        if not isinstance(smoothing, SmoothingSpec):
            raise LLTKDEParameterError(
                "smoothing must be a SmoothingSpec, got {0}".format(smoothing))
        self.smoothing = smoothing
        self.degree = self.DEGREE if degree is None else degree
        self.kernel = get_kernel(kernel or self.KERNEL)
        self.tolerance = self.TOLERANCE if tolerance is None else tolerance
        self.max_iterations = self.MAX_ITERATIONS if max_iterations is None else max_iterations

        if self.degree not in (0, 1, 2):
            raise LLTKDEParameterError(
                "degree must be 0, 1 or 2, got {0}".format(self.degree))
        if not self.tolerance > 0:
            raise LLTKDEParameterError(
                "tolerance must be positive, got {0}".format(self.tolerance))
        if self.max_iterations < 1:
            raise LLTKDEParameterError(
                "max_iterations must be at least 1, got {0}".format(self.max_iterations))

        self._hessian_index = np.add.outer(np.arange(self.degree + 1), np.arange(self.degree + 1))

    def __repr__(self):
        return "{0}({1}, degree={2}, kernel={3})".format(
            self.__class__.__name__, self.smoothing, self.degree, self.kernel.CODE)

    def bandwidths(self, points: np.ndarray, sample: np.ndarray, exclude: np.ndarray = None) -> np.ndarray:
        """
        Return the effective bandwidth h(y) at each point: the fixed
        bandwidth, or the nearest-neighbour distance D_alpha(y).
        """
        points = np.asarray(points, dtype=float)
        if self.smoothing.is_nn:
            return nn_distance(points, sample, self.smoothing.value, exclude=exclude)
        return np.full(points.shape, self.smoothing.value)

    def _validate_sample(self, sample):
        sample = np.asarray(sample, dtype=float).ravel()
        minimum = max(1, self.degree)
        if len(sample) < minimum:
            raise LLTKDEDataError(
                "a degree {0} fit needs at least {1} observations, got {2}".format(
                    self.degree, minimum, len(sample)))
        if not np.all(np.isfinite(sample)):
            raise LLTKDEDataError("sample contains non-finite values")
        return sample

    def _weighted_sums(self, points, bandwidths, sample, exclude=None):
        """
        Return S_j = sum_i K(u_i) u_i^j for j = 0..p at every point.
        """
        sums = np.empty((len(points), self.degree + 1))
        for start in range(0, len(points), CHUNK_SIZE):
            block = slice(start, start + CHUNK_SIZE)
            u = (sample - points[block, np.newaxis]) / bandwidths[block, np.newaxis]
            weights = self.kernel.evaluate(u)
            if exclude is not None:
                weights[np.arange(len(u)), exclude[block]] = 0.
            for j in range(self.degree + 1):
                sums[block, j] = (weights * u**j).sum(axis=1)
        return sums

    def _feasible(self, b, bandwidths):
        if self.degree < 2 or np.isfinite(self.kernel.SUPPORT):
            return np.ones(len(b), dtype=bool)
        return b[:, 2] <= 0.5 - self.FEASIBILITY_MARGIN * bandwidths**2

    def _scaled_objective(self, b, sums, masses):
        """
        Value, gradient and Hessian in scaled coefficients. `masses` is
        n h, so that the integral term is masses * exp(b_0) * m_0.
        """
        zeros = np.zeros(len(b))
        b1 = b[:, 1] if self.degree >= 1 else zeros
        b2 = b[:, 2] if self.degree >= 2 else zeros
        log_scale, moments = self.kernel.log_exponential_moments(b1, b2, 2 * self.degree)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            # exp(b_0) and the kernel factor combine before exponentiating
            scale = np.exp(np.log(masses) + b[:, 0] + log_scale)
            value = (sums * b).sum(axis=1) - scale * moments[:, 0]
            gradient = sums - scale[:, np.newaxis] * moments[:, :self.degree + 1]
            hessian = -scale[:, np.newaxis, np.newaxis] * moments[:, self._hessian_index]
        return value, gradient, hessian

    def _to_scaled(self, coefficients, bandwidths):
        return coefficients * bandwidths[:, np.newaxis]**np.arange(self.degree + 1)

    def _to_raw(self, b, bandwidths):
        return b / bandwidths[:, np.newaxis]**np.arange(self.degree + 1)

    def objective(self, coefficients: np.ndarray, y: float, sample: np.ndarray) -> tuple:
        """
        Evaluate the local likelihood at y.

        Parameters
        ----------
        coefficients : array-like, required
            polynomial coefficients a_0..a_p

        y : float, required
            evaluation point

        sample : array-like, required
            the sample

        Returns
        -------
        tuple of (float, ndarray, ndarray)
            value, gradient and Hessian with respect to a_0..a_p. At
            infeasible coefficients (divergent integral) the value is -inf
            and the derivatives are NaN.
        """
        sample = self._validate_sample(sample)
        points = np.array([y], dtype=float)
        bandwidths = self.bandwidths(points, sample)
        sums = self._weighted_sums(points, bandwidths, sample)
        coefficients = np.asarray(coefficients, dtype=float).reshape(1, -1)
        b = self._to_scaled(coefficients, bandwidths)
        if not self.kernel.is_feasible(b[:, 2] if self.degree >= 2 else 0.).all():
            size = self.degree + 1
            return -np.inf, np.full(size, np.nan), np.full((size, size), np.nan)
        value, gradient, hessian = self._scaled_objective(b, sums, len(sample) * bandwidths)
        powers = bandwidths[0]**np.arange(self.degree + 1)
        return (
            float(value[0]),
            gradient[0] * powers,
            hessian[0] * np.outer(powers, powers))

    def _newton_step(self, gradient, hessian):
        try:
            return np.linalg.solve(-hessian, gradient[..., np.newaxis])[..., 0]
        except np.linalg.LinAlgError:
            return np.einsum("gij,gj->gi", np.linalg.pinv(-hessian), gradient)

    def _solve(self, points, bandwidths, sums, n, init=None):
        """
        Damped Newton ascent at every point. Returns scaled coefficients,
        convergence flags, iteration counts and the mask of points with
        kernel weight above the no-data threshold.
        """
        count = len(points)
        masses = n * bandwidths
        totals = sums[:, 0]
        active = totals >= self.NO_DATA_THRESHOLD * n

        b = np.zeros((count, self.degree + 1))
        with np.errstate(divide="ignore"):
            b[:, 0] = np.log(np.maximum(totals / masses, 1e-300))

        if self.degree >= 1:
            with np.errstate(divide="ignore", invalid="ignore"):
                mean = sums[:, 1] / totals
                variance = sums[:, 2] / totals - mean**2 if self.degree == 2 else np.ones(count)
            if self.degree == 2:
                # weight concentrated on one observation: no maximizer exists
                degenerate = active & ~(variance > self.DEGENERATE_VARIANCE)
                if degenerate.any():
                    logger.debug(
                        "{0} of {1} points have a degenerate weighted variance and get "
                        "density 0".format(degenerate.sum(), count))
                active = active & ~degenerate
            if self.kernel is GaussianKernel:
                # the moment-matching solution is the exact maximizer
                start = active
                b[start, 1] = mean[start] / variance[start]
                if self.degree == 2:
                    b[start, 2] = 0.5 * (1 - 1 / variance[start])
                b[start, 0] -= 0.5 * np.log(variance[start]) + 0.5 * mean[start]**2 / variance[start]

        value, gradient, hessian = self._scaled_objective(b, sums, masses)
        if init is not None:
            init_value, init_gradient, init_hessian = self._scaled_objective(init, sums, masses)
            warm = (
                np.isfinite(init).all(axis=1)
                & self._feasible(init, bandwidths)
                & np.isfinite(init_value)
                & ~(init_value <= value))
            b[warm] = init[warm]
            value[warm] = init_value[warm]
            gradient[warm] = init_gradient[warm]
            hessian[warm] = init_hessian[warm]

        converged = np.zeros(count, dtype=bool)
        iterations = np.zeros(count, dtype=int)
        stalled = np.zeros(count, dtype=bool)

        for _ in range(self.max_iterations + 1):
            converged |= active & (np.abs(gradient).max(axis=1) <= self.tolerance * totals)
            todo = np.flatnonzero(active & ~converged & ~stalled)
            if not len(todo) or iterations[todo].min() >= self.max_iterations:
                break

            step = self._newton_step(gradient[todo], hessian[todo])
            step_size = np.ones(len(todo))
            pending = np.ones(len(todo), dtype=bool)
            for _ in range(self.MAX_HALVINGS + 1):
                rows = np.flatnonzero(pending)
                idx = todo[rows]
                candidate = b[idx] + step_size[rows, np.newaxis] * step[rows]
                new_value, new_gradient, new_hessian = self._scaled_objective(
                    candidate, sums[idx], masses[idx])
                slack = 1e-13 * (np.abs(value[idx]) + totals[idx])
                accepted = (
                    self._feasible(candidate, bandwidths[idx])
                    & np.isfinite(new_value)
                    & np.isfinite(new_gradient).all(axis=1)
                    & (new_value >= value[idx] - slack))
                hit = idx[accepted]
                b[hit] = candidate[accepted]
                value[hit] = new_value[accepted]
                gradient[hit] = new_gradient[accepted]
                hessian[hit] = new_hessian[accepted]
                pending[rows[accepted]] = False
                if not pending.any():
                    break
                step_size[pending] /= 2

            iterations[todo] += 1
            stalled[todo[pending]] = True

        return b, converged, iterations, active

    def _fit(self, points, sample, exclude=None, init=None, raise_errors=True):
        sample = self._validate_sample(sample)
        points = np.asarray(points, dtype=float).ravel()
        n = len(sample) - (1 if exclude is not None else 0)
        bandwidths = self.bandwidths(points, sample, exclude=exclude)
        sums = self._weighted_sums(points, bandwidths, sample, exclude=exclude)
        if init is not None:
            init = self._to_scaled(np.asarray(init, dtype=float).reshape(len(points), -1), bandwidths)
        b, converged, iterations, active = self._solve(points, bandwidths, sums, n, init=init)

        coefficients = self._to_raw(b, bandwidths)
        coefficients[~active] = np.nan
        coefficients[~active, 0] = -np.inf
        densities = np.where(active, np.exp(b[:, 0]), 0.)

        failed = np.flatnonzero(active & ~converged)
        if len(failed) and raise_errors:
            i = failed[0]
            raise LLTKDEConvergenceError(
                "local likelihood fit did not converge at y={0} after {1} iterations "
                "({2} of {3} points failed)".format(
                    points[i], iterations[i], len(failed), len(points)),
                coefficients=coefficients[i],
                grid_index=int(i))

        return LocalFits(
            points=points,
            densities=densities,
            coefficients=coefficients,
            converged=converged,
            iterations=iterations,
            bandwidths=bandwidths)

    def fit_at(self, y: float, sample: np.ndarray, init: np.ndarray = None) -> LocalFitResult:
        """
        Fit the local likelihood at a single point.

        Parameters
        ----------
        y : float, required
            evaluation point

        sample : array-like, required
            the sample (at least max(1, p) observations)

        init : array-like, optional
            starting coefficients a_0..a_p, used when they score higher
            than the default start: the moment-matching solution for the
            Gaussian kernel, otherwise a_0 = log(raw KDE at y) with higher
            coefficients 0

        Returns
        -------
        LocalFitResult

        Raises
        ------
        LLTKDEConvergenceError
            if Newton does not converge within MAX_ITERATIONS
        """
        if init is not None:
            init = np.asarray(init, dtype=float).reshape(1, -1)
        fits = self._fit(np.array([y], dtype=float), sample, init=init)
        return fits[0]

    def fit_points(
        self,
        points: np.ndarray,
        sample: np.ndarray,
        leave_one_out: bool = False,
        raise_errors: bool = True
        ) -> LocalFits:
        """
        Fit the local likelihood independently (cold start) at every point.

        Parameters
        ----------
        points : array-like, required
            evaluation points

        sample : array-like, required
            the sample

        leave_one_out : bool
            if True, `points` must be the sample itself and the fit at the
            k-th point leaves out the k-th observation

        raise_errors : bool
            raise on non-convergence (default True); if False, unconverged
            points are flagged in the result

        Returns
        -------
        LocalFits
        """
        exclude = None
        if leave_one_out:
            if len(points) != len(sample):
                raise LLTKDEParameterError(
                    "leave-one-out fits must be evaluated at the sample points")
            exclude = np.arange(len(sample))
        return self._fit(points, sample, exclude=exclude, raise_errors=raise_errors)

    def fit_grid(self, grid: np.ndarray, sample: np.ndarray, warm_start: bool = True) -> DensityEstimate:
        """
        Fit the local likelihood at every grid point.

        With warm_start, each point starts Newton from the coefficients
        fitted at the previous grid point (falling back to the cold start
        where those are infeasible); otherwise all points are fitted
        independently.

        Parameters
        ----------
        grid : array-like, required
            strictly increasing evaluation points

        sample : array-like, required
            the sample

        warm_start : bool
            default True

        Returns
        -------
        DensityEstimate
            the transformed-domain density estimate; per-point fit details
            are in metadata["fits"]
        """
        grid = np.asarray(grid, dtype=float).ravel()
        if np.any(np.diff(grid) <= 0):
            raise LLTKDEParameterError("grid must be strictly increasing")
        if not warm_start or len(grid) < 2:
            fits = self.fit_points(grid, sample)
        else:
            results = []
            previous = None
            for i, y in enumerate(grid):
                try:
                    result = self.fit_at(y, sample, init=previous)
                except LLTKDEConvergenceError as e:
                    e.grid_index = i
                    raise
                results.append(result)
                previous = result.coefficients if result.converged else None
            fits = LocalFits(
                points=grid,
                densities=np.array([r.density for r in results]),
                coefficients=np.array([r.coefficients for r in results]),
                converged=np.array([r.converged for r in results]),
                iterations=np.array([r.iterations for r in results]),
                bandwidths=np.array([r.bandwidth for r in results]))

        return DensityEstimate(
            grid=grid,
            values=fits.densities,
            estimator="loclik",
            smoothing=self.smoothing,
            metadata={"degree": self.degree, "kernel": self.kernel.CODE, "fits": fits})

    def moment_solution(self, points: np.ndarray, sample: np.ndarray) -> np.ndarray:
        """
        Return the exact maximizer's density for the Gaussian kernel, which
        matches the first p weighted moments of the data.

        With the Gaussian kernel the fitted local density is proportional
        to a normal density in u whose mean and variance equal the
        kernel-weighted mean and variance of the u_i.
        """
        if self.kernel is not GaussianKernel:
            raise LLTKDEParameterError("moment_solution requires the Gaussian kernel")
        sample = self._validate_sample(sample)
        points = np.asarray(points, dtype=float).ravel()
        bandwidths = self.bandwidths(points, sample)
        masses = len(sample) * bandwidths
        sums = self._weighted_sums(points, bandwidths, sample)
        totals = sums[:, 0]
        if self.degree == 0:
            return totals / masses
        mean = sums[:, 1] / totals
        if self.degree == 1:
            return totals / (masses * np.exp(0.5 * mean**2))
        variance = sums[:, 2] / totals - mean**2
        return totals / (masses * np.sqrt(variance) * np.exp(0.5 * mean**2 / variance))

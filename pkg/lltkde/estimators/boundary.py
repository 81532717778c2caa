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
Symmetric-kernel estimators corrected for the boundary at 0.
"""
import numpy as np
from lltkde.bandwidth import SmoothingSpec, plugin_bandwidth
from lltkde.kernels import get_kernel
from .base import DensityEstimator, check_nonnegative, check_bandwidth

class SymmetricKernelEstimator(DensityEstimator):
    """
    Base class for boundary-corrected estimators built on a symmetric
    kernel. The bandwidth defaults to the Sheather-Jones plug-in bandwidth
    of the raw sample.

    Subclasses implement `correct`, which receives the scaled distances
    u_k = (X_k - x)/h, the kernel weights K(u_k) and c = x/h.
    """

    def select_smoothing(self, sample):
        if self.bandwidth is not None:
            return SmoothingSpec.fixed(self.bandwidth)
        return SmoothingSpec.fixed(plugin_bandwidth(sample))

    def correct(self, u: np.ndarray, weights: np.ndarray, c: np.ndarray, h: float) -> np.ndarray:
        raise NotImplementedError("boundary estimators must implement correct")

    def density(self, x, sample, smoothing):
        x = check_nonnegative(x)
        h = smoothing.value
        u = (sample - x[..., np.newaxis]) / h
        return self.correct(u, self.kernel.evaluate(u), x / h, h)

class ReflectionKDE(SymmetricKernelEstimator):
    """
    Reflection estimator: the raw KDE of the sample and its mirror image
    about 0, restricted to x >= 0.
    """
    CODE = "reflect"

    def correct(self, u, weights, c, h):
        # K((x + X_k)/h) = K(u_k + 2c)
        mirrored = self.kernel.evaluate(u + 2 * c[..., np.newaxis])
        return (weights + mirrored).sum(axis=-1) / (u.shape[-1] * h)

class CutAndNormaliseKDE(SymmetricKernelEstimator):
    """
    Cut-and-normalise estimator: the raw KDE divided by the kernel mass
    W_0(x/h) that falls on the positive half-line.
    """
    CODE = "can"

    def correct(self, u, weights, c, h):
        raw = weights.sum(axis=-1) / (u.shape[-1] * h)
        return raw / self.kernel.partial_moment(0, c)

class BoundaryCorrectedKDE(SymmetricKernelEstimator):
    """
    Non-negative boundary-corrected estimator:

        f_CN(x) exp(f_LL(x) / f_CN(x) - 1)

    where f_CN is the cut-and-normalise estimate and f_LL the linear
    boundary-kernel estimate built from the partial moments W_0, W_1, W_2.
    Returns 0 where f_CN is 0.
    """
    CODE = "bound"

    def correct(self, u, weights, c, h):
        n = u.shape[-1]
        w0, w1, w2 = (self.kernel.partial_moment(j, c) for j in range(3))
        cut = (weights.sum(axis=-1) / (n * h)) / w0
        linear_weights = (w2[..., np.newaxis] - w1[..., np.newaxis] * u) * weights
        linear = linear_weights.sum(axis=-1) / (n * h) / (w0 * w2 - w1**2)
        positive = cut > 0
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            combined = cut * np.exp(linear / np.where(positive, cut, 1.) - 1)
        return np.where(positive, combined, 0.)

def raw_kde(x: np.ndarray, sample: np.ndarray, h: float, kernel: str = "gaussian") -> np.ndarray:
    """
    Return the uncorrected kernel density estimate (1/(nh)) sum_k K((x - X_k)/h).
    """
    h = check_bandwidth(h)
    x = np.asarray(x, dtype=float)
    sample = np.asarray(sample, dtype=float)
    u = (x[..., np.newaxis] - sample) / h
    return get_kernel(kernel).evaluate(u).sum(axis=-1) / (len(sample) * h)

def _evaluate(estimator_class, x, sample, h, kernel):
    h = check_bandwidth(h)
    estimator = estimator_class(bandwidth=h, kernel=kernel, renormalize=False)
    sample = estimator.validate_sample(sample)
    return estimator.density(x, sample, SmoothingSpec.fixed(h))

def reflection_kde(x, sample, h, kernel="gaussian"):
    """
    Return (1/(nh)) sum_k [K((x - X_k)/h) + K((x + X_k)/h)] for x >= 0.
    """
    return _evaluate(ReflectionKDE, x, sample, h, kernel)

def cut_and_normalise_kde(x, sample, h, kernel="gaussian"):
    """
    Return the raw KDE at x >= 0 divided by W_0(x/h).
    """
    return _evaluate(CutAndNormaliseKDE, x, sample, h, kernel)

def boundary_corrected_kde(x, sample, h, kernel="gaussian"):
    """
    Return the non-negative boundary-corrected estimate at x >= 0.
    """
    return _evaluate(BoundaryCorrectedKDE, x, sample, h, kernel)

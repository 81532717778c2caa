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

import numpy as np
from scipy.stats import gamma
from lltkde.bandwidth import SmoothingSpec, gamma_reference_bandwidth
from .base import DensityEstimator, check_nonnegative, check_bandwidth

# evaluation points are processed in blocks to bound memory
BLOCK_SIZE = 256

class GammaKDE(DensityEstimator):
    """
    Gamma kernel density estimator: a mixture of Gamma densities with
    shape x/b + 1 and scale b, evaluated at the observations.

    The smoothing parameter b defaults to the Gamma reference rule.

    Parameters
    ----------
    BANDWIDTH : float, optional
        the smoothing parameter b; None (default) uses the reference rule
    """
    CODE = "gamma"

    def metadata(self):
        return {"kernel": "gamma"}

    def select_smoothing(self, sample):
        if self.bandwidth is not None:
            return SmoothingSpec.fixed(self.bandwidth)
        return SmoothingSpec.fixed(gamma_reference_bandwidth(sample))

    @staticmethod
    def shape(x: np.ndarray, b: float) -> np.ndarray:
        return x / b + 1

    def density(self, x, sample, smoothing):
        x = check_nonnegative(x)
        b = smoothing.value
        flat = x.ravel()
        values = np.empty(len(flat))
        for start in range(0, len(flat), BLOCK_SIZE):
            block = flat[start:start + BLOCK_SIZE]
            shapes = self.shape(block, b)[:, np.newaxis]
            values[start:start + BLOCK_SIZE] = gamma.pdf(sample, shapes, scale=b).mean(axis=1)
        return values.reshape(x.shape)

class ModifiedGammaKDE(GammaKDE):
    """
    Modified Gamma kernel density estimator: shape x/b away from the
    boundary and (x/(2b))^2 + 1 within 2b of it.
    """
    CODE = "mod-gamma"

    @staticmethod
    def shape(x, b):
        return np.where(x >= 2 * b, x / b, (x / (2 * b))**2 + 1)

def gamma_kde(
    x: np.ndarray,
    sample: np.ndarray,
    b: float,
    modified: bool = False
    ) -> np.ndarray:
    """
    Return (1/n) sum_k g(X_k; shape(x, b), b), g being the Gamma density.

    Parameters
    ----------
    x : float or array-like, required
        nonnegative evaluation points

    sample : array-like, required
        positive observations

    b : float, required
        smoothing parameter

    modified : bool
        use the modified shape function (default False)

    Returns
    -------
    ndarray
    """
    b = check_bandwidth(b)
    estimator_class = ModifiedGammaKDE if modified else GammaKDE
    estimator = estimator_class(bandwidth=b, renormalize=False)
    sample = estimator.validate_sample(sample)
    return estimator.density(x, sample, SmoothingSpec.fixed(b))

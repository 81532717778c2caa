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
from scipy.special import ndtr
from .base import Kernel

SQRT_2PI = np.sqrt(2 * np.pi)
SQRT_PI = np.sqrt(np.pi)

class GaussianKernel(Kernel):
    """
    Standard normal kernel.

    The local likelihood integral term and the partial moments are
    available in closed form.
    """
    CODE = "gaussian"
    SUPPORT = np.inf
    MOMENTS = (1., 0., 1., 0., 3., 0., 15.)
    SQUARED_MOMENTS = (
        1 / (2 * SQRT_PI),
        0.,
        1 / (4 * SQRT_PI),
        0.,
        3 / (8 * SQRT_PI),
    )

    @classmethod
    def evaluate(cls, u):
        u = np.asarray(u, dtype=float)
        return np.exp(-0.5 * u**2) / SQRT_2PI

    @classmethod
    def partial_moment(cls, j, c):
        c = np.asarray(c, dtype=float)
        if j == 0:
            return ndtr(c)
        if j == 1:
            return cls.evaluate(c)
        if j == 2:
            return ndtr(c) - c * cls.evaluate(c)
        raise NotImplementedError("partial moments are implemented up to order 2")

    @classmethod
    def is_feasible(cls, b2):
        return np.asarray(b2) < 0.5

    @classmethod
    def log_exponential_moments(cls, b1, b2, max_order):
        """
        Closed form: phi(u) exp(b1 u + b2 u^2) is c times the N(m, s^2)
        density with s^2 = 1/(1 - 2 b2), m = b1 s^2 and
        log c = log(s) + b1 m / 2, so m_j / c = E[U^j].
        """
        if max_order > 4:
            raise NotImplementedError(
                "exponential moments are implemented up to order 4")
        b1, b2 = np.broadcast_arrays(
            np.asarray(b1, dtype=float), np.asarray(b2, dtype=float))
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            variance = np.where(cls.is_feasible(b2), 1 / (1 - 2 * b2), np.inf)
            mean = b1 * variance
            log_scale = 0.5 * np.log(variance) + 0.5 * b1 * mean
            raw = [
                np.ones_like(mean),
                mean,
                mean**2 + variance,
                mean**3 + 3 * mean * variance,
                mean**4 + 6 * mean**2 * variance + 3 * variance**2,
            ]
            return log_scale, np.stack(raw[:max_order + 1], axis=-1)

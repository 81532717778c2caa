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
from .base import Kernel

SQRT5 = np.sqrt(5)
NORMALIZER = 3 / (4 * SQRT5)

class EpanechnikovKernel(Kernel):
    """
    Epanechnikov kernel rescaled to unit variance, with support
    |u| <= sqrt(5).
    """
    CODE = "epanechnikov"
    SUPPORT = SQRT5
    MOMENTS = (1., 0., 1., 0., 15 / 7, 0., 125 / 21)
    SQUARED_MOMENTS = (
        3 / (5 * SQRT5),
        0.,
        3 * SQRT5 / 35,
        0.,
        SQRT5 / 7,
    )

    @classmethod
    def evaluate(cls, u):
        u = np.asarray(u, dtype=float)
        return np.where(np.abs(u) <= SQRT5, NORMALIZER * (1 - u**2 / 5), 0.)

    @classmethod
    def _antiderivative(cls, j, u):
        return NORMALIZER * (u**(j + 1) / (j + 1) - u**(j + 3) / (5 * (j + 3)))

    @classmethod
    def partial_moment(cls, j, c):
        lower = np.clip(-np.asarray(c, dtype=float), -SQRT5, SQRT5)
        return cls._antiderivative(j, SQRT5) - cls._antiderivative(j, lower)

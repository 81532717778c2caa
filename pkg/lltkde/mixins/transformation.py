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

import warnings
import numpy as np
from lltkde.transforms import get_transformation, ProbexTransformation

# probex assumes data on roughly unit scale
PROBEX_MEAN_RANGE = (0.1, 10)

class TransformationMixin:
    """
    Mixin for estimators that work in a transformed domain.

    The host class must set `self.transformation` (a Transformation class)
    before the mixin methods are used; `resolve_transformation` turns a
    string id into the class.
    """

    @staticmethod
    def resolve_transformation(transformation):
        return get_transformation(transformation)

    def check_scale(self, sample: np.ndarray) -> None:
        """
        Warn if probex is applied to data far from unit scale.

        Estimators call this once per `select_smoothing`, which every
        `estimate` goes through, rather than on each transformation of the
        sample.
        """
        if self.transformation is ProbexTransformation:
            mean = np.mean(sample)
            lower, upper = PROBEX_MEAN_RANGE
            if not lower <= mean <= upper:
                warnings.warn(
                    "probex transformation applied to a sample with mean {0:.4g}; "
                    "rescale the data to mean 1 first".format(mean),
                    UserWarning, stacklevel=3)

    def transform_sample(self, sample: np.ndarray, check_scale: bool = False) -> np.ndarray:
        """
        Return T(sample), checking the scale first if `check_scale`.
        """
        if check_scale:
            self.check_scale(sample)
        return self.transformation.forward(sample)

    def back_transform(self, x: np.ndarray, transformed_values: np.ndarray) -> np.ndarray:
        """
        Return f_Y(T(x)) T'(x), the density of X implied by a density of
        Y = T(X) evaluated at T(x).
        """
        return transformed_values * self.transformation.derivative(x, 1)

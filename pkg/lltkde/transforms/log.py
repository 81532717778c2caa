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

from math import factorial
import numpy as np
from .base import Transformation

class LogTransformation(Transformation):
    """
    T(x) = log(x). With a Gaussian kernel the naive estimator built on it is
    the log-normal kernel density estimator.
    """
    CODE = "log"

    @classmethod
    def _forward(cls, x):
        return np.log(x)

    @classmethod
    def _inverse(cls, y):
        return np.exp(y)

    @classmethod
    def _derivative(cls, x, order):
        return (-1)**(order - 1) * factorial(order - 1) / x**order

def log_transform(x):
    """
    Return the natural logarithm of strictly positive x.
    """
    return LogTransformation.forward(x)

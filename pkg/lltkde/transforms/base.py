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
from lltkde.exceptions import LLTKDEDomainError, LLTKDEParameterError

MAX_DERIVATIVE_ORDER = 5

class Transformation:
    """
    Base class for smooth increasing maps T from the positive half-line onto
    the real line, with T(0+) = -inf and T(inf) = inf.

    Transformation classes are used through their classmethods. Subclasses
    must implement `_forward`, `_inverse` and `_derivative`.

    Parameters
    ----------
    CODE : str, required
        the string id used in configs and on the command line
    """
    CODE: str = None

    @classmethod
    def check_domain(cls, x: Union[float, np.ndarray]) -> np.ndarray:
        """
        Return x as a float array, raising LLTKDEDomainError unless every
        value is strictly positive.
        """
        x = np.asarray(x, dtype=float)
        if not np.all(x > 0):
            raise LLTKDEDomainError(
                "{0} transformation is only defined for x > 0, got {1}".format(
                    cls.CODE, x[~(x > 0)].ravel()[:5].tolist()))
        return x

    @classmethod
    def forward(cls, x: Union[float, np.ndarray]) -> np.ndarray:
        """
        Return T(x).

        Parameters
        ----------
        x : float or array-like, required
            strictly positive values

        Returns
        -------
        ndarray
        """
        return cls._forward(cls.check_domain(x))

    @classmethod
    def inverse(cls, y: Union[float, np.ndarray]) -> np.ndarray:
        """
        Return T^-1(y).
        """
        return cls._inverse(np.asarray(y, dtype=float))

    @classmethod
    def derivative(cls, x: Union[float, np.ndarray], order: int = 1) -> np.ndarray:
        """
        Return the derivative of the given order (1..5) of T at x.

        Parameters
        ----------
        x : float or array-like, required
            strictly positive values

        order : int
            derivative order, 1 to 5 (default 1)

        Returns
        -------
        ndarray
        """
        if order not in range(1, MAX_DERIVATIVE_ORDER + 1):
            raise LLTKDEParameterError(
                "derivative order must be between 1 and {0}, got {1}".format(
                    MAX_DERIVATIVE_ORDER, order))
        return cls._derivative(cls.check_domain(x), order)

    @classmethod
    def derivatives(cls, x: Union[float, np.ndarray], max_order: int = MAX_DERIVATIVE_ORDER) -> list:
        """
        Return [T'(x), T''(x), ..., T^(max_order)(x)].
        """
        return [cls.derivative(x, order) for order in range(1, max_order + 1)]

    @classmethod
    def _forward(cls, x):
        raise NotImplementedError("transformations must implement _forward")

    @classmethod
    def _inverse(cls, y):
        raise NotImplementedError("transformations must implement _inverse")

    @classmethod
    def _derivative(cls, x, order):
        raise NotImplementedError("transformations must implement _derivative")

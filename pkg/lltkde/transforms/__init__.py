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
Transformations of the positive half-line onto the real line.

Classes
-------
Transformation
    Base class for all transformations.

LogTransformation
    T(x) = log(x).

ProbexTransformation
    T(x) = Phi^-1(1 - exp(-x)).

Functions
---------
get_transformation
    Look up a transformation class by its string id.

log_transform, probex, variance_ratio
    Functional shortcuts.
"""
from typing import Union
from lltkde.exceptions import LLTKDEParameterError
from .base import Transformation
from .log import LogTransformation, log_transform
from .probex import ProbexTransformation, probex, variance_ratio

TRANSFORMATIONS = {
    LogTransformation.CODE: LogTransformation,
    ProbexTransformation.CODE: ProbexTransformation,
}

def get_transformation(transformation: Union[str, type]) -> type:
    """
    Return the transformation class for a string id ("log", "probex").
    Transformation classes are passed through unchanged.
    """
    if isinstance(transformation, type) and issubclass(transformation, Transformation):
        return transformation
    try:
        return TRANSFORMATIONS[transformation]
    except (KeyError, TypeError):
        raise LLTKDEParameterError(
            "unknown transformation {0}, choices are {1}".format(
                transformation, ", ".join(sorted(TRANSFORMATIONS))))

__all__ = [
    'Transformation',
    'LogTransformation',
    'ProbexTransformation',
    'get_transformation',
    'log_transform',
    'probex',
    'variance_ratio',
]

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
Density estimators for positive data.

Classes
-------
DensityEstimator
    Base class for all estimators.

NaiveTKDE, NaiveProbexTKDE
    Naive transformation kernel density estimators.

LLTKDE, LogLLTKDE, ProbexLogLinearTKDE, LogLogLinearTKDE
    Local likelihood transformation kernel density estimators.

GammaKDE, ModifiedGammaKDE
    Gamma kernel density estimators.

ReflectionKDE, CutAndNormaliseKDE, BoundaryCorrectedKDE
    Boundary-corrected symmetric-kernel estimators.

Functions
---------
get_estimator
    Look up an estimator class by its string id.

naive_tkde, lltkde, gamma_kde, raw_kde, reflection_kde,
cut_and_normalise_kde, boundary_corrected_kde
    Functional shortcuts.
"""
from typing import Union
from lltkde.exceptions import LLTKDEParameterError
from .base import DensityEstimator
from .tkde import (
    NaiveTKDE,
    NaiveProbexTKDE,
    LLTKDE,
    LogLLTKDE,
    ProbexLogLinearTKDE,
    LogLogLinearTKDE,
    naive_tkde,
    lltkde)
from .gamma import GammaKDE, ModifiedGammaKDE, gamma_kde
from .boundary import (
    ReflectionKDE,
    CutAndNormaliseKDE,
    BoundaryCorrectedKDE,
    raw_kde,
    reflection_kde,
    cut_and_normalise_kde,
    boundary_corrected_kde)

ESTIMATORS = {
    estimator.CODE: estimator for estimator in (
        NaiveTKDE,
        NaiveProbexTKDE,
        LogLLTKDE,
        LLTKDE,
        LogLogLinearTKDE,
        ProbexLogLinearTKDE,
        GammaKDE,
        ModifiedGammaKDE,
        ReflectionKDE,
        CutAndNormaliseKDE,
        BoundaryCorrectedKDE)
}

def get_estimator(estimator: Union[str, type]) -> type:
    """
    Return the estimator class for a string id (see ESTIMATORS).
    Estimator classes are passed through unchanged.
    """
    if isinstance(estimator, type) and issubclass(estimator, DensityEstimator):
        return estimator
    try:
        return ESTIMATORS[estimator]
    except (KeyError, TypeError):
        raise LLTKDEParameterError(
            "unknown estimator {0}, choices are {1}".format(
                estimator, ", ".join(ESTIMATORS)))

__all__ = [
    'DensityEstimator',
    'NaiveTKDE',
    'NaiveProbexTKDE',
    'LLTKDE',
    'LogLLTKDE',
    'ProbexLogLinearTKDE',
    'LogLogLinearTKDE',
    'GammaKDE',
    'ModifiedGammaKDE',
    'ReflectionKDE',
    'CutAndNormaliseKDE',
    'BoundaryCorrectedKDE',
    'ESTIMATORS',
    'get_estimator',
    'naive_tkde',
    'lltkde',
    'gamma_kde',
    'raw_kde',
    'reflection_kde',
    'cut_and_normalise_kde',
    'boundary_corrected_kde',
]

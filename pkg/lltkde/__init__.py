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
Local likelihood transformation kernel density estimation for positive
random variables.

Classes
-------
LLTKDE
    Local likelihood transformation kernel density estimator.

LocalLikelihood
    Local polynomial likelihood density estimator on the real line.

DensityEstimate
    Density values on a grid with their metadata.

SmoothingSpec
    A fixed bandwidth or a nearest-neighbour fraction.

Benchmark
    Monte Carlo benchmark of density estimators.

Modules
-------
kernels
    Symmetric unit-variance kernels.

transforms
    Transformations of the positive half-line onto the real line.

estimators
    The estimators and their competitors.

genf
    Generalized F test densities.

asymptotics
    Asymptotic bias and variance expressions.
"""
from ._version import __version__

from .bandwidth import SmoothingSpec
from .results import DensityEstimate
from .loclik import LocalLikelihood
from .estimators import LLTKDE
from .bench import Benchmark
from . import kernels
from . import transforms
from . import estimators
from . import genf
from . import asymptotics

__all__ = [
    'LLTKDE',
    'LocalLikelihood',
    'DensityEstimate',
    'SmoothingSpec',
    'Benchmark',
    'kernels',
    'transforms',
    'estimators',
    'genf',
    'asymptotics',
]

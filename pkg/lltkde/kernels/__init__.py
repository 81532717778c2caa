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
Symmetric unit-variance kernels.

Classes
-------
Kernel
    Base class for all kernels.

GaussianKernel
    Standard normal kernel (the default everywhere).

EpanechnikovKernel
    Epanechnikov kernel rescaled to unit variance.

Functions
---------
get_kernel
    Look up a kernel class by its string id.
"""
from typing import Union
from lltkde.exceptions import LLTKDEParameterError
from .base import Kernel
from .gaussian import GaussianKernel
from .epanechnikov import EpanechnikovKernel

KERNELS = {
    GaussianKernel.CODE: GaussianKernel,
    EpanechnikovKernel.CODE: EpanechnikovKernel,
}

def get_kernel(kernel: Union[str, type]) -> type:
    """
    Return the kernel class for a string id ("gaussian", "epanechnikov").
    Kernel classes are passed through unchanged.
    """
    if isinstance(kernel, type) and issubclass(kernel, Kernel):
        return kernel
    try:
        return KERNELS[kernel]
    except (KeyError, TypeError):
        raise LLTKDEParameterError(
            "unknown kernel {0}, choices are {1}".format(
                kernel, ", ".join(sorted(KERNELS))))

__all__ = [
    'Kernel',
    'GaussianKernel',
    'EpanechnikovKernel',
    'get_kernel',
]

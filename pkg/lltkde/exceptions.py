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

class LLTKDEError(Exception):
    pass

class LLTKDEParameterError(LLTKDEError):
    pass

class LLTKDEDomainError(LLTKDEParameterError):
    pass

class LLTKDEDataError(LLTKDEError):
    pass

class LLTKDENumericalError(LLTKDEError):
    pass

class LLTKDEConvergenceError(LLTKDENumericalError):
    """
    Raised when the local likelihood Newton solver does not converge.

    Attributes
    ----------
    coefficients : ndarray
        the last Newton iterate, in raw polynomial coefficients a_0..a_p

    grid_index : int or None
        position of the failing point in the evaluation grid, if the
        failure happened inside a grid fit
    """
    def __init__(self, message, coefficients=None, grid_index=None):
        super().__init__(message)
        self.coefficients = coefficients
        self.grid_index = grid_index

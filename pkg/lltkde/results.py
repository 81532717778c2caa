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

from dataclasses import dataclass, field
import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from lltkde.bandwidth import SmoothingSpec
from lltkde.exceptions import LLTKDEParameterError

@dataclass
class DensityEstimate:
    """
    Density values on an evaluation grid, with the metadata needed to
    reproduce them.

    Attributes
    ----------
    grid : ndarray
        strictly increasing evaluation points

    values : ndarray
        density values at the grid points

    estimator : str
        id of the estimator that produced the values

    smoothing : SmoothingSpec or None
        the resolved smoothing parameter

    normalization : float
        the constant the raw values were divided by (1.0 if not renormalized)

    metadata : dict
        estimator-specific details (transformation, degree, kernel, ...)
    """
    grid: np.ndarray
    values: np.ndarray
    estimator: str
    smoothing: SmoothingSpec = None
    normalization: float = 1.
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.grid)

    def boundary_value(self) -> float:
        """
        Return the value at the smallest grid point, the practical stand-in
        for the limit at the boundary.
        """
        if len(self.grid) == 0:
            raise LLTKDEParameterError("cannot take the boundary value of an empty estimate")
        return float(self.values[0])

    def integral(self) -> float:
        """
        Return the trapezoid integral of the values over the grid.
        """
        return float(trapezoid(self.values, self.grid))

    def rescaled(self, scale: float) -> "DensityEstimate":
        """
        Return the estimate of the density of scale * X, given this estimate
        of the density of X: grid multiplied, values divided by scale.
        """
        return DensityEstimate(
            grid=self.grid * scale,
            values=self.values / scale,
            estimator=self.estimator,
            smoothing=self.smoothing,
            normalization=self.normalization,
            metadata=dict(self.metadata, scale=scale))

    def to_frame(self) -> pd.DataFrame:
        """
        Return a DataFrame with columns x and density.
        """
        return pd.DataFrame({"x": self.grid, "density": self.values})

    def to_dict(self) -> dict:
        """
        Return a JSON-serializable representation including metadata.
        """
        return {
            "estimator": self.estimator,
            "smoothing": self.smoothing.to_dict() if self.smoothing else None,
            "normalization": self.normalization,
            "metadata": self.metadata,
            "x": self.grid.tolist(),
            "density": self.values.tolist(),
        }

def estimate_boundary_value(estimate: DensityEstimate) -> float:
    """
    Return the estimate's value at its smallest grid point.
    """
    return estimate.boundary_value()

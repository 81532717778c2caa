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
Smoothing parameters: fixed bandwidths and nearest-neighbour fractions,
nearest-neighbour distances, and the reference rules used by the
competitor estimators.
"""
from dataclasses import dataclass
from typing import Union
import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln
from lltkde.exceptions import (
    LLTKDEParameterError,
    LLTKDEDataError,
    LLTKDENumericalError)

NN_DISTANCE_FLOOR = 1e-12

@dataclass(frozen=True)
class SmoothingSpec:
    """
    Either a fixed bandwidth h > 0 (kind "fixed") or a nearest-neighbour
    fraction 0 < alpha <= 1 (kind "nn").
    """
    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("fixed", "nn"):
            raise LLTKDEParameterError(
                "smoothing kind must be 'fixed' or 'nn', got {0}".format(self.kind))
        if not np.isfinite(self.value) or self.value <= 0:
            raise LLTKDEParameterError(
                "smoothing value must be positive, got {0}".format(self.value))
        if self.kind == "nn" and self.value > 1:
            raise LLTKDEParameterError(
                "nearest-neighbour fraction must be in (0, 1], got {0}".format(self.value))

    @classmethod
    def fixed(cls, h: float) -> "SmoothingSpec":
        return cls("fixed", float(h))

    @classmethod
    def nn(cls, alpha: float) -> "SmoothingSpec":
        return cls("nn", float(alpha))

    @property
    def is_nn(self) -> bool:
        return self.kind == "nn"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value}

    def __str__(self):
        return "{0}={1:g}".format("alpha" if self.is_nn else "h", self.value)

def nn_count(alpha: float, n: int) -> int:
    """
    Return floor(alpha * n), raising LLTKDEParameterError if it is 0.
    """
    # tolerance so that e.g. 0.29 * 100 counts 29 neighbours
    k = int(np.floor(alpha * n + 1e-9))
    if k < 1:
        raise LLTKDEParameterError(
            "alpha={0} is too small for n={1} (floor(alpha*n) = 0)".format(alpha, n))
    return k

def nn_distance(
    y: Union[float, np.ndarray],
    sample: np.ndarray,
    alpha: float,
    exclude: np.ndarray = None
    ) -> np.ndarray:
    """
    Return D_alpha(y), the distance from y to its floor(alpha*n)-th closest
    sample point, floored at 1e-12.

    Parameters
    ----------
    y : float or array-like, required
        evaluation point(s)

    sample : array-like, required
        the sample

    alpha : float, required
        nearest-neighbour fraction in (0, 1]

    exclude : array-like of int, optional
        for each evaluation point, the index of a sample point to leave out
        (leave-one-out); the neighbour count is then floor(alpha*(n-1))

    Returns
    -------
    ndarray
        distances, same shape as y
    """
    if not 0 < alpha <= 1:
        raise LLTKDEParameterError(
            "nearest-neighbour fraction must be in (0, 1], got {0}".format(alpha))
    sample = np.asarray(sample, dtype=float)
    y = np.asarray(y, dtype=float)
    distances = np.abs(y[..., np.newaxis] - sample)
    n = len(sample)
    if exclude is not None:
        n -= 1
        distances = distances.reshape(-1, len(sample))
        distances[np.arange(len(distances)), np.asarray(exclude).ravel()] = np.inf
        distances = distances.reshape(y.shape + (len(sample),))
    k = nn_count(alpha, n)
    kth = np.partition(distances, k - 1, axis=-1)[..., k - 1]
    return np.maximum(kth, NN_DISTANCE_FLOOR)

def _validated(sample, minimum_size):
    sample = np.asarray(sample, dtype=float)
    if len(sample) < minimum_size:
        raise LLTKDEDataError(
            "at least {0} observations are required, got {1}".format(
                minimum_size, len(sample)))
    if not np.all(np.isfinite(sample)):
        raise LLTKDEDataError("sample contains non-finite values")
    if np.ptp(sample) == 0:
        raise LLTKDEDataError("sample has zero variance")
    return sample

def plugin_bandwidth(sample: np.ndarray, method: str = "ste") -> float:
    """
    Return the Sheather-Jones plug-in bandwidth of a Gaussian-kernel KDE.

    The pilot functionals use exact pairwise sums. The second-stage
    functional uses the normal reference.

    Parameters
    ----------
    sample : array-like, required
        at least 10 observations

    method : str
        "ste" (solve-the-equation, default) or "dpi" (direct plug-in)

    Returns
    -------
    float
    """
    if method not in ("ste", "dpi"):
        raise LLTKDEParameterError(
            "method must be 'ste' or 'dpi', got {0}".format(method))
    x = _validated(sample, 10)
    n = len(x)

    sd = x.std(ddof=1)
    q75, q25 = np.percentile(x, [75, 25])
    scale = min(sd, (q75 - q25) / 1.349) or sd

    upper_triangle = np.triu_indices(n, k=1)
    differences = (x[:, np.newaxis] - x)[upper_triangle]
    normalizer = n * (n - 1) * np.sqrt(2 * np.pi)

    def phi4(h):
        u = (differences / h)**2
        total = 2 * np.sum(np.exp(-u / 2) * (u * u - 6 * u + 3)) + 3 * n
        return total / (normalizer * h**5)

    def phi6(h):
        u = (differences / h)**2
        total = 2 * np.sum(np.exp(-u / 2) * (u**3 - 15 * u**2 + 45 * u - 15)) - 15 * n
        return total / (normalizer * h**7)

    c1 = 1 / (2 * np.sqrt(np.pi) * n)
    td = -phi6(1.23 * scale * n**(-1 / 9))
    if not np.isfinite(td) or td <= 0:
        raise LLTKDENumericalError("sample is too sparse for the plug-in bandwidth")

    if method == "dpi":
        return float((c1 / phi4((2.394 / (n * td))**(1 / 7)))**(1 / 5))

    alpha2 = 1.357 * (phi4(1.24 * scale * n**(-1 / 7)) / td)**(1 / 7)

    def fixed_point(h):
        return (c1 / phi4(alpha2 * h**(5 / 7)))**(1 / 5) - h

    hmax = 1.144 * scale * n**(-1 / 5)
    lower, upper = 0.1 * hmax, hmax
    for _ in range(100):
        if fixed_point(lower) * fixed_point(upper) <= 0:
            break
        lower, upper = 0.9 * lower, 1.2 * upper
    else:
        raise LLTKDENumericalError("no plug-in bandwidth found in the search interval")

    return float(brentq(fixed_point, lower, upper, xtol=1e-14 * hmax, rtol=1e-12))

def _gamma_bias_functional(shape: float) -> float:
    """
    Integral of (f' + x f''/2)^2 for the unit-scale Gamma(shape) density.

    With f' + x f''/2 = f(x) (A/x + B + C x), the integral is a sum of
    Gamma-function terms.
    """
    a = shape
    A, B, C = a * (a - 1) / 2, -a, 0.5
    coefficients = {-2: A * A, -1: 2 * A * B, 0: B * B + 2 * A * C, 1: 2 * B * C, 2: C * C}
    total = 0.
    for j, coef in coefficients.items():
        if coef == 0:
            continue
        power = 2 * a - 1 + j
        total += coef * np.exp(gammaln(power) - power * np.log(2) - 2 * gammaln(a))
    return total

def gamma_reference_bandwidth(sample: np.ndarray) -> float:
    """
    Return the reference-rule smoothing parameter b of the Gamma kernel
    estimators.

    Minimizes b^2 int (f' + x f''/2)^2 + int x^(-1/2) f / (2 sqrt(pi) n b^(1/2))
    for a Gamma reference fitted by the method of moments. Shapes below 2
    (where the bias functional diverges or is unstable) use the exponential
    reference with the sample mean as scale.

    Parameters
    ----------
    sample : array-like, required
        at least 10 positive observations

    Returns
    -------
    float
    """
    x = _validated(sample, 10)
    if np.any(x <= 0):
        raise LLTKDEDataError("the Gamma reference rule requires positive data")
    n = len(x)
    mean = x.mean()
    variance = x.var(ddof=1)
    shape = mean**2 / variance
    scale = variance / mean
    if shape < 2:
        shape, scale = 1., mean
    variance_functional = np.exp(gammaln(shape - 0.5) - gammaln(shape)) / (2 * np.sqrt(np.pi))
    bias_functional = _gamma_bias_functional(shape)
    return float(scale * (variance_functional / (4 * n * bias_functional))**(2 / 5))

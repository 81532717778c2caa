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
Least-squares cross-validation of local likelihood smoothing parameters.
"""
import logging
from typing import Iterable
import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from lltkde.bandwidth import SmoothingSpec
from lltkde.loclik import LocalLikelihood
from lltkde.exceptions import (
    LLTKDEDataError,
    LLTKDENumericalError,
    LLTKDEParameterError)

logger = logging.getLogger(__name__)

INTEGRAL_POINTS = 512
INTEGRAL_MARGIN = 4
SELECTION_KINDS = ("alpha", "bandwidth")

def alpha_candidates(alphas: Iterable[float] = None) -> list:
    """
    Return nearest-neighbour candidates, by default 0.10, 0.15, ..., 1.00.
    """
    if alphas is None:
        alphas = np.round(np.arange(0.10, 1.0 + 1e-9, 0.05), 2)
    return [SmoothingSpec.nn(alpha) for alpha in alphas]

def bandwidth_candidates(sample: np.ndarray, count: int = 20) -> list:
    """
    Return `count` fixed-bandwidth candidates log-spaced over
    [0.1 sigma n^(-1/5), 3 sigma], sigma being the sample standard
    deviation.
    """
    sample = np.asarray(sample, dtype=float)
    sigma = sample.std(ddof=1)
    if not sigma > 0:
        raise LLTKDEDataError("sample has zero variance")
    lower = 0.1 * sigma * len(sample)**(-1 / 5)
    return [SmoothingSpec.fixed(h) for h in np.geomspace(lower, 3 * sigma, count)]

def smoothing_candidates(sample: np.ndarray, kind: str = "alpha", grid: Iterable[float] = None) -> list:
    """
    Return the LSCV candidates of one kind: nearest-neighbour fractions
    ("alpha") or fixed bandwidths ("bandwidth"). `grid` overrides the
    default values of that kind.
    """
    if kind == "alpha":
        return alpha_candidates(grid)
    if kind == "bandwidth":
        if grid is None:
            return bandwidth_candidates(sample)
        return [SmoothingSpec.fixed(h) for h in grid]
    raise LLTKDEParameterError(
        "smoothing kind must be one of {0}, got {1}".format(", ".join(SELECTION_KINDS), kind))

def lscv(
    sample: np.ndarray,
    candidate: SmoothingSpec,
    degree: int = 2,
    kernel: str = "gaussian"
    ) -> float:
    """
    Return the LSCV score int f^2 - (2/n) sum_k f_(-k)(Y_k) of a local
    likelihood fit with the given smoothing parameter.

    The leave-one-out terms are exact refits. The integral is a 512-point
    trapezoid over [min Y - 4 h_max, max Y + 4 h_max], h_max being the
    largest effective bandwidth at the sample points and range endpoints.

    Parameters
    ----------
    sample : array-like, required
        transformed-domain sample, at least 3 observations

    candidate : SmoothingSpec, required
        the smoothing parameter to score

    degree : int
        local polynomial degree (default 2)

    kernel : str
        kernel id (default "gaussian")

    Returns
    -------
    float
        the score, or inf if any fit fails
    """
    sample = np.asarray(sample, dtype=float).ravel()
    if len(sample) < 3:
        raise LLTKDEDataError(
            "LSCV needs at least 3 observations, got {0}".format(len(sample)))
    fitter = LocalLikelihood(candidate, degree=degree, kernel=kernel)
    try:
        left_out = fitter.fit_points(sample, sample, leave_one_out=True)
        endpoints = np.array([sample.min(), sample.max()])
        h_max = max(left_out.bandwidths.max(), fitter.bandwidths(endpoints, sample).max())
        grid = np.linspace(
            endpoints[0] - INTEGRAL_MARGIN * h_max,
            endpoints[1] + INTEGRAL_MARGIN * h_max,
            INTEGRAL_POINTS)
        full = fitter.fit_points(grid, sample)
    except (LLTKDENumericalError, LLTKDEParameterError) as e:
        logger.debug("LSCV candidate {0} is infeasible: {1}".format(candidate, e))
        return np.inf
    return float(trapezoid(full.densities**2, grid) - 2 * left_out.densities.mean())

def lscv_scan(
    sample: np.ndarray,
    candidates: list = None,
    degree: int = 2,
    kernel: str = "gaussian",
    kind: str = "alpha"
    ) -> pd.DataFrame:
    """
    Score every candidate and flag the selected one.

    Ties are broken toward larger smoothing.

    Parameters
    ----------
    sample : array-like, required
        transformed-domain sample

    candidates : list of SmoothingSpec, optional
        defaults to the default candidates of `kind`

    degree : int
        local polynomial degree (default 2)

    kernel : str
        kernel id (default "gaussian")

    kind : str
        "alpha" (default): nearest-neighbour fractions 0.10..1.00;
        "bandwidth": fixed bandwidths from `bandwidth_candidates`. Only
        used when `candidates` is None.

    Returns
    -------
    DataFrame
        columns kind, value, score, selected

    Raises
    ------
    LLTKDENumericalError
        if every candidate is infeasible
    """
    if candidates is None:
        candidates = smoothing_candidates(sample, kind)
    candidates = list(candidates)
    if not candidates:
        raise LLTKDEParameterError("at least one smoothing candidate is required")

    scores = np.array([lscv(sample, candidate, degree=degree, kernel=kernel)
                       for candidate in candidates])
    if not np.isfinite(scores).any():
        raise LLTKDENumericalError(
            "all {0} smoothing candidates are infeasible".format(len(candidates)))

    best = scores[np.isfinite(scores)].min()
    tied = np.flatnonzero(scores <= best + 1e-12 * abs(best))
    selected = max(tied, key=lambda i: candidates[i].value)

    return pd.DataFrame({
        "kind": [candidate.kind for candidate in candidates],
        "value": [candidate.value for candidate in candidates],
        "score": scores,
        "selected": np.arange(len(candidates)) == selected})

def select_smoothing(
    sample: np.ndarray,
    candidates: list = None,
    degree: int = 2,
    kernel: str = "gaussian",
    kind: str = "alpha"
    ) -> SmoothingSpec:
    """
    Return the candidate minimizing the LSCV score (ties toward larger
    smoothing). See `lscv_scan` for parameters.
    """
    if candidates is None:
        candidates = smoothing_candidates(sample, kind)
    candidates = list(candidates)
    scan = lscv_scan(sample, candidates, degree=degree, kernel=kernel)
    return candidates[int(np.flatnonzero(scan["selected"].values)[0])]

"""Log-log rate fits and error summaries."""

from typing import Iterable, Tuple

import numpy as np
from scipy.stats import linregress

from .models import ErrorSummary, NonPositiveError, SlopeFit


def fit_loglog_slope(pairs: Iterable[Tuple[float, float]], statistic: str = "median") -> SlopeFit:
    """Ordinary least squares of log(error) on log(delta)."""
    pairs = list(pairs)
    if len(pairs) < 3:
        raise ValueError(f"slope fit needs at least 3 points, got {len(pairs)}")
    delta = np.array([p[0] for p in pairs], dtype=float)
    error = np.array([p[1] for p in pairs], dtype=float)
    if np.any(~(delta > 0.0)) or np.any(~(error > 0.0)):
        raise NonPositiveError(f"log-log fit needs positive values, got {pairs}")
    fit = linregress(np.log(delta), np.log(error))
    return SlopeFit(slope=float(fit.slope), stderr=float(fit.stderr), points=len(pairs), statistic=statistic)


def summarize_errors(values) -> ErrorSummary:
    values = np.asarray(values, dtype=float)
    q25, q50, q75 = np.quantile(values, [0.25, 0.5, 0.75])
    return ErrorSummary(median=float(q50), iqr=float(q75 - q25), mean=float(values.mean()))

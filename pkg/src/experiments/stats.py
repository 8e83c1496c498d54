"""
Paired Student t-test over per-trial metrics.

The t-distribution CDF goes through the regularized incomplete beta function:
for ``x = dof / (dof + t^2)``, ``P(|T| > |t|) = I_x(dof/2, 1/2)``. SciPy's
``betainc`` is accurate to well below 1e-8 over the range used here.
"""

from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel
from scipy.special import betainc

from src.ai.common import DegenerateTestError, ParameterError

# Relative floor under which paired differences count as constant.
DEGENERATE_RTOL = 1e-12


class PairedTTest(BaseModel):
    t: float
    p_value: float
    dof: int
    mean_difference: float
    standard_error: float

    def significant(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha


class MeanWithError(BaseModel):
    mean: float
    standard_error: Optional[float] = None


def t_cdf(t: float, dof: int) -> float:
    """P(T <= t) for Student's t with ``dof`` degrees of freedom."""
    if dof < 1:
        raise ParameterError(f"degrees of freedom must be >= 1, got {dof}")
    if np.isinf(t):
        return 1.0 if t > 0 else 0.0
    tail = float(betainc(dof / 2.0, 0.5, dof / (dof + t * t))) / 2.0
    return 1.0 - tail if t > 0 else tail


def two_sided_p(t: float, dof: int) -> float:
    return 2.0 * t_cdf(-abs(t), dof)


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> PairedTTest:
    """
    Two-sided paired t-test of ``a - b``.

    Raises:
        ParameterError: lengths differ or fewer than two pairs
        DegenerateTestError: the differences have zero variance
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError(f"paired samples must be equal-length vectors, got {a.shape} and {b.shape}")
    if a.size < 2:
        raise ParameterError("paired t-test needs at least two pairs")

    diffs = a - b
    sd = float(diffs.std(ddof=1))
    if sd <= DEGENERATE_RTOL * max(1.0, abs(float(diffs.mean()))):
        raise DegenerateTestError(f"paired differences have zero variance (sd={sd:.3g})")
    n = diffs.size
    se = sd / np.sqrt(n)
    t = float(diffs.mean() / se)
    return PairedTTest(
        t=t,
        p_value=two_sided_p(t, n - 1),
        dof=n - 1,
        mean_difference=float(diffs.mean()),
        standard_error=float(se),
    )


def mean_and_stderr(values: Sequence[float]) -> MeanWithError:
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ParameterError("mean of an empty sample")
    error = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else None
    return MeanWithError(mean=float(values.mean()), standard_error=error)

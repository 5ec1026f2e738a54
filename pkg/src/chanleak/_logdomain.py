"""Shared log-domain primitive.

Kept in its own module so the oracle and the analytic measures can use
the same numerically careful reduction without depending on each other.
"""

from __future__ import annotations

import numpy as np

__all__ = ["logsumexp"]


def logsumexp(a: np.ndarray, axis=None):
    """Max-shifted log-sum-exp; -inf entries drop out, +inf dominates.

    Returns a float when ``axis`` is None, otherwise an array with that
    axis reduced. All -inf slices reduce to -inf without warnings.
    """
    a = np.asarray(a, dtype=float)
    m = np.max(a, axis=axis, keepdims=True)
    shift = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore", over="ignore"):
        out = np.log(np.sum(np.exp(a - shift), axis=axis, keepdims=True)) + shift
    if axis is None:
        return float(out.reshape(()))
    return np.squeeze(out, axis=axis)

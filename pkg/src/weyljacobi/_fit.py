from __future__ import annotations

import numpy as np


def loglog_fit(r, d):
    """Least-squares line through ``(log r, log d)``.

    Returns ``(slope, intercept, max_deviation)`` with the deviation
    measured in natural-log units.
    """
    lr = np.log(np.asarray(r, dtype=float))
    ld = np.log(np.asarray(d, dtype=float))
    slope, intercept = np.polyfit(lr, ld, 1)
    dev = float(np.max(np.abs(ld - (slope * lr + intercept))))
    return float(slope), float(intercept), dev

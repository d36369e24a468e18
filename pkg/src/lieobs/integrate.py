"""Fixed-step RK4 reference for the drift ODE  dg/ds = X(g)."""

from __future__ import annotations

import numpy as np

from .flow import FieldSpec, vector_field_eval
from .groups import GroupClass


def rk4(cls: GroupClass, fld: FieldSpec, g0, s_values, step: float = 1e-3) -> np.ndarray:
    """Integrate from s = 0 to every value in ``s_values`` (either sign).

    ``g0`` may be a stack of points ``(n, 3)``; the result has shape
    ``(len(s_values),) + g0.shape``.
    """
    g0 = np.asarray(g0, dtype=float)
    s_values = np.asarray(s_values, dtype=float)
    out = np.empty(s_values.shape + g0.shape)
    for sign in (1.0, -1.0):
        idx = np.flatnonzero(s_values * sign >= 0)
        if not idx.size:
            continue
        order = idx[np.argsort(np.abs(s_values[idx]))]
        g, s = g0.copy(), 0.0
        for i in order:
            target = abs(s_values[i])
            while s < target:
                h = min(step, target - s)
                # t is constant along the flow, so the field is evaluated as usual
                k1 = vector_field_eval(cls, fld, g)
                k2 = vector_field_eval(cls, fld, g + 0.5 * sign * h * k1)
                k3 = vector_field_eval(cls, fld, g + 0.5 * sign * h * k2)
                k4 = vector_field_eval(cls, fld, g + sign * h * k3)
                g = g + sign * h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
                s += h
                if target - s < 1e-12:
                    s = target
            out[i] = g
    return out

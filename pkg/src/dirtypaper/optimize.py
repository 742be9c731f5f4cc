"""One-dimensional minimization for smooth unimodal rate objectives."""

from __future__ import annotations

import math
from typing import Callable

INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_minimize(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
) -> tuple[float, float, int]:
    """Minimize a unimodal ``fn`` on ``[lo, hi]``.

    Golden-section search down to an interval of width ``tol``, followed by
    one parabolic refinement through the final bracket.  Returns
    ``(x, fn(x), evaluations)``.
    """
    if not hi > lo:
        raise ValueError("requires hi > lo")
    a, b = lo, hi
    m1 = b - INV_GOLDEN * (b - a)
    m2 = a + INV_GOLDEN * (b - a)
    f1, f2 = fn(m1), fn(m2)
    evals = 2
    while b - a > tol:
        if f1 < f2:
            b, m2, f2 = m2, m1, f1
            m1 = b - INV_GOLDEN * (b - a)
            f1 = fn(m1)
        else:
            a, m1, f1 = m1, m2, f2
            m2 = a + INV_GOLDEN * (b - a)
            f2 = fn(m2)
        evals += 1

    x, fx = (m1, f1) if f1 < f2 else (m2, f2)
    xv, fv, extra = _parabolic_step(fn, a, x, b, fx)
    evals += extra
    if fv < fx:
        return xv, fv, evals
    return x, fx, evals


def _parabolic_step(fn, a, x, b, fx):
    """Single parabola fit through (a, x, b); evaluates the vertex if interior."""
    fa, fb = fn(a), fn(b)
    evals = 2
    denom = (x - a) * (fx - fb) - (x - b) * (fx - fa)
    if denom == 0.0:
        return x, fx, evals
    num = (x - a) ** 2 * (fx - fb) - (x - b) ** 2 * (fx - fa)
    v = x - 0.5 * num / denom
    if not (a < v < b) or not math.isfinite(v):
        return x, fx, evals
    fv = fn(v)
    evals += 1
    best = min((fx, x), (fa, a), (fb, b), (fv, v))
    return best[1], best[0], evals

"""Scalar golden-section search used by the conjugate and one-round solvers."""

from __future__ import annotations

import math

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 300):
    """Minimize a unimodal scalar function on [lo, hi].

    Returns (argmin, min_value).  The bracket shrinks by the golden ratio per
    iteration, so ~60 iterations reduce it by 1e-12; max_iter is a guard.
    """
    a, b = float(lo), float(hi)
    if not b >= a:
        raise ValueError("need hi >= lo")
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 300):
    x, v = golden_section_min(lambda t: -f(t), lo, hi, tol=tol, max_iter=max_iter)
    return x, -v

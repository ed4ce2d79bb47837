"""Vector arithmetic, direction conventions, and deterministic randomness.

All state vectors live in R^d as float64 numpy arrays.  Conventions used
throughout the package: the player's plays w, the adversary's gradients g,
the cumulative negative-gradient state theta = -sum(g), and comparators u
are all plain 1-D arrays of the same dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

# Centralized tolerance constants.  Identities (inner-product algebra,
# telescoping sums) are checked at TOL_IDENTITY; orthogonality of sampled
# complement directions at TOL_ORTHO.
TOL_IDENTITY = 1e-9
TOL_ORTHO = 1e-12

UNKNOWN_HORIZON = "unknown"

Point = np.ndarray


class DimensionMismatchError(ValueError):
    """Two vectors with different dimensions were combined."""


class UnsupportedDimensionError(ValueError):
    """Operation requires a higher-dimensional space (typically d >= 2)."""


def as_point(coords) -> Point:
    """Validate and convert to a finite float64 vector of dim >= 1."""
    p = np.asarray(coords, dtype=np.float64)
    if p.ndim != 1 or p.size < 1:
        raise ValueError(f"point must be a 1-D vector of dim >= 1, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def inner(a: Point, b: Point) -> float:
    """Inner product <a, b>; raises DimensionMismatchError on dim mismatch."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dim mismatch: {a.shape} vs {b.shape}")
    return float(a @ b)


def norm(a: Point) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64)))


def unit_direction(theta: Point) -> Point:
    """theta / ||theta|| when ||theta|| > 0, else the zero vector."""
    theta = np.asarray(theta, dtype=np.float64)
    n = np.linalg.norm(theta)
    if n == 0.0:
        return np.zeros_like(theta)
    return theta / n


def orthonormal_complement_sample(theta: Point, rng: np.random.Generator) -> Point:
    """A unit vector orthogonal to theta (any unit vector when theta = 0).

    Requires dim >= 2.  In d = 2 the vector is the rotated direction
    (-theta_1, theta_0)/||theta|| with an rng-chosen sign, which is orthogonal
    to working precision; in higher dimensions a random Gaussian draw is
    projected out of theta twice and normalized.
    """
    theta = np.asarray(theta, dtype=np.float64)
    d = theta.size
    if d < 2:
        raise UnsupportedDimensionError("orthogonal complement requires dim >= 2")
    n = np.linalg.norm(theta)
    if n == 0.0:
        v = rng.standard_normal(d)
        m = np.linalg.norm(v)
        while m < 1e-12:
            v = rng.standard_normal(d)
            m = np.linalg.norm(v)
        return v / m
    if d == 2:
        v = np.array([-theta[1], theta[0]]) / n
        if rng.random() < 0.5:
            v = -v
        return v
    u = theta / n
    while True:
        v = rng.standard_normal(d)
        v -= (v @ u) * u
        v -= (v @ u) * u  # second projection pass for orthogonality to ~1e-16
        m = np.linalg.norm(v)
        if m > 1e-8:
            return v / m


@dataclass(frozen=True)
class GameConfig:
    """Game parameters: dimension, gradient bound G, horizon T (or unknown), seed."""

    dim: int
    grad_bound: float
    horizon: Union[int, str] = UNKNOWN_HORIZON
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not self.grad_bound > 0:
            raise ValueError("grad_bound G must be positive")
        if self.horizon != UNKNOWN_HORIZON:
            if int(self.horizon) < 1:
                raise ValueError("horizon T must be >= 1 when numeric")
            object.__setattr__(self, "horizon", int(self.horizon))

    @property
    def known_horizon(self) -> bool:
        return self.horizon != UNKNOWN_HORIZON


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator; one independent stream per run."""
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))

"""Time-indexed potential functions and their conjugate machinery.

Three families are implemented, all convex radial functions of the
cumulative negative-gradient state theta:

* PowerPotential          (W/p) * (x^2 + G^2 (T-t))^(p/2),  p in [1, 2]
* NormalKnownTPotential   eps * (1 - pi G^2 (T-t) / (2aT))^(-1/2)
                              * exp(x^2 / (2aT - pi G^2 (T-t)))
* AdaptiveNormalPotential beta_t * exp(x^2 / (2at)),  beta_t = eps / log^2(t+1)

The first two are horizon-aware (indexed t = 0..T); the adaptive family has
no horizon and is defined for t >= 1 with the convention that its value at
t = 0 is zero (beta_0 is undefined, and the first-round borrowing is carried
by the slack ledger instead).

The conjugate side: ``conjugate_numeric`` evaluates sup_a (a*u - f(a)) by
golden-section search, ``exp_conjugate_upper_bound`` is the closed-form
envelope for exponential-quadratic potentials, and ``regret_bound`` maps an
algorithm tag to its theoretical regret envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._search import golden_section_max

SIGMA2 = math.pi / 2.0  # per-step variance of the Gaussian surrogate

VACUOUS = math.inf


class BoundaryHitError(RuntimeError):
    """Numeric conjugate maximizer landed on the search boundary."""


def _check_round(t: int, T: int) -> None:
    if not 0 <= t <= T:
        raise ValueError(f"round index t={t} outside [0, {T}]")


@dataclass(frozen=True)
class PowerPotential:
    """Power-family potential; at t = T it is the benchmark (W/p) x^p."""

    W: float
    p: float
    G: float
    T: int

    def __post_init__(self):
        if not self.W > 0:
            raise ValueError("W must be positive")
        if not 1.0 <= self.p <= 2.0:
            raise ValueError("p must lie in [1, 2]")
        if not self.G > 0:
            raise ValueError("G must be positive")
        if self.T < 1:
            raise ValueError("T must be >= 1")

    @property
    def q(self) -> float:
        """Conjugate exponent; infinite at p = 1."""
        return math.inf if self.p == 1.0 else self.p / (self.p - 1.0)

    def radial(self, t: int, x: float) -> float:
        _check_round(t, self.T)
        if t == self.T:
            return (self.W / self.p) * abs(x) ** self.p
        s2 = x * x + self.G * self.G * (self.T - t)
        return (self.W / self.p) * s2 ** (self.p / 2.0)

    def value(self, t: int, theta) -> float:
        return self.radial(t, float(np.linalg.norm(theta)))


@dataclass(frozen=True)
class NormalKnownTPotential:
    """Gaussian-smoothed exponential potential for a known horizon T."""

    eps: float
    a: float
    G: float
    T: int
    sigma2: float = field(default=SIGMA2, init=False)

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.G > 0:
            raise ValueError("G must be positive")
        if self.T < 1:
            raise ValueError("T must be >= 1")
        if not self.a > math.pi * self.G * self.G / 2.0:
            raise ValueError(
                f"require a > pi*G^2/2 = {math.pi * self.G * self.G / 2.0:.6g}, got a={self.a}"
            )

    def radial(self, t: int, x: float) -> float:
        _check_round(t, self.T)
        tau = self.T - t
        shrink = math.pi * self.G * self.G * tau
        pref = (1.0 - shrink / (2.0 * self.a * self.T)) ** -0.5
        return self.eps * pref * math.exp(x * x / (2.0 * self.a * self.T - shrink))

    def value(self, t: int, theta) -> float:
        return self.radial(t, float(np.linalg.norm(theta)))


@dataclass(frozen=True)
class AdaptiveNormalPotential:
    """Horizon-free exponential potential with decreasing scale beta_t."""

    eps: float
    a: float
    G: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.G > 0:
            raise ValueError("G must be positive")
        if not self.a > 3.0 * math.pi * self.G * self.G / 4.0:
            raise ValueError(
                f"require a > 3*pi*G^2/4 = {3 * math.pi * self.G * self.G / 4.0:.6g}, got a={self.a}"
            )

    def beta(self, t: int) -> float:
        if t < 1:
            raise ValueError("beta_t defined for t >= 1")
        return self.eps / math.log(t + 1.0) ** 2

    def radial(self, t: int, x: float) -> float:
        if t == 0:
            return 0.0
        if t < 0:
            raise ValueError("t must be >= 0")
        return self.beta(t) * math.exp(x * x / (2.0 * self.a * t))

    def value(self, t: int, theta) -> float:
        return self.radial(t, float(np.linalg.norm(theta)))


@dataclass(frozen=True)
class QuadraticPotential:
    """Fixed potential (eta/2) ||theta||^2, the gradient-descent ledger view."""

    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("eta must be positive")

    def radial(self, t: int, x: float) -> float:
        return 0.5 * self.eta * x * x

    def value(self, t: int, theta) -> float:
        return self.radial(t, float(np.linalg.norm(theta)))


def power_conditional_value(pot: PowerPotential, t: int, x: float) -> float:
    """(W/p)(x^2 + G^2 (T-t))^(p/2); equals the benchmark at t = T."""
    return pot.radial(t, x)


def normal_known_t_potential(pot: NormalKnownTPotential, t: int, x: float) -> float:
    """Closed form of the Gaussian smoothing of eps*exp(x^2/(2aT)) at round t."""
    return pot.radial(t, x)


def adaptive_potential(pot: AdaptiveNormalPotential, t: int, theta) -> float:
    """beta_t exp(||theta||^2/(2at)) for t >= 1; zero at t = 0 by convention."""
    return pot.value(t, theta)


def conjugate_numeric(f, u_norm: float, search_bound: float, tol: float = 1e-8) -> float:
    """sup over [0, search_bound] of a*u_norm - f(a), by golden-section search.

    f must be convex on the interval so the objective is concave.  If the
    maximizer lands on the right boundary the supplied bound was too small
    and BoundaryHitError is raised; the caller should enlarge it.
    """
    if u_norm < 0:
        raise ValueError("u_norm must be nonnegative")
    if not search_bound > 0:
        raise ValueError("search_bound must be positive")

    def objective(a):
        # f may overflow well past the true maximizer; mask that region
        try:
            val = a * u_norm - f(a)
        except OverflowError:
            return -math.inf
        return val if not math.isnan(val) else -math.inf

    hi = search_bound
    overflowed = not math.isfinite(objective(hi))
    if overflowed:
        # shrink to the finite region; the maximizer is interior to it
        lo = 0.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if math.isfinite(objective(mid)):
                lo = mid
            else:
                hi = mid
        hi = lo

    x, v = golden_section_max(objective, 0.0, hi, tol=min(tol, 1e-10 * (1.0 + hi)))
    obj_zero = objective(0.0)
    obj_edge = objective(hi)
    v = max(v, obj_zero, obj_edge)
    # a genuine boundary escape has the edge value dominating the interior;
    # flat objectives (e.g. u_norm = 0 with constant f) are not escapes
    if not overflowed and obj_edge >= v - 1e-12 * (1.0 + abs(v)) and obj_edge > obj_zero:
        raise BoundaryHitError(
            f"conjugate maximizer at search bound {search_bound}; enlarge the bound"
        )
    return v


def default_exp_search_bound(alpha: float, u_norm: float) -> float:
    """Initial search bound for conjugates of exp-type potentials."""
    return 10.0 * (u_norm + 1.0) * (math.sqrt(alpha) + 1.0)


def exp_conjugate_numeric(alpha: float, beta: float, u_norm: float) -> float:
    """Numeric conjugate of f(x) = beta*exp(x^2/(2 alpha)), doubling on boundary hits."""
    f = lambda x: beta * math.exp(x * x / (2.0 * alpha))
    bound = default_exp_search_bound(alpha, u_norm)
    for _ in range(60):
        try:
            return conjugate_numeric(f, u_norm, bound)
        except BoundaryHitError:
            bound *= 2.0
    raise BoundaryHitError("conjugate search bound did not stabilize")


def exp_conjugate_upper_bound(alpha: float, beta: float, w_norm: float) -> float:
    """Closed-form envelope of the conjugate of beta*exp(x^2/(2 alpha)).

    Returns ||w|| sqrt(2 alpha log(sqrt(alpha) ||w|| / beta + 1)) - beta, which
    dominates the numeric conjugate for all alpha, beta > 0 and w.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if w_norm < 0:
        raise ValueError("w_norm must be nonnegative")
    return w_norm * math.sqrt(2.0 * alpha * math.log(math.sqrt(alpha) * w_norm / beta + 1.0)) - beta


def _param(params, name):
    if isinstance(params, dict):
        return params[name]
    return getattr(params, name)


def regret_bound(algorithm_tag: str, params, u_norm: float, T: int) -> float:
    """Theoretical regret envelope at comparator norm u_norm and horizon T.

    Tags: "ogd", "power", "normal_knownT", "adaptive_normal".  The power
    family with p = 1 has no bound for u_norm > W; VACUOUS (inf) is returned
    there.
    """
    if u_norm < 0:
        raise ValueError("u_norm must be nonnegative")
    if T < 1:
        raise ValueError("T must be >= 1")
    G = float(_param(params, "G"))
    root_t = G * math.sqrt(T)
    if algorithm_tag == "ogd":
        eta = float(_param(params, "eta"))
        return u_norm * u_norm / (2.0 * eta) + 0.5 * eta * G * G * T
    if algorithm_tag == "power":
        W = float(_param(params, "W"))
        p = float(_param(params, "p"))
        if p == 1.0:
            return W * root_t if u_norm <= W else VACUOUS
        q = p / (p - 1.0)
        return u_norm**q / (W ** (q - 1.0) * q) + (W / p) * root_t**p
    if algorithm_tag == "normal_knownT":
        eps = float(_param(params, "eps"))
        a = float(_param(params, "a"))
        envelope = u_norm * math.sqrt(
            2.0 * a * T * math.log(math.sqrt(a * T) * u_norm / eps + 1.0)
        )
        return envelope + eps * ((1.0 - math.pi * G * G / (2.0 * a)) ** -0.5 - 1.0)
    if algorithm_tag == "adaptive_normal":
        eps = float(_param(params, "eps"))
        a = float(_param(params, "a"))
        envelope = u_norm * math.sqrt(
            2.0 * a * T * math.log(math.sqrt(a * T) * u_norm * math.log(T + 1.0) ** 2 / eps + 1.0)
        )
        return envelope + eps * (math.pi * G * G / a - 1.0)
    raise ValueError(f"unknown algorithm tag {algorithm_tag!r}")

"""Game loop, trace accounting, slack ledger, and bound verification.

The protocol per round t = 0..T-1: the player commits w_{t+1} from
(t, theta_t); the adversary observes it and answers g_{t+1} with
||g|| <= G; the state updates theta_{t+1} = theta_t - g_{t+1} and the
player pays <w_{t+1}, g_{t+1}>.  A Trace records the whole run.

Accounting identities maintained here (and asserted by the test suite):

    Regret(u)  = sum_t <g_t, w_t - u> = -Reward - <g_{1:T}, u>
    eps_t      = q_t(theta_t) - q_{t-1}(theta_{t-1}) + <w_t, g_t>
    sum eps_t  = q_T(theta_T) - q_0(0) - Reward      (telescoping)

Potentials are any objects with ``value(t, theta) -> float``; families whose
value at t = 0 is nonzero (the known-horizon ones) carry their starting
capital in the t = 0 term, so the ledger stays exact for both conventions.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .core import DimensionMismatchError, GameConfig, make_rng
from .potentials import BoundaryHitError, conjugate_numeric, regret_bound

GRAD_NORM_SLACK = 1e-9


@dataclass
class Trace:
    """Per-round ledger of one game run; rows are time-ordered."""

    config: GameConfig
    strategy_tag: str
    adversary_tag: str
    w: np.ndarray       # (T, d) plays
    g: np.ndarray       # (T, d) gradients
    theta: np.ndarray   # (T, d) state after each round
    losses: np.ndarray  # (T,)   <w_t, g_t>
    eps: Optional[np.ndarray] = None  # per-round ledger slack, when attached

    @property
    def n_rounds(self) -> int:
        return int(self.losses.size)

    @property
    def reward(self) -> float:
        return -float(np.sum(self.losses))

    @property
    def theta_final(self) -> np.ndarray:
        if self.n_rounds == 0:
            return np.zeros(self.config.dim)
        return self.theta[-1]

    def grad_total(self) -> np.ndarray:
        if self.n_rounds == 0:
            return np.zeros(self.config.dim)
        return self.g.sum(axis=0)


def run_game(strategy, adversary, config: GameConfig, rounds: int) -> Trace:
    """Execute the min-then-max loop for the given number of rounds.

    Known-horizon strategies must be run for exactly config.horizon rounds.
    Deterministic given config.seed (one Philox stream per run).
    """
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    if getattr(strategy, "needs_horizon", False):
        if not config.known_horizon:
            raise ValueError(f"strategy {strategy.tag} requires a numeric horizon")
        if rounds != config.horizon:
            raise ValueError(
                f"strategy {strategy.tag} is tuned for T={config.horizon}, got rounds={rounds}"
            )
    rng = make_rng(config.seed)
    d = config.dim
    G = config.grad_bound
    w_rows = np.zeros((rounds, d))
    g_rows = np.zeros((rounds, d))
    th_rows = np.zeros((rounds, d))
    losses = np.zeros(rounds)
    theta = np.zeros(d)
    for t in range(rounds):
        w = np.asarray(strategy.play(t, theta), dtype=np.float64)
        if w.shape != (d,):
            raise DimensionMismatchError(f"strategy returned shape {w.shape}, expected ({d},)")
        g = np.asarray(adversary.grad(t, theta, w, rng), dtype=np.float64)
        if g.shape != (d,):
            raise DimensionMismatchError(f"adversary returned shape {g.shape}, expected ({d},)")
        gn = float(np.linalg.norm(g))
        if gn > G * (1.0 + GRAD_NORM_SLACK) + GRAD_NORM_SLACK:
            raise ValueError(f"adversary emitted ||g||={gn} > G={G}")
        theta = theta - g
        w_rows[t] = w
        g_rows[t] = g
        th_rows[t] = theta
        losses[t] = w @ g
    return Trace(config, getattr(strategy, "tag", "?"), getattr(adversary, "tag", "?"),
                 w_rows, g_rows, th_rows, losses)


def regret(trace: Trace, u) -> float:
    """sum_t <g_t, w_t - u>, computed round by round."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (trace.config.dim,):
        raise DimensionMismatchError(f"comparator shape {u.shape}, expected ({trace.config.dim},)")
    if trace.n_rounds == 0:
        return 0.0
    return float(np.einsum("td,td->", trace.g, trace.w - u[None, :]))


def epsilon_ledger(trace: Trace, potential) -> np.ndarray:
    """Per-round borrowing eps_t = q_t(theta_t) - q_{t-1}(theta_{t-1}) + loss_t.

    theta_0 = 0; potentials with q_0(0) = 0 reproduce the plain telescoping
    sum, while relaxation-style potentials contribute their starting capital
    through the t = 0 term.
    """
    T = trace.n_rounds
    out = np.zeros(T)
    prev = potential.value(0, np.zeros(trace.config.dim))
    for t in range(1, T + 1):
        cur = potential.value(t, trace.theta[t - 1])
        out[t - 1] = cur - prev + trace.losses[t - 1]
        prev = cur
    return out


def attach_epsilon(trace: Trace, potential) -> Trace:
    trace.eps = epsilon_ledger(trace, potential)
    return trace


@dataclass
class BoundReport:
    comparator: np.ndarray
    u_norm: float
    regret_actual: float
    regret_bound: float
    slack: float
    holds: bool


def verify_bound(trace: Trace, strategy, comparators: Sequence[np.ndarray],
                 tol: float = 1e-6) -> List[BoundReport]:
    """Compare measured regret against the strategy's theoretical envelope."""
    T = trace.n_rounds
    reports = []
    for u in comparators:
        u = np.asarray(u, dtype=np.float64)
        actual = regret(trace, u)
        bound = regret_bound(strategy.tag, strategy, float(np.linalg.norm(u)), max(T, 1))
        slack = bound - actual
        holds = bool(slack >= -tol * (1.0 + abs(bound))) if math.isfinite(bound) else True
        reports.append(BoundReport(u, float(np.linalg.norm(u)), actual, bound, slack, holds))
    return reports


def comparator_grid(dim: int, rng: np.random.Generator,
                    norms: Sequence[float] = (0.0, 0.1, 1.0, 10.0, 100.0),
                    directions: int = 5) -> List[np.ndarray]:
    """Norm ladder x random unit directions (the zero norm appears once)."""
    grid = []
    for n in norms:
        if n == 0.0:
            grid.append(np.zeros(dim))
            continue
        for _ in range(directions):
            v = rng.standard_normal(dim)
            v /= np.linalg.norm(v)
            grid.append(n * v)
    return grid


@dataclass
class RadialBenchmark:
    """Benchmark B(theta) = f(||theta||) with numeric conjugate and gradient."""

    f: callable

    def value(self, theta) -> float:
        return float(self.f(float(np.linalg.norm(theta))))

    def conjugate(self, u_norm: float) -> float:
        bound = 10.0 * (u_norm + 1.0)
        for _ in range(60):
            try:
                return conjugate_numeric(self.f, u_norm, bound)
            except BoundaryHitError:
                bound *= 2.0
        raise BoundaryHitError("benchmark conjugate search bound did not stabilize")

    def gradient(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=np.float64)
        r = float(np.linalg.norm(theta))
        if r == 0.0:
            return np.zeros_like(theta)
        step = 1e-6 * max(r, 1.0)
        slope = (self.f(r + step) - self.f(r - step)) / (2.0 * step)
        return slope * theta / r


def duality_witness(traces: Sequence[Trace], benchmark: RadialBenchmark,
                    eps_hat: float, comparators: Sequence[np.ndarray],
                    tol: float = 1e-6) -> bool:
    """Check the reward/regret duality on a sample of traces.

    Reward side: Reward >= B(theta_T) - eps_hat on every trace.  Regret side:
    Regret(u) <= B*(u) + eps_hat for every grid comparator and for the
    induced comparator u = grad B(theta_T) of each trace.  Returns whether
    the two sides agree (both hold or both fail), which is the sampled form
    of the equivalence.
    """
    reward_ok = True
    for tr in traces:
        b = benchmark.value(tr.theta_final)
        if tr.reward < b - eps_hat - tol * (1.0 + abs(b)):
            reward_ok = False
            break
    regret_ok = True
    for tr in traces:
        all_u = list(comparators) + [benchmark.gradient(tr.theta_final)]
        for u in all_u:
            rb = benchmark.conjugate(float(np.linalg.norm(u))) + eps_hat
            if regret(tr, u) > rb + tol * (1.0 + abs(rb)):
                regret_ok = False
                break
        if not regret_ok:
            break
    return reward_ok == regret_ok


# --- serialization ---------------------------------------------------------

CSV_BASE_COLUMNS = ["t", "loss", "reward_cum", "theta_norm", "eps_t"]
MAX_COORD_COLUMNS = 8


def write_trace_csv(trace: Trace, path) -> None:
    d = trace.config.dim
    with_coords = d <= MAX_COORD_COLUMNS
    header = list(CSV_BASE_COLUMNS)
    if with_coords:
        header += [f"w_{i}" for i in range(d)] + [f"g_{i}" for i in range(d)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        reward_cum = 0.0
        for t in range(trace.n_rounds):
            reward_cum -= trace.losses[t]
            eps_val = "" if trace.eps is None else repr(float(trace.eps[t]))
            row = [t + 1, repr(float(trace.losses[t])), repr(reward_cum),
                   repr(float(np.linalg.norm(trace.theta[t]))), eps_val]
            if with_coords:
                row += [repr(float(x)) for x in trace.w[t]]
                row += [repr(float(x)) for x in trace.g[t]]
            writer.writerow(row)


def trace_to_dict(trace: Trace) -> dict:
    return {
        "config": {
            "dim": trace.config.dim,
            "grad_bound": trace.config.grad_bound,
            "horizon": trace.config.horizon,
            "seed": trace.config.seed,
        },
        "strategy_tag": trace.strategy_tag,
        "adversary_tag": trace.adversary_tag,
        "w": trace.w.tolist(),
        "g": trace.g.tolist(),
        "theta": trace.theta.tolist(),
        "losses": trace.losses.tolist(),
        "eps": None if trace.eps is None else trace.eps.tolist(),
    }


def trace_from_dict(data: dict) -> Trace:
    cfg = GameConfig(**data["config"])
    eps = data.get("eps")
    return Trace(
        config=cfg,
        strategy_tag=data["strategy_tag"],
        adversary_tag=data["adversary_tag"],
        w=np.asarray(data["w"], dtype=np.float64).reshape(-1, cfg.dim),
        g=np.asarray(data["g"], dtype=np.float64).reshape(-1, cfg.dim),
        theta=np.asarray(data["theta"], dtype=np.float64).reshape(-1, cfg.dim),
        losses=np.asarray(data["losses"], dtype=np.float64),
        eps=None if eps is None else np.asarray(eps, dtype=np.float64),
    )


def write_trace_json(trace: Trace, path) -> None:
    with open(path, "w") as fh:
        json.dump(trace_to_dict(trace), fh)


def read_trace_json(path) -> Trace:
    with open(path) as fh:
        return trace_from_dict(json.load(fh))

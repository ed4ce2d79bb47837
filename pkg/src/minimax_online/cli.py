"""Batch front door: run sweeps from YAML specs, verify the math, emit curves.

Subcommands:

* ``run --spec spec.yaml``: execute every (strategy x adversary x repeat)
  cell, write per-run traces plus a summary table and a machine-readable
  verdict; exit 0 only if every measured regret respects its envelope.
* ``verify --all`` (or ``--lemma <name>``): run the oracle-backed check
  suites and print a pass/fail matrix.
* ``curves <trace_dir>``: emit tidy per-round regret-vs-envelope CSV.

The spec file is YAML with a fixed schema; unknown keys are rejected with a
line-anchored message (exit 2).  Bound violations exit 1.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np
import yaml

from . import adversaries as adv_mod
from . import strategies as strat_mod
from .core import GameConfig, UNKNOWN_HORIZON, make_rng
from .engine import (
    attach_epsilon,
    regret_bound,
    run_game,
    verify_bound,
    write_trace_csv,
    write_trace_json,
    read_trace_json,
)
from .one_round import ORTHOGONAL, PARALLEL, OneRoundSpec, lower_bound_value, solve_orthogonal, solve_parallel, solve_scalar_grid
from .oracles import RecursionSpec, argmax_at_zero_check, conditional_value_recursive, gaussian_dominance_check
from .potentials import exp_conjugate_numeric, exp_conjugate_upper_bound

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_CONFIG = 2


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def _find_key_line(text: str, key: str) -> Optional[int]:
    for i, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0]
        if stripped.strip().startswith(f"{key}:") or stripped.strip().startswith(f"- {key}:"):
            return i
    return None


def _require_keys(section: dict, allowed: set, required: set, where: str, text: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}", _find_key_line(text, key))
    for key in required:
        if key not in section:
            raise ConfigError(f"missing required key {key!r} in {where}", _find_key_line(text, where))


@dataclass
class ExperimentSpec:
    game: GameConfig
    strategies: List[dict]
    adversaries: List[dict]
    comparators: List[dict]   # {"norm": float, "direction_seed": int}
    out_dir: str
    out_format: str           # csv | json | both
    repeats: int
    rounds: int


STRATEGY_KEYS = {
    "ogd": {"tag", "eta"},
    "power": {"tag", "W", "p"},
    "normal_knownT": {"tag", "eps", "a"},
    "adaptive_normal": {"tag", "eps", "a"},
}
ADVERSARY_KEYS = {
    "orthogonal_minimax": {"tag"},
    "parallel_minimax": {"tag", "sign_policy"},
    "rademacher_line": {"tag", "direction"},
    "gaussian_random": {"tag"},
    "fixed_direction": {"tag", "direction"},
    "greedy_vs_comparator": {"tag", "comparator"},
}


def build_strategy(entry: dict, game: GameConfig):
    tag = entry.get("tag")
    if tag not in STRATEGY_KEYS:
        raise ConfigError(f"unknown strategy tag {tag!r}; choose from {sorted(STRATEGY_KEYS)}")
    G = game.grad_bound
    try:
        if tag == "ogd":
            return strat_mod.OGD(eta=float(entry["eta"]), G=G)
        if tag == "power":
            if not game.known_horizon:
                raise ConfigError("power strategy requires a numeric game.horizon")
            return strat_mod.PowerStrategy(W=float(entry["W"]), p=float(entry["p"]), G=G, T=game.horizon)
        if tag == "normal_knownT":
            if not game.known_horizon:
                raise ConfigError("normal_knownT strategy requires a numeric game.horizon")
            return strat_mod.NormalKnownTStrategy(eps=float(entry["eps"]), a=float(entry["a"]), G=G, T=game.horizon)
        return strat_mod.AdaptiveNormalStrategy(eps=float(entry["eps"]), a=float(entry["a"]), G=G)
    except KeyError as exc:
        raise ConfigError(f"strategy {tag!r} is missing parameter {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ConfigError(f"strategy {tag!r}: {exc}") from exc


def build_adversary(entry: dict, game: GameConfig):
    tag = entry.get("tag")
    if tag not in ADVERSARY_KEYS:
        raise ConfigError(f"unknown adversary tag {tag!r}; choose from {sorted(ADVERSARY_KEYS)}")
    G = game.grad_bound
    try:
        if tag == "orthogonal_minimax":
            if game.dim < 2:
                raise ConfigError("orthogonal_minimax requires game.dim >= 2")
            return adv_mod.OrthogonalMinimax(G=G)
        if tag == "parallel_minimax":
            return adv_mod.ParallelMinimax(G=G, sign_policy=entry.get("sign_policy", "grow"))
        if tag == "rademacher_line":
            direction = entry.get("direction")
            return adv_mod.RademacherLine(G=G, direction=None if direction is None else tuple(direction))
        if tag == "gaussian_random":
            return adv_mod.GaussianRandom(G=G)
        if tag == "fixed_direction":
            direction = entry.get("direction")
            return adv_mod.FixedDirection(G=G, direction=None if direction is None else tuple(direction))
        comp = entry.get("comparator")
        if comp is None or len(comp) != game.dim:
            raise ConfigError("greedy_vs_comparator needs a comparator vector of length game.dim")
        return adv_mod.GreedyVsComparator(G=G, comparator=tuple(float(x) for x in comp))
    except ValueError as exc:
        raise ConfigError(f"adversary {tag!r}: {exc}") from exc


def comparator_vector(norm: float, direction_seed: int, dim: int) -> np.ndarray:
    if norm == 0.0:
        return np.zeros(dim)
    rng = make_rng(int(direction_seed))
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return norm * v


def parse_experiment_spec(path) -> ExperimentSpec:
    text = Path(path).read_text()
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = None if mark is None else mark.line + 1
        raise ConfigError(f"YAML parse error: {exc}", line) from exc
    if not isinstance(raw, dict):
        raise ConfigError("spec must be a mapping")

    top_allowed = {"game", "strategy", "strategies", "adversary", "adversaries",
                   "comparators", "outputs", "repeats", "rounds"}
    _require_keys(raw, top_allowed, {"game"}, "top level", text)

    game_sec = raw["game"]
    _require_keys(game_sec, {"dim", "grad_bound", "horizon", "seed"},
                  {"dim", "grad_bound"}, "game", text)
    horizon = game_sec.get("horizon", UNKNOWN_HORIZON)
    if isinstance(horizon, str) and horizon != UNKNOWN_HORIZON:
        raise ConfigError(f"game.horizon must be an integer or {UNKNOWN_HORIZON!r}",
                          _find_key_line(text, "horizon"))
    try:
        game = GameConfig(dim=int(game_sec["dim"]), grad_bound=float(game_sec["grad_bound"]),
                          horizon=horizon, seed=int(game_sec.get("seed", 0)))
    except ValueError as exc:
        raise ConfigError(f"game: {exc}", _find_key_line(text, "game")) from exc

    if ("strategy" in raw) == ("strategies" in raw):
        raise ConfigError("provide exactly one of 'strategy' or 'strategies'")
    strategies = [raw["strategy"]] if "strategy" in raw else list(raw["strategies"])
    if ("adversary" in raw) and ("adversaries" in raw):
        raise ConfigError("provide at most one of 'adversary' or 'adversaries'")
    adversaries = [raw["adversary"]] if "adversary" in raw else list(raw.get("adversaries", []))
    if not adversaries:
        raise ConfigError("at least one adversary is required")

    for entry in strategies:
        tag = entry.get("tag")
        if tag not in STRATEGY_KEYS:
            raise ConfigError(f"unknown strategy tag {tag!r}", _find_key_line(text, "tag"))
        _require_keys(entry, STRATEGY_KEYS[tag], STRATEGY_KEYS[tag], f"strategy {tag}", text)
        build_strategy(entry, game)  # surface parameter precondition violations now
    for entry in adversaries:
        tag = entry.get("tag")
        if tag not in ADVERSARY_KEYS:
            raise ConfigError(f"unknown adversary tag {tag!r}", _find_key_line(text, "tag"))
        _require_keys(entry, ADVERSARY_KEYS[tag], {"tag"}, f"adversary {tag}", text)
        build_adversary(entry, game)

    comparators = raw.get("comparators", [{"norm": 0.0, "direction_seed": 0}])
    for comp in comparators:
        _require_keys(comp, {"norm", "direction_seed"}, {"norm"}, "comparators entry", text)
        if float(comp["norm"]) < 0:
            raise ConfigError("comparator norm must be nonnegative", _find_key_line(text, "norm"))

    outputs = raw.get("outputs", {})
    _require_keys(outputs, {"dir", "format"}, set(), "outputs", text)
    out_format = outputs.get("format", "csv")
    if out_format not in ("csv", "json", "both"):
        raise ConfigError("outputs.format must be csv, json, or both", _find_key_line(text, "format"))

    repeats = int(raw.get("repeats", 1))
    if repeats < 1:
        raise ConfigError("repeats must be >= 1", _find_key_line(text, "repeats"))

    rounds = raw.get("rounds")
    if rounds is None:
        if not game.known_horizon:
            raise ConfigError("rounds is required when game.horizon is unknown",
                              _find_key_line(text, "rounds") or _find_key_line(text, "horizon"))
        rounds = game.horizon
    rounds = int(rounds)
    if rounds < 1:
        raise ConfigError("rounds must be >= 1", _find_key_line(text, "rounds"))
    if game.known_horizon and rounds != game.horizon:
        for entry in strategies:
            if entry.get("tag") in ("power", "normal_knownT"):
                raise ConfigError("rounds must equal game.horizon for horizon-tuned strategies",
                                  _find_key_line(text, "rounds"))

    return ExperimentSpec(game=game, strategies=strategies, adversaries=adversaries,
                          comparators=[{"norm": float(c["norm"]),
                                        "direction_seed": int(c.get("direction_seed", 0))}
                                       for c in comparators],
                          out_dir=outputs.get("dir", "out"), out_format=out_format,
                          repeats=repeats, rounds=rounds)


def _execute_cell(args):
    """One (strategy, adversary, repeat) cell; returns summary rows."""
    spec, si, ai, k, out_dir = args
    game = GameConfig(dim=spec.game.dim, grad_bound=spec.game.grad_bound,
                      horizon=spec.game.horizon, seed=spec.game.seed + k)
    strategy = build_strategy(spec.strategies[si], game)
    adversary = build_adversary(spec.adversaries[ai], game)
    trace = run_game(strategy, adversary, game, spec.rounds)
    if hasattr(strategy, "potential"):
        attach_epsilon(trace, strategy.potential())
    run_id = f"s{si}-{strategy.tag}_a{ai}-{adversary.tag}_k{k:03d}"
    if spec.out_format in ("csv", "both"):
        write_trace_csv(trace, Path(out_dir) / f"run_{run_id}.csv")
    if spec.out_format in ("json", "both"):
        write_trace_json(trace, Path(out_dir) / f"run_{run_id}.json")
    rows = []
    for comp in spec.comparators:
        u = comparator_vector(comp["norm"], comp["direction_seed"], game.dim)
        report = verify_bound(trace, strategy, [u])[0]
        rows.append({
            "run_id": run_id, "strategy": strategy.tag, "adversary": adversary.tag,
            "seed": game.seed, "u_norm": report.u_norm,
            "direction_seed": comp["direction_seed"],
            "regret": report.regret_actual, "bound": report.regret_bound,
            "slack": report.slack, "holds": report.holds,
        })
    return rows


def cmd_run(args) -> int:
    try:
        spec = parse_experiment_spec(args.spec)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        spec.game = GameConfig(dim=spec.game.dim, grad_bound=spec.game.grad_bound,
                               horizon=spec.game.horizon, seed=args.seed)
    if args.out is not None:
        spec.out_dir = args.out
    if args.format is not None:
        spec.out_format = args.format
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    cells = [(spec, si, ai, k, str(out_dir))
             for si in range(len(spec.strategies))
             for ai in range(len(spec.adversaries))
             for k in range(spec.repeats)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            all_rows = [row for rows in pool.map(_execute_cell, cells) for row in rows]
    else:
        all_rows = [row for cell in cells for row in _execute_cell(cell)]

    summary_path = out_dir / "summary.csv"
    with open(summary_path, "w") as fh:
        cols = ["run_id", "strategy", "adversary", "seed", "u_norm", "direction_seed",
                "regret", "bound", "slack", "holds"]
        fh.write(",".join(cols) + "\n")
        for row in all_rows:
            fh.write(",".join(str(row[c]) for c in cols) + "\n")

    violations = [row for row in all_rows if not row["holds"]]
    verdict = {
        "all_hold": not violations,
        "n_runs": len(cells),
        "n_checks": len(all_rows),
        "violations": violations,
    }
    with open(out_dir / "verdict.json", "w") as fh:
        json.dump(verdict, fh, indent=2)
    with open(out_dir / "sweep.json", "w") as fh:
        json.dump({
            "game": {"dim": spec.game.dim, "grad_bound": spec.game.grad_bound,
                     "horizon": spec.game.horizon, "seed": spec.game.seed},
            "strategies": spec.strategies, "adversaries": spec.adversaries,
            "comparators": spec.comparators, "rounds": spec.rounds,
            "format": spec.out_format, "repeats": spec.repeats,
        }, fh, indent=2)

    print(f"{len(cells)} runs, {len(all_rows)} bound checks, "
          f"{len(violations)} violations -> {summary_path}")
    return EXIT_OK if not violations else EXIT_BOUND_VIOLATION


# --- verify suites ----------------------------------------------------------

def _suite_gaussian_dominance():
    corpus = [
        ("abs", lambda x: abs(x)),
        ("square", lambda x: x * x),
        ("quartic", lambda x: x**4),
        ("power_1.5", lambda x: abs(x) ** 1.5),
        ("power_3", lambda x: abs(x) ** 3),
        ("exp", math.exp),
        ("exp_quad_c8", lambda x: math.exp(x * x / 8.0)),
        ("softplus", lambda x: math.log1p(math.exp(-abs(x))) + max(x, 0.0)),
        ("hinge", lambda x: max(0.0, x - 0.3)),
        ("neg_hinge", lambda x: max(0.0, 1.0 - x)),
        ("cosh", math.cosh),
        ("abs_shift", lambda x: abs(x - 0.25)),
    ]
    return [("gaussian-dominance", name, gaussian_dominance_check(f)) for name, f in corpus]


def _suite_argmax_zero():
    rows = []
    for eps in (0.5, 1.0):
        for G in (0.5, 1.0):
            for ratio in (1.02, 1.3, 2.0):
                a = ratio * 3.0 * math.pi * G * G / 4.0
                for t in (1, 2, 5, 50):
                    ok = argmax_at_zero_check(eps, a, G, t)
                    rows.append(("argmax-zero", f"eps={eps},a={a:.3f},G={G},t={t}", ok))
    return rows


def _suite_conjugate_bound(n: int = 200, seed: int = 0):
    rng = make_rng(seed)
    rows = []
    worst = -math.inf
    for _ in range(n):
        alpha = float(rng.uniform(0.2, 10.0))
        beta = float(rng.uniform(0.1, 5.0))
        w = float(rng.uniform(0.0, 10.0))
        numeric = exp_conjugate_numeric(alpha, beta, w)
        closed = exp_conjugate_upper_bound(alpha, beta, w)
        worst = max(worst, numeric - closed)
    rows.append(("conjugate-bound", f"{n} random (alpha,beta,w), max excess {worst:.2e}",
                 worst <= 1e-8))
    return rows


def _random_one_round_specs(regime: str, n: int, rng):
    specs = []
    for _ in range(n):
        r = float(rng.uniform(0.0, 3.0))
        G = float(rng.uniform(0.3, 2.0))
        theta = np.zeros(2)
        if r > 0:
            v = rng.standard_normal(2)
            theta = r * v / np.linalg.norm(v)
        if regime == ORTHOGONAL:
            p = float(rng.uniform(1.0, 2.0))
            W = float(rng.uniform(0.3, 3.0))
            c = float(rng.uniform(0.0, 4.0))
            h = lambda x, W=W, p=p, c=c: (W / p) * (x * x + c) ** (p / 2.0)
        else:
            if rng.random() < 0.5:
                c2 = float(rng.uniform(2.0, 10.0))
                b0 = float(rng.uniform(0.2, 2.0))
                h = lambda x, b0=b0, c2=c2: b0 * np.exp(x * x / (2.0 * c2))
            else:
                pp = float(rng.uniform(2.0, 4.0))
                h = lambda x, pp=pp: np.abs(x) ** pp
        specs.append(OneRoundSpec(h=h, theta=theta, G=G))
    return specs


def _suite_one_round(regime: Optional[str] = None, n: int = 50, seed: int = 1):
    rng = make_rng(seed)
    rows = []
    regimes = [ORTHOGONAL, PARALLEL] if regime is None else [regime]
    for reg in regimes:
        worst = 0.0
        dominance_ok = True
        for spec in _random_one_round_specs(reg, n, rng):
            closed = (solve_orthogonal(spec, rng) if reg == ORTHOGONAL
                      else solve_parallel(spec)).value
            grid = solve_scalar_grid(spec)
            worst = max(worst, abs(closed - grid) / (1.0 + abs(closed)))
            if grid < lower_bound_value(spec) - 1e-6:
                dominance_ok = False
        rows.append(("one-round", f"{reg}: max |closed-grid| rel {worst:.2e}", worst <= 1e-3))
        rows.append(("one-round", f"{reg}: grid >= lower bound", dominance_ok))
    return rows


def _suite_recursion():
    rows = []
    for p in (1.0, 1.5, 2.0):
        for T in (1, 2, 3):
            spec = RecursionSpec(f=lambda x, p=p: (1.0 / p) * np.abs(x) ** p, G=1.0, T=T, dim=2)
            val = conditional_value_recursive(spec, 0, np.zeros(2))
            truth = (1.0 / p) * T ** (p / 2.0)
            rel = abs(val - truth) / abs(truth)
            rows.append(("recursion", f"p={p},T={T}: rel {rel:.2e}", rel <= 1e-2))
    return rows


SUITES = {
    "gaussian-dominance": _suite_gaussian_dominance,
    "argmax-zero": _suite_argmax_zero,
    "conjugate-bound": _suite_conjugate_bound,
    "one-round": _suite_one_round,
    "recursion": _suite_recursion,
}


def cmd_verify(args) -> int:
    if args.all:
        names = list(SUITES)
    elif args.lemma:
        names = [args.lemma]
    else:
        print("error: choose --lemma <name> or --all", file=sys.stderr)
        return EXIT_CONFIG
    rows = []
    for name in names:
        if name == "one-round" and args.regime:
            rows.extend(_suite_one_round(regime=args.regime))
        else:
            rows.extend(SUITES[name]())
    width = max(len(r[1]) for r in rows)
    failures = []
    for suite, label, ok in rows:
        print(f"{suite:20s} {label:{width}s} {'PASS' if ok else 'FAIL'}")
        if not ok:
            failures.append((suite, label))
    if failures:
        print(f"\n{len(failures)} failing checks:", file=sys.stderr)
        for suite, label in failures:
            print(f"  {suite}: {label}", file=sys.stderr)
        return EXIT_BOUND_VIOLATION
    return EXIT_OK


def cmd_curves(args) -> int:
    trace_dir = Path(args.trace_dir)
    meta_path = trace_dir / "sweep.json"
    if not meta_path.exists():
        print(f"error: {meta_path} not found (run the sweep first)", file=sys.stderr)
        return EXIT_CONFIG
    meta = json.loads(meta_path.read_text())
    traces = sorted(trace_dir.glob("run_*.json"))
    if not traces:
        print("error: no run_*.json traces found; use outputs.format json or both",
              file=sys.stderr)
        return EXIT_CONFIG
    strategies = {f"s{i}-{entry['tag']}": entry for i, entry in enumerate(meta["strategies"])}
    game = meta["game"]
    out_path = Path(args.out) if args.out else trace_dir / "curves.csv"
    with open(out_path, "w") as fh:
        fh.write("t,run_id,regret_u,bound_u,u_norm\n")
        for path in traces:
            trace = read_trace_json(path)
            run_id = path.stem[len("run_"):]
            strat_key = run_id.split("_a")[0]
            entry = strategies[strat_key]
            params = dict(entry)
            params["G"] = game["grad_bound"]
            if entry["tag"] in ("power", "normal_knownT"):
                params["T"] = game["horizon"]
            for comp in meta["comparators"]:
                u = comparator_vector(comp["norm"], comp["direction_seed"], trace.config.dim)
                per_round = np.einsum("td,td->t", trace.g, trace.w - u[None, :])
                cumulative = np.cumsum(per_round)
                u_norm = float(np.linalg.norm(u))
                for t in range(1, trace.n_rounds + 1):
                    bound = regret_bound(entry["tag"], params, u_norm, t)
                    fh.write(f"{t},{run_id},{float(cumulative[t - 1])!r},{bound!r},{u_norm!r}\n")
    print(f"wrote {out_path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="minimax-online",
                                     description="Unconstrained online linear optimization testbed")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment spec")
    p_run.add_argument("--spec", required=True)
    p_run.add_argument("--out", default=None, help="override outputs.dir")
    p_run.add_argument("--jobs", type=int,
                       default=int(os.environ.get("MINIMAX_ONLINE_JOBS", "1")))
    p_run.add_argument("--seed", type=int, default=None, help="override base seed")
    p_run.add_argument("--format", choices=("csv", "json", "both"), default=None)
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="run oracle-backed check suites")
    p_verify.add_argument("--lemma", choices=sorted(SUITES), default=None)
    p_verify.add_argument("--regime", choices=(ORTHOGONAL, PARALLEL), default=None)
    p_verify.add_argument("--all", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_curves = sub.add_parser("curves", help="emit per-round regret vs envelope CSV")
    p_curves.add_argument("trace_dir")
    p_curves.add_argument("--out", default=None)
    p_curves.set_defaults(func=cmd_curves)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

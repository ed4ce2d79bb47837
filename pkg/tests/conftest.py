import numpy as np
import pytest

from minimax_online import (
    FixedDirection,
    GameConfig,
    GaussianRandom,
    OrthogonalMinimax,
    ParallelMinimax,
    run_game,
)


def adversary_quartet(G):
    """The default adversary set used by the sweep-style checks."""
    return [
        OrthogonalMinimax(G=G),
        ParallelMinimax(G=G, sign_policy="grow"),
        FixedDirection(G=G),
        GaussianRandom(G=G),
    ]


def play_games(strategy, adversaries, dim, G, rounds, seeds, horizon=None):
    """Run strategy against each adversary for each seed; yields traces."""
    for adv in adversaries:
        for seed in seeds:
            cfg = GameConfig(dim=dim, grad_bound=G,
                             horizon=rounds if horizon is None else horizon, seed=seed)
            yield run_game(strategy, adv, cfg, rounds)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

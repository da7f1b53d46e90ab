"""Curvature-steering swimmer chemotaxis: simulation, Q-learning and baselines."""

from ._core import (
    Config,
    ConfigError,
    IoError,
    QNetwork,
    TrainingFault,
    concentration,
    evaluate,
    run_episode,
    taylor_green,
    train,
)

__all__ = [
    "Config",
    "ConfigError",
    "IoError",
    "QNetwork",
    "TrainingFault",
    "concentration",
    "evaluate",
    "run_episode",
    "taylor_green",
    "train",
]

"""Football game-data analytics: expected-point decision analysis,
win-probability regression over game stat differentials, and a bootstrap
matchup prediction engine with backtesting and calibration."""

from . import bt_model, core_data, decision_lab, fpm, ranking, rng, stats_kit
from .core_data import SeasonDataset, load_dataset, validate_dataset

__all__ = [
    "bt_model", "core_data", "decision_lab", "fpm", "ranking", "rng",
    "stats_kit", "SeasonDataset", "load_dataset", "validate_dataset",
]

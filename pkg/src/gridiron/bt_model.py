"""Pairwise-comparison win model over home-minus-away game stat differentials.

The home team's win probability is a logistic function of the differential
feature vector; ability differences are linear in the features, so fitting
reduces to maximum-likelihood logistic regression.  The fit is Newton / IRLS
with step-halving, run to a tight gradient so downstream optimality checks
hold in raw feature units.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

from .core_data import SeasonDataset
from .ranking import RankTable

logger = logging.getLogger(__name__)

FEATURE_NAMES = ("dy_total", "dy_penalty", "d_turnovers",
                 "d_possession", "d_ratio", "d_rank")
N_FEATURES = len(FEATURE_NAMES)


class ModelError(Exception):
    pass


class Separation(ModelError):
    pass


class Collinearity(ModelError):
    pass


class NonConvergence(ModelError):
    pass


class UnfittedModel(ModelError):
    pass


class TooFewRows(ModelError):
    pass


class MissingStats(ModelError):
    pass


class MissingRankSnapshot(ModelError):
    pass


@dataclass(frozen=True)
class FeatureDiff:
    """Home-minus-away differentials for one game, label 1 if home won."""

    game_id: str
    dy_total: float
    dy_penalty: float
    d_turnovers: float
    d_possession: float
    d_ratio: float
    d_rank: float
    label: int

    def vector(self) -> np.ndarray:
        return np.array([self.dy_total, self.dy_penalty, self.d_turnovers,
                         self.d_possession, self.d_ratio, self.d_rank])


@dataclass
class FittedBTModel:
    intercept: float
    coefficients: np.ndarray          # (6,) in FEATURE_NAMES order
    standard_errors: np.ndarray       # (7,) intercept first
    p_values: np.ndarray              # (7,) intercept first
    n_obs: int
    log_likelihood: float
    feature_means: Optional[np.ndarray] = None  # set on standardized fits
    feature_sds: Optional[np.ndarray] = None

    @property
    def is_standardized(self) -> bool:
        return self.feature_means is not None

    def _check(self) -> None:
        params = np.concatenate([[self.intercept], self.coefficients])
        if not np.all(np.isfinite(params)):
            raise UnfittedModel("model parameters are not finite")

    def linear_predictor(self, x: np.ndarray) -> np.ndarray:
        self._check()
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.is_standardized:
            x = (x - self.feature_means) / self.feature_sds
        return self.intercept + x @ self.coefficients


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def predict_prob(model: FittedBTModel, x) -> float:
    """Home win probability for a single feature vector or FeatureDiff."""
    if isinstance(x, FeatureDiff):
        x = x.vector()
    return float(sigmoid(model.linear_predictor(x))[0])


def predict_many(model: FittedBTModel, x: np.ndarray) -> np.ndarray:
    """Vectorized predict_prob over rows of x (n, 6)."""
    return sigmoid(model.linear_predictor(x))


def build_features(dataset: SeasonDataset,
                   rank_tables: dict[tuple[int, int], RankTable],
                   include_seasons: Optional[Sequence[int]] = None) -> list[FeatureDiff]:
    """One FeatureDiff per decided regular-season game.

    Stats rows must be present for both teams.  The rank differential comes
    from the before-week snapshot; games before any decided result exists in
    their season (week 1) use a rank differential of 0 since no ordering is
    defined yet.  Tie games are excluded with a warning.
    """
    if dataset.stats is None:
        raise MissingStats("dataset has no team stats")
    wanted = None if include_seasons is None else set(include_seasons)
    first_table_week = {}
    for season, week in rank_tables:
        cur = first_table_week.get(season)
        if cur is None or week < cur:
            first_table_week[season] = week
    out: list[FeatureDiff] = []
    for game in dataset.regular_games():
        if wanted is not None and game.season not in wanted:
            continue
        if game.is_tie:
            logger.warning("excluding tie game %s from features", game.game_id)
            continue
        try:
            home, away = dataset.stats_pair(game.game_id)
        except KeyError as exc:
            raise MissingStats(f"game {game.game_id}: missing stat row {exc}") from exc
        table = rank_tables.get((game.season, game.week))
        if table is None:
            if game.week < first_table_week.get(game.season, math.inf):
                d_rank = 0.0
            else:
                raise MissingRankSnapshot(f"no rank table for {(game.season, game.week)}")
        else:
            d_rank = float(table.rank[away.team] - table.rank[home.team])
        out.append(FeatureDiff(
            game_id=game.game_id,
            dy_total=float(home.total_yards - away.total_yards),
            dy_penalty=float(home.penalty_yards - away.penalty_yards),
            d_turnovers=float(home.turnovers - away.turnovers),
            d_possession=float(home.possession_seconds - away.possession_seconds),
            d_ratio=home.ratio - away.ratio,
            d_rank=d_rank,
            label=1 if game.winner == game.home_team else 0,
        ))
    return out


def design_matrix(features: Sequence[FeatureDiff]) -> tuple[np.ndarray, np.ndarray]:
    """(X, y) with an intercept column of ones prepended to X."""
    x = np.array([f.vector() for f in features])
    y = np.array([f.label for f in features], dtype=float)
    return np.hstack([np.ones((len(features), 1)), x]), y


def log_likelihood(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> float:
    z = X @ beta
    # log sigma(z) = -log(1+exp(-z)), computed stably for both label values
    return float(np.sum(np.where(y == 1.0, -np.logaddexp(0.0, -z), -np.logaddexp(0.0, z))))


def gradient(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> np.ndarray:
    return X.T @ (y - sigmoid(X @ beta))


_GRAD_TOL = 1e-8
_LL_RTOL = 1e-10
_MAX_LOGIT = 30.0


def _irls(X: np.ndarray, y: np.ndarray, ridge: float) -> tuple[np.ndarray, np.ndarray]:
    """Newton/IRLS maximizer; returns (beta, unpenalized Hessian at optimum)."""
    n, k = X.shape
    ridge_vec = np.full(k, ridge)
    ridge_vec[0] = 0.0  # never penalize the intercept
    beta = np.zeros(k)
    ll = log_likelihood(X, y, beta) - 0.5 * float(ridge_vec @ (beta * beta))
    for _ in range(100):
        p = sigmoid(X @ beta)
        g = X.T @ (y - p) - ridge_vec * beta
        w = p * (1.0 - p)
        hess = (X * w[:, None]).T @ X + np.diag(ridge_vec)
        if ridge == 0.0 and (not np.all(np.isfinite(hess)) or np.linalg.cond(hess) > 1e12):
            raise Collinearity("information matrix is singular or near-singular")
        try:
            delta = np.linalg.solve(hess, g)
        except np.linalg.LinAlgError as exc:
            raise Collinearity(str(exc)) from exc
        step = 1.0
        while True:
            cand = beta + step * delta
            cand_ll = log_likelihood(X, y, cand) - 0.5 * float(ridge_vec @ (cand * cand))
            if cand_ll >= ll - 1e-12:
                break
            step /= 2.0
            if step < 1e-12:
                raise NonConvergence("step-halving failed to improve the likelihood")
        beta, ll_prev, ll = cand, ll, cand_ll
        if ridge == 0.0 and np.max(np.abs(X @ beta)) > _MAX_LOGIT:
            raise Separation("fitted logits diverged; data are (quasi-)separable")
        g_new = X.T @ (y - sigmoid(X @ beta)) - ridge_vec * beta
        if abs(ll - ll_prev) < _LL_RTOL * (abs(ll) + 1.0) and np.max(np.abs(g_new)) < _GRAD_TOL:
            p = sigmoid(X @ beta)
            w = p * (1.0 - p)
            return beta, (X * w[:, None]).T @ X
    raise NonConvergence("no convergence after 100 iterations")


def fit(features: Sequence[FeatureDiff], ridge: float = 0.0) -> FittedBTModel:
    """Maximum-likelihood fit of the logistic win model.

    Requires n >= 50 and non-constant feature columns.  ridge > 0 adds an
    L2 penalty (excluding the intercept) for otherwise-separable fixtures.
    """
    if len(features) < 50:
        raise TooFewRows(f"need >= 50 rows, got {len(features)}")
    X, y = design_matrix(features)
    if np.all(y == 1.0) or np.all(y == 0.0):
        raise Separation("all labels identical")
    if ridge == 0.0:
        col_sd = X[:, 1:].std(axis=0)
        if np.any(col_sd == 0):
            bad = [FEATURE_NAMES[i] for i in np.nonzero(col_sd == 0)[0]]
            raise Collinearity(f"constant feature column(s): {bad}")
    beta, hess = _irls(X, y, ridge)
    cov = np.linalg.inv(hess)
    se = np.sqrt(np.diag(cov))
    z = beta / se
    p = 2.0 * sps.norm.sf(np.abs(z))
    return FittedBTModel(
        intercept=float(beta[0]),
        coefficients=beta[1:].copy(),
        standard_errors=se,
        p_values=p,
        n_obs=len(features),
        log_likelihood=log_likelihood(X, y, beta),
    )


def standardize_fit(features: Sequence[FeatureDiff], ridge: float = 0.0) -> FittedBTModel:
    """Fit on z-scored features; coefficients are per-1-sd effects.

    The returned model still accepts raw inputs: prediction z-scores them
    internally, so raw-path and standardized-path probabilities agree.
    """
    x = np.array([f.vector() for f in features])
    means = x.mean(axis=0)
    sds = x.std(axis=0, ddof=0)
    if np.any(sds == 0):
        bad = [FEATURE_NAMES[i] for i in np.nonzero(sds == 0)[0]]
        raise Collinearity(f"constant feature column(s): {bad}")
    scaled = [FeatureDiff(f.game_id, *(((f.vector() - means) / sds).tolist()), f.label)
              for f in features]
    model = fit(scaled, ridge=ridge)
    model.feature_means = means
    model.feature_sds = sds
    return model


def cross_validate(features: Sequence[FeatureDiff], folds: int = 10,
                   seed: int = 0, ridge: float = 0.0) -> tuple[float, float]:
    """Stratified k-fold accuracy of thresholding predict_prob at 0.5.

    Returns (mean, sd) of the per-fold accuracies.
    """
    if len(features) < folds:
        raise TooFewRows(f"need >= {folds} rows, got {len(features)}")
    rng = np.random.default_rng(seed)
    assignments = np.empty(len(features), dtype=int)
    for label in (0, 1):
        idx = np.array([i for i, f in enumerate(features) if f.label == label])
        rng.shuffle(idx)
        assignments[idx] = np.arange(len(idx)) % folds
    accuracies = []
    for fold in range(folds):
        train = [f for i, f in enumerate(features) if assignments[i] != fold]
        test = [f for i, f in enumerate(features) if assignments[i] == fold]
        if not test:
            continue
        model = fit(train, ridge=ridge)
        probs = predict_many(model, np.array([f.vector() for f in test]))
        predicted = (probs > 0.5).astype(int)
        actual = np.array([f.label for f in test])
        accuracies.append(float(np.mean(predicted == actual)))
    acc = np.array(accuracies)
    return float(acc.mean()), float(acc.std(ddof=1))


# ---------------------------------------------------------------------------
# Winner/loser descriptive comparisons (the stats behind the model features)

STAT_ACCESSORS = (
    ("total_yards", lambda s: float(s.total_yards)),
    ("penalty_yards", lambda s: float(s.penalty_yards)),
    ("turnovers", lambda s: float(s.turnovers)),
    ("possession_seconds", lambda s: float(s.possession_seconds)),
    ("ratio", lambda s: s.ratio),
)


@dataclass(frozen=True)
class PairedStatRow:
    stat: str
    mean_difference: float            # winner minus loser
    t_test: Optional["stats_kit.TestResult"]   # None on degenerate samples
    ks_test: "stats_kit.TestResult"
    winner_values: np.ndarray
    loser_values: np.ndarray


def winner_loser_comparison(dataset: SeasonDataset) -> list[PairedStatRow]:
    """Paired winner-vs-loser comparison of each game stat: paired t-test on
    the per-game differences and a two-sample KS test on the distributions.
    """
    from . import stats_kit
    if dataset.stats is None:
        raise MissingStats("dataset has no team stats")
    pairs = []
    for game in dataset.regular_games():
        if game.is_tie:
            continue
        loser = game.away_team if game.winner == game.home_team else game.home_team
        win_stat = dataset.stats.get((game.game_id, game.winner))
        lose_stat = dataset.stats.get((game.game_id, loser))
        if win_stat is None or lose_stat is None:
            raise MissingStats(f"game {game.game_id}: missing stat row")
        pairs.append((win_stat, lose_stat))
    rows = []
    for stat_name, get in STAT_ACCESSORS:
        winners = np.array([get(w) for w, _ in pairs])
        losers = np.array([get(l) for _, l in pairs])
        try:
            t_test = stats_kit.paired_t_test(winners, losers)
        except stats_kit.ZeroVariance:
            t_test = None
        rows.append(PairedStatRow(
            stat=stat_name,
            mean_difference=float((winners - losers).mean()),
            t_test=t_test,
            ks_test=stats_kit.ks_two_sample(winners, losers),
            winner_values=winners,
            loser_values=losers,
        ))
    return rows


def home_advantage(dataset: SeasonDataset) -> tuple[float, float, float, int]:
    """(home win rate, Wilson CI low, high, decided games)."""
    from . import stats_kit
    decided = [g for g in dataset.regular_games() if not g.is_tie]
    if not decided:
        raise MissingStats("no decided games")
    wins = sum(g.winner == g.home_team for g in decided)
    lo, hi = stats_kit.wilson_interval(wins, len(decided))
    return wins / len(decided), lo, hi, len(decided)


# ---------------------------------------------------------------------------
# Serialization: flat key/value JSON, round-trip stable at full precision.

def save_model(model: FittedBTModel, path: str | Path) -> None:
    payload: dict = {
        "intercept": model.intercept,
        "n_obs": model.n_obs,
        "log_likelihood": model.log_likelihood,
    }
    for i, name in enumerate(FEATURE_NAMES):
        payload[f"coef.{name}"] = float(model.coefficients[i])
    for i, name in enumerate(("intercept",) + FEATURE_NAMES):
        payload[f"se.{name}"] = float(model.standard_errors[i])
        payload[f"p.{name}"] = float(model.p_values[i])
    if model.is_standardized:
        for i, name in enumerate(FEATURE_NAMES):
            payload[f"mean.{name}"] = float(model.feature_means[i])
            payload[f"sd.{name}"] = float(model.feature_sds[i])
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path: str | Path) -> FittedBTModel:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    names = ("intercept",) + FEATURE_NAMES
    model = FittedBTModel(
        intercept=payload["intercept"],
        coefficients=np.array([payload[f"coef.{n}"] for n in FEATURE_NAMES]),
        standard_errors=np.array([payload[f"se.{n}"] for n in names]),
        p_values=np.array([payload[f"p.{n}"] for n in names]),
        n_obs=payload["n_obs"],
        log_likelihood=payload["log_likelihood"],
    )
    if f"mean.{FEATURE_NAMES[0]}" in payload:
        model.feature_means = np.array([payload[f"mean.{n}"] for n in FEATURE_NAMES])
        model.feature_sds = np.array([payload[f"sd.{n}"] for n in FEATURE_NAMES])
    model._check()
    return model

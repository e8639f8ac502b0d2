"""Command-line surface: ingest/validate, decision analyses, ranking, model
fitting, prediction, evaluation, and plot-data emission.

Exit codes: 0 success, 1 validation or data errors, 2 usage errors.
Diagnostics go to stderr; data rows go to stdout or, with --out, to files.
Every command is deterministic for fixed inputs, flags, and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, TextIO

import numpy as np

from . import bt_model, decision_lab, fpm, ranking, stats_kit
from .core_data import DataError, SeasonDataset, load_dataset, validate_dataset, write_games, write_stats
from .fpm import DEFAULT_SEED, BootstrapConfig

USAGE_EXIT = 2
DATA_EXIT = 1


@dataclass
class RunConfig:
    data_dir: Optional[Path]
    out: Optional[Path]
    fmt: str
    seed: int
    threads: int


class UsageError(Exception):
    pass


def _fmt_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):  # incl. numpy scalars: repr(float()) round-trips
        if np.isnan(value):
            return ""
        return repr(float(value))
    return str(value)


def _emit(header: list[str], rows: list[tuple], fmt: str, dest: TextIO) -> None:
    if fmt == "json-lines":
        for row in rows:
            record = {}
            for k, v in zip(header, row):
                if isinstance(v, float):
                    v = None if np.isnan(v) else float(v)
                elif isinstance(v, np.integer):
                    v = int(v)
                record[k] = v
            dest.write(json.dumps(record) + "\n")
    else:
        dest.write(",".join(header) + "\n")
        for row in rows:
            dest.write(",".join(_fmt_value(v) for v in row) + "\n")


def emit_plot_data(header: list[str], rows: list[tuple], path: Optional[Path],
                   fmt: str = "csv", separator: Optional[str] = None) -> None:
    """Write one analysis table; None path means stdout."""
    if path is None:
        _emit(header, rows, fmt, sys.stdout)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        if separator is not None:  # gnuplot-style whitespace columns
            fh.write("# " + " ".join(header) + "\n")
            for row in rows:
                fh.write(separator.join(_fmt_value(v) for v in row) + "\n")
        else:
            _emit(header, rows, fmt, fh)


def _load(cfg: RunConfig, require_stats: bool = False,
          require_plays: bool = False) -> SeasonDataset:
    if cfg.data_dir is None:
        raise UsageError("--data is required for this command")
    dataset = load_dataset(cfg.data_dir)
    report = validate_dataset(dataset)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if not report.ok:
        for error in report.errors:
            print(f"error: {error}", file=sys.stderr)
        raise DataError(f"{len(report.errors)} validation errors; refusing dataset")
    if require_stats and dataset.stats is None:
        raise DataError("this command needs stats.csv or plays.csv to derive stats from")
    if require_plays and not dataset.plays:
        raise DataError("this command needs plays.csv")
    return dataset


def _out_path(cfg: RunConfig, name: str) -> Optional[Path]:
    if cfg.out is None:
        return None
    cfg.out.mkdir(parents=True, exist_ok=True)
    return cfg.out / name


# ---------------------------------------------------------------------------
# Commands

def cmd_validate(args, cfg: RunConfig) -> int:
    if cfg.data_dir is None:
        raise UsageError("--data is required")
    dataset = load_dataset(cfg.data_dir)
    report = validate_dataset(dataset)
    rows = ([("error", e) for e in report.errors] +
            [("warning", w) for w in report.warnings])
    _emit(["level", "message"], rows, cfg.fmt, sys.stdout)
    print(f"{len(dataset.games)} games, {len(report.errors)} errors, "
          f"{len(report.warnings)} warnings", file=sys.stderr)
    return 0 if report.ok else DATA_EXIT


def cmd_pat(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, require_plays=True)
    rates = decision_lab.pat_rates(dataset, season=args.season)
    if rates.two_point.rate is not None and rates.kick.rate is not None:
        benefit = decision_lab.pat_expected_benefit(rates.two_point.rate, rates.kick.rate)
        print(f"two-point rate {rates.two_point.rate:.4f} "
              f"({rates.two_point.successes}/{rates.two_point.attempts}), "
              f"kick rate {rates.kick.rate:.4f} "
              f"({rates.kick.successes}/{rates.kick.attempts}), "
              f"expected benefit per touchdown {benefit:+.4f}", file=sys.stderr)

    team_rows = decision_lab.pat_team_table(dataset)
    emit_plot_data(
        ["team", "two_point_successes", "two_point_attempts", "kick_successes",
         "kick_attempts", "expected_benefit"],
        [(r.team, r.two_point.successes, r.two_point.attempts,
          r.kick.successes, r.kick.attempts, r.expected_benefit) for r in team_rows],
        _out_path(cfg, "pat_team_benefit.csv"), cfg.fmt)

    try:
        rule = decision_lab.pat_rule_change_test(dataset)
    except decision_lab.SingleSeason:
        print("single season: skipping rule-change tests", file=sys.stderr)
        return 0
    yearly_rows = [(y.season, y.kick.successes, y.kick.attempts, y.kick.rate,
                    y.two_point.successes, y.two_point.attempts, y.two_point.rate)
                   for y in rule.yearly]
    header = ["season", "kick_successes", "kick_attempts", "kick_rate",
              "two_point_successes", "two_point_attempts", "two_point_rate"]
    if cfg.out is None:
        _emit(header, yearly_rows, cfg.fmt, sys.stdout)
    else:
        emit_plot_data(header, yearly_rows, _out_path(cfg, "pat_yearly_rates.csv"), cfg.fmt)
        emit_plot_data(["test", "statistic", "p_value"],
                       [("kick_final_vs_earlier", rule.kick_test.statistic,
                         rule.kick_test.p_value),
                        ("two_point_final_vs_earlier", rule.two_point_test.statistic,
                         rule.two_point_test.p_value)],
                       _out_path(cfg, "pat_tests.csv"), cfg.fmt)
    print(f"kick rate shift test p={rule.kick_test.p_value:.3g}; "
          f"two-point shift test p={rule.two_point_test.p_value:.3g}", file=sys.stderr)
    return 0


def _rate_curve_rows(name: str, curve: stats_kit.RateCurve) -> list[tuple]:
    rows = []
    for i in range(len(curve.trials)):
        rows.append((name, float(curve.bin_edges[i]), float(curve.bin_edges[i + 1]),
                     int(curve.successes[i]), int(curve.trials[i]),
                     None if curve.trials[i] == 0 else float(curve.rate[i]),
                     None if curve.trials[i] == 0 else float(curve.ci_low[i]),
                     None if curve.trials[i] == 0 else float(curve.ci_high[i])))
    return rows


def cmd_fourth_down(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, require_plays=True)
    curves = decision_lab.fourth_down_curves(dataset, bin_width=args.bin_width)
    chart = decision_lab.decision_chart(curves)

    chart_header = ["l", "e_plus", "e_minus", "e_net", "recommend"]
    chart_rows = [(r.l, r.e_plus, r.e_minus, r.e_net, r.recommend) for r in chart.rows]
    if cfg.out is None:
        _emit(chart_header, chart_rows, cfg.fmt, sys.stdout)
    else:
        emit_plot_data(chart_header, chart_rows, _out_path(cfg, "decision_chart.csv"), cfg.fmt)
        emit_plot_data(chart_header, chart_rows, _out_path(cfg, "decision_chart.dat"),
                       cfg.fmt, separator=" ")
        curve_rows = (_rate_curve_rows("conversion_by_fieldpos", curves.conv_by_fieldpos)
                      + _rate_curve_rows("conversion_by_distance", curves.conv_by_distance)
                      + _rate_curve_rows("field_goal_by_distance", curves.fg_by_distance))
        emit_plot_data(["curve", "bin_lo", "bin_hi", "successes", "trials",
                        "rate", "ci_low", "ci_high"],
                       curve_rows, _out_path(cfg, "fourth_down_curves.csv"), cfg.fmt)
        oc = curves.drive_outcome_by_start
        outcome_rows = []
        for i in range(len(oc.trials)):
            n = int(oc.trials[i])
            outcome_rows.append((float(oc.bin_edges[i]), float(oc.bin_edges[i + 1]),
                                 int(oc.touchdowns[i]), int(oc.field_goals[i]),
                                 int(oc.failures[i]),
                                 None if n == 0 else oc.touchdowns[i] / n,
                                 None if n == 0 else oc.field_goals[i] / n,
                                 None if n == 0 else oc.failures[i] / n))
        emit_plot_data(["start_lo", "start_hi", "touchdowns", "field_goals",
                        "failures", "pi_td", "pi_fg", "pi_fail"],
                       outcome_rows, _out_path(cfg, "drive_outcomes.csv"), cfg.fmt)
    weighted = ("n/a" if chart.mean_net_weighted is None
                else f"{chart.mean_net_weighted:.3f}")
    positivity = ("n/a" if chart.positivity_test is None
                  else f"{chart.positivity_test.p_value:.3g}")
    print(f"avg drive length {curves.avg_drive_length:.1f} yards; "
          f"mean net benefit {chart.mean_net_uniform:.3f} (uniform) / "
          f"{weighted} (attempt-weighted); "
          f"positivity p={positivity}", file=sys.stderr)
    return 0


def cmd_rank(args, cfg: RunConfig) -> int:
    dataset = _load(cfg)
    tables = ranking.season_rank_tables(dataset.games.values())
    rows = []
    for (season, week), table in sorted(tables.items()):
        if args.season is not None and season != args.season:
            continue
        if args.week is not None and week != args.week:
            continue
        for team in sorted(table.rank, key=lambda t: table.rank[t]):
            rows.append((season, week, team, table.score[team], table.rank[team]))
    emit_plot_data(["season", "week", "team", "score", "rank"], rows,
                   _out_path(cfg, "rankings.csv"), cfg.fmt)
    return 0


def _coefficient_rows(model: bt_model.FittedBTModel) -> list[tuple]:
    rows = [("intercept", model.intercept, float(model.standard_errors[0]),
             float(model.p_values[0]))]
    for i, name in enumerate(bt_model.FEATURE_NAMES):
        rows.append((name, float(model.coefficients[i]),
                     float(model.standard_errors[i + 1]), float(model.p_values[i + 1])))
    return rows


def cmd_fit(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, require_stats=True)
    tables = ranking.season_rank_tables(dataset.games.values())
    features = bt_model.build_features(dataset, tables)
    model = bt_model.fit(features)
    header = ["term", "estimate", "std_error", "p_value"]
    if cfg.out is None:
        _emit(header, _coefficient_rows(model), cfg.fmt, sys.stdout)
    else:
        emit_plot_data(header, _coefficient_rows(model),
                       _out_path(cfg, "coefficients.csv"), cfg.fmt)
        standardized = bt_model.standardize_fit(features)
        emit_plot_data(header, _coefficient_rows(standardized),
                       _out_path(cfg, "coefficients_standardized.csv"), cfg.fmt)
        bt_model.save_model(model, cfg.out / "model.json")

        comparison = bt_model.winner_loser_comparison(dataset)
        adv_rate, adv_lo, adv_hi, adv_n = bt_model.home_advantage(dataset)
        rows = [(c.stat, c.mean_difference,
                 None if c.t_test is None else c.t_test.statistic,
                 None if c.t_test is None else c.t_test.p_value,
                 c.ks_test.statistic, c.ks_test.p_value) for c in comparison]
        emit_plot_data(["stat", "mean_winner_minus_loser", "t_statistic",
                        "t_p_value", "ks_statistic", "ks_p_value"],
                       rows, _out_path(cfg, "paired_tests.csv"), cfg.fmt)
        emit_plot_data(["home_win_rate", "ci_low", "ci_high", "n_games"],
                       [(adv_rate, adv_lo, adv_hi, adv_n)],
                       _out_path(cfg, "home_advantage.csv"), cfg.fmt)
        ecdf_rows = []
        for c in comparison:
            xs, ys = stats_kit.ecdf(c.winner_values - c.loser_values).steps()
            ecdf_rows.extend((c.stat, float(x), float(y)) for x, y in zip(xs, ys))
        emit_plot_data(["stat", "paired_difference", "cdf"], ecdf_rows,
                       _out_path(cfg, "ecdfs.csv"), cfg.fmt)
        columns = fpm.training_stat_columns(dataset, dataset.seasons())
        corr = stats_kit.pearson_matrix(columns)
        corr_rows = []
        for i, a in enumerate(corr.labels):
            for j, b in enumerate(corr.labels):
                if i < j:
                    corr_rows.append((a, b, float(corr.rho[i, j]), float(corr.p[i, j])))
        emit_plot_data(["stat_a", "stat_b", "pearson_rho", "p_value"], corr_rows,
                       _out_path(cfg, "correlations.csv"), cfg.fmt)
    print(f"fitted on {model.n_obs} games, log-likelihood {model.log_likelihood:.2f}",
          file=sys.stderr)
    return 0


def cmd_cv(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, require_stats=True)
    tables = ranking.season_rank_tables(dataset.games.values())
    features = bt_model.build_features(dataset, tables)
    mean, sd = bt_model.cross_validate(features, folds=10, seed=cfg.seed)
    _emit(["folds", "n_games", "accuracy_mean", "accuracy_sd"],
          [(10, len(features), mean, sd)], cfg.fmt, sys.stdout)
    return 0


def _bootstrap_config(args, cfg: RunConfig) -> BootstrapConfig:
    return BootstrapConfig(
        n_resamples=args.bootstrap,
        recency_window=args.recency_k,
        recency_multiplier=args.recency_mult,
        corr_threshold=args.corr_threshold,
        alpha=args.alpha,
        seed=cfg.seed,
        away_uses_first_resample=args.compat_x21,
    )


PREDICTION_HEADER = ["season", "week", "game_id", "home", "away",
                     "p_home_mean", "p_sd", "p_value", "decision", "actual"]


def _prediction_row(pred: fpm.PredictionResult, dataset: SeasonDataset) -> tuple:
    game = dataset.games[pred.game_id]
    actual = "tie" if game.is_tie else game.winner
    return (pred.season, pred.week, pred.game_id, pred.home, pred.away,
            pred.p_home_mean, pred.p_home_sd, pred.p_value,
            pred.decision.value, actual)


def cmd_predict(args, cfg: RunConfig) -> int:
    if args.season is None or args.week is None:
        raise UsageError("predict requires --season and --week")
    if args.week < args.start_week and not args.force:
        raise UsageError(f"week {args.week} is before start week {args.start_week}; "
                         f"pass --force to predict anyway")
    dataset = _load(cfg, require_stats=True)
    seasons = dataset.seasons()
    if len(seasons) < 2:
        raise DataError("predict needs at least 2 seasons (one to train on)")
    boot = _bootstrap_config(args, cfg)
    tables = ranking.season_rank_tables(dataset.games.values())
    train = [s for s in seasons if s != args.season]
    features = bt_model.build_features(dataset, tables, include_seasons=train)
    model = bt_model.fit(features)
    blocks = fpm.correlation_blocks(fpm.training_stat_columns(dataset, train),
                                    boot.corr_threshold)
    games = [g for g in dataset.regular_games(args.season) if g.week == args.week]
    if not games:
        raise DataError(f"no games in season {args.season} week {args.week}")
    rows = []
    for game in games:
        pred = fpm.predict_game(dataset, model, tables, game, boot, blocks=blocks)
        rows.append(_prediction_row(pred, dataset))
    emit_plot_data(PREDICTION_HEADER, rows, _out_path(cfg, "predictions.csv"), cfg.fmt)
    return 0


def cmd_evaluate(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, require_stats=True)
    boot = _bootstrap_config(args, cfg)
    report = fpm.evaluate(dataset, boot, start_week=args.start_week,
                          threads=cfg.threads)
    season_header = ["season", "n_games", "engine_accuracy", "baseline_accuracy",
                     "ties_predicted"]
    season_rows = [(s.season, s.n_games, s.engine_accuracy, s.baseline_accuracy,
                    s.ties_predicted) for s in report.seasons]
    if cfg.out is None:
        _emit(season_header, season_rows, cfg.fmt, sys.stdout)
    else:
        emit_plot_data(season_header, season_rows, _out_path(cfg, "seasons.csv"), cfg.fmt)
        emit_plot_data(PREDICTION_HEADER,
                       [_prediction_row(p, dataset) for p in report.predictions],
                       _out_path(cfg, "predictions.csv"), cfg.fmt)
        emit_plot_data(["week", "n_games", "accuracy"],
                       [(w.week, w.n_games, w.accuracy) for w in report.weekly],
                       _out_path(cfg, "weekly.csv"), cfg.fmt)
        emit_plot_data(["bucket_lo", "bucket_hi", "midpoint", "n_games",
                        "favorite_wins", "win_rate"],
                       [(b.lo, b.hi, b.midpoint, b.n_games, b.favorite_wins, b.win_rate)
                        for b in report.calibration],
                       _out_path(cfg, "calibration.csv"), cfg.fmt)
    trend = ("n/a" if report.weekly_trend is None
             else f"{report.weekly_trend.slope:.4f}")
    calib = ("n/a" if report.calibration_fit is None
             else f"slope {report.calibration_fit.slope:.3f} "
                  f"CI [{report.calibration_fit.slope_ci_low:.3f}, "
                  f"{report.calibration_fit.slope_ci_high:.3f}]")
    print(f"rng {report.rng_algorithm} seed {boot.seed}; "
          f"overall engine {report.overall_engine_accuracy:.4f} vs "
          f"baseline {report.overall_baseline_accuracy:.4f}; "
          f"tie rate {report.tie_rate:.4f}; weekly trend {trend}; "
          f"calibration {calib}", file=sys.stderr)
    return 0


def cmd_synth(args, cfg: RunConfig) -> int:
    if cfg.out is None:
        raise UsageError("synth requires --out")
    params = fpm.SynthesisParams(seed=cfg.seed)
    dataset = fpm.synthesize_seasons(params)
    cfg.out.mkdir(parents=True, exist_ok=True)
    ordered = sorted(dataset.games.values(), key=lambda g: (g.season, g.week, g.game_id))
    write_games(ordered, cfg.out / "games.csv")
    stats_rows = []
    for game in ordered:
        stats_rows.append(dataset.stats[(game.game_id, game.home_team)])
        stats_rows.append(dataset.stats[(game.game_id, game.away_team)])
    write_stats(stats_rows, cfg.out / "stats.csv")
    print(f"wrote {len(ordered)} games over {params.n_seasons} seasons to {cfg.out}",
          file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# Parser / dispatch

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridiron",
        description=__doc__,
        epilog=(
            "evaluate --out writes seasons.csv (per-season accuracy), "
            "predictions.csv (one row per predicted game), weekly.csv "
            "(accuracy by week with trend reported on stderr), and "
            "calibration.csv (favorite-probability buckets vs realized "
            "favorite win rate)."),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--data", type=Path, default=None, metavar="<dir>",
                       help="directory holding games.csv [plays.csv stats.csv]")
        if out:
            p.add_argument("--out", type=Path, default=None, metavar="<path>",
                           help="output directory (default: primary table to stdout)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help=f"RNG seed (default {DEFAULT_SEED})")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        p.add_argument("--format", choices=["csv", "json-lines"], default="csv")

    def bootstrap_flags(p):
        p.add_argument("--bootstrap", type=int, default=1000, metavar="<B>",
                       help="bootstrap resamples per team")
        p.add_argument("--recency-k", type=int, default=5, metavar="<k>",
                       help="games in the recency window")
        p.add_argument("--recency-mult", type=float, default=2.0, metavar="<m>",
                       help="draw-weight multiplier for the recency window")
        p.add_argument("--corr-threshold", type=float, default=0.3, metavar="<t>",
                       help="|rho| needed to resample stats jointly")
        p.add_argument("--alpha", type=float, default=0.05, metavar="<a>",
                       help="significance level of the win test")
        p.add_argument("--start-week", type=int, default=6, metavar="<n>",
                       help="first predictable week")
        p.add_argument("--compat-x21", action="store_true",
                       help="pair every home resample with the away team's "
                            "first resample instead of elementwise pairing")

    p = sub.add_parser("validate", help="check dataset integrity")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pat", help="point-after decision analysis")
    common(p)
    p.add_argument("--season", type=int, default=None, metavar="<yyyy>")
    p.set_defaults(func=cmd_pat)

    p = sub.add_parser("fourth-down", help="fourth-down curves and decision chart")
    common(p)
    p.add_argument("--bin-width", type=int, default=5, metavar="<yards>")
    p.set_defaults(func=cmd_fourth_down)

    p = sub.add_parser("rank", help="weekly team ranking snapshots")
    common(p)
    p.add_argument("--season", type=int, default=None, metavar="<yyyy>")
    p.add_argument("--week", type=int, default=None, metavar="<n>")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("fit", help="fit the win model; emit analysis tables")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("cv", help="10-fold cross-validated model accuracy")
    common(p)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("predict", help="predict one week's games")
    common(p)
    p.add_argument("--season", type=int, default=None, metavar="<yyyy>")
    p.add_argument("--week", type=int, default=None, metavar="<n>")
    p.add_argument("--force", action="store_true",
                   help="allow predictions before the start week")
    bootstrap_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="leave-one-season-out backtest")
    common(p)
    bootstrap_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic multi-season dataset")
    common(p)
    p.set_defaults(func=cmd_synth)
    return parser


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    cfg = RunConfig(data_dir=args.data, out=args.out, fmt=args.format,
                    seed=args.seed, threads=args.threads)
    try:
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (DataError, decision_lab.DecisionError, bt_model.ModelError,
            fpm.EngineError, ranking.RankingError, stats_kit.StatsError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


def main(argv: Optional[Sequence[str]] = None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())

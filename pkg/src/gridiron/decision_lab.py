"""Coaching-decision analyses built on expected points.

Point-after analysis: the expected point gain of a two-point try over a kick
is 2*s_2pts - 1*s_kick per touchdown, computable overall, per team, and per
season (including a rate-shift test around a rule change in the final
season).

Fourth-down analysis: empirical curves (conversion rate by field position
and by distance, field goal rate by kick distance, drive outcome by starting
position, average drive length) feed a mean-field net-benefit model.  With l
the offense's distance from its own goal line, going for it is worth
6 * s^gamma(l) where gamma(l) = (100 - l) / avg_drive_length counts the
conversions still needed to reach the goal; the foregone alternative costs
3*s_fg(l) plus the opponent's scoring lift 3*dpi_fg + 6*dpi_td at the
takeover spot relative to a touchback start (80 yards out).

All field positions here use the own-goal scale l in [1, 99]; plays store
the complementary distance-to-opponent-goal, converted at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import stats_kit
from .core_data import (DriveOutcome, PlayRecord, PlayType, SeasonDataset,
                        Turnover, drive_spans)
from .stats_kit import RateCurve, TestResult

TOUCHBACK_YARDS_TO_GOAL = 80
FG_SNAP_OFFSET = 17          # 7-yard snap depth + 10-yard end zone
SPARSE_BIN_TRIALS = 20       # below this, fall back to the adjusted overall rate
ADJUSTED_MAX_DISTANCE = 10   # distances covered by nearly all real attempts


class DecisionError(Exception):
    pass


class NoPlays(DecisionError):
    pass


class NoDrives(DecisionError):
    pass


class OutOfRange(DecisionError):
    pass


class CurveGap(DecisionError):
    pass


class SingleSeason(DecisionError):
    pass


class ZeroVariance(DecisionError):
    pass


@dataclass(frozen=True)
class CountRate:
    successes: int
    attempts: int

    @property
    def rate(self) -> Optional[float]:
        return None if self.attempts == 0 else self.successes / self.attempts


@dataclass(frozen=True)
class PatRates:
    two_point: CountRate
    kick: CountRate


@dataclass(frozen=True)
class TeamPatRow:
    team: str
    two_point: CountRate
    kick: CountRate
    expected_benefit: Optional[float]


@dataclass(frozen=True)
class YearlyPatRow:
    season: int
    kick: CountRate
    two_point: CountRate


@dataclass(frozen=True)
class PatRuleChangeResult:
    yearly: list[YearlyPatRow]
    kick_test: TestResult       # final season vs pooled earlier seasons
    two_point_test: TestResult


@dataclass
class DriveOutcomeCurve:
    """Per-bin probabilities that a drive ends in a touchdown, a field goal,
    or nothing, as a function of the starting yards-to-goal."""

    bin_edges: np.ndarray
    touchdowns: np.ndarray
    field_goals: np.ndarray
    failures: np.ndarray

    @property
    def trials(self) -> np.ndarray:
        return self.touchdowns + self.field_goals + self.failures

    def probabilities_at(self, yards_to_goal: float) -> Optional[tuple[float, float, float]]:
        """(pi_td, pi_fg, pi_fail) from the nearest populated bin."""
        trials = self.trials
        populated = np.nonzero(trials > 0)[0]
        if len(populated) == 0:
            return None
        centers = (self.bin_edges[:-1] + self.bin_edges[1:]) / 2.0
        idx = int(np.searchsorted(self.bin_edges, yards_to_goal, side="right")) - 1
        if idx < 0 or idx >= len(trials) or trials[idx] == 0:
            idx = int(populated[np.argmin(np.abs(centers[populated] - yards_to_goal))])
        n = trials[idx]
        return (float(self.touchdowns[idx] / n), float(self.field_goals[idx] / n),
                float(self.failures[idx] / n))


@dataclass
class FourthDownCurves:
    conv_by_fieldpos: RateCurve      # over own-goal scale l
    conv_by_distance: RateCurve      # over yards to go, 1-yard bins
    fg_by_distance: RateCurve        # over kick distance
    drive_outcome_by_start: DriveOutcomeCurve
    avg_drive_length: float

    @property
    def overall_conversion_rate(self) -> Optional[float]:
        trials = int(self.conv_by_distance.trials.sum())
        if trials == 0:
            return None
        return int(self.conv_by_distance.successes.sum()) / trials

    @property
    def adjusted_conversion_rate(self) -> Optional[float]:
        """Mean of the per-distance rates over 1..10 yards, unweighted.

        Short attempts dominate the raw attempt counts, so the plain overall
        rate over-weights the easiest distance; averaging the per-distance
        rates removes that skew.
        """
        curve = self.conv_by_distance
        rates = []
        for i in range(len(curve.trials)):
            if curve.bin_edges[i] > ADJUSTED_MAX_DISTANCE:
                break
            if curve.trials[i] > 0:
                rates.append(float(curve.rate[i]))
        return None if not rates else float(np.mean(rates))


class Recommendation:
    GO_FOR_IT = "go_for_it"
    KICK_OR_PUNT = "kick_or_punt"


@dataclass(frozen=True)
class ChartRow:
    l: int
    e_plus: float
    e_minus: float
    e_net: float
    recommend: str
    conversion_trials: int


@dataclass
class DecisionChart:
    rows: list[ChartRow]
    mean_net_uniform: float
    mean_net_weighted: Optional[float]       # weighted by observed attempt frequency
    positivity_test: Optional[TestResult]    # one-sided t of e_net > 0 over yardlines


@dataclass(frozen=True)
class QuarterRatioResult:
    winner_means: list[Optional[float]]   # cumulative r at end of Q1..Q4
    loser_means: list[Optional[float]]
    winner_q3_q4_test: Optional[TestResult]  # None when degenerate
    loser_q3_q4_test: Optional[TestResult]
    n_games: int


@dataclass
class TurnoverTiming:
    bin_minutes: int
    minute_edges: np.ndarray
    counts: np.ndarray
    q1_q3_test: TestResult   # paired winner-minus-loser turnovers through Q3


def _regular_plays(dataset: SeasonDataset) -> list[PlayRecord]:
    if not dataset.plays:
        raise NoPlays("dataset has no play-by-play data")
    regular = {g.game_id for g in dataset.games.values() if not g.is_postseason}
    return [p for p in dataset.plays if p.game_id in regular]


# ---------------------------------------------------------------------------
# Point(s) after touchdown

def pat_rates(dataset: SeasonDataset, season: Optional[int] = None,
              team: Optional[str] = None) -> PatRates:
    """Two-point and kick success counts over matching point-after plays."""
    counts = {PlayType.TWO_POINT_ATTEMPT: [0, 0], PlayType.EXTRA_POINT: [0, 0]}
    for play in _regular_plays(dataset):
        if play.play_type not in counts:
            continue
        game = dataset.games[play.game_id]
        if season is not None and game.season != season:
            continue
        if team is not None and play.offense != team:
            continue
        box = counts[play.play_type]
        box[1] += 1
        if play.attempt_success:
            box[0] += 1
    return PatRates(two_point=CountRate(*counts[PlayType.TWO_POINT_ATTEMPT]),
                    kick=CountRate(*counts[PlayType.EXTRA_POINT]))


def pat_expected_benefit(s_2pts: float, s_kick: float) -> float:
    """Expected point gain per touchdown of going for two: 2*s_2pts - s_kick."""
    for name, rate in (("s_2pts", s_2pts), ("s_kick", s_kick)):
        if not 0.0 <= rate <= 1.0:
            raise OutOfRange(f"{name}={rate} outside [0, 1]")
    return 2.0 * s_2pts - 1.0 * s_kick


def pat_team_table(dataset: SeasonDataset) -> list[TeamPatRow]:
    """Per-team expected benefit; null when a team never tried a two-pointer."""
    teams = sorted({t for g in dataset.games.values()
                    for t in (g.home_team, g.away_team) if not g.is_postseason})
    rows = []
    for team in teams:
        rates = pat_rates(dataset, team=team)
        if rates.two_point.attempts == 0 or rates.kick.attempts == 0:
            benefit = None
        else:
            benefit = pat_expected_benefit(rates.two_point.rate, rates.kick.rate)
        rows.append(TeamPatRow(team=team, two_point=rates.two_point,
                               kick=rates.kick, expected_benefit=benefit))
    return rows


def pat_rule_change_test(dataset: SeasonDataset) -> PatRuleChangeResult:
    """Yearly rates plus final-season-vs-earlier two-proportion tests."""
    seasons = sorted({g.season for g in dataset.games.values() if not g.is_postseason})
    if len(seasons) < 2:
        raise SingleSeason("need at least 2 seasons")
    yearly = [YearlyPatRow(season=s, kick=pat_rates(dataset, season=s).kick,
                           two_point=pat_rates(dataset, season=s).two_point)
              for s in seasons]
    last = yearly[-1]
    earlier_kick = CountRate(sum(y.kick.successes for y in yearly[:-1]),
                             sum(y.kick.attempts for y in yearly[:-1]))
    earlier_2pt = CountRate(sum(y.two_point.successes for y in yearly[:-1]),
                            sum(y.two_point.attempts for y in yearly[:-1]))
    kick_test = stats_kit.two_proportion_test(
        last.kick.successes, last.kick.attempts,
        earlier_kick.successes, earlier_kick.attempts)
    two_point_test = stats_kit.two_proportion_test(
        last.two_point.successes, last.two_point.attempts,
        earlier_2pt.successes, earlier_2pt.attempts)
    return PatRuleChangeResult(yearly=yearly, kick_test=kick_test,
                               two_point_test=two_point_test)


# ---------------------------------------------------------------------------
# Fourth down

def gamma(l: float, avg_drive_length: float) -> float:
    """Expected number of fourth-down conversions needed to reach the goal
    from own-goal distance l: one per average drive length of remaining field.
    """
    if not 1 <= l <= 99:
        raise OutOfRange(f"l={l} outside [1, 99]")
    if avg_drive_length <= 0:
        raise OutOfRange("avg_drive_length must be positive")
    return (100.0 - l) / avg_drive_length


def fourth_down_curves(dataset: SeasonDataset, bin_width: int = 5) -> FourthDownCurves:
    """Empirical fourth-down, field-goal, and drive-outcome curves."""
    plays = _regular_plays(dataset)
    conv_events_fieldpos = []
    conv_events_distance = []
    fg_events = []
    for play in plays:
        if play.is_fourth_down_attempt:
            success = bool(play.attempt_success)
            conv_events_fieldpos.append((100 - play.yardline_100, success))
            conv_events_distance.append((play.yards_to_go, success))
        elif play.play_type is PlayType.FIELD_GOAL:
            fg_events.append((play.yardline_100 + FG_SNAP_OFFSET, bool(play.attempt_success)))

    spans = drive_spans(plays, dataset.games)
    if not spans:
        raise NoDrives("no drives could be derived")
    nbins = math.ceil(100 / bin_width)
    edges = np.arange(0, (nbins + 1) * bin_width, bin_width, dtype=float)
    td = np.zeros(nbins, dtype=int)
    fg = np.zeros(nbins, dtype=int)
    fail = np.zeros(nbins, dtype=int)
    lengths = []
    for drive, drive_plays in spans:
        idx = min(nbins - 1, drive.start_yards_to_goal // bin_width)
        if drive.outcome is DriveOutcome.TOUCHDOWN:
            td[idx] += 1
        elif drive.outcome is DriveOutcome.FIELD_GOAL:
            fg[idx] += 1
        else:
            fail[idx] += 1
        lengths.append(sum(p.yards_gained for p in drive_plays
                           if p.play_type not in (PlayType.PUNT, PlayType.FIELD_GOAL)))

    max_distance = max((d for d, _ in conv_events_distance), default=1)
    return FourthDownCurves(
        conv_by_fieldpos=stats_kit.binned_rate(conv_events_fieldpos, edges),
        conv_by_distance=stats_kit.binned_rate(
            conv_events_distance, np.arange(1, max_distance + 2, dtype=float)),
        fg_by_distance=stats_kit.binned_rate(
            fg_events, np.arange(15, 120 + bin_width, bin_width, dtype=float)),
        drive_outcome_by_start=DriveOutcomeCurve(
            bin_edges=edges, touchdowns=td, field_goals=fg, failures=fail),
        avg_drive_length=float(np.mean(lengths)),
    )


def _conversion_rate_at(curves: FourthDownCurves, l: float) -> float:
    bin_idx = curves.conv_by_fieldpos.bin_index(l)
    if bin_idx is not None and curves.conv_by_fieldpos.trials[bin_idx] >= SPARSE_BIN_TRIALS:
        return float(curves.conv_by_fieldpos.rate[bin_idx])
    adjusted = curves.adjusted_conversion_rate
    if adjusted is None:
        raise CurveGap(f"no conversion data near l={l} and no distance curve to adjust from")
    return adjusted


def _fg_rate_at(curves: FourthDownCurves, l: float) -> float:
    distance = (100.0 - l) + FG_SNAP_OFFSET
    top = curves.fg_by_distance.max_populated_edge
    if top is None or distance >= top:
        return 0.0
    rate = curves.fg_by_distance.rate_at_nearest(distance)
    return 0.0 if rate is None else rate


@dataclass(frozen=True)
class PointBenefit:
    e_plus: float
    e_minus: float
    e_net: float


def expected_point_benefit(l: float, curves: FourthDownCurves,
                           s_4conv_override: Optional[float] = None) -> PointBenefit:
    """Mean-field expected benefit and cost of going for it at own-goal
    distance l.

    Benefit: 6 * s^gamma(l), with s the conversion rate at l (sparse bins
    fall back to the distance-adjusted overall rate, or use the override).
    Cost: 3*s_fg(l) plus the opponent's scoring-probability lift over a
    touchback start, 3*dpi_fg + 6*dpi_td, at the takeover spot.
    """
    if not 1 <= l <= 99:
        raise OutOfRange(f"l={l} outside [1, 99]")
    s = s_4conv_override if s_4conv_override is not None else _conversion_rate_at(curves, l)
    if not 0.0 <= s <= 1.0:
        raise OutOfRange(f"conversion rate {s} outside [0, 1]")
    g = gamma(l, curves.avg_drive_length)
    e_plus = 6.0 * s ** g

    s_fg = _fg_rate_at(curves, l)
    takeover = curves.drive_outcome_by_start.probabilities_at(l)
    baseline = curves.drive_outcome_by_start.probabilities_at(TOUCHBACK_YARDS_TO_GOAL)
    if takeover is None or baseline is None:
        raise CurveGap("drive outcome curve has no populated bins")
    dpi_td = takeover[0] - baseline[0]
    dpi_fg = takeover[1] - baseline[1]
    e_minus = float(3.0 * s_fg + (3.0 * dpi_fg + 6.0 * dpi_td))
    return PointBenefit(e_plus=float(e_plus), e_minus=e_minus,
                        e_net=float(e_plus - e_minus))


def decision_chart(curves: FourthDownCurves,
                   s_4conv_override: Optional[float] = None) -> DecisionChart:
    """Expected net benefit at every yardline, with per-row recommendation.

    Reports the mean net benefit both unweighted over yardlines and weighted
    by where fourth-down attempts actually happen, plus a one-sided test of
    the net benefit being positive.
    """
    rows = []
    for l in range(1, 100):
        benefit = expected_point_benefit(l, curves, s_4conv_override)
        bin_idx = curves.conv_by_fieldpos.bin_index(l)
        trials = 0 if bin_idx is None else int(curves.conv_by_fieldpos.trials[bin_idx])
        rows.append(ChartRow(
            l=l, e_plus=benefit.e_plus, e_minus=benefit.e_minus, e_net=benefit.e_net,
            recommend=(Recommendation.GO_FOR_IT if benefit.e_net > 0
                       else Recommendation.KICK_OR_PUNT),
            conversion_trials=trials,
        ))
    nets = np.array([r.e_net for r in rows])
    weights = np.array([r.conversion_trials for r in rows], dtype=float)
    weighted = None
    if weights.sum() > 0:
        weighted = float(np.average(nets, weights=weights))
    try:
        test = stats_kit.one_sample_t(nets, 0.0, alternative="greater")
    except stats_kit.ZeroVariance:
        test = None
    return DecisionChart(rows=rows, mean_net_uniform=float(nets.mean()),
                         mean_net_weighted=weighted, positivity_test=test)


# ---------------------------------------------------------------------------
# Reverse-causality diagnostics

def _cumulative_yards_by_quarter(plays: list[PlayRecord]) -> dict[str, np.ndarray]:
    """Per team: cumulative (passing, total) yards at the end of Q1..Q4."""
    out: dict[str, np.ndarray] = {}
    for play in plays:
        if play.quarter > 4:
            continue
        if play.play_type is PlayType.PASS:
            gained, passing = play.yards_gained, play.yards_gained
        elif play.play_type in (PlayType.RUSH, PlayType.KNEEL):
            gained, passing = play.yards_gained, 0
        else:
            continue
        box = out.setdefault(play.offense, np.zeros((4, 2)))
        for q in range(play.quarter - 1, 4):
            box[q, 0] += passing
            box[q, 1] += gained
    return out


def ratio_by_quarter(dataset: SeasonDataset) -> QuarterRatioResult:
    """Cumulative passing share at the end of each quarter for winners and
    losers, with a paired test of the Q3-to-Q4 change per group."""
    plays_by_game = _group_regular_plays(dataset)
    winner_r: list[list[float]] = [[] for _ in range(4)]
    loser_r: list[list[float]] = [[] for _ in range(4)]
    winner_pairs: list[tuple[float, float]] = []
    loser_pairs: list[tuple[float, float]] = []
    n_games = 0
    for game_id, plays in plays_by_game.items():
        game = dataset.games[game_id]
        if game.winner is None:
            continue
        loser = game.away_team if game.winner == game.home_team else game.home_team
        cum = _cumulative_yards_by_quarter(plays)
        n_games += 1
        for team, bucket, pairs in ((game.winner, winner_r, winner_pairs),
                                    (loser, loser_r, loser_pairs)):
            box = cum.get(team)
            if box is None:
                continue
            rs = [box[q, 0] / box[q, 1] if box[q, 1] > 0 else None for q in range(4)]
            for q, r in enumerate(rs):
                if r is not None:
                    bucket[q].append(r)
            if rs[2] is not None and rs[3] is not None:
                pairs.append((rs[2], rs[3]))
    if n_games == 0:
        raise NoPlays("no decided games with plays")

    def mean_or_none(values):
        return float(np.mean(values)) if values else None

    def q3q4_test(pairs):
        q3 = [a for a, _ in pairs]
        q4 = [b for _, b in pairs]
        try:
            return stats_kit.paired_t_test(q4, q3)
        except (stats_kit.ZeroVariance, stats_kit.EmptySample):
            return None

    return QuarterRatioResult(
        winner_means=[mean_or_none(b) for b in winner_r],
        loser_means=[mean_or_none(b) for b in loser_r],
        winner_q3_q4_test=q3q4_test(winner_pairs),
        loser_q3_q4_test=q3q4_test(loser_pairs),
        n_games=n_games,
    )


def _group_regular_plays(dataset: SeasonDataset) -> dict[str, list[PlayRecord]]:
    plays = _regular_plays(dataset)
    grouped: dict[str, list[PlayRecord]] = {}
    for p in plays:
        grouped.setdefault(p.game_id, []).append(p)
    for ps in grouped.values():
        ps.sort(key=lambda p: p.play_index)
    return grouped


def game_minute(quarter: int, clock_remaining: int) -> int:
    """Minute of game time (0-based) for a play clock; overtime continues
    after minute 59.  The final second of a quarter stays in its quarter."""
    within = min(14, (900 - clock_remaining) // 60)
    return 15 * (quarter - 1) + within


def turnover_histogram(dataset: SeasonDataset, bin_minutes: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """(bin_edges, counts) of turnovers per game minute, overtime included."""
    plays = _regular_plays(dataset)
    minutes = [game_minute(p.quarter, p.clock_remaining)
               for p in plays if p.turnover is not Turnover.NONE]
    edges = np.arange(0, 75 + bin_minutes, bin_minutes)
    counts, _ = np.histogram(minutes, bins=edges)
    return edges, counts


def turnover_timing(dataset: SeasonDataset, bin_minutes: int = 1) -> TurnoverTiming:
    """Turnover-time histogram plus a paired test of winner-minus-loser
    turnovers committed through the third quarter.

    Raises ZeroVariance when every game has the same through-Q3 turnover
    differential (in particular, when there are no turnovers at all).
    """
    edges, counts = turnover_histogram(dataset, bin_minutes)
    plays_by_game = _group_regular_plays(dataset)
    winner_counts, loser_counts = [], []
    for game_id, plays in plays_by_game.items():
        game = dataset.games[game_id]
        if game.winner is None:
            continue
        loser = game.away_team if game.winner == game.home_team else game.home_team
        through_q3 = {game.winner: 0, loser: 0}
        for p in plays:
            if p.quarter <= 3 and p.turnover is not Turnover.NONE:
                through_q3[p.offense] += 1
        winner_counts.append(through_q3[game.winner])
        loser_counts.append(through_q3[loser])
    if not winner_counts:
        raise NoPlays("no decided games with plays")
    try:
        test = stats_kit.paired_t_test(winner_counts, loser_counts)
    except stats_kit.ZeroVariance as exc:
        raise ZeroVariance(str(exc)) from exc
    return TurnoverTiming(bin_minutes=bin_minutes, minute_edges=edges,
                          counts=counts, q1_q3_test=test)

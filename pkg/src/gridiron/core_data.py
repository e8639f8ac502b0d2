"""Canonical season data model: games, plays, team stats, derived drives.

Three CSV files form the interchange surface (exact headers below): games.csv
is always required, plays.csv and stats.csv are optional.  When plays are
available, per-team game stats and drives can be derived from them; stats.csv
may also be supplied directly for pipelines that never touch play-by-play.

Possession time is accumulated from play-clock deltas.  Elapsed time on
kickoffs and punts is attributed to the kicking team (the play's offense);
the source data never states an attribution rule, so this choice is
documented here and kept consistent everywhere.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

logger = logging.getLogger(__name__)

GAMES_HEADER = [
    "game_id", "season", "week", "home_team", "away_team",
    "home_score", "away_score", "is_postseason",
]
PLAYS_HEADER = [
    "game_id", "play_index", "quarter", "clock_remaining", "offense",
    "play_type", "yardline_100", "down", "yards_to_go", "yards_gained",
    "points_scored", "attempt_success", "turnover",
]
STATS_HEADER = [
    "game_id", "team", "total_yards", "passing_yards", "rushing_yards",
    "penalty_yards", "turnovers", "possession_seconds",
]

REGULAR_SEASON_WEEKS = 17
QUARTER_SECONDS = 900


class DataError(Exception):
    """Base class for dataset parsing and integrity errors."""


class MalformedRow(DataError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownEnumValue(MalformedRow):
    pass


class DuplicateGameId(DataError):
    pass


class MissingColumn(DataError):
    pass


class NonMonotonePlayIndex(DataError):
    pass


class OrphanPlay(DataError):
    pass


class MissingPlays(DataError):
    pass


class PlayType(Enum):
    RUSH = "rush"
    PASS = "pass"
    PUNT = "punt"
    FIELD_GOAL = "field_goal"
    EXTRA_POINT = "extra_point"
    TWO_POINT_ATTEMPT = "two_point_attempt"
    KICKOFF = "kickoff"
    KNEEL = "kneel"
    PENALTY = "penalty"
    OTHER = "other"


class Turnover(Enum):
    NONE = "none"
    INTERCEPTION = "interception"
    FUMBLE_LOST = "fumble_lost"
    DOWNS = "downs"


class DriveOutcome(Enum):
    TOUCHDOWN = "touchdown"
    FIELD_GOAL = "field_goal"
    MISSED_FG = "missed_fg"
    PUNT = "punt"
    DOWNS = "downs"
    INTERCEPTION = "interception"
    FUMBLE = "fumble"
    SAFETY = "safety"
    END_HALF = "end_half"
    END_GAME = "end_game"


# Plays that belong to a drive.  Kickoffs and point-after plays sit between
# drives and are never counted as drive plays.
DRIVE_PLAY_TYPES = frozenset({
    PlayType.RUSH, PlayType.PASS, PlayType.PUNT, PlayType.FIELD_GOAL,
    PlayType.KNEEL, PlayType.PENALTY, PlayType.OTHER,
})
# Plays for which a field position is mandatory.
YARDLINE_REQUIRED = frozenset({
    PlayType.RUSH, PlayType.PASS, PlayType.PUNT, PlayType.FIELD_GOAL,
    PlayType.KNEEL,
})
# Plays for which attempt_success must be stated.
SUCCESS_REQUIRED = frozenset({
    PlayType.FIELD_GOAL, PlayType.EXTRA_POINT, PlayType.TWO_POINT_ATTEMPT,
})


@dataclass(frozen=True)
class GameRecord:
    game_id: str
    season: int
    week: int
    home_team: str
    away_team: str
    home_score: int
    away_score: int
    is_postseason: bool = False

    @property
    def winner(self) -> Optional[str]:
        if self.home_score > self.away_score:
            return self.home_team
        if self.away_score > self.home_score:
            return self.away_team
        return None

    @property
    def is_tie(self) -> bool:
        return self.home_score == self.away_score


@dataclass(frozen=True)
class PlayRecord:
    game_id: str
    play_index: int
    quarter: int
    clock_remaining: int
    offense: str
    play_type: PlayType
    yardline_100: Optional[int]
    down: int
    yards_to_go: int
    yards_gained: int
    points_scored: int
    attempt_success: Optional[bool]
    turnover: Turnover

    @property
    def is_fourth_down_attempt(self) -> bool:
        return self.down == 4 and self.play_type in (PlayType.RUSH, PlayType.PASS)


@dataclass(frozen=True)
class DriveRecord:
    game_id: str
    offense: str
    start_yards_to_goal: int
    num_plays: int
    outcome: DriveOutcome


@dataclass(frozen=True)
class TeamGameStat:
    game_id: str
    team: str
    total_yards: int
    passing_yards: int
    rushing_yards: int
    penalty_yards: int
    turnovers: int
    possession_seconds: int

    @property
    def ratio(self) -> float:
        """Fraction of offensive yards gained by passing."""
        return self.passing_yards / self.total_yards


@dataclass
class SeasonDataset:
    """Everything known about a set of seasons, keyed for fast lookup."""

    games: dict[str, GameRecord]
    plays: Optional[list[PlayRecord]] = None
    stats: Optional[dict[tuple[str, str], TeamGameStat]] = None
    drives: Optional[list[DriveRecord]] = None

    def seasons(self) -> list[int]:
        return sorted({g.season for g in self.games.values()})

    def regular_games(self, season: Optional[int] = None) -> list[GameRecord]:
        out = [g for g in self.games.values()
               if not g.is_postseason and (season is None or g.season == season)]
        return sorted(out, key=lambda g: (g.season, g.week, g.game_id))

    def plays_by_game(self) -> dict[str, list[PlayRecord]]:
        grouped: dict[str, list[PlayRecord]] = {}
        for p in self.plays or []:
            grouped.setdefault(p.game_id, []).append(p)
        for ps in grouped.values():
            ps.sort(key=lambda p: p.play_index)
        return grouped

    def stats_pair(self, game_id: str) -> tuple[TeamGameStat, TeamGameStat]:
        """(home, away) stat rows for a game."""
        game = self.games[game_id]
        assert self.stats is not None
        return self.stats[(game_id, game.home_team)], self.stats[(game_id, game.away_team)]


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


# ---------------------------------------------------------------------------
# CSV parsing / writing

def _open_reader(path: Path, expected_header: list[str]):
    fh = open(path, "r", encoding="utf-8", newline="")
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        fh.close()
        raise MissingColumn(f"{path}: empty file, expected header {expected_header}")
    if header != expected_header:
        missing = [c for c in expected_header if c not in header]
        fh.close()
        if missing:
            raise MissingColumn(f"{path}: missing columns {missing}")
        raise MalformedRow(1, f"{path}: header {header} does not match canonical order {expected_header}")
    return fh, reader


def _parse_int(value: str, column: str, line_no: int, lo: Optional[int] = None,
               hi: Optional[int] = None) -> int:
    try:
        out = int(value)
    except ValueError:
        raise MalformedRow(line_no, f"{column}={value!r} is not an integer")
    if lo is not None and out < lo:
        raise MalformedRow(line_no, f"{column}={out} below minimum {lo}")
    if hi is not None and out > hi:
        raise MalformedRow(line_no, f"{column}={out} above maximum {hi}")
    return out


def _parse_bool(value: str, column: str, line_no: int) -> bool:
    if value == "true":
        return True
    if value == "false":
        return False
    raise MalformedRow(line_no, f"{column}={value!r} must be 'true' or 'false'")


def _parse_enum(enum_cls, value: str, column: str, line_no: int):
    try:
        return enum_cls(value)
    except ValueError:
        raise UnknownEnumValue(line_no, f"{column}={value!r} is not one of "
                               f"{[e.value for e in enum_cls]}")


def parse_games(path: str | Path) -> list[GameRecord]:
    """Parse games.csv; duplicate game_id is an error."""
    path = Path(path)
    fh, reader = _open_reader(path, GAMES_HEADER)
    games: list[GameRecord] = []
    seen: set[str] = set()
    with fh:
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(GAMES_HEADER):
                raise MalformedRow(line_no, f"expected {len(GAMES_HEADER)} fields, got {len(row)}")
            game_id = row[0]
            if not game_id:
                raise MalformedRow(line_no, "empty game_id")
            if game_id in seen:
                raise DuplicateGameId(f"line {line_no}: duplicate game_id {game_id!r}")
            seen.add(game_id)
            is_post = _parse_bool(row[7], "is_postseason", line_no)
            week_hi = 25 if is_post else REGULAR_SEASON_WEEKS
            game = GameRecord(
                game_id=game_id,
                season=_parse_int(row[1], "season", line_no, lo=1900, hi=2200),
                week=_parse_int(row[2], "week", line_no, lo=1, hi=week_hi),
                home_team=row[3],
                away_team=row[4],
                home_score=_parse_int(row[5], "home_score", line_no, lo=0),
                away_score=_parse_int(row[6], "away_score", line_no, lo=0),
                is_postseason=is_post,
            )
            if not game.home_team or not game.away_team:
                raise MalformedRow(line_no, "empty team code")
            if game.home_team == game.away_team:
                raise MalformedRow(line_no, f"home_team equals away_team ({game.home_team})")
            games.append(game)
    return games


def parse_plays(path: str | Path) -> list[PlayRecord]:
    """Parse plays.csv; play_index must be strictly increasing per game."""
    path = Path(path)
    fh, reader = _open_reader(path, PLAYS_HEADER)
    plays: list[PlayRecord] = []
    last_index: dict[str, int] = {}
    with fh:
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(PLAYS_HEADER):
                raise MalformedRow(line_no, f"expected {len(PLAYS_HEADER)} fields, got {len(row)}")
            game_id = row[0]
            play_index = _parse_int(row[1], "play_index", line_no)
            prev = last_index.get(game_id)
            if prev is not None and play_index <= prev:
                raise NonMonotonePlayIndex(
                    f"line {line_no}: play_index {play_index} after {prev} in game {game_id}")
            last_index[game_id] = play_index
            play_type = _parse_enum(PlayType, row[5], "play_type", line_no)
            yardline = None if row[6] == "" else _parse_int(row[6], "yardline_100", line_no, 1, 99)
            success = None if row[11] == "" else _parse_bool(row[11], "attempt_success", line_no)
            play = PlayRecord(
                game_id=game_id,
                play_index=play_index,
                quarter=_parse_int(row[2], "quarter", line_no, 1, 5),
                clock_remaining=_parse_int(row[3], "clock_remaining", line_no, 0, QUARTER_SECONDS),
                offense=row[4],
                play_type=play_type,
                yardline_100=yardline,
                down=_parse_int(row[7], "down", line_no, 0, 4),
                yards_to_go=_parse_int(row[8], "yards_to_go", line_no, 0),
                yards_gained=_parse_int(row[9], "yards_gained", line_no),
                points_scored=_parse_int(row[10], "points_scored", line_no),
                attempt_success=success,
                turnover=_parse_enum(Turnover, row[12], "turnover", line_no),
            )
            _check_play_row(play, line_no)
            plays.append(play)
    return plays


def _check_play_row(play: PlayRecord, line_no: int) -> None:
    if not play.offense:
        raise MalformedRow(line_no, "empty offense")
    if play.points_scored not in (0, 1, 2, 3, 6):
        raise MalformedRow(line_no, f"points_scored={play.points_scored} not in {{0,1,2,3,6}}")
    if play.yardline_100 is None and play.play_type in YARDLINE_REQUIRED:
        raise MalformedRow(line_no, f"yardline_100 required for {play.play_type.value}")
    needs_success = play.play_type in SUCCESS_REQUIRED or play.is_fourth_down_attempt
    if needs_success and play.attempt_success is None:
        raise MalformedRow(line_no, f"attempt_success required for {play.play_type.value}"
                           f"{' on fourth down' if play.is_fourth_down_attempt else ''}")
    if play.points_scored == 1 and play.play_type is not PlayType.EXTRA_POINT:
        raise MalformedRow(line_no, "points_scored=1 only valid for extra_point")
    if play.points_scored == 3 and play.play_type is not PlayType.FIELD_GOAL:
        raise MalformedRow(line_no, "points_scored=3 only valid for field_goal")
    if play.points_scored == 2 and play.play_type in (
            PlayType.EXTRA_POINT, PlayType.FIELD_GOAL, PlayType.KICKOFF, PlayType.KNEEL):
        raise MalformedRow(line_no, f"points_scored=2 not valid for {play.play_type.value}")
    if play.points_scored == 6 and play.play_type in (
            PlayType.EXTRA_POINT, PlayType.FIELD_GOAL, PlayType.TWO_POINT_ATTEMPT, PlayType.KNEEL):
        raise MalformedRow(line_no, f"points_scored=6 not valid for {play.play_type.value}")


def parse_stats(path: str | Path) -> list[TeamGameStat]:
    """Parse stats.csv; passing + rushing must equal total per row."""
    path = Path(path)
    fh, reader = _open_reader(path, STATS_HEADER)
    rows: list[TeamGameStat] = []
    seen: set[tuple[str, str]] = set()
    with fh:
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(STATS_HEADER):
                raise MalformedRow(line_no, f"expected {len(STATS_HEADER)} fields, got {len(row)}")
            key = (row[0], row[1])
            if key in seen:
                raise MalformedRow(line_no, f"duplicate stat row for {key}")
            seen.add(key)
            stat = TeamGameStat(
                game_id=row[0],
                team=row[1],
                total_yards=_parse_int(row[2], "total_yards", line_no),
                passing_yards=_parse_int(row[3], "passing_yards", line_no),
                rushing_yards=_parse_int(row[4], "rushing_yards", line_no),
                penalty_yards=_parse_int(row[5], "penalty_yards", line_no, lo=0),
                turnovers=_parse_int(row[6], "turnovers", line_no, lo=0),
                possession_seconds=_parse_int(row[7], "possession_seconds", line_no, 0, 4500),
            )
            if stat.passing_yards + stat.rushing_yards != stat.total_yards:
                raise MalformedRow(line_no, "passing_yards + rushing_yards != total_yards")
            rows.append(stat)
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return value.value
    return str(value)


def _write_csv(path: str | Path, header: list[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_games(games: Iterable[GameRecord], path: str | Path) -> None:
    _write_csv(path, GAMES_HEADER, (
        (g.game_id, g.season, g.week, g.home_team, g.away_team,
         g.home_score, g.away_score, g.is_postseason) for g in games))


def write_plays(plays: Iterable[PlayRecord], path: str | Path) -> None:
    _write_csv(path, PLAYS_HEADER, (
        (p.game_id, p.play_index, p.quarter, p.clock_remaining, p.offense,
         p.play_type, p.yardline_100, p.down, p.yards_to_go, p.yards_gained,
         p.points_scored, p.attempt_success, p.turnover) for p in plays))


def write_stats(stats: Iterable[TeamGameStat], path: str | Path) -> None:
    _write_csv(path, STATS_HEADER, (
        (s.game_id, s.team, s.total_yards, s.passing_yards, s.rushing_yards,
         s.penalty_yards, s.turnovers, s.possession_seconds) for s in stats))


# ---------------------------------------------------------------------------
# Derivations

def _elapsed_per_play(plays: list[PlayRecord]) -> list[int]:
    """Game-clock seconds consumed by each play, from clock deltas.

    The last play of each quarter runs the quarter's clock to zero.  A clock
    that moves backwards within a quarter contributes zero (bad data, not
    negative possession).
    """
    out = []
    for i, play in enumerate(plays):
        nxt = plays[i + 1] if i + 1 < len(plays) else None
        if nxt is not None and nxt.quarter == play.quarter:
            out.append(max(0, play.clock_remaining - nxt.clock_remaining))
        else:
            out.append(play.clock_remaining)
    return out


def derive_drives(plays: list[PlayRecord], games: dict[str, GameRecord]) -> list[DriveRecord]:
    """Group consecutive same-offense scrimmage plays into drives.

    A drive ends on a terminal play (score, punt, turnover, safety) or at a
    period boundary (end of half / end of game).  Kickoffs and point-after
    plays are not drive plays.
    """
    return [drive for drive, _ in drive_spans(plays, games)]


def drive_spans(plays: list[PlayRecord],
                games: dict[str, GameRecord]) -> list[tuple[DriveRecord, list[PlayRecord]]]:
    """derive_drives plus the plays belonging to each drive."""
    spans: list[tuple[DriveRecord, list[PlayRecord]]] = []
    by_game: dict[str, list[PlayRecord]] = {}
    for p in plays:
        by_game.setdefault(p.game_id, []).append(p)
    for game_id in by_game:
        if game_id not in games:
            raise OrphanPlay(f"plays reference unknown game {game_id}")
        game_plays = sorted(by_game[game_id], key=lambda p: p.play_index)
        spans.extend(_drives_for_game(game_id, game_plays))
    return spans


def _terminal_outcome(play: PlayRecord) -> Optional[DriveOutcome]:
    if play.points_scored == 6:
        return DriveOutcome.TOUCHDOWN
    if play.play_type is PlayType.FIELD_GOAL:
        return DriveOutcome.FIELD_GOAL if play.attempt_success else DriveOutcome.MISSED_FG
    if play.play_type is PlayType.PUNT:
        return DriveOutcome.PUNT
    if play.turnover is Turnover.INTERCEPTION:
        return DriveOutcome.INTERCEPTION
    if play.turnover is Turnover.FUMBLE_LOST:
        return DriveOutcome.FUMBLE
    if play.turnover is Turnover.DOWNS:
        return DriveOutcome.DOWNS
    if play.points_scored == 2 and play.play_type is not PlayType.TWO_POINT_ATTEMPT:
        return DriveOutcome.SAFETY
    return None


def _drives_for_game(game_id: str,
                     game_plays: list[PlayRecord]) -> list[tuple[DriveRecord, list[PlayRecord]]]:
    drives: list[tuple[DriveRecord, list[PlayRecord]]] = []
    current: list[PlayRecord] = []

    def flush(outcome: DriveOutcome) -> None:
        nonlocal current
        if not current:
            return
        start = next((p.yardline_100 for p in current if p.yardline_100 is not None), None)
        if start is None:
            raise OrphanPlay(f"game {game_id}: drive starting at play "
                             f"{current[0].play_index} has no field position")
        drives.append((DriveRecord(
            game_id=game_id,
            offense=current[0].offense,
            start_yards_to_goal=start,
            num_plays=len(current),
            outcome=outcome,
        ), current))
        current = []

    for play in game_plays:
        if current and play.quarter >= 3 and current[-1].quarter <= 2:
            flush(DriveOutcome.END_HALF)
        if play.play_type not in DRIVE_PLAY_TYPES:
            continue
        if current and play.offense != current[0].offense:
            # Possession changed without a terminal marker: bad data, close
            # the drive as surrendered.
            logger.warning("game %s: offense changed at play %d without a terminal play",
                           game_id, play.play_index)
            flush(DriveOutcome.DOWNS)
        current.append(play)
        outcome = _terminal_outcome(play)
        if outcome is not None:
            flush(outcome)
    flush(DriveOutcome.END_GAME)
    return drives


def aggregate_team_stats(plays: list[PlayRecord], games: dict[str, GameRecord],
                         strict: bool = False) -> list[TeamGameStat]:
    """Per-team per-game stat rows from play-by-play.

    Turnovers count interceptions, lost fumbles, and turns on downs.  Penalty
    plays are attributed by the sign of yards_gained: negative penalizes the
    offense, positive penalizes the defense.  With strict=True a game that
    has no plays raises MissingPlays.
    """
    by_game: dict[str, list[PlayRecord]] = {}
    for p in plays:
        by_game.setdefault(p.game_id, []).append(p)
    if strict:
        for game_id in games:
            if game_id not in by_game:
                raise MissingPlays(game_id)
    out: list[TeamGameStat] = []
    for game_id, game_plays in by_game.items():
        if game_id not in games:
            raise OrphanPlay(f"plays reference unknown game {game_id}")
        game = games[game_id]
        game_plays = sorted(game_plays, key=lambda p: p.play_index)
        elapsed = _elapsed_per_play(game_plays)
        acc = {team: {"pass": 0, "rush": 0, "pen": 0, "to": 0, "poss": 0}
               for team in (game.home_team, game.away_team)}
        other = {game.home_team: game.away_team, game.away_team: game.home_team}
        for play, secs in zip(game_plays, elapsed):
            if play.offense not in acc:
                raise OrphanPlay(f"game {game_id}: play {play.play_index} offense "
                                 f"{play.offense!r} is not a participant")
            box = acc[play.offense]
            box["poss"] += secs
            if play.play_type is PlayType.PASS:
                box["pass"] += play.yards_gained
            elif play.play_type in (PlayType.RUSH, PlayType.KNEEL):
                box["rush"] += play.yards_gained
            elif play.play_type is PlayType.PENALTY:
                if play.yards_gained < 0:
                    box["pen"] += -play.yards_gained
                elif play.yards_gained > 0:
                    acc[other[play.offense]]["pen"] += play.yards_gained
            if play.turnover is not Turnover.NONE:
                box["to"] += 1
        for team in (game.home_team, game.away_team):
            box = acc[team]
            out.append(TeamGameStat(
                game_id=game_id,
                team=team,
                total_yards=box["pass"] + box["rush"],
                passing_yards=box["pass"],
                rushing_yards=box["rush"],
                penalty_yards=box["pen"],
                turnovers=box["to"],
                possession_seconds=box["poss"],
            ))
    return out


# ---------------------------------------------------------------------------
# Validation and loading

POSSESSION_SUM_WINDOW = (2700, 4500)  # 3600 +/- 900, upper bound covers overtime


def validate_dataset(dataset: SeasonDataset) -> ValidationReport:
    """Referential and invariant checks; errors mean downstream must refuse."""
    report = ValidationReport()
    err, warn = report.errors.append, report.warnings.append

    for game in dataset.games.values():
        if game.home_team == game.away_team:
            err(f"game {game.game_id}: home_team equals away_team")
        if not game.is_postseason and not 1 <= game.week <= REGULAR_SEASON_WEEKS:
            err(f"game {game.game_id}: week {game.week} outside regular season range")
        if game.is_tie:
            warn(f"game {game.game_id}: tie game ({game.home_score}-{game.away_score})")

    games_with_plays: set[str] = set()
    for play in dataset.plays or []:
        games_with_plays.add(play.game_id)
        if play.game_id not in dataset.games:
            err(f"play {play.game_id}#{play.play_index}: unknown game_id")

    if dataset.stats is not None:
        per_game: dict[str, list[TeamGameStat]] = {}
        for stat in dataset.stats.values():
            per_game.setdefault(stat.game_id, []).append(stat)
            game = dataset.games.get(stat.game_id)
            if game is None:
                err(f"stat row {stat.game_id}/{stat.team}: unknown game_id")
                continue
            if stat.team not in (game.home_team, game.away_team):
                err(f"stat row {stat.game_id}/{stat.team}: team did not play this game")
            if stat.passing_yards + stat.rushing_yards != stat.total_yards:
                err(f"stat row {stat.game_id}/{stat.team}: passing+rushing != total")
            if stat.total_yards <= 0:
                err(f"stat row {stat.game_id}/{stat.team}: total_yards must be positive")
            if stat.turnovers < 0 or stat.penalty_yards < 0:
                err(f"stat row {stat.game_id}/{stat.team}: negative counts")
            if not 0 <= stat.possession_seconds <= POSSESSION_SUM_WINDOW[1]:
                err(f"stat row {stat.game_id}/{stat.team}: possession_seconds out of range")
        for game_id, rows in per_game.items():
            if game_id not in dataset.games:
                continue
            if len(rows) != 2:
                err(f"game {game_id}: expected 2 stat rows, found {len(rows)}")
                continue
            total = sum(r.possession_seconds for r in rows)
            lo, hi = POSSESSION_SUM_WINDOW
            if not lo <= total <= hi:
                warn(f"game {game_id}: possession sum {total}s outside [{lo}, {hi}]")
        for game_id in dataset.games:
            if game_id not in per_game:
                warn(f"game {game_id}: no stat rows")

    if dataset.plays is not None:
        for game_id in dataset.games:
            if game_id not in games_with_plays:
                warn(f"game {game_id}: no plays")

    if dataset.drives is not None:
        by_game: dict[str, list[DriveRecord]] = {}
        for d in dataset.drives:
            by_game.setdefault(d.game_id, []).append(d)
        for game_id, ds in by_game.items():
            for a, b in zip(ds, ds[1:]):
                if a.offense == b.offense and a.outcome not in (
                        DriveOutcome.END_HALF, DriveOutcome.SAFETY):
                    warn(f"game {game_id}: consecutive drives by {a.offense} "
                         f"after {a.outcome.value}")
    return report


def load_dataset(data_dir: str | Path, derive: bool = True) -> SeasonDataset:
    """Load games.csv (required) plus optional plays.csv / stats.csv.

    With derive=True, stats and drives are computed from plays when the
    corresponding inputs are absent.
    """
    data_dir = Path(data_dir)
    games = {g.game_id: g for g in parse_games(data_dir / "games.csv")}
    plays_path = data_dir / "plays.csv"
    stats_path = data_dir / "stats.csv"
    plays = parse_plays(plays_path) if plays_path.exists() else None
    if stats_path.exists():
        stats_rows = parse_stats(stats_path)
    elif plays is not None and derive:
        stats_rows = aggregate_team_stats(plays, games)
    else:
        stats_rows = None
    stats = None if stats_rows is None else {(s.game_id, s.team): s for s in stats_rows}
    drives = derive_drives(plays, games) if (plays is not None and derive) else None
    return SeasonDataset(games=games, plays=plays, stats=stats, drives=drives)

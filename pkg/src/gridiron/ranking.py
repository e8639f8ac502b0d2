"""Team strength ranking from the directed loser-to-winner results graph.

A weighted PageRank fixed point over the win-lose graph yields a score per
team; ordinal ranks (1 = strongest) come from descending scores with team
code as the tie-break.  Graphs are season-scoped and snapshotted before each
week so that downstream consumers never see results from the week being
predicted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core_data import GameRecord


class RankingError(Exception):
    pass


class NoGames(RankingError):
    pass


class NonConvergence(RankingError):
    pass


class UnknownTeam(RankingError):
    pass


@dataclass
class WinGraph:
    season: int
    week: int  # snapshot cutoff: built from weeks strictly before this one
    teams: list[str]
    edges: dict[tuple[str, str], int]  # (loser, winner) -> result count
    source_game_ids: list[str] = field(default_factory=list)


@dataclass
class RankTable:
    season: int
    week: int
    score: dict[str, float]
    rank: dict[str, int]
    source_game_ids: list[str] = field(default_factory=list)


def build_win_graph(games: Iterable[GameRecord], through: tuple[int, int],
                    margin_weights: bool = False) -> WinGraph:
    """Loser-to-winner graph from decided games of `through[0]` played in
    weeks strictly before `through[1]`.  Ties add nodes but no edge.
    """
    if margin_weights:
        raise NotImplementedError("margin-of-victory edge weights are reserved")
    season, week = through
    teams: set[str] = set()
    edges: dict[tuple[str, str], int] = {}
    source: list[str] = []
    for game in games:
        if game.season != season or game.week >= week or game.is_postseason:
            continue
        teams.add(game.home_team)
        teams.add(game.away_team)
        source.append(game.game_id)
        winner = game.winner
        if winner is None:
            continue
        loser = game.away_team if winner == game.home_team else game.home_team
        key = (loser, winner)
        edges[key] = edges.get(key, 0) + 1
    if not source:
        raise NoGames(f"no games before week {week} of season {season}")
    return WinGraph(season=season, week=week, teams=sorted(teams), edges=edges,
                    source_game_ids=sorted(source))


def sportsnetrank(graph: WinGraph, damping: float = 0.85, tol: float = 1e-10,
                  max_iter: int = 1000) -> RankTable:
    """PageRank fixed point on the win graph.

    score = (1-d)/n + d * (weight-normalized in-flow + dangling mass / n);
    dangling nodes (teams that never lost) spread their mass uniformly.
    """
    if not graph.teams:
        raise NoGames("empty graph")
    teams = graph.teams
    n = len(teams)
    index = {t: i for i, t in enumerate(teams)}
    out_weight = np.zeros(n)
    for (loser, winner), w in graph.edges.items():
        out_weight[index[loser]] += w
    in_edges = [(index[loser], index[winner], w) for (loser, winner), w in graph.edges.items()]

    score = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        inflow = np.zeros(n)
        for li, wi, w in in_edges:
            inflow[wi] += score[li] * (w / out_weight[li])
        dangling = score[out_weight == 0].sum()
        new = (1.0 - damping) / n + damping * (inflow + dangling / n)
        if np.abs(new - score).sum() < tol:
            score = new
            break
        score = new
    else:
        raise NonConvergence(f"no fixed point after {max_iter} iterations")

    order = sorted(range(n), key=lambda i: (-score[i], teams[i]))
    rank = {teams[i]: pos + 1 for pos, i in enumerate(order)}
    return RankTable(season=graph.season, week=graph.week,
                     score={t: float(score[index[t]]) for t in teams},
                     rank=rank, source_game_ids=list(graph.source_game_ids))


def rank_diff(table: RankTable, home: str, away: str) -> int:
    """rank(away) - rank(home): positive when the home team is stronger."""
    try:
        return table.rank[away] - table.rank[home]
    except KeyError as exc:
        raise UnknownTeam(str(exc)) from exc


def season_rank_tables(games: Iterable[GameRecord],
                       damping: float = 0.85) -> dict[tuple[int, int], RankTable]:
    """Before-week rank snapshots for every (season, week) that has history.

    Week w's table uses results from weeks 1..w-1 of the same season; weeks
    with no prior decided games (week 1) get no table.
    """
    games = list(games)
    tables: dict[tuple[int, int], RankTable] = {}
    by_season: dict[int, list[GameRecord]] = {}
    for g in games:
        if not g.is_postseason:
            by_season.setdefault(g.season, []).append(g)
    for season, season_games in by_season.items():
        weeks = sorted({g.week for g in season_games})
        max_week = max(weeks)
        for week in range(2, max_week + 2):
            try:
                graph = build_win_graph(season_games, through=(season, week))
            except NoGames:
                continue
            tables[(season, week)] = sportsnetrank(graph, damping=damping)
    return tables

// Canonical interchange schema (must match the analytics package exactly).

export const GAMES_HEADER = [
  "game_id", "season", "week", "home_team", "away_team",
  "home_score", "away_score", "is_postseason",
] as const;

export const PLAYS_HEADER = [
  "game_id", "play_index", "quarter", "clock_remaining", "offense",
  "play_type", "yardline_100", "down", "yards_to_go", "yards_gained",
  "points_scored", "attempt_success", "turnover",
] as const;

export const STATS_HEADER = [
  "game_id", "team", "total_yards", "passing_yards", "rushing_yards",
  "penalty_yards", "turnovers", "possession_seconds",
] as const;

export const CANONICAL_PLAY_TYPES = new Set([
  "rush", "pass", "punt", "field_goal", "extra_point", "two_point_attempt",
  "kickoff", "kneel", "penalty", "other",
]);

export const CANONICAL_TURNOVERS = new Set([
  "none", "interception", "fumble_lost", "downs",
]);

export interface CanonicalGame {
  game_id: string;
  season: number;
  week: number;
  home_team: string;
  away_team: string;
  home_score: number;
  away_score: number;
  is_postseason: boolean;
}

export interface CanonicalPlay {
  game_id: string;
  play_index: number;
  quarter: number;
  clock_remaining: number;
  offense: string;
  play_type: string;
  yardline_100: number | null;
  down: number;
  yards_to_go: number;
  yards_gained: number;
  points_scored: number;
  attempt_success: boolean | null;
  turnover: string;
}

export interface CanonicalStat {
  game_id: string;
  team: string;
  total_yards: number;
  passing_yards: number;
  rushing_yards: number;
  penalty_yards: number;
  turnovers: number;
  possession_seconds: number;
}

export class UnmappedColumn extends Error {}
export class SourceUnavailable extends Error {}
export class ValidationFailed extends Error {}
export class MalformedSource extends Error {}

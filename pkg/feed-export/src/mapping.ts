// Source-to-canonical mapping for the bundled "game center" dump layout:
// one flat CSV, one row per play, game-level fields repeated on every row.
//
// Sack/scramble classification is source-dependent and this table makes the
// choice explicit: SACK is a pass-type play (negative yardage counts against
// passing), SCRAMBLE is a rush-type play.

import { MalformedSource, UnmappedColumn } from "./types";

// source column -> canonical meaning
export const COLUMN_MAP: Record<string, string> = {
  gsis_id: "game_id",
  season: "season",
  season_type: "season_type",
  week: "week",
  home: "home_team",
  away: "away_team",
  home_points: "home_score",
  away_points: "away_score",
  posteam: "offense",
  play_id: "play_index",
  qtr: "quarter",
  secs_left_in_qtr: "clock_remaining",
  type: "play_type",
  yards_to_goal: "yardline_100",
  dwn: "down",
  to_go: "yards_to_go",
  gained: "yards_gained",
  points: "points_scored",
  good: "attempt_success",
  turnover_type: "turnover",
};

export const PLAY_TYPE_MAP: Record<string, string> = {
  RUSH: "rush",
  PASS: "pass",
  SACK: "pass",       // sack yardage counts against passing
  SCRAMBLE: "rush",   // scrambles count as rushes
  PUNT: "punt",
  FG: "field_goal",
  XP: "extra_point",
  "2PT": "two_point_attempt",
  KO: "kickoff",
  KNEEL: "kneel",
  PEN: "penalty",
  OTHER: "other",
};

export const TURNOVER_MAP: Record<string, string> = {
  "": "none",
  INT: "interception",
  FUM: "fumble_lost",
  DOWNS: "downs",
};

export function checkSourceHeader(header: string[]): void {
  const missing = Object.keys(COLUMN_MAP).filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new UnmappedColumn(`source is missing required columns: ${missing.join(", ")}`);
  }
}

export function translatePlayType(value: string, line: number): string {
  const mapped = PLAY_TYPE_MAP[value];
  if (mapped === undefined) {
    throw new MalformedSource(`line ${line}: unknown play type ${JSON.stringify(value)}`);
  }
  return mapped;
}

export function translateTurnover(value: string, line: number): string {
  const mapped = TURNOVER_MAP[value];
  if (mapped === undefined) {
    throw new MalformedSource(`line ${line}: unknown turnover type ${JSON.stringify(value)}`);
  }
  return mapped;
}

export function translateSuccess(value: string, line: number): boolean | null {
  if (value === "") return null;
  if (value === "1") return true;
  if (value === "0") return false;
  throw new MalformedSource(`line ${line}: attempt flag must be 1, 0 or empty, got ${JSON.stringify(value)}`);
}

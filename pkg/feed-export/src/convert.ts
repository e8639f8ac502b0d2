// Parse a source dump, filter it, and build the three canonical tables.
//
// Stat derivation mirrors the analytics package's aggregation rules exactly:
// passing = pass-type yardage (sacks included), rushing = rush + kneel,
// penalties attributed by the sign of the yardage, turnovers count
// interceptions / lost fumbles / turns on downs, possession time accumulates
// from play-clock deltas with the last play of each quarter running to zero.

import * as fs from "fs";

import {
  checkSourceHeader, COLUMN_MAP, translatePlayType, translateSuccess,
  translateTurnover,
} from "./mapping";
import {
  CanonicalGame, CanonicalPlay, CanonicalStat, GAMES_HEADER,
  MalformedSource, PLAYS_HEADER, SourceUnavailable, STATS_HEADER,
} from "./types";

export interface SeasonRange {
  first: number;
  last: number;
}

export function parseSeasonRange(spec: string): SeasonRange {
  const match = /^(\d{4})(?:-(\d{4}))?$/.exec(spec);
  if (!match) {
    throw new Error(`--seasons must look like 2009 or 2009-2015, got ${JSON.stringify(spec)}`);
  }
  const first = Number(match[1]);
  const last = match[2] ? Number(match[2]) : first;
  if (last < first) {
    throw new Error(`--seasons range is reversed: ${spec}`);
  }
  return { first, last };
}

// The source layout never quotes fields, so a strict split is enough; any
// quote character means the file is not in the supported layout.
function splitCsvLine(line: string, lineNo: number): string[] {
  if (line.includes('"')) {
    throw new MalformedSource(`line ${lineNo}: quoted fields are not part of this layout`);
  }
  return line.split(",");
}

export interface SourceRow {
  line: number;
  values: Record<string, string>;
}

export function readSource(path: string): SourceRow[] {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf8");
  } catch (err) {
    throw new SourceUnavailable(`cannot read ${path}: ${(err as Error).message}`);
  }
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new MalformedSource(`${path} is empty`);
  }
  const header = splitCsvLine(lines[0], 1);
  checkSourceHeader(header);
  const rows: SourceRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = splitCsvLine(lines[i], i + 1);
    if (fields.length !== header.length) {
      throw new MalformedSource(`line ${i + 1}: expected ${header.length} fields, got ${fields.length}`);
    }
    const values: Record<string, string> = {};
    header.forEach((name, idx) => {
      const canonical = COLUMN_MAP[name];
      if (canonical !== undefined) values[canonical] = fields[idx];
    });
    rows.push({ line: i + 1, values });
  }
  return rows;
}

function requireInt(value: string, field: string, line: number): number {
  if (!/^-?\d+$/.test(value)) {
    throw new MalformedSource(`line ${line}: ${field}=${JSON.stringify(value)} is not an integer`);
  }
  return Number(value);
}

export interface CanonicalDataset {
  games: CanonicalGame[];
  plays: CanonicalPlay[];
  stats: CanonicalStat[];
}

export function convert(rows: SourceRow[], seasons: SeasonRange,
                        includePostseason: boolean): CanonicalDataset {
  const games = new Map<string, CanonicalGame>();
  const playsByGame = new Map<string, CanonicalPlay[]>();

  for (const row of rows) {
    const v = row.values;
    const season = requireInt(v.season, "season", row.line);
    const isPost = v.season_type === "POST";
    if (v.season_type !== "REG" && v.season_type !== "POST") {
      throw new MalformedSource(`line ${row.line}: season_type must be REG or POST`);
    }
    if (season < seasons.first || season > seasons.last) continue;
    if (isPost && !includePostseason) continue;

    const gameId = v.game_id;
    const game: CanonicalGame = {
      game_id: gameId,
      season,
      week: requireInt(v.week, "week", row.line),
      home_team: v.home_team,
      away_team: v.away_team,
      home_score: requireInt(v.home_score, "home_points", row.line),
      away_score: requireInt(v.away_score, "away_points", row.line),
      is_postseason: isPost,
    };
    const existing = games.get(gameId);
    if (existing === undefined) {
      games.set(gameId, game);
      playsByGame.set(gameId, []);
    } else if (JSON.stringify(existing) !== JSON.stringify(game)) {
      throw new MalformedSource(`line ${row.line}: game fields disagree for ${gameId}`);
    }

    playsByGame.get(gameId)!.push({
      game_id: gameId,
      play_index: requireInt(v.play_index, "play_id", row.line),
      quarter: requireInt(v.quarter, "qtr", row.line),
      clock_remaining: requireInt(v.clock_remaining, "secs_left_in_qtr", row.line),
      offense: v.offense,
      play_type: translatePlayType(v.play_type, row.line),
      yardline_100: v.yardline_100 === "" ? null
        : requireInt(v.yardline_100, "yards_to_goal", row.line),
      down: requireInt(v.down, "dwn", row.line),
      yards_to_go: requireInt(v.yards_to_go, "to_go", row.line),
      yards_gained: requireInt(v.yards_gained, "gained", row.line),
      points_scored: requireInt(v.points_scored, "points", row.line),
      attempt_success: translateSuccess(v.attempt_success, row.line),
      turnover: translateTurnover(v.turnover, row.line),
    });
  }

  const orderedGames = [...games.values()].sort((a, b) =>
    a.season - b.season || a.week - b.week || a.game_id.localeCompare(b.game_id));
  const plays: CanonicalPlay[] = [];
  const stats: CanonicalStat[] = [];
  for (const game of orderedGames) {
    const gamePlays = playsByGame.get(game.game_id)!
      .sort((a, b) => a.play_index - b.play_index);
    for (let i = 1; i < gamePlays.length; i++) {
      if (gamePlays[i].play_index === gamePlays[i - 1].play_index) {
        throw new MalformedSource(`game ${game.game_id}: duplicate play_id ${gamePlays[i].play_index}`);
      }
    }
    plays.push(...gamePlays);
    stats.push(...aggregateStats(game, gamePlays));
  }
  return { games: orderedGames, plays, stats };
}

export function aggregateStats(game: CanonicalGame,
                               gamePlays: CanonicalPlay[]): CanonicalStat[] {
  interface Box { pass: number; rush: number; pen: number; to: number; poss: number }
  const boxes = new Map<string, Box>([
    [game.home_team, { pass: 0, rush: 0, pen: 0, to: 0, poss: 0 }],
    [game.away_team, { pass: 0, rush: 0, pen: 0, to: 0, poss: 0 }],
  ]);
  const other = new Map([
    [game.home_team, game.away_team],
    [game.away_team, game.home_team],
  ]);
  for (let i = 0; i < gamePlays.length; i++) {
    const play = gamePlays[i];
    const box = boxes.get(play.offense);
    if (box === undefined) {
      throw new MalformedSource(`game ${game.game_id}: play ${play.play_index} offense ` +
        `${JSON.stringify(play.offense)} is not a participant`);
    }
    const next = gamePlays[i + 1];
    const elapsed = next !== undefined && next.quarter === play.quarter
      ? Math.max(0, play.clock_remaining - next.clock_remaining)
      : play.clock_remaining;
    box.poss += elapsed;
    if (play.play_type === "pass") {
      box.pass += play.yards_gained;
    } else if (play.play_type === "rush" || play.play_type === "kneel") {
      box.rush += play.yards_gained;
    } else if (play.play_type === "penalty") {
      if (play.yards_gained < 0) {
        box.pen += -play.yards_gained;
      } else if (play.yards_gained > 0) {
        boxes.get(other.get(play.offense)!)!.pen += play.yards_gained;
      }
    }
    if (play.turnover !== "none") box.to += 1;
  }
  return [game.home_team, game.away_team].map((team) => {
    const box = boxes.get(team)!;
    return {
      game_id: game.game_id,
      team,
      total_yards: box.pass + box.rush,
      passing_yards: box.pass,
      rushing_yards: box.rush,
      penalty_yards: box.pen,
      turnovers: box.to,
      possession_seconds: box.poss,
    };
  });
}

// Canonical rendering: LF endings, true/false booleans, empty string for null.
function cell(value: string | number | boolean | null): string {
  if (value === null) return "";
  if (typeof value === "boolean") return value ? "true" : "false";
  return String(value);
}

function renderCsv(header: readonly string[], rows: (string | number | boolean | null)[][]): string {
  const lines = [header.join(",")];
  for (const row of rows) lines.push(row.map(cell).join(","));
  return lines.join("\n") + "\n";
}

export function renderGames(games: CanonicalGame[]): string {
  return renderCsv(GAMES_HEADER, games.map((g) => [
    g.game_id, g.season, g.week, g.home_team, g.away_team,
    g.home_score, g.away_score, g.is_postseason,
  ]));
}

export function renderPlays(plays: CanonicalPlay[]): string {
  return renderCsv(PLAYS_HEADER, plays.map((p) => [
    p.game_id, p.play_index, p.quarter, p.clock_remaining, p.offense,
    p.play_type, p.yardline_100, p.down, p.yards_to_go, p.yards_gained,
    p.points_scored, p.attempt_success, p.turnover,
  ]));
}

export function renderStats(stats: CanonicalStat[]): string {
  return renderCsv(STATS_HEADER, stats.map((s) => [
    s.game_id, s.team, s.total_yards, s.passing_yards, s.rushing_yards,
    s.penalty_yards, s.turnovers, s.possession_seconds,
  ]));
}

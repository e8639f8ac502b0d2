// Local sanity checks plus the authoritative gate: the analytics package's
// own `validate` command must accept the emitted directory with zero errors.

import { spawnSync } from "child_process";

import { CanonicalDataset, } from "./convert";
import { CANONICAL_PLAY_TYPES, CANONICAL_TURNOVERS, ValidationFailed } from "./types";

export function checkLocal(dataset: CanonicalDataset): void {
  const problems: string[] = [];
  const gameIds = new Set(dataset.games.map((g) => g.game_id));
  for (const game of dataset.games) {
    if (game.home_team === game.away_team) {
      problems.push(`game ${game.game_id}: home equals away`);
    }
    if (!game.is_postseason && (game.week < 1 || game.week > 17)) {
      problems.push(`game ${game.game_id}: regular-season week ${game.week}`);
    }
  }
  for (const play of dataset.plays) {
    if (!gameIds.has(play.game_id)) problems.push(`orphan play in ${play.game_id}`);
    if (!CANONICAL_PLAY_TYPES.has(play.play_type)) {
      problems.push(`play ${play.game_id}#${play.play_index}: bad type ${play.play_type}`);
    }
    if (!CANONICAL_TURNOVERS.has(play.turnover)) {
      problems.push(`play ${play.game_id}#${play.play_index}: bad turnover ${play.turnover}`);
    }
  }
  for (const stat of dataset.stats) {
    if (!gameIds.has(stat.game_id)) problems.push(`orphan stat row in ${stat.game_id}`);
    if (stat.passing_yards + stat.rushing_yards !== stat.total_yards) {
      problems.push(`stat ${stat.game_id}/${stat.team}: passing+rushing != total`);
    }
    if (stat.total_yards <= 0) {
      problems.push(`stat ${stat.game_id}/${stat.team}: non-positive total yards`);
    }
  }
  if (problems.length > 0) {
    throw new ValidationFailed(`local checks failed:\n  ${problems.join("\n  ")}`);
  }
}

// Default validator; override with FEED_EXPORT_VALIDATOR (space-separated
// argv prefix) when the analytics CLI lives somewhere unusual.
const DEFAULT_VALIDATOR = ["python3", "-m", "gridiron", "validate"];

export function runPrimaryValidator(dir: string): void {
  const override = process.env.FEED_EXPORT_VALIDATOR;
  const argv = override ? override.split(" ") : DEFAULT_VALIDATOR;
  const result = spawnSync(argv[0], [...argv.slice(1), "--data", dir],
                           { encoding: "utf8" });
  if (result.error) {
    throw new ValidationFailed(`could not run validator ${argv.join(" ")}: ${result.error.message}`);
  }
  if (result.status !== 0) {
    throw new ValidationFailed(
      `validator rejected the export (exit ${result.status}):\n${result.stdout}${result.stderr}`);
  }
}

#!/usr/bin/env node
// feed-export: turn a public play-by-play dump into canonical CSV files.
//
// Usage:
//   feed-export --source <path> --out <dir> [--seasons 2009-2015] [--include-postseason]
//
// Regular-season rows of the requested seasons are converted by default.
// Output is atomic: the three files are staged and validated (including a
// run of the analytics package's own validator) before anything lands in
// the output directory, and a repeated export is byte-identical.
//
// Exit codes: 0 success, 1 data or validation errors, 2 usage errors.

import * as fs from "fs";
import * as path from "path";

import { convert, parseSeasonRange, readSource, renderGames, renderPlays, renderStats } from "./convert";
import { checkLocal, runPrimaryValidator } from "./validate";
import { MalformedSource, SourceUnavailable, UnmappedColumn, ValidationFailed } from "./types";

interface Args {
  source: string;
  out: string;
  seasons: string;
  includePostseason: boolean;
}

const USAGE = "usage: feed-export --source <path> --out <dir> " +
  "[--seasons 2009-2015] [--include-postseason]";

function parseArgs(argv: string[]): Args {
  const args: Partial<Args> = { seasons: "2009-2015", includePostseason: false };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    if (flag === "--include-postseason") {
      args.includePostseason = true;
    } else if (flag === "--source" || flag === "--out" || flag === "--seasons") {
      const value = argv[++i];
      if (value === undefined) throw new Error(`${flag} needs a value`);
      if (flag === "--source") args.source = value;
      if (flag === "--out") args.out = value;
      if (flag === "--seasons") args.seasons = value;
    } else {
      throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!args.source || !args.out) throw new Error("--source and --out are required");
  parseSeasonRange(args.seasons!); // malformed ranges are usage errors
  return args as Args;
}

export function runExport(args: Args): void {
  const seasons = parseSeasonRange(args.seasons);
  const rows = readSource(args.source);
  const dataset = convert(rows, seasons, args.includePostseason);
  if (dataset.games.length === 0) {
    throw new ValidationFailed("no games match the requested filters");
  }
  checkLocal(dataset);

  const files: Record<string, string> = {
    "games.csv": renderGames(dataset.games),
    "plays.csv": renderPlays(dataset.plays),
    "stats.csv": renderStats(dataset.stats),
  };

  // stage, validate, then move: a failed validation leaves out untouched
  const staging = fs.mkdtempSync(path.join(path.dirname(path.resolve(args.out)),
                                           ".feed-export-"));
  try {
    for (const [name, text] of Object.entries(files)) {
      fs.writeFileSync(path.join(staging, name), text, "utf8");
    }
    runPrimaryValidator(staging);
    fs.mkdirSync(args.out, { recursive: true });
    for (const name of Object.keys(files)) {
      fs.renameSync(path.join(staging, name), path.join(args.out, name));
    }
  } finally {
    fs.rmSync(staging, { recursive: true, force: true });
  }
  console.error(`feed-export: wrote ${dataset.games.length} games, ` +
    `${dataset.plays.length} plays to ${args.out}`);
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`feed-export: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  try {
    runExport(args);
    return 0;
  } catch (err) {
    if (err instanceof UnmappedColumn || err instanceof SourceUnavailable ||
        err instanceof ValidationFailed || err instanceof MalformedSource) {
      console.error(`feed-export: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}

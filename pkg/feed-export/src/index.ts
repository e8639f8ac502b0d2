export { convert, parseSeasonRange, readSource, renderGames, renderPlays, renderStats, aggregateStats } from "./convert";
export { COLUMN_MAP, PLAY_TYPE_MAP, TURNOVER_MAP } from "./mapping";
export { checkLocal, runPrimaryValidator } from "./validate";
export * from "./types";

/**
 * Rank-movement diff between two consecutive queries. Combinations are
 * matched by their offer identity, not by position, so a row that moved
 * keeps its badge even when filters changed around it.
 */

import type { RankResult } from './api.js';

export function combinationKey(result: RankResult): string {
  const compute = result.compute
    ? `${result.compute.provider}/${result.compute.location}/${result.compute.service_name}`
    : '-';
  const storage = result.storage
    ? `${result.storage.provider}/${result.storage.location}/${result.storage.service_name}`
    : '-';
  return `${compute}|${storage}|${result.network.provider}/${result.network.location}`;
}

export type Movement = 'up' | 'down' | 'same' | 'new';

export interface RankMovement {
  key: string;
  rank: number;
  previousRank: number | null;
  movement: Movement;
  /** Positions gained (positive) or lost (negative); 0 when unchanged or new. */
  delta: number;
}

/** Movement of every current row relative to the previous result list. */
export function diffRankings(
  previous: readonly RankResult[] | null,
  current: readonly RankResult[],
): RankMovement[] {
  const before = new Map<string, number>();
  for (const result of previous ?? []) {
    before.set(combinationKey(result), result.rank);
  }
  return current.map((result) => {
    const key = combinationKey(result);
    const previousRank = before.get(key) ?? null;
    let movement: Movement = 'new';
    let delta = 0;
    if (previousRank !== null) {
      delta = previousRank - result.rank;
      movement = delta > 0 ? 'up' : delta < 0 ? 'down' : 'same';
    }
    return { key, rank: result.rank, previousRank, movement, delta };
  });
}

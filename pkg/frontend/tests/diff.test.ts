import { describe, expect, it } from 'vitest';

import type { RankResponse, RankResult } from '../src/api.js';
import { combinationKey, diffRankings } from '../src/diff.js';
import { loadFixture } from './helpers.js';

const resultsOf = (name: string): RankResult[] =>
  (loadFixture(name).response as RankResponse).results;

describe('rank movement diff', () => {
  it('marks everything new when there is no previous query', () => {
    const current = resultsOf('rank_ratio_5');
    const moves = diffRankings(null, current);
    expect(moves).toHaveLength(current.length);
    expect(moves.every((move) => move.movement === 'new' && move.previousRank === null)).toBe(true);
  });

  it('tracks movements between ratio and cost ordering of the same query', () => {
    const byRatio = resultsOf('rank_ratio_5');
    const byCost = resultsOf('rank_cost_5');
    const moves = diffRankings(byRatio, byCost);

    const byKey = new Map(moves.map((move) => [move.key, move]));
    const ratioTop = combinationKey(byRatio[0]!);
    const costTop = combinationKey(byCost[0]!);
    expect(costTop).not.toBe(ratioTop);

    // the cheapest combination climbs from 3rd to 1st, the old leader slips
    expect(byKey.get(costTop)).toMatchObject({ movement: 'up', previousRank: 3, rank: 1, delta: 2 });
    expect(byKey.get(ratioTop)).toMatchObject({ movement: 'down', previousRank: 1, rank: 2, delta: -1 });
  });

  it('marks combinations absent from the previous window as new', () => {
    const before = resultsOf('rank_ratio_5');
    const after = resultsOf('rank_second');
    const moves = diffRankings(before, after);

    // the 16 GB machine's best combination was 5th, now leads
    expect(moves[0]).toMatchObject({ movement: 'up', previousRank: 5, rank: 1, delta: 4 });
    const newcomers = moves.filter((move) => move.movement === 'new');
    expect(newcomers.length).toBeGreaterThan(0);
    for (const move of newcomers) {
      expect(before.map(combinationKey)).not.toContain(move.key);
    }
  });

  it('keys a combination by its three offers', () => {
    const result = resultsOf('rank_ratio_5')[0]!;
    expect(combinationKey(result)).toBe('acme/syd/small|acme/syd/vault|acme/syd');
  });
});

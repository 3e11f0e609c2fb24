/**
 * The verbal importance scale offered by the preference wizard.
 *
 * Only these five strengths exist; there is deliberately no free-numeric
 * entry. A pair judged "moderate towards B" is sent with the criteria
 * swapped rather than as a fractional value, so request bodies only ever
 * carry the integers below.
 */

export interface VerbalChoice {
  label: string;
  value: 1 | 3 | 5 | 7 | 9;
}

export const VERBAL_CHOICES: readonly VerbalChoice[] = [
  { label: 'equal', value: 1 },
  { label: 'moderate', value: 3 },
  { label: 'strong', value: 5 },
  { label: 'very strong', value: 7 },
  { label: 'extreme', value: 9 },
] as const;

export type Direction = 'a' | 'b';

/** One judged pair: `winner` is `strength` times as important as the loser. */
export interface PairJudgment {
  a: string;
  b: string;
  direction: Direction;
  strength: 1 | 3 | 5 | 7 | 9;
}

/** All unordered criterion pairs in a stable order. */
export function allPairs(criteria: readonly string[]): Array<[string, string]> {
  const pairs: Array<[string, string]> = [];
  for (let i = 0; i < criteria.length; i += 1) {
    for (let j = i + 1; j < criteria.length; j += 1) {
      pairs.push([criteria[i]!, criteria[j]!]);
    }
  }
  return pairs;
}

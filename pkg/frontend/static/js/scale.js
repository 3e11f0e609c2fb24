/**
 * The verbal importance scale offered by the preference wizard.
 *
 * Only these five strengths exist; there is deliberately no free-numeric
 * entry. A pair judged "moderate towards B" is sent with the criteria
 * swapped rather than as a fractional value, so request bodies only ever
 * carry the integers below.
 */
export const VERBAL_CHOICES = [
    { label: 'equal', value: 1 },
    { label: 'moderate', value: 3 },
    { label: 'strong', value: 5 },
    { label: 'very strong', value: 7 },
    { label: 'extreme', value: 9 },
];
/** All unordered criterion pairs in a stable order. */
export function allPairs(criteria) {
    const pairs = [];
    for (let i = 0; i < criteria.length; i += 1) {
        for (let j = i + 1; j < criteria.length; j += 1) {
            pairs.push([criteria[i], criteria[j]]);
        }
    }
    return pairs;
}

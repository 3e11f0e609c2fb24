/**
 * Rank-movement diff between two consecutive queries. Combinations are
 * matched by their offer identity, not by position, so a row that moved
 * keeps its badge even when filters changed around it.
 */
export function combinationKey(result) {
    const compute = result.compute
        ? `${result.compute.provider}/${result.compute.location}/${result.compute.service_name}`
        : '-';
    const storage = result.storage
        ? `${result.storage.provider}/${result.storage.location}/${result.storage.service_name}`
        : '-';
    return `${compute}|${storage}|${result.network.provider}/${result.network.location}`;
}
/** Movement of every current row relative to the previous result list. */
export function diffRankings(previous, current) {
    const before = new Map();
    for (const result of previous ?? []) {
        before.set(combinationKey(result), result.rank);
    }
    return current.map((result) => {
        const key = combinationKey(result);
        const previousRank = before.get(key) ?? null;
        let movement = 'new';
        let delta = 0;
        if (previousRank !== null) {
            delta = previousRank - result.rank;
            movement = delta > 0 ? 'up' : delta < 0 ? 'down' : 'same';
        }
        return { key, rank: result.rank, previousRank, movement, delta };
    });
}

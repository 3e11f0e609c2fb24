/**
 * Typed client for the ranking service JSON routes.
 *
 * Every number shown anywhere in the console comes out of these response
 * payloads untouched; this module does transport and error unwrapping only.
 */
/** A 4xx/5xx response carrying the service's error envelope. */
export class ApiError extends Error {
    constructor(status, category, message, fields = []) {
        super(message);
        this.name = 'ApiError';
        this.status = status;
        this.category = category;
        this.fields = fields;
    }
}
async function post(url, body, signal) {
    const resp = await fetch(url, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(body),
        signal,
    });
    if (!resp.ok) {
        let category = 'unknown';
        let message = `request failed with status ${resp.status}`;
        let fields = [];
        try {
            const payload = await resp.json();
            const envelope = payload?.error;
            if (envelope) {
                category = envelope.category ?? category;
                message = envelope.message ?? message;
                fields = Array.isArray(envelope.fields) ? envelope.fields : [];
            }
        }
        catch {
            // non-JSON error body; keep the generic message
        }
        throw new ApiError(resp.status, category, message, fields);
    }
    return (await resp.json());
}
export class ApiClient {
    constructor(base = '') {
        this.base = base;
    }
    fetchWeights(judgments, criteria, signal) {
        const body = { judgments };
        if (criteria)
            body.criteria = criteria;
        return post(`${this.base}/api/weights`, body, signal);
    }
    fetchRank(draft, query, signal) {
        const params = new URLSearchParams({ by: query.by, limit: String(query.limit) });
        if (query.offset)
            params.set('offset', String(query.offset));
        return post(`${this.base}/api/rank?${params.toString()}`, draft, signal);
    }
}

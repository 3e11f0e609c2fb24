/**
 * Typed client for the ranking service JSON routes.
 *
 * Every number shown anywhere in the console comes out of these response
 * payloads untouched; this module does transport and error unwrapping only.
 */

export interface Judgment {
  criterion_a: string;
  criterion_b: string;
  value: number;
}

export interface WeightsResponse {
  criteria: string[];
  weights: number[];
  convergence_gap: number;
}

export interface UsageDraft {
  storage_gb: string;
  data_out_gb: string;
  data_in_gb?: string;
}

/** Body of POST /api/rank, mirroring the service schema. */
export interface RankDraft {
  client_location: string;
  usage: UsageDraft;
  providers?: string[];
  locations?: string[];
  min_memory_gb?: number;
  max_memory_gb?: number | null;
  price_max?: string;
  single_provider?: boolean;
  benefit_weights?: Record<string, number>;
}

export interface ScoreTerm {
  criterion: string;
  value: number;
  weight: number;
  weighted: number;
}

export interface RankResult {
  rank: number;
  providers: string[];
  compute: {
    provider: string;
    location: string;
    service_name: string;
    memory_gb: number;
    cpu_cores: number;
    cpu_speed_ghz: number;
    disk_gb: number;
    price_per_hour: string;
  } | null;
  storage: { provider: string; location: string; service_name: string } | null;
  network: { provider: string; location: string };
  cost: { compute_cost: string; storage_cost: string; network_cost: string; total: string };
  qos: {
    latency_ms: number;
    download_mbps: number;
    upload_mbps: number;
    source: string;
    estimated: boolean;
  };
  score: {
    ratio: number;
    numerator: number;
    denominator: number;
    cost_terms: ScoreTerm[];
    benefit_terms: ScoreTerm[];
  };
}

export interface RankResponse {
  catalog_version: number;
  display_currency: string;
  generated_at: string;
  order_by: string;
  total_results: number;
  limit: number;
  offset: number;
  request_echo: unknown;
  results: RankResult[];
}

export type OrderBy = 'ratio' | 'cost';

export interface FieldError {
  field: string;
  message: string;
}

/** A 4xx/5xx response carrying the service's error envelope. */
export class ApiError extends Error {
  readonly status: number;
  readonly category: string;
  readonly fields: FieldError[];

  constructor(status: number, category: string, message: string, fields: FieldError[] = []) {
    super(message);
    this.name = 'ApiError';
    this.status = status;
    this.category = category;
    this.fields = fields;
  }
}

async function post<T>(url: string, body: unknown, signal?: AbortSignal): Promise<T> {
  const resp = await fetch(url, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
    signal,
  });
  if (!resp.ok) {
    let category = 'unknown';
    let message = `request failed with status ${resp.status}`;
    let fields: FieldError[] = [];
    try {
      const payload = await resp.json();
      const envelope = payload?.error;
      if (envelope) {
        category = envelope.category ?? category;
        message = envelope.message ?? message;
        fields = Array.isArray(envelope.fields) ? envelope.fields : [];
      }
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiError(resp.status, category, message, fields);
  }
  return (await resp.json()) as T;
}

export interface RankQuery {
  by: OrderBy;
  limit: number;
  offset?: number;
}

export class ApiClient {
  constructor(private readonly base: string = '') {}

  fetchWeights(judgments: Judgment[], criteria?: string[], signal?: AbortSignal): Promise<WeightsResponse> {
    const body: Record<string, unknown> = { judgments };
    if (criteria) body.criteria = criteria;
    return post<WeightsResponse>(`${this.base}/api/weights`, body, signal);
  }

  fetchRank(draft: RankDraft, query: RankQuery, signal?: AbortSignal): Promise<RankResponse> {
    const params = new URLSearchParams({ by: query.by, limit: String(query.limit) });
    if (query.offset) params.set('offset', String(query.offset));
    return post<RankResponse>(`${this.base}/api/rank?${params.toString()}`, draft, signal);
  }
}

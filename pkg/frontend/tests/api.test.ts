import { beforeEach, describe, expect, it } from 'vitest';

import { ApiClient, ApiError, RankDraft } from '../src/api.js';
import { FetchRouter, loadFixture, settle } from './helpers.js';

const BASE_DRAFT = loadFixture('rank_ratio_5').request.body as RankDraft;

let router: FetchRouter;
let client: ApiClient;

beforeEach(() => {
  router = new FetchRouter().serve('rank_ratio_20', 'rank_error', 'weights_example');
  router.install();
  client = new ApiClient('');
});

describe('api client', () => {
  it('encodes order, limit and offset as query parameters', async () => {
    await client.fetchRank(BASE_DRAFT, { by: 'ratio', limit: 20 });
    expect(router.calls[0]!.query).toEqual({ by: 'ratio', limit: '20' });

    await client
      .fetchRank(BASE_DRAFT, { by: 'ratio', limit: 20, offset: 2 })
      .catch(() => undefined);
    expect(router.calls[1]!.query).toEqual({ by: 'ratio', limit: '20', offset: '2' });
  });

  it('unwraps the service error envelope', async () => {
    const bad = loadFixture('rank_error');
    const error = await client
      .fetchRank(bad.request.body as RankDraft, { by: 'ratio', limit: 5 })
      .then(() => null)
      .catch((caught: unknown) => caught);

    expect(error).toBeInstanceOf(ApiError);
    const apiError = error as ApiError;
    expect(apiError.status).toBe(400);
    expect(apiError.category).toBe('validation');
    expect(apiError.fields).toHaveLength(1);
    expect(apiError.fields[0]!.field).toBe('usage');
  });

  it('propagates an abort signal to fetch', async () => {
    const controller = new AbortController();
    controller.abort();
    const outcome = await client
      .fetchRank(BASE_DRAFT, { by: 'ratio', limit: 20 }, controller.signal)
      .then(() => 'resolved')
      .catch((error: unknown) => (error as DOMException).name);
    await settle();
    expect(outcome).toBe('AbortError');
  });

  it('sends judgments and criteria to the weights route', async () => {
    const fixture = loadFixture('weights_example');
    const body = fixture.request.body as { judgments: never[]; criteria: string[] };
    const response = await client.fetchWeights(body.judgments, body.criteria);
    expect(router.calls.at(-1)!.fixture).toBe('weights_example');
    expect(response).toEqual(fixture.response);
  });
});

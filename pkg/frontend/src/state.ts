/**
 * Per-tab session state. Nothing here is persisted or shared; the session
 * only remembers what the user has asked so far, so consecutive queries can
 * be diffed and revisited.
 */

import type { RankDraft, RankResponse, RankResult, WeightsResponse } from './api.js';

export interface HistoryEntry {
  request: RankDraft;
  topResult: RankResult | null;
}

export class SessionState {
  draft: RankDraft;
  weightPreview: WeightsResponse | null = null;
  lastResponse: RankResponse | null = null;
  previousResponse: RankResponse | null = null;
  private readonly entries: HistoryEntry[] = [];

  constructor(draft: RankDraft) {
    this.draft = draft;
  }

  /** Record a completed query; history is append-only within the session. */
  recordResponse(request: RankDraft, response: RankResponse): void {
    this.previousResponse = this.lastResponse;
    this.lastResponse = response;
    this.entries.push({ request, topResult: response.results[0] ?? null });
  }

  get history(): readonly HistoryEntry[] {
    return this.entries;
  }
}

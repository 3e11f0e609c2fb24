/**
 * Per-tab session state. Nothing here is persisted or shared; the session
 * only remembers what the user has asked so far, so consecutive queries can
 * be diffed and revisited.
 */
export class SessionState {
    constructor(draft) {
        this.weightPreview = null;
        this.lastResponse = null;
        this.previousResponse = null;
        this.entries = [];
        this.draft = draft;
    }
    /** Record a completed query; history is append-only within the session. */
    recordResponse(request, response) {
        this.previousResponse = this.lastResponse;
        this.lastResponse = response;
        this.entries.push({ request, topResult: response.results[0] ?? null });
    }
    get history() {
        return this.entries;
    }
}

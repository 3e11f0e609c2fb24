/**
 * What-if ranking explorer: a request form, the ranked combination table,
 * the ratio/cost chart, and a side-by-side diff against the previous query.
 *
 * Rows are rendered exactly in response order. Reordering (the cost-only
 * toggle or a sortable column header) switches the order parameter and asks
 * the service again; nothing is sorted or scored in the browser. A newer
 * query aborts any still-running one.
 */
import { ApiError } from './api.js';
import { renderChart } from './chart.js';
import { combinationKey, diffRankings } from './diff.js';
import { SessionState } from './state.js';
const esc = (s) => s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
export const LIMIT_MIN = 5;
export const LIMIT_MAX = 20;
const FORM_FIELDS = [
    { name: 'client_location', label: 'client location', value: 'mel' },
    { name: 'storage_gb', label: 'storage GB', value: '150' },
    { name: 'data_out_gb', label: 'data out GB', value: '60' },
    { name: 'data_in_gb', label: 'data in GB', value: '1' },
    { name: 'min_memory_gb', label: 'min memory GB', value: '0' },
    { name: 'max_memory_gb', label: 'max memory GB', value: '' },
    { name: 'price_max', label: 'price ceiling', value: '' },
    { name: 'providers', label: 'providers (comma separated)', value: '' },
    { name: 'locations', label: 'locations (comma separated)', value: '' },
];
export class RankView {
    constructor(container, client) {
        this.client = client;
        this.orderBy = 'ratio';
        this.limit = LIMIT_MIN;
        this.inflight = null;
        this.seq = 0;
        this.wizardWeights = null;
        this.root = container;
        this.state = new SessionState(this.draftFromForm());
        this.render();
        this.wire();
    }
    /** Latest wizard output; applied to drafts while the checkbox is on. */
    setWizardWeights(weights) {
        this.wizardWeights = weights;
    }
    draftFromForm() {
        const value = (name) => this.root.querySelector(`[name="${name}"]`)?.value.trim() ?? '';
        const listOf = (name) => value(name) === '' ? [] : value(name).split(',').map((s) => s.trim()).filter(Boolean);
        const draft = {
            client_location: value('client_location') || 'mel',
            usage: {
                storage_gb: value('storage_gb') || '0',
                data_out_gb: value('data_out_gb') || '0',
                data_in_gb: value('data_in_gb') || '1',
            },
        };
        const minMemory = value('min_memory_gb');
        if (minMemory !== '')
            draft.min_memory_gb = Number(minMemory);
        const maxMemory = value('max_memory_gb');
        if (maxMemory !== '')
            draft.max_memory_gb = Number(maxMemory);
        const priceMax = value('price_max');
        if (priceMax !== '')
            draft.price_max = priceMax;
        const providers = listOf('providers');
        if (providers.length > 0)
            draft.providers = providers;
        const locations = listOf('locations');
        if (locations.length > 0)
            draft.locations = locations;
        const single = this.root.querySelector('[name="single_provider"]');
        if (single?.checked)
            draft.single_provider = true;
        const applyWeights = this.root.querySelector('[name="use_wizard"]');
        if (applyWeights?.checked && this.wizardWeights) {
            const mapping = {};
            this.wizardWeights.criteria.forEach((criterion, i) => {
                mapping[criterion] = this.wizardWeights.weights[i];
            });
            draft.benefit_weights = mapping;
        }
        return draft;
    }
    async submit() {
        this.inflight?.abort();
        const controller = new AbortController();
        this.inflight = controller;
        this.seq += 1;
        const seq = this.seq;
        const draft = this.draftFromForm();
        this.state.draft = draft;
        this.clearFieldErrors();
        try {
            const response = await this.client.fetchRank(draft, { by: this.orderBy, limit: this.limit }, controller.signal);
            if (seq !== this.seq)
                return;
            this.state.recordResponse(draft, response);
            this.paintResults(response);
        }
        catch (error) {
            if (controller.signal.aborted || seq !== this.seq)
                return;
            if (error instanceof ApiError) {
                this.paintApiError(error);
            }
            else {
                this.banner('ranking service unreachable');
            }
        }
    }
    setOrder(by) {
        if (this.orderBy === by)
            return;
        this.orderBy = by;
        const toggle = this.root.querySelector('[name="cost_only"]');
        toggle.checked = by === 'cost';
        void this.submit();
    }
    wire() {
        const form = this.root.querySelector('form.rank-form');
        form.addEventListener('submit', (event) => {
            event.preventDefault();
            void this.submit();
        });
        const toggle = this.root.querySelector('[name="cost_only"]');
        toggle.addEventListener('change', () => {
            this.orderBy = toggle.checked ? 'cost' : 'ratio';
            void this.submit();
        });
        const slider = this.root.querySelector('[name="limit"]');
        slider.addEventListener('input', () => {
            this.limit = Number(slider.value);
            this.root.querySelector('.limit-value').textContent = slider.value;
            void this.submit();
        });
        this.root.addEventListener('click', (event) => {
            const th = event.target.closest('th[data-order]');
            if (th)
                this.setOrder(th.dataset.order);
        });
    }
    paintResults(response) {
        this.banner('');
        const tableHost = this.root.querySelector('.results');
        const movements = diffRankings(this.state.previousResponse?.results ?? null, response.results);
        if (response.results.length === 0) {
            tableHost.innerHTML =
                '<p class="empty-state">no feasible combination matches the current request</p>';
        }
        else {
            tableHost.innerHTML = renderTable(response, movements, this.orderBy);
        }
        renderChart(this.root.querySelector('.chart'), response.results);
        this.paintDiff(movements);
        this.paintHistory();
        const meta = this.root.querySelector('.result-meta');
        meta.textContent =
            response.results.length === 0
                ? ''
                : `${String(response.total_results)} feasible, showing ${String(response.results.length)} by ${response.order_by} (catalog v${String(response.catalog_version)}, ${response.display_currency})`;
    }
    paintDiff(movements) {
        const host = this.root.querySelector('.diff');
        const previous = this.state.previousResponse;
        if (!previous || movements.length === 0) {
            host.innerHTML = '';
            return;
        }
        let left = '<ol class="diff-column previous">';
        for (const result of previous.results) {
            left += `<li>${esc(combinationKey(result))}</li>`;
        }
        left += '</ol>';
        let right = '<ol class="diff-column current">';
        for (const move of movements) {
            right += `<li class="${move.movement}">${esc(move.key)} ${badge(move)}</li>`;
        }
        right += '</ol>';
        host.innerHTML = `<h3>previous vs current</h3><div class="diff-panels">${left}${right}</div>`;
    }
    paintHistory() {
        const host = this.root.querySelector('.history');
        let html = '<ol class="history-entries">';
        for (const entry of this.state.history) {
            const top = entry.topResult ? combinationKey(entry.topResult) : 'no result';
            html += `<li>${esc(entry.request.client_location)} &rarr; ${esc(top)}</li>`;
        }
        html += '</ol>';
        host.innerHTML = html;
    }
    paintApiError(error) {
        if (error.fields.length === 0) {
            this.banner(error.message);
            return;
        }
        let unmatched = 0;
        for (const fieldError of error.fields) {
            const slot = this.findErrorSlot(fieldError.field, fieldError.message);
            if (slot) {
                slot.textContent = fieldError.message;
            }
            else {
                unmatched += 1;
            }
        }
        this.banner(unmatched > 0 ? error.message : '');
    }
    /**
     * Locate the error slot for an API field path. Shape errors arrive with a
     * dotted path ("usage.storage_gb"); domain errors on a compound value name
     * the group ("usage") and spell the inner field in the message, so fall
     * back to scanning the message for a known input name.
     */
    findErrorSlot(fieldPath, message) {
        const leaf = fieldPath.split('.').pop() ?? fieldPath;
        const direct = this.root.querySelector(`.field-error[data-for="${leaf}"]`);
        if (direct)
            return direct;
        for (const slot of this.root.querySelectorAll('.field-error')) {
            const name = slot.dataset.for;
            if (message.includes(name))
                return slot;
        }
        return null;
    }
    clearFieldErrors() {
        for (const slot of this.root.querySelectorAll('.field-error')) {
            slot.textContent = '';
        }
    }
    banner(message) {
        const host = this.root.querySelector('.rank-banner');
        host.textContent = message;
        host.hidden = message === '';
    }
    render() {
        let fields = '';
        for (const field of FORM_FIELDS) {
            fields +=
                `<label>${esc(field.label)}` +
                    `<input name="${field.name}" value="${esc(field.value)}">` +
                    `<span class="field-error" data-for="${field.name}"></span></label>`;
        }
        this.root.innerHTML = `
      <form class="rank-form">
        ${fields}
        <label class="check"><input type="checkbox" name="single_provider">single provider only</label>
        <label class="check"><input type="checkbox" name="use_wizard" checked>apply wizard weights</label>
        <button type="submit">rank</button>
      </form>
      <div class="controls">
        <label class="check"><input type="checkbox" name="cost_only">cost only ordering</label>
        <label>show top <span class="limit-value">${LIMIT_MIN}</span>
          <input type="range" name="limit" min="${LIMIT_MIN}" max="${LIMIT_MAX}" value="${LIMIT_MIN}">
        </label>
      </div>
      <p class="rank-banner" role="alert" hidden></p>
      <p class="result-meta"></p>
      <div class="results"></div>
      <div class="chart"></div>
      <div class="diff"></div>
      <div class="history"></div>`;
    }
}
function badge(move) {
    if (move.movement === 'new')
        return '<span class="badge new">new</span>';
    if (move.movement === 'same')
        return '<span class="badge same">=</span>';
    const arrow = move.movement === 'up' ? '&#9650;' : '&#9660;';
    return `<span class="badge ${move.movement}">${arrow}${Math.abs(move.delta)}</span>`;
}
function renderTable(response, movements, orderBy) {
    const ratioArrow = orderBy === 'ratio' ? ' &#9652;' : '';
    const costArrow = orderBy === 'cost' ? ' &#9652;' : '';
    let html = '<table class="rank-table"><thead><tr>';
    html += '<th>rank</th><th>move</th><th>providers</th><th>compute</th><th>storage</th><th>network</th>';
    html += `<th data-order="cost" class="sortable">total cost${costArrow}</th>`;
    html += '<th>latency ms</th><th>download</th><th>upload</th>';
    html += `<th data-order="ratio" class="sortable">ratio${ratioArrow}</th>`;
    html += '</tr></thead><tbody>';
    response.results.forEach((result, i) => {
        html += renderRow(result, movements[i]);
    });
    html += '</tbody></table>';
    return html;
}
function renderRow(result, move) {
    const compute = result.compute
        ? `${result.compute.provider}/${result.compute.location}/${result.compute.service_name}`
        : '-';
    const storage = result.storage
        ? `${result.storage.provider}/${result.storage.location}/${result.storage.service_name}`
        : '-';
    const network = `${result.network.provider}/${result.network.location}`;
    let html = `<tr data-key="${esc(combinationKey(result))}">`;
    html += `<td class="num">${String(result.rank)}</td>`;
    html += `<td>${badge(move)}</td>`;
    html += `<td>${esc(result.providers.join('+'))}</td>`;
    html += `<td>${esc(compute)}</td><td>${esc(storage)}</td><td>${esc(network)}</td>`;
    html += `<td class="num" data-cell="total">${esc(result.cost.total)}</td>`;
    html += `<td class="num" data-cell="latency">${String(result.qos.latency_ms)}</td>`;
    html += `<td class="num" data-cell="download">${String(result.qos.download_mbps)}</td>`;
    html += `<td class="num" data-cell="upload">${String(result.qos.upload_mbps)}</td>`;
    html += `<td class="num" data-cell="ratio">${String(result.score.ratio)}</td>`;
    html += '</tr>';
    html += `<tr class="breakdown-row"><td colspan="11">${renderBreakdown(result)}</td></tr>`;
    return html;
}
function renderBreakdown(result) {
    const term = (t) => `<li>${esc(t.criterion)}: value <span class="term-value">${String(t.value)}</span>` +
        ` &times; weight <span class="term-weight">${String(t.weight)}</span>` +
        ` = <span class="term-weighted">${String(t.weighted)}</span></li>`;
    return ('<details class="breakdown"><summary>score breakdown</summary>' +
        `<p>numerator <span data-cell="numerator">${String(result.score.numerator)}</span>` +
        ` / denominator <span data-cell="denominator">${String(result.score.denominator)}</span></p>` +
        `<ul class="cost-terms">${result.score.cost_terms.map(term).join('')}</ul>` +
        `<ul class="benefit-terms">${result.score.benefit_terms.map(term).join('')}</ul>` +
        '</details>');
}

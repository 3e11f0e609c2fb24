/**
 * Pairwise preference wizard.
 *
 * One row per criterion pair, a verbal strength button for each side plus
 * "equal" in the middle. Whenever the judgment set becomes complete (and on
 * every later change) the wizard asks the service for the weight vector and
 * shows it together with the squaring convergence gap. Weights are never
 * computed locally.
 */

import { ApiClient, ApiError, Judgment, WeightsResponse } from './api.js';
import { allPairs, Direction, PairJudgment, VERBAL_CHOICES } from './scale.js';

const esc = (s: string): string =>
  s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');

function pairKey(a: string, b: string): string {
  return `${a}|${b}`;
}

export interface WizardOptions {
  criteria: readonly string[];
  onWeights?: (weights: WeightsResponse) => void;
}

export class PreferenceWizard {
  private readonly pairs: Array<[string, string]>;
  private readonly judgments = new Map<string, PairJudgment>();
  private readonly criteria: readonly string[];
  private readonly onWeights?: (weights: WeightsResponse) => void;
  private inflight: AbortController | null = null;
  private readonly root: HTMLElement;

  constructor(container: HTMLElement, private readonly client: ApiClient, options: WizardOptions) {
    this.criteria = options.criteria;
    this.onWeights = options.onWeights;
    this.pairs = allPairs(this.criteria);
    this.root = container;
    this.render();
    this.root.addEventListener('click', (event) => this.onClick(event));
  }

  /** The request body judgments for the current selections, in pair order. */
  judgmentsBody(): Judgment[] {
    const body: Judgment[] = [];
    for (const [a, b] of this.pairs) {
      const judged = this.judgments.get(pairKey(a, b));
      if (!judged) continue;
      if (judged.direction === 'b' && judged.strength !== 1) {
        body.push({ criterion_a: b, criterion_b: a, value: judged.strength });
      } else {
        body.push({ criterion_a: a, criterion_b: b, value: judged.strength });
      }
    }
    return body;
  }

  /** Pairs with no judgment yet, in display order. */
  missingPairs(): Array<[string, string]> {
    return this.pairs.filter(([a, b]) => !this.judgments.has(pairKey(a, b)));
  }

  /** Programmatic selection, used by tests and by preset buttons. */
  select(a: string, b: string, direction: Direction, strength: 1 | 3 | 5 | 7 | 9): void {
    this.judgments.set(pairKey(a, b), { a, b, direction, strength });
    this.refresh();
  }

  private onClick(event: Event): void {
    const button = (event.target as HTMLElement).closest(
      'button[data-pair]',
    ) as HTMLButtonElement | null;
    if (!button) return;
    const [a, b] = button.dataset.pair!.split('|') as [string, string];
    const direction = button.dataset.direction as Direction;
    const strength = Number(button.dataset.strength) as 1 | 3 | 5 | 7 | 9;
    this.select(a, b, direction, strength);
  }

  private refresh(): void {
    this.paintSelections();
    const missing = this.missingPairs();
    if (missing.length > 0) {
      this.paintMissing(missing);
      return;
    }
    this.paintMissing([]);
    void this.requestWeights();
  }

  private async requestWeights(): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const preview = this.root.querySelector('.weight-preview') as HTMLElement;
    try {
      const weights = await this.client.fetchWeights(
        this.judgmentsBody(),
        [...this.criteria],
        controller.signal,
      );
      if (controller !== this.inflight) return;
      preview.innerHTML = renderWeights(weights);
      this.onWeights?.(weights);
    } catch (error) {
      if (controller.signal.aborted) return;
      const message = error instanceof ApiError ? error.message : 'weight service unreachable';
      preview.innerHTML = `<p class="error" role="alert">${esc(message)}</p>`;
    }
  }

  private paintSelections(): void {
    for (const button of this.root.querySelectorAll<HTMLButtonElement>('button[data-pair]')) {
      const judged = this.judgments.get(button.dataset.pair!);
      const active =
        judged !== undefined &&
        judged.direction === button.dataset.direction &&
        judged.strength === Number(button.dataset.strength);
      button.classList.toggle('selected', active);
      button.setAttribute('aria-pressed', String(active));
    }
  }

  private paintMissing(missing: Array<[string, string]>): void {
    const open = new Set(missing.map(([a, b]) => pairKey(a, b)));
    for (const row of this.root.querySelectorAll<HTMLElement>('.pair-row')) {
      row.classList.toggle('missing', open.has(row.dataset.pair!));
    }
    const note = this.root.querySelector('.wizard-note') as HTMLElement;
    if (missing.length > 0) {
      const names = missing.map(([a, b]) => `${a} vs ${b}`).join(', ');
      note.textContent = `judge the remaining pairs: ${names}`;
    } else {
      note.textContent = '';
    }
  }

  private render(): void {
    let html = '<div class="wizard">';
    for (const [a, b] of this.pairs) {
      const key = pairKey(a, b);
      html += `<div class="pair-row missing" data-pair="${esc(key)}">`;
      html += `<span class="pair-name left">${esc(a)}</span><span class="buttons">`;
      const sided = VERBAL_CHOICES.filter((choice) => choice.value !== 1).reverse();
      for (const choice of sided) {
        html += pairButton(key, 'a', choice.value, choice.label);
      }
      html += pairButton(key, 'a', 1, 'equal');
      for (const choice of [...sided].reverse()) {
        html += pairButton(key, 'b', choice.value, choice.label);
      }
      html += `</span><span class="pair-name right">${esc(b)}</span></div>`;
    }
    html += '<p class="wizard-note"></p><div class="weight-preview"></div></div>';
    this.root.innerHTML = html;
    this.paintMissing(this.missingPairs());
  }
}

function pairButton(key: string, direction: Direction, strength: number, label: string): string {
  return (
    `<button type="button" data-pair="${esc(key)}" data-direction="${direction}"` +
    ` data-strength="${strength}" aria-pressed="false"` +
    ` title="${esc(label)} (${strength})">${esc(label)}</button>`
  );
}

function renderWeights(weights: WeightsResponse): string {
  let html = '<dl class="weights">';
  weights.criteria.forEach((criterion, i) => {
    html += `<dt>${esc(criterion)}</dt><dd data-weight-for="${esc(criterion)}">${String(
      weights.weights[i],
    )}</dd>`;
  });
  html += '</dl>';
  html += `<p class="gap">convergence gap <span data-gap>${String(
    weights.convergence_gap,
  )}</span></p>`;
  return html;
}

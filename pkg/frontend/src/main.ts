/**
 * Console entry point: mount the preference wizard and the ranking explorer
 * against the service that serves this page.
 */

import { ApiClient } from './api.js';
import { RankView } from './rankview.js';
import { PreferenceWizard } from './wizard.js';

export const WIZARD_CRITERIA = ['upload', 'download', 'ram', 'disk'] as const;

export function boot(document: Document, base = ''): { wizard: PreferenceWizard; rank: RankView } {
  const client = new ApiClient(base);
  const rank = new RankView(document.querySelector('#rank') as HTMLElement, client);
  const wizard = new PreferenceWizard(document.querySelector('#wizard') as HTMLElement, client, {
    criteria: WIZARD_CRITERIA,
    onWeights: (weights) => rank.setWizardWeights(weights),
  });
  return { wizard, rank };
}

if (typeof window !== 'undefined' && document.querySelector('#wizard')) {
  boot(document);
}

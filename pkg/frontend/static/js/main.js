/**
 * Console entry point: mount the preference wizard and the ranking explorer
 * against the service that serves this page.
 */
import { ApiClient } from './api.js';
import { RankView } from './rankview.js';
import { PreferenceWizard } from './wizard.js';
export const WIZARD_CRITERIA = ['upload', 'download', 'ram', 'disk'];
export function boot(document, base = '') {
    const client = new ApiClient(base);
    const rank = new RankView(document.querySelector('#rank'), client);
    const wizard = new PreferenceWizard(document.querySelector('#wizard'), client, {
        criteria: WIZARD_CRITERIA,
        onWeights: (weights) => rank.setWizardWeights(weights),
    });
    return { wizard, rank };
}
if (typeof window !== 'undefined' && document.querySelector('#wizard')) {
    boot(document);
}

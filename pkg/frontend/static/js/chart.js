/**
 * Dual-line SVG chart: ratio (dotted) and total cost (solid) against rank
 * position. Each series is scaled to its own vertical band; axis labels
 * repeat the payload values verbatim, never a locally derived figure.
 */
const WIDTH = 640;
const HEIGHT = 240;
const PAD = { left: 12, right: 12, top: 16, bottom: 28 };
function polyline(points, x, y) {
    return points.map((value, i) => `${x(i).toFixed(1)},${y(value).toFixed(1)}`).join(' ');
}
function scale(points) {
    const lo = Math.min(...points);
    const hi = Math.max(...points);
    const span = hi - lo || 1;
    const usable = HEIGHT - PAD.top - PAD.bottom;
    return (v) => PAD.top + (1 - (v - lo) / span) * usable;
}
export function renderChart(container, results) {
    if (results.length === 0) {
        container.innerHTML = '';
        return;
    }
    const ratio = {
        points: results.map((r) => r.score.ratio),
        firstLabel: String(results[0].score.ratio),
        lastLabel: String(results[results.length - 1].score.ratio),
    };
    const cost = {
        points: results.map((r) => Number(r.cost.total)),
        firstLabel: results[0].cost.total,
        lastLabel: results[results.length - 1].cost.total,
    };
    const usableX = WIDTH - PAD.left - PAD.right;
    const step = results.length > 1 ? usableX / (results.length - 1) : 0;
    const x = (i) => PAD.left + i * step;
    const yRatio = scale(ratio.points);
    const yCost = scale(cost.points);
    let svg = `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" aria-label="ratio and cost by rank position">`;
    svg += `<polyline class="series-cost" fill="none" points="${polyline(cost.points, x, yCost)}"/>`;
    svg += `<polyline class="series-ratio" fill="none" stroke-dasharray="4 3" points="${polyline(ratio.points, x, yRatio)}"/>`;
    for (let i = 0; i < results.length; i += 1) {
        svg += `<text class="tick" x="${x(i).toFixed(1)}" y="${HEIGHT - 8}" text-anchor="middle">${results[i].rank}</text>`;
    }
    svg += '</svg>';
    svg += `<p class="legend">` +
        `<span class="key ratio">ratio</span> first <span data-chart="ratio-first">${ratio.firstLabel}</span>` +
        ` last <span data-chart="ratio-last">${ratio.lastLabel}</span>` +
        ` &middot; <span class="key cost">cost</span> first <span data-chart="cost-first">${cost.firstLabel}</span>` +
        ` last <span data-chart="cost-last">${cost.lastLabel}</span></p>`;
    container.innerHTML = svg;
}

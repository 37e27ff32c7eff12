/** Panel rendering as plain HTML/SVG strings.
 *
 * Keeping render functions string-valued keeps them trivially testable;
 * main.ts owns the DOM wiring. Every number displayed here arrived from
 * the API.
 */

import { FieldErrors } from './validate.js';
import {
  DurationResponse,
  InfeasibleResponse,
  JobRecord,
  SampleSizeResponse,
  ScenarioDraft,
} from './types.js';
import { SweepRow } from './sweep.js';

const esc = (text: string): string =>
  text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');

const fixed = (value: number, digits: number): string => value.toFixed(digits);

export function renderSizePanel(result: SampleSizeResponse): string {
  return [
    '<dl class="size-result">',
    `<dt>per group</dt><dd class="n-per-group">${result.n_per_group}</dd>`,
    `<dt>total</dt><dd class="n-total">${result.n_total}</dd>`,
    `<dt>expected events</dt><dd class="events">${result.expected_events}</dd>`,
    `<dt>event probability (control)</dt><dd class="e0">${fixed(result.e0, 4)}</dd>`,
    `<dt>event probability (experimental)</dt><dd class="e1">${fixed(result.e1, 4)}</dd>`,
    '</dl>',
  ].join('');
}

export function renderFieldErrors(errors: FieldErrors): string {
  const items = Object.entries(errors)
    .map(([field, message]) => `<li data-field="${field}">${esc(String(message))}</li>`)
    .join('');
  return items ? `<ul class="field-errors">${items}</ul>` : '';
}

export function renderRequestError(detail: string): string {
  return `<p class="request-error">${esc(detail)}</p>`;
}

/** Simple polyline chart of N against the swept parameter, with hover
 * titles carrying the exact values. */
export function renderSweepChart(parameter: string, rows: SweepRow[]): string {
  if (rows.length === 0) {
    return '<p class="placeholder">no sweep points</p>';
  }
  const w = 420;
  const h = 180;
  const pad = 30;
  const xs = rows.map((r) => r.value);
  const ys = rows.map((r) => r.nPerGroup);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const sx = (x: number) => pad + ((w - 2 * pad) * (x - xLo)) / (xHi - xLo || 1);
  const sy = (y: number) => h - pad - ((h - 2 * pad) * (y - yLo)) / (yHi - yLo || 1);
  const path = rows
    .map((r, i) => `${i === 0 ? 'M' : 'L'}${fixed(sx(r.value), 1)},${fixed(sy(r.nPerGroup), 1)}`)
    .join(' ');
  const dots = rows
    .map(
      (r) =>
        `<circle cx="${fixed(sx(r.value), 1)}" cy="${fixed(sy(r.nPerGroup), 1)}" r="3">` +
        `<title>${esc(parameter)}=${r.value} N=${r.nPerGroup}</title></circle>`,
    )
    .join('');
  return (
    `<svg class="sweep-chart" viewBox="0 0 ${w} ${h}" role="img">` +
    `<text x="${pad}" y="14" class="axis">N per group vs ${esc(parameter)}</text>` +
    `<text x="${pad}" y="${h - 8}" class="endpoint-lo">${esc(parameter)}=${xs[0]} N=${ys[0]}</text>` +
    `<text x="${w - pad}" y="${h - 8}" text-anchor="end" class="endpoint-hi">` +
    `${esc(parameter)}=${xs[xs.length - 1]} N=${ys[ys.length - 1]}</text>` +
    `<path d="${path}" fill="none" stroke="currentColor"/>` +
    dots +
    '</svg>'
  );
}

export function renderDurationResult(result: DurationResponse): string {
  return (
    `<p class="duration-result">follow-up <strong>${fixed(result.followup, 3)}</strong>` +
    ` (accrual ${fixed(result.accrual_duration, 3)},` +
    ` total ${fixed(result.total_duration, 3)})</p>`
  );
}

/** Feasibility explanation with both bounds on a number line. */
export function renderInfeasible(info: InfeasibleResponse): string {
  const w = 420;
  const pad = 30;
  const lo = info.lower_bound;
  const hi = info.upper_bound;
  const span = hi - lo || 1;
  const xLo = pad + (w - 2 * pad) * 0.15;
  const xHi = pad + (w - 2 * pad) * 0.85;
  const clamped = Math.min(Math.max(info.n_target, lo - 0.4 * span), hi + 0.4 * span);
  const xT = xLo + ((xHi - xLo) * (clamped - lo)) / span;
  const side = info.error === 'infeasible_below' ? 'below' : 'above';
  return (
    `<div class="infeasible" data-kind="${side}">` +
    `<p>target ${info.n_target} is ${side} the solvable range ` +
    `(<span class="lower-bound">${fixed(lo, 2)}</span>, ` +
    `<span class="upper-bound">${fixed(hi, 2)}</span>): ${esc(info.detail)}</p>` +
    `<svg viewBox="0 0 ${w} 60" class="bounds-line" role="img">` +
    `<line x1="${pad}" y1="30" x2="${w - pad}" y2="30" stroke="currentColor"/>` +
    `<circle cx="${fixed(xLo, 1)}" cy="30" r="4"><title>lower ${fixed(lo, 2)}</title></circle>` +
    `<circle cx="${fixed(xHi, 1)}" cy="30" r="4"><title>upper ${fixed(hi, 2)}</title></circle>` +
    `<circle cx="${fixed(xT, 1)}" cy="30" r="4" class="target">` +
    `<title>target ${info.n_target}</title></circle>` +
    `</svg></div>`
  );
}

export function renderProgress(fraction: number): string {
  const pct = Math.round(100 * Math.min(1, Math.max(0, fraction)));
  return (
    `<div class="progress" role="progressbar" aria-valuenow="${pct}">` +
    `<div class="bar" style="width:${pct}%"></div><span>${pct}%</span></div>`
  );
}

/** Power estimate with a +-2 SE band against the design-power target line. */
export function renderPowerPanel(job: JobRecord, target: number): string {
  if (job.state === 'failed' || !job.result) {
    return renderRequestError(job.error ?? 'simulation failed');
  }
  const { power, se, replicates, non_converged } = job.result;
  const lo = power - 2 * se;
  const hi = power + 2 * se;
  const within = lo <= target && target <= hi;
  const w = 420;
  const pad = 30;
  const axisLo = Math.min(lo, target) - 0.05;
  const axisHi = Math.max(hi, target) + 0.05;
  const sx = (p: number) => pad + ((w - 2 * pad) * (p - axisLo)) / (axisHi - axisLo);
  return (
    `<div class="power-result" data-brackets-target="${within}">` +
    `<p>power <strong class="power">${fixed(power, 4)}</strong> ` +
    `&plusmn; 2&times;${fixed(se, 4)} ` +
    `(band <span class="band-lo">${fixed(lo, 4)}</span>&ndash;` +
    `<span class="band-hi">${fixed(hi, 4)}</span>, target ${fixed(target, 2)}, ` +
    `${replicates} replicates, ${non_converged} non-converged)</p>` +
    `<svg viewBox="0 0 ${w} 50" class="power-band" role="img">` +
    `<line x1="${fixed(sx(lo), 1)}" y1="25" x2="${fixed(sx(hi), 1)}" y2="25" ` +
    `stroke="currentColor" stroke-width="6" class="band"/>` +
    `<line x1="${fixed(sx(target), 1)}" y1="8" x2="${fixed(sx(target), 1)}" y2="42" ` +
    `stroke="currentColor" stroke-dasharray="4 3" class="target-line"/>` +
    `<circle cx="${fixed(sx(power), 1)}" cy="25" r="4"/>` +
    '</svg></div>'
  );
}

/** Side-by-side comparison: one column per scenario, rows keyed by
 * shape / censoring so the layout mirrors the reference sizing tables. */
export function renderComparePanel(
  entries: { draft: ScenarioDraft; result: SampleSizeResponse }[],
): string {
  if (entries.length === 0) {
    return '<p class="placeholder">add scenarios to compare</p>';
  }
  const header = entries
    .map((e, i) => `<th data-col="${i}">${esc(e.draft.label)}</th>`)
    .join('');
  const keyRow = entries
    .map((e) => {
      const shape = e.draft.family === 'exponential' ? '1' : String(e.draft.shape);
      return `<td>${e.draft.family}, shape ${shape}, loss ${e.draft.censorHazard}</td>`;
    })
    .join('');
  const nRow = entries
    .map((e, i) => `<td class="n-per-group" data-col="${i}">${e.result.n_per_group}</td>`)
    .join('');
  const eventsRow = entries.map((e) => `<td>${e.result.expected_events}</td>`).join('');
  return (
    '<table class="compare">' +
    `<thead><tr><th>scenario</th>${header}</tr></thead>` +
    '<tbody>' +
    `<tr><th>model / censoring</th>${keyRow}</tr>` +
    `<tr><th>N per group</th>${nRow}</tr>` +
    `<tr><th>expected events</th>${eventsRow}</tr>` +
    '</tbody></table>'
  );
}

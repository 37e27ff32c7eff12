import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import {
  renderComparePanel,
  renderDurationResult,
  renderFieldErrors,
  renderInfeasible,
  renderPowerPanel,
  renderProgress,
  renderSizePanel,
  renderSweepChart,
} from '../src/panels.js';
import { sweepValues, withSweptValue } from '../src/sweep.js';
import { defaultDraft } from '../src/types.js';
import { validateDraft } from '../src/validate.js';
import { makeFakeApi } from './fake.js';

describe('live sample size panel', () => {
  it('shows 141 per group for the worked scenario', async () => {
    const { fetchImpl } = makeFakeApi();
    const client = new ApiClient('', fetchImpl);
    const html = renderSizePanel(await client.sampleSize(defaultDraft()));
    expect(html).toContain('<dd class="n-per-group">141</dd>');
    expect(html).toContain('<dd class="n-total">282</dd>');
    expect(html).toContain('<dd class="events">139</dd>');
    expect(html).toContain('0.9889');
  });

  it('an invalid draft renders an inline field error instead', () => {
    const errors = validateDraft({ ...defaultDraft(), shape: 0, family: 'weibull' });
    const html = renderFieldErrors(errors);
    expect(html).toContain('data-field="shape"');
    expect(html).toContain('positive');
  });
});

describe('sensitivity sweep', () => {
  it('sweeping the loss hazard from 0 to 0.05 shows 141 and 190 at the ends', async () => {
    const { fetchImpl } = makeFakeApi();
    const client = new ApiClient('', fetchImpl);
    const draft = defaultDraft();
    const rows = [];
    for (const value of sweepValues(0, 0.05, 20)) {
      const point = withSweptValue(draft, 'censorHazard', value);
      const result = await client.sampleSize(point);
      rows.push({ draft: point, value, nPerGroup: result.n_per_group });
    }
    expect(rows[0].nPerGroup).toBe(141);
    expect(rows[rows.length - 1].nPerGroup).toBe(190);
    const svg = renderSweepChart('censorHazard', rows);
    expect(svg).toContain('censorHazard=0 N=141');
    expect(svg).toContain('censorHazard=0.05 N=190');
    const ns = rows.map((r) => r.nPerGroup);
    expect(ns).toEqual([...ns].sort((a, b) => a - b)); // N rises with censoring
  });

  it('renders a placeholder for an empty sweep', () => {
    expect(renderSweepChart('shape', [])).toContain('placeholder');
  });
});

describe('duration panel', () => {
  it('renders a solved follow-up', async () => {
    const { fetchImpl } = makeFakeApi();
    const client = new ApiClient('', fetchImpl);
    const html = renderDurationResult(await client.duration(defaultDraft(), 300));
    expect(html).toContain('22.200');
    expect(html).toContain('44.200');
  });

  it('renders both bounds on the number line when infeasible', () => {
    const html = renderInfeasible({
      error: 'infeasible_below',
      detail: 'no finite follow-up suffices',
      n_target: 100,
      lower_bound: 278.0,
      upper_bound: 403.9,
    });
    expect(html).toContain('data-kind="below"');
    expect(html).toContain('<span class="lower-bound">278.00</span>');
    expect(html).toContain('<span class="upper-bound">403.90</span>');
    expect(html).toContain('<svg');
  });
});

describe('power check panel', () => {
  it('renders a band around the estimate that brackets the 0.80 target', async () => {
    const { fetchImpl } = makeFakeApi();
    const client = new ApiClient('', fetchImpl);
    const jobId = await client.submitPower(defaultDraft(), 141, 10000, 7);
    const record = await client.pollJob(jobId, () => {}, 0, async () => {});
    const html = renderPowerPanel(record, 0.8);
    expect(html).toContain('data-brackets-target="true"');
    const lo = Number(/class="band-lo">([\d.]+)</.exec(html)?.[1]);
    const hi = Number(/class="band-hi">([\d.]+)</.exec(html)?.[1]);
    expect(lo).toBeLessThanOrEqual(0.8);
    expect(hi).toBeGreaterThanOrEqual(0.8);
  });

  it('progress bar is monotone and clamped', () => {
    expect(renderProgress(0.35)).toContain('aria-valuenow="35"');
    expect(renderProgress(1.7)).toContain('aria-valuenow="100"');
    expect(renderProgress(-1)).toContain('aria-valuenow="0"');
  });

  it('a failed job renders its error', () => {
    const html = renderPowerPanel(
      { id: 'x', state: 'failed', progress: 0.4, result: null, error: 'boom' },
      0.8,
    );
    expect(html).toContain('boom');
  });
});

describe('scenario comparison', () => {
  const entry = (label: string, n: number) => ({
    draft: { ...defaultDraft(), label },
    result: {
      n_per_group: n,
      n_total: 2 * n,
      e0: 0.9,
      e1: 0.9,
      ets: 69.3,
      expected_events: 139,
    },
  });

  it('renders one column per scenario', () => {
    const html = renderComparePanel([entry('A', 141), entry('B', 190)]);
    expect(html).toContain('>A</th>');
    expect(html).toContain('>B</th>');
    expect(html).toContain('data-col="0">141<');
    expect(html).toContain('data-col="1">190<');
  });

  it('an empty list renders a placeholder', () => {
    expect(renderComparePanel([])).toContain('placeholder');
  });

  it('removing a scenario removes its column', () => {
    const entries = [entry('A', 141), entry('B', 190)];
    entries.splice(0, 1);
    const html = renderComparePanel(entries);
    expect(html).not.toContain('>A</th>');
    expect(html).toContain('>B</th>');
  });

  it('escapes scenario labels', () => {
    const html = renderComparePanel([entry('<script>', 10)]);
    expect(html).toContain('&lt;script&gt;');
  });
});

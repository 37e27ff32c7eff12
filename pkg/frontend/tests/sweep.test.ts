import { describe, expect, it } from 'vitest';

import { CSV_HEADER, SWEEP_CAP, sweepToCsv, sweepValues, withSweptValue } from '../src/sweep.js';
import { defaultDraft } from '../src/types.js';

describe('sensitivity sweeps', () => {
  it('produces an inclusive evenly spaced range', () => {
    const values = sweepValues(0, 0.05, 20);
    expect(values).toHaveLength(20);
    expect(values[0]).toBe(0);
    expect(values[values.length - 1]).toBeCloseTo(0.05, 12);
  });

  it('caps the fan-out at fifty points', () => {
    expect(sweepValues(0, 1, 500)).toHaveLength(SWEEP_CAP);
  });

  it('returns nothing for an empty or reversed range', () => {
    expect(sweepValues(1, 0)).toEqual([]);
    expect(sweepValues(NaN, 1)).toEqual([]);
  });

  it('collapses a degenerate range to one point', () => {
    expect(sweepValues(0.3, 0.3)).toEqual([0.3]);
  });

  it('applies the swept value without touching other fields', () => {
    const swept = withSweptValue(defaultDraft(), 'censorHazard', 0.05);
    expect(swept.censorHazard).toBe(0.05);
    expect(swept.scale0).toBe(defaultDraft().scale0);
  });

  it('exports the curves-style CSV restricted to N', () => {
    const draft = defaultDraft();
    const csv = sweepToCsv([
      { draft: withSweptValue(draft, 'censorHazard', 0), value: 0, nPerGroup: 141 },
      { draft: withSweptValue(draft, 'censorHazard', 0.05), value: 0.05, nPerGroup: 190 },
    ]);
    const lines = csv.split('\n');
    expect(lines[0]).toBe(CSV_HEADER);
    expect(lines[1]).toBe('exponential,,0.139,0,non_inferiority,1.4,1,exponential,141,,,,,');
    expect(lines[2].split(',')[8]).toBe('190');
  });
});

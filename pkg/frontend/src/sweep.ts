/** Parameter sweeps: N as a function of one swept input.
 *
 * Sweeps are capped at 50 points to bound request fan-out. The CSV
 * export uses the same column order as the simulation curves table,
 * with the power columns left empty (only N is swept here).
 */

import { ScenarioDraft } from './types.js';

export type SweepParameter = 'censorHazard' | 'scale0' | 'shape' | 'margin' | 'altHr';

export const SWEEP_CAP = 50;
export const DEFAULT_SWEEP_POINTS = 20;

export const CSV_HEADER =
  'true_family,shape,scale0,phi,hypothesis,margin,alt_hr,formula_family,' +
  'n_per_group,power,se,non_converged,replicates,seed';

export function sweepValues(lo: number, hi: number, points = DEFAULT_SWEEP_POINTS): number[] {
  if (!(Number.isFinite(lo) && Number.isFinite(hi)) || hi < lo) {
    return [];
  }
  const n = Math.max(2, Math.min(points, SWEEP_CAP));
  if (hi === lo) return [lo];
  const out: number[] = [];
  for (let i = 0; i < n; i++) {
    out.push(lo + ((hi - lo) * i) / (n - 1));
  }
  return out;
}

export function withSweptValue(
  draft: ScenarioDraft,
  parameter: SweepParameter,
  value: number,
): ScenarioDraft {
  return { ...draft, [parameter]: value };
}

export interface SweepRow {
  draft: ScenarioDraft;
  value: number;
  nPerGroup: number;
}

const cell = (value: number | string | null): string =>
  value === null || value === undefined ? '' : String(value);

export function sweepToCsv(rows: SweepRow[]): string {
  const lines = [CSV_HEADER];
  for (const { draft, nPerGroup } of rows) {
    lines.push(
      [
        draft.family,
        draft.family === 'exponential' ? '' : cell(draft.shape),
        cell(draft.scale0),
        cell(draft.censorHazard),
        draft.kind,
        draft.kind === 'non_inferiority' ? cell(draft.margin) : '',
        cell(draft.altHr),
        draft.family,
        cell(nPerGroup),
        '', // power: not simulated in a sweep
        '',
        '',
        '',
        '',
      ].join(','),
    );
  }
  return lines.join('\n');
}

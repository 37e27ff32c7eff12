/** Client-side validation mirroring the server's domain rules.
 *
 * Only admissibility is checked here; every number shown in the UI is
 * fetched from the API, never recomputed locally. An invalid draft must
 * not generate a request at all.
 */

import { ScenarioDraft } from './types.js';

export type FieldErrors = Partial<Record<keyof ScenarioDraft, string>>;

export function validateDraft(draft: ScenarioDraft): FieldErrors {
  const errors: FieldErrors = {};
  const positive = (value: number) => Number.isFinite(value) && value > 0;

  if (!positive(draft.altHr)) {
    errors.altHr = 'hazard ratio must be a positive number';
  }
  if (draft.kind === 'superiority') {
    if (positive(draft.altHr) && draft.altHr === 1) {
      errors.altHr = 'superiority needs an alternative away from 1';
    }
  } else {
    if (!(Number.isFinite(draft.margin) && draft.margin > 1)) {
      errors.margin = 'margin must exceed 1';
    } else if (positive(draft.altHr) && draft.altHr >= draft.margin) {
      errors.altHr = 'alternative ratio must lie below the margin';
    }
  }
  if (!(draft.alpha > 0 && draft.alpha < 1)) {
    errors.alpha = 'alpha must lie in (0, 1)';
  }
  if (!(draft.power > 0 && draft.power < 1)) {
    errors.power = 'power must lie in (0, 1)';
  }
  if (!positive(draft.scale0)) {
    errors.scale0 = 'scale must be positive';
  }
  if (draft.family !== 'exponential' && !positive(draft.shape)) {
    errors.shape = 'shape must be positive';
  }
  if (!(Number.isFinite(draft.censorHazard) && draft.censorHazard >= 0)) {
    errors.censorHazard = 'censoring hazard must be nonnegative';
  }
  if (!(Number.isFinite(draft.followup) && draft.followup >= 0)) {
    errors.followup = 'follow-up must be nonnegative';
  }
  if (!positive(draft.accrualDuration)) {
    errors.accrualDuration = 'accrual duration must be positive';
  }
  return errors;
}

export const isValid = (draft: ScenarioDraft): boolean =>
  Object.keys(validateDraft(draft)).length === 0;

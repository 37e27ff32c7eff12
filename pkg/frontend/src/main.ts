/** Browser wiring: forms in, API out, panels rendered.
 *
 * State is intentionally minimal: the draft being edited plus the
 * comparison list, both mirrored into the URL fragment so a reload (or
 * a shared link) restores them. Nothing numerical is computed here.
 */

import { ApiClient, InfeasibleTarget, RequestFailed } from './api.js';
import { DEBOUNCE_MS, RequestGate, debounce } from './latest.js';
import {
  renderComparePanel,
  renderDurationResult,
  renderFieldErrors,
  renderInfeasible,
  renderPowerPanel,
  renderProgress,
  renderRequestError,
  renderSizePanel,
  renderSweepChart,
} from './panels.js';
import { SweepParameter, sweepToCsv, sweepValues, withSweptValue } from './sweep.js';
import { SampleSizeResponse, ScenarioDraft, defaultDraft } from './types.js';
import { decodeDrafts, encodeDrafts } from './urlstate.js';
import { validateDraft } from './validate.js';

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const numberInput = (id: string): number => Number($<HTMLInputElement>(id).value);

function readDraft(): ScenarioDraft {
  return {
    label: ($<HTMLInputElement>('label')).value || 'scenario',
    kind: ($<HTMLSelectElement>('kind')).value as ScenarioDraft['kind'],
    altHr: numberInput('altHr'),
    margin: numberInput('margin'),
    alpha: numberInput('alpha'),
    power: numberInput('power'),
    family: ($<HTMLSelectElement>('family')).value as ScenarioDraft['family'],
    scale0: numberInput('scale0'),
    shape: numberInput('shape'),
    censorHazard: numberInput('censorHazard'),
    followup: numberInput('followup'),
    accrualDuration: numberInput('accrualDuration'),
  };
}

function writeDraft(draft: ScenarioDraft): void {
  ($<HTMLInputElement>('label')).value = draft.label;
  ($<HTMLSelectElement>('kind')).value = draft.kind;
  ($<HTMLInputElement>('altHr')).value = String(draft.altHr);
  ($<HTMLInputElement>('margin')).value = String(draft.margin);
  ($<HTMLInputElement>('alpha')).value = String(draft.alpha);
  ($<HTMLInputElement>('power')).value = String(draft.power);
  ($<HTMLSelectElement>('family')).value = draft.family;
  ($<HTMLInputElement>('scale0')).value = String(draft.scale0);
  ($<HTMLInputElement>('shape')).value = String(draft.shape);
  ($<HTMLInputElement>('censorHazard')).value = String(draft.censorHazard);
  ($<HTMLInputElement>('followup')).value = String(draft.followup);
  ($<HTMLInputElement>('accrualDuration')).value = String(draft.accrualDuration);
}

function syncHypothesisForm(): void {
  const superiority = ($<HTMLSelectElement>('kind')).value === 'superiority';
  $('margin-row').style.display = superiority ? 'none' : '';
  $('altHr-label').textContent = superiority
    ? 'alternative hazard ratio'
    : 'powered-at hazard ratio';
  $('shape-row').style.display =
    ($<HTMLSelectElement>('family')).value === 'exponential' ? 'none' : '';
}

function main(): void {
  const stored = window.localStorage.getItem('survplan-api-base') ?? '';
  ($<HTMLInputElement>('api-base')).value = stored;
  let api = new ApiClient(stored);
  const compare: { draft: ScenarioDraft; result: SampleSizeResponse }[] = [];

  const restored = decodeDrafts(window.location.hash);
  if (restored.length > 0) writeDraft(restored[0]);
  syncHypothesisForm();

  const sizeGate = new RequestGate();
  async function refreshSize(): Promise<void> {
    const draft = readDraft();
    window.location.hash = encodeDrafts([draft, ...compare.map((c) => c.draft)]);
    const errors = validateDraft(draft);
    $('size-errors').innerHTML = renderFieldErrors(errors);
    if (Object.keys(errors).length > 0) {
      return; // invalid drafts never generate a request
    }
    const token = sizeGate.begin();
    try {
      const result = await api.sampleSize(draft);
      if (sizeGate.isCurrent(token)) {
        $('size-panel').innerHTML = renderSizePanel(result);
      }
    } catch (err) {
      if (sizeGate.isCurrent(token)) {
        $('size-panel').innerHTML = renderRequestError(
          err instanceof RequestFailed ? err.info.detail : String(err),
        );
      }
    }
  }
  const debouncedRefresh = debounce(() => void refreshSize(), DEBOUNCE_MS);

  for (const id of [
    'kind', 'altHr', 'margin', 'alpha', 'power', 'family', 'scale0', 'shape',
    'censorHazard', 'followup', 'accrualDuration', 'label',
  ]) {
    $(id).addEventListener('input', () => {
      syncHypothesisForm();
      debouncedRefresh();
    });
  }

  $('api-base').addEventListener('change', () => {
    const base = ($<HTMLInputElement>('api-base')).value.replace(/\/$/, '');
    window.localStorage.setItem('survplan-api-base', base);
    api = new ApiClient(base);
    debouncedRefresh();
  });

  const sweepGate = new RequestGate();
  $('sweep-run').addEventListener('click', async () => {
    const draft = readDraft();
    if (Object.keys(validateDraft(draft)).length > 0) return;
    const parameter = ($<HTMLSelectElement>('sweep-parameter')).value as SweepParameter;
    const values = sweepValues(numberInput('sweep-lo'), numberInput('sweep-hi'));
    if (values.length === 0) {
      $('sweep-panel').innerHTML = renderRequestError('sweep range is empty');
      return;
    }
    const token = sweepGate.begin();
    $('sweep-panel').innerHTML = renderProgress(0);
    try {
      const rows = [];
      for (const value of values) {
        const point = withSweptValue(draft, parameter, value);
        const result = await api.sampleSize(point);
        rows.push({ draft: point, value, nPerGroup: result.n_per_group });
        if (!sweepGate.isCurrent(token)) return;
        $('sweep-panel').innerHTML = renderProgress(rows.length / values.length);
      }
      if (!sweepGate.isCurrent(token)) return;
      $('sweep-panel').innerHTML = renderSweepChart(parameter, rows);
      ($<HTMLTextAreaElement>('sweep-csv')).value = sweepToCsv(rows);
    } catch (err) {
      if (sweepGate.isCurrent(token)) {
        $('sweep-panel').innerHTML = renderRequestError(String(err));
      }
    }
  });

  $('duration-run').addEventListener('click', async () => {
    const draft = readDraft();
    if (Object.keys(validateDraft(draft)).length > 0) return;
    try {
      const result = await api.duration(draft, numberInput('n-target'));
      $('duration-panel').innerHTML = renderDurationResult(result);
    } catch (err) {
      if (err instanceof InfeasibleTarget) {
        $('duration-panel').innerHTML = renderInfeasible(err.info);
      } else {
        $('duration-panel').innerHTML = renderRequestError(String(err));
      }
    }
  });

  $('power-run').addEventListener('click', async () => {
    const draft = readDraft();
    if (Object.keys(validateDraft(draft)).length > 0) return;
    try {
      const size = await api.sampleSize(draft);
      const jobId = await api.submitPower(
        draft, size.n_per_group, numberInput('replicates'), numberInput('seed'),
      );
      $('power-panel').innerHTML = renderProgress(0);
      const record = await api.pollJob(jobId, (fraction) => {
        $('power-progress').innerHTML = renderProgress(fraction);
      });
      $('power-panel').innerHTML = renderPowerPanel(record, draft.power);
    } catch (err) {
      $('power-panel').innerHTML = renderRequestError(String(err));
    }
  });

  $('compare-add').addEventListener('click', async () => {
    const draft = readDraft();
    if (Object.keys(validateDraft(draft)).length > 0) return;
    const result = await api.sampleSize(draft);
    compare.push({ draft, result });
    $('compare-panel').innerHTML = renderComparePanel(compare);
    window.location.hash = encodeDrafts([draft, ...compare.map((c) => c.draft)]);
  });
  $('compare-clear').addEventListener('click', () => {
    compare.length = 0;
    $('compare-panel').innerHTML = renderComparePanel(compare);
  });
  $('compare-panel').addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    const col = target.getAttribute('data-col');
    if (col !== null && target.tagName === 'TH') {
      compare.splice(Number(col), 1); // click a column header to remove it
      $('compare-panel').innerHTML = renderComparePanel(compare);
    }
  });

  writeDraft(restored[0] ?? defaultDraft());
  syncHypothesisForm();
  void refreshSize();
}

document.addEventListener('DOMContentLoaded', main);

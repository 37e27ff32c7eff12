/** Typed client for the /api/v1 endpoints; the UI's only network access. */

import {
  ApiError,
  DurationResponse,
  InfeasibleResponse,
  JobRecord,
  SampleSizeResponse,
  ScenarioDraft,
} from './types.js';

/** Structural subset of fetch so tests can inject a fake. */
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export function designBody(draft: ScenarioDraft): Record<string, unknown> {
  const hypothesis =
    draft.kind === 'superiority'
      ? { type: 'superiority', alt_hr: draft.altHr }
      : { type: 'non_inferiority', margin: draft.margin, alt_hr: draft.altHr };
  const model: Record<string, unknown> =
    draft.family === 'exponential'
      ? { family: draft.family, scale0: draft.scale0 }
      : { family: draft.family, scale0: draft.scale0, shape: draft.shape };
  return {
    hypothesis,
    alpha: draft.alpha,
    power: draft.power,
    followup: draft.followup,
    accrual_duration: draft.accrualDuration,
    censor_hazard: draft.censorHazard,
    model,
  };
}

export function trialBody(draft: ScenarioDraft, nPerGroup: number): Record<string, unknown> {
  const model: Record<string, unknown> =
    draft.family === 'exponential'
      ? { family: draft.family, scale0: draft.scale0 }
      : { family: draft.family, scale0: draft.scale0, shape: draft.shape };
  return {
    n_per_group: nPerGroup,
    model,
    hazard_ratio: draft.altHr,
    censor_hazard: draft.censorHazard,
    followup: draft.followup,
    accrual_duration: draft.accrualDuration,
  };
}

export class RequestFailed extends Error {
  constructor(readonly info: ApiError) {
    super(info.detail);
  }
}

export class InfeasibleTarget extends Error {
  constructor(readonly info: InfeasibleResponse) {
    super(info.detail);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async post(path: string, body: unknown): Promise<unknown> {
    const res = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
    const payload = (await res.json()) as Record<string, unknown>;
    if (!res.ok) {
      const error = String(payload.error ?? 'request_failed');
      if (error.startsWith('infeasible_')) {
        throw new InfeasibleTarget(payload as unknown as InfeasibleResponse);
      }
      throw new RequestFailed({
        status: res.status,
        error,
        detail: String(payload.detail ?? res.status),
        path: payload.path as string | undefined,
      });
    }
    return payload;
  }

  private async get(path: string): Promise<unknown> {
    const res = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`);
    const payload = (await res.json()) as Record<string, unknown>;
    if (!res.ok) {
      throw new RequestFailed({
        status: res.status,
        error: String(payload.error ?? 'request_failed'),
        detail: String(payload.detail ?? res.status),
      });
    }
    return payload;
  }

  health(): Promise<{ status: string; version: string }> {
    return this.get('/health') as Promise<{ status: string; version: string }>;
  }

  sampleSize(draft: ScenarioDraft): Promise<SampleSizeResponse> {
    return this.post('/sample-size', designBody(draft)) as Promise<SampleSizeResponse>;
  }

  duration(draft: ScenarioDraft, nTarget: number): Promise<DurationResponse> {
    return this.post('/duration', {
      design: designBody(draft),
      n_target: nTarget,
    }) as Promise<DurationResponse>;
  }

  async submitPower(
    draft: ScenarioDraft,
    nPerGroup: number,
    replicates: number,
    seed: number,
  ): Promise<string> {
    const hypothesis =
      draft.kind === 'superiority'
        ? { type: 'superiority', alt_hr: draft.altHr }
        : { type: 'non_inferiority', margin: draft.margin, alt_hr: draft.altHr };
    const payload = (await this.post('/power', {
      trial: trialBody(draft, nPerGroup),
      hypothesis,
      alpha: draft.alpha,
      replicates,
      seed,
    })) as { job_id: string };
    return payload.job_id;
  }

  job(jobId: string): Promise<JobRecord> {
    return this.get(`/jobs/${jobId}`) as Promise<JobRecord>;
  }

  /** Poll a job to completion, reporting monotone progress along the way. */
  async pollJob(
    jobId: string,
    onProgress: (fraction: number) => void,
    intervalMs = 400,
    sleep: (ms: number) => Promise<void> = (ms) => new Promise((r) => setTimeout(r, ms)),
  ): Promise<JobRecord> {
    let last = 0;
    for (;;) {
      const record = await this.job(jobId);
      last = Math.max(last, record.progress);
      onProgress(last);
      if (record.state === 'done' || record.state === 'failed') {
        return record;
      }
      await sleep(intervalMs);
    }
  }
}

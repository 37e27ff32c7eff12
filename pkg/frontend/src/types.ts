/** Shared shapes for drafts and API payloads (mirrors /api/v1 bodies). */

export type Family = 'exponential' | 'weibull' | 'gompertz';
export type HypothesisKind = 'superiority' | 'non_inferiority';

/** Client-side scenario being edited; never used for local computation. */
export interface ScenarioDraft {
  label: string;
  kind: HypothesisKind;
  /** alternative hazard ratio (superiority) / powered-at ratio (NT) */
  altHr: number;
  /** non-inferiority margin; only meaningful when kind is non_inferiority */
  margin: number;
  alpha: number;
  power: number;
  family: Family;
  scale0: number;
  /** shape parameter; ignored for the exponential family */
  shape: number;
  censorHazard: number;
  followup: number;
  accrualDuration: number;
}

export interface SampleSizeResponse {
  n_per_group: number;
  n_total: number;
  e0: number;
  e1: number;
  ets: number;
  expected_events: number;
}

export interface DurationResponse {
  followup: number;
  accrual_duration: number;
  total_duration: number;
}

export interface InfeasibleResponse {
  error: string; // infeasible_below | infeasible_above
  detail: string;
  n_target: number;
  lower_bound: number;
  upper_bound: number;
}

export interface JobRecord {
  id: string;
  state: 'queued' | 'running' | 'done' | 'failed';
  progress: number;
  result: {
    replicates: number;
    rejections: number;
    non_converged: number;
    power: number;
    se: number;
  } | null;
  error: string | null;
}

export interface ApiError {
  status: number;
  error: string;
  detail: string;
  path?: string;
}

export const defaultDraft = (): ScenarioDraft => ({
  label: 'scenario',
  kind: 'non_inferiority',
  altHr: 1.0,
  margin: 1.4,
  alpha: 0.05,
  power: 0.8,
  family: 'exponential',
  scale0: 0.139,
  shape: 1.0,
  censorHazard: 0.0,
  followup: 24,
  accrualDuration: 22,
});

"""JSON-over-HTTP API for the design computations.

Sample-size and duration calls are synchronous; power simulations run as
pollable jobs because a 10,000-replicate loop is far beyond interactive
latency. All bodies live under /api/v1. Schema violations return 400
with the offending field path; domain violations (including infeasible
duration targets) return 422. The job store is in memory: a restart
forgets jobs, and clients should treat a 404 after resubmitting as
"submit again".

The number of concurrently computing jobs is capped by SURVPLAN_THREADS
(default 2); job state updates are atomic and polling never blocks a
worker.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .config import (
    ConfigError,
    DomainError,
    parse_design,
    parse_hypothesis,
    parse_trial,
)
from .design import (
    InfeasibleTargetError,
    NoObservableEventsError,
    required_sample_size,
    solve_followup_duration,
)
from .numerics import QuadratureError
from .simulator import empirical_power

__all__ = ["create_app", "JobStore"]


@dataclass
class JobRecord:
    id: str
    state: str = "queued"  # queued -> running -> done | failed
    total: int = 0
    completed: int = 0
    result: dict | None = None
    error: str | None = None

    @property
    def progress(self) -> float:
        if self.total <= 0:
            return 0.0
        return min(1.0, self.completed / self.total)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "state": self.state,
            "progress": self.progress,
            "result": self.result,
            "error": self.error,
        }


class JobStore:
    """Thread-safe in-memory job registry."""

    def __init__(self, max_workers: int):
        self._lock = threading.Lock()
        self._jobs: dict[str, JobRecord] = {}
        self._slots = threading.Semaphore(max_workers)

    def create(self, total: int) -> JobRecord:
        job = JobRecord(id=uuid.uuid4().hex, total=total)
        with self._lock:
            self._jobs[job.id] = job
        return job

    def get(self, job_id: str) -> JobRecord | None:
        with self._lock:
            return self._jobs.get(job_id)

    def update(self, job_id: str, **fields) -> None:
        with self._lock:
            job = self._jobs[job_id]
            for key, value in fields.items():
                setattr(job, key, value)

    def bump_progress(self, job_id: str, completed: int) -> None:
        with self._lock:
            job = self._jobs[job_id]
            job.completed = max(job.completed, completed)

    def run(self, job_id: str, spec, hypothesis, alpha, replicates, seed) -> None:
        def work():
            with self._slots:
                self.update(job_id, state="running")
                try:
                    estimate = empirical_power(
                        spec,
                        hypothesis,
                        alpha=alpha,
                        replicates=replicates,
                        master_seed=seed,
                        progress=lambda done: self.bump_progress(job_id, done),
                    )
                except Exception as exc:  # job failure is a result, not a crash
                    self.update(job_id, state="failed", error=str(exc))
                    return
                self.update(
                    job_id,
                    state="done",
                    completed=replicates,
                    result={
                        "replicates": estimate.replicates,
                        "rejections": estimate.rejections,
                        "non_converged": estimate.non_converged,
                        "power": estimate.power,
                        "se": estimate.se,
                    },
                )

        threading.Thread(target=work, daemon=True).start()


def _error(status: int, payload: dict) -> JSONResponse:
    return JSONResponse(status_code=status, content=payload)


def _worker_cap() -> int:
    env = os.environ.get("SURVPLAN_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return 2


def create_app() -> FastAPI:
    app = FastAPI(title="survplan", version=__version__)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    jobs = JobStore(max_workers=_worker_cap())
    app.state.jobs = jobs

    @app.exception_handler(ConfigError)
    async def _schema_error(request: Request, exc: ConfigError):
        return _error(400, {"error": "schema_violation", "path": exc.path, "detail": str(exc)})

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError):
        return _error(422, {"error": "domain_violation", "path": exc.path, "detail": str(exc)})

    async def _body(request: Request) -> dict:
        try:
            doc = await request.json()
        except Exception:
            raise ConfigError("body", "request body must be JSON")
        if not isinstance(doc, dict):
            raise ConfigError("body", "request body must be a JSON object")
        return doc

    @app.get("/api/v1/health")
    async def health():
        return {"status": "ready", "version": __version__}

    @app.post("/api/v1/sample-size")
    async def sample_size(request: Request):
        doc = await _body(request)
        design = parse_design(doc, path="body")
        try:
            result = required_sample_size(design)
        except (NoObservableEventsError, QuadratureError) as exc:
            return _error(422, {"error": "computation_failed", "detail": str(exc)})
        return {
            "n_per_group": result.n_per_group,
            "n_total": result.n_total,
            "e0": result.e0,
            "e1": result.e1,
            "ets": result.ets,
            "expected_events": result.expected_events,
        }

    @app.post("/api/v1/duration")
    async def duration(request: Request):
        doc = await _body(request)
        if "design" not in doc:
            raise ConfigError("body.design", "missing required key")
        if "n_target" not in doc:
            raise ConfigError("body.n_target", "missing required key")
        unknown = set(doc) - {"design", "n_target"}
        if unknown:
            raise ConfigError("body", f"unknown keys: {sorted(unknown)}")
        n_target = doc["n_target"]
        if isinstance(n_target, bool) or not isinstance(n_target, (int, float)):
            raise ConfigError("body.n_target", f"expected a number, got {n_target!r}")
        design = parse_design(doc["design"], path="body.design", require_followup=False)
        try:
            followup = solve_followup_duration(float(n_target), design)
        except InfeasibleTargetError as exc:
            return _error(
                422,
                {
                    "error": f"infeasible_{exc.kind}",
                    "detail": str(exc),
                    "n_target": exc.n_target,
                    "lower_bound": exc.lower_bound,
                    "upper_bound": exc.upper_bound,
                },
            )
        except (NoObservableEventsError, QuadratureError) as exc:
            return _error(422, {"error": "computation_failed", "detail": str(exc)})
        return {
            "followup": followup,
            "accrual_duration": design.window.accrual_duration,
            "total_duration": followup + design.window.accrual_duration,
        }

    @app.post("/api/v1/power", status_code=202)
    async def submit_power(request: Request):
        doc = await _body(request)
        allowed = {"trial", "hypothesis", "alpha", "replicates", "seed"}
        unknown = set(doc) - allowed
        if unknown:
            raise ConfigError("body", f"unknown keys: {sorted(unknown)}")
        missing = {"trial", "hypothesis"} - set(doc)
        if missing:
            raise ConfigError("body", f"missing required keys: {sorted(missing)}")
        spec = parse_trial(doc["trial"], path="body.trial")
        hypothesis = parse_hypothesis(doc["hypothesis"], path="body.hypothesis")
        alpha = doc.get("alpha", 0.05)
        replicates = doc.get("replicates", 2000)
        seed = doc.get("seed", 0)
        if isinstance(replicates, bool) or not isinstance(replicates, int) or replicates < 1:
            raise ConfigError("body.replicates", f"expected a positive integer, got {replicates!r}")
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigError("body.seed", f"expected an integer, got {seed!r}")
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not 0 < alpha < 1:
            raise ConfigError("body.alpha", f"expected a number in (0, 1), got {alpha!r}")
        job = jobs.create(total=replicates)
        jobs.run(job.id, spec, hypothesis, float(alpha), replicates, seed)
        return {"job_id": job.id}

    @app.get("/api/v1/jobs/{job_id}")
    async def job_status(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return _error(404, {"error": "unknown_job", "detail": f"no job {job_id!r}"})
        return job.to_json()

    return app

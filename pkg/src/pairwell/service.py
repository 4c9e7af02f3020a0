"""FastAPI service exposing the simulator to multiple clients.

Synchronous endpoints compute in-request (fine for spectra and small runs);
the ``/api/jobs`` endpoints accept any verb and run it on a worker thread so
long sweeps can be submitted and polled.
"""
from __future__ import annotations

import threading
import traceback
import uuid
from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .api import (FrequencyTableRequest, FrequencyTableResponse,
                  OptimalPhaseRequest, OptimalPhaseResponse, PhaseSweepRequest,
                  PhaseSweepResponse, SimulateRequest, SimulateResponse,
                  SpectrumRequest, SpectrumResponse, VERB_HANDLERS,
                  handle_frequency_table, handle_optimal_phase,
                  handle_phase_sweep, handle_simulate, handle_spectrum)
from .errors import PairwellError


class JobSubmit(BaseModel):
    verb: str
    payload: dict = {}


class JobStatus(BaseModel):
    job_id: str
    verb: str
    state: str  # queued | running | done | failed
    error: str | None = None


class _Job:
    def __init__(self, verb: str):
        self.id = uuid.uuid4().hex
        self.verb = verb
        self.state = "queued"
        self.error: str | None = None
        self.result: Any = None


class JobStore:
    def __init__(self):
        self._jobs: dict[str, _Job] = {}
        self._lock = threading.Lock()

    def submit(self, verb: str, payload: dict) -> _Job:
        if verb not in VERB_HANDLERS:
            raise KeyError(verb)
        request_model, handler = VERB_HANDLERS[verb]
        request = request_model.model_validate(payload)
        job = _Job(verb)
        with self._lock:
            self._jobs[job.id] = job

        def work():
            job.state = "running"
            try:
                job.result = handler(request)
                job.state = "done"
            except Exception as exc:
                job.error = f"{type(exc).__name__}: {exc}"
                job.state = "failed"
                traceback.print_exc()

        threading.Thread(target=work, daemon=True).start()
        return job

    def get(self, job_id: str) -> _Job:
        with self._lock:
            if job_id not in self._jobs:
                raise KeyError(job_id)
            return self._jobs[job_id]


def create_app() -> FastAPI:
    app = FastAPI(title="pairwell", version=__version__,
                  description="Pair creation in an oscillating Sauter well")
    jobs = JobStore()

    @app.exception_handler(PairwellError)
    async def _pairwell_error(_, exc: PairwellError):
        from fastapi.responses import JSONResponse
        status = {2: 422, 3: 500, 4: 507}.get(exc.exit_code, 500)
        return JSONResponse(status_code=status,
                            content={"detail": str(exc),
                                     "category": type(exc).__name__})

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/api/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        return handle_simulate(req)

    @app.post("/api/spectrum", response_model=SpectrumResponse)
    def spectrum(req: SpectrumRequest) -> SpectrumResponse:
        return handle_spectrum(req)

    @app.post("/api/sweep/phase", response_model=PhaseSweepResponse)
    def sweep_phase(req: PhaseSweepRequest) -> PhaseSweepResponse:
        return handle_phase_sweep(req)

    @app.post("/api/sweep/table", response_model=FrequencyTableResponse)
    def sweep_table(req: FrequencyTableRequest) -> FrequencyTableResponse:
        return handle_frequency_table(req)

    @app.post("/api/sweep/optimal-phase", response_model=OptimalPhaseResponse)
    def sweep_optimal(req: OptimalPhaseRequest) -> OptimalPhaseResponse:
        return handle_optimal_phase(req)

    @app.post("/api/jobs", response_model=JobStatus, status_code=202)
    def submit_job(req: JobSubmit) -> JobStatus:
        try:
            job = jobs.submit(req.verb, req.payload)
        except KeyError:
            raise HTTPException(status_code=422,
                                detail=f"unknown verb {req.verb!r}; "
                                       f"known: {sorted(VERB_HANDLERS)}")
        return JobStatus(job_id=job.id, verb=job.verb, state=job.state)

    @app.get("/api/jobs/{job_id}", response_model=JobStatus)
    def job_status(job_id: str) -> JobStatus:
        try:
            job = jobs.get(job_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="no such job")
        return JobStatus(job_id=job.id, verb=job.verb, state=job.state,
                         error=job.error)

    @app.get("/api/jobs/{job_id}/result")
    def job_result(job_id: str):
        try:
            job = jobs.get(job_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="no such job")
        if job.state == "failed":
            raise HTTPException(status_code=500, detail=job.error)
        if job.state != "done":
            raise HTTPException(status_code=409, detail=f"job is {job.state}")
        return job.result

    return app


app = create_app()

"""FastAPI application exposing the simulator as a service.

Run with `dcfsim serve` or `uvicorn dcfsim.service.app:app`.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..errors import ConfigError, InternalError
from . import handlers, models

app = FastAPI(
    title="dcfsim",
    description="IEEE 802.11 DCF discrete-event simulator with an analytical "
                "saturation oracle",
    version="0.1.0",
)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/simulate", response_model=models.SimulateResponse)
def simulate(req: models.SimulateRequest) -> models.SimulateResponse:
    try:
        return handlers.simulate(req)
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except InternalError as exc:
        raise HTTPException(status_code=500, detail=str(exc))


@app.post("/sweep", response_model=models.SweepResponse)
def sweep(req: models.SweepRequest) -> models.SweepResponse:
    try:
        return handlers.sweep(req)
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except InternalError as exc:
        raise HTTPException(status_code=500, detail=str(exc))


@app.post("/oracle", response_model=models.OracleResponse)
def oracle(req: models.OracleRequest) -> models.OracleResponse:
    try:
        return handlers.oracle(req)
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except InternalError as exc:
        raise HTTPException(status_code=500, detail=str(exc))

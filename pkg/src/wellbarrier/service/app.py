"""FastAPI routes over the solver handlers."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..oracle import OracleMismatchError
from ..spectrum import SpectrumAuditError
from . import handlers
from .schemas import (
    OracleParams,
    OracleResponse,
    SpecialParams,
    SpecialResponse,
    SpectrumParams,
    SpectrumResponse,
    TableParams,
    TableResponse,
    WavefunctionParams,
    WavefunctionResponse,
)

__all__ = ["app"]

app = FastAPI(
    title="wellbarrier",
    description="Bound states of an anti-symmetric square well/barrier between "
                "rigid walls, with zero-energy and barrier-top special states "
                "and a finite-difference cross-check.",
)


def _wrap(fn, params):
    try:
        return fn(params)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except (SpectrumAuditError, OracleMismatchError) as exc:
        raise HTTPException(status_code=409, detail=str(exc))


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/spectrum", response_model=SpectrumResponse)
def post_spectrum(params: SpectrumParams):
    return _wrap(handlers.spectrum_response, params)


@app.post("/special", response_model=SpecialResponse)
def post_special(params: SpecialParams):
    return _wrap(handlers.special_response, params)


@app.post("/wavefunction", response_model=WavefunctionResponse)
def post_wavefunction(params: WavefunctionParams):
    return _wrap(handlers.wavefunction_response, params)


@app.post("/oracle", response_model=OracleResponse)
def post_oracle(params: OracleParams):
    return _wrap(handlers.oracle_response, params)


@app.post("/table1", response_model=TableResponse)
def post_table(params: TableParams):
    return _wrap(handlers.table_response, params)

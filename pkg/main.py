import logging
import time
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import uvicorn
from fastapi import APIRouter, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, ValidationError, model_validator

from pdmkepler.config import VERSION, configure_logging
from pdmkepler.errors import PdmKeplerError, PhysicsDomainError
from pdmkepler.model import ModelParams, QuantumNumbers, binding_regime
from pdmkepler.spectrum import energy_exact
from pdmkepler.tables import json_rows, spectrum_table

configure_logging()
logger = logging.getLogger(__name__)

request_count = 0
start_time = time.time()

MAX_N = 20


class ParamsBody(BaseModel):
    """Coupling plus exactly one of a or a_bar."""
    alpha: float = Field(..., ge=0.0, examples=[0.0072973525693], description="Fine-structure constant")
    a: Optional[float] = Field(None, examples=[0.0], description="Mass parameter in Compton lengths")
    a_bar: Optional[float] = Field(None, description="Mass parameter in classical electron radii")

    @model_validator(mode="after")
    def _one_mass_parameter(self):
        if (self.a is None) == (self.a_bar is None):
            raise ValueError("give exactly one of a and a_bar")
        return self

    def params(self) -> ModelParams:
        if self.a_bar is not None:
            return ModelParams.from_a_bar(self.alpha, self.a_bar)
        return ModelParams(alpha=self.alpha, a=self.a)


class LevelRequest(ParamsBody):
    n_r: int = Field(..., ge=0, examples=[0], description="Radial quantum number")
    l: int = Field(..., ge=0, examples=[0], description="Orbital quantum number")
    two_j: int = Field(..., ge=1, examples=[1], description="Twice the total angular momentum")


class LevelResponse(BaseModel):
    label: str = Field(..., description="Spectroscopic label such as 2P1/2")
    l_star: float
    n_star: float
    e_star_sq: float
    epsilon: float = Field(..., description="Energy in units of mc^2")
    regime: str = Field(..., description="bound or single-level")


class SpectrumRequest(ParamsBody):
    n_max: int = Field(2, ge=1, le=MAX_N, description="Largest principal quantum number")


class SpectrumResponse(BaseModel):
    alpha: float
    a: float
    regime: str
    rows: List[Dict[str, Any]]


class HealthResponse(BaseModel):
    """Response model for health check."""
    status: str = Field(..., description="Service health status")
    timestamp: str = Field(..., description="Current timestamp")
    version: str = Field(..., description="API version")
    uptime_seconds: float = Field(..., description="Service uptime in seconds")
    request_count: int = Field(..., description="Requests served since start")


app = FastAPI(
    title="PDM Kepler Spectrum API",
    description="Exact relativistic Kepler levels for a particle with mass m*(r) = m(1 + a/r)",
    version=VERSION,
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

api_v1 = APIRouter(prefix="/v1", tags=["v1"])


@app.middleware("http")
async def log_requests(request: Request, call_next):
    global request_count
    started = time.time()
    logger.info(f"Request: {request.method} {request.url}")
    request_count += 1
    response = await call_next(request)
    logger.info(f"Response: {response.status_code} - Time: {time.time() - started:.4f}s")
    return response


@app.exception_handler(PhysicsDomainError)
async def physics_domain_handler(request: Request, exc: PhysicsDomainError):
    logger.warning(f"Physics domain error on {request.url.path}: {exc}")
    return JSONResponse(status_code=422, content={"detail": str(exc), "error": type(exc).__name__})


@app.exception_handler(ValidationError)
async def validation_handler(request: Request, exc: ValidationError):
    logger.warning(f"Invalid quantum numbers on {request.url.path}: {exc}")
    return JSONResponse(status_code=422, content={"detail": str(exc), "error": "ValidationError"})


@app.exception_handler(PdmKeplerError)
async def library_error_handler(request: Request, exc: PdmKeplerError):
    logger.error(f"Computation failed on {request.url.path}: {exc}")
    return JSONResponse(status_code=500, content={"detail": str(exc), "error": type(exc).__name__})


@app.get("/", response_model=Dict[str, Any])
async def get_root():
    """Service information."""
    return {
        "message": "PDM Kepler spectrum service",
        "version": VERSION,
        "docs_url": "/docs",
        "health_check": "/v1/health",
        "endpoints": ["/v1/level", "/v1/spectrum"],
    }


@api_v1.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint for monitoring."""
    return HealthResponse(
        status="healthy",
        timestamp=datetime.now(timezone.utc).isoformat(),
        version=VERSION,
        uptime_seconds=time.time() - start_time,
        request_count=request_count,
    )


@api_v1.post("/level", response_model=LevelResponse)
async def level(body: LevelRequest):
    """Exact energy of one level."""
    params = body.params()
    qn = QuantumNumbers(n_r=body.n_r, l=body.l, two_j=body.two_j)
    result = energy_exact(params, qn)
    logger.info(f"Level {qn.label} alpha={params.alpha} a={params.a}: epsilon={result.epsilon!r}")
    return LevelResponse(
        label=qn.label,
        l_star=result.l_star,
        n_star=result.n_star,
        e_star_sq=result.e_star_sq,
        epsilon=result.epsilon,
        regime=binding_regime(params),
    )


@api_v1.post("/spectrum", response_model=SpectrumResponse)
async def spectrum(body: SpectrumRequest):
    """All levels with n <= n_max, ordered by (n, l, j)."""
    params = body.params()
    frame = spectrum_table(params, body.n_max)
    return SpectrumResponse(
        alpha=params.alpha, a=params.a, regime=binding_regime(params), rows=json_rows(frame)
    )


app.include_router(api_v1)

if __name__ == "__main__":
    uvicorn.run(
        "main:app",
        host="0.0.0.0",
        port=8000,
        reload=True,
        log_level="info"
    )

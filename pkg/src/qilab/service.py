"""HTTP facade over the core package.

Every endpoint is a thin, stateless wrapper: validate the request with a
pydantic model, call the corresponding core function, and return a typed
response.  The CLI reuses the same handlers in-process, so the service and
the command line cannot drift apart.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .dense_engine import HamiltonianParams, haar_unitary, hamiltonian_unitary, brickwork_unitary
from .harness import (
    ExperimentSpec,
    QmiSeries,
    estimate_lifetime,
    q2c_mutual_info,
    rng_stream,
    run,
)
from .shapes import SystemShape
from .spectrum import build_superoperator, spectrum_of
from .theory import CURVE_KINDS, TheoryCurve

app = FastAPI(title="qilab", version=__version__)


class SeriesResponse(BaseModel):
    t: list[int]
    mean_qmi_bits: list[float]
    stderr: list[float]
    n_traj: int
    entropy_kind: str
    metadata: dict = Field(default_factory=dict)

    @classmethod
    def from_series(cls, series: QmiSeries) -> "SeriesResponse":
        return cls(
            t=series.t,
            mean_qmi_bits=series.mean,
            stderr=series.stderr,
            n_traj=series.n_traj,
            entropy_kind=series.entropy_kind,
            metadata=series.metadata,
        )

    def to_series(self) -> QmiSeries:
        return QmiSeries(
            t=self.t,
            mean=self.mean_qmi_bits,
            stderr=self.stderr,
            n_traj=self.n_traj,
            entropy_kind=self.entropy_kind,
            metadata=self.metadata,
        )


class TheoryRequest(BaseModel):
    kind: str
    params: dict[str, float]
    t_max: int = Field(32, ge=0)


class TheoryResponse(BaseModel):
    kind: str
    t: list[int]
    qmi_bits: list[float]
    valid: list[bool]


class ChannelRequest(BaseModel):
    """One fixed unitary draw and the reset rule defining the channel."""

    n_a: int = Field(ge=1)
    n_b: int = Field(ge=0)
    ensemble: Literal["haar", "ising", "mfim", "brickwork"] = "haar"
    reset: Literal["pure-zero", "none", "fully-mixed"] = "pure-zero"
    layers: int = Field(4, ge=0)
    t_h: float = Field(50.0, gt=0)
    seed: int = 0

    def draw_unitary(self) -> np.ndarray:
        rng = rng_stream(self.seed, 0)
        n = self.n_a + self.n_b
        if self.ensemble == "haar":
            return haar_unitary(2**n, rng)
        if self.ensemble == "ising":
            return hamiltonian_unitary(HamiltonianParams.random_ising(n, rng, self.t_h), n)
        if self.ensemble == "mfim":
            return hamiltonian_unitary(HamiltonianParams.mfim(n, self.t_h), n)
        return brickwork_unitary(n, self.layers, rng)


class SpectrumResponse(BaseModel):
    eigenvalues_re: list[float]
    eigenvalues_im: list[float]
    lambda1_re: float
    lambda1_im: float
    lambda1_modulus: float
    tau_eig: float | None  # None when the memory time is unbounded
    bulk_radius_estimate: float


class Q2CRequest(BaseModel):
    spec: ExperimentSpec
    mode: Literal["conditioned", "unconditioned"] = "conditioned"
    source: Literal["exact-distribution", "sampled"] = "exact-distribution"
    shots: int = Field(1024, ge=1)


class LifetimeRequest(BaseModel):
    series: SeriesResponse
    epsilon: float = Field(0.25, gt=0, lt=1)


class LifetimeResponse(BaseModel):
    tau: float
    censored: bool
    horizon: int


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/theory/kinds")
def theory_kinds() -> dict:
    return {"kinds": list(CURVE_KINDS)}


@app.post("/simulate", response_model=SeriesResponse)
def simulate(spec: ExperimentSpec) -> SeriesResponse:
    try:
        return SeriesResponse.from_series(run(spec))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.post("/theory", response_model=TheoryResponse)
def theory_curve(req: TheoryRequest) -> TheoryResponse:
    times = list(range(req.t_max + 1))
    try:
        curve = TheoryCurve.evaluate(req.kind, req.params, times)
    except (KeyError, ValueError, TypeError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return TheoryResponse(
        kind=req.kind,
        t=times,
        qmi_bits=[curve.values[t] for t in times],
        valid=[curve.valid[t] for t in times],
    )


@app.post("/spectrum", response_model=SpectrumResponse)
def channel_spectrum(req: ChannelRequest) -> SpectrumResponse:
    shape = SystemShape(0, req.n_a, req.n_b)
    try:
        u = req.draw_unitary()
        spec = spectrum_of(build_superoperator(u, shape, req.reset))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return SpectrumResponse(
        eigenvalues_re=[float(x) for x in spec.eigenvalues.real],
        eigenvalues_im=[float(x) for x in spec.eigenvalues.imag],
        lambda1_re=spec.lambda1.real,
        lambda1_im=spec.lambda1.imag,
        lambda1_modulus=abs(spec.lambda1),
        tau_eig=spec.tau_eig if math.isfinite(spec.tau_eig) else None,
        bulk_radius_estimate=spec.bulk_radius_estimate,
    )


@app.post("/q2c", response_model=SeriesResponse)
def q2c(req: Q2CRequest) -> SeriesResponse:
    try:
        series = q2c_mutual_info(req.spec, mode=req.mode, source=req.source, shots=req.shots)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return SeriesResponse.from_series(series)


@app.post("/lifetime", response_model=LifetimeResponse)
def lifetime(req: LifetimeRequest) -> LifetimeResponse:
    try:
        est = estimate_lifetime(req.series.to_series(), req.epsilon)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return LifetimeResponse(tau=est.tau, censored=est.censored, horizon=est.horizon)

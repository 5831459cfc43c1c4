"""Configuration-driven experiment runner.

Turns a declarative :class:`ExperimentSpec` into trajectory ensembles on
the stabilizer or dense engine, aggregates per-step quantum mutual
information (QMI) into a :class:`QmiSeries`, estimates lifetimes, computes
quantum-to-classical (Q2C) mutual information, and persists everything as
versioned CSV/JSON artifacts.  Suites pair experiments with closed-form
curves from :mod:`qilab.theory` and emit a pass/fail report.

Randomness is fully reproducible: every trajectory draws from its own
stream derived from ``(seed, trajectory index)`` via ``SeedSequence``
spawn keys, so results are independent of execution order.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from . import __version__
from .dense_engine import (
    DenseState,
    HamiltonianParams,
    InitialStateSpec,
    apply_unitary_vec,
    brickwork_unitary,
    evolve_and_measure,
    haar_unitary,
    hamiltonian_unitary,
    make_initial_state,
    qmi,
    reduced_density_matrix,
)
from .paulis import random_clifford
from .shapes import SystemShape
from .spectrum import ChannelSpectrum
from .stab_engine import bell_pairs_init, run_step
from .theory import TheoryCurve

FORMAT_VERSION = "1"

CSV_HEADER = ["t", "mean_qmi_bits", "stderr", "n_traj", "entropy_kind"]


def rng_stream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for a (seed, index...) derivation path."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(path)))


class InitialSpec(BaseModel):
    family: Literal["bell-pairs", "perturbed-haar", "cq-state"] = "bell-pairs"
    delta: float = 0.0
    probe_a: float | None = None
    warmup_steps: int = Field(0, ge=0)


class ExperimentSpec(BaseModel):
    """Everything needed to reproduce one experiment deterministically."""

    name: str = "experiment"
    n_r: int = Field(ge=0)
    n_a: int = Field(ge=1)
    n_b: int = Field(ge=0)
    engine: Literal["stabilizer", "dense"] = "stabilizer"
    ensemble: Literal["clifford", "haar", "ising", "mfim", "brickwork"] = "clifford"
    layers: int = Field(4, ge=0)  # brickwork depth per step
    t_h: float = Field(50.0, gt=0)  # Hamiltonian evolution time per step
    identical_unitary: bool = False
    monitoring: Literal["monitored", "unmonitored", "partial"] = "monitored"
    erase_period: int | None = None  # steps between erasures (partial)
    erase_qubits: int | None = None  # bath qubits erased per erasure step
    reset: Literal["pure-zero", "none", "fully-mixed"] = "pure-zero"
    initial: InitialSpec = Field(default_factory=InitialSpec)
    steps: int = Field(8, ge=0)
    trajectories: int = Field(10, ge=1)
    entropy: Literal["von-neumann", "renyi2"] = "von-neumann"
    #: "mean" averages trajectory QMI directly; "purity-mean" reports
    #: -2 log2 of the averaged root purity ratio 2^{-I/2}, the replica
    #: average the closed-form curves describe (no Jensen gap)
    estimator: Literal["mean", "purity-mean"] = "mean"
    seed: int = 0
    epsilon: float = Field(0.25, gt=0, lt=1)

    @property
    def shape(self) -> SystemShape:
        return SystemShape(self.n_r, self.n_a, self.n_b)

    @model_validator(mode="after")
    def _check(self) -> "ExperimentSpec":
        SystemShape(self.n_r, self.n_a, self.n_b)  # shape invariants
        if self.engine == "stabilizer":
            if self.ensemble != "clifford":
                raise ValueError("stabilizer engine requires the clifford ensemble")
            if self.initial.family != "bell-pairs":
                raise ValueError("stabilizer engine requires bell-pairs initial state")
        else:
            if self.ensemble == "clifford":
                raise ValueError("dense engine expects a non-Clifford ensemble")
        if self.monitoring == "partial":
            if self.engine != "stabilizer":
                raise ValueError("partial monitoring is implemented on the stabilizer engine")
            if self.erase_period is None or self.erase_period < 1:
                raise ValueError("partial monitoring needs erase_period >= 1")
            if self.erase_qubits is None or not 1 <= self.erase_qubits <= self.n_b:
                raise ValueError("partial monitoring needs 1 <= erase_qubits <= n_b")
        if self.reset == "fully-mixed" and self.monitoring != "unmonitored":
            raise ValueError("fully-mixed reset requires unmonitored dynamics")
        if self.engine == "stabilizer" and self.monitoring == "unmonitored":
            if self.reset != "pure-zero":
                raise ValueError("stabilizer unmonitored runs support pure-zero reset only")
        if self.engine == "dense":
            total = self.n_r + self.n_a + self.n_b
            if total > 14:
                raise ValueError(f"dense runs limited to 14 qubits, got {total}")
            if self.monitoring == "unmonitored" and total > 10:
                raise ValueError(
                    f"dense density-matrix runs limited to 10 qubits, got {total}"
                )
            if self.monitoring == "monitored" and self.initial.family not in (
                "bell-pairs",
                "perturbed-haar",
            ):
                raise ValueError("monitored dense runs need a pure initial state")
        return self


@dataclass
class QmiSeries:
    """Per-step mean QMI with uncertainty across trajectories/draws."""

    t: list[int]
    mean: list[float]
    stderr: list[float]
    n_traj: int
    entropy_kind: str
    metadata: dict = field(default_factory=dict)

    def validate(self, cap_bits: float | None = None) -> None:
        for m, s in zip(self.mean, self.stderr):
            if m < -1e-9 or s < 0:
                raise ValueError("series values out of range")
            if cap_bits is not None and m > cap_bits + 3 * s + 1e-9:
                raise ValueError(f"mean {m} exceeds cap {cap_bits} + 3 stderr")


def _aggregate(per_t: list[list[float]], spec: ExperimentSpec, **metadata) -> QmiSeries:
    means, errs = [], []
    for vals in per_t:
        arr = np.asarray(vals, dtype=float)
        if spec.estimator == "purity-mean":
            g = 2.0 ** (-arr / 2)
            gm = float(g.mean())
            means.append(-2.0 * math.log2(gm))
            if len(arr) > 1:
                # delta method: d/dg (-2 log2 g) = -2 / (g ln 2)
                errs.append(
                    float(2.0 / math.log(2) * g.std(ddof=1) / math.sqrt(len(arr)) / gm)
                )
            else:
                errs.append(0.0)
            continue
        means.append(float(arr.mean()))
        errs.append(float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0)
    series = QmiSeries(
        t=list(range(len(per_t))),
        mean=means,
        stderr=errs,
        n_traj=spec.trajectories,
        entropy_kind=spec.entropy,
        metadata={"name": spec.name, "seed": spec.seed, "estimator": spec.estimator,
                  **metadata},
    )
    cap = None
    if spec.n_r and spec.entropy == "von-neumann":
        cap = 2 * min(spec.n_r, spec.n_a)
    series.validate(cap_bits=cap)
    return series


# ---------------------------------------------------------------------------
# unitary ensembles


def draw_step_unitary(spec: ExperimentSpec, rng: np.random.Generator):
    """One step generator on A u B for the configured ensemble."""
    n_ab = spec.n_a + spec.n_b
    if spec.ensemble == "clifford":
        return random_clifford(n_ab, rng)
    if spec.ensemble == "haar":
        return haar_unitary(2**n_ab, rng)
    if spec.ensemble == "ising":
        return hamiltonian_unitary(
            HamiltonianParams.random_ising(n_ab, rng, spec.t_h), n_ab
        )
    if spec.ensemble == "mfim":
        return hamiltonian_unitary(HamiltonianParams.mfim(n_ab, spec.t_h), n_ab)
    return brickwork_unitary(n_ab, spec.layers, rng)


# ---------------------------------------------------------------------------
# experiment execution


def run(spec: ExperimentSpec) -> QmiSeries:
    """Execute the experiment and return the aggregated QMI series."""
    if spec.engine == "stabilizer":
        return _run_stabilizer(spec)
    return _run_dense(spec)


def _erasure_targets(spec: ExperimentSpec, shape: SystemShape) -> list[int]:
    # the first erase_qubits bath qubits are the periodically erased ones
    return list(shape.region_b[: spec.erase_qubits or 0])


def _run_stabilizer(spec: ExperimentSpec) -> QmiSeries:
    shape = spec.shape
    reset = "to-zero" if spec.reset == "pure-zero" else "none"
    per_t: list[list[float]] = [[] for _ in range(spec.steps + 1)]
    erased = _erasure_targets(spec, shape)
    for m in range(spec.trajectories):
        rng = rng_stream(spec.seed, m)
        state = bell_pairs_init(shape)
        fixed_op = draw_step_unitary(spec, rng) if spec.identical_unitary else None

        def step(k: int) -> None:
            op = fixed_op if fixed_op is not None else draw_step_unitary(spec, rng)
            erase_now = (
                spec.monitoring == "partial" and k % spec.erase_period == 0
            )
            run_step(
                state,
                shape,
                op,
                spec.monitoring,
                reset,
                rng,
                erase_now=erase_now,
                erase_qubits=erased,
            )

        for w in range(spec.initial.warmup_steps):
            step(w + 1)
        per_t[0].append(float(state.mutual_info(shape.region_r, shape.region_a)))
        for k in range(1, spec.steps + 1):
            step(spec.initial.warmup_steps + k)
            per_t[k].append(float(state.mutual_info(shape.region_r, shape.region_a)))
    return _aggregate(per_t, spec, engine="stabilizer")


def _dense_initial(spec: ExperimentSpec, shape: SystemShape, rng) -> DenseState:
    init = make_initial_state(
        InitialStateSpec(
            family=spec.initial.family,
            delta=spec.initial.delta,
            probe_a=spec.initial.probe_a,
        ),
        shape,
        rng,
    )
    if spec.monitoring == "monitored":
        return init  # pure vector on the full register
    n_ra = shape.n_r + shape.n_a
    if spec.reset == "none":
        # the bath stays in the register for the never-reset channel
        if init.kind == "pure" and init.n == shape.n_total:
            return DenseState(init.n, np.outer(init.data, init.data.conj()), "mixed")
        bath = np.zeros((shape.d_b, shape.d_b), dtype=complex)
        bath[0, 0] = 1.0
        return DenseState(shape.n_total, np.kron(init.data, bath), "mixed")
    # bath is refreshed every step: track the R u A density matrix only
    if init.kind == "pure" and init.n == shape.n_total:
        rho = reduced_density_matrix(init, list(range(n_ra)))
        return DenseState(n_ra, rho, "mixed")
    if init.kind == "pure":
        return DenseState(n_ra, np.outer(init.data, init.data.conj()), "mixed")
    return init


def _run_dense(spec: ExperimentSpec) -> QmiSeries:
    shape = spec.shape
    per_t: list[list[float]] = [[] for _ in range(spec.steps + 1)]
    for m in range(spec.trajectories):
        rng = rng_stream(spec.seed, m)
        state = _dense_initial(spec, shape, rng)
        fixed_op = draw_step_unitary(spec, rng) if spec.identical_unitary else None
        step_count = 0

        def step() -> None:
            nonlocal state, step_count
            step_count += 1
            op = fixed_op if fixed_op is not None else draw_step_unitary(spec, rng)
            if spec.monitoring == "monitored":
                rmode = "to-zero" if spec.reset == "pure-zero" else "none"
            elif spec.reset == "fully-mixed" and step_count == 1:
                # the very first round consumes the initial |0> bath; the
                # mixed refresh only applies from the second round on
                rmode = "pure-zero"
            else:
                rmode = spec.reset
            state, _, _ = evolve_and_measure(
                state, op, shape, spec.monitoring, rmode, rng
            )

        for _ in range(spec.initial.warmup_steps):
            step()
        per_t[0].append(qmi(state, shape.region_r, shape.region_a, spec.entropy))
        for k in range(1, spec.steps + 1):
            step()
            per_t[k].append(qmi(state, shape.region_r, shape.region_a, spec.entropy))
    return _aggregate(per_t, spec, engine="dense")


# ---------------------------------------------------------------------------
# lifetimes


@dataclass(frozen=True)
class LifetimeEstimate:
    """First crossing of epsilon * QMI(0); censored if never reached."""

    tau: float
    censored: bool
    horizon: int

    def __str__(self) -> str:
        return f"> {self.horizon}" if self.censored else f"{self.tau:.6g}"


def estimate_lifetime(series: QmiSeries, epsilon: float) -> LifetimeEstimate:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if len(series.t) < 2:
        raise ValueError("need at least two points to estimate a lifetime")
    q0 = series.mean[0]
    if q0 <= 0:
        raise ValueError("lifetime undefined: QMI(0) must be positive")
    threshold = epsilon * q0
    for i in range(1, len(series.t)):
        cur = series.mean[i]
        if cur <= threshold:
            prev = series.mean[i - 1]
            frac = (prev - threshold) / (prev - cur) if prev > cur else 1.0
            tau = series.t[i - 1] + frac * (series.t[i] - series.t[i - 1])
            return LifetimeEstimate(tau=float(tau), censored=False, horizon=series.t[-1])
    return LifetimeEstimate(tau=float(series.t[-1]), censored=True, horizon=series.t[-1])


# ---------------------------------------------------------------------------
# quantum-to-classical mutual information


def _classical_mi(p: np.ndarray) -> float:
    """Mutual information (bits) of a joint table over (z_R, z_A)."""
    total = p.sum()
    if total <= 0:
        return 0.0
    p = p / total
    pr = p.sum(axis=1, keepdims=True)
    pa = p.sum(axis=0, keepdims=True)
    mask = p > 0
    return float((p[mask] * np.log2(p[mask] / (pr * pa)[mask])).sum())


def _joint_table_from_vector(sub: np.ndarray, shape: SystemShape) -> np.ndarray:
    return (np.abs(sub) ** 2).reshape(shape.d_r, shape.d_a)


def _bath_branches(sub: np.ndarray, u, shape: SystemShape):
    """All bath outcomes of one step applied to an R u A vector.

    Yields (probability, normalized R u A vector) with the bath measured
    and discarded; the bath is re-attached in |0> on the next call.
    """
    from .dense_engine import attach_bath_vec

    psi = attach_bath_vec(sub, shape, [0] * shape.n_b)
    psi = apply_unitary_vec(psi, u, shape.region_a + shape.region_b, shape.n_total)
    t = psi.reshape((2,) * shape.n_total)
    t = np.moveaxis(
        t, shape.region_b, range(shape.n_total - shape.n_b, shape.n_total)
    ).reshape(-1, shape.d_b)
    for b in range(shape.d_b):
        vec = t[:, b]
        p = float(np.vdot(vec, vec).real)
        if p > 1e-14:
            yield p, vec / math.sqrt(p)


def _smoothed(counts: np.ndarray) -> np.ndarray:
    return counts + 0.5


def q2c_mutual_info(
    spec: ExperimentSpec,
    mode: str = "conditioned",
    source: str = "exact-distribution",
    shots: int = 1024,
) -> QmiSeries:
    """Classical mutual information between z_R and z_A readouts over time.

    ``conditioned`` averages the readout MI over bath-outcome trajectories
    (exact enumeration, or shots split across sampled trajectories);
    ``unconditioned`` uses the channel-evolved state's readout directly.
    """
    if mode not in ("conditioned", "unconditioned"):
        raise ValueError(f"unknown mode {mode!r}")
    if source not in ("exact-distribution", "sampled"):
        raise ValueError(f"unknown source {source!r}")
    if spec.engine != "dense" or spec.ensemble not in ("haar", "brickwork"):
        raise ValueError("Q2C runs use the dense engine with haar or brickwork ensembles")
    shape = spec.shape
    if mode == "conditioned" and shape.d_b**spec.steps > 4096:
        raise ValueError("conditioned Q2C enumeration limited to d_B^steps <= 4096")
    per_t: list[list[float]] = [[] for _ in range(spec.steps + 1)]
    support = shape.d_r * shape.d_a
    warn = source == "sampled" and shots < 2 * support
    for m in range(spec.trajectories):
        rng = rng_stream(spec.seed, m)
        ops = [draw_step_unitary(spec, rng) for _ in range(spec.steps)]
        if spec.identical_unitary:
            ops = [ops[0]] * spec.steps
        if mode == "conditioned":
            values = _q2c_conditioned(spec, shape, ops, source, shots, rng)
        else:
            values = _q2c_unconditioned(spec, shape, ops, source, shots, rng)
        for k, v in enumerate(values):
            per_t[k].append(v)
    series = _aggregate(per_t, spec, kind=f"q2c-{mode}", source=source)
    if warn:
        series.metadata["variance_warning"] = True
    return series


def _q2c_conditioned(spec, shape, ops, source, shots, rng):
    rng_init = rng_stream(spec.seed, 10_000)
    init = make_initial_state(
        InitialStateSpec(family=spec.initial.family, delta=spec.initial.delta),
        shape,
        rng_init,
    )
    if init.kind != "pure":
        raise ValueError("conditioned Q2C needs a pure initial state")
    n_ra = shape.n_r + shape.n_a
    sub0 = init.data
    if init.n == shape.n_total and shape.n_b:
        t = init.data.reshape(2**n_ra, shape.d_b)
        sub0 = t[:, 0] / np.linalg.norm(t[:, 0])  # bath starts in |0>
    branches: list[tuple[float, np.ndarray]] = [(1.0, sub0)]
    values = []
    for k in range(spec.steps + 1):
        tables = [(p, _joint_table_from_vector(v, shape)) for p, v in branches]
        if source == "exact-distribution":
            values.append(sum(p * _classical_mi(tab) for p, tab in tables))
        else:
            probs = np.array([p for p, _ in tables])
            alloc = rng.multinomial(shots, probs / probs.sum())
            total = 0.0
            for n_shots, (_, tab) in zip(alloc, tables):
                if n_shots == 0:
                    continue
                counts = rng.multinomial(
                    n_shots, (tab / tab.sum()).ravel()
                ).reshape(tab.shape)
                total += (n_shots / shots) * _classical_mi(_smoothed(counts))
            values.append(total)
        if k == spec.steps:
            break
        branches = [
            (p * q, v2)
            for p, v in branches
            for q, v2 in _bath_branches(v, ops[k], shape)
        ]
    return values


def _q2c_unconditioned(spec, shape, ops, source, shots, rng):
    rng_init = rng_stream(spec.seed, 10_000)
    init = make_initial_state(
        InitialStateSpec(family=spec.initial.family, delta=spec.initial.delta),
        shape,
        rng_init,
    )
    n_ra = shape.n_r + shape.n_a
    if init.kind == "pure" and init.n == shape.n_total:
        rho = reduced_density_matrix(init, list(range(n_ra)))
    elif init.kind == "pure":
        rho = np.outer(init.data, init.data.conj())
    else:
        rho = init.data
    state = DenseState(n_ra, rho, "mixed")
    values = []
    for k in range(spec.steps + 1):
        tab = np.diag(state.data).real.clip(min=0).reshape(shape.d_r, shape.d_a)
        if source == "exact-distribution":
            values.append(_classical_mi(tab))
        else:
            counts = rng.multinomial(shots, (tab / tab.sum()).ravel()).reshape(tab.shape)
            values.append(_classical_mi(_smoothed(counts)))
        if k == spec.steps:
            break
        state, _, _ = evolve_and_measure(
            state, ops[k], shape, "unmonitored", "pure-zero", rng
        )
    return values


# ---------------------------------------------------------------------------
# persistence


def save_series(
    series: QmiSeries, out_dir: str | Path, name: str, spec: ExperimentSpec | None = None
) -> tuple[Path, Path]:
    """Write the CSV and its JSON sidecar; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{name}.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for t, mean, err in zip(series.t, series.mean, series.stderr):
            writer.writerow([t, repr(mean), repr(err), series.n_traj, series.entropy_kind])
    sidecar = {
        "format_version": FORMAT_VERSION,
        "kind": "qmi-series",
        "name": name,
        "qilab_version": __version__,
        "spec": spec.model_dump() if spec is not None else None,
        "metadata": series.metadata,
    }
    json_path = out / f"{name}.json"
    json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


def load_series(csv_path: str | Path) -> QmiSeries:
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        rows = list(reader)
    if not rows:
        raise ValueError("empty series")
    return QmiSeries(
        t=[int(r[0]) for r in rows],
        mean=[float(r[1]) for r in rows],
        stderr=[float(r[2]) for r in rows],
        n_traj=int(rows[0][3]),
        entropy_kind=rows[0][4],
    )


def save_spectrum(
    spectrum: ChannelSpectrum,
    out_dir: str | Path,
    name: str,
    metadata: dict | None = None,
) -> tuple[Path, Path]:
    """Write eigenvalues CSV plus a summary JSON record."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{name}.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re", "im", "modulus"])
        for lam in spectrum.eigenvalues:
            # plain-float repr: numpy scalar reprs are not round-trippable text
            writer.writerow(
                [repr(float(lam.real)), repr(float(lam.imag)), repr(float(abs(lam)))]
            )
    finite = math.isfinite(spectrum.tau_eig)
    summary = {
        "format_version": FORMAT_VERSION,
        "kind": "channel-spectrum",
        "name": name,
        "qilab_version": __version__,
        "lambda1_re": spectrum.lambda1.real,
        "lambda1_im": spectrum.lambda1.imag,
        "lambda1_modulus": abs(spectrum.lambda1),
        "tau_eig": spectrum.tau_eig if finite else None,
        "tau_eig_finite": finite,
        "bulk_radius_estimate": spectrum.bulk_radius_estimate,
        "metadata": metadata or {},
    }
    json_path = out / f"{name}.json"
    json_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


def load_spec_file(path: str | Path) -> dict:
    """Parse a TOML or JSON configuration file into a plain dict."""
    path = Path(path)
    text = path.read_bytes()
    if path.suffix == ".toml":
        try:
            import tomllib  # python >= 3.11
        except ModuleNotFoundError:  # pragma: no cover - depends on runtime
            import tomli as tomllib
        return tomllib.loads(text.decode())
    return json.loads(text)


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteResult:
    out_dir: Path
    passed: bool
    report: list[dict]


def _check_against_theory(series: QmiSeries, entry: dict) -> dict:
    curve = TheoryCurve.evaluate(
        entry["kind"], entry.get("params", {}), series.t
    )
    tol = entry.get("tolerance", {})
    factor = float(tol.get("stderr_factor", 3.0))
    floor = float(tol.get("abs_floor", 0.0))
    worst = 0.0
    ok = True
    for t, mean, err in zip(series.t, series.mean, series.stderr):
        target = max(curve.values[t], 0.0)  # information is clamped at zero
        allowed = max(floor, factor * err)
        gap = abs(mean - target)
        worst = max(worst, gap - allowed)
        if gap > allowed + 1e-12:
            ok = False
    return {"kind": entry["kind"], "passed": ok, "worst_excess_bits": worst}


def run_suite(
    config: dict | str | Path,
    out_dir: str | Path | None = None,
    seed_override: int | None = None,
) -> SuiteResult:
    """Run every configured experiment, persist artifacts, report pass/fail."""
    if not isinstance(config, dict):
        config = load_spec_file(config)
    out = Path(out_dir or config.get("out", "suite-out"))
    out.mkdir(parents=True, exist_ok=True)
    suite_seed = seed_override if seed_override is not None else config.get("seed", 0)
    report: list[dict] = []
    manifest_experiments = []
    all_ok = True
    for idx, entry in enumerate(config.get("experiments", [])):
        raw = dict(entry["experiment"])
        raw.setdefault("seed", int(rng_stream(suite_seed, idx).integers(2**31)))
        spec = ExperimentSpec(**raw)
        started = time.perf_counter()
        series = run(spec)
        elapsed = time.perf_counter() - started
        save_series(series, out, spec.name, spec)
        row: dict = {"name": spec.name, "seed": spec.seed, "wall_time_s": elapsed}
        if "theory" in entry:
            check = _check_against_theory(series, entry["theory"])
            row.update(check)
            all_ok = all_ok and check["passed"]
        else:
            row["passed"] = True
        report.append(row)
        manifest_experiments.append(
            {"name": spec.name, "seed": spec.seed, "wall_time_s": elapsed}
        )
    manifest = {
        "format_version": FORMAT_VERSION,
        "kind": "suite-manifest",
        "qilab_version": __version__,
        "seed": suite_seed,
        "experiments": manifest_experiments,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    (out / "acceptance_report.json").write_text(
        json.dumps({"passed": all_ok, "rows": report}, indent=2, sort_keys=True) + "\n"
    )
    return SuiteResult(out_dir=out, passed=all_ok, report=report)

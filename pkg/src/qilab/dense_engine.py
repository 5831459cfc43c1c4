"""Exact small-system engine: statevectors for monitored trajectories,
density matrices for unmonitored channel evolution."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .shapes import SystemShape

MAX_DENSE_QUBITS = 14

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class DenseState:
    """Pure amplitude vector or density matrix over n qubits."""

    def __init__(self, n: int, data: np.ndarray, kind: Literal["pure", "mixed"]):
        if n > MAX_DENSE_QUBITS:
            raise ValueError(f"dense engine capped at {MAX_DENSE_QUBITS} qubits")
        self.n = n
        self.kind = kind
        self.data = np.asarray(data, dtype=complex)
        d = 2**n
        want = (d,) if kind == "pure" else (d, d)
        if self.data.shape != want:
            raise ValueError("payload shape mismatch")

    @classmethod
    def zero_state(cls, n: int) -> "DenseState":
        psi = np.zeros(2**n, dtype=complex)
        psi[0] = 1.0
        return cls(n, psi, "pure")

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.data.copy(), self.kind)

    def to_density_matrix(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return self.data

    def validate(self, atol: float = 1e-10) -> None:
        if self.kind == "pure":
            if abs(np.linalg.norm(self.data) - 1.0) > atol:
                raise AssertionError("statevector not normalized")
        else:
            rho = self.data
            if np.abs(rho - rho.conj().T).max() > atol:
                raise AssertionError("density matrix not Hermitian")
            if abs(np.trace(rho).real - 1.0) > atol:
                raise AssertionError("trace != 1")
            if np.linalg.eigvalsh(rho).min() < -atol:
                raise AssertionError("negative eigenvalue")


# -- unitary application ---------------------------------------------------


def apply_unitary_vec(psi: np.ndarray, u: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Apply a k-qubit unitary to the target qubits of an n-qubit vector."""
    k = len(targets)
    t = psi.reshape((2,) * n)
    t = np.moveaxis(t, targets, range(k))
    t = (u @ t.reshape(2**k, -1)).reshape((2,) * n)
    t = np.moveaxis(t, range(k), targets)
    return t.reshape(-1)


def apply_unitary_dm(rho: np.ndarray, u: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """U rho U^dagger on the target qubits of an n-qubit density matrix."""
    k = len(targets)
    d = 2**n
    t = rho.reshape((2,) * (2 * n))
    row_axes = list(targets)
    col_axes = [n + q for q in targets]
    t = np.moveaxis(t, row_axes, range(k))
    t = (u @ t.reshape(2**k, -1)).reshape((2,) * (2 * n))
    t = np.moveaxis(t, range(k), row_axes)
    t = np.moveaxis(t, col_axes, range(k))
    t = (u.conj() @ t.reshape(2**k, -1)).reshape((2,) * (2 * n))
    t = np.moveaxis(t, range(k), col_axes)
    return t.reshape(d, d)


def apply_unitary(state: DenseState, u: np.ndarray, targets: Sequence[int]) -> DenseState:
    if state.kind == "pure":
        return DenseState(state.n, apply_unitary_vec(state.data, u, targets, state.n), "pure")
    return DenseState(state.n, apply_unitary_dm(state.data, u, targets, state.n), "mixed")


# -- partial trace and entropies ------------------------------------------


def reduced_density_matrix(state: DenseState, keep: Sequence[int]) -> np.ndarray:
    """Partial trace onto the kept qubits (in the given order)."""
    keep = list(keep)
    n = state.n
    k = len(keep)
    rest = [q for q in range(n) if q not in keep]
    if state.kind == "pure":
        t = state.data.reshape((2,) * n)
        t = np.moveaxis(t, keep, range(k)).reshape(2**k, -1)
        return t @ t.conj().T
    t = state.data.reshape((2,) * (2 * n))
    t = np.moveaxis(t, keep, range(k))
    t = np.moveaxis(t, [n + q for q in keep], range(k, 2 * k))
    t = t.reshape(2**k, 2**k, -1)
    dr = 2 ** len(rest)
    t = t.reshape(2**k, 2**k, dr, dr)
    return np.einsum("abcc->ab", t)


def entropy_vn(rho: np.ndarray, clip: float = 1e-12) -> float:
    """Von Neumann entropy in bits, eigenvalues below clip zeroed."""
    lam = np.linalg.eigvalsh(rho)
    if lam.min() < -1e-8:
        import warnings

        warnings.warn(f"density matrix eigenvalue {lam.min():.2e} below -1e-8")
    lam = lam[lam > clip]
    return float(-(lam * np.log2(lam)).sum())


def entropy_renyi2(rho: np.ndarray) -> float:
    """-log2 tr(rho^2) in bits."""
    return float(-np.log2(np.einsum("ij,ji->", rho, rho).real))


def region_entropy(state: DenseState, region: Sequence[int], kind: str = "von-neumann") -> float:
    if len(region) == 0:
        return 0.0
    rho = reduced_density_matrix(state, region)
    if kind == "von-neumann":
        return entropy_vn(rho)
    if kind == "renyi2":
        return entropy_renyi2(rho)
    raise ValueError(f"unknown entropy kind {kind!r}")


def qmi(
    state: DenseState,
    region_r: Sequence[int],
    region_a: Sequence[int],
    kind: str = "von-neumann",
) -> float:
    if set(region_r) & set(region_a):
        raise ValueError("regions overlap")
    return (
        region_entropy(state, region_r, kind)
        + region_entropy(state, region_a, kind)
        - region_entropy(state, list(region_r) + list(region_a), kind)
    )


# -- unitary ensembles -----------------------------------------------------


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


@dataclass
class HamiltonianParams:
    """Couplings for the two Hamiltonian ensembles.

    'all-to-all-ising': H = sum_{i<j} J_ij Z_i Z_j + sum_i eta_x_i X_i
    + sum_i eta_z_i Z_i with standard-normal parameters.
    'mfim': H = h_x sum X_i + h_y sum Y_i + sum X_i X_{i+1}, open chain.
    """

    variant: Literal["all-to-all-ising", "mfim"]
    n: int
    t_h: float = 50.0
    j: np.ndarray | None = None
    eta_x: np.ndarray | None = None
    eta_z: np.ndarray | None = None
    h_x: float = 0.8090
    h_y: float = 0.9045

    @classmethod
    def random_ising(cls, n: int, rng: np.random.Generator, t_h: float = 50.0) -> "HamiltonianParams":
        upper = rng.normal(size=(n, n))
        j = np.triu(upper, 1)
        j = j + j.T  # symmetric, zero diagonal
        return cls("all-to-all-ising", n, t_h, j=j, eta_x=rng.normal(size=n), eta_z=rng.normal(size=n))

    @classmethod
    def mfim(cls, n: int, t_h: float = 50.0, h_x: float = 0.8090, h_y: float = 0.9045) -> "HamiltonianParams":
        return cls("mfim", n, t_h, h_x=h_x, h_y=h_y)


def _kron_at(op: np.ndarray, q: int, n: int) -> np.ndarray:
    full = np.array([[1.0 + 0j]])
    for i in range(n):
        full = np.kron(full, op if i == q else np.eye(2))
    return full


def _two_site(op1: np.ndarray, q1: int, op2: np.ndarray, q2: int, n: int) -> np.ndarray:
    full = np.array([[1.0 + 0j]])
    for i in range(n):
        if i == q1:
            full = np.kron(full, op1)
        elif i == q2:
            full = np.kron(full, op2)
        else:
            full = np.kron(full, np.eye(2))
    return full


def build_hamiltonian(params: HamiltonianParams) -> np.ndarray:
    n = params.n
    h = np.zeros((2**n, 2**n), dtype=complex)
    if params.variant == "all-to-all-ising":
        for i in range(n):
            for j in range(i + 1, n):
                if params.j[i, j] != 0.0:
                    h += params.j[i, j] * _two_site(_Z, i, _Z, j, n)
        for i in range(n):
            h += params.eta_x[i] * _kron_at(_X, i, n)
            h += params.eta_z[i] * _kron_at(_Z, i, n)
    elif params.variant == "mfim":
        for i in range(n):
            h += params.h_x * _kron_at(_X, i, n)
            h += params.h_y * _kron_at(_Y, i, n)
        for i in range(n - 1):
            h += _two_site(_X, i, _X, i + 1, n)
    else:
        raise ValueError(f"unknown variant {params.variant!r}")
    if np.abs(h - h.conj().T).max() > 1e-12:
        raise AssertionError("assembled Hamiltonian is not Hermitian")
    return h


def hamiltonian_unitary(params: HamiltonianParams, n: int) -> np.ndarray:
    """exp(-i H t_H) through Hermitian eigendecomposition."""
    if n != params.n:
        raise ValueError("qubit count does not match params")
    h = build_hamiltonian(params)
    lam, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * lam * params.t_h)) @ v.conj().T


def brickwork_unitary(n: int, layers: int, rng: np.random.Generator) -> np.ndarray:
    """Alternating CZ bricks with uniform single-qubit XY rotations.

    Per layer, acting right to left: single-qubit exp(-i phi Y) exp(-i theta X)
    rotations, then CZ on pairs (0,1),(2,3),..., then CZ on (1,2),(3,4),...
    layers=0 gives the identity.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    d = 2**n
    cz = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    u = np.eye(d, dtype=complex)
    for _ in range(layers):
        layer = np.array([[1.0 + 0j]])
        for q in range(n):
            theta = rng.uniform(0.0, 2 * np.pi)
            phi = rng.uniform(0.0, 2 * np.pi)
            rx = np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * _X
            ry = np.cos(phi) * np.eye(2) - 1j * np.sin(phi) * _Y
            layer = np.kron(layer, ry @ rx)
        step = layer
        for q in range(0, n - 1, 2):
            step = apply_unitary_dm_free(step, cz, [q, q + 1], n)
        for q in range(1, n - 1, 2):
            step = apply_unitary_dm_free(step, cz, [q, q + 1], n)
        u = step @ u
    return u


def apply_unitary_dm_free(mat: np.ndarray, u: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Left-multiply an operator matrix by a k-qubit unitary on targets."""
    k = len(targets)
    d = 2**n
    t = mat.reshape((2,) * n + (d,))
    t = np.moveaxis(t, targets, range(k))
    t = (u @ t.reshape(2**k, -1)).reshape((2,) * n + (d,))
    t = np.moveaxis(t, range(k), targets)
    return t.reshape(d, d)


# -- protocol step ---------------------------------------------------------


def born_sample_bath(
    psi: np.ndarray, shape: SystemShape, rng: np.random.Generator
) -> tuple[np.ndarray, list[int], float]:
    """Sample the joint bath outcome; returns (collapsed R u A vector, bits, prob).

    The returned vector lives on R u A only (bath removed), normalized.
    Outcome bits are listed in bath-qubit order.
    """
    n = shape.n_total
    n_b = shape.n_b
    t = psi.reshape((2,) * n)
    t = np.moveaxis(t, shape.region_b, range(n - n_b, n)).reshape(-1, 2**n_b)
    probs = np.abs(t) ** 2
    probs = probs.sum(axis=0)
    total = probs.sum()
    probs = probs / total
    b = int(rng.choice(len(probs), p=probs))
    p = float(probs[b])
    if p < 1e-300:
        raise FloatingPointError("trajectory weight underflow")
    sub = t[:, b] / np.sqrt(p * total)
    bits = [(b >> (n_b - 1 - i)) & 1 for i in range(n_b)]
    return sub, bits, p


def attach_bath_vec(sub: np.ndarray, shape: SystemShape, bath_bits: Sequence[int]) -> np.ndarray:
    """Tensor an R u A vector with a computational bath state."""
    n = shape.n_total
    n_b = shape.n_b
    bath = np.zeros(2**n_b, dtype=complex)
    idx = 0
    for bit in bath_bits:
        idx = (idx << 1) | bit
    bath[idx] = 1.0
    t = np.kron(sub, bath).reshape((2,) * n)
    # qubits currently ordered R,A then bath at the end; move bath home
    t = np.moveaxis(t, range(n - n_b, n), shape.region_b)
    return t.reshape(-1)


def evolve_and_measure(
    state: DenseState,
    u: np.ndarray,
    shape: SystemShape,
    monitoring: str,
    reset_mode: str,
    rng: np.random.Generator | None = None,
) -> tuple[DenseState, list[int], float]:
    """One protocol step for the dense engine.

    Monitored: state is a pure R u A u B vector; apply U on A u B, sample
    the bath, reset ('to-zero' re-zeroes the bath, 'none' leaves it in the
    collapsed outcome state).  Unmonitored: state is an R u A density
    matrix; append the fresh bath ('pure-zero' |0..0>, 'fully-mixed'
    I/d_B), apply U, trace the bath back out.  Unmonitored with reset
    'none' keeps the bath in the register and dephases it instead.
    """
    if monitoring == "monitored":
        if state.kind != "pure":
            raise ValueError("monitored dynamics needs a pure state")
        if reset_mode == "fully-mixed":
            raise ValueError("fully-mixed reset is unmonitored-only")
        psi = apply_unitary_vec(state.data, u, shape.region_a + shape.region_b, state.n)
        sub, bits, p = born_sample_bath(psi, shape, rng)
        bath_bits = [0] * shape.n_b if reset_mode == "to-zero" else bits
        out = attach_bath_vec(sub, shape, bath_bits)
        return DenseState(state.n, out, "pure"), bits, p
    if monitoring != "unmonitored":
        raise ValueError(f"unsupported dense monitoring mode {monitoring!r}")
    if reset_mode == "none":
        # bath stays in the register; channel = unitary then bath dephasing
        rho = apply_unitary_dm(state.data, u, shape.region_a + shape.region_b, state.n)
        rho = dephase_qubits(rho, shape.region_b, state.n)
        return DenseState(state.n, rho, "mixed"), [], 1.0
    # state holds R u A; tensor a fresh bath, evolve, trace it out
    n_ra = shape.n_r + shape.n_a
    if state.n != n_ra:
        raise ValueError("unmonitored state must live on R u A")
    d_b = shape.d_b
    if reset_mode == "pure-zero":
        bath = np.zeros((d_b, d_b), dtype=complex)
        bath[0, 0] = 1.0
    elif reset_mode == "fully-mixed":
        bath = np.eye(d_b, dtype=complex) / d_b
    else:
        raise ValueError(f"unknown reset mode {reset_mode!r}")
    rho = np.kron(state.to_density_matrix(), bath)
    full = DenseState(shape.n_total, rho, "mixed")
    full = apply_unitary(full, u, shape.region_a + shape.region_b)
    reduced = reduced_density_matrix(full, list(range(n_ra)))
    return DenseState(n_ra, reduced, "mixed"), [], 1.0


def dephase_qubits(rho: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Kill coherences between computational states of the given qubits."""
    k = len(qubits)
    t = rho.reshape((2,) * (2 * n))
    rows = list(qubits)
    cols = [n + q for q in qubits]
    t = np.moveaxis(t, rows, range(k))
    t = np.moveaxis(t, cols, range(k, 2 * k))
    t = t.reshape(2**k, 2**k, -1)
    mask = np.eye(2**k).reshape(2**k, 2**k, 1)
    t = t * mask
    t = t.reshape((2,) * (2 * n))
    t = np.moveaxis(t, range(k, 2 * k), cols)
    t = np.moveaxis(t, range(k), rows)
    return t.reshape(rho.shape)


# -- initial states --------------------------------------------------------


@dataclass
class InitialStateSpec:
    family: str = "bell-pairs"
    delta: float = 0.0
    probe_a: float | None = None
    probe_sigma1: np.ndarray | None = None
    probe_fixed_point: np.ndarray | None = None
    warmup_steps: int = 0

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError("delta must be >= 0")


def bell_pairs_vector(shape: SystemShape) -> np.ndarray:
    """N_R Bell pairs between R and the first N_R qubits of A, rest |0>."""
    n = shape.n_total
    psi = DenseState.zero_state(n).data
    had = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    cx = np.zeros((4, 4), dtype=complex)
    cx[0, 0] = cx[1, 1] = cx[2, 3] = cx[3, 2] = 1.0
    for k in range(shape.n_r):
        psi = apply_unitary_vec(psi, had, [k], n)
        psi = apply_unitary_vec(psi, cx, [k, shape.n_r + k], n)
    return psi


def make_initial_state(
    spec: InitialStateSpec, shape: SystemShape, rng: np.random.Generator
) -> DenseState:
    """Dense initial state on R u A (plus |0> bath where a bath exists)."""
    n = shape.n_total
    n_ra = shape.n_r + shape.n_a
    if spec.family == "bell-pairs":
        return DenseState(n, bell_pairs_vector(shape), "pure")
    if spec.family == "perturbed-haar":
        sub = haar_unitary(2**n_ra, rng)[:, 0]
        sub = sub + spec.delta * DenseState.zero_state(n_ra).data
        sub = sub / np.linalg.norm(sub)
        psi = np.kron(sub, DenseState.zero_state(shape.n_b).data) if shape.n_b else sub
        return DenseState(n, psi, "pure")
    if spec.family == "cq-state":
        basis = haar_unitary(shape.d_a, rng)
        zero_a = np.zeros(shape.d_a, dtype=complex)
        zero_a[0] = 1.0
        rho = np.zeros((2**n_ra, 2**n_ra), dtype=complex)
        for j in range(shape.d_r):
            u_j = basis[:, j] + spec.delta * zero_a
            u_j = u_j / np.linalg.norm(u_j)
            proj_r = np.zeros((shape.d_r, shape.d_r), dtype=complex)
            proj_r[j, j] = 1.0
            rho += np.kron(proj_r, np.outer(u_j, u_j.conj()))
        rho /= shape.d_r
        return DenseState(n_ra, rho, "mixed")
    if spec.family == "cq-probe":
        if spec.probe_sigma1 is None or spec.probe_fixed_point is None:
            raise ValueError("cq-probe needs sigma1 and the fixed point from a spectrum result")
        if shape.n_r != 1:
            raise ValueError("cq-probe uses a single reference qubit")
        from .spectrum import probe_state  # local import to avoid a cycle

        rho = probe_state(spec.probe_fixed_point, spec.probe_sigma1, spec.probe_a)
        return DenseState(n_ra, rho, "mixed")
    raise ValueError(f"unknown initial-state family {spec.family!r}")

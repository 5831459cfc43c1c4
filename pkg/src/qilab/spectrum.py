"""Single-step channel superoperators, spectra, and probe states.

One scrambling round with a bath refresh defines a linear map on density
matrices of the data system.  This module builds that map as an explicit
matrix (computational matrix-unit basis, column-major vectorization),
diagonalizes it, and packages the quantities that govern information
retention: the fixed point, the subleading eigenvalue lambda_1, and the
memory time tau_eig = -1/log2|lambda_1|.  It also constructs the
classically-correlated probe state whose mutual-information decay tracks
|lambda_1|^t directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .shapes import SystemShape

RESET_MODES = ("pure-zero", "none", "fully-mixed")

#: feasibility ceilings: pure-zero/fully-mixed superoperators are d_A^2
#: square; the dephasing variant acts on all of A u B
MAX_SYSTEM_QUBITS = 6
MAX_TOTAL_QUBITS = 7


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-major vectorization of a matrix."""
    return rho.flatten(order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    d = round(math.isqrt(v.size))
    if d * d != v.size:
        raise ValueError("vector length is not a perfect square")
    return v.reshape(d, d, order="F")


def apply_superoperator(superop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return unvec(superop @ vec(rho))


def build_superoperator(u: np.ndarray, shape: SystemShape, reset_mode: str) -> np.ndarray:
    """Matrix of the one-step channel for a fixed unitary ``u`` on A u B.

    ``pure-zero``: fresh |0> bath each step; the channel acts on A alone.
    ``fully-mixed``: fresh maximally mixed bath; acts on A alone.
    ``none``: the bath is measured but kept (never refreshed), which on
    the unconditioned state is a full dephasing of the bath; the channel
    acts on all of A u B.
    """
    if reset_mode not in RESET_MODES:
        raise ValueError(f"unknown reset mode {reset_mode!r}")
    d_a, d_b = shape.d_a, shape.d_b
    d = d_a * d_b
    if u.shape != (d, d):
        raise ValueError(f"unitary has shape {u.shape}, expected {(d, d)}")
    if reset_mode == "none":
        if shape.n_a + shape.n_b > MAX_TOTAL_QUBITS:
            raise ValueError(
                f"dephasing superoperator limited to {MAX_TOTAL_QUBITS} qubits"
            )
        # Kraus operators P_z U with P_z projecting the bath onto |z>
        blocks = u.reshape(d_a, d_b, d_a, d_b)
        superop = np.zeros((d * d, d * d), dtype=complex)
        for z in range(d_b):
            k = np.zeros((d_a, d_b, d_a, d_b), dtype=complex)
            k[:, z] = blocks[:, z]
            k = k.reshape(d, d)
            superop += np.kron(k.conj(), k)
        return superop
    if shape.n_a > MAX_SYSTEM_QUBITS:
        raise ValueError(f"system superoperator limited to {MAX_SYSTEM_QUBITS} qubits")
    blocks = u.reshape(d_a, d_b, d_a, d_b)
    superop = np.zeros((d_a * d_a, d_a * d_a), dtype=complex)
    if reset_mode == "pure-zero":
        for b in range(d_b):
            k = blocks[:, b, :, 0]
            superop += np.kron(k.conj(), k)
        return superop
    for b_out in range(d_b):
        for b_in in range(d_b):
            k = blocks[:, b_out, :, b_in] / math.sqrt(d_b)
            superop += np.kron(k.conj(), k)
    return superop


@dataclass(frozen=True)
class ChannelSpectrum:
    """Eigendata of a one-step channel, sorted by decreasing modulus."""

    eigenvalues: np.ndarray
    fixed_point: np.ndarray
    lambda1: complex
    sigma1: np.ndarray | None
    tau_eig: float
    bulk_radius_estimate: float

    @property
    def dim(self) -> int:
        return self.fixed_point.shape[0]


def _fix_phase(mat: np.ndarray) -> np.ndarray:
    """Deterministic global phase: largest-modulus entry made real positive."""
    idx = np.unravel_index(np.argmax(np.abs(mat)), mat.shape)
    pivot = mat[idx]
    if abs(pivot) < 1e-14:
        return mat
    return mat * (pivot.conjugate() / abs(pivot))


def spectrum_of(superop: np.ndarray) -> ChannelSpectrum:
    """Full eigendecomposition with fixed point and memory time.

    Eigenvalues are sorted by modulus, then larger real part, then
    positive imaginary part, so conjugate pairs report deterministically.
    """
    n = superop.shape[0]
    if superop.ndim != 2 or superop.shape[1] != n:
        raise ValueError("superoperator must be a square matrix")
    w, v = np.linalg.eig(superop)
    if np.abs(w).max() > 1 + 1e-8:
        raise ValueError("eigenvalue modulus exceeds 1: not a quantum channel")
    # quantize the sort keys so near-identical conjugate partners are
    # ordered by the tie-break (larger real part, then positive imaginary
    # part) rather than by last-ulp modulus noise
    order = np.lexsort((-w.imag, -np.round(w.real, 10), -np.round(np.abs(w), 10)))
    w, v = w[order], v[:, order]
    i0 = int(np.argmin(np.abs(w - 1)))
    if abs(w[i0] - 1) > 1e-6:
        raise ValueError("no unit eigenvalue: channel is not trace preserving")

    fp = unvec(v[:, i0])
    fp = (fp + fp.conj().T) / 2
    tr = float(np.trace(fp).real)
    d = fp.shape[0]
    if abs(tr) < 1e-9 or np.linalg.eigvalsh(fp).min() < -1e-6 * max(1.0, abs(tr)):
        # degenerate unit eigenspace (e.g. the identity channel): fall
        # back to the maximally mixed state if it is indeed fixed
        mixed = np.eye(d, dtype=complex) / d
        if np.abs(superop @ vec(mixed) - vec(mixed)).max() > 1e-8:
            raise ValueError("could not extract a positive fixed point")
        fp = mixed
    else:
        fp = fp / tr

    rest = [i for i in range(n) if i != i0]
    if rest:
        i1 = rest[0]
        lam1 = complex(w[i1])
        sigma1 = _fix_phase(unvec(v[:, i1]))
        norm = np.linalg.norm(sigma1)
        if norm > 1e-14:
            sigma1 = sigma1 / norm
    else:
        lam1, sigma1 = 0.0j, None
    mod1 = abs(lam1)
    if mod1 >= 1 - 1e-9:
        tau = math.inf
    elif mod1 < 1e-12:
        tau = 0.0
    else:
        tau = -1.0 / math.log2(mod1)
    bulk = float(np.median(np.abs(np.delete(w, i0)))) if n > 1 else 0.0
    return ChannelSpectrum(
        eigenvalues=w,
        fixed_point=fp,
        lambda1=lam1,
        sigma1=sigma1,
        tau_eig=tau,
        bulk_radius_estimate=bulk,
    )


def max_mixing(fixed_point: np.ndarray, sigma1: np.ndarray, tol: float = 1e-6) -> float:
    """Largest ``a`` keeping ``fixed_point + a (sigma1 + sigma1^dag)`` PSD."""
    s_herm = sigma1 + sigma1.conj().T
    if np.abs(s_herm).max() < 1e-12:
        return math.inf

    def psd(a: float) -> bool:
        return np.linalg.eigvalsh(fixed_point + a * s_herm).min() >= -1e-12

    if not psd(0.0):
        raise ValueError("fixed point is not positive semidefinite")
    lo, hi = 0.0, 1.0
    while psd(hi):
        lo, hi = hi, hi * 2
        if hi > 1e9:
            return math.inf
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if psd(mid):
            lo = mid
        else:
            hi = mid
    return lo


def probe_state(
    fixed_point: np.ndarray, sigma1: np.ndarray, a: float | None = None
) -> np.ndarray:
    """Classically correlated probe on one reference qubit plus the system.

    rho = 1/2 [ |0><0| x rho_fix  +  |1><1| x (rho_fix + a (s1 + s1^dag)) ]
    so each branch evolves under the channel independently and the mutual
    information between the reference bit and the system decays with
    |lambda_1|^t.  ``a`` defaults to half the positivity window.
    """
    if a is None:
        window = max_mixing(fixed_point, sigma1)
        if not math.isfinite(window):
            raise ValueError("mixing window unbounded; pass an explicit a")
        a = window / 2
    block = fixed_point + a * (sigma1 + sigma1.conj().T)
    if np.linalg.eigvalsh(block).min() < -1e-10:
        raise ValueError(f"mixing a={a} leaves the positivity window")
    d = fixed_point.shape[0]
    rho = np.zeros((2 * d, 2 * d), dtype=complex)
    rho[:d, :d] = fixed_point / 2
    rho[d:, d:] = block / 2
    return rho

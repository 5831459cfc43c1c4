"""Dense density-matrix oracle used to cross-check the stabilizer engine."""

from __future__ import annotations

import numpy as np

from qilab.dense_engine import apply_unitary_dm, entropy_vn, reduced_density_matrix, DenseState

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1.0, 1j])
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)
_CX = np.zeros((4, 4), dtype=complex)
_CX[0, 0] = _CX[1, 1] = _CX[2, 3] = _CX[3, 2] = 1.0
_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)

GATE_UNITARIES = {"h": _H, "s": _S, "x": _X, "z": _Z, "cx": _CX, "cz": _CZ}


class DensityOracle:
    """Brute-force n-qubit density matrix with gates, measurement, erasure."""

    def __init__(self, n: int, rho: np.ndarray | None = None):
        self.n = n
        if rho is None:
            rho = np.zeros((2**n, 2**n), dtype=complex)
            rho[0, 0] = 1.0
        self.rho = rho

    def gate(self, name: str, *qubits: int) -> None:
        self.rho = apply_unitary_dm(self.rho, GATE_UNITARIES[name], list(qubits), self.n)

    def unitary(self, u: np.ndarray, targets: list[int]) -> None:
        self.rho = apply_unitary_dm(self.rho, u, targets, self.n)

    def outcome_probability(self, qubit: int, outcome: int) -> float:
        proj = np.diag([1.0 - outcome, float(outcome)]).astype(complex)
        projected = apply_unitary_dm(self.rho, proj, [qubit], self.n)
        return float(np.trace(projected).real)

    def project(self, qubit: int, outcome: int) -> float:
        """Project a Z measurement outcome; returns its probability."""
        proj = np.diag([1.0 - outcome, float(outcome)]).astype(complex)
        projected = apply_unitary_dm(self.rho, proj, [qubit], self.n)
        p = float(np.trace(projected).real)
        if p < 1e-12:
            raise AssertionError("oracle: projecting onto a zero-probability outcome")
        self.rho = projected / p
        return p

    def trace_out(self, qubits: list[int]) -> None:
        """Replace the qubits by maximally mixed states (erasure)."""
        keep = [q for q in range(self.n) if q not in qubits]
        reduced = reduced_density_matrix(DenseState(self.n, self.rho, "mixed"), keep)
        mixed = np.eye(2 ** len(qubits), dtype=complex) / 2 ** len(qubits)
        rho = np.kron(reduced, mixed)
        # reorder from keep+erased back to 0..n-1
        order = keep + sorted(qubits)
        t = rho.reshape((2,) * (2 * self.n))
        perm = [0] * self.n
        for pos, q in enumerate(order):
            perm[q] = pos
        axes = [perm[q] for q in range(self.n)] + [self.n + perm[q] for q in range(self.n)]
        self.rho = t.transpose(axes).reshape(2**self.n, 2**self.n)

    def entropy(self, region: list[int]) -> float:
        if not region:
            return 0.0
        return entropy_vn(reduced_density_matrix(DenseState(self.n, self.rho, "mixed"), region))

"""Stabilizer-state engine for large monitored/unmonitored Clifford dynamics.

States may be mixed: the generator list can have fewer than n entries.
Entropies come from GF(2) ranks, so they are exact integers.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import gf2
from .paulis import CliffordOp, PauliString, conjugate_rows, random_clifford
from .shapes import SystemShape

__all__ = [
    "StabilizerState",
    "bell_pairs_init",
    "random_clifford",
    "run_step",
]


class StabilizerState:
    """Mixed stabilizer state: |G| <= n phase-tagged commuting generators.

    Rows of (x, z) are generator bit vectors; r holds phase exponents of i
    (0 for +, 2 for -).  rho = 2^(|G|-n) * prod_i (I + g_i).
    """

    def __init__(self, n: int, x: np.ndarray, z: np.ndarray, r: np.ndarray):
        self.n = n
        self.x = np.asarray(x, dtype=np.uint8) & 1
        self.z = np.asarray(z, dtype=np.uint8) & 1
        self.r = np.asarray(r, dtype=np.uint8) % 4

    @classmethod
    def zero_state(cls, n: int) -> "StabilizerState":
        return cls(n, np.zeros((n, n), np.uint8), np.eye(n, dtype=np.uint8), np.zeros(n, np.uint8))

    @property
    def num_generators(self) -> int:
        return self.x.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.num_generators == self.n

    def copy(self) -> "StabilizerState":
        return StabilizerState(self.n, self.x.copy(), self.z.copy(), self.r.copy())

    def generators(self) -> list[PauliString]:
        return [
            PauliString(self.n, self.x[i], self.z[i], int(self.r[i]))
            for i in range(self.num_generators)
        ]

    def bits(self) -> np.ndarray:
        return np.concatenate([self.x, self.z], axis=1)

    def validate(self) -> None:
        """Debug-mode invariant check: commuting, independent, Hermitian."""
        xs = self.x.astype(np.int64)
        zs = self.z.astype(np.int64)
        comm = (xs @ zs.T + zs @ xs.T) % 2
        if comm.any():
            raise AssertionError("generators do not all commute")
        if gf2.rank(self.bits()) != self.num_generators:
            raise AssertionError("generators are GF(2)-dependent")
        herm = (self.r.astype(np.int64) - (xs * zs).sum(axis=1)) % 2
        if herm.any():
            raise AssertionError("non-Hermitian generator phase")

    # -- unitary action ----------------------------------------------------

    def apply_clifford(self, op: CliffordOp, targets: Sequence[int]) -> None:
        """Conjugate every generator through op acting on the target qubits."""
        targets = list(targets)
        if len(set(targets)) != len(targets):
            raise ValueError("duplicate targets")
        if any(q < 0 or q >= self.n for q in targets):
            raise ValueError("target out of range")
        if len(targets) != op.n:
            raise ValueError("target count must equal op size")
        cols = np.array(targets, dtype=np.intp)
        sub = np.concatenate([self.x[:, cols], self.z[:, cols]], axis=1)
        zero = np.zeros(self.num_generators, dtype=np.uint8)
        new_bits, dr = conjugate_rows(sub, zero, op)
        self.x[:, cols] = new_bits[:, : op.n]
        self.z[:, cols] = new_bits[:, op.n :]
        self.r = (self.r + dr) % 4

    def apply_x(self, qubit: int) -> None:
        """Pauli X on one qubit: flips the sign of generators with Z there."""
        self.r = (self.r + 2 * self.z[:, qubit]) % 4

    # -- measurement and erasure ------------------------------------------

    def measure_z(self, qubit: int, rng: np.random.Generator) -> int:
        """Projective Z measurement; returns the outcome bit."""
        anti = np.nonzero(self.x[:, qubit])[0]
        if anti.size:
            p = int(anti[0])
            rest = anti[1:]
            if rest.size:
                self._fold_row_into(p, rest)
            outcome = int(rng.integers(0, 2))
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, qubit] = 1
            self.r[p] = 2 * outcome
            return outcome
        # Z_qubit commutes with the whole group
        target = np.zeros(2 * self.n, dtype=np.uint8)
        target[self.n + qubit] = 1
        combo = gf2.solve_combination(self.bits(), target)
        if combo is None:
            # qubit direction is maximally mixed: coin flip, purify
            outcome = int(rng.integers(0, 2))
            new_x = np.zeros((1, self.n), np.uint8)
            new_z = np.zeros((1, self.n), np.uint8)
            new_z[0, qubit] = 1
            self.x = np.concatenate([self.x, new_x], axis=0)
            self.z = np.concatenate([self.z, new_z], axis=0)
            self.r = np.concatenate([self.r, np.array([2 * outcome], np.uint8)])
            return outcome
        # deterministic: phase of the generator product fixes the outcome
        phase = self._product_phase(np.nonzero(combo)[0])
        return 0 if phase == 0 else 1

    def trace_out(self, qubits: Iterable[int]) -> None:
        """Erase qubits: symplectic elimination, dropping uncleanable rows.

        Pivots are chosen at the lowest qubit index first (ascending qubit
        order, first matching generator row) for determinism.  The erased
        qubits stay in the register, left maximally mixed.
        """
        drop: list[int] = []
        for q in sorted(qubits):
            alive = np.array(
                [i for i in range(self.num_generators) if i not in drop], dtype=np.intp
            )
            with_x = alive[self.x[alive, q] == 1]
            if with_x.size:
                p = int(with_x[0])
                if with_x.size > 1:
                    self._fold_row_into(p, with_x[1:])
                drop.append(p)
                alive = alive[alive != p]
            with_z = alive[self.z[alive, q] == 1]
            if with_z.size:
                p = int(with_z[0])
                if with_z.size > 1:
                    self._fold_row_into(p, with_z[1:])
                drop.append(p)
        if drop:
            keep = np.array(
                [i for i in range(self.num_generators) if i not in drop], dtype=np.intp
            )
            self.x = self.x[keep]
            self.z = self.z[keep]
            self.r = self.r[keep]

    def set_to_zero(self, qubits: Iterable[int]) -> None:
        """Trace out the qubits and pin each to fresh |0> (+Z generator)."""
        qubits = sorted(qubits)
        self.trace_out(qubits)
        k = len(qubits)
        new_x = np.zeros((k, self.n), np.uint8)
        new_z = np.zeros((k, self.n), np.uint8)
        for i, q in enumerate(qubits):
            new_z[i, q] = 1
        self.x = np.concatenate([self.x, new_x], axis=0)
        self.z = np.concatenate([self.z, new_z], axis=0)
        self.r = np.concatenate([self.r, np.zeros(k, np.uint8)])

    # -- entropies ---------------------------------------------------------

    def subsystem_entropy(self, region: Iterable[int]) -> int:
        """S_A in bits: |A| - rank of the subgroup supported inside A."""
        region = set(region)
        if not region:
            return 0
        outside = np.array([q for q in range(self.n) if q not in region], dtype=np.intp)
        outside_bits = np.concatenate([self.x[:, outside], self.z[:, outside]], axis=1)
        supported_rank = self.num_generators - gf2.rank(outside_bits)
        return len(region) - supported_rank

    def mutual_info(self, region_r: Iterable[int], region_a: Iterable[int]) -> int:
        region_r = set(region_r)
        region_a = set(region_a)
        if region_r & region_a:
            raise ValueError("regions overlap")
        return (
            self.subsystem_entropy(region_r)
            + self.subsystem_entropy(region_a)
            - self.subsystem_entropy(region_r | region_a)
        )

    # -- internals ---------------------------------------------------------

    def _fold_row_into(self, src: int, dst_rows: np.ndarray) -> None:
        """Replace each dst generator g by g * g_src (group product)."""
        cross = self.z[dst_rows].astype(np.int64) @ self.x[src].astype(np.int64)
        self.r[dst_rows] = (
            self.r[dst_rows].astype(np.int64) + int(self.r[src]) + 2 * cross
        ) % 4
        self.x[dst_rows] ^= self.x[src]
        self.z[dst_rows] ^= self.z[src]

    def _product_phase(self, rows: np.ndarray) -> int:
        """Phase exponent of the ordered product of the given generator rows."""
        phase = 0
        z_acc = np.zeros(self.n, dtype=np.int64)
        x_acc = np.zeros(self.n, dtype=np.int64)
        for i in rows:
            phase += int(self.r[i]) + 2 * int(z_acc @ self.x[i].astype(np.int64))
            x_acc ^= self.x[i].astype(np.int64)
            z_acc ^= self.z[i].astype(np.int64)
        return phase % 4


def bell_pairs_init(shape: SystemShape) -> StabilizerState:
    """N_R Bell pairs between R and the first N_R qubits of A; rest |0>."""
    n = shape.n_total
    state = StabilizerState.zero_state(n)
    for k in range(shape.n_r):
        r_q = k
        a_q = shape.n_r + k
        # |00> + |11> on (r_q, a_q): row r_q holds XX, row a_q holds ZZ
        state.z[r_q, r_q] = 0
        state.x[r_q, r_q] = 1
        state.x[r_q, a_q] = 1
        state.z[a_q, r_q] = 1
    return state


def run_step(
    state: StabilizerState,
    shape: SystemShape,
    op: CliffordOp,
    monitoring: str,
    reset_mode: str,
    rng: np.random.Generator,
    *,
    erase_now: bool = False,
    erase_qubits: Sequence[int] | None = None,
) -> list[int | None]:
    """One protocol step: unitary on A u B, then bath handling.

    monitoring 'monitored': measure every bath qubit, record, reset per
    reset_mode ('to-zero' applies the outcome-conditioned X, 'none' leaves
    the collapsed bath in place).  'unmonitored': trace out B and re-append
    fresh |0> bath.  'partial': as monitored, but when erase_now is set the
    erase_qubits are traced out and re-zeroed with no recorded outcome
    (entry None).
    """
    targets = shape.region_a + shape.region_b
    if op.n != len(targets):
        raise ValueError("op must act on A u B")
    state.apply_clifford(op, targets)
    outcomes: list[int | None] = []
    if shape.n_b == 0:
        return outcomes
    if monitoring == "unmonitored":
        state.set_to_zero(shape.region_b)
        return outcomes
    if monitoring not in ("monitored", "partial"):
        raise ValueError(f"unknown monitoring mode {monitoring!r}")
    erased = set(erase_qubits or []) if (monitoring == "partial" and erase_now) else set()
    for q in shape.region_b:
        if q in erased:
            state.set_to_zero([q])
            outcomes.append(None)
            continue
        outcome = state.measure_z(q, rng)
        if reset_mode == "to-zero" and outcome:
            state.apply_x(q)
        elif reset_mode not in ("to-zero", "none"):
            raise ValueError(f"unsupported reset mode {reset_mode!r} for stabilizer")
        outcomes.append(outcome)
    return outcomes

"""Phase-tagged Pauli strings and Clifford tableaus over GF(2).

Convention: a Pauli is i^r * X^x Z^z with the X factors to the left of the
Z factors, so Y = i * X Z has r = 1.  Products then obey
(i^r1 X^x1 Z^z1)(i^r2 X^x2 Z^z2) = i^(r1+r2+2*(z1.x2)) X^(x1+x2) Z^(z1+z2).
Hermitian strings satisfy r = x.z (mod 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import rank

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass
class PauliString:
    n: int
    x: np.ndarray  # (n,) uint8
    z: np.ndarray  # (n,) uint8
    r: int = 0  # phase exponent of i, mod 4

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.uint8) & 1
        self.z = np.asarray(self.z, dtype=np.uint8) & 1
        if self.x.shape != (self.n,) or self.z.shape != (self.n,):
            raise ValueError("bit-vector length must equal n")
        self.r = int(self.r) % 4

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliString":
        """Build from a string like 'XIZY'; sign is +1 or -1."""
        n = len(label)
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        r = 0 if sign == 1 else 2
        for q, ch in enumerate(label.upper()):
            if ch == "X":
                x[q] = 1
            elif ch == "Z":
                z[q] = 1
            elif ch == "Y":
                x[q] = 1
                z[q] = 1
                r += 1
            elif ch != "I":
                raise ValueError(f"bad Pauli letter {ch!r}")
        return cls(n, x, z, r)

    @property
    def phase(self) -> complex:
        return 1j**self.r

    def is_hermitian(self) -> bool:
        return (self.r - int(self.x @ self.z)) % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("mismatched lengths")
        r = (self.r + other.r + 2 * int(self.z @ other.x)) % 4
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, r)

    def commutes(self, other: "PauliString") -> bool:
        return (int(self.x @ other.z) + int(self.z @ other.x)) % 2 == 0

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n matrix; test oracle for small n."""
        out = np.array([[1.0 + 0j]])
        for q in range(self.n):
            m = np.linalg.matrix_power(_X, int(self.x[q])) @ np.linalg.matrix_power(
                _Z, int(self.z[q])
            )
            out = np.kron(out, m)
        return self.phase * out

    def label(self) -> str:
        letters = []
        for q in range(self.n):
            letters.append("IXZY"[int(self.x[q]) + 2 * int(self.z[q])])
        sign = {0: "+", 2: "-"}.get((self.r - int(self.x @ self.z)) % 4, "?")
        return sign + "".join(letters)


def conjugate_rows(
    bits: np.ndarray, phases: np.ndarray, op: "CliffordOp"
) -> tuple[np.ndarray, np.ndarray]:
    """Conjugate a batch of Pauli rows through a Clifford.

    bits is (k, 2n) with columns [x | z]; phases is (k,) mod 4.  Returns the
    conjugated (bits, phases).  The image of i^r X^x Z^z is the ordered
    product of the X_j images (j ascending) then the Z_j images, folded with
    the product phase rule.
    """
    k = bits.shape[0]
    n = op.n
    tab = op.tab
    new_r = phases.astype(np.int64).copy()
    x_acc = np.zeros((k, n), dtype=np.uint8)
    z_acc = np.zeros((k, n), dtype=np.uint8)
    for j in range(2 * n):
        sel = bits[:, j]
        if not sel.any():
            continue
        xj = tab[j, :n]
        zj = tab[j, n:]
        cross = z_acc.astype(np.int64) @ xj.astype(np.int64)
        new_r += sel.astype(np.int64) * (int(op.r[j]) + 2 * cross)
        x_acc ^= sel[:, None] * xj
        z_acc ^= sel[:, None] * zj
    return np.concatenate([x_acc, z_acc], axis=1), (new_r % 4).astype(np.uint8)


class CliffordOp:
    """Clifford as the image tableau of the 2n Pauli generators.

    tab row j (j < n) is the image of X_j, row n+j the image of Z_j, as
    [x | z] bit rows; r[j] is the image's phase exponent mod 4.
    """

    def __init__(self, n: int, tab: np.ndarray, r: np.ndarray):
        self.n = n
        self.tab = np.asarray(tab, dtype=np.uint8) & 1
        self.r = np.asarray(r, dtype=np.uint8) % 4
        if self.tab.shape != (2 * n, 2 * n) or self.r.shape != (2 * n,):
            raise ValueError("tableau shape mismatch")

    @classmethod
    def identity(cls, n: int) -> "CliffordOp":
        return cls(n, np.eye(2 * n, dtype=np.uint8), np.zeros(2 * n, dtype=np.uint8))

    # -- elementary gates (test oracles compose these against dense matrices)

    @classmethod
    def h(cls, q: int, n: int) -> "CliffordOp":
        op = cls.identity(n)
        # X -> Z, Z -> X
        op.tab[q, q] = 0
        op.tab[q, n + q] = 1
        op.tab[n + q, n + q] = 0
        op.tab[n + q, q] = 1
        return op

    @classmethod
    def s(cls, q: int, n: int) -> "CliffordOp":
        op = cls.identity(n)
        # X -> Y, Z -> Z
        op.tab[q, n + q] = 1
        op.r[q] = 1
        return op

    @classmethod
    def x(cls, q: int, n: int) -> "CliffordOp":
        op = cls.identity(n)
        op.r[n + q] = 2  # Z -> -Z
        return op

    @classmethod
    def z(cls, q: int, n: int) -> "CliffordOp":
        op = cls.identity(n)
        op.r[q] = 2  # X -> -X
        return op

    @classmethod
    def cx(cls, ctrl: int, tgt: int, n: int) -> "CliffordOp":
        op = cls.identity(n)
        op.tab[ctrl, tgt] = 1  # X_c -> X_c X_t
        op.tab[n + tgt, n + ctrl] = 1  # Z_t -> Z_c Z_t
        return op

    @classmethod
    def cz(cls, a: int, b: int, n: int) -> "CliffordOp":
        op = cls.identity(n)
        op.tab[a, n + b] = 1  # X_a -> X_a Z_b
        op.tab[b, n + a] = 1  # X_b -> X_b Z_a
        return op

    def then(self, second: "CliffordOp") -> "CliffordOp":
        """Composite that applies self first, then second."""
        if self.n != second.n:
            raise ValueError("mismatched sizes")
        tab, r = conjugate_rows(self.tab, self.r, second)
        return CliffordOp(self.n, tab, r)

    def image(self, p: PauliString) -> PauliString:
        bits = np.concatenate([p.x, p.z]).reshape(1, -1)
        tab, r = conjugate_rows(bits, np.array([p.r], dtype=np.uint8), self)
        return PauliString(self.n, tab[0, : self.n], tab[0, self.n :], int(r[0]))

    def is_valid(self) -> bool:
        n = self.n
        # symplectic condition: images preserve commutation relations
        xpart = self.tab[:, :n].astype(np.int64)
        zpart = self.tab[:, n:].astype(np.int64)
        prod = (xpart @ zpart.T + zpart @ xpart.T) % 2
        want = np.zeros((2 * n, 2 * n), dtype=np.int64)
        for j in range(n):
            want[j, n + j] = want[n + j, j] = 1
        if not np.array_equal(prod, want):
            return False
        # images are Hermitian
        diag = (xpart * zpart).sum(axis=1) % 2
        return bool(np.all((self.r.astype(np.int64) - diag) % 2 == 0))


def _symplectic_product(v: np.ndarray, w: np.ndarray, n: int) -> np.ndarray:
    """<v, w> = v_x . w_z + v_z . w_x mod 2, broadcast over leading axes."""
    return (
        v[..., :n].astype(np.int64) @ w[..., n:].astype(np.int64).T
        + v[..., n:].astype(np.int64) @ w[..., :n].astype(np.int64).T
    ) % 2


def random_clifford(n: int, rng: np.random.Generator) -> CliffordOp:
    """Uniformly random n-qubit Clifford (mod global phase).

    Samples a uniform symplectic basis pair by pair: each X_k image is a
    uniform nonzero vector in the symplectic complement of the previous
    pairs, each Z_k image a uniform vector there with unit symplectic
    product against it (rejection sampling), then uniform +/- signs.
    Uniformity over the group is the contract; the n=1 case is exhaustively
    tested against the 24-element group.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    a_rows = np.zeros((n, 2 * n), dtype=np.uint8)
    b_rows = np.zeros((n, 2 * n), dtype=np.uint8)
    for k in range(n):
        prev_a = a_rows[:k]
        prev_b = b_rows[:k]

        def complement_sample() -> np.ndarray:
            v = rng.integers(0, 2, size=2 * n, dtype=np.uint8)
            if k:
                sa = _symplectic_product(v, prev_a, n)
                sb = _symplectic_product(v, prev_b, n)
                v = v ^ ((sb[None, :] @ prev_a) % 2).astype(np.uint8)[0]
                v = v ^ ((sa[None, :] @ prev_b) % 2).astype(np.uint8)[0]
            return v

        while True:
            a = complement_sample()
            if a.any():
                break
        while True:
            b = complement_sample()
            if _symplectic_product(a, b.reshape(1, -1), n)[0] == 1:
                break
        a_rows[k] = a
        b_rows[k] = b
    tab = np.concatenate([a_rows, b_rows], axis=0)
    diag = (tab[:, :n].astype(np.int64) * tab[:, n:].astype(np.int64)).sum(axis=1) % 2
    signs = rng.integers(0, 2, size=2 * n, dtype=np.int64)
    r = (diag + 2 * signs) % 4
    return CliffordOp(n, tab, r.astype(np.uint8))


def independent_rows(bits: np.ndarray) -> bool:
    """True when the (k, 2n) Pauli bit rows are GF(2)-independent."""
    return rank(bits) == bits.shape[0]

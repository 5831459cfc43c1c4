"""GF(2) linear algebra on bit matrices, packed into Python ints per row."""

from __future__ import annotations

import numpy as np


def pack_rows(mat: np.ndarray) -> list[int]:
    """Pack each row of a 0/1 matrix into an int (bit j = column j)."""
    mat = np.asarray(mat, dtype=np.uint8) & 1
    if mat.shape[1] == 0:
        return [0] * mat.shape[0]
    packed = np.packbits(mat, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def rank(mat: np.ndarray) -> int:
    """GF(2) rank of a 0/1 matrix."""
    rows = [r for r in pack_rows(mat) if r]
    rnk = 0
    while rows:
        pivot = rows.pop()
        rnk += 1
        low = pivot & -pivot
        rows = [(r ^ pivot) if (r & low) else r for r in rows]
        rows = [r for r in rows if r]
    return rnk


def solve_combination(mat: np.ndarray, target: np.ndarray) -> np.ndarray | None:
    """Find c over GF(2) with c @ mat = target, or None if unsolvable.

    Used for stabilizer-group membership: target expressed as a product of
    generator rows.
    """
    mat = np.asarray(mat, dtype=np.uint8) & 1
    k = mat.shape[0]
    rows = pack_rows(mat)
    combos = [1 << i for i in range(k)]
    tgt = pack_rows(target.reshape(1, -1))[0]
    tgt_combo = 0
    # Gauss-Jordan with combination tracking; pivot rows kept fully reduced
    # against each other so one elimination pass per row suffices
    pivots: list[list[int]] = []  # [low bit, row, combo]
    for r, c in zip(rows, combos):
        for low, pr, pc in pivots:
            if r & low:
                r ^= pr
                c ^= pc
        if not r:
            continue
        low = r & -r
        for p in pivots:
            if p[1] & low:
                p[1] ^= r
                p[2] ^= c
        pivots.append([low, r, c])
    for low, pr, pc in pivots:
        if tgt & low:
            tgt ^= pr
            tgt_combo ^= pc
    if tgt:
        return None
    out = np.zeros(k, dtype=np.uint8)
    for i in range(k):
        if tgt_combo & (1 << i):
            out[i] = 1
    return out

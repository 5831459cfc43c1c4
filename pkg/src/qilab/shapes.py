"""Register geometry shared by every run: reference R, system A, bath B."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SystemShape:
    """Qubit counts for the three registers and their derived dimensions.

    Global qubit order is R (indices 0..n_r-1), then A, then B.
    """

    n_r: int
    n_a: int
    n_b: int

    def __post_init__(self) -> None:
        if self.n_r < 0 or self.n_a < 0 or self.n_b < 0:
            raise ValueError("register sizes must be nonnegative")
        if self.n_r > self.n_a:
            raise ValueError("need n_r <= n_a (Bell pairs land in A)")

    @property
    def n_total(self) -> int:
        return self.n_r + self.n_a + self.n_b

    @property
    def d_r(self) -> int:
        return 2**self.n_r

    @property
    def d_a(self) -> int:
        return 2**self.n_a

    @property
    def d_b(self) -> int:
        return 2**self.n_b

    @property
    def region_r(self) -> list[int]:
        return list(range(self.n_r))

    @property
    def region_a(self) -> list[int]:
        return list(range(self.n_r, self.n_r + self.n_a))

    @property
    def region_b(self) -> list[int]:
        return list(range(self.n_r + self.n_a, self.n_total))

"""Two-by-two transfer-matrix evaluation of averaged purities.

After averaging over the random unitaries, each dynamical setting reduces
to a 2x2 matrix acting on the coefficients of the replicated boundary
state expressed in the identity/swap permutation basis.  Powers of that
matrix, contracted with the appropriate boundary vectors, give the
(pseudo-)purity of the reference (R), data (A), or joint (RA) subsystem.

When the replica parameter ``m`` is an integer (including the analytic
continuation point m = -1) everything is evaluated with exact rational
arithmetic, so these results serve as an independent oracle for the
closed-form expressions in :mod:`qilab.theory`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

VARIANTS = ("conditioned", "reset", "no-reset", "fully-mixed", "partial")
BOUNDARIES = ("R", "A", "RA")


@dataclass(frozen=True)
class TransferShape:
    """Subsystem sizes entering a transfer-matrix evaluation.

    ``n_r`` is the number of initially entangled qubits and defaults to
    ``n_a`` (every data qubit paired with the reference).  ``n_e`` and
    ``s`` are only used by the periodic-erasure ("partial") variant:
    ``n_e`` bath qubits are erased once every ``s`` steps.
    """

    n_a: int
    n_b: int
    n_r: int | None = None
    n_e: int | None = None
    s: int | None = None

    def __post_init__(self):
        if self.n_a < 1 or self.n_b < 0:
            raise ValueError("need n_a >= 1 and n_b >= 0")
        if self.n_r is not None and not 1 <= self.n_r <= self.n_a:
            raise ValueError("need 1 <= n_r <= n_a")

    @property
    def d_a(self) -> int:
        return 2**self.n_a

    @property
    def d_b(self) -> int:
        return 2**self.n_b

    @property
    def d_x(self) -> int:
        """Dimension of the entangled boundary (d_r if set, else d_a)."""
        return 2**(self.n_r if self.n_r is not None else self.n_a)


def _mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


#: memo for repeated powers of the same matrix (as when sweeping t over a
#: grid); keys are hashable entry tuples, so exact rationals are fine
_POW_CACHE: dict[tuple, tuple] = {}


def _mat_pow(a, k: int):
    one = a[0][0] - a[0][0] + 1  # multiplicative identity of the entry type
    if k == 0:
        return ((one, 0 * one), (0 * one, one))
    key = (a, k)
    cached = _POW_CACHE.get(key)
    if cached is None:
        cached = _mat_mul(_mat_pow(a, k - 1), a)
        if len(_POW_CACHE) > 100_000:
            _POW_CACHE.clear()
        _POW_CACHE[key] = cached
    return cached


def _mat_vec(a, v):
    return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])


def _is_integral(m) -> bool:
    return isinstance(m, int) or (isinstance(m, float) and m.is_integer())


def transfer_purity(variant: str, m, shape: TransferShape, t: int, boundary: str = "A"):
    """Averaged (pseudo-)purity from the 2x2 transfer-matrix evolution.

    ``variant`` selects the dynamics:

    - ``conditioned``: outcome-weighted pseudo-purity of A after ``t``
      rounds of scrambling plus monitored bath reset; ``m`` is the
      replica weight on the outcome probabilities (m = -1 recovers the
      Born-average purity).  Only boundary ``A`` is meaningful.
    - ``reset``: second moment of the unconditioned state with bath reset
      to a pure state each step; ``boundary`` selects P_R, P_A or P_RA.
    - ``no-reset``: same, but the bath is never reset (measured and kept).
    - ``fully-mixed``: bath reset to the maximally mixed state.
    - ``partial``: monitored dynamics where ``shape.n_e`` bath qubits are
      erased (measured and forgotten) every ``shape.s`` steps; returns the
      outcome-weighted pseudo-purity selected by ``boundary``.

    Entries are exact rationals whenever ``m`` is integral.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if boundary not in BOUNDARIES:
        raise ValueError(f"unknown boundary {boundary!r}")
    if t < 0:
        raise ValueError("t must be non-negative")

    if variant == "conditioned":
        return _conditioned(m, shape, t, boundary)
    if variant == "partial":
        return _partial(m, shape, t, boundary)
    if not (_is_integral(m) and int(m) == -1):
        raise ValueError(f"variant {variant!r} is a plain second moment; pass m=-1")
    if variant == "reset":
        return _reset(shape, t, boundary)
    if variant == "no-reset":
        return _no_reset(shape, t, boundary)
    return _fully_mixed(shape, t, boundary)


def _conditioned(m, shape: TransferShape, t: int, boundary: str):
    if boundary != "A":
        raise ValueError("conditioned variant tracks the purity of A only")
    d_a, d_b, d_x = shape.d_a, shape.d_b, shape.d_x
    if _is_integral(m):
        pref = Fraction(d_b) ** (-(int(m) + 1))
        q_t = pref * (1 - Fraction(1, d_a * d_a * d_b))
        q_e = pref * Fraction(1, d_a) * (1 - Fraction(1, d_b))
    else:
        pref = float(d_b) ** (-(m + 1))
        q_t = pref * (1.0 - 1.0 / (d_a * d_a * d_b))
        q_e = pref * (1.0 - 1.0 / d_b) / d_a
    q = ((q_t, q_e), (q_e, q_t))
    v = _mat_vec(_mat_pow(q, t), (q_t * 0 + 1, q_t * 0))
    # boundary overlaps reduce to 1/d_x and 1 for any m
    return v[0] / d_x + v[1]


def _reset_matrix(d_a: int, d_b: int):
    den = d_a * d_a * d_b * d_b - 1
    b = Fraction(d_b * (d_a * d_a - 1), den)
    a = Fraction(d_a * (d_b * d_b - 1), den)
    return ((b, Fraction(0)), (a, Fraction(1)))


def _contract(v, d_x: int, boundary: str):
    if boundary == "R":
        return Fraction(1, d_x)
    if boundary == "A":
        return v[0] / d_x + v[1]
    return v[0] + v[1] / d_x


def _reset(shape: TransferShape, t: int, boundary: str):
    w = _reset_matrix(shape.d_a, shape.d_b)
    v = _mat_vec(_mat_pow(w, t), (Fraction(1), Fraction(0)))
    return _contract(v, shape.d_x, boundary)


def _no_reset(shape: TransferShape, t: int, boundary: str):
    d_a, d_b = shape.d_a, shape.d_b
    if t == 0:
        return _contract((Fraction(1), Fraction(0)), d_a, boundary)
    den = d_a * d_a * d_b * d_b - 1
    m = (
        (Fraction(d_a * d_a * d_b - 1, den), Fraction(0)),
        (Fraction(d_a * (d_b - 1), den), Fraction(1)),
    )
    v1 = (Fraction(d_b * (d_a * d_a - 1), den), Fraction(d_a * (d_b * d_b - 1), den))
    v = _mat_vec(_mat_pow(m, t - 1), v1)
    return _contract(v, d_a, boundary)


def _fully_mixed(shape: TransferShape, t: int, boundary: str):
    d_a, d_b = shape.d_a, shape.d_b
    if t == 0:
        return _contract((Fraction(1), Fraction(0)), d_a, boundary)
    den = d_a * d_a * d_b * d_b - 1
    wm = (
        (Fraction(d_b * d_b * (d_a * d_a - 1), den), Fraction(0)),
        (Fraction(d_a * d_b * d_b * (d_b * d_b - 1), den), Fraction(d_b * d_b)),
    )
    v = _mat_vec(_mat_pow(wm, t - 1), (Fraction(1), Fraction(0)))
    v = _mat_vec(_reset_matrix(d_a, d_b), v)
    pref = Fraction(1, d_b ** (2 * (t - 1)))
    return _contract((v[0] * pref, v[1] * pref), d_a, boundary)


def _partial(m, shape: TransferShape, t: int, boundary: str):
    if shape.n_e is None or shape.s is None:
        raise ValueError("partial variant needs shape.n_e and shape.s")
    if shape.s < 1 or not 1 <= shape.n_e <= shape.n_b:
        raise ValueError("need s >= 1 and 1 <= n_e <= n_b")
    d_a, d_b, s = shape.d_a, shape.d_b, shape.s
    d_e = 2**shape.n_e
    n_s = t // s
    residue = t - s * n_s
    exact = _is_integral(m)
    if exact:
        pref = Fraction(d_b) ** (-(int(m) + 1) * t)
        one = Fraction(1)
    else:
        pref = float(d_b) ** (-(m + 1) * t)
        one = 1.0
    lam_ns = one / d_e**n_s
    # explicit sums over the erasure positions within the window
    c12 = sum(one / d_e ** (n_s - i) for i in range(n_s))
    c21 = sum(one / d_e**i for i in range(n_s))
    t11 = pref * lam_ns
    t12 = pref * (s * c12 + residue) / d_a
    t21 = pref * (s * c21 + residue * lam_ns) / d_a
    t22 = pref * one
    if boundary == "R":
        return t12 + t22 / d_a
    if boundary == "A":
        return t11 / d_a + t21
    return t11 + t21 / d_a

"""Closed-form information-decay curves and lifetime formulas.

Every curve describes how much quantum mutual information (QMI, in bits)
survives between a reference R and a data system A after ``t`` rounds of
scrambling with a small bath B, under different monitoring and reset
protocols.  The ``thmN_*`` naming follows the curve-kind vocabulary used
throughout the CLI and the acceptance suite:

- thm1/thm2: monitored dynamics with bath reset, conditioned on the
  outcome record (thm2 for fewer initially entangled qubits N_R < N_A).
- thm3/thm4: unconditioned dynamics with pure bath reset.
- thm5: monitored dynamics with periodic erasure every ``s`` steps.
- thm6: measured-but-never-reset bath.
- thm7: bath reset to the fully mixed state.

Exact/full forms are evaluated from exact rational purities with the
logarithm taken last, so huge dimensions (d_A = 2**64 and beyond) incur
no intermediate rounding.  Bounds may go negative at late times; the
values are reported as-is and :class:`TheoryCurve` carries a validity
flag alongside each one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

__all__ = [
    "CURVE_KINDS",
    "TheoryCurve",
    "thm1_lower_bound",
    "thm1_lifetime",
    "thm2_lower_bound",
    "thm2_lifetime",
    "thm3_unconditioned",
    "thm3_lifetime",
    "thm4_transition",
    "thm5_partial",
    "thm5_lifetime",
    "thm6_no_reset",
    "thm7_mixed_reset",
    "thm7_lifetime",
]


def _log2(x: Fraction | float) -> float:
    """Base-2 log that stays accurate for huge exact rationals."""
    if isinstance(x, Fraction):
        if x <= 0:
            raise ValueError("log2 of a non-positive value")
        return math.log2(x.numerator) - math.log2(x.denominator)
    return math.log2(x)


def _qmi_from_purities(p_r: Fraction, p_a: Fraction, p_ra: Fraction) -> float:
    """-log2 P_R - log2 P_A + log2 P_RA without catastrophic cancellation.

    The three purities are combined into one exact rational ratio first;
    when that ratio is close to 1 (late times, QMI << 1 bit) the value is
    taken via log1p so tiny QMIs keep full relative precision.
    """
    ratio = p_ra / (p_r * p_a)
    x = ratio - 1
    if abs(x) < Fraction(1, 2):
        return math.log1p(float(x)) / math.log(2)
    return _log2(ratio)


def _check_shape(n_a: int, n_b: int, t: int) -> None:
    if n_a < 1 or n_b < 0:
        raise ValueError("need n_a >= 1 and n_b >= 0")
    if t < 0 or t != int(t):
        raise ValueError("t must be a non-negative integer")


# ---------------------------------------------------------------------------
# conditioned QMI with reset (thm1: all of A entangled, thm2: N_R < N_A)


def thm1_conditional_purity(n_a: int, n_b: int, t: int) -> Fraction:
    """Outcome-averaged purity of A under monitored dynamics with reset."""
    d_a, d_b = 2**n_a, 2**n_b
    num = (d_a + 1) ** (t + 1) * (d_a * d_b - 1) ** t - (d_a - 1) ** (t + 1) * (
        d_a * d_b + 1
    ) ** t
    return Fraction(num, 2 * d_a ** (2 * t + 1) * d_b**t)


def thm1_lower_bound(n_a: int, n_b: int, t: int, form: str = "full") -> float:
    """Conditioned-QMI lower bound; ``form`` is ``full`` or ``asymptotic``."""
    _check_shape(n_a, n_b, t)
    if form == "full":
        return -2.0 * _log2(thm1_conditional_purity(n_a, n_b, t))
    if form == "asymptotic":
        d_b = 2**n_b
        return 2.0 * n_a - 2.0 * math.log2((1.0 - 1.0 / d_b) * t + 1.0)
    raise ValueError(f"unknown form {form!r}")


def thm1_lifetime(n_a: int, n_b: int, epsilon: float) -> float:
    """Steps until the conditioned QMI drops below 2*epsilon*n_a."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if n_b < 1:
        raise ValueError("lifetime undefined without a bath (n_b >= 1)")
    d_b = 2**n_b
    return d_b / (d_b - 1) * (2.0 ** ((1.0 - epsilon) * n_a) - 1.0)


def thm2_conditional_purity(n_r: int, n_a: int, n_b: int, t: int) -> Fraction:
    """Outcome-averaged purity of A with only n_r entangled qubits."""
    d_r, d_a, d_b = 2**n_r, 2**n_a, 2**n_b
    num = (d_a + 1) ** t * (d_a * d_b - 1) ** t * (1 + d_r) - (d_a - 1) ** t * (
        d_a * d_b + 1
    ) ** t * (d_r - 1)
    return Fraction(num, 2 * d_r * d_a ** (2 * t) * d_b**t)


def thm2_lower_bound(n_r: int, n_a: int, n_b: int, t: int, form: str = "full") -> float:
    """Conditioned-QMI lower bound with n_r <= n_a entangled qubits."""
    _check_shape(n_a, n_b, t)
    if not 1 <= n_r <= n_a:
        raise ValueError("need 1 <= n_r <= n_a")
    if form == "full":
        return -2.0 * _log2(thm2_conditional_purity(n_r, n_a, n_b, t))
    if form == "asymptotic":
        d_r, d_a, d_b = 2**n_r, 2**n_a, 2**n_b
        inner = 1.0 - (d_r + 1.0) / (d_r * d_b) + 1.0 / (2.0 * d_r)
        return 2.0 * n_r - 2.0 * math.log2(1.0 + d_r * t / d_a * inner)
    raise ValueError(f"unknown form {form!r}")


def thm2_lifetime(n_r: int, n_a: int, epsilon: float) -> float:
    """Steps until the conditioned QMI drops below 2*epsilon*n_r (large bath)."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 1 <= n_r <= n_a:
        raise ValueError("need 1 <= n_r <= n_a")
    return 2.0 ** (n_a - n_r) * (2.0 ** ((1.0 - epsilon) * n_r) - 1.0)


# ---------------------------------------------------------------------------
# unconditioned QMI with pure reset (thm3: N_R = N_A, thm4: N_R <= N_A)


def _reset_decay_rate(d_a: int, d_b: int) -> Fraction:
    return Fraction(d_b * (d_a * d_a - 1), d_a * d_a * d_b * d_b - 1)


def thm3_purities(n_a: int, n_b: int, t: int) -> tuple[Fraction, Fraction, Fraction]:
    """(P_R, P_A, P_RA) second moments for unconditioned reset dynamics."""
    d_a, d_b = 2**n_a, 2**n_b
    rt = _reset_decay_rate(d_a, d_b) ** t
    den = 1 + d_a * d_a * d_b
    p_a = Fraction(d_a * (1 + d_b), den) + Fraction(1 - d_a * d_a, d_a * den) * rt
    p_ra = Fraction(1 + d_b, den) + Fraction(d_b * (d_a * d_a - 1), den) * rt
    return Fraction(1, d_a), p_a, p_ra


def thm3_unconditioned(n_a: int, n_b: int, t: int, form: str = "exact") -> float:
    """Renyi-2 QMI without monitoring; forms: exact, early, late."""
    _check_shape(n_a, n_b, t)
    if form == "exact":
        return _qmi_from_purities(*thm3_purities(n_a, n_b, t))
    if form == "early":
        return 2.0 * n_a - t * n_b
    if form == "late":
        return float(Fraction(4**n_a, (2**n_b) ** t))
    raise ValueError(f"unknown form {form!r}")


def thm3_lifetime(n_a: int, n_b: int, epsilon: float, regime: str = "linear") -> float:
    """Unconditioned lifetime: ``linear`` drain or ``residual`` tail."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if n_b < 1:
        raise ValueError("lifetime undefined without a bath (n_b >= 1)")
    if regime == "linear":
        return 2.0 * (1.0 - epsilon) * n_a / n_b
    if regime == "residual":
        return math.log2(1.0 / epsilon) / n_b
    raise ValueError(f"unknown regime {regime!r}")


def thm4_purities(
    n_r: int, n_a: int, n_b: int, t: int
) -> tuple[Fraction, Fraction, Fraction]:
    """(P_R, P_A, P_RA) with only n_r initially entangled qubits."""
    d_r, d_a, d_b = 2**n_r, 2**n_a, 2**n_b
    rt = _reset_decay_rate(d_a, d_b) ** t
    coeff = Fraction(d_a * (d_b + 1), d_a * d_a * d_b + 1)
    p_a = rt / d_r + coeff * (1 - rt)
    p_ra = rt + coeff / d_r * (1 - rt)
    return Fraction(1, d_r), p_a, p_ra


def thm4_transition(
    n_r: int, n_a: int, n_b: int, t: int, form: str = "asymptotic"
) -> float:
    """Unconditioned QMI for n_r <= n_a; forms: asymptotic, piecewise."""
    _check_shape(n_a, n_b, t)
    if not 1 <= n_r <= n_a:
        raise ValueError("need 1 <= n_r <= n_a")
    d_r, d_a, d_bt = 2**n_r, 2**n_a, (2**n_b) ** t
    if form == "asymptotic":
        return _log2(1 + Fraction(d_r * d_a, d_bt)) - _log2(
            1 + Fraction(d_a - d_r, d_r * d_bt)
        )
    if form == "piecewise":
        tau_minus = (n_a - n_r) / n_b
        tau_plus = (n_a + n_r) / n_b
        if t < tau_minus:
            return 2.0 * n_r
        if t < tau_plus:
            return float(n_a + n_r - n_b * t)
        return 0.0
    raise ValueError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# conditioned QMI with periodic erasure (thm5)


def _check_partial(n_a: int, n_b: int, n_e: int, s) -> None:
    if n_a < 1 or n_b < 1:
        raise ValueError("need n_a >= 1 and n_b >= 1")
    if not 1 <= n_e <= n_b:
        raise ValueError("need 1 <= n_e <= n_b")
    if not (s == math.inf or (s == int(s) and s >= 1)):
        raise ValueError("erasure period s must be a positive integer or inf")


def thm5_gammas(
    n_a: int, n_b: int, n_e: int, s: int, t: int
) -> tuple[Fraction, Fraction, Fraction]:
    """(gamma_R, gamma_A, gamma_RA) outcome-averaged purities, erasure every s."""
    _check_partial(n_a, n_b, n_e, s)
    d_a, d_e = 2**n_a, 2**n_e
    n_s = t // s
    residue = t - s * n_s
    c12 = sum(Fraction(1, d_e ** (n_s - i)) for i in range(n_s))
    c21 = sum(Fraction(1, d_e**i) for i in range(n_s))
    lam_ns = Fraction(1, d_e**n_s)
    gamma_r = Fraction(s * c12 + residue + 1, 1) / d_a
    gamma_a = (s * c21 + (residue + 1) * lam_ns) / d_a
    gamma_ra = lam_ns + (s * c21 + residue * lam_ns) / d_a**2
    return gamma_r, gamma_a, gamma_ra


def thm5_partial(
    n_a: int, n_b: int, n_e: int, s, t: int, form: str = "full"
) -> float:
    """Conditioned QMI when n_e bath qubits are erased every s steps."""
    _check_partial(n_a, n_b, n_e, s)
    if t < 0:
        raise ValueError("t must be non-negative")
    if s == math.inf:
        n_s, residue = 0, t
    else:
        s = int(s)
        n_s, residue = t // s, t % s
    if form == "full":
        d_e = 2**n_e
        lam_ns = Fraction(1, d_e**n_s)
        geo = Fraction(d_e**n_s - 1, d_e**n_s * (d_e - 1))
        window = 0 if n_s == 0 else s * geo
        arg1 = window + residue + 1
        arg2 = (0 if n_s == 0 else s * d_e * geo) + (residue + 1) * lam_ns
        return 2.0 * n_a - n_s * n_e - _log2(Fraction(arg1)) - _log2(Fraction(arg2))
    if form == "simplified":
        if s == math.inf:
            raise ValueError("simplified form needs a finite erasure period")
        return 2.0 * n_a - n_s * n_e - math.log2(1 + residue) - math.log2(s)
    raise ValueError(f"unknown form {form!r}")


def thm5_lifetime(n_a: int, n_e: int, s: int, epsilon: float) -> float:
    """Steps until the erasure-limited conditioned QMI hits 2*epsilon*n_a."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if n_e < 1 or s < 1:
        raise ValueError("need n_e >= 1 and s >= 1")
    return s * ((2.0 - epsilon) * n_a - math.log2(s)) / n_e


# ---------------------------------------------------------------------------
# unconditioned QMI without reset (thm6) and with fully-mixed reset (thm7)


def thm6_purities(n_a: int, n_b: int, t: int) -> tuple[Fraction, Fraction, Fraction]:
    """(P_R, P_A, P_RA) when the bath is measured but never reset (t >= 1)."""
    d_a, d_b = 2**n_a, 2**n_b
    mu_t = Fraction(d_a * d_a * d_b - 1, d_a * d_a * d_b * d_b - 1) ** t
    p_a = Fraction((d_a * d_a - 1) * (d_b - 1), d_a * (d_a * d_a * d_b - 1)) * mu_t + (
        Fraction(1, d_a)
    )
    p_ra = Fraction(d_a * d_a - 1, d_a * d_a) * mu_t + Fraction(1, d_a * d_a)
    return Fraction(1, d_a), p_a, p_ra


def thm6_no_reset(n_a: int, n_b: int, t: int) -> float:
    """Renyi-2 QMI with a never-reset bath; stated for t >= 1."""
    _check_shape(n_a, n_b, t)
    if t == 0:
        warnings.warn(
            "no-reset curve is defined for t >= 1; returning the t=0 "
            "continuity value 2*n_a",
            stacklevel=2,
        )
        return 2.0 * n_a
    return _qmi_from_purities(*thm6_purities(n_a, n_b, t))


def thm7_purities(n_a: int, n_b: int, t: int) -> tuple[Fraction, Fraction, Fraction]:
    """(P_R, P_A, P_RA) when the bath is reset to the fully mixed state."""
    d_a, d_b = 2**n_a, 2**n_b
    u_t = Fraction(d_a * d_a - 1, d_a * d_a * d_b * d_b - 1) ** t
    p_a = Fraction(d_b - 1, d_a) * u_t + Fraction(1, d_a)
    p_ra = (d_b - Fraction(1, d_a * d_a)) * u_t + Fraction(1, d_a * d_a)
    return Fraction(1, d_a), p_a, p_ra


def thm7_mixed_reset(n_a: int, n_b: int, t: int, form: str = "exact") -> float:
    """Renyi-2 QMI with fully-mixed bath reset; forms: exact, early, late."""
    _check_shape(n_a, n_b, t)
    if form == "exact":
        return _qmi_from_purities(*thm7_purities(n_a, n_b, t))
    if form == "early":
        return 2.0 * n_a + n_b - 2.0 * n_b * t
    if form == "late":
        return float(Fraction(4**n_a * 2**n_b, (4**n_b) ** t))
    raise ValueError(f"unknown form {form!r}")


def thm7_lifetime(n_a: int, n_b: int, epsilon: float, regime: str = "linear") -> float:
    """Fully-mixed-reset lifetime: ``linear`` drain or ``residual`` tail."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if n_b < 1:
        raise ValueError("lifetime undefined without a bath (n_b >= 1)")
    if regime == "linear":
        return (1.0 - epsilon) * (n_a / n_b + 0.5)
    if regime == "residual":
        return math.log2(1.0 / epsilon) / (2.0 * n_b)
    raise ValueError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# curve objects


def _p(params: Mapping, *names):
    missing = [k for k in names if k not in params]
    if missing:
        raise ValueError(f"curve parameters missing: {missing}")
    return tuple(params[k] for k in names)


_DISPATCH: dict[str, Callable[[Mapping, int], float]] = {
    "thm1-lb": lambda p, t: thm1_lower_bound(*_p(p, "n_a", "n_b"), t, "full"),
    "thm1-asymptotic": lambda p, t: thm1_lower_bound(
        *_p(p, "n_a", "n_b"), t, "asymptotic"
    ),
    "thm2-lb": lambda p, t: thm2_lower_bound(
        *_p(p, "n_r", "n_a", "n_b"), t, p.get("form", "full")
    ),
    "thm3-exact": lambda p, t: thm3_unconditioned(*_p(p, "n_a", "n_b"), t, "exact"),
    "thm3-early": lambda p, t: thm3_unconditioned(*_p(p, "n_a", "n_b"), t, "early"),
    "thm3-late": lambda p, t: thm3_unconditioned(*_p(p, "n_a", "n_b"), t, "late"),
    "thm4-asymptotic": lambda p, t: thm4_transition(
        *_p(p, "n_r", "n_a", "n_b"), t, "asymptotic"
    ),
    "thm4-piecewise": lambda p, t: thm4_transition(
        *_p(p, "n_r", "n_a", "n_b"), t, "piecewise"
    ),
    "thm5-full": lambda p, t: thm5_partial(*_p(p, "n_a", "n_b", "n_e", "s"), t, "full"),
    "thm5-simplified": lambda p, t: thm5_partial(
        *_p(p, "n_a", "n_b", "n_e", "s"), t, "simplified"
    ),
    "thm6-exact": lambda p, t: thm6_no_reset(*_p(p, "n_a", "n_b"), t),
    "thm7-exact": lambda p, t: thm7_mixed_reset(*_p(p, "n_a", "n_b"), t, "exact"),
    "thm7-early": lambda p, t: thm7_mixed_reset(*_p(p, "n_a", "n_b"), t, "early"),
    "thm7-late": lambda p, t: thm7_mixed_reset(*_p(p, "n_a", "n_b"), t, "late"),
}

CURVE_KINDS = tuple(_DISPATCH)


@dataclass(frozen=True)
class TheoryCurve:
    """A closed-form curve evaluated on a grid of integer times.

    ``values`` maps t -> bits exactly as the formula gives them (bounds
    may be negative); ``valid`` flags whether each value is meaningful as
    an information content (non-negative).
    """

    kind: str
    params: dict
    values: dict[int, float]
    valid: dict[int, bool]

    @classmethod
    def evaluate(cls, kind: str, params: Mapping, times) -> "TheoryCurve":
        if kind not in _DISPATCH:
            raise ValueError(f"unknown curve kind {kind!r}; one of {CURVE_KINDS}")
        fn = _DISPATCH[kind]
        # register sizes and periods arrive as floats from JSON payloads;
        # the exact-arithmetic formulas need true integers
        params = {
            k: int(v) if isinstance(v, float) and v.is_integer() else v
            for k, v in dict(params).items()
        }
        values: dict[int, float] = {}
        for t in times:
            t = int(t)
            values[t] = fn(params, t)
        valid = {t: v >= 0.0 for t, v in values.items()}
        return cls(kind=kind, params=dict(params), values=values, valid=valid)

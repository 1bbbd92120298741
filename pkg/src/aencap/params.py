"""Channel parameterization, derived constants, and regime classification.

A channel instance is a triple of positive means (m_x, m_s, m_z): m_x is
the input mean budget, m_s the interference mean, m_z the noise mean.
Everything downstream is a function of the derived constants

    M   = m_x + m_z          scale of the exponential law of X + Z
    D   = M - m_s            spacing between the two mixing scales
    A1  = 1/m_s - 1/M        exponent gap, same sign as D
    B1  = (m_s - m_z) M / (m_x m_s)
    p0  = m_z / M            weight of the input point mass at zero
    snr = m_x / m_z

The sign of D selects which series expansion of the output and
interference entropies converges: Case1 (D > 0) expands around the scale
M, Case2 (D < 0) around m_s.  For D > 0 the identity
1 - B1 = m_z D / (m_x m_s) forces B1 < 1, and for D < 0 it forces
B1 > 1, hence B2 = 1/B1 in (0, 1).  B1 < -1 is possible (m_s < m_z with
small m_x); there the geometric expansion of the interference-plus-input
entropy diverges while the output-entropy expansion stays valid, so that
region is classified separately and routed to quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import NonPositiveMean

#: Relative half-width of the band around D = 0 treated as degenerate.
#: The closed forms divide by D, so the band scales with m_s.
DEGENERATE_REL_TOL = 1e-9


@dataclass(frozen=True)
class ChannelParams:
    """The three positive means defining a channel instance."""

    m_x: float
    m_s: float
    m_z: float

    def __post_init__(self) -> None:
        for name in ("m_x", "m_s", "m_z"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise NonPositiveMean(f"{name} must be a finite positive real, got {v!r}")
            object.__setattr__(self, name, float(v))


@dataclass(frozen=True)
class DerivedConstants:
    m: float          # m_x + m_z
    d: float          # m - m_s
    a1: float         # 1/m_s - 1/m
    b1: float         # (m_s - m_z) m / (m_x m_s)
    b2: float | None  # 1/b1, None when b1 == 0
    p0: float         # m_z / m
    snr: float        # m_x / m_z


class Regime(Enum):
    """Which closed-form evaluation applies to a channel instance."""

    CASE1 = "case1"                   # D > 0 and B1 >= -1
    CASE2 = "case2"                   # D < 0
    DEGENERATE = "degenerate"         # |D| within the degenerate band
    SERIES_INVALID = "series_invalid"  # D > 0 but B1 < -1


def validate_params(m_x: float, m_s: float, m_z: float) -> ChannelParams:
    """Validate raw means and return a channel instance.

    Raises NonPositiveMean if any input is non-finite or not strictly
    positive.
    """
    return ChannelParams(m_x, m_s, m_z)


def derive_constants(p: ChannelParams) -> DerivedConstants:
    """Compute the derived constants for a validated channel instance."""
    m = p.m_x + p.m_z
    d = m - p.m_s
    a1 = 1.0 / p.m_s - 1.0 / m
    b1 = (p.m_s - p.m_z) * m / (p.m_x * p.m_s)
    b2 = None if b1 == 0.0 else 1.0 / b1
    return DerivedConstants(m=m, d=d, a1=a1, b1=b1, b2=b2, p0=p.m_z / m, snr=p.m_x / p.m_z)


def is_degenerate(dc: DerivedConstants, rel_tol: float = DEGENERATE_REL_TOL) -> bool:
    """True when the two mixing scales coincide within the relative band."""
    m_s = dc.m - dc.d
    return abs(dc.d) <= rel_tol * m_s


def classify_regime(dc: DerivedConstants, rel_tol: float = DEGENERATE_REL_TOL) -> Regime:
    """Classify a channel instance into exactly one evaluation regime.

    Total over valid parameters: the four variants partition the space.
    Case2 implies B2 in (0, 1); this is asserted because it is forced
    algebraically and downstream code relies on it.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if is_degenerate(dc, rel_tol):
        return Regime.DEGENERATE
    if dc.d < 0:
        assert dc.b2 is not None and 0.0 < dc.b2 < 1.0, "Case2 must force B2 in (0,1)"
        return Regime.CASE2
    if dc.b1 < -1.0:
        return Regime.SERIES_INVALID
    return Regime.CASE1

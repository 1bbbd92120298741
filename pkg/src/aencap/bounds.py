"""Capacity bounds: outer bound, inner bound, asymptote, consolidated report.

The outer bound is ln(1 + m_x/m_z), independent of the interference
mean.  The inner bound is evaluated two ways: the closed forms (scalar
terms plus the regime's inner series over 1/D) and the entropy
composition H(Y) - H(Z) - H(U) + H(X).  The two agree identically in
exact arithmetic; in the degenerate band and where the U series
diverges only the quadrature composition is available.

The inner bound can exceed the outer bound at low SNR (for example at
m_x = m_s = m_z, where it is larger by about 0.153 nats).  Negative
gaps are reported raw and flagged with a ``negative_gap`` warning,
never clamped: the mixed-entropy bookkeeping behind the inner bound is
informal at small scales and hiding the anomaly would misrepresent the
formulas.  One consequence worth knowing: rescaling all three means by
alpha shifts the inner bound by -p0 ln(alpha), so inner-bound values at
equal SNR depend on the absolute noise scale, not just the ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .entropy import (
    QuadratureControl,
    h_exponential,
    h_input,
    h_u,
    h_u_quadrature,
    h_y,
    h_y_quadrature,
    u_constant_delta,
)
from .errors import NonConvergence, WrongRegime
from .params import ChannelParams, Regime, classify_regime, derive_constants
from .series import SeriesControl, SeriesResult, inner_series_case1, inner_series_case2


@dataclass(frozen=True)
class BoundsReport:
    params: ChannelParams
    regime: Regime
    c_out_nats: float
    c_in_nats: float
    gap_nats: float
    asymptote_nats: float
    method: str  # closed_form | composed_series | composed_quadrature
    diagnostics: Mapping[str, float] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def status(self) -> str:
        return ";".join(self.warnings) if self.warnings else "ok"


def c_out(p: ChannelParams) -> float:
    """Outer bound ln(1 + m_x/m_z) in nats; independent of m_s."""
    return math.log1p(p.m_x / p.m_z)


def high_snr_asymptote(p: ChannelParams) -> float:
    """ln(m_x/m_z): both bounds approach this as the SNR grows."""
    return math.log(p.m_x / p.m_z)


def _case1_scalar(p: ChannelParams) -> float:
    dc = derive_constants(p)
    return dc.p0 * math.log(p.m_x / p.m_z**2) + (p.m_x / dc.m) * math.log(dc.m / p.m_z)


def _case2_scalar(p: ChannelParams) -> float:
    dc = derive_constants(p)
    return (
        (p.m_x / dc.m) * math.log(dc.m / p.m_x)
        + p.m_z / p.m_s
        + math.log((p.m_s - p.m_z) / p.m_s)
        + math.log(dc.m / p.m_z)
        + dc.p0 * (-1.0 - math.log(p.m_z))
    )


def c_in_closed_case1(p: ChannelParams, ctrl: SeriesControl = SeriesControl()) -> float:
    """Closed-form inner bound for Case1 (D > 0, B1 >= -1), in nats."""
    s = inner_series_case1(p, ctrl)
    dc = derive_constants(p)
    return _case1_scalar(p) + s.value / dc.d


def c_in_closed_case2(p: ChannelParams, ctrl: SeriesControl = SeriesControl()) -> float:
    """Closed-form inner bound for Case2 (D < 0), in nats."""
    s = inner_series_case2(p, ctrl)
    return _case2_scalar(p) + s.value / (p.m_s - (p.m_x + p.m_z))


def c_in_components(
    p: ChannelParams,
    method: str = "series",
    ctrl: SeriesControl = SeriesControl(),
    qctrl: QuadratureControl = QuadratureControl(),
) -> float:
    """Inner bound by composition H(Y) - H(Z) - H(U) + H(X), in nats.

    ``method='series'`` uses the series entropies and is limited to the
    Case1/Case2 regimes; ``method='quadrature'`` is total.
    """
    hz = h_exponential(p.m_z).nats
    hx = h_input(p).nats
    if method == "series":
        regime = classify_regime(derive_constants(p))
        if regime not in (Regime.CASE1, Regime.CASE2):
            raise WrongRegime(f"series composition unavailable in regime {regime.value}")
        return h_y(p, ctrl).nats - hz - h_u(p, ctrl).nats + hx
    if method == "quadrature":
        return h_y_quadrature(p, qctrl).nats - hz - h_u_quadrature(p, qctrl).nats + hx
    raise ValueError(f"unknown method {method!r}")


def _closed_form(p: ChannelParams, regime: Regime, ctrl: SeriesControl) -> tuple[float, SeriesResult]:
    dc = derive_constants(p)
    if regime is Regime.CASE1:
        s = inner_series_case1(p, ctrl)
        return _case1_scalar(p) + s.value / dc.d, s
    s = inner_series_case2(p, ctrl)
    return _case2_scalar(p) + s.value / (p.m_s - dc.m), s


def bounds_report(
    p: ChannelParams,
    ctrl: SeriesControl = SeriesControl(),
    qctrl: QuadratureControl = QuadratureControl(),
) -> BoundsReport:
    """Evaluate both bounds with closed forms where the regime permits.

    Dispatch: Case1/Case2 use their closed forms; the degenerate band
    and the divergent-series region use the quadrature composition; a
    closed form that fails to converge also falls back to quadrature.
    Method provenance and series diagnostics are always recorded.
    """
    dc = derive_constants(p)
    regime = classify_regime(dc)
    diagnostics: dict[str, float] = {}
    method = "composed_quadrature"
    c_in_val: float
    if regime in (Regime.CASE1, Regime.CASE2):
        try:
            c_in_val, s = _closed_form(p, regime, ctrl)
            method = "closed_form"
            diagnostics["terms_used"] = float(s.terms_used)
            diagnostics["series_tail_bound"] = s.tail_bound
            diagnostics["erratum_delta"] = u_constant_delta(p)
        except NonConvergence:
            c_in_val = c_in_components(p, "quadrature", ctrl, qctrl)
    else:
        c_in_val = c_in_components(p, "quadrature", ctrl, qctrl)
    c_out_val = c_out(p)
    gap = c_out_val - c_in_val
    warn: tuple[str, ...] = ("negative_gap",) if gap < 0 else ()
    return BoundsReport(
        params=p,
        regime=regime,
        c_out_nats=c_out_val,
        c_in_nats=c_in_val,
        gap_nats=gap,
        asymptote_nats=high_snr_asymptote(p),
        method=method,
        diagnostics=diagnostics,
        warnings=warn,
    )

"""Capacity bounds for the additive exponential noise channel with
exponential interference known non-causally at the transmitter.

The public surface mirrors the module layout: ``params`` (validation,
derived constants, regimes), ``dists`` (densities, transforms, CDFs,
samplers), ``series`` (truncated two-scale sums with tail bounds),
``entropy`` (closed-form / series, quadrature, and Monte Carlo routes),
``bounds`` (outer and inner bounds plus the consolidated report),
``harness`` (cross-validation and sweeps), and ``cli``.
"""

from .bounds import (
    BoundsReport,
    bounds_report,
    c_in_closed_case1,
    c_in_closed_case2,
    c_in_components,
    c_out,
    high_snr_asymptote,
)
from .dists import (
    ChannelSample,
    HypoExpDist,
    MixedInputDist,
    UDist,
    input_cdf,
    input_laplace,
    input_pdf,
    mixed_input_dist,
    sample_channel,
    sample_input,
    u_cdf,
    u_pdf,
    write_samples_csv,
    y_cdf,
    y_pdf,
)
from .entropy import (
    EntropyValue,
    QuadratureControl,
    h_exponential,
    h_input,
    h_montecarlo,
    h_quadrature,
    h_u,
    h_u_quadrature,
    h_y,
    h_y_quadrature,
    u_constant_delta,
)
from .errors import (
    AencapError,
    NegativeArgument,
    NonConvergence,
    NonPositiveMean,
    ToleranceNotMet,
    WrongRegime,
)
from .harness import (
    CheckRecord,
    SweepResult,
    SweepRow,
    SweepSpec,
    ValidationReport,
    cross_validate,
    sweep,
)
from .params import (
    ChannelParams,
    DerivedConstants,
    Regime,
    classify_regime,
    derive_constants,
    validate_params,
)
from .series import (
    F,
    G,
    SeriesControl,
    SeriesResult,
    inner_series_case1,
    inner_series_case2,
    truncated_sum,
)

__version__ = "0.1.0"

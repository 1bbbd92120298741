"""Analytic densities, transforms, CDFs, and samplers for the channel laws.

Five laws appear in the model:

* X: the capacity-achieving input, a point mass at zero with weight
  p0 = m_z / M plus an exponential component of scale M = m_x + m_z and
  total weight m_x / M.  The point mass is carried explicitly as an
  (atom weight, continuous density) pair; it is never folded into a
  single density function, since entropies and samplers need the two
  pieces separately.
* S, Z: exponentials with means m_s and m_z.
* U = X + S: continuous, a signed mixture of two exponential scales.
* Y = X + S + Z: hypoexponential with scales {M, m_s}, because X + Z is
  exactly exponential with mean M.

Inside the degenerate band (M equal to m_s within the relative band of
params.DEGENERATE_REL_TOL) the closed densities divide by D = M - m_s,
so the analytic limits are used instead: the Erlang-2 law for Y and
exp(-u/M) (m_z M + m_x u) / M^3 for U.

Differences of nearby exponentials are evaluated through expm1 so the
densities and CDFs stay accurate near the degenerate band, and the
U-density switches to its two-term form once the geometric factor would
overflow, which happens only where the two terms differ by hundreds of
orders of magnitude anyway.

Samplers draw through the inverse CDF from independent, seed-derived
streams (numpy SeedSequence spawning), one stream per primitive
variable, so results are reproducible and independent of evaluation
order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np

from .errors import NegativeArgument
from .params import ChannelParams, derive_constants, is_degenerate

_EXP_SWITCH = 300.0  # beyond this the expm1 factorization would overflow

# Sub-stream indices for seed derivation; fixed so that samples for a
# given (n, params, seed) never depend on call order.
_STREAM_ATOM = 0
_STREAM_XMAG = 1
_STREAM_S = 2
_STREAM_Z = 3


@dataclass(frozen=True)
class MixedInputDist:
    """Point mass at zero plus an exponential component (the law of X)."""

    atom_weight: float
    cont_weight: float
    cont_mean: float


@dataclass(frozen=True)
class HypoExpDist:
    """Sum of two independent exponentials with distinct means (the law of Y)."""

    mean_a: float
    mean_b: float

    @property
    def mean(self) -> float:
        return self.mean_a + self.mean_b


@dataclass(frozen=True)
class UDist:
    """The law of U = X + S for a given channel instance."""

    params: ChannelParams

    @property
    def mean(self) -> float:
        return self.params.m_x + self.params.m_s


def mixed_input_dist(p: ChannelParams) -> MixedInputDist:
    dc = derive_constants(p)
    return MixedInputDist(atom_weight=dc.p0, cont_weight=p.m_x / dc.m, cont_mean=dc.m)


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def input_pdf(x, p: ChannelParams):
    """Atom weight and continuous density of the input law at x >= 0.

    Returns (atom_weight, continuous density at x).  The continuous
    density at x = 0 is its right limit m_x / M^2.
    """
    arr, scalar = _as_array(x)
    if np.any(arr < 0):
        raise NegativeArgument("input_pdf requires x >= 0")
    dc = derive_constants(p)
    cont = (p.m_x / dc.m**2) * np.exp(-arr / dc.m)
    return dc.p0, (float(cont) if scalar else cont)


def input_cdf(x, p: ChannelParams):
    """CDF of the input law; jumps from 0 to p0 at x = 0."""
    arr, scalar = _as_array(x)
    dc = derive_constants(p)
    out = np.where(arr < 0, 0.0, dc.p0 - (p.m_x / dc.m) * np.expm1(-np.maximum(arr, 0.0) / dc.m))
    return float(out) if scalar else out


def input_laplace(s, p: ChannelParams):
    """Laplace transform of the input law: (1 + m_z s) / (1 + M s)."""
    arr, scalar = _as_array(s)
    dc = derive_constants(p)
    out = (1.0 + p.m_z * arr) / (1.0 + dc.m * arr)
    return float(out) if scalar else out


def y_pdf(y, p: ChannelParams):
    """Density of Y = X + S + Z; zero for y <= 0."""
    arr, scalar = _as_array(y)
    dc = derive_constants(p)
    out = np.zeros_like(arr)
    pos = arr > 0
    yp = arr[pos]
    if is_degenerate(dc):
        out[pos] = yp * np.exp(-yp / p.m_s) / p.m_s**2
    else:
        arg = -yp * dc.a1
        safe = arg < _EXP_SWITCH
        out_pos = np.empty_like(yp)
        out_pos[safe] = -np.expm1(arg[safe]) * np.exp(-yp[safe] / dc.m) / dc.d
        big = ~safe
        out_pos[big] = (np.exp(-yp[big] / dc.m) - np.exp(-yp[big] / p.m_s)) / dc.d
        out[pos] = out_pos
    return float(out) if scalar else out


def y_cdf(y, p: ChannelParams):
    """CDF of Y, stable through expm1 near the degenerate band."""
    arr, scalar = _as_array(y)
    dc = derive_constants(p)
    out = np.zeros_like(arr)
    pos = arr > 0
    yp = arr[pos]
    if is_degenerate(dc):
        e = np.exp(-yp / p.m_s)
        out[pos] = -np.expm1(-yp / p.m_s) - (yp / p.m_s) * e
    else:
        out[pos] = (-dc.m * np.expm1(-yp / dc.m) + p.m_s * np.expm1(-yp / p.m_s)) / dc.d
    return float(out) if scalar else out


def u_pdf(u, p: ChannelParams):
    """Density of U = X + S; zero for u < 0, right-limit value at u = 0."""
    arr, scalar = _as_array(u)
    dc = derive_constants(p)
    out = np.zeros_like(arr)
    pos = arr >= 0
    up = arr[pos]
    if is_degenerate(dc):
        out[pos] = np.exp(-up / dc.m) * (p.m_z * dc.m + p.m_x * up) / dc.m**3
    else:
        w1 = p.m_x / dc.m
        pref = (w1 / dc.d) * np.exp(-up / dc.m)
        if dc.b1 <= 0.0:
            bracket = 1.0 - dc.b1 * np.exp(-up * dc.a1)
            out[pos] = pref * bracket
        else:
            arg = np.log(dc.b1) - up * dc.a1
            safe = arg < _EXP_SWITCH
            out_pos = np.empty_like(up)
            out_pos[safe] = pref[safe] * (-np.expm1(arg[safe]))
            big = ~safe
            w2 = (p.m_s - p.m_z) / p.m_s
            out_pos[big] = (w1 * np.exp(-up[big] / dc.m) - w2 * np.exp(-up[big] / p.m_s)) / dc.d
            out[pos] = out_pos
    return float(out) if scalar else out


def u_cdf(u, p: ChannelParams):
    arr, scalar = _as_array(u)
    dc = derive_constants(p)
    out = np.zeros_like(arr)
    pos = arr > 0
    up = arr[pos]
    if is_degenerate(dc):
        e = np.exp(-up / dc.m)
        out[pos] = -np.expm1(-up / dc.m) - (p.m_x * up / dc.m**2) * e
    else:
        out[pos] = (-p.m_x * np.expm1(-up / dc.m) + (p.m_s - p.m_z) * np.expm1(-up / p.m_s)) / dc.d
    return float(out) if scalar else out


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _exp_inverse_cdf(mean: float, uniforms: np.ndarray) -> np.ndarray:
    # -mean * log(1 - U); log1p keeps accuracy for small U.
    return -mean * np.log1p(-uniforms)


def sample_input(n: int, p: ChannelParams, seed: int) -> np.ndarray:
    """Draw n i.i.d. inputs: exact zeros with probability p0, else Exp(M)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    dc = derive_constants(p)
    atom = _stream(seed, _STREAM_ATOM).random(n) < dc.p0
    mags = _exp_inverse_cdf(dc.m, _stream(seed, _STREAM_XMAG).random(n))
    return np.where(atom, 0.0, mags)


@dataclass(frozen=True)
class ChannelSample:
    """One record per draw: input, interference, noise, u = x+s, y = x+s+z."""

    x: np.ndarray
    s: np.ndarray
    z: np.ndarray
    u: np.ndarray
    y: np.ndarray

    def __len__(self) -> int:
        return len(self.x)


def sample_channel(n: int, p: ChannelParams, seed: int) -> ChannelSample:
    """Draw n channel uses with independent per-variable streams."""
    x = sample_input(n, p, seed)
    s = _exp_inverse_cdf(p.m_s, _stream(seed, _STREAM_S).random(n))
    z = _exp_inverse_cdf(p.m_z, _stream(seed, _STREAM_Z).random(n))
    u = x + s
    return ChannelSample(x=x, s=s, z=z, u=u, y=u + z)


def write_samples_csv(sample: ChannelSample, fp: IO[str]) -> None:
    """Write one record per line, columns x,s,z,u,y, 17 significant digits."""
    fp.write("x,s,z,u,y\n")
    for row in zip(sample.x, sample.s, sample.z, sample.u, sample.y):
        fp.write(",".join(format(v, ".17g") for v in row) + "\n")

"""Independent oracle evaluations used to pin expected values in tests.

Everything here is written directly from the model definition (mixed
input law, independent exponential interference and noise) using plain
closed expressions and scipy quadrature, deliberately avoiding the
library's own stabilized forms, series machinery, and envelope logic,
so agreement between the two is meaningful.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate


def constants(m_x: float, m_s: float, m_z: float) -> dict[str, float]:
    m = m_x + m_z
    return {
        "m_x": m_x,
        "m_s": m_s,
        "m_z": m_z,
        "M": m,
        "D": m - m_s,
        "p0": m_z / m,
    }


def input_cont_density(x, m_x, m_s, m_z):
    m = m_x + m_z
    return (m_x / m**2) * np.exp(-np.asarray(x, dtype=float) / m)


def raw_y_density(y, m_x, m_s, m_z):
    """Two-exponential difference form, no cancellation protection."""
    m = m_x + m_z
    y = np.asarray(y, dtype=float)
    out = np.where(y > 0, (np.exp(-y / m) - np.exp(-y / m_s)) / (m - m_s), 0.0)
    return out


def raw_u_density(u, m_x, m_s, m_z):
    m = m_x + m_z
    u = np.asarray(u, dtype=float)
    w1 = m_x / m
    w2 = (m_s - m_z) / m_s
    out = np.where(u >= 0, (w1 * np.exp(-u / m) - w2 * np.exp(-u / m_s)) / (m - m_s), 0.0)
    return out


def quad_integral(pdf, scale: float, moment: int = 0) -> float:
    """Integral of pdf(t) t^moment over (0, 60 scale) with interior knots."""
    hi = 60.0 * scale
    pts = [scale / 100.0, scale / 10.0, scale, 10.0 * scale]
    val, _ = integrate.quad(
        lambda t: float(pdf(t)) * t**moment if moment else float(pdf(t)),
        0.0,
        hi,
        epsabs=1e-12,
        epsrel=1e-12,
        limit=400,
        points=pts,
    )
    return val


def quad_entropy(pdf, scale: float) -> float:
    """-int f ln f over (0, 60 scale); the tail beyond is below 1e-12 for
    the unit-scale densities this is used with."""
    hi = 60.0 * scale

    def integrand(t: float) -> float:
        v = float(pdf(t))
        return -v * math.log(v) if v > 0 else 0.0

    pts = [scale / 100.0, scale / 10.0, scale, 10.0 * scale]
    val, _ = integrate.quad(integrand, 0.0, hi, epsabs=1e-12, epsrel=1e-12, limit=400, points=pts)
    return val


def conv_u_density(u: float, m_x: float, m_s: float, m_z: float) -> float:
    """Density of X + S by direct convolution of the mixed input law
    with the interference exponential."""
    m = m_x + m_z
    p0 = m_z / m
    f_s = lambda t: np.exp(-t / m_s) / m_s if t >= 0 else 0.0
    atom_part = p0 * f_s(u)
    if u <= 0:
        return atom_part
    cont, _ = integrate.quad(
        lambda x: float(input_cont_density(x, m_x, m_s, m_z)) * f_s(u - x),
        0.0,
        u,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=200,
    )
    return atom_part + cont


def conv_t_density(t: float, m_x: float, m_s: float, m_z: float) -> float:
    """Density of X + Z by direct convolution (should be Exp(m_x + m_z))."""
    m = m_x + m_z
    p0 = m_z / m
    f_z = lambda v: np.exp(-v / m_z) / m_z if v >= 0 else 0.0
    atom_part = p0 * f_z(t)
    if t <= 0:
        return atom_part
    cont, _ = integrate.quad(
        lambda x: float(input_cont_density(x, m_x, m_s, m_z)) * f_z(t - x),
        0.0,
        t,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=200,
    )
    return atom_part + cont


def conv_y_density(y: float, m_x: float, m_s: float, m_z: float) -> float:
    """Density of X + S + Z by nested convolution (slow; spot checks only)."""
    if y <= 0:
        return 0.0
    f_s = lambda v: np.exp(-v / m_s) / m_s if v >= 0 else 0.0
    val, _ = integrate.quad(
        lambda t: conv_t_density(t, m_x, m_s, m_z) * f_s(y - t),
        0.0,
        y,
        epsabs=1e-11,
        epsrel=1e-10,
        limit=200,
    )
    return val


def laplace_numeric(s: float, m_x: float, m_s: float, m_z: float) -> float:
    """Numeric Laplace transform of the mixed input law: atom plus quadrature."""
    m = m_x + m_z
    p0 = m_z / m
    scale = 1.0 / (s + 1.0 / m)  # decay scale of the damped integrand
    cont, _ = integrate.quad(
        lambda x: math.exp(-s * x) * float(input_cont_density(x, m_x, m_s, m_z)),
        0.0,
        80.0 * scale,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=400,
        points=[scale, 10.0 * scale],
    )
    return p0 + cont


def brute_sum(term, n_terms: int) -> float:
    """Plain partial sum of term(k) for k = 1..n_terms, chunked float64."""
    total = 0.0
    chunk = 1 << 20
    k0 = 1
    while k0 <= n_terms:
        k1 = min(k0 + chunk - 1, n_terms)
        ks = np.arange(k0, k1 + 1, dtype=np.float64)
        total += float(np.sum(term(ks)))
        k0 = k1 + 1
    return total


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov sup distance between an empirical sample and cdf."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    f = np.asarray(cdf(x), dtype=float)
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return float(max(upper, lower))

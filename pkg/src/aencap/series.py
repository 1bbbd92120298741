"""Truncated evaluation of the two-scale entropy series with tail bounds.

All series here are sums over k >= 1 built from the ladder functions

    F(k) = k/m_s - (k-1)/M      (increasing when D = M - m_s > 0)
    G(k) = k/M - (k-1)/m_s      (increasing when D < 0)

Two families appear:

* telescoping sums  sum_k (1/k) (1/F(k) - 1/F(k+1)),  whose terms decay
  like 1/k^3 and whose tail after K is bounded by 1/((K+1) F(K+1))
  because sum_{k>K} (a_k - a_{k+1}) telescopes to a_{K+1};
* geometric sums    sum_k (B^k/k) (w1/F(k) - w2/F(k+1)), whose tail is
  bounded through the ratio |B| < 1.  At the boundary B = -1 the sum is
  alternating with quadratically decaying terms; it is still summed, but
  the reported tail bound is a widened heuristic (twice the last term)
  rather than a proven envelope.

Summation is one-pass with compensated accumulation: terms are
evaluated in vectorized blocks, summed pairwise within each block, and
block sums are combined with Neumaier error-free transformation, so the
rounding floor stays far below the tail bounds.  A sum counts as
converged only when three consecutive terms fall below the mixed
absolute/relative threshold and the analytic tail bound itself falls
below that threshold, so converged results carry a certified error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonConvergence, WrongRegime
from .params import ChannelParams, Regime, classify_regime, derive_constants

_FIRST_BLOCK = 256
_MAX_BLOCK = 131072


@dataclass(frozen=True)
class SeriesControl:
    """Tolerances and caps governing truncated summation.

    max_terms defaults to 1e7: the telescoping sums have Theta(1/K^2)
    tails, so certifying a relative tail of 1e-12 on unit-scale
    instances takes about two million terms.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-15
    max_terms: int = 10_000_000
    min_terms: int = 8

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if not (self.max_terms >= self.min_terms >= 1):
            raise ValueError("require max_terms >= min_terms >= 1")


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    tail_bound: float
    converged: bool


def F(k, p: ChannelParams):
    """Ladder function k/m_s - (k-1)/M; accepts scalars or arrays."""
    m = p.m_x + p.m_z
    return k / p.m_s - (k - 1) / m


def G(k, p: ChannelParams):
    """Ladder function k/M - (k-1)/m_s; F with the two scales swapped."""
    m = p.m_x + p.m_z
    return k / m - (k - 1) / p.m_s


def _default_tail(k: int, last_abs: float) -> float:
    # Cubic-decay envelope: with C = |t_K| K^3, sum_{k>K} C/k^3 <= C/(2K^2).
    return 0.5 * last_abs * k


def truncated_sum(
    term: Callable[[np.ndarray], np.ndarray],
    ctrl: SeriesControl = SeriesControl(),
    tail_bound: Callable[[int, float], float] | None = None,
) -> SeriesResult:
    """Sum term(k) for k = 1, 2, ... until the stopping rule certifies the tail.

    ``term`` must be vectorized over a float64 array of indices.  The
    stopping rule requires, at a block boundary past ``min_terms``, that
    the last three terms and the tail bound all fall below
    max(abs_tol, rel_tol * |partial sum|).  ``tail_bound(k, |t_k|)``
    should bound the absolute remainder after summing through k; the
    default assumes cubic decay.

    Raises NonConvergence if max_terms is exhausted first.
    """
    if tail_bound is None:
        tail_bound = _default_tail
    total = 0.0
    comp = 0.0
    k0 = 1
    block = _FIRST_BLOCK
    while k0 <= ctrl.max_terms:
        k1 = min(k0 + block - 1, ctrl.max_terms)
        ks = np.arange(k0, k1 + 1, dtype=np.float64)
        ts = np.asarray(term(ks), dtype=np.float64)
        if not np.all(np.isfinite(ts)):
            raise NonConvergence("series produced a non-finite term")
        v = float(np.sum(ts))  # pairwise within the block
        t = total + v
        comp += (total - t) + v if abs(total) >= abs(v) else (v - t) + total
        total = t
        partial = total + comp
        thresh = max(ctrl.abs_tol, ctrl.rel_tol * abs(partial))
        recent = np.abs(ts[-3:]) if ts.size >= 3 else np.abs(ts)
        if k1 >= ctrl.min_terms and bool(np.all(recent <= thresh)):
            tb = float(tail_bound(k1, float(abs(ts[-1]))))
            if tb <= thresh:
                return SeriesResult(value=partial, terms_used=k1, tail_bound=tb, converged=True)
        k0 = k1 + 1
        block = min(block * 2, _MAX_BLOCK)
    raise NonConvergence(
        f"no convergence within {ctrl.max_terms} terms (partial sum {total + comp!r})"
    )


def _signed_power(base: float, ks: np.ndarray) -> np.ndarray:
    # base**k for integer k carried as float64; negative bases need the
    # sign split because numpy rejects fractional powers of negatives.
    if base >= 0.0:
        return base**ks
    mag = (-base) ** ks
    return np.where(ks % 2.0 == 0.0, mag, -mag)


def _telescoping_sum(ladder: Callable, p: ChannelParams, ctrl: SeriesControl) -> SeriesResult:
    def term(ks: np.ndarray) -> np.ndarray:
        return (1.0 / ks) * (1.0 / ladder(ks, p) - 1.0 / ladder(ks + 1.0, p))

    def tail(k: int, last_abs: float) -> float:
        return 1.0 / ((k + 1.0) * ladder(k + 1.0, p))

    return truncated_sum(term, ctrl, tail)


def _geometric_sum(
    ladder: Callable,
    p: ChannelParams,
    ctrl: SeriesControl,
    ratio: float,
    w_first: float,
    w_second: float,
) -> SeriesResult:
    """sum_k (ratio^k / k) (w_first/ladder(k) - w_second/ladder(k+1))."""
    if abs(ratio) > 1.0:
        raise WrongRegime(f"geometric weight {ratio} outside [-1, 1]; series diverges")

    def term(ks: np.ndarray) -> np.ndarray:
        b = _signed_power(ratio, ks)
        return (b / ks) * (w_first / ladder(ks, p) - w_second / ladder(ks + 1.0, p))

    absw = abs(w_first) + abs(w_second)
    if abs(ratio) < 1.0:

        def tail(k: int, last_abs: float) -> float:
            geo = abs(ratio) ** (k + 1) / (1.0 - abs(ratio))
            return absw * geo / ((k + 1.0) * ladder(k + 1.0, p))

    else:
        # Alternating boundary: terms decay like 1/k^2 with eventually
        # constant sign pattern; twice the last term is a widened bound.
        def tail(k: int, last_abs: float) -> float:
            return 2.0 * last_abs

    return truncated_sum(term, ctrl, tail)


def sum_y_entropy_case1(p: ChannelParams, ctrl: SeriesControl = SeriesControl()) -> SeriesResult:
    """Telescoping sum over F entering the output entropy for D > 0."""
    return _telescoping_sum(F, p, ctrl)


def sum_y_entropy_case2(p: ChannelParams, ctrl: SeriesControl = SeriesControl()) -> SeriesResult:
    """Telescoping sum over G entering the output entropy for D < 0."""
    return _telescoping_sum(G, p, ctrl)


def sum_u_entropy_case1(p: ChannelParams, ctrl: SeriesControl = SeriesControl()) -> SeriesResult:
    """Geometric sum over F entering the U entropy for D > 0, B1 in [-1, 1)."""
    dc = derive_constants(p)
    w1 = p.m_x / dc.m
    w2 = (p.m_s - p.m_z) / p.m_s
    return _geometric_sum(F, p, ctrl, dc.b1, w1, w2)


def sum_u_entropy_case2(p: ChannelParams, ctrl: SeriesControl = SeriesControl()) -> SeriesResult:
    """Geometric sum over G entering the U entropy for D < 0 (ratio B2)."""
    dc = derive_constants(p)
    assert dc.b2 is not None
    w1 = p.m_x / dc.m
    w2 = (p.m_s - p.m_z) / p.m_s
    return _geometric_sum(G, p, ctrl, dc.b2, w2, w1)


def _combine(a: SeriesResult, b: SeriesResult) -> SeriesResult:
    return SeriesResult(
        value=a.value - b.value,
        terms_used=max(a.terms_used, b.terms_used),
        tail_bound=a.tail_bound + b.tail_bound,
        converged=a.converged and b.converged,
    )


def inner_series_case1(p: ChannelParams, ctrl: SeriesControl = SeriesControl()) -> SeriesResult:
    """The D > 0 inner-bound sum: sum_k (1/k) {[1 - B1^k m_x/M]/F(k) - [1 - B1^k (m_s-m_z)/m_s]/F(k+1)}.

    Split into its telescoping and geometric parts so each carries a
    sharp tail bound; the geometric part vanishes identically at B1 = 0.
    """
    regime = classify_regime(derive_constants(p))
    if regime is not Regime.CASE1:
        raise WrongRegime(f"inner_series_case1 requires Case1, got {regime.value}")
    return _combine(sum_y_entropy_case1(p, ctrl), sum_u_entropy_case1(p, ctrl))


def inner_series_case2(p: ChannelParams, ctrl: SeriesControl = SeriesControl()) -> SeriesResult:
    """The D < 0 inner-bound sum: sum_k (1/k) {[1 - B2^k (m_s-m_z)/m_s]/G(k) - [1 - B2^k m_x/M]/G(k+1)}."""
    regime = classify_regime(derive_constants(p))
    if regime is not Regime.CASE2:
        raise WrongRegime(f"inner_series_case2 requires Case2, got {regime.value}")
    return _combine(sum_y_entropy_case2(p, ctrl), sum_u_entropy_case2(p, ctrl))

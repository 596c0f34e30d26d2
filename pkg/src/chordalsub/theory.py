"""Closed-form and numerical evaluation of the edge-density theory.

Houses the transcendental equation whose root gamma governs the dense-regime
edge count, the exact binomial point masses that calibrate attachment
degrees, the dense parameter bundle (clique sizes, attachment degrees,
prediction center/radius), the sparse-regime limits, and the component-count
series for the very sparse regime.

All logarithms are natural; log base 1/p is always computed as
ln(x) / ln(1/p) to avoid base-switch drift.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction


class BoundaryAlphaError(ValueError):
    """The sparse exponent sits exactly on a regime boundary (open case)."""


def log_recip(x: float, p: float) -> float:
    """log base 1/p of x."""
    return math.log(x) / math.log(1.0 / p)


def _snap_ceil(x: float) -> int:
    """Ceiling that forgives float dust just above an integer."""
    return math.ceil(x - 1e-9)


# ---------------------------------------------------------------------------
# The defining equation of gamma and its root
# ---------------------------------------------------------------------------


def g_eval(gamma: float, p: float) -> float:
    """LHS minus RHS of the defining equation at the point gamma.

    g(gamma) = gamma ln(2/gamma) + (2-gamma) ln(2/(2-gamma))
               - (2-gamma) ln(1/(1-p)) + (1-gamma) ln(1/p)

    Strictly decreasing on (2p, 2); positive at max{1,2p}, negative at 2.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p={p} outside (0,1)")
    if not 0.0 < gamma < 2.0:
        raise ValueError(f"gamma={gamma} outside (0,2)")
    return (
        gamma * math.log(2.0 / gamma)
        + (2.0 - gamma) * math.log(2.0 / (2.0 - gamma))
        - (2.0 - gamma) * math.log(1.0 / (1.0 - p))
        + (1.0 - gamma) * math.log(1.0 / p)
    )


def g_prime(gamma: float, p: float) -> float:
    """Derivative of g: ln((2-gamma) p / (gamma (1-p)))."""
    return math.log((2.0 - gamma) * p / (gamma * (1.0 - p)))


@dataclass(frozen=True)
class GammaSolution:
    p: float
    gamma: float
    residual: float
    iterations: int


def gamma_solve(p: float, tol: float = 1e-12, max_iter: int = 500) -> GammaSolution:
    """Root of g in (max{1,2p}, 2): bisection to a tight bracket, then Newton.

    Newton is safe once bracketed because g' never vanishes inside.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p={p} outside (0,1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    eps = 1e-12
    lo = max(1.0, 2.0 * p) + eps
    hi = 2.0 - eps
    if not (g_eval(lo, p) > 0.0 > g_eval(hi, p)):
        raise RuntimeError(f"bracket sign condition failed at p={p}")
    iters = 0
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        iters += 1
        if g_eval(mid, p) > 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = g_eval(x, p)
        if abs(fx) <= tol:
            return GammaSolution(p, x, abs(fx), iters)
        iters += 1
        step = fx / g_prime(x, p)
        nxt = x - step
        if not lo < nxt < hi:  # fall back to bisection inside the bracket
            nxt = 0.5 * (lo + hi)
        if g_eval(nxt, p) > 0.0:
            lo = nxt
        else:
            hi = nxt
        x = nxt
    raise RuntimeError(f"gamma solver did not reach tol={tol} within {max_iter} iterations")


# ---------------------------------------------------------------------------
# Exact binomial point masses
# ---------------------------------------------------------------------------


def binom_log_pmf(k: int, s: int, p: float) -> float:
    """Exact ln P[Bin(k,p) = s] via log-gamma."""
    if not 0 <= s <= k:
        raise ValueError(f"s={s} outside [0, k={k}]")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p={p} outside (0,1)")
    return (
        math.lgamma(k + 1)
        - math.lgamma(s + 1)
        - math.lgamma(k - s + 1)
        + s * math.log(p)
        + (k - s) * math.log(1.0 - p)
    )


# ---------------------------------------------------------------------------
# Dense-regime parameters
# ---------------------------------------------------------------------------


def k_plus(n: int, p: float) -> int:
    return _snap_ceil(2.0 * log_recip(n, p))


def k_minus(n: int, p: float, c_minus: float = 9.0) -> int:
    """Raw partition clique size; may be <= 0 at small n (constructors clamp)."""
    ln = log_recip(n, p)
    return _snap_ceil(2.0 * ln - c_minus * log_recip(ln, p))


@dataclass(frozen=True)
class DenseParams:
    n: int
    p: float
    gamma: float
    k_plus: int
    k_minus: int            # raw, may be <= 0 at desk scale
    s_upper: int
    ell_upper: int          # s_upper * n
    s_lower: int | None     # None when the pmf threshold is unattainable
    s_lower_degenerate: bool
    prediction_center: float
    prediction_radius: float


def dense_params(
    n: int,
    p: float,
    gamma_tol: float = 1e-12,
    c_minus: float = 9.0,
    c_upper: float = 3.0,
    c_radius: float = 10.0,
) -> DenseParams:
    """All dense-regime quantities for one (n, p).

    The second-order constants (9, 3, 10) are not optimal and are exposed as
    overridable defaults.  s_lower is the largest s with
    P[Bin(k,p)=s] >= ln^4(n)/n at k = max(1, k_minus at n' = floor(n/ln n));
    when that threshold exceeds 1 no s qualifies and constructions fall back
    to best-effort attachment.
    """
    if n < 3:
        raise ValueError("dense parameters need n >= 3")
    gamma = gamma_solve(p, gamma_tol).gamma
    kp = k_plus(n, p)
    km = k_minus(n, p, c_minus)
    s_up = round(gamma * log_recip(n, p) + c_upper * log_recip(math.log(n), p))
    n_prime = max(2, int(n / math.log(n)))
    k_scan = max(1, k_minus(n_prime, p, c_minus))
    threshold = math.log(n) ** 4 / n
    s_low: int | None = None
    degenerate = threshold > 1.0
    if not degenerate:
        log_thr = math.log(threshold)
        for s in range(k_scan, -1, -1):
            if binom_log_pmf(k_scan, s, p) >= log_thr:
                s_low = s
                break
        if s_low is None:
            degenerate = True
    return DenseParams(
        n=n,
        p=p,
        gamma=gamma,
        k_plus=kp,
        k_minus=km,
        s_upper=s_up,
        ell_upper=s_up * n,
        s_lower=s_low,
        s_lower_degenerate=degenerate,
        prediction_center=gamma * n * log_recip(n, p),
        prediction_radius=c_radius * n * log_recip(math.log(n), p),
    )


# ---------------------------------------------------------------------------
# Sparse-regime limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparsePrediction:
    alpha: float
    k_alpha: int | None     # None on the 1/alpha branch
    limit: float
    boundary: bool = False  # alpha sits exactly on (1+k)/(1+2k): open case


def is_boundary_alpha(alpha) -> bool:
    """True iff alpha equals some (1+k)/(1+2k) (the open cases of the limit
    theorem); exact for rationals, 1e-12 tolerance for floats."""
    if isinstance(alpha, (str, Fraction)):
        a = Fraction(alpha)
        if a <= Fraction(1, 2) or a > 1:
            return False
        num, den = a.numerator, a.denominator
        # (1+k)/(1+2k) in lowest terms has den = 2*num - 1
        return den == 2 * num - 1
    a = float(alpha)
    if not 0.5 < a <= 1.0:
        return False
    return any(abs(a - (1 + k) / (1 + 2 * k)) < 1e-12 for k in range(64))


def k_alpha(alpha) -> int:
    """Largest integer k with alpha < (1+k)/(1+2k), for alpha in (1/2, 1).

    Well-defined even at the boundary points (the strict inequality fails
    there, selecting the next-lower k); those inputs are flagged with a
    warning because the limit theorem leaves them open.  alpha = 1 has no
    qualifying k at all and raises.
    """
    a = Fraction(alpha) if isinstance(alpha, (str, Fraction)) else float(alpha)
    if not 0.5 < a <= 1.0:
        raise ValueError(f"k_alpha needs alpha in (1/2, 1], got {alpha}")
    if is_boundary_alpha(a):
        if a >= 1:
            raise BoundaryAlphaError("alpha=1 is an open boundary with no qualifying k")
        warnings.warn(
            f"alpha={a} sits exactly on a regime boundary (1+k)/(1+2k); "
            "the limit there is an open case", stacklevel=2)
    best = None
    k = 0
    while True:
        boundary = Fraction(1 + k, 1 + 2 * k) if isinstance(a, Fraction) else (1 + k) / (1 + 2 * k)
        if a < boundary:
            best = k
            k += 1
        else:
            break
    if best is None:
        raise BoundaryAlphaError(f"alpha={alpha} admits no k with alpha < (1+k)/(1+2k)")
    return best


def theorem2_limit(alpha) -> float:
    """Limit of (chordal subgraph edges)/n at p = n^(-alpha+o(1)).

    (1+2k)/(1+k) with k = k_alpha for alpha in (1/2, 1); 1/alpha for
    alpha in (0, 1/2].  Exact boundary points are open cases: they warn
    (and alpha = 1 raises, having no branch at all).
    """
    a = Fraction(alpha) if isinstance(alpha, (str, Fraction)) else float(alpha)
    if a <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if a > 1:
        raise ValueError(f"the sparse limits cover alpha in (0,1], got {alpha}")
    if a <= 0.5:  # Fraction-vs-float comparison is exact; 0.5 is representable
        return float(1 / a)
    k = k_alpha(a)
    return (1 + 2 * k) / (1 + k)


def sparse_prediction(alpha) -> SparsePrediction:
    a = Fraction(alpha) if isinstance(alpha, (str, Fraction)) else float(alpha)
    boundary = is_boundary_alpha(a)
    limit = theorem2_limit(a)
    ka = k_alpha(a) if a > 0.5 else None
    return SparsePrediction(float(a), ka, limit, boundary)


# ---------------------------------------------------------------------------
# Component-count series for the very sparse regime
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaCResult:
    c: float
    value: float            # limit of (#components)/n in G(n, c/n)
    chordal_limit: float    # 1 - value: the very-sparse limit of edges/n
    terms: int
    tail_bound: float


def gamma_c(c: float, tol: float = 1e-10, max_terms: int = 100000) -> GammaCResult:
    """Evaluate (1/c) * sum_{i>=1} i^(i-2)/i! * (c e^-c)^i with a certified tail.

    Term ratios are below q*e with q = c e^-c, which is < 1 on (0,1), so a
    geometric bound certifies truncation.  c >= 1 is rejected: the tail bound
    degenerates as q*e -> 1.
    """
    if not 0.0 < c < 1.0:
        raise ValueError(f"gamma_c needs c in (0,1), got {c}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    ln_q = math.log(c) - c
    ratio = c * math.exp(1.0 - c)  # q*e, strict upper bound on term ratios
    total = 0.0
    i = 0
    while True:
        i += 1
        if i > max_terms:
            raise RuntimeError("series did not meet tolerance within max_terms")
        ln_term = (i - 2) * math.log(i) - math.lgamma(i + 1) + i * ln_q - math.log(c)
        term = math.exp(ln_term)
        total += term
        tail = term * ratio / (1.0 - ratio)
        if tail <= tol:
            return GammaCResult(c, total, 1.0 - total, i, tail)

"""Scalar special functions used by the correlation and outage models.

All functions are pure, deterministic, and operate on double-precision
scalars:

* ``bessel_j0`` -- zero-order Bessel function of the first kind, the
  kernel of the isotropic-scattering spatial correlation model.
* ``ln_gamma`` -- natural log of the Gamma function.
* ``reg_lower_incomplete_gamma`` -- the regularized lower incomplete
  gamma function P(shape, x), i.e. the CDF of a unit-scale Gamma
  distribution.

Algorithm choices: ``bessel_j0`` uses the ascending power series for
|x| <= 12 and the Hankel asymptotic expansion (dynamically truncated at
its smallest term) beyond; ``reg_lower_incomplete_gamma`` uses the
ascending series for x < shape + 1 and a modified Lentz continued
fraction for the complementary function otherwise.  Both are accurate
to better than 1e-10 absolute over the documented ranges and are
cross-checked against independent high-precision oracles in the test
suite.
"""

from __future__ import annotations

import math

from .errors import ConvergenceError, DomainError

_J0_SERIES_CUTOFF = 12.0
_QUARTER_PI = 0.7853981633974483096156608458198757
_MAX_ITER = 100_000


def _require_finite(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a real scalar, got {value!r}") from exc
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _j0_power_series(x: float) -> float:
    # J0(x) = sum_k (-x^2/4)^k / (k!)^2. Alternating; fine in double
    # precision up to the series cutoff (worst-case term ~4e3 at x=12,
    # so cancellation costs ~4 digits of the 16 available).
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while abs(term) > 1e-19 and k < 400:
        k += 1
        term *= -q / (k * k)
        total += term
    return total


def _j0_asymptotic(x: float) -> float:
    # Hankel expansion J0(x) ~ sqrt(2/(pi x)) [P cos(x-pi/4) - Q sin(x-pi/4)]
    # with P, Q built from the Hankel symbols (0, m) = (-1)^m ((2m-1)!!)^2
    # / (m! 8^m). Terms are added in increasing m until they stop
    # shrinking; at x = 12 the smallest term is ~1e-12, well under the
    # 1e-10 accuracy contract.
    p_sum = 0.0
    q_sum = 0.0
    term = 1.0  # magnitude of (0, m) / x^m
    prev = math.inf
    m = 0
    while m < 80 and abs(term) < prev and abs(term) > 1e-19:
        prev = abs(term)
        r = m % 4
        if r == 0:
            p_sum += term
        elif r == 1:
            q_sum -= term
        elif r == 2:
            p_sum -= term
        else:
            q_sum += term
        term *= (2 * m + 1) ** 2 / (8.0 * (m + 1) * x)
        m += 1
    chi = x - _QUARTER_PI
    return math.sqrt(2.0 / (math.pi * x)) * (p_sum * math.cos(chi) - q_sum * math.sin(chi))


def bessel_j0(x: float) -> float:
    """Zero-order Bessel function of the first kind.

    Even in its argument; absolute error <= 1e-10 for |x| <= 200.

    Raises:
        DomainError: if ``x`` is not a finite real scalar.
    """
    x = abs(_require_finite("x", x))
    if x <= _J0_SERIES_CUTOFF:
        return _j0_power_series(x)
    return _j0_asymptotic(x)


def ln_gamma(x: float) -> float:
    """Natural logarithm of the Gamma function for x > 0.

    Delegates to the C library ``lgamma`` (correct to a few ulp, i.e.
    relative error well under 1e-12 on the positive axis).

    Raises:
        DomainError: if ``x`` is not a finite real scalar > 0.
    """
    x = _require_finite("x", x)
    if x <= 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def _lower_gamma_series(shape: float, x: float) -> float:
    # P(shape, x) = x^shape e^-x / Gamma(shape+1) * sum_n x^n / prod(shape+1..shape+n)
    denom = shape
    term = 1.0 / shape
    total = term
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * 1e-17:
            log_pref = shape * math.log(x) - x - ln_gamma(shape)
            return total * math.exp(log_pref)
    raise ConvergenceError(f"lower-gamma series did not converge for shape={shape}, x={x}")


def _upper_gamma_cf(shape: float, x: float) -> float:
    # Regularized upper gamma Q(shape, x) via the modified Lentz
    # continued fraction; valid and fast for x >= shape + 1.
    tiny = 1e-300
    b = x + 1.0 - shape
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - shape)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            log_pref = shape * math.log(x) - x - ln_gamma(shape)
            return math.exp(log_pref) * h
    raise ConvergenceError(f"upper-gamma continued fraction did not converge for shape={shape}, x={x}")


def reg_lower_incomplete_gamma(shape: float, x: float) -> float:
    """Regularized lower incomplete gamma function P(shape, x) in [0, 1].

    P(shape, x) is the CDF at ``x`` of a Gamma(shape, 1) random
    variable; it is non-decreasing in ``x`` with P(shape, 0) = 0 and
    P(shape, x) -> 1 as x -> inf.  Absolute error <= 1e-10.

    Raises:
        DomainError: if ``shape`` <= 0 or ``x`` < 0 (or either is
            non-finite).
    """
    shape = _require_finite("shape", shape)
    x = _require_finite("x", x)
    if shape <= 0.0:
        raise DomainError(f"shape must be > 0, got {shape!r}")
    if x < 0.0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    if x < shape + 1.0:
        p = _lower_gamma_series(shape, x)
    else:
        p = 1.0 - _upper_gamma_cf(shape, x)
    # Guard against sub-ulp excursions outside [0, 1].
    return min(max(p, 0.0), 1.0)

"""Gaussian tail probability, its inverse, and a frozen-cost normal sampler."""
import math

import numpy as np

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the normal quantile (relative error ~1.15e-9).
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425

#: Raw uniform doubles consumed by :func:`sample_gaussian` per returned value.
UNIFORMS_PER_DRAW = 2


def _q_scalar(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"q() needs a finite argument, got {x!r}")
    return 0.5 * math.erfc(x / _SQRT2)


_q_vec = np.vectorize(_q_scalar, otypes=[float])


def q(x):
    """Gaussian tail probability ``Q(x) = P(Z > x)`` for a standard normal ``Z``.

    Accepts a scalar or an array; scalars come back as ``float``.
    Evaluated through ``erfc`` so the upper tail keeps full relative precision.
    """
    if np.ndim(x) == 0:
        return _q_scalar(x)
    return _q_vec(np.asarray(x, dtype=float))


def _acklam(p):
    # lower-tail quantile, i.e. Phi^-1(p)
    if p < _P_LOW:
        t = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5]) / \
               ((((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0)
    if p > 1.0 - _P_LOW:
        return -_acklam(1.0 - p)
    u = p - 0.5
    r = u * u
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * u / \
           (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


def _q_inv_scalar(p):
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"q_inv() needs 0 < p < 1, got {p!r}")
    if p > 0.5:
        return -_q_inv_scalar(1.0 - p)
    x = -_acklam(p)
    # Newton on q(x) - p; q'(x) = -phi(x)
    for _ in range(2):
        x += (_q_scalar(x) - p) / (_INV_SQRT_2PI * math.exp(-0.5 * x * x))
    return x


_q_inv_vec = np.vectorize(_q_inv_scalar, otypes=[float])


def q_inv(p):
    """Inverse of :func:`q`: the ``x`` with ``Q(x) = p``, for ``0 < p < 1``."""
    if np.ndim(p) == 0:
        return _q_inv_scalar(p)
    return _q_inv_vec(np.asarray(p, dtype=float))


def sample_gaussian(rng, mean=0.0, variance=1.0, size=None):
    """Draw normal variates with the Box-Muller cosine branch.

    Each returned value consumes exactly ``UNIFORMS_PER_DRAW`` doubles from
    ``rng.random`` (a ``numpy.random.Generator``), taken as consecutive
    ``(u1, u2)`` pairs in C order of ``size``. Keeping this cost fixed is what
    makes seeded experiments reproducible across refactors.
    """
    if np.any(np.asarray(variance) < 0):
        raise ValueError("variance must be nonnegative")
    shape = () if size is None else (size,) if np.ndim(size) == 0 else tuple(size)
    u = rng.random(shape + (UNIFORMS_PER_DRAW,))
    z = np.sqrt(-2.0 * np.log1p(-u[..., 0])) * np.cos(2.0 * np.pi * u[..., 1])
    out = mean + np.sqrt(variance) * z
    if size is None:
        return float(out)
    return out

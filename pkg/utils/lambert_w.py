# utils/lambert_w.py
"""
Principal branch W0 of the Lambert W function on the complex plane.

Halley iteration on w*exp(w) - z from a region-dependent starting point:
the square-root expansion about the branch point -1/e, a rational fit
around the origin, and the asymptotic log(z) - log(log(z)) everywhere else.
"""

import cmath
import math

from models.lambert import LambertResult
from utils.exceptions import NonConvergenceError
from utils.logger import get_logger

logger = get_logger(__name__)

E = math.e
INV_E = 1.0 / math.e
HALF_PI = math.pi / 2

MAX_ITERATIONS = 50
STEP_TOL = 1e-15
RESIDUAL_TOL = 1e-12
BRANCH_POINT_RADIUS = 1e-6
BRANCH_REGION = 0.3
SMALL_ARGUMENT = 1e-8
# Past this log|x e^y| the argument is handled through its logarithm
LOG_ARGUMENT_THRESHOLD = 500.0

def _branch_point_series(z: complex) -> complex:
    # W0 = -1 + p - p^2/3 + 11/72 p^3 - 43/540 p^4, p = sqrt(2(ez + 1))
    p = cmath.sqrt(2 * (E * z + 1))
    return -1 + p - p * p / 3 + 11 / 72 * p ** 3 - 43 / 540 * p ** 4

def _initial_guess(z: complex) -> complex:
    if abs(z + INV_E) < BRANCH_REGION:
        return _branch_point_series(z)
    if -1.0 < z.real < 1.5 and abs(z.imag) < 1.0 and -2.5 * abs(z.imag) - 0.2 < z.real:
        # rational fit to z - z^2 + 3/2 z^3
        return z * (3 + 6 * z + z * z) / (3 + 9 * z + 5 * z * z)
    w = cmath.log(z)
    return w - cmath.log(w)

def _residual(w: complex, z: complex) -> float:
    return abs(w * cmath.exp(w) - z)

def lambert_w0(z: complex, max_iterations: int = MAX_ITERATIONS) -> LambertResult:
    """Principal branch W0(z) with iteration count and residual |w e^w - z|"""
    z = complex(z)
    if z == 0:
        return LambertResult(0j, 0, 0.0)

    if abs(z + INV_E) < BRANCH_POINT_RADIUS:
        w = _branch_point_series(z)
        return LambertResult(w, 0, _residual(w, z))

    w = _initial_guess(z)
    converged = False
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        ew = cmath.exp(w)
        f = w * ew - z
        w1 = w + 1
        if w1 == 0:
            break
        step = f / (ew * w1 - (w + 2) * f / (2 * w1))
        w -= step
        if abs(step) < STEP_TOL * (1 + abs(w)):
            converged = True
            break

    residual = _residual(w, z)
    if residual > RESIDUAL_TOL * max(1.0, abs(z)) or not cmath.isfinite(w):
        raise NonConvergenceError(
            f"Lambert W0 did not converge at z={z} after {iterations} iterations (residual {residual:.3e})",
            iterations, residual
        )
    if not converged:
        logger.warning(f"Lambert W0 at z={z} accepted on residual {residual:.3e} without step convergence")

    return LambertResult(w, iterations, residual)

def lambert_w0_log(log_z: complex, max_iterations: int = MAX_ITERATIONS) -> LambertResult:
    """W0(z) from log(z), for |z| past the double range

    Newton on w + log(w) = log(z); the residual is reported in that form.
    Only meant for Re log(z) large, where principal logs keep the identity.
    """
    log_z = complex(log_z)
    w = log_z - cmath.log(log_z)
    converged = False
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        step = (w + cmath.log(w) - log_z) / (1 + 1 / w)
        w -= step
        if abs(step) < STEP_TOL * (1 + abs(w)):
            converged = True
            break

    residual = abs(w + cmath.log(w) - log_z)
    if residual > RESIDUAL_TOL * max(1.0, abs(log_z)) or not cmath.isfinite(w):
        raise NonConvergenceError(
            f"Lambert W0 did not converge at log z={log_z} after {iterations} iterations (residual {residual:.3e})",
            iterations, residual
        )
    if not converged:
        logger.warning(f"Lambert W0 at log z={log_z} accepted on residual {residual:.3e} without step convergence")

    return LambertResult(w, iterations, residual)

def lambert_w0_over_x(x: float, y: float) -> complex:
    """W0(i x e^y)/x, continued to its limit i e^y at x = 0

    Raises OverflowError only when the value itself is out of range.
    """
    if x == 0:
        return 1j * math.exp(y)

    log_t = math.log(abs(x)) + y
    if log_t > LOG_ARGUMENT_THRESHOLD:
        return lambert_w0_log(complex(log_t, math.copysign(HALF_PI, x))).w / x

    try:
        t = x * math.exp(y)
    except OverflowError:
        t = math.copysign(math.exp(log_t), x)
    if abs(t) < SMALL_ARGUMENT:
        z = 1j * t
        return 1j * math.exp(y) * (1 - z + 1.5 * z * z)
    return lambert_w0(1j * t).w / x

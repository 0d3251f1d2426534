# services/solver_service.py
import cmath
import math
from typing import Callable, Optional, Tuple

from models.seed import SeedEval, SeedFamily, SeedSpec
from models.solve import Outcome, SolveResult, SolverConfig, SolveStatus
from services.seed_service import SeedService
from utils.exceptions import (
    NonConvergenceError,
    OutsideSeedDomainError,
    SolverError,
    UnsupportedFamilyError,
)
from utils.lambert_w import lambert_w0_over_x
from utils.logger import get_logger

logger = get_logger(__name__)

Evaluator = Callable[[complex], SeedEval]

# Below this |x| the Cauchy root switches to its first-order series
CAUCHY_SERIES_RADIUS = 1e-8
# Implicit solves for the non-holomorphic test seed stay in this slab
NON_HOLO_MAX_ABS_X = 0.5
# Residual accepted for a root polished onto the shock condition J = 0
SHOCK_POLISH_RESIDUAL = 1e-12

def _jacobian_modulus(a: complex, b: complex) -> float:
    # Determinant of the real-linear map d -> a d + b conj(d) is |a|^2 - |b|^2
    return math.sqrt(abs(abs(a) ** 2 - abs(b) ** 2))

def _classify(lam: complex, jacobian_modulus: float, cfg: SolverConfig) -> Outcome:
    if jacobian_modulus < cfg.shock_tol:
        return Outcome.SHOCK
    if lam.imag <= 0:
        return Outcome.ELLIPTICITY_LOSS
    return Outcome.CONVERGED

def _failure(outcome: Outcome, message: str, lam: Optional[complex] = None,
             jacobian_modulus: float = 0.0, x_reached: Optional[float] = None) -> SolverError:
    im_lambda = lam.imag if lam is not None and cmath.isfinite(lam) else 0.0
    return SolverError(message, SolveStatus(outcome, jacobian_modulus, im_lambda), lam, x_reached)

class SolverService:
    @staticmethod
    def characteristic_coordinate(lam: complex, x: float, y: float) -> complex:
        """w0 = y - lambda x"""
        return y - lam * x

    @staticmethod
    def jacobian(spec: SeedSpec, lam: complex, x: float, y: float) -> complex:
        """Characteristic Jacobian J = 1 + f'(w0) x"""
        w0 = SolverService.characteristic_coordinate(lam, x, y)
        return 1 + SeedService.eval_seed(spec, w0).d_dw * x

    @staticmethod
    def solve(spec: SeedSpec, x: float, y: float, cfg: SolverConfig = None) -> SolveResult:
        """Transform value at (x, y) by the cheapest available route"""
        cfg = cfg or SolverConfig()
        if x == 0:
            return SolverService._initial_slice(spec, y)
        if spec.has_closed_form:
            return SolverService.solve_closed_form(spec, x, y, cfg)
        return SolverService.solve_continuation(spec, x, y, cfg)

    @staticmethod
    def _initial_slice(spec: SeedSpec, y: float) -> SolveResult:
        try:
            value = SeedService.eval_seed(spec, y).value
        except OutsideSeedDomainError as e:
            raise _failure(Outcome.OUTSIDE_SEED_DOMAIN, str(e), x_reached=0.0)
        except OverflowError:
            raise _failure(Outcome.NON_CONVERGENCE, f"{spec}: f({y}) overflows", x_reached=0.0)

        outcome = Outcome.CONVERGED if value.imag > 0 else Outcome.ELLIPTICITY_LOSS
        status = SolveStatus(outcome, 1.0, value.imag)
        if outcome != Outcome.CONVERGED:
            raise SolverError(f"{spec} has Im f({y}) <= 0", status, value, 0.0)
        return SolveResult(value, complex(y), 1 + 0j, status, 0, "initial_slice")

    # Closed forms

    @staticmethod
    def _closed_form_lambda(spec: SeedSpec, x: float, y: float, cfg: SolverConfig) -> Tuple[complex, complex]:
        """(lambda, J) from the family formulas; raises SolverError on family shock or ellipticity conditions"""
        family = spec.family
        p = spec.params

        if family == SeedFamily.CONSTANT:
            return 1j * p['c'], 1 + 0j

        if family in (SeedFamily.AFFINE_DELTA, SeedFamily.GENERIC_AFFINE):
            if family == SeedFamily.AFFINE_DELTA:
                a, b, d = 1.0, 0.0, p['delta']
            else:
                a, b, d = p['slope'], p['intercept'], p['imag']
            den = 1 + a * x
            if den <= cfg.shock_tol:
                raise _failure(Outcome.SHOCK, f"{spec}: characteristics cross, 1 + a x = {den}",
                               jacobian_modulus=abs(den))
            return (a * y + b + 1j * d) / den, complex(den)

        if family == SeedFamily.EPSILON:
            eps = p['eps']
            q = 1 - eps * x
            if abs(q) <= cfg.shock_tol and abs(y) <= cfg.shock_tol:
                raise _failure(Outcome.SHOCK, f"{spec}: ({x}, {y}) is the vertex of the parabola",
                               jacobian_modulus=abs(q))
            disc = 4 * q - eps * eps * y * y
            if disc <= 0:
                # Real double root; undefined on the vertex line itself
                lam = complex(-eps * y / (2 * q), 0.0) if q != 0 else None
                raise _failure(Outcome.ELLIPTICITY_LOSS, f"{spec}: outside the parabola, D = {disc}", lam=lam)
            lam = (-eps * y + 1j * math.sqrt(disc)) / (2 * q)
            if y == 0:
                jac = complex(2 * q / (2 - eps * x))
            else:
                jac = SolverService.jacobian(spec, lam, x, y)
            return lam, jac

        if family == SeedFamily.EXPONENTIAL:
            try:
                lam = lambert_w0_over_x(x, y)
            except NonConvergenceError as e:
                raise _failure(Outcome.NON_CONVERGENCE, str(e))
            except OverflowError:
                raise _failure(Outcome.NON_CONVERGENCE, f"{spec}: lambda at ({x}, {y}) is out of double range")
            return lam, 1 + lam * x

        if family == SeedFamily.CAUCHY_KERNEL:
            zeta = y + 1j * p['delta']
            if abs(x) < CAUCHY_SERIES_RADIUS:
                lam = -1 / zeta + x / zeta ** 3
                return lam, 1 + lam * lam * x
            root = cmath.sqrt(zeta * zeta + 4 * x)
            # Root continuous from lambda(0, y) = -1/zeta lies in the upper half-plane
            if root.imag < 0 or (root.imag == 0 and root.real < 0):
                root = -root
            lam = -2 / (zeta + root)
            return lam, 2 * root / (zeta + root)

        if family == SeedFamily.QUADRATIC:
            delta = p['delta']
            root = cmath.sqrt(1 + 4 * x * y - 4j * delta * x * x)
            lam = 2 * (y * y + 1j * delta) / ((1 + 2 * x * y) + root)
            return lam, root

        raise UnsupportedFamilyError(f"{family.value} has no closed-form transform")

    @staticmethod
    def solve_closed_form(spec: SeedSpec, x: float, y: float, cfg: SolverConfig = None) -> SolveResult:
        """Transform value from the family's closed form"""
        cfg = cfg or SolverConfig()
        if not spec.has_closed_form:
            raise UnsupportedFamilyError(f"{spec.family.value} has no closed-form transform")
        if x == 0:
            return SolverService._initial_slice(spec, y)

        lam, jac = SolverService._closed_form_lambda(spec, x, y, cfg)
        jacobian_modulus = abs(jac)
        outcome = _classify(lam, jacobian_modulus, cfg)
        status = SolveStatus(outcome, jacobian_modulus, lam.imag)
        if outcome != Outcome.CONVERGED:
            raise SolverError(f"{spec} at ({x}, {y}): {outcome.value}", status, lam, None)

        return SolveResult(lam, SolverService.characteristic_coordinate(lam, x, y), jac, status, 0, "closed_form")

    @staticmethod
    def jacobian_closed_form(spec: SeedSpec, x: float, y: float, cfg: SolverConfig = None) -> complex:
        """Family Jacobian without solving for lambda by iteration"""
        cfg = cfg or SolverConfig()
        family = spec.family
        if family == SeedFamily.CONSTANT or x == 0:
            return 1 + 0j
        if family == SeedFamily.AFFINE_DELTA:
            return complex(1 + x)
        if family == SeedFamily.GENERIC_AFFINE:
            return complex(1 + spec.params['slope'] * x)
        if family == SeedFamily.EPSILON and y == 0:
            eps = spec.params['eps']
            return complex(2 * (1 - eps * x) / (2 - eps * x))
        if not spec.has_closed_form:
            raise UnsupportedFamilyError(f"{family.value} has no closed-form Jacobian")
        return SolverService._closed_form_lambda(spec, x, y, cfg)[1]

    # Newton iteration

    @staticmethod
    def _seed_evaluator(spec: SeedSpec) -> Evaluator:
        return lambda w: SeedService.eval_seed(spec, w)

    @staticmethod
    def _check_slab(spec: SeedSpec, x: float):
        if spec.family == SeedFamily.NON_HOLO_TEST and abs(x) > NON_HOLO_MAX_ABS_X:
            raise UnsupportedFamilyError(
                f"NonHoloTest implicit solves are limited to |x| <= {NON_HOLO_MAX_ABS_X}, got x={x}"
            )

    @staticmethod
    def newton_evaluator(evaluate: Evaluator, x: float, y: float, lam_init: complex,
                         cfg: SolverConfig = None, label: str = "seed") -> SolveResult:
        """Newton on F(lambda) = lambda - f(y - lambda x) for an arbitrary seed evaluator"""
        cfg = cfg or SolverConfig()
        lam = complex(lam_init)
        if lam.imag <= 0:
            raise ValueError(f"Newton start needs Im lambda > 0, got {lam}")

        jacobian_modulus = 0.0
        a = b = 0j
        for iteration in range(cfg.max_newton_iters + 1):
            w = y - lam * x
            try:
                ev = evaluate(w)
            except OutsideSeedDomainError as e:
                raise _failure(Outcome.OUTSIDE_SEED_DOMAIN, f"{label}: {e}", lam)
            except (OverflowError, ZeroDivisionError):
                break

            residual = lam - ev.value
            a = 1 + ev.d_dw * x
            b = ev.d_dwbar * x
            jacobian_modulus = _jacobian_modulus(a, b)

            if abs(residual) < cfg.newton_tol * (1 + abs(lam)):
                outcome = _classify(lam, jacobian_modulus, cfg)
                status = SolveStatus(outcome, jacobian_modulus, lam.imag)
                if outcome != Outcome.CONVERGED:
                    raise SolverError(f"{label} at ({x}, {y}): {outcome.value}", status, lam, None)
                return SolveResult(lam, w, a, status, iteration, "newton")

            if jacobian_modulus < cfg.shock_tol:
                raise _failure(Outcome.SHOCK, f"{label} at ({x}, {y}): |J| = {jacobian_modulus:.3e}",
                               lam, jacobian_modulus)
            if iteration == cfg.max_newton_iters:
                break

            # Solve a d + b conj(d) = -F; reduces to d = -F/J when b = 0
            det = abs(a) ** 2 - abs(b) ** 2
            try:
                lam = lam + (-residual * a.conjugate() + b * residual.conjugate()) / det
            except (ZeroDivisionError, OverflowError):
                break
            if not cmath.isfinite(lam):
                break

        raise _failure(Outcome.NON_CONVERGENCE,
                       f"{label} at ({x}, {y}): Newton did not converge in {cfg.max_newton_iters} iterations",
                       lam if cmath.isfinite(lam) else None, jacobian_modulus)

    @staticmethod
    def solve_newton(spec: SeedSpec, x: float, y: float, lam_init: complex,
                     cfg: SolverConfig = None) -> SolveResult:
        """Newton iteration for the seed's implicit equation from lam_init"""
        SolverService._check_slab(spec, x)
        return SolverService.newton_evaluator(SolverService._seed_evaluator(spec), x, y, lam_init, cfg, str(spec))

    # Continuation

    @staticmethod
    def _polish_shock(evaluate: Evaluator, x: float, y: float, lam: complex, cfg: SolverConfig) -> Optional[complex]:
        """Newton on J(lambda) = 1 + f'(y - lambda x) x = 0; None when it fails to settle"""
        for _ in range(cfg.max_newton_iters):
            w = y - lam * x
            h = 1e-6 * (1 + abs(w))
            try:
                jac = 1 + evaluate(w).d_dw * x
                second = (evaluate(w + h).d_dw - evaluate(w - h).d_dw) / (2 * h)
            except (OutsideSeedDomainError, OverflowError, ZeroDivisionError):
                return None
            slope = -x * x * second
            if slope == 0:
                return None
            step = jac / slope
            lam = lam - step
            if abs(step) < 1e-14 * (1 + abs(lam)):
                return lam
        return None

    @staticmethod
    def continue_evaluator(evaluate: Evaluator, x: float, y: float, cfg: SolverConfig = None,
                           label: str = "seed", holomorphic: bool = True) -> SolveResult:
        """March from the initial slice lambda(0, y) = f(y) to x along fixed y"""
        cfg = cfg or SolverConfig()
        try:
            lam = evaluate(complex(y)).value
        except OutsideSeedDomainError as e:
            raise _failure(Outcome.OUTSIDE_SEED_DOMAIN, f"{label}: {e}", x_reached=0.0)
        except OverflowError:
            raise _failure(Outcome.NON_CONVERGENCE, f"{label}: f({y}) overflows", x_reached=0.0)

        status = SolveStatus(Outcome.CONVERGED, 1.0, lam.imag)
        result = SolveResult(lam, complex(y), 1 + 0j, status, 0, "continuation")
        if x == 0:
            return result
        if lam.imag <= 0:
            raise _failure(Outcome.ELLIPTICITY_LOSS, f"{label}: Im f({y}) <= 0", lam, 1.0, 0.0)

        steps = cfg.continuation_steps
        iterations = 0
        for k in range(1, steps + 1):
            xk = x * k / steps
            try:
                result = SolverService.newton_evaluator(evaluate, xk, y, result.lam, cfg, label)
            except SolverError as e:
                x_reached = x * (k - 1) / steps
                outcome = e.outcome
                if outcome == Outcome.NON_CONVERGENCE:
                    # The last converged step names the mechanism that is closing in
                    last = result
                    ellipticity = last.lam.imag / abs(last.lam)
                    outcome = Outcome.SHOCK if last.status.jacobian_modulus <= ellipticity else Outcome.ELLIPTICITY_LOSS
                logger.debug(f"Continuation for {label} stopped at x={xk} ({outcome.value}), reached x={x_reached}")
                raise SolverError(
                    f"{label}: continuation to ({x}, {y}) failed at x={xk} ({outcome.value})",
                    SolveStatus(outcome, e.status.jacobian_modulus, e.status.im_lambda),
                    e.lam, x_reached
                )
            iterations += result.iterations

        if holomorphic and result.status.jacobian_modulus < math.sqrt(cfg.shock_tol):
            polished = SolverService._polish_shock(evaluate, x, y, result.lam, cfg)
            if polished is not None:
                try:
                    residual = abs(polished - evaluate(y - polished * x).value)
                except OutsideSeedDomainError:
                    residual = math.inf
                if residual <= SHOCK_POLISH_RESIDUAL * (1 + abs(polished)):
                    raise SolverError(
                        f"{label}: ({x}, {y}) is a shock point",
                        SolveStatus(Outcome.SHOCK, 0.0, polished.imag), polished, x
                    )

        return SolveResult(result.lam, result.w0, result.jac, result.status, iterations, "continuation")

    @staticmethod
    def solve_continuation(spec: SeedSpec, x: float, y: float, cfg: SolverConfig = None) -> SolveResult:
        """Continuation from the y-axis for the seed's implicit equation"""
        SolverService._check_slab(spec, x)
        return SolverService.continue_evaluator(
            SolverService._seed_evaluator(spec), x, y, cfg, str(spec), spec.is_holomorphic
        )

# services/analysis_service.py
"""
Numerical checks of the transform's identities.

Derivatives of the solved field are taken by central differences of
SolverService.solve on the coordinates, so every check exercises the same
dispatch (initial slice, closed form or continuation) as the CLI.
"""

from typing import Callable, Iterable, Tuple

from models.report import FDConfig, FDScheme, ResidualReport
from models.seed import PerturbationSpec, SeedEval, SeedFamily, SeedSpec
from models.solve import SolverConfig
from services.field_service import FieldService
from services.seed_service import SeedService
from services.solver_service import SolverService
from utils.exceptions import (
    EquivarianceSideError,
    SolverError,
    UnsupportedCompositionError,
    UnsupportedFamilyError,
)
from utils.logger import get_logger

logger = get_logger(__name__)

Field = Callable[[float, float], complex]

def _partials(func: Field, x: float, y: float, fd: FDConfig) -> Tuple[complex, complex]:
    h = fd.step
    if fd.scheme == FDScheme.CENTRAL4:
        dx = (-func(x + 2 * h, y) + 8 * func(x + h, y) - 8 * func(x - h, y) + func(x - 2 * h, y)) / (12 * h)
        dy = (-func(x, y + 2 * h) + 8 * func(x, y + h) - 8 * func(x, y - h) + func(x, y - 2 * h)) / (12 * h)
    else:
        dx = (func(x + h, y) - func(x - h, y)) / (2 * h)
        dy = (func(x, y + h) - func(x, y - h)) / (2 * h)
    return dx, dy

class AnalysisService:
    @staticmethod
    def _lambda_field(spec: SeedSpec, cfg: SolverConfig) -> Field:
        return lambda x, y: SolverService.solve(spec, x, y, cfg).lam

    @staticmethod
    def _mu_field(spec: SeedSpec, cfg: SolverConfig) -> Field:
        return lambda x, y: FieldService.cayley(SolverService.solve(spec, x, y, cfg).lam)

    @staticmethod
    def rigidity_residual(spec: SeedSpec, x: float, y: float, fd: FDConfig = None,
                          cfg: SolverConfig = None) -> ResidualReport:
        """Transport residual H = lambda_x + lambda lambda_y"""
        fd = fd or FDConfig()
        cfg = cfg or SolverConfig()
        lam = SolverService.solve(spec, x, y, cfg).lam
        lam_x, lam_y = _partials(AnalysisService._lambda_field(spec, cfg), x, y, fd)
        value = lam_x + lam * lam_y

        logger.debug(f"rigidity {spec} at ({x}, {y}): |H| = {abs(value):.3e}")
        return ResidualReport("rigidity", (x, y), value, fd.step,
                              {'lambda': lam, 'lambda_x': lam_x, 'lambda_y': lam_y, 'H': value})

    @staticmethod
    def obstruction_initial(spec: SeedSpec, y: float) -> complex:
        """H on the initial slice: 2i Im f(y) f_wbar(y)"""
        ev = SeedService.eval_seed(spec, y)
        if ev.d_dwbar == 0:
            return 0j
        return 2j * ev.value.imag * ev.d_dwbar

    @staticmethod
    def self_dilatation_residual(spec: SeedSpec, x: float, y: float, fd: FDConfig = None,
                                 cfg: SolverConfig = None) -> ResidualReport:
        """mu_zbar - mu mu_z with z = x + iy"""
        fd = fd or FDConfig()
        cfg = cfg or SolverConfig()
        mu = FieldService.cayley(SolverService.solve(spec, x, y, cfg).lam)
        mu_x, mu_y = _partials(AnalysisService._mu_field(spec, cfg), x, y, fd)
        mu_z = (mu_x - 1j * mu_y) / 2
        mu_zbar = (mu_x + 1j * mu_y) / 2
        value = mu_zbar - mu * mu_z

        return ResidualReport("dilatation", (x, y), value, fd.step,
                              {'mu': mu, 'mu_z': mu_z, 'mu_zbar': mu_zbar})

    @staticmethod
    def poincare_residual_initial(spec: SeedSpec, y: float, fd: FDConfig = None,
                                  cfg: SolverConfig = None) -> ResidualReport:
        """Closed-form Poincare residual of mu on x = 0; detail['R_fd'] holds the finite-difference value"""
        fd = fd or FDConfig()
        cfg = cfg or SolverConfig()
        ev = SeedService.eval_seed(spec, y)
        value = -4j * ev.value.imag * ev.d_dwbar / (ev.value + 1j) ** 3

        fd_report = AnalysisService.self_dilatation_residual(spec, 0.0, y, fd, cfg)
        detail = dict(fd_report.detail)
        detail['R_fd'] = fd_report.value
        detail['lambda'] = ev.value
        return ResidualReport("poincare", (0.0, y), value, fd.step, detail)

    # Propagator

    @staticmethod
    def _require_holomorphic(spec: SeedSpec):
        if not spec.is_holomorphic:
            raise UnsupportedFamilyError(f"The propagator needs a holomorphic seed, got {spec.family.value}")

    @staticmethod
    def propagator(spec: SeedSpec, h: PerturbationSpec, x: float, y: float,
                   cfg: SolverConfig = None) -> complex:
        """Linear response h(w0)/J of the transform to the seed direction h"""
        AnalysisService._require_holomorphic(spec)
        result = SolverService.solve(spec, x, y, cfg)
        return SeedService.eval_perturbation(h, result.w0) / result.jac

    @staticmethod
    def _perturbed_evaluator(spec: SeedSpec, h: PerturbationSpec, eps: float) -> Callable[[complex], SeedEval]:
        def evaluate(w: complex) -> SeedEval:
            ev = SeedService.eval_seed(spec, w)
            return SeedEval(
                ev.value + eps * SeedService.eval_perturbation(h, w),
                ev.d_dw + eps * SeedService.eval_perturbation_derivative(h, w),
                ev.d_dwbar
            )
        return evaluate

    @staticmethod
    def propagator_fd_check(spec: SeedSpec, h: PerturbationSpec, x: float, y: float,
                            eps: float = 1e-6, cfg: SolverConfig = None) -> ResidualReport:
        """Propagator against the central difference of the perturbed transforms f +/- eps h"""
        AnalysisService._require_holomorphic(spec)
        cfg = cfg or SolverConfig()
        base = SolverService.solve(spec, x, y, cfg)
        expected = SeedService.eval_perturbation(h, base.w0) / base.jac

        # Perturbed roots sit O(eps) from the base root
        plus = SolverService.newton_evaluator(
            AnalysisService._perturbed_evaluator(spec, h, eps), x, y, base.lam, cfg, f"{spec}+eps*{h.describe()}"
        ).lam
        minus = SolverService.newton_evaluator(
            AnalysisService._perturbed_evaluator(spec, h, -eps), x, y, base.lam, cfg, f"{spec}-eps*{h.describe()}"
        ).lam
        difference = (plus - minus) / (2 * eps)
        value = expected - difference

        return ResidualReport("propagator_fd", (x, y), value, eps,
                              {'lambda': base.lam, 'P': expected, 'P_fd': difference})

    @staticmethod
    def deformed_product(jac: complex, v1: complex, v2: complex) -> complex:
        """f-deformed product J v1 v2 of two transform variations"""
        return jac * v1 * v2

    @staticmethod
    def twisted_multiplicativity_residual(spec: SeedSpec, h1: PerturbationSpec, h2: PerturbationSpec,
                                          x: float, y: float, cfg: SolverConfig = None) -> ResidualReport:
        """P[h1 h2] - J P[h1] P[h2]"""
        AnalysisService._require_holomorphic(spec)
        result = SolverService.solve(spec, x, y, cfg)

        def response(h: PerturbationSpec) -> complex:
            return SeedService.eval_perturbation(h, result.w0) / result.jac

        product = response(PerturbationSpec.product(h1, h2))
        p1, p2 = response(h1), response(h2)
        value = product - AnalysisService.deformed_product(result.jac, p1, p2)

        return ResidualReport("twisted_multiplicativity", (x, y), value, 0.0,
                              {'J': result.jac, 'P_h1': p1, 'P_h2': p2, 'P_h1h2': product})

    # Affine equivariance

    @staticmethod
    def _composed_lambda(spec: SeedSpec, a: float, b: float, x: float, y: float,
                         cfg: SolverConfig) -> Tuple[complex, str]:
        try:
            composed = SeedService.apply_affine(spec, a, b)
            return SolverService.solve(composed, x, y, cfg).lam, "catalog"
        except UnsupportedCompositionError:
            pass

        def evaluate(w: complex) -> SeedEval:
            ev = SeedService.eval_seed(spec, w)
            return SeedEval(a * ev.value + b, a * ev.d_dw, a * ev.d_dwbar)

        label = f"{a}*({spec})+{b}"
        SolverService._check_slab(spec, x)
        result = SolverService.continue_evaluator(evaluate, x, y, cfg, label, spec.is_holomorphic)
        return result.lam, "newton"

    @staticmethod
    def affine_equivariance_residual(spec: SeedSpec, a: float, b: float, x: float, y: float,
                                     cfg: SolverConfig = None) -> ResidualReport:
        """B[a f + b](x, y) - (a B[f](a x, y - b x) + b)"""
        cfg = cfg or SolverConfig()
        try:
            left, route = AnalysisService._composed_lambda(spec, a, b, x, y, cfg)
        except SolverError as e:
            raise EquivarianceSideError("left", e)
        try:
            inner = SolverService.solve(spec, a * x, y - b * x, cfg).lam
        except SolverError as e:
            raise EquivarianceSideError("right", e)

        right = a * inner + b
        return ResidualReport(f"equivariance_{route}", (x, y), left - right, 0.0,
                              {'left': left, 'right': right, 'a': complex(a), 'b': complex(b)})

    # Seed-level identities

    @staticmethod
    def seed_recovery_residual(spec: SeedSpec, y_samples: Iterable[float], cfg: SolverConfig = None) -> float:
        """max |B[f](0, y) - f(y)| over the samples"""
        worst = 0.0
        for y in y_samples:
            lam = SolverService.solve(spec, 0.0, y, cfg).lam
            worst = max(worst, abs(lam - SeedService.eval_seed(spec, y).value))
        return worst

    @staticmethod
    def cauchy_characteristic_residual(spec: SeedSpec, x: float, y: float,
                                       cfg: SolverConfig = None) -> ResidualReport:
        """w0 against its inversion -1/lambda - i delta for the Cauchy kernel"""
        if spec.family != SeedFamily.CAUCHY_KERNEL:
            raise UnsupportedFamilyError("Characteristic inversion is specific to the Cauchy kernel")
        result = SolverService.solve(spec, x, y, cfg)
        inverted = -1 / result.lam - 1j * spec.params['delta']
        return ResidualReport("cauchy_characteristic", (x, y), result.w0 - inverted, 0.0,
                              {'lambda': result.lam, 'w0': result.w0})

    @staticmethod
    def self_perturbation_residual(spec: SeedSpec, x: float, y: float, cfg: SolverConfig = None) -> ResidualReport:
        """P[f] against the family's closed form"""
        family = spec.family
        if family not in (SeedFamily.EXPONENTIAL, SeedFamily.CAUCHY_KERNEL, SeedFamily.AFFINE_DELTA):
            raise UnsupportedFamilyError(f"No closed-form self-perturbation for {family.value}")

        result = SolverService.solve(spec, x, y, cfg)
        lam = result.lam
        response = SeedService.eval_perturbation(PerturbationSpec.wrap_seed(spec), result.w0) / result.jac

        if family == SeedFamily.EXPONENTIAL:
            expected = lam / (1 + lam * x)
        elif family == SeedFamily.CAUCHY_KERNEL:
            expected = lam / (1 + lam * lam * x)
        else:
            expected = lam / (1 + x)

        return ResidualReport("self_perturbation", (x, y), response - expected, 0.0,
                              {'lambda': lam, 'P': response, 'expected': expected})

# services/verification_service.py
from typing import Any, Callable, Dict, List, Tuple, Union

from models.report import CheckResult, FDConfig, Suite
from models.seed import PerturbationSpec, SeedFamily, SeedSpec
from models.solve import SolverConfig
from services.analysis_service import AnalysisService
from services.field_service import FieldService
from services.seed_service import SeedService
from utils.exceptions import RigidLabError, UnsupportedCompositionError, UnsupportedFamilyError
from utils.logger import get_logger

logger = get_logger(__name__)

Point = Tuple[float, float]

RIGIDITY_TOL = 1e-6
DILATATION_TOL = 1e-6
OBSTRUCTION_TOL = 1e-5
POINCARE_TOL = 1e-4
PROPAGATOR_FD_TOL = 1e-5
TWISTED_TOL = 1e-12
SELF_PERTURBATION_TOL = 1e-10
EQUIVARIANCE_CATALOG_TOL = 1e-11
EQUIVARIANCE_NEWTON_TOL = 1e-9
RECOVERY_TOL = 1e-13
CAUCHY_CHARACTERISTIC_TOL = 1e-12

PROPAGATOR_EPS = 1e-6
AFFINE_TWISTS = ((2.0, 0.0), (1.0, 3.0), (0.5, -1.0))
OBSTRUCTION_YS = (-1.0, 0.0, 1.0)
RECOVERY_YS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)

# Interior points per family; Epsilon points are in units of 1/|eps|
BASE_POINTS: Dict[SeedFamily, Tuple[Point, ...]] = {
    SeedFamily.CONSTANT: ((0.3, 1.0), (-0.5, -2.0), (1.0, 0.5), (2.0, -1.0)),
    SeedFamily.AFFINE_DELTA: ((0.3, 1.0), (-0.5, 0.5), (1.0, -2.0), (0.5, 0.5)),
    SeedFamily.GENERIC_AFFINE: ((0.3, 1.0), (-0.5, 0.5), (1.0, -2.0), (0.5, 0.5)),
    SeedFamily.EPSILON: ((0.15, 0.5), (-0.25, 0.25), (0.25, -0.5), (0.5, 0.0)),
    SeedFamily.EXPONENTIAL: ((0.3, 1.0), (-0.5, 0.5), (1.0, -1.0), (2.0, 0.0)),
    # Left of the y-axis, away from the shock point (delta^2/4, 0)
    SeedFamily.CAUCHY_KERNEL: ((-0.1, 0.5), (-0.5, -1.0), (-1.0, 0.0), (-0.3, 2.0)),
    SeedFamily.QUADRATIC: ((0.3, 1.0), (-0.5, 0.5), (1.0, -1.0), (0.5, 0.0)),
    # Implicit solves for this seed stay in |x| <= 0.5
    SeedFamily.NON_HOLO_TEST: ((0.0, 0.5), (0.2, -0.5), (-0.3, 1.0), (0.4, 0.0)),
}

def _format_complex(value: complex) -> str:
    return f"{value.real:.6g}{value.imag:+.6g}i"

class VerificationService:
    @staticmethod
    def _in_domain(spec: SeedSpec, x: float, y: float) -> bool:
        try:
            return FieldService.domain_contains(spec, x, y)
        except UnsupportedFamilyError:
            return True

    @staticmethod
    def points_for(spec: SeedSpec) -> List[Point]:
        """Built-in check points for the seed, scaled to its family and filtered to its domain"""
        points = BASE_POINTS[spec.family]
        if spec.family == SeedFamily.EPSILON:
            scale = 1 / abs(spec.params['eps'])
            points = tuple((x * scale, y * scale) for x, y in points)
        return [(x, y) for x, y in points if VerificationService._in_domain(spec, x, y)]

    @staticmethod
    def _check(name: str, spec: SeedSpec, point: Point, tolerance: float,
               compute: Callable[[], Union[float, Tuple[float, str]]]) -> CheckResult:
        """Run one check; compute returns the magnitude, optionally with a message"""
        seed = spec.to_cli()
        try:
            outcome = compute()
        except (UnsupportedFamilyError, UnsupportedCompositionError) as e:
            logger.warning(f"Skipping {name} for {seed} at {point}: {e}")
            return CheckResult(name, seed, point, 0.0, tolerance, True, True, str(e))
        except RigidLabError as e:
            logger.error(f"{name} for {seed} at {point} failed: {e}")
            return CheckResult(name, seed, point, float('inf'), tolerance, False, False, str(e))

        magnitude, message = outcome if isinstance(outcome, tuple) else (outcome, "")
        passed = magnitude < tolerance
        if not passed:
            logger.warning(f"{name} for {seed} at {point}: {magnitude:.3e} >= {tolerance:.0e}")
        return CheckResult(name, seed, point, magnitude, tolerance, passed, message=message)

    @staticmethod
    def _skipped(name: str, spec: SeedSpec, point: Point, tolerance: float, reason: str) -> CheckResult:
        logger.warning(f"Skipping {name} for {spec} at {point}: {reason}")
        return CheckResult(name, spec.to_cli(), point, 0.0, tolerance, True, True, reason)

    # Suites

    @staticmethod
    def rigidity_checks(spec: SeedSpec, fd: FDConfig, cfg: SolverConfig) -> List[CheckResult]:
        results = []
        for point in VerificationService.points_for(spec):
            if not spec.is_holomorphic:
                results.append(VerificationService._skipped(
                    "rigidity", spec, point, RIGIDITY_TOL, "seed is not holomorphic"))
                continue
            results.append(VerificationService._check(
                "rigidity", spec, point, RIGIDITY_TOL,
                lambda p=point: AnalysisService.rigidity_residual(spec, p[0], p[1], fd, cfg).magnitude
            ))
        return results

    @staticmethod
    def dilatation_checks(spec: SeedSpec, fd: FDConfig, cfg: SolverConfig) -> List[CheckResult]:
        results = []
        for point in VerificationService.points_for(spec):
            if spec.is_holomorphic:
                results.append(VerificationService._check(
                    "dilatation", spec, point, DILATATION_TOL,
                    lambda p=point: AnalysisService.self_dilatation_residual(spec, p[0], p[1], fd, cfg).magnitude
                ))
                continue

            # Without holomorphy both residuals must vanish together
            seed = spec.to_cli()
            try:
                dilatation = AnalysisService.self_dilatation_residual(spec, point[0], point[1], fd, cfg).magnitude
                rigidity = AnalysisService.rigidity_residual(spec, point[0], point[1], fd, cfg).magnitude
            except RigidLabError as e:
                logger.error(f"dilatation for {seed} at {point} failed: {e}")
                results.append(CheckResult("dilatation_iff_rigidity", seed, point, float('inf'),
                                           DILATATION_TOL, False, False, str(e)))
                continue
            passed = (dilatation < DILATATION_TOL) == (rigidity < RIGIDITY_TOL)
            results.append(CheckResult("dilatation_iff_rigidity", seed, point, dilatation, DILATATION_TOL, passed,
                                       message=f"|H| = {rigidity:.3e}"))
        return results

    @staticmethod
    def obstruction_checks(spec: SeedSpec, fd: FDConfig, cfg: SolverConfig) -> List[CheckResult]:
        results = []
        for y in OBSTRUCTION_YS:
            point = (0.0, y)
            if not (SeedService.seed_domain_contains(spec, y) and VerificationService._in_domain(spec, 0.0, y)):
                continue

            def obstruction(y=y) -> Tuple[float, str]:
                fd_value = AnalysisService.rigidity_residual(spec, 0.0, y, fd, cfg).value
                expected = AnalysisService.obstruction_initial(spec, y)
                return abs(fd_value - expected), f"H = {_format_complex(fd_value)}, expected {_format_complex(expected)}"

            def poincare(y=y) -> float:
                report = AnalysisService.poincare_residual_initial(spec, y, fd, cfg)
                return abs(report.detail['R_fd'] - report.value)

            results.append(VerificationService._check("obstruction", spec, point, OBSTRUCTION_TOL, obstruction))
            results.append(VerificationService._check("poincare", spec, point, POINCARE_TOL, poincare))
        return results

    @staticmethod
    def propagator_checks(spec: SeedSpec, cfg: SolverConfig) -> List[CheckResult]:
        identity = PerturbationSpec.identity()
        h1 = PerturbationSpec.constant(2)
        h2 = PerturbationSpec.monomial(1, 2)
        results = []

        for point in VerificationService.points_for(spec):
            x, y = point
            results.append(VerificationService._check(
                "propagator_fd", spec, point, PROPAGATOR_FD_TOL,
                lambda: AnalysisService.propagator_fd_check(spec, identity, x, y, PROPAGATOR_EPS, cfg).magnitude
            ))

            def twisted(x=x, y=y) -> float:
                report = AnalysisService.twisted_multiplicativity_residual(spec, h1, h2, x, y, cfg)
                # Rounding scales with the size of the responses
                return report.magnitude / max(1.0, abs(report.detail['P_h1h2']))

            results.append(VerificationService._check("twisted_multiplicativity", spec, point, TWISTED_TOL, twisted))

            if spec.family in (SeedFamily.EXPONENTIAL, SeedFamily.CAUCHY_KERNEL, SeedFamily.AFFINE_DELTA):
                results.append(VerificationService._check(
                    "self_perturbation", spec, point, SELF_PERTURBATION_TOL,
                    lambda: AnalysisService.self_perturbation_residual(spec, x, y, cfg).magnitude
                ))
        return results

    @staticmethod
    def equivariance_checks(spec: SeedSpec, cfg: SolverConfig) -> List[CheckResult]:
        try:
            SeedService.apply_affine(spec, *AFFINE_TWISTS[0])
            tolerance = EQUIVARIANCE_CATALOG_TOL
        except UnsupportedCompositionError:
            tolerance = EQUIVARIANCE_NEWTON_TOL

        results = []
        for point in VerificationService.points_for(spec):
            x, y = point
            for a, b in AFFINE_TWISTS:
                if not VerificationService._in_domain(spec, a * x, y - b * x):
                    continue
                results.append(VerificationService._check(
                    f"equivariance(a={a:g},b={b:g})", spec, point, tolerance,
                    lambda a=a, b=b: AnalysisService.affine_equivariance_residual(spec, a, b, x, y, cfg).magnitude
                ))
        return results

    @staticmethod
    def recovery_checks(spec: SeedSpec, cfg: SolverConfig) -> List[CheckResult]:
        ys = [y for y in RECOVERY_YS if SeedService.seed_domain_contains(spec, y)]
        results = [VerificationService._check(
            "seed_recovery", spec, (0.0, 0.0), RECOVERY_TOL,
            lambda: AnalysisService.seed_recovery_residual(spec, ys, cfg)
        )]

        if spec.family == SeedFamily.CAUCHY_KERNEL:
            for point in VerificationService.points_for(spec):
                results.append(VerificationService._check(
                    "cauchy_characteristic", spec, point, CAUCHY_CHARACTERISTIC_TOL,
                    lambda p=point: AnalysisService.cauchy_characteristic_residual(spec, p[0], p[1], cfg).magnitude
                ))
        return results

    @staticmethod
    def run_suite(spec: SeedSpec, suite: Suite, fd: FDConfig = None, cfg: SolverConfig = None) -> Dict[str, Any]:
        """Run a verification suite and summarize it"""
        fd = fd or FDConfig()
        cfg = cfg or SolverConfig()
        logger.info(f"Running {suite.value} suite for {spec}")

        runners = {
            Suite.RIGIDITY: lambda: VerificationService.rigidity_checks(spec, fd, cfg),
            Suite.DILATATION: lambda: VerificationService.dilatation_checks(spec, fd, cfg),
            Suite.OBSTRUCTION: lambda: VerificationService.obstruction_checks(spec, fd, cfg),
            Suite.PROPAGATOR: lambda: VerificationService.propagator_checks(spec, cfg),
            Suite.EQUIVARIANCE: lambda: VerificationService.equivariance_checks(spec, cfg),
        }

        results: List[CheckResult] = []
        if suite == Suite.ALL:
            for runner in runners.values():
                results.extend(runner())
            results.extend(VerificationService.recovery_checks(spec, cfg))
        else:
            results.extend(runners[suite]())

        skipped = sum(1 for r in results if r.skipped)
        failed = sum(1 for r in results if not r.passed)
        summary = {
            'status': 'success' if failed == 0 else 'failure',
            'seed': spec.to_cli(),
            'suite': suite.value,
            'total': len(results),
            'passed': len(results) - failed - skipped,
            'failed': failed,
            'skipped': skipped,
            'results': results
        }

        logger.info(f"{suite.value} suite for {spec}: {summary['passed']} passed, {failed} failed, {skipped} skipped")
        return summary

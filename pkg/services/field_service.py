# services/field_service.py
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from config.settings import settings
from models.field import BoundaryType, GridField, GridSpec, SpectralSample
from models.seed import SeedFamily, SeedSpec
from models.solve import Outcome, SolveResult, SolverConfig, SolveStatus
from services.solver_service import SolverService
from utils.exceptions import (
    OutsideDomainError,
    PoleAtMinusIError,
    PoleAtOneError,
    SolverError,
    UnsupportedFamilyError,
)
from utils.lambert_w import lambert_w0
from utils.logger import get_logger

logger = get_logger(__name__)

GOLDEN = (math.sqrt(5) - 1) / 2
EDGE_ITERATIONS = 200
DUPLICATE_RADIUS = 1e-8

class FieldService:
    @staticmethod
    def cayley(lam: complex) -> complex:
        """Beltrami coefficient mu = (lambda - i)/(lambda + i)"""
        lam = complex(lam)
        if lam == -1j:
            raise PoleAtMinusIError("Cayley map has a pole at lambda = -i")
        return (lam - 1j) / (lam + 1j)

    @staticmethod
    def inverse_cayley(mu: complex) -> complex:
        mu = complex(mu)
        if mu == 1:
            raise PoleAtOneError("Inverse Cayley map has a pole at mu = 1")
        return 1j * (1 + mu) / (1 - mu)

    @staticmethod
    def structure_map(lam: complex) -> Tuple[float, float, float]:
        """(alpha, beta, Delta) = (|lambda|^2, -2 Re lambda, 4 alpha - beta^2)"""
        lam = complex(lam)
        alpha = lam.real * lam.real + lam.imag * lam.imag
        beta = -2 * lam.real
        # 4|lambda|^2 - 4 (Re lambda)^2 without the cancellation
        delta_disc = 4 * lam.imag * lam.imag
        return alpha, beta, delta_disc

    @staticmethod
    def beltrami_modulus_closed_form(spec: SeedSpec, x: float, y: float) -> float:
        """|mu|^2 from the family formula"""
        family = spec.family

        if family == SeedFamily.EPSILON:
            eps = spec.params['eps']
            disc = 4 * (1 - eps * x) - eps * eps * y * y
            if disc <= 0:
                raise OutsideDomainError(f"({x}, {y}) is outside the domain of {spec}")
            root = math.sqrt(disc)
            return (2 - eps * x - root) / (2 - eps * x + root)

        if family == SeedFamily.AFFINE_DELTA:
            if not x > -1:
                raise OutsideDomainError(f"({x}, {y}) is outside the domain of {spec}")
            delta = spec.params['delta']
            return (y * y + (delta - 1 - x) ** 2) / (y * y + (delta + 1 + x) ** 2)

        if family == SeedFamily.CAUCHY_KERNEL and x == 0:
            delta = spec.params['delta']
            return ((delta - 1) ** 2 + y * y) / ((delta + 1) ** 2 + y * y)

        raise UnsupportedFamilyError(f"No closed-form Beltrami modulus for {spec} at x={x}")

    @staticmethod
    def structure_closed_form(spec: SeedSpec, x: float, y: float) -> Tuple[float, float, float]:
        """(alpha, beta, Delta) from the family formulas"""
        family = spec.family
        p = spec.params

        if family == SeedFamily.CONSTANT:
            c = p['c']
            return c * c, 0.0, 4 * c * c

        if family in (SeedFamily.AFFINE_DELTA, SeedFamily.GENERIC_AFFINE):
            if family == SeedFamily.AFFINE_DELTA:
                a, b, d = 1.0, 0.0, p['delta']
            else:
                a, b, d = p['slope'], p['intercept'], p['imag']
            den = 1 + a * x
            if not den > 0:
                raise OutsideDomainError(f"({x}, {y}) is outside the domain of {spec}")
            shift = a * y + b
            return (shift * shift + d * d) / den ** 2, -2 * shift / den, 4 * d * d / den ** 2

        if family == SeedFamily.EPSILON:
            eps = p['eps']
            q = 1 - eps * x
            disc = 4 * q - eps * eps * y * y
            if not FieldService.domain_contains(spec, x, y):
                raise OutsideDomainError(f"({x}, {y}) is outside the domain of {spec}")
            return 1 / q, eps * y / q, disc / (q * q)

        if family == SeedFamily.EXPONENTIAL:
            if x == 0:
                scale = math.exp(2 * y)
                return scale, 0.0, 4 * scale
            w = lambert_w0(1j * x * math.exp(y)).w
            return abs(w) ** 2 / (x * x), -2 * w.real / x, 4 * w.imag ** 2 / (x * x)

        if family == SeedFamily.CAUCHY_KERNEL:
            if y != 0:
                raise UnsupportedFamilyError("Cauchy kernel structure has a closed form on the axis y = 0 only")
            delta = p['delta']
            shock_x = delta * delta / 4
            if x == shock_x:
                raise OutsideDomainError(f"({x}, 0) is the shock point of {spec}")
            if x < shock_x:
                alpha = 4 / (delta + math.sqrt(delta * delta - 4 * x)) ** 2
                return alpha, 0.0, 4 * alpha
            return 1 / x, math.sqrt(4 * x - delta * delta) / x, delta * delta / (x * x)

        raise UnsupportedFamilyError(f"No closed-form structure for {spec.family.value}")

    @staticmethod
    def domain_contains(spec: SeedSpec, x: float, y: float) -> bool:
        """Closed-form membership of (x, y) in the transform's domain"""
        family = spec.family
        p = spec.params

        if family == SeedFamily.NON_HOLO_TEST:
            raise UnsupportedFamilyError("NonHoloTest has no rigid domain")
        if family == SeedFamily.AFFINE_DELTA:
            return x > -1
        if family == SeedFamily.GENERIC_AFFINE:
            return 1 + p['slope'] * x > 0
        if family == SeedFamily.EPSILON:
            eps = p['eps']
            return eps * eps * y * y < 4 * (1 - eps * x)
        if family == SeedFamily.CAUCHY_KERNEL:
            return not (x == p['delta'] ** 2 / 4 and y == 0)
        # Constant, Exponential and Quadratic transforms are global
        return True

    @staticmethod
    def boundary_type(spec: SeedSpec, x: float, y: float, tol: float = 1e-6) -> BoundaryType:
        """Failure mechanism at a boundary point of the domain"""
        family = spec.family
        p = spec.params

        if family in (SeedFamily.AFFINE_DELTA, SeedFamily.GENERIC_AFFINE):
            slope = 1.0 if family == SeedFamily.AFFINE_DELTA else p['slope']
            if abs(1 + slope * x) <= tol:
                return BoundaryType.PURE_SHOCK

        elif family == SeedFamily.EPSILON:
            eps = p['eps']
            if abs(x - 1 / eps) <= tol and abs(y) <= tol:
                return BoundaryType.PURE_SHOCK
            if abs(eps * eps * y * y - 4 * (1 - eps * x)) <= tol:
                if abs(x) <= tol:
                    return BoundaryType.ELLIPTICITY_LOSS
                return BoundaryType.MIXED

        elif family == SeedFamily.CAUCHY_KERNEL:
            if abs(x - p['delta'] ** 2 / 4) <= tol and abs(y) <= tol:
                return BoundaryType.PURE_SHOCK

        raise OutsideDomainError(f"({x}, {y}) is not a boundary point of {spec}")

    @staticmethod
    def sample_from_result(x: float, y: float, result: SolveResult) -> SpectralSample:
        """Derive mu and the structure coefficients from a converged solve"""
        mu = FieldService.cayley(result.lam)
        alpha, beta, delta_disc = FieldService.structure_map(result.lam)
        return SpectralSample(x, y, result.lam, result.w0, result.jac, mu, alpha, beta, delta_disc, result.status)

    @staticmethod
    def failed_sample(x: float, y: float, error: SolverError) -> SpectralSample:
        return SpectralSample.failed(x, y, error.status or SolveStatus(Outcome.NON_CONVERGENCE))

    @staticmethod
    def _sample_node(spec: SeedSpec, x: float, y: float, cfg: SolverConfig) -> SpectralSample:
        try:
            result = SolverService.solve(spec, x, y, cfg)
        except SolverError as e:
            return FieldService.failed_sample(x, y, e)
        except UnsupportedFamilyError as e:
            logger.debug(f"Node ({x}, {y}) skipped: {e}")
            return SpectralSample.failed(x, y, SolveStatus(Outcome.NON_CONVERGENCE))

        return FieldService.sample_from_result(x, y, result)

    @staticmethod
    def sample_grid(spec: SeedSpec, grid: GridSpec, cfg: SolverConfig = None) -> GridField:
        """Evaluate every grid node; failures are kept as per-node statuses"""
        cfg = cfg or SolverConfig()
        nodes = grid.nodes()
        workers = min(settings.thread_count(), len(nodes))

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                samples = list(pool.map(lambda node: FieldService._sample_node(spec, node[0], node[1], cfg), nodes))
        else:
            samples = [FieldService._sample_node(spec, x, y, cfg) for x, y in nodes]

        field = GridField(grid, spec, tuple(samples))
        logger.info(f"Sampled {spec} on {grid.nx}x{grid.ny} grid with {workers} worker(s): {field.outcome_counts()}")
        return field

    @staticmethod
    def leaf_sample(spec: SeedSpec, grid: GridSpec, cfg: SolverConfig = None) -> List[complex]:
        """Beltrami coefficients of all converged grid nodes"""
        field = FieldService.sample_grid(spec, grid, cfg)
        return [sample.mu for sample in field.samples if sample.converged]

    # Shock tracing

    @staticmethod
    def _measure_node(spec: SeedSpec, x: float, y: float, cfg: SolverConfig) -> Tuple[bool, float, Optional[Outcome]]:
        try:
            result = SolverService.solve(spec, x, y, cfg)
            return True, result.status.jacobian_modulus, None
        except SolverError as e:
            modulus = e.status.jacobian_modulus if e.status else math.inf
            return False, modulus, e.outcome
        except UnsupportedFamilyError:
            return False, math.inf, None

    @staticmethod
    def _is_local_min(field: GridField, i: int, j: int) -> bool:
        grid = field.grid
        here = field.sample_at(i, j)
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ni, nj = i + di, j + dj
            if 0 <= ni < grid.nx and 0 <= nj < grid.ny:
                other = field.sample_at(ni, nj)
                if other.converged and other.abs_jac < here.abs_jac:
                    return False
        return True

    @staticmethod
    def _bisect_status_edge(spec: SeedSpec, inside: SpectralSample, outside: SpectralSample,
                            cfg: SolverConfig) -> Tuple[Tuple[float, float], float]:
        """Walk the edge to the converged/failed transition; returns the inner point and its |J|"""
        target = 10 * cfg.shock_tol
        p_in = (inside.x, inside.y)
        p_out = (outside.x, outside.y)
        best = inside.abs_jac

        for _ in range(EDGE_ITERATIONS):
            mid = ((p_in[0] + p_out[0]) / 2, (p_in[1] + p_out[1]) / 2)
            if mid == p_in or mid == p_out:
                break
            converged, modulus, _ = FieldService._measure_node(spec, mid[0], mid[1], cfg)
            if converged:
                p_in, best = mid, modulus
                if modulus < target:
                    break
            else:
                p_out = mid

        return p_in, best

    @staticmethod
    def _minimize_edge(spec: SeedSpec, a: SpectralSample, b: SpectralSample,
                       cfg: SolverConfig) -> Tuple[Tuple[float, float], float]:
        """Golden-section search for the smallest |J| along an edge between converged nodes"""
        target = 10 * cfg.shock_tol

        def at(t: float) -> Tuple[float, float]:
            return (a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))

        def modulus(t: float) -> float:
            x, y = at(t)
            converged, value, outcome = FieldService._measure_node(spec, x, y, cfg)
            if converged or outcome == Outcome.SHOCK:
                return value
            return math.inf

        lo, hi = 0.0, 1.0
        t1, t2 = hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo)
        m1, m2 = modulus(t1), modulus(t2)
        best_t, best = (0.0, a.abs_jac) if a.abs_jac <= b.abs_jac else (1.0, b.abs_jac)

        for _ in range(EDGE_ITERATIONS):
            for t, m in ((t1, m1), (t2, m2)):
                if m < best:
                    best_t, best = t, m
            if best < target or hi - lo < 1e-16:
                break
            if m1 <= m2:
                hi, t2, m2 = t2, t1, m1
                t1 = hi - GOLDEN * (hi - lo)
                m1 = modulus(t1)
            else:
                lo, t1, m1 = t1, t2, m2
                t2 = lo + GOLDEN * (hi - lo)
                m2 = modulus(t2)

        return at(best_t), best

    @staticmethod
    def shock_trace(spec: SeedSpec, grid: GridSpec, cfg: SolverConfig = None) -> List[Tuple[float, float]]:
        """Points approximating the shock locus |J| = 0 inside the grid window"""
        cfg = cfg or SolverConfig()
        field = FieldService.sample_grid(spec, grid, cfg)
        # Square-root shocks cannot get |J| below ~sqrt(shock_tol) in double precision
        accept = math.sqrt(cfg.shock_tol)
        points: List[Tuple[float, float]] = []

        for j in range(grid.ny):
            for i in range(grid.nx):
                here = field.sample_at(i, j)
                for ni, nj in ((i + 1, j), (i, j + 1)):
                    if ni >= grid.nx or nj >= grid.ny:
                        continue
                    there = field.sample_at(ni, nj)

                    if here.converged != there.converged:
                        inside, outside = (here, there) if here.converged else (there, here)
                        point, modulus = FieldService._bisect_status_edge(spec, inside, outside, cfg)
                    elif here.converged and (FieldService._is_local_min(field, i, j)
                                             or FieldService._is_local_min(field, ni, nj)):
                        point, modulus = FieldService._minimize_edge(spec, here, there, cfg)
                    else:
                        continue

                    if modulus < accept and not any(
                        math.hypot(point[0] - px, point[1] - py) < DUPLICATE_RADIUS for px, py in points
                    ):
                        points.append(point)

        logger.info(f"Shock trace for {spec}: {len(points)} point(s) on {grid.nx}x{grid.ny} grid")
        return points

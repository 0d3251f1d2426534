# services/seed_service.py
import cmath
import math

from models.seed import PerturbationKind, PerturbationSpec, SeedEval, SeedFamily, SeedSpec
from utils.exceptions import InvalidSeedError, OutsideSeedDomainError, UnsupportedCompositionError
from utils.logger import get_logger

logger = get_logger(__name__)

HALF_PI = math.pi / 2

class SeedService:
    @staticmethod
    def seed_domain_contains(spec: SeedSpec, w: complex) -> bool:
        """Check whether w lies in the seed's holomorphy domain"""
        w = complex(w)
        if not cmath.isfinite(w):
            return False

        family = spec.family
        if family == SeedFamily.EPSILON:
            # Principal root of 4 - eps^2 w^2 is cut along the real rays |w| >= 2/|eps|
            return not (w.imag == 0 and abs(w.real) >= 2 / abs(spec.params['eps']))
        if family == SeedFamily.EXPONENTIAL:
            return abs(w.imag) < HALF_PI
        if family == SeedFamily.CAUCHY_KERNEL:
            return w + 1j * spec.params['delta'] != 0
        return True

    @staticmethod
    def eval_seed(spec: SeedSpec, w: complex) -> SeedEval:
        """Evaluate f, f_w and f_wbar at w"""
        w = complex(w)
        if not SeedService.seed_domain_contains(spec, w):
            raise OutsideSeedDomainError(f"{spec} is not defined at w={w}", w)

        family = spec.family
        p = spec.params

        if family == SeedFamily.CONSTANT:
            return SeedEval(1j * p['c'], 0j, 0j)

        if family == SeedFamily.AFFINE_DELTA:
            return SeedEval(w + 1j * p['delta'], 1 + 0j, 0j)

        if family == SeedFamily.GENERIC_AFFINE:
            a = p['slope']
            return SeedEval(a * w + p['intercept'] + 1j * p['imag'], complex(a), 0j)

        if family == SeedFamily.EPSILON:
            eps = p['eps']
            root = cmath.sqrt(4 - eps * eps * w * w)
            value = (-eps * w + 1j * root) / 2
            return SeedEval(value, 1j * eps * value / root, 0j)

        if family == SeedFamily.EXPONENTIAL:
            # f' = f, same object
            value = 1j * cmath.exp(w)
            return SeedEval(value, value, 0j)

        if family == SeedFamily.CAUCHY_KERNEL:
            q = w + 1j * p['delta']
            return SeedEval(-1 / q, 1 / (q * q), 0j)

        if family == SeedFamily.NON_HOLO_TEST:
            c = p['c']
            return SeedEval(w + 1j * p['delta'] + c * w.conjugate(), 1 + 0j, complex(c))

        if family == SeedFamily.QUADRATIC:
            return SeedEval(w * w + 1j * p['delta'], 2 * w, 0j)

        raise InvalidSeedError(f"Unknown seed family: {family}")

    @staticmethod
    def apply_affine(spec: SeedSpec, a: float, b: float) -> SeedSpec:
        """Seed of a*f + b, when it stays in the catalog"""
        if not a > 0:
            raise InvalidSeedError(f"Affine twist needs a > 0, got {a}")

        family = spec.family
        p = spec.params

        if family == SeedFamily.AFFINE_DELTA:
            result = SeedSpec.generic_affine(a, b, a * p['delta'])
        elif family == SeedFamily.GENERIC_AFFINE:
            result = SeedSpec.generic_affine(a * p['slope'], a * p['intercept'] + b, a * p['imag'])
        elif family == SeedFamily.CONSTANT:
            result = SeedSpec.generic_affine(0.0, b, a * p['c'])
        else:
            raise UnsupportedCompositionError(
                f"{family.value} composed with {a}*f + {b} leaves the closed-form catalog"
            )

        logger.debug(f"apply_affine({spec}, a={a}, b={b}) -> {result}")
        return result

    @staticmethod
    def eval_perturbation(h: PerturbationSpec, w: complex) -> complex:
        """Evaluate the perturbation direction h at w"""
        w = complex(w)
        kind = h.kind

        if kind == PerturbationKind.CONSTANT_FN:
            return h.coeffs[0]
        if kind == PerturbationKind.IDENTITY_FN:
            return h.coeffs[0] * w
        if kind == PerturbationKind.AFFINE_FN:
            return h.coeffs[0] * w + h.coeffs[1]
        if kind == PerturbationKind.MONOMIAL_FN:
            return h.coeffs[0] * w ** h.degree
        if kind == PerturbationKind.WRAP_SEED:
            return SeedService.eval_seed(h.seed, w).value
        if kind == PerturbationKind.PRODUCT:
            first, second = h.factors
            return SeedService.eval_perturbation(first, w) * SeedService.eval_perturbation(second, w)

        raise ValueError(f"Unknown perturbation kind: {kind}")

    @staticmethod
    def eval_perturbation_derivative(h: PerturbationSpec, w: complex) -> complex:
        """Complex derivative h'(w)"""
        w = complex(w)
        kind = h.kind

        if kind == PerturbationKind.CONSTANT_FN:
            return 0j
        if kind == PerturbationKind.IDENTITY_FN:
            return h.coeffs[0]
        if kind == PerturbationKind.AFFINE_FN:
            return h.coeffs[0]
        if kind == PerturbationKind.MONOMIAL_FN:
            if h.degree == 0:
                return 0j
            return h.degree * h.coeffs[0] * w ** (h.degree - 1)
        if kind == PerturbationKind.WRAP_SEED:
            return SeedService.eval_seed(h.seed, w).d_dw
        if kind == PerturbationKind.PRODUCT:
            first, second = h.factors
            return (SeedService.eval_perturbation_derivative(first, w) * SeedService.eval_perturbation(second, w)
                    + SeedService.eval_perturbation(first, w) * SeedService.eval_perturbation_derivative(second, w))

        raise ValueError(f"Unknown perturbation kind: {kind}")

# models/seed.py
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from utils.exceptions import InvalidSeedError

class SeedFamily(Enum):
    CONSTANT = "Constant"
    AFFINE_DELTA = "AffineDelta"
    EPSILON = "Epsilon"
    EXPONENTIAL = "Exponential"
    CAUCHY_KERNEL = "CauchyKernel"
    GENERIC_AFFINE = "GenericAffine"
    NON_HOLO_TEST = "NonHoloTest"
    QUADRATIC = "Quadratic"

# Parameter names in CLI order
FAMILY_PARAMS: Dict[SeedFamily, Tuple[str, ...]] = {
    SeedFamily.CONSTANT: ('c',),
    SeedFamily.AFFINE_DELTA: ('delta',),
    SeedFamily.EPSILON: ('eps',),
    SeedFamily.EXPONENTIAL: (),
    SeedFamily.CAUCHY_KERNEL: ('delta',),
    SeedFamily.GENERIC_AFFINE: ('slope', 'intercept', 'imag'),
    SeedFamily.NON_HOLO_TEST: ('delta', 'c'),
    SeedFamily.QUADRATIC: ('delta',),
}

# Parameters that carry the ellipticity and must be strictly positive
POSITIVE_PARAMS: Dict[SeedFamily, Tuple[str, ...]] = {
    SeedFamily.CONSTANT: ('c',),
    SeedFamily.AFFINE_DELTA: ('delta',),
    SeedFamily.CAUCHY_KERNEL: ('delta',),
    SeedFamily.GENERIC_AFFINE: ('imag',),
    SeedFamily.NON_HOLO_TEST: ('delta',),
    SeedFamily.QUADRATIC: ('delta',),
}

CLI_TAGS: Dict[str, SeedFamily] = {
    'const': SeedFamily.CONSTANT,
    'delta': SeedFamily.AFFINE_DELTA,
    'eps': SeedFamily.EPSILON,
    'exp': SeedFamily.EXPONENTIAL,
    'cauchy': SeedFamily.CAUCHY_KERNEL,
    'affine': SeedFamily.GENERIC_AFFINE,
    'nonholo': SeedFamily.NON_HOLO_TEST,
    'quad': SeedFamily.QUADRATIC,
}

FAMILY_TAGS: Dict[SeedFamily, str] = {family: tag for tag, family in CLI_TAGS.items()}

def _family_from_name(name: str) -> SeedFamily:
    key = name.strip()
    if key.lower() in CLI_TAGS:
        return CLI_TAGS[key.lower()]
    for family in SeedFamily:
        if family.value.lower() == key.lower():
            return family
    raise InvalidSeedError(f"Unknown seed family: {name!r}")

@dataclass(frozen=True)
class SeedSpec:
    family: SeedFamily
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        expected = FAMILY_PARAMS[self.family]
        if set(self.params) != set(expected):
            raise InvalidSeedError(
                f"{self.family.value} expects parameters {list(expected)}, got {sorted(self.params)}"
            )

        try:
            coerced = {name: float(self.params[name]) for name in expected}
        except (TypeError, ValueError) as e:
            raise InvalidSeedError(f"{self.family.value} parameters must be real numbers: {e}")

        for name, value in coerced.items():
            if value != value or value in (float('inf'), float('-inf')):
                raise InvalidSeedError(f"{self.family.value} parameter {name} must be finite")

        for name in POSITIVE_PARAMS.get(self.family, ()):
            if coerced[name] <= 0:
                raise InvalidSeedError(f"{self.family.value} requires {name} > 0, got {coerced[name]}")

        if self.family == SeedFamily.EPSILON and coerced['eps'] == 0:
            raise InvalidSeedError("Epsilon requires eps != 0")

        object.__setattr__(self, 'params', coerced)

    def __hash__(self):
        return hash((self.family, tuple(self.params[name] for name in FAMILY_PARAMS[self.family])))

    # Catalog constructors
    @classmethod
    def constant(cls, c: float) -> 'SeedSpec':
        return cls(SeedFamily.CONSTANT, {'c': c})

    @classmethod
    def affine_delta(cls, delta: float) -> 'SeedSpec':
        return cls(SeedFamily.AFFINE_DELTA, {'delta': delta})

    @classmethod
    def epsilon(cls, eps: float) -> 'SeedSpec':
        return cls(SeedFamily.EPSILON, {'eps': eps})

    @classmethod
    def exponential(cls) -> 'SeedSpec':
        return cls(SeedFamily.EXPONENTIAL, {})

    @classmethod
    def cauchy_kernel(cls, delta: float) -> 'SeedSpec':
        return cls(SeedFamily.CAUCHY_KERNEL, {'delta': delta})

    @classmethod
    def generic_affine(cls, slope: float, intercept: float, imag: float) -> 'SeedSpec':
        return cls(SeedFamily.GENERIC_AFFINE, {'slope': slope, 'intercept': intercept, 'imag': imag})

    @classmethod
    def non_holo_test(cls, delta: float, c: float) -> 'SeedSpec':
        return cls(SeedFamily.NON_HOLO_TEST, {'delta': delta, 'c': c})

    @classmethod
    def quadratic(cls, delta: float) -> 'SeedSpec':
        return cls(SeedFamily.QUADRATIC, {'delta': delta})

    def param(self, name: str) -> float:
        return self.params[name]

    @property
    def is_holomorphic(self) -> bool:
        return self.family != SeedFamily.NON_HOLO_TEST

    @property
    def has_closed_form(self) -> bool:
        return self.family != SeedFamily.NON_HOLO_TEST

    @property
    def imaginary_on_real_axis(self) -> bool:
        """True when f maps the real line into the positive imaginary axis"""
        if self.family in (SeedFamily.CONSTANT, SeedFamily.EXPONENTIAL):
            return True
        if self.family == SeedFamily.GENERIC_AFFINE:
            return self.params['slope'] == 0 and self.params['intercept'] == 0
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family.value,
            'params': {name: self.params[name] for name in FAMILY_PARAMS[self.family]}
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SeedSpec':
        if 'family' not in data:
            raise InvalidSeedError("Seed object requires a 'family' key")
        return cls(_family_from_name(str(data['family'])), dict(data.get('params') or {}))

    @classmethod
    def parse(cls, text: str) -> 'SeedSpec':
        """Parse CLI seed syntax family[:p1[,p2[,p3]]]"""
        if not text or not text.strip():
            raise InvalidSeedError("Empty seed")

        tag, _, raw_params = text.strip().partition(':')
        family = _family_from_name(tag)
        names = FAMILY_PARAMS[family]
        values = [v.strip() for v in raw_params.split(',')] if raw_params.strip() else []

        if len(values) != len(names):
            raise InvalidSeedError(
                f"Seed '{FAMILY_TAGS[family]}' takes {len(names)} parameter(s) ({','.join(names) or 'none'}), got {len(values)}"
            )

        try:
            params = {name: float(value) for name, value in zip(names, values)}
        except ValueError:
            raise InvalidSeedError(f"Seed parameters must be numbers: {raw_params!r}")

        return cls(family, params)

    def to_cli(self) -> str:
        tag = FAMILY_TAGS[self.family]
        names = FAMILY_PARAMS[self.family]
        if not names:
            return tag
        return f"{tag}:{','.join(format(self.params[n], '.17g') for n in names)}"

    def __str__(self):
        return self.to_cli()

@dataclass(frozen=True)
class SeedEval:
    value: complex
    d_dw: complex
    d_dwbar: complex = 0j

class PerturbationKind(Enum):
    CONSTANT_FN = "ConstantFn"
    IDENTITY_FN = "IdentityFn"
    AFFINE_FN = "AffineFn"
    MONOMIAL_FN = "MonomialFn"
    WRAP_SEED = "WrapSeed"
    PRODUCT = "Product"

@dataclass(frozen=True)
class PerturbationSpec:
    kind: PerturbationKind
    coeffs: Tuple[complex, ...] = ()
    degree: int = 0
    seed: Optional[SeedSpec] = None
    factors: Tuple['PerturbationSpec', ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', tuple(complex(c) for c in self.coeffs))

        if self.kind == PerturbationKind.MONOMIAL_FN and self.degree < 0:
            raise ValueError(f"MonomialFn degree must be >= 0, got {self.degree}")
        if self.kind == PerturbationKind.WRAP_SEED:
            if self.seed is None:
                raise ValueError("WrapSeed needs a seed")
            if not self.seed.is_holomorphic:
                raise ValueError("WrapSeed needs a holomorphic seed")
        if self.kind == PerturbationKind.PRODUCT and len(self.factors) != 2:
            raise ValueError("Product needs exactly two factors")

    @classmethod
    def constant(cls, c: complex) -> 'PerturbationSpec':
        return cls(PerturbationKind.CONSTANT_FN, (c,))

    @classmethod
    def identity(cls, coeff: complex = 1) -> 'PerturbationSpec':
        return cls(PerturbationKind.IDENTITY_FN, (coeff,))

    @classmethod
    def affine(cls, a: complex, b: complex) -> 'PerturbationSpec':
        return cls(PerturbationKind.AFFINE_FN, (a, b))

    @classmethod
    def monomial(cls, coeff: complex, degree: int) -> 'PerturbationSpec':
        return cls(PerturbationKind.MONOMIAL_FN, (coeff,), degree)

    @classmethod
    def wrap_seed(cls, seed: SeedSpec) -> 'PerturbationSpec':
        return cls(PerturbationKind.WRAP_SEED, seed=seed)

    @classmethod
    def product(cls, h1: 'PerturbationSpec', h2: 'PerturbationSpec') -> 'PerturbationSpec':
        return cls(PerturbationKind.PRODUCT, factors=(h1, h2))

    def describe(self) -> str:
        if self.kind == PerturbationKind.WRAP_SEED:
            return f"WrapSeed({self.seed})"
        if self.kind == PerturbationKind.PRODUCT:
            return f"{self.factors[0].describe()}*{self.factors[1].describe()}"
        args = [format(c, '.6g') for c in self.coeffs]
        if self.kind == PerturbationKind.MONOMIAL_FN:
            args.append(f"deg={self.degree}")
        return f"{self.kind.value}({','.join(args)})"

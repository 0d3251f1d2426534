# models/lambert.py
from dataclasses import dataclass

@dataclass(frozen=True)
class LambertResult:
    w: complex
    iterations: int = 0
    residual: float = 0.0

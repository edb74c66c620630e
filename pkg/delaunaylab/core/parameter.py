"""Delaunay parameter and the initial value of the profile."""
import math
from dataclasses import dataclass
from enum import Enum

from delaunaylab.utils.errors import DomainError


class SurfaceKind(Enum):
    UNDULOID = 'unduloid'
    CYLINDER = 'cylinder'
    NODOID = 'nodoid'


@dataclass(frozen=True)
class DelaunayParameter:
    """Validated Delaunay parameter tau in (-inf, 1] minus {0}."""

    tau: float
    kind: SurfaceKind

    @property
    def embedded(self) -> bool:
        return self.kind is not SurfaceKind.NODOID

    @property
    def sign(self) -> int:
        return 1 if self.tau > 0 else -1


def classify(tau: float) -> DelaunayParameter:
    tau = float(tau)
    if not math.isfinite(tau):
        raise DomainError(f'tau must be finite, got {tau}')
    if tau == 0:
        raise DomainError('tau = 0 is the singular limit of tangent spheres')
    if tau > 1:
        raise DomainError(f'tau must not exceed 1, got {tau}')
    if tau == 1:
        kind = SurfaceKind.CYLINDER
    elif tau > 0:
        kind = SurfaceKind.UNDULOID
    else:
        kind = SurfaceKind.NODOID
    return DelaunayParameter(tau=tau, kind=kind)


def initial_sigma(tau: float) -> float:
    """Negative root sigma_0 of tau^2 cosh^2 = 1 (tau > 0) or tau^2 sinh^2 = 1 (tau < 0)."""
    param = classify(tau)
    if param.tau > 0:
        return -math.acosh(1 / param.tau)
    return -math.asinh(1 / abs(param.tau))

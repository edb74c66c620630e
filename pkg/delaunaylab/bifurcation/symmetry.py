"""Screw-motion symmetry classes T_{j,alpha}."""
import math
from dataclasses import dataclass

from delaunaylab.utils.errors import DomainError
from delaunaylab.utils.generic import fold_phase, wrap_phase

ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class SymmetryClass:
    """j-fold rotational symmetry combined with invariance under the screw motion of angle alpha.

    The quasiperiodicity phase seen by the n-th axial mode is n j alpha, folded into [0, pi].
    """

    j: int
    alpha: float

    def __post_init__(self):
        if int(self.j) != self.j or self.j < 2:
            raise DomainError(f'rotational order j must be an integer >= 2, got {self.j}')
        if abs(self.alpha) > math.pi / self.j + ANGLE_SLACK:
            raise DomainError(f'screw angle must lie in [-pi/{self.j}, pi/{self.j}], got {self.alpha}')

    @property
    def beta(self) -> float:
        return self.phase(1)

    def phase(self, n: int = 1) -> float:
        return fold_phase(n * self.j * self.alpha)

    def wrapped_phase(self, n: int = 1) -> float:
        return wrap_phase(n * self.j * self.alpha)

    def mirrored(self) -> 'SymmetryClass':
        return SymmetryClass(self.j, -self.alpha)

    def __str__(self) -> str:
        return f'T(j={self.j}, alpha={self.alpha:.15g})'

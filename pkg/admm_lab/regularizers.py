"""
Separable convex regularizers f(s) = sum_n f(s_n) and their proximity maps.

A regularizer only defines the scalar penalty and the scalar prox. Both are
written with numpy elementwise operations, so the same callable serves a
single coordinate, an ADMM iterate and a whole particle ensemble; the ADMM
solver and the prediction engine therefore apply literally the same map.

The prox level ``gamma`` is the full multiplier of f, i.e. callers pass
``lambda / rho`` for the z-update.
"""

import math
from abc import ABC, abstractmethod
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .exceptions import ValidationError

ArrayLike = Union[float, np.ndarray]


class RegularizerKind(str, Enum):
    """Available separable regularizers."""
    L1 = "l1"
    BOX = "box"  # indicator of [-1, 1]


class SeparableRegularizer(ABC):
    """Scalar convex penalty lifted elementwise."""

    kind: RegularizerKind

    @abstractmethod
    def value(self, s: ArrayLike) -> ArrayLike:
        """Scalar penalty f(s), elementwise; may be +inf."""

    @abstractmethod
    def prox(self, gamma: float, r: ArrayLike) -> ArrayLike:
        """argmin_u { gamma * f(u) + (1/2)(u - r)^2 }, elementwise."""

    @classmethod
    def from_kind(cls, kind: Union[str, RegularizerKind]) -> 'SeparableRegularizer':
        try:
            kind = RegularizerKind(kind)
        except ValueError:
            raise ValidationError(f"Unknown regularizer '{kind}'")
        if kind == RegularizerKind.L1:
            return L1()
        return BoxIndicator()

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class L1(SeparableRegularizer):
    """f(s) = |s|."""

    kind = RegularizerKind.L1

    def value(self, s: ArrayLike) -> ArrayLike:
        return np.abs(s)

    def prox(self, gamma: float, r: ArrayLike) -> ArrayLike:
        return prox_l1(gamma, r)


class BoxIndicator(SeparableRegularizer):
    """f(s) = 0 on [-1, 1], +inf outside."""

    kind = RegularizerKind.BOX

    def value(self, s: ArrayLike) -> ArrayLike:
        return np.where(np.abs(s) <= 1.0, 0.0, np.inf)

    def prox(self, gamma: float, r: ArrayLike) -> ArrayLike:
        return prox_box(gamma, r)


def _check_gamma(gamma: float) -> None:
    if not gamma > 0:
        raise ValidationError(f"Prox level gamma must be positive, got {gamma!r}")


def prox_l1(gamma: float, r: ArrayLike) -> ArrayLike:
    """Soft threshold: sign(r) * max(|r| - gamma, 0)."""
    _check_gamma(gamma)
    return np.sign(r) * np.maximum(np.abs(r) - gamma, 0.0)


def prox_box(gamma: float, r: ArrayLike) -> ArrayLike:
    """Projection onto [-1, 1]; gamma does not matter for an indicator."""
    _check_gamma(gamma)
    return np.clip(r, -1.0, 1.0)


def penalty_value(reg: SeparableRegularizer, s: Sequence[float]) -> float:
    """sum_n f(s_n), without the lambda factor; exactly +inf when infeasible."""
    total = float(np.sum(reg.value(np.asarray(s, dtype=np.float64))))
    return math.inf if math.isinf(total) else total


def prox_vector(reg: SeparableRegularizer, gamma: float, r: Sequence[float]) -> np.ndarray:
    """Coordinatewise scalar prox of ``reg`` at level ``gamma``."""
    return np.asarray(reg.prox(gamma, np.asarray(r, dtype=np.float64)), dtype=np.float64)

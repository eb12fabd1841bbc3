"""Band structure of the uniform single-step walk operator.

In momentum space the step operator is block diagonal with 2x2 blocks
``M(k) = diag(e^{ik}, e^{-ik}) B(theta)``; its eigenphases are
``-/+ E(k)`` with ``cos E = cos(theta) cos(k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .engine import RngStream, coin_matrix, draw_theta

_ZONE_SLACK = 1e-12
_SINGULAR = 1e-24


def _check_k(k: float) -> None:
    if not -math.pi - _ZONE_SLACK <= k <= math.pi + _ZONE_SLACK:
        raise ValueError(f"k={k!r} outside the principal zone [-pi, pi]")


class Bands(NamedTuple):
    e_plus: float
    e_minus: float


class GroupVelocity(NamedTuple):
    vg_plus: float
    vg_minus: float
    limit: bool = False


@dataclass(frozen=True)
class DispersionPoint:
    k: float
    e_plus: float
    e_minus: float
    vg_plus: float
    vg_minus: float


def dispersion(theta: float, k: float) -> Bands:
    """Quasienergies ``+/- arccos(cos(theta) cos(k))``."""
    _check_k(k)
    arg = min(1.0, max(-1.0, math.cos(theta) * math.cos(k)))
    e = math.acos(arg)
    return Bands(e, -e)


def group_velocity(theta: float, k: float) -> GroupVelocity:
    """Derivative of the upper band with respect to ``k``.

    At the band touching points (``sin theta = 0`` and ``k`` in ``{0, +/-pi}``)
    the derivative does not exist.  There the one-sided value from inside the
    zone is returned (0 at ``k = 0``) with ``limit=True``.
    """
    _check_k(k)
    c = math.cos(theta)
    s_th = math.sin(theta)
    s_k = math.sin(k)
    # 1 - c^2 cos^2 k, written without cancellation
    denom2 = s_th * s_th + c * c * s_k * s_k
    if denom2 < _SINGULAR:
        if abs(k) < 0.5 * math.pi:
            v = 0.0
        else:
            v = math.copysign(1.0, c) * math.copysign(1.0, k)
        return GroupVelocity(v, -v, True)
    v = c * s_k / math.sqrt(denom2)
    return GroupVelocity(v, -v, False)


def momentum_step_matrix(theta: float, k: float) -> np.ndarray:
    """2x2 momentum block of the uniform step operator.

    Plane waves are ``<x|k> = e^{ikx}``, so moving coin-up amplitude to the
    left multiplies it by ``e^{+ik}`` and coin-down by ``e^{-ik}``.
    """
    _check_k(k)
    phases = np.array([np.exp(1j * k), np.exp(-1j * k)])
    return phases[:, None] * coin_matrix(theta)


def eigenphases(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalue phases of a 2x2 unitary, folded to ``[-pi, pi]`` and sorted."""
    return np.sort(np.angle(np.linalg.eigvals(matrix)))


def averaged_group_velocity(k: float, n_samples: int) -> float:
    """Mean of ``vg_plus(theta, k)`` over a uniform ``theta`` grid on ``[0, 2*pi)``."""
    if n_samples < 2:
        raise ValueError(f"n_samples must be at least 2, got {n_samples}")
    values = [
        group_velocity(2.0 * math.pi * i / n_samples, k).vg_plus for i in range(n_samples)
    ]
    return math.fsum(values) / n_samples


def averaged_group_velocity_mc(
    k: float, n_samples: int, rng: RngStream
) -> tuple[float, float]:
    """Monte-Carlo disorder average of ``vg_plus``: ``(mean, standard error)``."""
    if n_samples < 2:
        raise ValueError(f"n_samples must be at least 2, got {n_samples}")
    values = np.array([group_velocity(draw_theta(rng), k).vg_plus for _ in range(n_samples)])
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(n_samples))


def max_spread(theta: float, t: int) -> float:
    """Ballistic front distance ``t * max_k |vg| = t * |cos theta|``."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return t * abs(math.cos(theta))


def band_structure(theta: float, n_k: int) -> list[DispersionPoint]:
    """Sample bands and group velocities on a uniform grid over ``[-pi, pi]``."""
    if n_k < 2:
        raise ValueError(f"n_k must be at least 2, got {n_k}")
    points = []
    for k in np.linspace(-math.pi, math.pi, n_k):
        k = float(k)
        e = dispersion(theta, k)
        v = group_velocity(theta, k)
        points.append(DispersionPoint(k, e.e_plus, e.e_minus, v.vg_plus, v.vg_minus))
    return points

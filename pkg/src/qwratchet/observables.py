"""Measured quantities of a walk state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .state import WalkState

NEGATIVE_EIGENVALUE_TOLERANCE = 1e-9
# eigenvalues below this are round-off from pure states; contributes < 1e-13 bits
EIGENVALUE_FLOOR = 1e-15


class NumericalCorruptionError(RuntimeError):
    """Raised when a density matrix has a clearly negative eigenvalue."""


@dataclass(frozen=True)
class Distribution:
    """Position probabilities ``p[i]`` at sites ``x[i]`` (ascending)."""

    x: np.ndarray
    p: np.ndarray

    def __getitem__(self, site: int) -> float:
        idx = np.searchsorted(self.x, site)
        if idx < self.x.size and self.x[idx] == site:
            return float(self.p[idx])
        return 0.0

    def as_dict(self) -> dict[int, float]:
        return {int(x): float(p) for x, p in zip(self.x, self.p)}

    def total(self) -> float:
        return float(self.p.sum())

    def argmax(self) -> int:
        return int(self.x[np.argmax(self.p)])


@dataclass(frozen=True)
class ObservableRecord:
    t: int
    mean_x: float
    sd_x: float
    entropy: float
    norm: float


def probability_distribution(state: WalkState) -> Distribution:
    """``P(x) = |up_x|^2 + |down_x|^2`` over the whole window."""
    return Distribution(state.positions, state.site_probabilities())


def mean_and_sd(x: np.ndarray, p: np.ndarray) -> tuple[float, float]:
    """Mean and spread of ``p`` over sites ``x``.

    The spread is computed about the mean (two-pass) to avoid cancellation
    in ``<x^2> - <x>^2`` for walkers far from the origin.
    """
    m1 = float(np.dot(x, p))
    d = x - m1
    return m1, math.sqrt(max(0.0, float(np.dot(d * d, p))))


def position_mean(state: WalkState) -> float:
    return float(np.dot(state.positions, state.site_probabilities()))


def position_sd(state: WalkState) -> float:
    """Spread ``sqrt(<x^2> - <x>^2)``, clamped at 0 against round-off."""
    return mean_and_sd(state.positions, state.site_probabilities())[1]


def reduced_coin_density(state: WalkState) -> np.ndarray:
    """Trace out position: ``rho_c[i, j] = sum_x a_i(x) conj(a_j(x))``."""
    a = state.amplitudes
    return a @ a.conj().T


def coin_density_eigenvalues(rho: np.ndarray) -> tuple[float, float]:
    """Closed-form eigenvalues of a 2x2 Hermitian matrix, largest first."""
    r00 = float(rho[0, 0].real)
    r11 = float(rho[1, 1].real)
    half_trace = 0.5 * (r00 + r11)
    radius = math.sqrt(0.25 * (r00 - r11) ** 2 + abs(rho[0, 1]) ** 2)
    return half_trace + radius, half_trace - radius


def entropy_of_density(rho: np.ndarray) -> float:
    """Base-2 von Neumann entropy of a 2x2 density matrix.

    Evaluated as the binary entropy of the smaller eigenvalue divided by the
    trace, so a pure state gives exactly 0.
    """
    lam_max, lam_min = coin_density_eigenvalues(rho)
    if lam_min < -NEGATIVE_EIGENVALUE_TOLERANCE:
        raise NumericalCorruptionError(f"reduced density matrix has eigenvalue {lam_min:.3e} < 0")
    trace = lam_max + lam_min
    p = min(0.5, max(0.0, lam_min) / trace) if trace > 0 else 0.0
    if p < EIGENVALUE_FLOOR:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log1p(-p) / math.log(2.0))


def entanglement_entropy(state: WalkState) -> float:
    """Coin-position entanglement entropy in bits (0 for product states, at most 1)."""
    return entropy_of_density(reduced_coin_density(state))


def symmetry_defect(state: WalkState) -> float:
    """``max_x |P(x) - P(-x)|``, mirroring about the origin."""
    p = state.site_probabilities()
    lo, hi = state.x_min, state.x_max
    reach = max(abs(lo), abs(hi))
    full = np.zeros(2 * reach + 1)
    full[lo + reach : hi + reach + 1] = p
    return float(np.max(np.abs(full - full[::-1])))


def record(state: WalkState) -> ObservableRecord:
    p = state.site_probabilities()
    mean_x, sd_x = mean_and_sd(state.positions, p)
    return ObservableRecord(
        t=state.step,
        mean_x=mean_x,
        sd_x=sd_x,
        entropy=entanglement_entropy(state),
        norm=float(p.sum()),
    )

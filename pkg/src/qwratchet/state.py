"""Walker state on a bounded one-dimensional lattice window.

The joint coin (x) position state is stored densely as a ``(2, n)`` complex
array: row 0 holds the coin-up amplitudes, row 1 the coin-down amplitudes,
and column ``j`` corresponds to lattice site ``x_min + j``.  Lattice spacing,
time step and hbar are all 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

SUPPORT_THRESHOLD = 1e-30


class WindowError(RuntimeError):
    """Raised when the wavefunction would leave the represented window."""


class EmptySupportError(ValueError):
    """Raised when asking for the support of an all-zero state."""


class CoinKind(enum.Enum):
    SYMMETRIC = "symmetric"
    UP = "up"
    DOWN = "down"
    CUSTOM = "custom"


@dataclass(frozen=True)
class InitialSpec:
    """Initial walker position and coin state.

    ``coin`` selects one of the standard coin states; for ``CoinKind.CUSTOM``
    the amplitudes ``a`` (up) and ``b`` (down) are used and must be
    normalized.
    """

    position: int = 0
    coin: CoinKind = CoinKind.SYMMETRIC
    a: complex = 0j
    b: complex = 0j

    def __post_init__(self) -> None:
        if self.coin is CoinKind.CUSTOM:
            total = abs(self.a) ** 2 + abs(self.b) ** 2
            if abs(total - 1.0) > 1e-12:
                raise ValueError(
                    f"custom coin amplitudes must satisfy |a|^2 + |b|^2 = 1, got {total!r}"
                )
            if not (np.isfinite(complex(self.a)) and np.isfinite(complex(self.b))):
                raise ValueError("custom coin amplitudes must be finite")

    def coin_amplitudes(self) -> tuple[complex, complex]:
        if self.coin is CoinKind.SYMMETRIC:
            r = 1.0 / math.sqrt(2.0)
            return complex(r), complex(r)
        if self.coin is CoinKind.UP:
            return 1 + 0j, 0j
        if self.coin is CoinKind.DOWN:
            return 0j, 1 + 0j
        return complex(self.a), complex(self.b)

    @classmethod
    def custom(cls, a: complex, b: complex, position: int = 0) -> "InitialSpec":
        return cls(position=position, coin=CoinKind.CUSTOM, a=complex(a), b=complex(b))


@dataclass
class WalkState:
    """Dense coin (x) position amplitudes over the sites ``x_min .. x_max``."""

    amplitudes: np.ndarray
    x_min: int
    step: int = 0
    origin: int = 0
    _positions: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or amps.shape[0] != 2:
            raise ValueError(f"amplitudes must have shape (2, n), got {amps.shape}")
        self.amplitudes = amps

    @property
    def size(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def x_max(self) -> int:
        return self.x_min + self.size - 1

    @property
    def window(self) -> tuple[int, int]:
        return self.x_min, self.x_max

    @property
    def positions(self) -> np.ndarray:
        if self._positions is None:
            self._positions = np.arange(self.x_min, self.x_max + 1)
        return self._positions

    @property
    def up(self) -> np.ndarray:
        return self.amplitudes[0]

    @property
    def down(self) -> np.ndarray:
        return self.amplitudes[1]

    def index_of(self, x: int) -> int:
        if not self.x_min <= x <= self.x_max:
            raise IndexError(f"site {x} outside window [{self.x_min}, {self.x_max}]")
        return x - self.x_min

    def spinor(self, x: int) -> tuple[complex, complex]:
        j = self.index_of(x)
        return complex(self.amplitudes[0, j]), complex(self.amplitudes[1, j])

    def site_probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return (a.real**2 + a.imag**2).sum(axis=0)

    def copy(self) -> "WalkState":
        return WalkState(self.amplitudes.copy(), self.x_min, self.step, self.origin)


def new_state(spec: InitialSpec, max_steps: int) -> WalkState:
    """Build the initial state, sized so ``max_steps`` steps never reach the edge.

    The window is ``[position - max_steps - 1, position + max_steps + 1]``.
    """
    if max_steps < 0:
        raise ValueError(f"max_steps must be nonnegative, got {max_steps}")
    n = 2 * max_steps + 3
    amps = np.zeros((2, n), dtype=np.complex128)
    up, down = spec.coin_amplitudes()
    centre = max_steps + 1
    amps[0, centre] = up
    amps[1, centre] = down
    return WalkState(amps, spec.position - max_steps - 1, step=0, origin=spec.position)


def norm(state: WalkState) -> float:
    """Total probability, sum over sites of ``|up|^2 + |down|^2``."""
    return float(np.sum(state.amplitudes.real**2 + state.amplitudes.imag**2))


def support(state: WalkState) -> tuple[int, int]:
    """Smallest site interval holding all non-negligible probability."""
    occupied = np.flatnonzero(state.site_probabilities() > SUPPORT_THRESHOLD)
    if occupied.size == 0:
        raise EmptySupportError("state has no support (all amplitudes are zero)")
    return state.x_min + int(occupied[0]), state.x_min + int(occupied[-1])

"""Coin fields, the single walk step and schedule execution.

A step is ``W = S (B(theta(x)) (x) I)``: every site first gets its own coin
rotation ``B(theta) = exp(-i theta sigma_x)``, then coin-up amplitude moves
one site left and coin-down amplitude one site right.

Coin-field kinds
----------------
``Fixed(theta)``
    Same fixed angle everywhere.
``Disordered()``
    One fresh uniform angle per step, shared by all sites.
``PawlFixed(theta)``
    Pawl sites plus a fixed background angle.
``PawlDisordered()``
    Pawl sites plus a fresh background angle per step.
``PawlMixed(theta)``
    Each step is ``PawlFixed(theta)`` or ``PawlDisordered()`` with
    probability 1/2.  The choice is drawn before the angle.

The pawl puts angle pi/2 (full reflection) at ``reflect_site`` and angle 0
(free passage) at ``pass_site``, whatever the background does.

Randomness comes from :class:`RngStream`, keyed by ``(seed, index)`` so each
ensemble member has its own reproducible stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Union

import numpy as np

from .state import InitialSpec, WalkState, WindowError, new_state

TWO_PI = 2.0 * math.pi

#: Bump when the mapping (seed, index) -> draws changes.
RNG_STREAM_VERSION = 1


def fold_angle(theta: float) -> float:
    """Reduce an angle into ``[0, 2*pi)``."""
    folded = math.fmod(theta, TWO_PI)
    if folded < 0.0:
        folded += TWO_PI
    if folded >= TWO_PI:
        folded = 0.0
    return folded


def coin_matrix(theta: float) -> np.ndarray:
    """Return the coin rotation ``[[cos t, -i sin t], [-i sin t, cos t]]``."""
    if not math.isfinite(theta):
        raise ValueError(f"coin angle must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


class RngStream:
    """Deterministic random stream for one trajectory.

    Built on numpy's counter-based Philox bit generator seeded from
    ``SeedSequence(seed, spawn_key=(index,))``.  Only ``Generator.random``
    (53-bit doubles) is used, so draws are stable across platforms.
    """

    version = RNG_STREAM_VERSION

    def __init__(self, seed: int, index: int = 0):
        if seed < 0 or index < 0:
            raise ValueError("seed and index must be nonnegative")
        self.seed = int(seed)
        self.index = int(index)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.index,))
        self._gen = np.random.Generator(np.random.Philox(ss))

    def uniform(self) -> float:
        return float(self._gen.random())

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, index={self.index})"


def draw_theta(rng: RngStream) -> float:
    """Draw one coin angle uniformly from ``[0, 2*pi)``."""
    theta = TWO_PI * rng.uniform()
    # u < 1 can still round up to 2*pi
    if theta >= TWO_PI:
        theta = 0.0
    return theta


@dataclass(frozen=True)
class PawlConfig:
    reflect_site: int = -1
    pass_site: int = 0

    REFLECT_ANGLE = math.pi / 2
    PASS_ANGLE = 0.0

    def __post_init__(self) -> None:
        if self.reflect_site == self.pass_site:
            raise ValueError("reflect_site and pass_site must differ")


@dataclass(frozen=True)
class Fixed:
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", fold_angle(self.theta))


@dataclass(frozen=True)
class Disordered:
    pass


@dataclass(frozen=True)
class PawlFixed:
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", fold_angle(self.theta))


@dataclass(frozen=True)
class PawlDisordered:
    pass


@dataclass(frozen=True)
class PawlMixed:
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", fold_angle(self.theta))


CoinFieldKind = Union[Fixed, Disordered, PawlFixed, PawlDisordered, PawlMixed]


@dataclass(frozen=True)
class ResolvedCoinField:
    """Coin angles for a single step: a background angle plus optional pawl."""

    background: float
    pawl: PawlConfig | None = None

    def theta_at(self, x: int) -> float:
        if self.pawl is not None:
            if x == self.pawl.reflect_site:
                return PawlConfig.REFLECT_ANGLE
            if x == self.pawl.pass_site:
                return PawlConfig.PASS_ANGLE
        return self.background

    def angles(self, positions: np.ndarray) -> np.ndarray:
        theta = np.full(positions.shape, self.background, dtype=np.float64)
        if self.pawl is not None:
            theta[positions == self.pawl.reflect_site] = PawlConfig.REFLECT_ANGLE
            theta[positions == self.pawl.pass_site] = PawlConfig.PASS_ANGLE
        return theta


def resolve_coin_field(
    kind: CoinFieldKind, pawl: PawlConfig, rng: RngStream
) -> ResolvedCoinField:
    """Fix the angles for one step, consuming random draws where the kind needs them."""
    if isinstance(kind, Fixed):
        return ResolvedCoinField(kind.theta)
    if isinstance(kind, Disordered):
        return ResolvedCoinField(draw_theta(rng))
    if isinstance(kind, PawlFixed):
        return ResolvedCoinField(kind.theta, pawl)
    if isinstance(kind, PawlDisordered):
        return ResolvedCoinField(draw_theta(rng), pawl)
    if isinstance(kind, PawlMixed):
        if rng.uniform() < 0.5:
            return ResolvedCoinField(kind.theta, pawl)
        return ResolvedCoinField(draw_theta(rng), pawl)
    raise TypeError(f"unknown coin field kind {kind!r}")


def apply_step(state: WalkState, field: ResolvedCoinField) -> WalkState:
    """Apply one coin-then-shift step and return the new state.

    Raises
    ------
    WindowError
        If either boundary site carries amplitude, i.e. the window is too
        small for another step.
    """
    amps = state.amplitudes
    if amps[:, 0].any() or amps[:, -1].any():
        raise WindowError(
            f"amplitude at window boundary [{state.x_min}, {state.x_max}] "
            f"before step {state.step + 1}; window too small"
        )
    theta = field.angles(state.positions)
    c = np.cos(theta)
    s = np.sin(theta)
    up, down = amps[0], amps[1]
    new_up = c * up - 1j * s * down
    new_down = -1j * s * up + c * down

    out = np.zeros_like(amps)
    out[0, :-1] = new_up[1:]
    out[1, 1:] = new_down[:-1]
    return WalkState(out, state.x_min, state.step + 1, state.origin)


@dataclass(frozen=True)
class Term:
    kind: CoinFieldKind
    reps: int

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError(f"term repetitions must be positive, got {self.reps}")


@dataclass(frozen=True)
class Schedule:
    """Ordered walk terms; the first term acts first.

    The operator product ``W2^T2 W1^T1`` (W1 acting first) is the schedule
    ``(Term(PawlFixed(theta), T1), Term(PawlDisordered(), T2))``.
    """

    terms: tuple[Term, ...]
    pawl: PawlConfig = PawlConfig()
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("schedule needs at least one term")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def total_steps(self) -> int:
        return sum(term.reps for term in self.terms)

    def kinds(self) -> Iterator[CoinFieldKind]:
        """Yield the coin-field kind of each step in time order."""
        for term in self.terms:
            for _ in range(term.reps):
                yield term.kind


StepObserver = Callable[[int, WalkState], None]


def run_schedule(
    spec: InitialSpec,
    schedule: Schedule,
    sink: StepObserver | None = None,
    index: int = 0,
) -> WalkState:
    """Evolve ``spec`` through ``schedule`` and return the final state.

    ``index`` selects the trajectory's random stream; ``sink(t, state)`` is
    called after every step.
    """
    rng = RngStream(schedule.seed, index)
    state = new_state(spec, schedule.total_steps)
    for kind in schedule.kinds():
        state = apply_step(state, resolve_coin_field(kind, schedule.pawl, rng))
        if sink is not None:
            sink(state.step, state)
    return state

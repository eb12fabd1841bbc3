import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwratchet import (
    CoinKind,
    Fixed,
    InitialSpec,
    PawlFixed,
    Schedule,
    Term,
    WindowError,
    apply_step,
    new_state,
    norm,
    support,
)
from qwratchet.engine import ResolvedCoinField, RngStream, resolve_coin_field, PawlConfig
from qwratchet.state import EmptySupportError, WalkState


def test_symmetric_initial_state():
    s = new_state(InitialSpec(), 2)
    assert s.window == (-3, 3)
    assert s.step == 0
    assert s.spinor(0) == pytest.approx((1 / math.sqrt(2), 1 / math.sqrt(2)))
    mask = s.positions != 0
    assert not s.amplitudes[:, mask].any()


def test_up_initial_state_off_origin():
    s = new_state(InitialSpec(position=-2, coin=CoinKind.UP), 1)
    assert s.window == (-4, 0)
    assert s.spinor(-2) == (1, 0)
    assert norm(s) == 1.0


def test_custom_initial_state():
    s = new_state(InitialSpec.custom(0.6, 0.8j), 0)
    assert s.spinor(0) == (0.6, 0.8j)
    assert norm(s) == pytest.approx(1.0, abs=1e-15)


def test_custom_not_normalized_rejected():
    with pytest.raises(ValueError, match="must satisfy"):
        InitialSpec.custom(0.6, 0.6)


def test_negative_max_steps_rejected():
    with pytest.raises(ValueError):
        new_state(InitialSpec(), -1)


def test_norm_of_zero_state():
    assert norm(WalkState(np.zeros((2, 5)), -2)) == 0.0


def test_support():
    s = new_state(InitialSpec(), 3)
    assert support(s) == (0, 0)
    s = apply_step(s, ResolvedCoinField(0.0))
    assert support(s) == (-1, 1)
    with pytest.raises(EmptySupportError):
        support(WalkState(np.zeros((2, 5)), -2))


def test_window_too_small_is_a_hard_failure():
    s = new_state(InitialSpec(), 1)
    s = apply_step(s, ResolvedCoinField(0.0))
    s = apply_step(s, ResolvedCoinField(0.0))
    with pytest.raises(WindowError):
        apply_step(s, ResolvedCoinField(0.0))


@settings(max_examples=30, deadline=None)
@given(
    x0=st.integers(-5, 5),
    theta=st.floats(0, 2 * math.pi, exclude_max=True),
    steps=st.integers(1, 40),
    seed=st.integers(0, 2**32),
)
def test_light_cone_and_boundary(x0, theta, steps, seed):
    spec = InitialSpec(position=x0)
    state = new_state(spec, steps)
    rng = RngStream(seed)
    kinds = [Fixed(theta), PawlFixed(theta)]
    for t in range(1, steps + 1):
        field = resolve_coin_field(kinds[t % 2], PawlConfig(), rng)
        state = apply_step(state, field)
        outside = (state.positions < x0 - t) | (state.positions > x0 + t)
        assert not state.amplitudes[:, outside].any()
    assert not state.amplitudes[:, [0, -1]].any()
    lo, hi = support(state)
    assert x0 - steps <= lo and hi <= x0 + steps


def test_norm_conserved_over_1000_steps():
    from qwratchet import parse_schedule, run_schedule

    sched = parse_schedule("F(pi/7)^200 ; D^300 ; PF(pi/30)^200 ; PD^200 ; PM(pi/6)^100", seed=11)
    assert sched.total_steps == 1000
    final = run_schedule(InitialSpec(), sched)
    assert abs(norm(final) - 1.0) < 1e-10

"""Cross-layer conversion between activations and rate-coded spike trains,
plus the discrete leaky integrate-and-fire neuron used on spiking cores."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

# The scheduler addresses at most 16 delivery ticks.
MAX_WINDOW = 16


def _check_window(T: int) -> None:
    if not 1 <= T <= MAX_WINDOW:
        raise ValueError(f"window T must be in [1, {MAX_WINDOW}], got {T}")


def spike_count(a: int, T: int) -> int:
    # floor(a/T) exceeds the window when T^2 < a; the window caps it.
    return min(T, a // T)


def act_to_spikes(a: int, T: int = MAX_WINDOW, b: int = 8) -> tuple[int, ...]:
    """Leading-ones rate code: tick ``t`` fires iff ``t < floor(a / T)``."""
    _check_window(T)
    if not 0 <= a <= (1 << b) - 1:
        raise ValueError(f"activation {a} outside [0, {(1 << b) - 1}]")
    s = spike_count(a, T)
    return (1,) * s + (0,) * (T - s)


def spikes_to_act(train, T: int | None = None, b: int = 8) -> int:
    T = len(train) if T is None else T
    if len(train) != T:
        raise ValueError(f"train has {len(train)} ticks, expected {T}")
    _check_window(T)
    if any(s not in (0, 1) for s in train):
        raise ValueError("spike train values must be 0 or 1")
    return ((1 << b) - 1) * sum(train) // T


def round_trip_error(a: int, T: int = MAX_WINDOW, b: int = 8) -> int:
    return a - spikes_to_act(act_to_spikes(a, T, b), T, b)


@dataclass(frozen=True)
class LifState:
    u: float = 0.0
    beta: float = 0.9
    theta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.theta <= 0:
            raise ValueError("theta must be positive")

    @classmethod
    def from_time_constant(cls, dt: float, tau_m: float, theta: float = 1.0, u: float = 0.0):
        return cls(u=u, beta=math.exp(-dt / tau_m), theta=theta)


def lif_step(state: LifState, input_current: float, reset: str = "subtract") -> tuple[LifState, bool]:
    """One tick of ``u' = beta*u + (1 - beta)*I``; fire when ``u' >= theta``."""
    if reset not in ("subtract", "zero"):
        raise ValueError(f"unknown reset mode {reset!r}")
    u = state.beta * state.u + (1.0 - state.beta) * input_current
    spiked = u >= state.theta
    if spiked:
        u = u - state.theta if reset == "subtract" else 0.0
    return replace(state, u=u), spiked


def lif_run(state: LifState, inputs, reset: str = "subtract") -> tuple[LifState, list[bool]]:
    spikes = []
    for i in inputs:
        state, s = lif_step(state, i, reset)
        spikes.append(s)
    return state, spikes

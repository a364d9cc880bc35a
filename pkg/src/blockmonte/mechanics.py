"""Game-free models of the four in-game measurement instruments.

* hopper timer: releases items at a fixed rate, quantizing elapsed time;
* dropper: ejects its distinct items in uniformly random order;
* random-tick scheduler: 3 cells of a 16^3 cube are picked per 0.05 s tick,
  making waiting times for a watched block geometric;
* slime arena: a persistent random walker in a walled square whose death
  cell acts as a spatial random sample.

Each stochastic operation has a scalar form taking one stream and a
``*_block`` form that draws the same distribution in bulk for the
experiment executor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .combinatorics import Permutation
from .geometry import CircleRaster, GridCell, rasterize_circle
from .rng import RngStream, geometric_trials

# Hoppers move 2.5 items per second.
HOPPER_PERIOD_SECONDS = 0.4
# A dropper holds at most 9 distinct items.
DROPPER_MAX_SLOTS = 9


@dataclass(frozen=True)
class HopperTimer:
    period_seconds: float = HOPPER_PERIOD_SECONDS

    def __post_init__(self) -> None:
        if not self.period_seconds > 0:
            raise ValueError("period_seconds must be > 0")


def hopper_item_count(timer: HopperTimer, duration: float) -> int:
    """Items released while the timer ran for ``duration`` seconds.

    Returns the unique n with n*period <= duration < (n+1)*period.  The
    correction loops pin that half-open contract down in float arithmetic,
    where duration/period alone can land one ulp on the wrong side.
    """
    if duration < 0:
        raise ValueError("duration must be >= 0")
    period = timer.period_seconds
    n = max(0, int(duration // period))
    while (n + 1) * period <= duration:
        n += 1
    while n > 0 and n * period > duration:
        n -= 1
    return n


def hopper_items_in_window(timer: HopperTimer, duration: float, start_phase: float) -> int:
    """Items released during [start_phase, start_phase + duration) for a
    timer that has already been running ``start_phase`` seconds."""
    if start_phase < 0:
        raise ValueError("start_phase must be >= 0")
    return hopper_item_count(timer, duration + start_phase) - hopper_item_count(timer, start_phase)


@dataclass(frozen=True)
class Dropper:
    slot_count: int = DROPPER_MAX_SLOTS

    def __post_init__(self) -> None:
        if not 1 <= self.slot_count <= DROPPER_MAX_SLOTS:
            raise ValueError(f"slot_count must be in [1, {DROPPER_MAX_SLOTS}]")


def dropper_permutation(dropper: Dropper, stream: RngStream) -> Permutation:
    """Eject every slot item in uniformly random order, without replacement.

    Each activation picks one of the remaining items uniformly, so the
    ejection order read as a sequence is a uniform permutation of [n].
    """
    remaining = list(range(1, dropper.slot_count + 1))
    ejected = []
    while remaining:
        ejected.append(remaining.pop(stream.next_int_below(len(remaining))))
    return tuple(ejected)


def dropper_permutation_block(dropper: Dropper, stream: RngStream, count: int) -> np.ndarray:
    """(count, slot_count) array; each row an independent uniform permutation
    of 1..slot_count."""
    return stream.permutation_block(dropper.slot_count, count) + 1


@dataclass(frozen=True)
class RandomTickScheduler:
    """Per tick, picks_per_tick * speed_multiplier cells of the cube are
    picked (with replacement) to receive a random tick."""

    cube_cells: int = 16 ** 3
    picks_per_tick: int = 3
    tick_seconds: float = 0.05
    speed_multiplier: int = 1

    def __post_init__(self) -> None:
        if self.cube_cells < 1 or self.picks_per_tick < 1 or self.speed_multiplier < 1:
            raise ValueError("cube_cells, picks_per_tick and speed_multiplier must be >= 1")
        if not self.tick_seconds > 0:
            raise ValueError("tick_seconds must be > 0")
        if self.picks_per_tick * self.speed_multiplier > self.cube_cells:
            raise ValueError("picks per tick cannot exceed the cube size")

    @property
    def selection_probability(self) -> float:
        """Chance a fixed cell is picked at least once in one tick."""
        if self.cube_cells == 1:
            return 1.0
        picks = self.picks_per_tick * self.speed_multiplier
        return -math.expm1(picks * math.log1p(-1.0 / self.cube_cells))


def ticks_until_growth(sched: RandomTickScheduler, growth_prob: float, stream: RngStream) -> int:
    """Tick index (>= 1) at which the watched block first changes.

    The block changes on a tick iff it is picked (selection_probability) and
    then actually grows (growth_prob), so the wait is geometric with success
    probability selection_probability * growth_prob.
    """
    if not 0.0 < growth_prob <= 1.0:
        raise ValueError("growth_prob must satisfy 0 < p <= 1")
    return geometric_trials(stream, sched.selection_probability * growth_prob)


def ticks_until_growth_block(sched: RandomTickScheduler, growth_prob: float,
                             stream: RngStream, shape) -> np.ndarray:
    if not 0.0 < growth_prob <= 1.0:
        raise ValueError("growth_prob must satisfy 0 < p <= 1")
    return stream.geometric_block(sched.selection_probability * growth_prob, shape)


@dataclass(frozen=True)
class WalkerState:
    position: tuple[float, float]
    heading: float  # radians in [0, 2*pi)


@dataclass(frozen=True)
class SlimeArena:
    """Walled square of cells with coordinates in [-half_width, half_width],
    containing the circle raster of the same radius.

    The walker keeps a heading, occasionally resamples it, and bounces off
    the walls specularly (position and heading both reflect), which keeps
    the uniform distribution stationary.  drift_bias is added to every step
    and models the directional preference most mobs have; slimes have none.
    """

    half_width: int
    raster: CircleRaster | None = None
    step_cells: float = 0.8
    turn_probability: float = 0.2
    drift_bias: tuple[float, float] = (0.0, 0.0)
    kill_probability: float = 0.05

    def __post_init__(self) -> None:
        if self.half_width < 1:
            raise ValueError("half_width must be >= 1")
        if not self.step_cells > 0:
            raise ValueError("step_cells must be > 0")
        if not 0.0 <= self.turn_probability <= 1.0:
            raise ValueError("turn_probability must be in [0, 1]")
        if not 0.0 < self.kill_probability <= 1.0:
            raise ValueError("kill_probability must be in (0, 1]")
        if self.raster is not None and self.raster.radius > self.half_width:
            raise ValueError("raster must fit inside the square")
        reach = self.step_cells + max(abs(self.drift_bias[0]), abs(self.drift_bias[1]))
        if reach >= 2 * self.half_width + 1:
            raise ValueError("step plus drift must stay below the square side")

    def circle(self) -> CircleRaster:
        return self.raster if self.raster is not None else rasterize_circle(self.half_width)

    @property
    def bounds(self) -> tuple[float, float]:
        """Continuous extent [lo, hi) covering cells -half_width..half_width."""
        return float(-self.half_width), float(self.half_width + 1)


def slime_death_cell(arena: SlimeArena, stream: RngStream) -> GridCell:
    """Walk one slime from a uniform start until it is killed; return the
    grid cell containing the death position.

    Each round: the kill check runs first (kill_probability 1 therefore dies
    on its starting cell), then the heading may be resampled, then the slime
    advances one step plus drift and reflects off the walls.
    """
    lo, hi = arena.bounds
    span = hi - lo
    x = lo + stream.next_float() * span
    z = lo + stream.next_float() * span
    heading = stream.next_float() * math.tau
    while True:
        if stream.next_float() < arena.kill_probability:
            return _position_cell(x, z, arena.half_width)
        if stream.next_float() < arena.turn_probability:
            heading = stream.next_float() * math.tau
        x += arena.step_cells * math.cos(heading) + arena.drift_bias[0]
        z += arena.step_cells * math.sin(heading) + arena.drift_bias[1]
        if x >= hi:
            x, heading = 2 * hi - x, math.pi - heading
        elif x < lo:
            x, heading = 2 * lo - x, math.pi - heading
        if z >= hi:
            z, heading = 2 * hi - z, -heading
        elif z < lo:
            z, heading = 2 * lo - z, -heading
        heading %= math.tau


def _position_cell(x: float, z: float, half_width: int) -> GridCell:
    cx = min(max(math.floor(x), -half_width), half_width)
    cz = min(max(math.floor(z), -half_width), half_width)
    return GridCell(cx, cz)


def slime_death_cells(arena: SlimeArena, stream: RngStream, count: int) -> np.ndarray:
    """(count, 2) int array of death cells for ``count`` independent walkers.

    All walkers advance in lockstep on one stream; results are indexed by
    walker, not by death order, so the output is reproducible.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    lo, hi = arena.bounds
    span = hi - lo
    r = arena.half_width
    pos = lo + stream.float_block(2 * count).reshape(count, 2) * span
    angles = stream.float_block(count) * math.tau
    direction = np.column_stack((np.cos(angles), np.sin(angles)))
    drift = np.asarray(arena.drift_bias, dtype=float)
    out = np.empty((count, 2), dtype=np.int64)
    alive = np.arange(count)
    while alive.size:
        kill = stream.float_block(alive.size) < arena.kill_probability
        if kill.any():
            dead_pos = pos[kill]
            out[alive[kill]] = np.clip(np.floor(dead_pos).astype(np.int64), -r, r)
        survivors = ~kill
        pos, direction, alive = pos[survivors], direction[survivors], alive[survivors]
        if not alive.size:
            break
        turning = stream.float_block(alive.size) < arena.turn_probability
        if turning.any():
            new_angles = stream.float_block(int(turning.sum())) * math.tau
            direction[turning, 0] = np.cos(new_angles)
            direction[turning, 1] = np.sin(new_angles)
        pos = pos + arena.step_cells * direction + drift
        for axis in (0, 1):
            over = pos[:, axis] >= hi
            pos[over, axis] = 2 * hi - pos[over, axis]
            direction[over, axis] *= -1
            under = pos[:, axis] < lo
            pos[under, axis] = 2 * lo - pos[under, axis]
            direction[under, axis] *= -1
    return out

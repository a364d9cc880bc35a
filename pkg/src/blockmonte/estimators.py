"""The six experiments, plus count-only replay of recorded runs.

Each randomized estimator consumes trials in fixed-size blocks; block i of
experiment ``label`` draws from the stream (master_seed, (label, i)), and
block results are combined in index order.  That makes every record a pure
function of its ExperimentConfig, no matter how many workers execute the
blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DegenerateCourseError, DegenerateRegionError, DegenerateSampleError
from .geometry import (
    GridCell,
    TriangleCourse,
    rasterize_circle,
    rasterize_curve,
    traversal_seconds,
)
from .mechanics import (
    Dropper,
    HopperTimer,
    RandomTickScheduler,
    SlimeArena,
    dropper_permutation_block,
    hopper_items_in_window,
    slime_death_cells,
    ticks_until_growth_block,
)
from .numtheory import ZETA_EVEN_PI_COEFFICIENT
from .rng import StreamId, derive_stream
from .stats import CONSTANTS, ratio_stderr, relative_error, wilson_ci

VARIANTS = ("sqrt2", "pi", "e", "zeta", "sec_tan", "integral")

# Trials per random stream; one stream per block keeps results independent
# of worker scheduling while still letting numpy do the sampling in bulk.
BLOCK_TRIALS = 1 << 16

Z_95 = 1.96

# One simulated observation: a hit flag, an item/tick count, or a death cell.
TrialOutcome = Union[bool, int, GridCell, tuple]


@dataclass(frozen=True)
class ExperimentConfig:
    variant: str
    master_seed: int = 0
    trials: int = 10_000
    variant_params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"invalid value for 'variant': {self.variant!r} "
                             f"(expected one of {', '.join(VARIANTS)})")
        if not 0 <= self.master_seed < (1 << 64):
            raise ValueError("invalid value for 'seed': must be an unsigned 64-bit integer")
        if self.trials < 1:
            raise ValueError("invalid value for 'trials': must be >= 1")


@dataclass
class EstimateRecord:
    """Point estimate plus uncertainty; the unit of every report.

    ``estimate`` is None only for runs marked failed (degenerate sample).
    stderr and the CI are None where no sampling model applies.
    """

    variant: str
    estimate: float | None
    trials_used: int
    success_count: int | None
    stderr: float | None
    ci_low: float | None
    ci_high: float | None
    reference: float
    relative_error_percent: float | None
    seed: int | None
    params: dict

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "estimate": self.estimate,
            "trials_used": self.trials_used,
            "success_count": self.success_count,
            "stderr": self.stderr,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "reference": self.reference,
            "relative_error_percent": self.relative_error_percent,
            "seed": self.seed,
            "params": self.params,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EstimateRecord":
        return cls(**{name: data[name] for name in (
            "variant", "estimate", "trials_used", "success_count", "stderr",
            "ci_low", "ci_high", "reference", "relative_error_percent",
            "seed", "params")})


# ---------------------------------------------------------------------------
# parameter plumbing


def _take(params: dict, key: str, default):
    return params[key] if key in params else default


def _as_int(params: dict, key: str, default: int, minimum=None, maximum=None) -> int:
    raw = _take(params, key, default)
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise ValueError(f"invalid value for '{key}': {raw!r} is not an integer") from None
    if minimum is not None and value < minimum:
        raise ValueError(f"invalid value for '{key}': must be >= {minimum}")
    if maximum is not None and value > maximum:
        raise ValueError(f"invalid value for '{key}': must be <= {maximum}")
    return value


def _as_float(params: dict, key: str, default: float, positive: bool = False) -> float:
    raw = _take(params, key, default)
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ValueError(f"invalid value for '{key}': {raw!r} is not a number") from None
    if positive and not value > 0:
        raise ValueError(f"invalid value for '{key}': must be > 0")
    return value


def _as_bool(params: dict, key: str, default: bool) -> bool:
    raw = _take(params, key, default)
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"invalid value for '{key}': {raw!r} is not a boolean")


def _as_choice(params: dict, key: str, default: str, choices: tuple[str, ...]) -> str:
    value = str(_take(params, key, default))
    if value not in choices:
        raise ValueError(f"invalid value for '{key}': {value!r} "
                         f"(expected one of {', '.join(choices)})")
    return value


def _as_pair(params: dict, key: str, default: tuple[float, float]) -> tuple[float, float]:
    raw = _take(params, key, default)
    if isinstance(raw, str):
        raw = raw.split(",")
    try:
        first, second = (float(v) for v in raw)
    except (TypeError, ValueError):
        raise ValueError(f"invalid value for '{key}': {raw!r} is not a pair of numbers") from None
    return first, second


def _reject_unknown(params: dict, variant: str, known: tuple[str, ...]) -> None:
    for key in params:
        if key not in known:
            raise ValueError(f"unknown parameter '{key}' for variant '{variant}'")


# ---------------------------------------------------------------------------
# block execution


def _block_plan(trials: int) -> list[tuple[int, int]]:
    plan = []
    index, remaining = 0, trials
    while remaining > 0:
        take = min(BLOCK_TRIALS, remaining)
        plan.append((index, take))
        index += 1
        remaining -= take
    return plan


def _map_blocks(seed: int, label: str, trials: int, block_fn: Callable, workers: int = 1) -> list:
    """Run block_fn(stream, count) for each block; results in block order."""
    plan = _block_plan(trials)

    def run_one(item):
        index, count = item
        return block_fn(derive_stream(seed, StreamId(label, index)), count)

    if workers <= 1 or len(plan) <= 1:
        return [run_one(item) for item in plan]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, plan))


# ---------------------------------------------------------------------------
# pi


_PI_SAMPLERS = ("uniform_ideal", "slime_walk", "slime_walk_drift")
_PI_MEMBERSHIP = ("raster", "exact_disc")


def _resolve_pi_params(variant_params: dict) -> dict:
    _reject_unknown(variant_params, "pi", (
        "radius", "sampler_mode", "raster_mode", "step_cells",
        "turn_probability", "kill_probability", "drift"))
    sampler = _as_choice(variant_params, "sampler_mode", "uniform_ideal", _PI_SAMPLERS)
    default_drift = (0.3, -0.3) if sampler == "slime_walk_drift" else (0.0, 0.0)
    drift = _as_pair(variant_params, "drift", default_drift)
    if sampler != "slime_walk_drift" and drift != (0.0, 0.0):
        raise ValueError("invalid value for 'drift': only slime_walk_drift accepts a bias")
    return {
        "radius": _as_int(variant_params, "radius", 50, minimum=1),
        "sampler_mode": sampler,
        "raster_mode": _as_choice(variant_params, "raster_mode", "exact_disc", _PI_MEMBERSHIP),
        "step_cells": _as_float(variant_params, "step_cells", 0.8, positive=True),
        "turn_probability": _as_float(variant_params, "turn_probability", 0.2),
        "kill_probability": _as_float(variant_params, "kill_probability", 0.05),
        "drift": drift,
    }


def _pi_arena(resolved: dict) -> SlimeArena:
    return SlimeArena(
        half_width=resolved["radius"],
        step_cells=resolved["step_cells"],
        turn_probability=resolved["turn_probability"],
        drift_bias=resolved["drift"],
        kill_probability=resolved["kill_probability"],
    )


def _pi_inside_mask(stream, count: int, resolved: dict, raster, arena) -> np.ndarray:
    radius = resolved["radius"]
    if resolved["sampler_mode"] == "uniform_ideal":
        # Continuous points uniform on the circumscribed square of the disc
        # (side 2R, centered on the origin cell's center): hit chance pi/4.
        xs = 0.5 + (2.0 * stream.float_block(count) - 1.0) * radius
        zs = 0.5 + (2.0 * stream.float_block(count) - 1.0) * radius
        if resolved["raster_mode"] == "exact_disc":
            return (xs - 0.5) ** 2 + (zs - 0.5) ** 2 <= float(radius) ** 2
        cx = np.floor(xs).astype(np.int64)
        cz = np.floor(zs).astype(np.int64)
        return raster.contains_cells(cx, cz)
    cells = slime_death_cells(arena, stream, count)
    cx, cz = cells[:, 0], cells[:, 1]
    if resolved["raster_mode"] == "exact_disc":
        return cx * cx + cz * cz <= radius * radius
    return raster.contains_cells(cx, cz)


def estimate_pi(config: ExperimentConfig, workers: int = 1) -> EstimateRecord:
    """Monte Carlo disc experiment: estimate = 4 * inside / total."""
    resolved = _resolve_pi_params(config.variant_params)
    raster = rasterize_circle(resolved["radius"])
    raster.mask  # build the lookup once, before any worker threads share it
    arena = _pi_arena(resolved) if resolved["sampler_mode"] != "uniform_ideal" else None

    def block(stream, count):
        return int(_pi_inside_mask(stream, count, resolved, raster, arena).sum())

    inside = sum(_map_blocks(config.master_seed, "pi", config.trials, block, workers))
    estimate = 4.0 * inside / config.trials
    p_hat = inside / config.trials
    low, high = wilson_ci(inside, config.trials, Z_95)
    return EstimateRecord(
        variant="pi",
        estimate=estimate,
        trials_used=config.trials,
        success_count=inside,
        stderr=4.0 * math.sqrt(p_hat * (1.0 - p_hat) / config.trials),
        ci_low=4.0 * low,
        ci_high=4.0 * high,
        reference=CONSTANTS.pi,
        relative_error_percent=relative_error(estimate, CONSTANTS.pi),
        seed=config.master_seed,
        params=_echo(resolved),
    )


def collect_pi_outcomes(config: ExperimentConfig, limit: int = 10_000) -> list[GridCell]:
    """Death cells for a scatter plot, drawn with the config's seed.

    Uses its own block-0 stream sized to ``limit``, so the dots are a
    reproducible sample of the configured experiment rather than a prefix
    of the full estimating run.
    """
    resolved = _resolve_pi_params(config.variant_params)
    count = min(config.trials, limit)
    stream = derive_stream(config.master_seed, StreamId("pi/scatter", 0))
    if resolved["sampler_mode"] == "uniform_ideal":
        radius = resolved["radius"]
        xs = 0.5 + (2.0 * stream.float_block(count) - 1.0) * radius
        zs = 0.5 + (2.0 * stream.float_block(count) - 1.0) * radius
        cells = np.column_stack((np.floor(xs).astype(np.int64),
                                 np.floor(zs).astype(np.int64)))
    else:
        cells = slime_death_cells(_pi_arena(resolved), stream, count)
    return [GridCell(int(x), int(z)) for x, z in cells]


# ---------------------------------------------------------------------------
# e


def _resolve_e_params(variant_params: dict) -> dict:
    _reject_unknown(variant_params, "e", ("permutation_size",))
    return {"permutation_size": _as_int(variant_params, "permutation_size", 9,
                                        minimum=2, maximum=9)}


def estimate_e(config: ExperimentConfig, workers: int = 1) -> EstimateRecord:
    """Derangement experiment: estimate = trials / derangements.

    The default size 9 matches the ejector's capacity; the systematic gap
    between 9!/D(9) and e is ~1.9e-6, far below sampling noise at any
    achievable trial count.
    """
    resolved = _resolve_e_params(config.variant_params)
    size = resolved["permutation_size"]
    dropper = Dropper(slot_count=size)
    identity = np.arange(1, size + 1, dtype=np.int64)

    def block(stream, count):
        perms = dropper_permutation_block(dropper, stream, count)
        return int((perms != identity).all(axis=1).sum())

    derangements = sum(_map_blocks(config.master_seed, "e", config.trials, block, workers))
    if derangements == 0:
        raise DegenerateSampleError("no derangements observed; cannot form trials/derangements")
    estimate = config.trials / derangements
    low, high = wilson_ci(derangements, config.trials, Z_95)
    return EstimateRecord(
        variant="e",
        estimate=estimate,
        trials_used=config.trials,
        success_count=derangements,
        stderr=ratio_stderr(derangements, config.trials),
        ci_low=1.0 / high,
        ci_high=1.0 / low,
        reference=CONSTANTS.e,
        relative_error_percent=relative_error(estimate, CONSTANTS.e),
        seed=config.master_seed,
        params=_echo(resolved),
    )


# ---------------------------------------------------------------------------
# zeta


def _resolve_zeta_params(variant_params: dict) -> dict:
    _reject_unknown(variant_params, "zeta", (
        "m", "sampler_mode", "value_bound", "growth_prob", "speed_multiplier"))
    sampler = _as_choice(variant_params, "sampler_mode", "uniform", ("uniform", "random_tick"))
    resolved = {
        "m": _as_int(variant_params, "m", 3, minimum=2),
        "sampler_mode": sampler,
        "value_bound": _as_int(variant_params, "value_bound", 10 ** 6, minimum=2),
        "growth_prob": _as_float(variant_params, "growth_prob", 1.0 / 3.0, positive=True),
        "speed_multiplier": _as_int(variant_params, "speed_multiplier", 64, minimum=1),
    }
    if not resolved["growth_prob"] <= 1.0:
        raise ValueError("invalid value for 'growth_prob': must be <= 1")
    return resolved


def reference_zeta(m: int) -> float:
    if m == 2:
        return CONSTANTS.pi ** 2 / 6.0
    if m == 3:
        return CONSTANTS.zeta3
    from scipy.special import zeta as _zeta

    return float(_zeta(float(m)))


def estimate_zeta(config: ExperimentConfig, workers: int = 1) -> EstimateRecord:
    """Coprimality experiment: estimate = tuples / coprime_tuples.

    The uniform sampler draws m-tuples on [1, value_bound]; the random_tick
    sampler mirrors the waiting-time device instead and its values follow a
    geometric (negative binomial) law, not a uniform one, which the record
    flags in its params.  For even m the record also carries the implied
    pi^m value, since zeta(2k) is a rational multiple of pi^(2k).
    """
    resolved = _resolve_zeta_params(config.variant_params)
    m = resolved["m"]
    if resolved["sampler_mode"] == "uniform":
        bound = resolved["value_bound"]

        def block(stream, count):
            values = stream.int_below_block(bound, (count, m)) + 1
            return int((np.gcd.reduce(values, axis=1) == 1).sum())
    else:
        sched = RandomTickScheduler(speed_multiplier=resolved["speed_multiplier"])
        growth = resolved["growth_prob"]

        def block(stream, count):
            values = ticks_until_growth_block(sched, growth, stream, (count, m))
            return int((np.gcd.reduce(values, axis=1) == 1).sum())

    coprime = sum(_map_blocks(config.master_seed, "zeta", config.trials, block, workers))
    if coprime == 0:
        raise DegenerateSampleError("no coprime tuples observed; cannot form trials/coprime")
    estimate = config.trials / coprime
    reference = reference_zeta(m)
    low, high = wilson_ci(coprime, config.trials, Z_95)
    echo = _echo(resolved)
    echo["value_distribution"] = ("uniform" if resolved["sampler_mode"] == "uniform"
                                  else "negative_binomial_non_uniform")
    stderr = ratio_stderr(coprime, config.trials)
    if m in ZETA_EVEN_PI_COEFFICIENT:
        scale = 1.0 / float(ZETA_EVEN_PI_COEFFICIENT[m])
        echo["pi_power"] = m
        echo["pi_power_estimate"] = scale * estimate
        echo["pi_power_stderr"] = scale * stderr
        echo["pi_power_reference"] = CONSTANTS.pi ** m
    return EstimateRecord(
        variant="zeta",
        estimate=estimate,
        trials_used=config.trials,
        success_count=coprime,
        stderr=stderr,
        ci_low=1.0 / high,
        ci_high=1.0 / low,
        reference=reference,
        relative_error_percent=relative_error(estimate, reference),
        seed=config.master_seed,
        params=echo,
    )


# ---------------------------------------------------------------------------
# sec(1) + tan(1)


def _resolve_sec_tan_params(variant_params: dict) -> dict:
    _reject_unknown(variant_params, "sec_tan", ("max_size",))
    return {"max_size": _as_int(variant_params, "max_size", 9, minimum=0, maximum=9)}


def _alternating_rows(perms: np.ndarray) -> np.ndarray:
    if perms.shape[1] < 2:
        return np.ones(perms.shape[0], dtype=bool)
    diffs = np.diff(perms, axis=1)
    rises = (diffs[:, 0::2] > 0).all(axis=1)
    falls = (diffs[:, 1::2] < 0).all(axis=1)
    return rises & falls


def estimate_sec_tan(config: ExperimentConfig, workers: int = 1) -> EstimateRecord:
    """Sum over sizes n <= max_size of the alternating fraction A_n/n!.

    Sizes 0 and 1 contribute exactly 1 each; every larger size gets
    config.trials sampled permutations.  The estimand is the max_size
    partial sum of the series whose limit is sec(1)+tan(1).
    """
    resolved = _resolve_sec_tan_params(config.variant_params)
    max_size = resolved["max_size"]
    estimate = float(min(max_size + 1, 2))
    variance = 0.0
    per_size = []
    for size in range(2, max_size + 1):
        def block(stream, count, _size=size):
            perms = stream.permutation_block(_size, count)
            return int(_alternating_rows(perms).sum())

        hits = sum(_map_blocks(config.master_seed, f"sec_tan/size{size}",
                               config.trials, block, workers))
        fraction = hits / config.trials
        estimate += fraction
        variance += fraction * (1.0 - fraction) / config.trials
        per_size.append([size, hits])
    stderr = math.sqrt(variance)
    sampled_sizes = max(0, max_size - 1)
    echo = _echo(resolved)
    echo["trials_per_size"] = config.trials
    echo["alternating_counts"] = per_size
    return EstimateRecord(
        variant="sec_tan",
        estimate=estimate,
        trials_used=config.trials * sampled_sizes,
        success_count=None,
        stderr=stderr,
        ci_low=estimate - Z_95 * stderr,
        ci_high=estimate + Z_95 * stderr,
        reference=CONSTANTS.sec1_plus_tan1,
        relative_error_percent=relative_error(estimate, CONSTANTS.sec1_plus_tan1),
        seed=config.master_seed,
        params=echo,
    )


# ---------------------------------------------------------------------------
# definite integrals


_FUNCTION_NAMESPACE = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan,
    "arcsin": np.arcsin, "arccos": np.arccos, "arctan": np.arctan,
    "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh,
    "exp": np.exp, "log": np.log, "log2": np.log2, "log10": np.log10,
    "sqrt": np.sqrt, "cbrt": np.cbrt, "abs": np.abs,
    "floor": np.floor, "ceil": np.ceil,
    "pi": np.pi, "e": np.e,
}

_EXTREMA_SAMPLES = 10_000


def parse_function(expression: str) -> Callable:
    """Compile a one-variable expression such as ``x**2*sin(x) + cbrt(x)``.

    Only the whitelisted math names and ``x`` may appear; the result accepts
    scalars or numpy arrays.
    """
    try:
        code = compile(expression, "<function_spec>", "eval")
    except SyntaxError as exc:
        raise ValueError(f"invalid value for 'function_spec': {exc.msg}") from None
    for name in code.co_names:
        if name != "x" and name not in _FUNCTION_NAMESPACE:
            raise ValueError(f"invalid value for 'function_spec': unknown name {name!r}")

    def evaluate(x):
        return eval(code, {"__builtins__": {}}, {**_FUNCTION_NAMESPACE, "x": x})

    return evaluate


def _resolve_integral_params(variant_params: dict) -> dict:
    _reject_unknown(variant_params, "integral", ("function_spec", "a", "b", "raster_mode"))
    resolved = {
        "function_spec": str(_take(variant_params, "function_spec", "x**2*sin(x) + cbrt(x)")),
        "a": _as_int(variant_params, "a", 0),
        "b": _as_int(variant_params, "b", 8),
        "raster_mode": _as_choice(variant_params, "raster_mode", "continuous",
                                  ("continuous", "rasterized")),
    }
    if not resolved["a"] < resolved["b"]:
        raise ValueError("invalid value for 'b': bounds must satisfy a < b")
    return resolved


def estimate_integral(config: ExperimentConfig, workers: int = 1) -> EstimateRecord:
    """Signed-area Monte Carlo for the integral of f over [a, b].

    Points are uniform on [a, b] x [y_min, y_max]; the estimate is
    (above-axis hits - below-axis hits) * box_area / trials.  In rasterized
    mode the curve is the block-column step function and the reference is
    the exact signed sum of column areas; in continuous mode the reference
    comes from adaptive quadrature.
    """
    resolved = _resolve_integral_params(config.variant_params)
    f = parse_function(resolved["function_spec"])
    a, b = resolved["a"], resolved["b"]
    rasterized = resolved["raster_mode"] == "rasterized"

    dense = np.asarray(f(np.linspace(a, b, _EXTREMA_SAMPLES)), dtype=float)
    if not np.isfinite(dense).all():
        raise ValueError("invalid value for 'function_spec': non-finite values on the domain")
    heights = None
    y_low = min(0.0, float(dense.min()))
    y_high = max(0.0, float(dense.max()))
    if rasterized:
        curve = rasterize_curve(f, a, b)
        heights = np.asarray(curve.heights, dtype=float)
        y_low = min(y_low, float(heights.min()))
        y_high = max(y_high, float(heights.max()))
        reference = float(curve.signed_column_area())
    else:
        from scipy.integrate import quad

        reference = float(quad(f, a, b, limit=200)[0])

    echo = _echo(resolved)
    if y_high == y_low:
        # Only an identically-zero curve produces a flat box (the box always
        # spans 0); nothing can land strictly above or below the axis, so
        # the net estimate is exactly 0 and no sampling is needed.
        echo["note"] = "flat zero curve; estimate exact"
        return EstimateRecord(
            variant="integral", estimate=0.0, trials_used=config.trials,
            success_count=0, stderr=0.0, ci_low=0.0, ci_high=0.0,
            reference=reference,
            relative_error_percent=(relative_error(0.0, reference) if reference != 0 else None),
            seed=config.master_seed, params=echo)
    if not (math.isfinite(y_low) and math.isfinite(y_high)):
        raise DegenerateRegionError("sampling box is unbounded")

    box_area = (b - a) * (y_high - y_low)

    def block(stream, count):
        xs = a + stream.float_block(count) * (b - a)
        ys = y_low + stream.float_block(count) * (y_high - y_low)
        if rasterized:
            columns = np.clip(np.floor(xs).astype(np.int64) - a, 0, len(heights) - 1)
            curve_vals = heights[columns]
        else:
            curve_vals = np.asarray(f(xs), dtype=float)
        above = int(((ys > 0) & (ys <= curve_vals)).sum())
        below = int(((ys < 0) & (ys >= curve_vals)).sum())
        return above, below

    parts = _map_blocks(config.master_seed, "integral", config.trials, block, workers)
    above = sum(p[0] for p in parts)
    below = sum(p[1] for p in parts)
    net = (above - below) / config.trials
    hit = (above + below) / config.trials
    estimate = net * box_area
    stderr = box_area * math.sqrt(max(0.0, hit - net * net) / config.trials)
    echo["hits_above"] = above
    echo["hits_below"] = below
    return EstimateRecord(
        variant="integral",
        estimate=estimate,
        trials_used=config.trials,
        success_count=above + below,
        stderr=stderr,
        ci_low=estimate - Z_95 * stderr,
        ci_high=estimate + Z_95 * stderr,
        reference=reference,
        relative_error_percent=(relative_error(estimate, reference) if reference != 0 else None),
        seed=config.master_seed,
        params=echo,
    )


# ---------------------------------------------------------------------------
# sqrt(2)


def _resolve_sqrt2_params(variant_params: dict) -> dict:
    _reject_unknown(variant_params, "sqrt2", (
        "leg_blocks", "speed", "period", "random_start_phase"))
    return {
        "leg_blocks": _as_int(variant_params, "leg_blocks", 100, minimum=1),
        "speed": _as_float(variant_params, "speed", 4.317, positive=True),
        "period": _as_float(variant_params, "period", 0.4, positive=True),
        "random_start_phase": _as_bool(variant_params, "random_start_phase", False),
    }


def estimate_sqrt2(config: ExperimentConfig, workers: int = 1) -> EstimateRecord:
    """Diagonal-course timing experiment: estimate = hyp_items / leg_items.

    Deterministic at fixed speed; the only error term is timer quantization.
    With random_start_phase the two timing windows each get a start offset
    uniform in [0, period), modelling a timer that was already running.
    """
    resolved = _resolve_sqrt2_params(config.variant_params)
    course = TriangleCourse(leg_blocks=resolved["leg_blocks"],
                            speed_blocks_per_second=resolved["speed"])
    timer = HopperTimer(period_seconds=resolved["period"])
    leg_time, hyp_time = traversal_seconds(course)
    if resolved["random_start_phase"]:
        stream = derive_stream(config.master_seed, StreamId("sqrt2", 0))
        leg_phase = stream.next_float() * timer.period_seconds
        hyp_phase = stream.next_float() * timer.period_seconds
    else:
        leg_phase = hyp_phase = 0.0
    leg_items = hopper_items_in_window(timer, leg_time, leg_phase)
    hyp_items = hopper_items_in_window(timer, hyp_time, hyp_phase)
    if leg_items == 0:
        raise DegenerateCourseError(
            "leg traversal finished before the timer released a single item")
    estimate = hyp_items / leg_items
    echo = _echo(resolved)
    echo["leg_items"] = leg_items
    echo["hyp_items"] = hyp_items
    return EstimateRecord(
        variant="sqrt2",
        estimate=estimate,
        trials_used=1,
        success_count=None,
        stderr=None,
        ci_low=None,
        ci_high=None,
        reference=CONSTANTS.sqrt2,
        relative_error_percent=relative_error(estimate, CONSTANTS.sqrt2),
        seed=config.master_seed,
        params=echo,
    )


# ---------------------------------------------------------------------------
# count-only replay


# Display precision used when the source counts were first reported, and
# whether that report quoted its error from the already-rounded estimate
# (sqrt2 and e did; pi and zeta quoted the error of the full ratio).
_REPORTED_STYLE = {
    "sqrt2": (4, True),
    "pi": (3, False),
    "e": (5, True),
    "zeta": (4, False),
}


def estimate_from_counts(variant: str, counts: tuple[int, int], *, m: int = 3,
                         reported_decimals: int | None = None) -> EstimateRecord:
    """Pure arithmetic replay of a recorded (numerator, denominator) tally.

    Count order per variant: sqrt2 (hyp_items, leg_items); pi (inside,
    total); e (permutations, derangements); zeta (tuples, coprime).  The
    record's estimate and relative_error_percent are full precision; the
    params carry ``reported_estimate``/``reported_error_pct`` strings
    rendered with each experiment's original display convention.
    """
    if variant not in _REPORTED_STYLE:
        raise ValueError(f"invalid value for 'variant': counts replay supports "
                         f"{', '.join(_REPORTED_STYLE)}")
    first, second = (int(c) for c in counts)
    if first < 0 or second < 0:
        raise ValueError("counts must be non-negative")
    decimals, error_from_reported = _REPORTED_STYLE[variant]
    if reported_decimals is not None:
        decimals = int(reported_decimals)

    if variant == "sqrt2":
        if second == 0:
            raise DegenerateSampleError("leg item count is zero")
        estimate, reference = first / second, CONSTANTS.sqrt2
        trials_used, success, stderr, ci = 1, None, None, (None, None)
        echo = {"counts": [first, second], "hyp_items": first, "leg_items": second}
    elif variant == "pi":
        if second == 0:
            raise DegenerateSampleError("total count is zero")
        if first > second:
            raise ValueError("inside count cannot exceed the total")
        estimate, reference = 4.0 * first / second, CONSTANTS.pi
        p_hat = first / second
        low, high = wilson_ci(first, second, Z_95)
        trials_used, success = second, first
        stderr = 4.0 * math.sqrt(p_hat * (1.0 - p_hat) / second)
        ci = (4.0 * low, 4.0 * high)
        echo = {"counts": [first, second], "inside": first, "total": second}
    else:  # e and zeta share the trials/successes shape
        if second == 0:
            raise DegenerateSampleError("success count is zero")
        if second > first:
            raise ValueError("successes cannot exceed the trial count")
        estimate = first / second
        reference = CONSTANTS.e if variant == "e" else reference_zeta(m)
        low, high = wilson_ci(second, first, Z_95)
        trials_used, success = first, second
        stderr = ratio_stderr(second, first)
        ci = (1.0 / high, 1.0 / low)
        echo = {"counts": [first, second]}
        if variant == "zeta":
            echo["m"] = m

    reported_estimate = f"{estimate:.{decimals}f}"
    error_basis = float(reported_estimate) if error_from_reported else estimate
    echo["reported_estimate"] = reported_estimate
    echo["reported_error_pct"] = f"{relative_error(error_basis, reference):#.3g}"
    return EstimateRecord(
        variant=variant,
        estimate=estimate,
        trials_used=trials_used,
        success_count=success,
        stderr=stderr,
        ci_low=ci[0],
        ci_high=ci[1],
        reference=reference,
        relative_error_percent=relative_error(estimate, reference),
        seed=None,
        params=echo,
    )


# ---------------------------------------------------------------------------
# dispatch


_ESTIMATORS = {
    "sqrt2": estimate_sqrt2,
    "pi": estimate_pi,
    "e": estimate_e,
    "zeta": estimate_zeta,
    "sec_tan": estimate_sec_tan,
    "integral": estimate_integral,
}


def run_config(config: ExperimentConfig, workers: int = 1) -> EstimateRecord:
    """Execute one experiment config (or replay its counts) into a record."""
    params = dict(config.variant_params)
    if "counts" in params:
        raw = params.pop("counts")
        if isinstance(raw, str):
            raw = raw.split(",")
        try:
            counts = tuple(int(v) for v in raw)
        except (TypeError, ValueError):
            raise ValueError(f"invalid value for 'counts': {raw!r}") from None
        if len(counts) != 2:
            raise ValueError("invalid value for 'counts': expected two integers")
        m = _as_int(params, "m", 3, minimum=2) if config.variant == "zeta" else 3
        decimals = params.pop("reported_decimals", None)
        extras = {k: v for k, v in params.items() if k != "m"}
        if extras:
            raise ValueError(f"unknown parameter '{next(iter(extras))}' for counts replay")
        return estimate_from_counts(
            config.variant, counts, m=m,
            reported_decimals=None if decimals is None else int(decimals))
    return _ESTIMATORS[config.variant](config, workers=workers)


def _echo(resolved: dict) -> dict:
    """JSON-safe copy of resolved params (tuples become lists)."""
    out = {}
    for key, value in resolved.items():
        out[key] = list(value) if isinstance(value, tuple) else value
    return out

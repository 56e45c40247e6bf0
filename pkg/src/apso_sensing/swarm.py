"""Global-best particle swarm optimizers: standard PSO and acceleration-aided PSO.

Both minimize. One iteration, per particle, uses only the bests from the
previous iteration (synchronous update):

    a = c1 * xi * (p - x) + c2 * eta * (g - x)
    v = clip(omega * v + a, -v_max, v_max)
    x = clip(x + v [+ eps * a], lower, upper)

The bracketed term is what distinguishes the accelerated variant; ``eps=0.5``
is the plain kinematic update and ``eps=0`` collapses onto standard PSO.

Random draws per iteration come from one ``rng.random((S, D, 2))`` call, i.e.
particle-major, dimension-minor, ``xi`` before ``eta``. Initialization draws
positions ``(S, D)`` then velocities ``(S, D)``.
"""
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

VARIANTS = ("pso", "apso")


@dataclass(frozen=True)
class SwarmConfig:
    swarm_size: int = 30
    dimensions: int = 6
    cognitive_coeff: float = 2.0
    social_coeff: float = 2.0
    inertia: float = 1.0
    v_max: float = 5.0
    epsilon: float = 2.0
    max_iterations: int = 100
    position_bounds: tuple = (0.0, 1.0)
    # optional per-component clamp on the acceleration; None disables it
    accel_max: float = None

    def __post_init__(self):
        if self.swarm_size < 1 or int(self.swarm_size) != self.swarm_size:
            raise ValueError("swarm_size must be a positive integer")
        if self.dimensions < 1 or int(self.dimensions) != self.dimensions:
            raise ValueError("dimensions must be a positive integer")
        if self.max_iterations < 0 or int(self.max_iterations) != self.max_iterations:
            raise ValueError("max_iterations must be a nonnegative integer")
        if not self.v_max > 0:
            raise ValueError("v_max must be positive")
        if self.cognitive_coeff < 0 or self.social_coeff < 0:
            raise ValueError("acceleration coefficients must be nonnegative")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.accel_max is not None and not self.accel_max > 0:
            raise ValueError("accel_max must be positive when given")
        lo, hi = self.bounds()
        if np.any(lo > hi):
            raise ValueError("position_bounds lower edge exceeds upper edge")

    def bounds(self):
        """Lower and upper position bounds broadcast to length ``dimensions``."""
        return self._bounds

    @cached_property
    def _bounds(self):
        lo, hi = self.position_bounds
        d = self.dimensions
        lo = np.broadcast_to(np.asarray(lo, dtype=float), (d,)).copy()
        hi = np.broadcast_to(np.asarray(hi, dtype=float), (d,)).copy()
        lo.setflags(write=False)
        hi.setflags(write=False)
        return lo, hi

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    personal_best: np.ndarray
    personal_best_value: float


@dataclass
class SwarmState:
    """Population stored as ``(S, D)`` arrays; :meth:`particle` gives a per-particle view."""

    positions: np.ndarray
    velocities: np.ndarray
    accelerations: np.ndarray
    personal_best: np.ndarray
    personal_best_value: np.ndarray
    global_best: np.ndarray
    global_best_value: float
    iteration: int = 0

    @property
    def swarm_size(self):
        return self.positions.shape[0]

    def particle(self, i):
        return Particle(self.positions[i].copy(), self.velocities[i].copy(),
                        self.accelerations[i].copy(), self.personal_best[i].copy(),
                        float(self.personal_best_value[i]))

    @property
    def particles(self):
        return [self.particle(i) for i in range(self.swarm_size)]


@dataclass
class OptimizationTrace:
    best_objective_per_iteration: np.ndarray
    best_position: np.ndarray


def _evaluate(objective, x, batched):
    if batched:
        vals = np.asarray(objective(x), dtype=float)
    else:
        vals = np.array([objective(row) for row in x], dtype=float)
    if vals.shape != (x.shape[0],):
        raise ValueError(f"objective returned shape {vals.shape}, expected ({x.shape[0]},)")
    if np.any(np.isnan(vals)):
        raise ValueError("objective returned NaN")
    return vals


def init_swarm(config, objective, rng, batched=False):
    """Random initial swarm with personal bests at the starting positions.

    ``objective`` maps a length-D vector to a float, or with ``batched=True``
    an ``(S, D)`` array to ``S`` values.
    """
    s, d = config.swarm_size, config.dimensions
    lo, hi = config.bounds()
    x = lo + (hi - lo) * rng.random((s, d))
    v = rng.uniform(-config.v_max, config.v_max, (s, d))
    fx = _evaluate(objective, x, batched)
    b = int(np.argmin(fx))
    return SwarmState(x, v, np.zeros((s, d)), x.copy(), fx,
                      x[b].copy(), float(fx[b]), 0)


def acceleration(x, p, p_best, c1, c2, xi, eta):
    """Cognitive plus social pull toward the personal and global bests."""
    x = np.asarray(x, dtype=float)
    return c1 * xi * (np.asarray(p) - x) + c2 * eta * (np.asarray(p_best) - x)


def _step(state, objective, config, rng, eps, batched):
    lo, hi = config.bounds()
    draws = rng.random((state.swarm_size, config.dimensions, 2))
    x0 = state.positions
    acc = (config.cognitive_coeff * draws[..., 0] * (state.personal_best - x0)
           + config.social_coeff * draws[..., 1] * (state.global_best - x0))
    if config.accel_max is not None:
        acc = np.clip(acc, -config.accel_max, config.accel_max)
    v = np.clip(config.inertia * state.velocities + acc, -config.v_max, config.v_max)
    x = x0 + v
    if eps is not None:
        x = x + eps * acc
    x = np.clip(x, lo, hi)

    fx = _evaluate(objective, x, batched)
    improved = fx < state.personal_best_value
    pbest = np.where(improved[:, None], x, state.personal_best)
    pbest_val = np.where(improved, fx, state.personal_best_value)
    b = int(np.argmin(pbest_val))
    if pbest_val[b] < state.global_best_value:
        gbest, gbest_val = pbest[b].copy(), float(pbest_val[b])
    else:
        gbest, gbest_val = state.global_best.copy(), state.global_best_value
    return SwarmState(x, v, acc, pbest, pbest_val, gbest, gbest_val, state.iteration + 1)


def step_apso(state, objective, config, rng, batched=False):
    """One accelerated iteration; the acceleration enters the position update scaled by ``config.epsilon``."""
    return _step(state, objective, config, rng, config.epsilon, batched)


def step_pso(state, objective, config, rng, batched=False):
    """One standard PSO iteration (position moves by the velocity only)."""
    return _step(state, objective, config, rng, None, batched)


def run(config, objective, variant, rng, batched=False, callback=None):
    """Initialize and iterate ``config.max_iterations`` times.

    The trace holds the global best value after initialization and after
    each iteration. ``callback(state)`` is invoked on every state, the
    initial one included.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    step = step_apso if variant == "apso" else step_pso
    state = init_swarm(config, objective, rng, batched)
    best = np.empty(config.max_iterations + 1)
    best[0] = state.global_best_value
    if callback is not None:
        callback(state)
    for t in range(config.max_iterations):
        state = step(state, objective, config, rng, batched)
        best[t + 1] = state.global_best_value
        if callback is not None:
            callback(state)
    return OptimizationTrace(best, state.global_best.copy())

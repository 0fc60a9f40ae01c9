"""Rare-event sampling of constrained Bernoulli vectors by subset simulation.

The target event F = {g(x) <= 0} is reached through nested relaxations
F_j = {g(x) <= t_j}, with each threshold the empirical p0-quantile of the
violation score over the current population.  Populations move between
levels by per-bit conditional resampling: every bit in turn is redrawn
from its Bernoulli marginal and the flip is kept only when the vector
stays inside the current level, which leaves the conditional distribution
invariant.

The event probability estimate is the product of the per-level fractions
of samples inside the next level.  For a continuous score each
intermediate fraction equals p0 by construction and the estimate reduces
to p0**(m-1) times the final-level fraction; counting the actual
fractions keeps the estimate consistent when the score takes few discrete
values and the quantile lands on a tie.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend


class SamplingFailureError(RuntimeError):
    """Level thresholds stopped making progress before reaching the event."""

    def __init__(self, message, levels=None, threshold=None):
        super().__init__(message)
        self.levels = levels
        self.threshold = threshold


@dataclass(frozen=True)
class SelectionCounts:
    """Violation score of the antenna/user selection constraints: excess
    active antennas over the RF budget plus missing antenna headroom for
    the scheduled users.  Zero iff the selection is admissible."""

    n_users: int
    n_rf: int

    def __call__(self, X):
        return backend.active.count_violation(
            np.ascontiguousarray(X, dtype=np.uint8), self.n_users, self.n_rf)


def _generic_sweeps(violation, seeds, n_steps, t_level, p, u):
    """Per-bit conditional resampling for an arbitrary violation score.

    Consumes ``u[c, s, i]`` exactly like the specialized kernels, so the
    two paths are interchangeable for the built-in constraint.
    """
    X = np.ascontiguousarray(seeds, dtype=np.uint8).copy()
    n_chains, N = X.shape
    out = np.empty((n_chains * n_steps, N), dtype=np.uint8)
    g_out = np.empty(n_chains * n_steps)
    base = np.arange(n_chains) * n_steps
    for step in range(n_steps):
        for i in range(N):
            b = (u[:, step, i] < p[i]).astype(np.uint8)
            changed = b != X[:, i]
            if not changed.any():
                continue
            cand = X.copy()
            cand[:, i] = b
            gc = np.asarray(violation(cand), dtype=np.float64)
            accept = changed & (gc <= t_level)
            X[accept, i] = b[accept]
        out[base + step] = X
        g_out[base + step] = violation(X)
    return out, g_out


def _sweeps(violation, seeds, n_steps, t_level, p, rng):
    u = rng.random((seeds.shape[0], n_steps, seeds.shape[1]))
    if isinstance(violation, SelectionCounts):
        return backend.active.chain_sweeps(
            seeds, n_steps, t_level, p, u, violation.n_users, violation.n_rf)
    return _generic_sweeps(violation, seeds, n_steps, t_level, p, u)


def subset_simulation(p, violation, n_samples, p0, rng, max_levels=50,
                      init_population=None):
    """Draw ``n_samples`` Bernoulli(p) vectors conditioned on the event
    {violation(x) <= 0} and estimate the event probability.

    ``init_population`` reuses an already-drawn unconditional population
    as level one.  Returns ``(samples, p_hat)``; every returned sample
    satisfies the event.  Raises :class:`SamplingFailureError` when the
    thresholds fail to reach zero within ``max_levels``.
    """
    p = np.ascontiguousarray(p, dtype=np.float64)
    if not 0.0 < p0 < 1.0:
        raise ValueError("p0 must lie strictly between 0 and 1")
    if init_population is not None:
        X = np.ascontiguousarray(init_population, dtype=np.uint8)
        if X.shape != (n_samples, p.size):
            raise ValueError("init_population has the wrong shape")
    else:
        X = (rng.random((n_samples, p.size)) < p).astype(np.uint8)
    g = np.asarray(violation(X), dtype=np.float64)

    n_keep = max(1, round(p0 * n_samples))
    p_hat = 1.0
    threshold = np.inf
    for level in range(1, max_levels + 1):
        t = np.sort(g, kind="stable")[n_keep - 1]
        t = max(t, 0.0)
        in_level = g <= t
        p_hat *= np.count_nonzero(in_level) / n_samples
        if t <= 0.0:
            samples = X[in_level]
            if samples.shape[0] < n_samples:
                rounds = math.ceil(n_samples / samples.shape[0])
                samples, _ = _sweeps(violation, samples, rounds, 0.0, p, rng)
            return samples[:n_samples], p_hat
        threshold = min(threshold, t)
        seeds = X[in_level]
        n_steps = math.ceil(n_samples / seeds.shape[0])
        X, g = _sweeps(violation, seeds, n_steps, t, p, rng)
        X, g = X[:n_samples], g[:n_samples]
    raise SamplingFailureError(
        f"event not reached within {max_levels} levels "
        f"(best threshold {threshold})",
        levels=max_levels, threshold=threshold)

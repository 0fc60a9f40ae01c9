"""Stochastic gradient learning of a Bernoulli selection distribution.

Each selection bit carries an independent Bernoulli probability derived
from a real parameter through a tanh squashing.  Every iteration samples a
population of selection vectors, scores the admissible ones, and moves the
parameters along the sampled log-density gradient weighted by the (sign
flipped, normalized) best objective value, so bits present in good
selections become more likely.  When no direct draw is admissible the
population is regenerated by subset simulation conditioned on the
constraint set.
"""

from dataclasses import dataclass, field

import numpy as np

from .power import EvalResult, Objective
from .subset_sim import SelectionCounts, subset_simulation


class NoFeasibleSolutionError(RuntimeError):
    """The learner never saw an admissible selection."""


def selection_probs(theta, beta_sharp):
    """Per-bit activation probabilities p_i = (1 + tanh(b * theta_i)) / 2."""
    return 0.5 * (1.0 + np.tanh(beta_sharp * np.asarray(theta, dtype=float)))


def log_density(x, p):
    """Log-probability of the binary vector ``x`` under independent
    Bernoulli marginals ``p``."""
    x = np.asarray(x)
    p = np.asarray(p, dtype=float)
    return float(np.sum(np.log(np.where(x > 0, p, 1.0 - p))))


def update_theta(theta, x, p, phi_bar, alpha, beta_sharp, temperature,
                 theta_clip):
    """One gradient step on the distribution parameters.

    ``phi_bar`` is the normalized, sign-flipped objective of the chosen
    sample (lower is better after the flip); the factor 2b(x - p) is the
    gradient of the sample's log-density.
    """
    weight = phi_bar
    if temperature > 0.0:
        weight = weight + temperature * (1.0 + log_density(x, p))
    step = 2.0 * alpha * beta_sharp * weight * (x - p)
    return np.clip(theta - step, -theta_clip, theta_clip)


def check_constraints(x, config):
    """True iff the selection respects the RF budget and leaves at least
    one spare active antenna per scheduled user."""
    x = np.asarray(x)
    k1 = int(np.sum(x[:config.K]))
    m1 = int(np.sum(x[config.K:]))
    return m1 <= config.N_RF and k1 <= m1 - 1


@dataclass
class PopulationSample:
    """One iteration's population with its admissibility mask."""

    X: np.ndarray
    feasible: np.ndarray
    p_hat: float | None = None   # event-probability estimate, rare path only

    @property
    def used_rare_path(self):
        return self.p_hat is not None


def sample_population(p, n, constraint, rng, p0=0.1, max_levels=50):
    """Draw ``n`` Bernoulli(p) selection vectors; if none is admissible,
    regenerate the population by subset simulation conditioned on the
    constraint set."""
    X = (rng.random((n, p.size)) < p).astype(np.uint8)
    feasible = constraint(X) <= 0.0
    if feasible.any():
        return PopulationSample(X=X, feasible=feasible)
    X, p_hat = subset_simulation(p, constraint, n, p0, rng,
                                 max_levels=max_levels, init_population=X)
    return PopulationSample(X=X, feasible=np.ones(n, dtype=bool),
                            p_hat=p_hat)


@dataclass
class LearnerState:
    """Final parameters, the best selection found, and per-iteration
    diagnostics of one learner run."""

    theta: np.ndarray
    best_x: np.ndarray | None
    best: EvalResult | None
    trace: list[float] = field(default_factory=list)   # per-iteration best
    feasible_counts: list[int] = field(default_factory=list)
    p_hats: list[float | None] = field(default_factory=list)
    iters: int = 0
    phi_evals: int = 0   # distinct objective computations

    @property
    def best_trace(self):
        """Running maximum of the per-iteration best objective."""
        return np.maximum.accumulate(np.asarray(self.trace))

    def records(self):
        """Iteration-trace record stream for the experiment harness."""
        best = self.best_trace if self.trace else []
        for i, fit in enumerate(self.trace):
            yield {"iteration": i, "fittest_ee": fit, "best_ee": best[i],
                   "feasible_count": self.feasible_counts[i],
                   "p_hat": self.p_hats[i]}


def optimize_selection(scenario, config, learner_cfg, rng, objective=None):
    """Maximize selection energy efficiency by learned Bernoulli sampling.

    Returns ``(EvalResult, LearnerState)`` for the best admissible
    selection seen across all iterations.  Deterministic given the
    generator state.  Repeated selections are looked up instead of
    recomputed; ``LearnerState.phi_evals`` counts distinct objective
    computations.
    """
    learner_cfg.validate()
    obj = objective if objective is not None \
        else Objective(scenario, config, kernels=None)
    n_bits = config.n_bits
    constraint = SelectionCounts(n_users=config.K, n_rf=config.N_RF)
    theta = np.zeros(n_bits)
    clip = learner_cfg.clip
    scale = learner_cfg.objective_scale
    auto_scale = scale is None
    if auto_scale:
        scale = 0.0

    cache = {}

    def scores_for(X, rows):
        missing = [r for r in rows if X[r].tobytes() not in cache]
        if missing:
            ee, *_ = obj.phi_raw(np.ascontiguousarray(X[missing]))
            for r, val in zip(missing, ee):
                cache[X[r].tobytes()] = float(val)
        return np.array([cache[X[r].tobytes()] for r in rows])

    state = LearnerState(theta=theta, best_x=None, best=None)
    best_ee = -np.inf
    best_x = None
    prev_fit = None
    streak = 0

    for _ in range(learner_cfg.max_iters):
        p = selection_probs(theta, learner_cfg.beta_sharp)
        pop = sample_population(p, learner_cfg.N1, constraint, rng,
                                p0=learner_cfg.p0,
                                max_levels=learner_cfg.max_levels)
        rows = np.flatnonzero(pop.feasible)
        ee = scores_for(pop.X, rows)
        ok = ee > -np.inf
        state.iters += 1
        state.feasible_counts.append(int(np.count_nonzero(ok)))
        state.p_hats.append(pop.p_hat)
        if not ok.any():
            # admissible by counts but outside the rate model's domain;
            # nothing to learn from this population
            state.trace.append(best_ee)
            continue
        pick = rows[np.flatnonzero(ok)[np.argmax(ee[ok])]]
        fit = float(cache[pop.X[pick].tobytes()])
        x_fit = pop.X[pick].astype(np.float64)

        if fit > best_ee:
            best_ee = fit
            best_x = pop.X[pick].copy()
        state.trace.append(fit)

        if auto_scale:
            scale = max(scale, abs(fit))
        denom = scale if scale > 0 else 1.0
        theta = update_theta(theta, x_fit, p, -fit / denom,
                             learner_cfg.alpha, learner_cfg.beta_sharp,
                             learner_cfg.temperature, clip)

        if prev_fit is not None:
            ref = max(abs(prev_fit), abs(fit), 1e-300)
            if abs(fit - prev_fit) / ref < learner_cfg.tol:
                streak += 1
            else:
                streak = 0
        prev_fit = fit
        if streak >= learner_cfg.patience:
            break

    state.theta = theta
    state.phi_evals = len(cache)
    if best_x is None:
        raise NoFeasibleSolutionError(
            "no admissible selection found within the iteration budget")
    state.best_x = best_x
    state.best = obj.evaluate(best_x)
    return state.best, state

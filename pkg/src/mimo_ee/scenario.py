"""Cell geometry, user placement and large-scale fading."""

from dataclasses import dataclass

import numpy as np

from .config import ConfigError


@dataclass(frozen=True)
class AnnulusGeometry:
    """Annular cell with distance-power path loss and log-normal shadowing."""

    r_min: float = 100.0        # exclusion radius, m
    r_max: float = 1000.0       # cell radius, m
    d0: float = 100.0           # path-loss reference distance, m
    gamma: float = 3.8          # path-loss exponent
    sigma_shad_db: float = 8.0  # shadowing standard deviation, dB

    def validate(self):
        if not 0 < self.r_min < self.r_max:
            raise ConfigError("annulus radii must satisfy 0 < r_min < r_max")
        if self.d0 <= 0 or self.gamma <= 0 or self.sigma_shad_db < 0:
            raise ConfigError("d0 and gamma must be > 0, sigma_shad_db >= 0")


@dataclass(frozen=True)
class PathlossGeometry:
    """Annular cell with pure distance-power path loss, no shadowing.

    ``beta0_db`` is the attenuation in dB at the reference distance
    ``d_min``, i.e. beta(d) = 10**(-beta0_db/10) * (d/d_min)**(-alpha).
    """

    d_min: float = 35.0
    d_max: float = 250.0
    beta0_db: float = 35.3
    alpha: float = 3.76

    @property
    def r_min(self):
        return self.d_min

    @property
    def r_max(self):
        return self.d_max

    def validate(self):
        if not 0 < self.d_min < self.d_max:
            raise ConfigError("radii must satisfy 0 < d_min < d_max")
        if self.alpha <= 0:
            raise ConfigError("alpha must be > 0")


@dataclass(frozen=True)
class Scenario:
    """One realized cell: user distances, large-scale fading and (optionally)
    squared channel norms for norm-based power allocation.

    Immutable after creation; safe to share across parallel solver runs.
    """

    distances: np.ndarray
    beta: np.ndarray
    geometry: AnnulusGeometry | PathlossGeometry
    chan_norm2: np.ndarray | None = None

    @property
    def K(self):
        return self.distances.size


def drop_users(count, geometry, rng):
    """Draw ``count`` user distances uniformly over the annulus area.

    The radial density is proportional to r on [r_min, r_max], so the
    squared radius is uniform.
    """
    geometry.validate()
    if count < 1:
        raise ConfigError("user count must be >= 1")
    lo, hi = geometry.r_min**2, geometry.r_max**2
    return np.sqrt(lo + rng.random(count) * (hi - lo))


def large_scale_fading(distances, geometry, rng):
    """Per-user average channel gain (linear scale) at the given distances."""
    distances = np.asarray(distances, dtype=float)
    if np.any(distances <= 0):
        raise ConfigError("distances must be positive")
    if isinstance(geometry, AnnulusGeometry):
        shad_db = rng.normal(0.0, geometry.sigma_shad_db, distances.shape)
        z = 10.0 ** (shad_db / 10.0)
        return z * (distances / geometry.d0) ** (-geometry.gamma)
    beta0 = 10.0 ** (-geometry.beta0_db / 10.0)
    return beta0 * (distances / geometry.d_min) ** (-geometry.alpha)


def draw_channel_gains(beta, M, rng):
    """Squared channel norms for one small-scale fading draw.

    The channel vector of a user scales its unit-variance fading vector by
    beta, so the squared norm is beta**2 times a sum of M unit-mean
    exponentials (mean M * beta**2).
    """
    if M < 1:
        raise ConfigError("M must be >= 1")
    beta = np.asarray(beta, dtype=float)
    return beta**2 * rng.gamma(float(M), 1.0, beta.shape)


def make_scenario(K, geometry, rng, norms_for_M=None):
    """Realize one cell: drop users, draw fading, optionally draw channel
    norms for an ``M``-antenna array (needed by norm-based power allocation).

    Consumes the generator in a fixed order (distances, shadowing, norms),
    so equal seeds give bit-identical scenarios.
    """
    distances = drop_users(K, geometry, rng)
    beta = large_scale_fading(distances, geometry, rng)
    norm2 = None
    if norms_for_M is not None:
        norm2 = draw_channel_gains(beta, norms_for_M, rng)
    return Scenario(distances=distances, beta=beta, geometry=geometry,
                    chan_norm2=norm2)


def scenario_to_text(sc):
    """Serialize a scenario to a flat key=value record (round-trip exact)."""
    lines = []
    if isinstance(sc.geometry, AnnulusGeometry):
        g = sc.geometry
        lines.append("geometry=annulus")
        lines += [f"r_min={g.r_min!r}", f"r_max={g.r_max!r}", f"d0={g.d0!r}",
                  f"gamma={g.gamma!r}", f"sigma_shad_db={g.sigma_shad_db!r}"]
    else:
        g = sc.geometry
        lines.append("geometry=pathloss_only")
        lines += [f"d_min={g.d_min!r}", f"d_max={g.d_max!r}",
                  f"beta0_db={g.beta0_db!r}", f"pl_alpha={g.alpha!r}"]
    lines.append("distances=" + ",".join(repr(v) for v in sc.distances))
    lines.append("beta=" + ",".join(repr(v) for v in sc.beta))
    if sc.chan_norm2 is not None:
        lines.append("chan_norm2=" + ",".join(repr(v) for v in sc.chan_norm2))
    return "\n".join(lines) + "\n"


def scenario_from_text(text):
    """Parse a scenario record produced by :func:`scenario_to_text`."""
    kv = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        kv[key.strip()] = value.strip()
    kind = kv.pop("geometry", None)
    if kind == "annulus":
        geometry = AnnulusGeometry(
            r_min=float(kv.pop("r_min")), r_max=float(kv.pop("r_max")),
            d0=float(kv.pop("d0")), gamma=float(kv.pop("gamma")),
            sigma_shad_db=float(kv.pop("sigma_shad_db")))
    elif kind == "pathloss_only":
        geometry = PathlossGeometry(
            d_min=float(kv.pop("d_min")), d_max=float(kv.pop("d_max")),
            beta0_db=float(kv.pop("beta0_db")), alpha=float(kv.pop("pl_alpha")))
    else:
        raise ConfigError(f"unknown geometry kind: {kind!r}")
    def vec(s):
        return np.array([float(v) for v in s.split(",")]) if s else np.array([])
    distances = vec(kv.pop("distances"))
    beta = vec(kv.pop("beta"))
    norm2 = vec(kv.pop("chan_norm2")) if "chan_norm2" in kv else None
    if kv:
        raise ConfigError(f"unknown scenario keys: {sorted(kv)}")
    return Scenario(distances=distances, beta=beta, geometry=geometry,
                    chan_norm2=norm2)

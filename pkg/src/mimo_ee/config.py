"""System, power-model and learner configuration."""

from dataclasses import dataclass, field, replace

DBM_NOISE_DEFAULT = -96.0  # total receiver noise power, dBm


def dbm_to_watt(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


class ConfigError(ValueError):
    """A configuration value is missing, malformed or out of range."""


UL_RECEIVERS = ("mrc", "zf")
DL_PRECODERS = ("mrt", "zf")
COMBOS = ("mrc/mrt", "mrc/zf", "zf/mrt", "zf/zf")
CSI_MODES = ("perfect", "imperfect")
POWER_ANTENNA_MODES = ("selected", "total")


@dataclass(frozen=True)
class PowerParams:
    """Consumption-model constants (amplifier efficiencies, static and
    rate-proportional terms, compute efficiencies)."""

    eta_ul: float = 0.3        # user amplifier efficiency
    eta_dl: float = 0.39       # BS amplifier efficiency
    P_FIX: float = 18.0        # fixed site power, W
    P_SYN: float = 2.0         # local oscillator power, W
    P_U: float = 0.1           # circuit power per user, W
    P_BS: float = 1.0          # circuit power per BS antenna chain, W
    L_BS: float = 12.8e9       # BS computational efficiency, flop/s per W
    L_U: float = 5.0e9         # user computational efficiency, flop/s per W
    P_COD: float = 0.1e-9      # coding power, W per bit/s
    P_DEC: float = 0.8e-9      # decoding power, W per bit/s
    P_BT: float = 0.25e-9      # backhaul traffic power, W per bit/s

    @property
    def f_rate(self):
        """Total rate-proportional power, W per bit/s."""
        return self.P_COD + self.P_DEC + self.P_BT

    def validate(self):
        for name in ("eta_ul", "eta_dl", "P_FIX", "P_SYN", "P_U", "P_BS",
                     "L_BS", "L_U", "P_COD", "P_DEC", "P_BT"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0")


@dataclass(frozen=True)
class SystemConfig:
    """Physical and protocol constants of one single-cell configuration.

    Powers are in watts, bandwidths in Hz.  ``combo`` names the uplink
    receiver / downlink precoder pair, e.g. ``"zf/zf"``.  ``power_antennas``
    chooses whether the per-antenna power term is charged for the selected
    antennas only or for the full array.
    """

    M: int = 60                 # BS antennas
    K: int = 50                 # users in the cell
    B: float = 20e6             # transmission bandwidth, Hz
    Bc: float = 180e3           # coherence bandwidth, Hz
    U: int = 1800               # symbols per coherence block
    tau_ul: float = 1.0         # relative uplink pilot length (>= 1)
    tau_dl: float = 1.0         # relative downlink pilot length (>= 1)
    zeta_ul: float = 0.4        # uplink fraction of the block
    zeta_dl: float = 0.6        # downlink fraction of the block
    p_ul: float = 2.51188643150958e-12    # uplink data power, W
    p_dl: float = 2.51188643150958e-12    # downlink data power, W
    p_pilot: float = 2.51188643150958e-12 # pilot power, W
    sigma2: float = dbm_to_watt(DBM_NOISE_DEFAULT)  # noise power, W
    N_RF: int = 60              # RF-chain budget
    combo: str = "zf/zf"
    csi: str = "perfect"
    power_antennas: str = "selected"
    power_params: PowerParams = field(default_factory=PowerParams)

    @property
    def n_bits(self):
        """Length of a selection vector (users first, then antennas)."""
        return self.K + self.M

    @property
    def ul_zf(self):
        return self.combo.split("/")[0] == "zf"

    @property
    def dl_zf(self):
        return self.combo.split("/")[1] == "zf"

    def validate(self):
        if self.K < 1:
            raise ConfigError("K must be >= 1")
        if self.M < 2:
            raise ConfigError("M must be >= 2")
        if not 1 <= self.N_RF <= self.M:
            raise ConfigError("N_RF must be >= 1 and <= M")
        for name in ("B", "Bc", "p_ul", "p_dl", "p_pilot", "sigma2"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0")
        if self.U < 1:
            raise ConfigError("U must be >= 1")
        if self.tau_ul < 1 or self.tau_dl < 1:
            raise ConfigError("tau_ul and tau_dl must be >= 1 "
                              "(orthogonal pilot sequences)")
        if abs(self.zeta_ul + self.zeta_dl - 1.0) > 1e-12:
            raise ConfigError("zeta_ul + zeta_dl must equal 1")
        if not (0 < self.zeta_ul < 1):
            raise ConfigError("zeta_ul must lie strictly between 0 and 1")
        if self.tau_ul * self.K > self.U * self.zeta_ul:
            raise ConfigError("uplink pilots exceed the uplink frame "
                              "(tau_ul * K > U * zeta_ul)")
        if self.tau_dl * self.K > self.U * self.zeta_dl:
            raise ConfigError("downlink pilots exceed the downlink frame "
                              "(tau_dl * K > U * zeta_dl)")
        if self.combo not in COMBOS:
            raise ConfigError(f"combo must be one of {COMBOS}")
        if self.csi not in CSI_MODES:
            raise ConfigError(f"csi must be one of {CSI_MODES}")
        if self.power_antennas not in POWER_ANTENNA_MODES:
            raise ConfigError(
                f"power_antennas must be one of {POWER_ANTENNA_MODES}")
        self.power_params.validate()

    def with_powers(self, p):
        """Copy with p_ul = p_dl = p_pilot = ``p``."""
        return replace(self, p_ul=p, p_dl=p, p_pilot=p)


@dataclass(frozen=True)
class LearnerConfig:
    """Hyper-parameters of the Bernoulli-distribution gradient learner."""

    alpha: float = 0.1          # learning rate
    beta_sharp: float = 1.0     # tanh sharpness mapping params to probabilities
    temperature: float = 0.0    # entropy weight; 0 drops the entropy term
    N1: int = 20                # population size per iteration
    tol: float = 1e-6           # relative convergence tolerance
    patience: int = 200         # consecutive converged steps before stopping
    max_iters: int = 5000
    theta_clip: float | None = None   # bound on |theta_i|; None -> 5/beta_sharp
    objective_scale: float | None = None  # None -> running max of |objective|
    p0: float = 0.1             # level fraction for rare-event sampling
    max_levels: int = 50        # rare-event level budget

    @property
    def clip(self):
        return self.theta_clip if self.theta_clip is not None \
            else 5.0 / self.beta_sharp

    def validate(self):
        if not self.alpha > 0:
            raise ConfigError("alpha must be > 0")
        if not self.beta_sharp > 0:
            raise ConfigError("beta_sharp must be > 0")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.N1 < 1:
            raise ConfigError("N1 must be >= 1")
        if not self.tol > 0:
            raise ConfigError("tol must be > 0")
        if self.patience < 1:
            raise ConfigError("patience must be >= 1")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if self.theta_clip is not None and not self.theta_clip > 0:
            raise ConfigError("theta_clip must be > 0")
        if self.objective_scale is not None and not self.objective_scale > 0:
            raise ConfigError("objective_scale must be > 0")
        if not 0 < self.p0 < 1:
            raise ConfigError("p0 must lie strictly between 0 and 1")
        if self.max_levels < 1:
            raise ConfigError("max_levels must be >= 1")

"""Power-consumption model, energy efficiency and the selection objective."""

from dataclasses import dataclass

import numpy as np

from . import backend
from .rates import InfeasibleSelectionError, mmse_stats, rate_breakdown


@dataclass(frozen=True)
class PowerCoeffs:
    """Affine power model P = c + d * M_active + f * rate."""

    c: float   # static plus user-count-dependent power, W
    d: float   # per-antenna power, W
    f: float   # rate-proportional power, W per bit/s


def power_coeffs(combo, K1, M_power, config):
    """Power-model coefficients for ``K1`` scheduled users.

    ``M_power`` is the antenna count charged inside the channel-estimation
    compute term of ``c``; the per-antenna term ``d`` is charged separately
    by :func:`energy_efficiency`.
    """
    pp = config.power_params
    B, U = config.B, config.U
    amp = K1 * (config.p_ul / pp.eta_ul + config.p_dl / pp.eta_dl)
    c1 = (amp
          + (2.0 * B * K1 * K1 / U)
          * (config.tau_ul * M_power / pp.L_BS + 2.0 * config.tau_dl / pp.L_U)
          + pp.P_FIX + pp.P_SYN + K1 * pp.P_U)
    d1 = pp.P_BS + (2.0 * B * K1 / pp.L_BS) \
        * (1.0 - (config.tau_ul + config.tau_dl) * K1 / U)
    ul_zf, dl_zf = combo.split("/")[0] == "zf", combo.split("/")[1] == "zf"
    c = c1
    if ul_zf or dl_zf:
        c += B * K1**3 / (3.0 * U * pp.L_BS)
    if ul_zf and dl_zf:
        dk = 3.0 * K1 * K1 + K1
    elif ul_zf or dl_zf:
        dk = 3.0 * K1 * K1 + 4.0 * K1
    else:
        dk = 3.0 * K1
    d = d1 + B * dk / (U * pp.L_BS)
    return PowerCoeffs(c=c, d=d, f=pp.f_rate)


def energy_efficiency(rate, coeffs, M_power):
    """Total consumed power and energy efficiency for a given throughput."""
    if rate < 0:
        raise ValueError("rate must be >= 0")
    p_sum = coeffs.c + coeffs.d * M_power + coeffs.f * rate
    return p_sum, rate / p_sum


@dataclass(frozen=True)
class EvalResult:
    """Outcome of evaluating one selection: throughput (bit/s), consumed
    power (W) and energy efficiency (bit/J).  Infeasible selections carry
    ``ee = -inf`` so that any feasible selection orders above them."""

    feasible: bool
    rate: float
    power: float
    ee: float
    K1: int
    M1: int


class Objective:
    """Selection objective for one scenario under one configuration.

    Binds the per-user fading and power vectors once and evaluates
    selection vectors (users first, antennas second) through the active
    kernel backend.  Instances are immutable and safe to share across
    threads or processes.
    """

    def __init__(self, scenario, config, p_ul=None, p_dl=None, p_pilot=None,
                 kernels=None):
        config.validate()
        if scenario.K != config.K:
            raise ValueError("scenario has a different user count than the "
                             "configuration")
        self.scenario = scenario
        self.config = config
        self.kernels = kernels if kernels is not None else backend.active
        self.beta = np.ascontiguousarray(scenario.beta, dtype=np.float64)
        one = np.ones(config.K)
        self.p_ul = np.ascontiguousarray(
            one * (config.p_ul if p_ul is None else p_ul))
        self.p_dl = np.ascontiguousarray(
            one * (config.p_dl if p_dl is None else p_dl))
        self.p_pilot = float(config.p_pilot if p_pilot is None else p_pilot)
        if np.any(self.p_ul <= 0) or np.any(self.p_dl <= 0) \
                or self.p_pilot <= 0:
            raise ValueError("powers must be positive")
        pp = config.power_params
        self._fpar = np.array([
            config.B, config.U, config.tau_ul, config.tau_dl,
            config.zeta_ul, config.zeta_dl, config.sigma2, self.p_pilot,
            pp.eta_ul, pp.eta_dl, pp.P_FIX, pp.P_SYN, pp.P_U, pp.P_BS,
            pp.L_BS, pp.L_U, pp.f_rate])
        self._ipar = np.array([
            config.K, config.M, config.N_RF,
            int(config.ul_zf), int(config.dl_zf),
            int(config.csi == "imperfect"),
            int(config.power_antennas == "total")], dtype=np.int64)

    @property
    def n_bits(self):
        return self.config.n_bits

    def _check(self, X):
        X = np.atleast_2d(np.asarray(X))
        if X.shape[1] != self.n_bits:
            raise ValueError(
                f"selection vectors must have length {self.n_bits}")
        if not np.isin(X, (0, 1)).all():
            raise ValueError("selection vectors must be binary")
        return np.ascontiguousarray(X, dtype=np.uint8)

    def evaluate_batch(self, X):
        """Kernel evaluation of many selections at once; returns the tuple
        ``(ee, rate, power, k1, m1, feasible)`` of per-row arrays."""
        return self.phi_raw(self._check(X))

    def phi_raw(self, X):
        """Unvalidated batch evaluation for internal callers that construct
        ``X`` themselves (uint8, C-contiguous)."""
        return self.kernels.phi_batch(X, self.beta, self.p_ul, self.p_dl,
                                      self._fpar, self._ipar)

    def evaluate(self, x):
        """Evaluate a single selection vector to an :class:`EvalResult`."""
        ee, rate, power, k1, m1, feas = self.evaluate_batch(x)
        return EvalResult(feasible=bool(feas[0]), rate=float(rate[0]),
                          power=float(power[0]), ee=float(ee[0]),
                          K1=int(k1[0]), M1=int(m1[0]))

    def evaluate_reference(self, x):
        """Slow single-selection evaluation composed from the rate and
        power primitives; used to cross-check the kernels."""
        x = self._check(x)[0]
        K = self.config.K
        users = np.flatnonzero(x[:K])
        K1 = users.size
        M1 = int(x[K:].sum())
        if M1 > self.config.N_RF or K1 > M1 - 1:
            return EvalResult(False, np.nan, np.nan, -np.inf, K1, M1)
        m_power = self.config.M if self.config.power_antennas == "total" \
            else M1
        try:
            stats = None
            if self.config.csi == "imperfect" and K1 > 0:
                stats = mmse_stats(self.beta[users], self.config.tau_ul, K1,
                                   self.p_pilot, self.config.sigma2)
            rb = rate_breakdown(self.beta[users], M1, self.config,
                                self.p_ul[users], self.p_dl[users], stats)
        except InfeasibleSelectionError:
            return EvalResult(False, np.nan, np.nan, -np.inf, K1, M1)
        coeffs = power_coeffs(self.config.combo, K1, m_power, self.config)
        amp_equal = K1 * (self.config.p_ul / self.config.power_params.eta_ul
                          + self.config.p_dl / self.config.power_params.eta_dl)
        amp = float(np.sum(self.p_ul[users] / self.config.power_params.eta_ul
                           + self.p_dl[users] / self.config.power_params.eta_dl))
        coeffs = PowerCoeffs(c=coeffs.c - amp_equal + amp, d=coeffs.d,
                             f=coeffs.f)
        p_sum, ee = energy_efficiency(rb.total, coeffs, m_power)
        return EvalResult(True, rb.total, p_sum, ee, K1, M1)

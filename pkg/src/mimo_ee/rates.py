"""Closed-form lower bounds on per-user spectral efficiency.

All bounds take the large-scale channel statistics of the scheduled users
only.  Powers may be a scalar (equal allocation) or a per-user vector; the
equal-power case reduces to the textbook single-power expressions.  Rates
are spectral efficiencies in bit/s/Hz; :func:`total_rate` applies the
pilot-overhead bandwidth weights and returns bit/s.
"""

from dataclasses import dataclass

import numpy as np


class InfeasibleSelectionError(ValueError):
    """The selection violates a processing precondition (antenna/user
    counts or pilot overhead), so the rate bound is undefined."""


@dataclass(frozen=True)
class CsiStats:
    """Split of each user's channel variance into the estimated part and
    the estimation-error part (beta_hat + gamma_err = beta)."""

    beta_hat: np.ndarray
    gamma_err: np.ndarray


@dataclass(frozen=True)
class RateBreakdown:
    """Per-user spectral efficiencies with their bandwidth weights."""

    per_user_ul: np.ndarray   # bit/s/Hz
    per_user_dl: np.ndarray   # bit/s/Hz
    a_coeff: float            # uplink bandwidth after pilot overhead, Hz
    b_coeff: float            # downlink bandwidth after pilot overhead, Hz
    total: float              # bit/s


def mmse_stats(beta, tau_ul, K_active, p_pilot, sigma2):
    """Estimated-channel and error variances of pilot-based MMSE estimation.

    ``K_active`` is the number of scheduled users and therefore the number
    of orthogonal pilot sequences spent.
    """
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0) or tau_ul <= 0 or K_active <= 0 \
            or p_pilot <= 0 or sigma2 <= 0:
        raise ValueError("mmse_stats requires positive inputs")
    t = tau_ul * K_active * p_pilot
    den = t * beta + sigma2
    beta_hat = t * beta * beta / den
    gamma_err = beta * sigma2 / den
    return CsiStats(beta_hat=beta_hat, gamma_err=gamma_err)


def _as_power_vector(p, n):
    p = np.asarray(p, dtype=float)
    if p.ndim == 0:
        p = np.full(n, float(p))
    if p.shape != (n,):
        raise ValueError("per-user power vector has wrong length")
    if np.any(p <= 0):
        raise ValueError("powers must be positive")
    return p


def uplink_rates(beta, M1, combo_ul, p, sigma2, csi_stats=None):
    """Per-user uplink spectral efficiency bound for the scheduled set.

    ``beta`` holds the scheduled users' large-scale coefficients.  With
    ``csi_stats`` given, the estimated-CSI bound is used.  ``combo_ul`` is
    ``"mrc"`` or ``"zf"``.
    """
    beta = np.asarray(beta, dtype=float)
    K1 = beta.size
    if K1 == 0:
        return np.zeros(0)
    if combo_ul == "zf" and M1 < K1 + 1:
        raise InfeasibleSelectionError(
            f"zero forcing needs M1 >= K1+1 (got M1={M1}, K1={K1})")
    if combo_ul == "mrc" and M1 < K1:
        raise InfeasibleSelectionError(
            f"maximum ratio combining needs M1 >= K1 (got M1={M1}, K1={K1})")
    p = _as_power_vector(p, K1)
    if csi_stats is None:
        if combo_ul == "zf":
            sinr = p * (M1 - K1) * beta / sigma2
        else:
            interference = np.sum(p * beta) - p * beta
            sinr = p * (M1 - 1) * beta / (interference + sigma2)
    else:
        bh, ge = csi_stats.beta_hat, csi_stats.gamma_err
        err_sum = np.sum(p * ge)
        if combo_ul == "zf":
            sinr = p * (M1 - K1) * bh / (err_sum + sigma2)
        else:
            interference = np.sum(p * bh) - p * bh
            sinr = p * (M1 - 1) * bh / (interference + err_sum + sigma2)
    return np.log2(1.0 + sinr)


def downlink_rates(beta, M1, combo_dl, p, sigma2, csi_stats=None):
    """Per-user downlink spectral efficiency bound for the scheduled set.

    ``combo_dl`` is ``"mrt"`` or ``"zf"``.
    """
    beta = np.asarray(beta, dtype=float)
    K1 = beta.size
    if K1 == 0:
        return np.zeros(0)
    if combo_dl == "zf" and M1 < K1 + 1:
        raise InfeasibleSelectionError(
            f"zero forcing needs M1 >= K1+1 (got M1={M1}, K1={K1})")
    if combo_dl == "mrt" and M1 < K1:
        raise InfeasibleSelectionError(
            f"maximum ratio transmission needs M1 >= K1 (got M1={M1}, K1={K1})")
    p = _as_power_vector(p, K1)
    p_others = np.sum(p) - p
    if csi_stats is None:
        if combo_dl == "zf":
            sinr = p * (M1 - K1) * beta / sigma2
        else:
            sinr = p * (M1 - 1) * beta / (beta * p_others + sigma2)
    else:
        bh, ge = csi_stats.beta_hat, csi_stats.gamma_err
        p_all = np.sum(p)
        if combo_dl == "zf":
            sinr = p * (M1 - K1) * bh / (ge * p_all + sigma2)
        else:
            sinr = p * (M1 - 1) * bh / (bh * p_others + ge * p_all + sigma2)
    return np.log2(1.0 + sinr)


def overhead_coeffs(K_sched, config):
    """Bandwidth available for uplink and downlink data after spending
    pilot symbols on ``K_sched`` users.  Returns ``(a, b)`` in Hz."""
    a = (config.zeta_ul - config.tau_ul * K_sched / config.U) * config.B
    b = (config.zeta_dl - config.tau_dl * K_sched / config.U) * config.B
    if a < 0 or b < 0:
        raise InfeasibleSelectionError(
            f"pilot overhead for {K_sched} users exceeds the frame")
    return a, b


def total_rate(per_user_ul, per_user_dl, a, b):
    """Overhead-weighted sum throughput, bit/s."""
    return a * float(np.sum(per_user_ul)) + b * float(np.sum(per_user_dl))


def rate_breakdown(beta, M1, config, p_ul, p_dl, csi_stats=None):
    """Full rate computation for one scheduled set: per-user spectral
    efficiencies, overhead weights and total throughput."""
    K1 = np.asarray(beta).size
    a, b = overhead_coeffs(K1, config)
    ul = uplink_rates(beta, M1, config.combo.split("/")[0], p_ul,
                      config.sigma2, csi_stats)
    dl = downlink_rates(beta, M1, config.combo.split("/")[1], p_dl,
                        config.sigma2, csi_stats)
    return RateBreakdown(per_user_ul=ul, per_user_dl=dl, a_coeff=a,
                         b_coeff=b, total=total_rate(ul, dl, a, b))

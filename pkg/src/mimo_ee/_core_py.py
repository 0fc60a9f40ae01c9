"""Pure-numpy implementations of the hot kernels.

``mimo_ee._core`` (compiled) implements the same functions with identical
semantics and random-number consumption; :mod:`mimo_ee.backend` selects one
at import time.  Parameter packing for :func:`phi_batch`:

float vector ``fpar``:
    0 B, 1 U, 2 tau_ul, 3 tau_dl, 4 zeta_ul, 5 zeta_dl, 6 sigma2,
    7 p_pilot, 8 eta_ul, 9 eta_dl, 10 P_FIX, 11 P_SYN, 12 P_U, 13 P_BS,
    14 L_BS, 15 L_U, 16 f_rate
int vector ``ipar``:
    0 K, 1 M, 2 N_RF, 3 ul_zf, 4 dl_zf, 5 imperfect, 6 power_total_antennas
"""

import numpy as np

NAME = "python"

N_FPAR = 17
N_IPAR = 7


def phi_batch(X, beta, p_ul, p_dl, fpar, ipar):
    """Evaluate the selection objective for each row of ``X``.

    ``X`` is an (n, K+M) binary matrix, user bits first.  Returns
    ``(ee, rate, power, k1, m1, feasible)``; infeasible rows carry
    ``ee = -inf`` and NaN rate/power so they order below every feasible
    selection.
    """
    X = np.ascontiguousarray(X, dtype=np.uint8)
    n = X.shape[0]
    (B, U, tau_ul, tau_dl, zeta_ul, zeta_dl, sigma2, p_pilot,
     eta_ul, eta_dl, P_FIX, P_SYN, P_U, P_BS, L_BS, L_U, f_rate) = fpar
    K, M, n_rf, ul_zf, dl_zf, imperfect, power_total = (int(v) for v in ipar)

    k1 = X[:, :K].sum(axis=1, dtype=np.int64)
    m1 = X[:, K:].sum(axis=1, dtype=np.int64)
    k1f = k1.astype(np.float64)
    a = (zeta_ul - tau_ul * k1f / U) * B
    b = (zeta_dl - tau_dl * k1f / U) * B
    ok = (m1 <= n_rf) & (k1 <= m1 - 1) & (a >= 0) & (b >= 0)

    ee = np.full(n, -np.inf)
    rate = np.full(n, np.nan)
    power = np.full(n, np.nan)
    rows = np.flatnonzero(ok)
    if rows.size == 0:
        return ee, rate, power, k1, m1, ok.astype(np.uint8)

    sel = X[rows, :K].astype(np.float64)
    k1s = k1f[rows]
    m1s = m1[rows].astype(np.float64)

    with np.errstate(divide="ignore", invalid="ignore"):
        if imperfect:
            t = (tau_ul * p_pilot) * k1s
            den = t[:, None] * beta[None, :] + sigma2
            eff = t[:, None] * (beta * beta)[None, :] / den
            gerr = (beta * sigma2)[None, :] / den
        else:
            eff = np.broadcast_to(beta, (rows.size, beta.size))
            gerr = None

        pul_eff = p_ul[None, :] * eff
        if imperfect:
            err_ul = (sel * (p_ul[None, :] * gerr)).sum(axis=1)
        else:
            err_ul = np.zeros(rows.size)
        if ul_zf:
            sinr_ul = (p_ul[None, :] * ((m1s - k1s)[:, None] * eff)
                       / (err_ul + sigma2)[:, None])
        else:
            s_pul = (sel * pul_eff).sum(axis=1)
            denom = (s_pul[:, None] - pul_eff) + err_ul[:, None] + sigma2
            sinr_ul = p_ul[None, :] * (m1s - 1.0)[:, None] * eff / denom

        s_pdl = (sel * p_dl[None, :]).sum(axis=1)
        if imperfect:
            err_dl = gerr * s_pdl[:, None]
        else:
            err_dl = 0.0
        if dl_zf:
            sinr_dl = (p_dl[None, :] * ((m1s - k1s)[:, None] * eff)
                       / (err_dl + sigma2))
        else:
            denom = eff * (s_pdl[:, None] - p_dl[None, :]) + err_dl + sigma2
            sinr_dl = p_dl[None, :] * (m1s - 1.0)[:, None] * eff / denom

        r_ul = np.log2(1.0 + np.where(sel > 0, sinr_ul, 0.0))
        r_dl = np.log2(1.0 + np.where(sel > 0, sinr_dl, 0.0))

    R = a[rows] * r_ul.sum(axis=1) + b[rows] * r_dl.sum(axis=1)

    amp = (sel * (p_ul / eta_ul + p_dl / eta_dl)[None, :]).sum(axis=1)
    m_pow = np.full(rows.size, float(M)) if power_total else m1s
    c1 = (amp
          + (2.0 * B * k1s * k1s / U)
          * (tau_ul * m_pow / L_BS + 2.0 * tau_dl / L_U)
          + P_FIX + P_SYN + k1s * P_U)
    d1 = P_BS + (2.0 * B * k1s / L_BS) * (1.0 - (tau_ul + tau_dl) * k1s / U)
    c = c1
    if ul_zf or dl_zf:
        c = c + B * k1s * k1s * k1s / (3.0 * U * L_BS)
    if ul_zf and dl_zf:
        dk = 3.0 * k1s * k1s + k1s
    elif ul_zf or dl_zf:
        dk = 3.0 * k1s * k1s + 4.0 * k1s
    else:
        dk = 3.0 * k1s
    d = d1 + B * dk / (U * L_BS)
    P = c + d * m_pow + f_rate * R

    ee[rows] = R / P
    rate[rows] = R
    power[rows] = P
    return ee, rate, power, k1, m1, ok.astype(np.uint8)


def count_violation(X, n_users, n_rf):
    """Constraint-violation score of each selection row: zero iff the RF
    budget holds and at least one spare antenna per scheduled user."""
    X = np.asarray(X, dtype=np.uint8)
    k1 = X[:, :n_users].sum(axis=1, dtype=np.int64)
    m1 = X[:, n_users:].sum(axis=1, dtype=np.int64)
    return (np.maximum(0, m1 - n_rf)
            + np.maximum(0, k1 - m1 + 1)).astype(np.float64)


def chain_sweeps(seeds, n_steps, t_level, p, u, n_users, n_rf):
    """Conditional-resampling chains for the selection-count constraint.

    Starting from each seed (all satisfying score <= ``t_level``), performs
    ``n_steps`` full sweeps; each sweep proposes a fresh Bernoulli(p_i) draw
    for every bit in order and keeps the flip only if the score stays within
    the level.  ``u[c, s, i]`` is the uniform used for chain ``c``, sweep
    ``s``, bit ``i``.  Returns the states after each sweep in chain-major
    order together with their scores.
    """
    X = np.ascontiguousarray(seeds, dtype=np.uint8).copy()
    n_chains, N = X.shape
    k1 = X[:, :n_users].sum(axis=1, dtype=np.int64)
    m1 = X[:, n_users:].sum(axis=1, dtype=np.int64)
    out = np.empty((n_chains * n_steps, N), dtype=np.uint8)
    g_out = np.empty(n_chains * n_steps)
    base = np.arange(n_chains) * n_steps
    for step in range(n_steps):
        for i in range(N):
            b = u[:, step, i] < p[i]
            delta = b.astype(np.int64) - X[:, i].astype(np.int64)
            if i < n_users:
                k1c, m1c = k1 + delta, m1
            else:
                k1c, m1c = k1, m1 + delta
            gc = np.maximum(0, m1c - n_rf) + np.maximum(0, k1c - m1c + 1)
            accept = (delta != 0) & (gc <= t_level)
            X[accept, i] = b[accept]
            k1 = np.where(accept, k1c, k1)
            m1 = np.where(accept, m1c, m1)
        out[base + step] = X
        g_out[base + step] = (np.maximum(0, m1 - n_rf)
                              + np.maximum(0, k1 - m1 + 1))
    return out, g_out

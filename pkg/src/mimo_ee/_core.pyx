# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Semantics, parameter packing and random-number consumption match
``mimo_ee._core_py`` exactly; see that module for the layout of ``fpar``
and ``ipar``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, NAN, log2

cnp.import_array()

NAME = "c"

N_FPAR = 17
N_IPAR = 7


def phi_batch(X, beta, p_ul, p_dl, fpar, ipar):
    """Evaluate the selection objective for each row of ``X``.

    Returns ``(ee, rate, power, k1, m1, feasible)`` as in the pure-python
    backend.
    """
    cdef cnp.uint8_t[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.uint8)
    cdef double[::1] betav = np.ascontiguousarray(beta, dtype=np.float64)
    cdef double[::1] pulv = np.ascontiguousarray(p_ul, dtype=np.float64)
    cdef double[::1] pdlv = np.ascontiguousarray(p_dl, dtype=np.float64)
    cdef double[::1] f = np.ascontiguousarray(fpar, dtype=np.float64)
    cdef long long[::1] ip = np.ascontiguousarray(ipar, dtype=np.int64)

    cdef double B = f[0], U = f[1], tau_ul = f[2], tau_dl = f[3]
    cdef double zeta_ul = f[4], zeta_dl = f[5], sigma2 = f[6], p_pilot = f[7]
    cdef double eta_ul = f[8], eta_dl = f[9], P_FIX = f[10], P_SYN = f[11]
    cdef double P_U = f[12], P_BS = f[13], L_BS = f[14], L_U = f[15]
    cdef double f_rate = f[16]
    cdef Py_ssize_t K = ip[0], M = ip[1]
    cdef long long n_rf = ip[2]
    cdef bint ul_zf = ip[3] != 0, dl_zf = ip[4] != 0
    cdef bint imperfect = ip[5] != 0, power_total = ip[6] != 0

    cdef Py_ssize_t n = Xv.shape[0], N = Xv.shape[1]
    ee_arr = np.full(n, -INFINITY)
    rate_arr = np.full(n, NAN)
    power_arr = np.full(n, NAN)
    k1_arr = np.empty(n, dtype=np.int64)
    m1_arr = np.empty(n, dtype=np.int64)
    feas_arr = np.zeros(n, dtype=np.uint8)
    cdef double[::1] ee = ee_arr
    cdef double[::1] rate = rate_arr
    cdef double[::1] power = power_arr
    cdef long long[::1] k1o = k1_arr
    cdef long long[::1] m1o = m1_arr
    cdef cnp.uint8_t[::1] feas = feas_arr

    eff_buf = np.empty(K)
    ge_buf = np.empty(K)
    cdef double[::1] eff = eff_buf
    cdef double[::1] ge = ge_buf

    cdef Py_ssize_t r, i
    cdef long long k1, m1
    cdef double k1f, m1f, a, b, t, den
    cdef double s_pul, err_ul, s_pdl, amp
    cdef double sul, sdl, sinr, R
    cdef double m_pow, c1, d1, c, dk, d, P

    for r in range(n):
        k1 = 0
        for i in range(K):
            k1 += Xv[r, i]
        m1 = 0
        for i in range(K, N):
            m1 += Xv[r, i]
        k1o[r] = k1
        m1o[r] = m1
        k1f = <double>k1
        m1f = <double>m1
        a = (zeta_ul - tau_ul * k1f / U) * B
        b = (zeta_dl - tau_dl * k1f / U) * B
        if m1 > n_rf or k1 > m1 - 1 or a < 0 or b < 0:
            continue
        feas[r] = 1

        if imperfect:
            t = (tau_ul * p_pilot) * k1f
            for i in range(K):
                den = t * betav[i] + sigma2
                eff[i] = t * betav[i] * betav[i] / den
                ge[i] = betav[i] * sigma2 / den
        else:
            for i in range(K):
                eff[i] = betav[i]
                ge[i] = 0.0

        s_pul = 0.0
        err_ul = 0.0
        s_pdl = 0.0
        amp = 0.0
        for i in range(K):
            if Xv[r, i]:
                s_pul += pulv[i] * eff[i]
                err_ul += pulv[i] * ge[i]
                s_pdl += pdlv[i]
                amp += pulv[i] / eta_ul + pdlv[i] / eta_dl

        sul = 0.0
        sdl = 0.0
        for i in range(K):
            if not Xv[r, i]:
                continue
            if ul_zf:
                sinr = pulv[i] * ((m1f - k1f) * eff[i]) / (err_ul + sigma2)
            else:
                sinr = (pulv[i] * (m1f - 1.0) * eff[i]
                        / ((s_pul - pulv[i] * eff[i]) + err_ul + sigma2))
            sul += log2(1.0 + sinr)
            if dl_zf:
                sinr = (pdlv[i] * ((m1f - k1f) * eff[i])
                        / (ge[i] * s_pdl + sigma2))
            else:
                sinr = (pdlv[i] * (m1f - 1.0) * eff[i]
                        / (eff[i] * (s_pdl - pdlv[i]) + ge[i] * s_pdl + sigma2))
            sdl += log2(1.0 + sinr)

        R = a * sul + b * sdl

        m_pow = <double>M if power_total else m1f
        c1 = (amp
              + (2.0 * B * k1f * k1f / U)
              * (tau_ul * m_pow / L_BS + 2.0 * tau_dl / L_U)
              + P_FIX + P_SYN + k1f * P_U)
        d1 = P_BS + (2.0 * B * k1f / L_BS) * (1.0 - (tau_ul + tau_dl) * k1f / U)
        c = c1
        if ul_zf or dl_zf:
            c = c + B * k1f * k1f * k1f / (3.0 * U * L_BS)
        if ul_zf and dl_zf:
            dk = 3.0 * k1f * k1f + k1f
        elif ul_zf or dl_zf:
            dk = 3.0 * k1f * k1f + 4.0 * k1f
        else:
            dk = 3.0 * k1f
        d = d1 + B * dk / (U * L_BS)
        P = c + d * m_pow + f_rate * R

        ee[r] = R / P
        rate[r] = R
        power[r] = P

    return ee_arr, rate_arr, power_arr, k1_arr, m1_arr, feas_arr


def count_violation(X, n_users, n_rf):
    """Constraint-violation score of each selection row."""
    cdef cnp.uint8_t[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.uint8)
    cdef Py_ssize_t n = Xv.shape[0], N = Xv.shape[1]
    cdef Py_ssize_t K = n_users
    cdef long long rf = n_rf
    out = np.empty(n)
    cdef double[::1] g = out
    cdef Py_ssize_t r, i
    cdef long long k1, m1, v
    for r in range(n):
        k1 = 0
        for i in range(K):
            k1 += Xv[r, i]
        m1 = 0
        for i in range(K, N):
            m1 += Xv[r, i]
        v = 0
        if m1 > rf:
            v += m1 - rf
        if k1 > m1 - 1:
            v += k1 - m1 + 1
        g[r] = <double>v
    return out


def chain_sweeps(seeds, n_steps, t_level, p, u, n_users, n_rf):
    """Conditional-resampling chains for the selection-count constraint;
    see the pure-python backend for the sweep protocol."""
    cdef cnp.uint8_t[:, ::1] X = np.ascontiguousarray(seeds, dtype=np.uint8).copy()
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[:, :, ::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n_chains = X.shape[0], N = X.shape[1]
    cdef Py_ssize_t K = n_users
    cdef long long rf = n_rf
    cdef double t = t_level
    cdef Py_ssize_t steps = n_steps

    out_arr = np.empty((n_chains * steps, N), dtype=np.uint8)
    g_arr = np.empty(n_chains * steps)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef double[::1] g_out = g_arr

    cdef Py_ssize_t c, s, i, j
    cdef long long k1, m1, k1c, m1c, gc
    cdef int b, cur
    for c in range(n_chains):
        k1 = 0
        for i in range(K):
            k1 += X[c, i]
        m1 = 0
        for i in range(K, N):
            m1 += X[c, i]
        for s in range(steps):
            for i in range(N):
                b = 1 if uv[c, s, i] < pv[i] else 0
                cur = X[c, i]
                if b == cur:
                    continue
                if i < K:
                    k1c = k1 + (b - cur)
                    m1c = m1
                else:
                    k1c = k1
                    m1c = m1 + (b - cur)
                gc = 0
                if m1c > rf:
                    gc += m1c - rf
                if k1c > m1c - 1:
                    gc += k1c - m1c + 1
                if <double>gc <= t:
                    X[c, i] = <cnp.uint8_t>b
                    k1 = k1c
                    m1 = m1c
            j = c * steps + s
            for i in range(N):
                out[j, i] = X[c, i]
            gc = 0
            if m1 > rf:
                gc += m1 - rf
            if k1 > m1 - 1:
                gc += k1 - m1 + 1
            g_out[j] = <double>gc
    return out_arr, g_arr

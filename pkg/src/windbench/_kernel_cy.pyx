# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel.

Expression-for-expression transcription of _kernel_py.run_segment; see
that module for the array layouts.  Keep the arithmetic in the exact
same order so both backends stay bit-identical.
"""

from libc.math cimport M_PI, fabs, floor, pow
from libc.stdint cimport int64_t


def run_segment(
    int64_t n,
    int64_t k0,
    double t0,
    double dt,
    double[::1] wind,
    double[:, ::1] out_f,
    int64_t[:, ::1] out_i,
    double[::1] ring,
    double[::1] state_f,
    int64_t[::1] state_i,
    double[::1] params_f,
    int64_t[::1] params_i,
):
    """Advance n steps; returns -1, or the step index that went non-finite."""
    cdef double radius = params_f[0]
    cdef double rho = params_f[1]
    cdef double cp_a = params_f[2]
    cdef double cp_b = params_f[3]
    cdef double cp_c = params_f[4]
    cdef double lambda_cutoff = params_f[5]
    cdef double omega_min = params_f[6]
    cdef double breakaway = params_f[7]
    cdef double tau_d = params_f[8]
    cdef double torque_limit = params_f[9]
    cdef double kp = params_f[10]
    cdef double ki = params_f[11]
    cdef double setpoint = params_f[12]
    cdef double inertia = params_f[13]
    cdef double k_opt = params_f[14]
    cdef double eta_gb = params_f[15]
    cdef double eta_conv = params_f[16]
    cdef double rated_power = params_f[17]
    cdef double u_noload = params_f[18]
    cdef double volts_per_watt = params_f[19]
    cdef double u_max = params_f[20]
    cdef double omega_max = params_f[21]
    cdef double torque_max = params_f[22]
    cdef double power_max = params_f[23]
    cdef int64_t mode = params_i[0]
    cdef int64_t delay_steps = params_i[1]

    cdef double omega = state_f[0]
    cdef double applied = state_f[1]
    cdef double pi_int = state_f[2]
    cdef int64_t ring_pos = state_i[0]
    cdef int64_t trip = state_i[1]

    cdef double area_half_rho = 0.5 * rho * (M_PI * radius * radius)

    cdef int64_t k, mask, level
    cdef double v, w, wq, t_ref, lam, cp, err, u_raw, u_sat
    cdef double delayed, target, t_load, w_new, lam2, cp2
    cdef double p_wt, p_est, p_exp, u_star, ratio, t_now

    for k in range(n):
        v = wind[k]
        w = omega

        # torque reference for this step
        if mode == 0:
            if v <= 0.0:
                t_ref = 0.0
            elif w < omega_min and breakaway >= 0.0:
                t_ref = breakaway
            else:
                wq = w
                if wq < omega_min:
                    wq = omega_min
                lam = wq * radius / v
                if lam >= lambda_cutoff:
                    cp = 0.0
                else:
                    cp = cp_a * lam + cp_b * lam * lam - cp_c * pow(lam, 3.5)
                    if cp < 0.0:
                        cp = 0.0
                t_ref = area_half_rho * cp * (v * v * v) / wq
        elif mode == 1:
            t_ref = setpoint
            if t_ref > torque_limit:
                t_ref = torque_limit
            elif t_ref < -torque_limit:
                t_ref = -torque_limit
        else:
            err = setpoint - w
            u_raw = kp * err + ki * pi_int
            u_sat = u_raw
            if u_sat > torque_limit:
                u_sat = torque_limit
            elif u_sat < -torque_limit:
                u_sat = -torque_limit
            pi_int = pi_int + dt * err + dt * (u_sat - u_raw) / kp
            t_ref = u_sat

        # command delay line, then first-order actuator lag
        if delay_steps > 0:
            delayed = ring[ring_pos]
            ring[ring_pos] = t_ref
            ring_pos = ring_pos + 1
            if ring_pos == delay_steps:
                ring_pos = 0
        else:
            delayed = t_ref
        target = delayed
        if target > torque_limit:
            target = torque_limit
        elif target < -torque_limit:
            target = -torque_limit
        # a trip opens the drive contactor as well as the converter:
        # torque collapses immediately instead of decaying through the
        # lag, and the unloaded shaft freezes until the operator resets
        if trip != 0:
            applied = 0.0
        else:
            applied = applied + dt / tau_d * (target - applied)

        # generator braking torque from the pre-step operating point,
        # held across the step; a tripped converter unloads the shaft
        if trip != 0:
            t_load = 0.0
        else:
            t_load = k_opt * w * w

        w_new = w + dt * (applied - t_load) / inertia
        if w_new < 0.0:
            w_new = 0.0

        # end-of-step electrical quantities
        if v <= 0.0:
            p_wt = 0.0
        else:
            lam2 = w_new * radius / v
            if lam2 >= lambda_cutoff:
                cp2 = 0.0
            else:
                cp2 = cp_a * lam2 + cp_b * lam2 * lam2 - cp_c * pow(lam2, 3.5)
                if cp2 < 0.0:
                    cp2 = 0.0
            p_wt = area_half_rho * cp2 * (v * v * v)
        p_est = eta_conv * p_wt
        p_exp = eta_conv * (eta_gb * t_load * w_new)
        if p_exp > rated_power:
            p_exp = rated_power
        u_star = u_noload + volts_per_watt * p_exp

        mask = 0
        if w_new > omega_max:
            mask = mask | 1
        if fabs(applied) > torque_max:
            mask = mask | 2
        if p_exp > power_max:
            mask = mask | 4
        if u_star > u_max or mask != 0:
            trip = 1
        if trip != 0:
            p_exp = 0.0

        ratio = p_exp / rated_power
        if ratio < 0.0:
            ratio = 0.0
        elif ratio > 1.0:
            ratio = 1.0
        level = <int64_t>floor(15.0 * ratio + 0.5)

        t_now = t0 + (k0 + k + 1) * dt
        out_f[k, 0] = t_now
        out_f[k, 1] = v
        out_f[k, 2] = w_new
        out_f[k, 3] = t_ref
        out_f[k, 4] = applied
        out_f[k, 5] = p_wt
        out_f[k, 6] = p_est
        out_f[k, 7] = p_exp
        out_f[k, 8] = u_star
        out_i[k, 0] = level
        out_i[k, 1] = trip
        out_i[k, 2] = mask

        if not (
            w_new == w_new and applied == applied and p_exp == p_exp and u_star == u_star
        ):
            state_f[0] = w_new
            state_f[1] = applied
            state_f[2] = pi_int
            state_i[0] = ring_pos
            state_i[1] = trip
            return k

        omega = w_new

    state_f[0] = omega
    state_f[1] = applied
    state_f[2] = pi_int
    state_i[0] = ring_pos
    state_i[1] = trip
    return -1

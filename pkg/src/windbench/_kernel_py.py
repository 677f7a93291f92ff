"""Pure-Python simulation kernel.

One fixed-step closed-loop segment: reference computation, command
delay, drive lag, shaft integration, powers, converter and protection
logic.  The compiled kernel transcribes this arithmetic expression for
expression; any edit here must be mirrored there to keep the two
backends bit-identical (test_kernels asserts parity).

Array layouts shared by both backends:

  params_f[24]: 0 radius, 1 rho, 2 cp_a, 3 cp_b, 4 cp_c,
    5 lambda_cutoff, 6 omega_min, 7 breakaway (< 0 = disabled),
    8 tau_d, 9 torque_limit, 10 kp, 11 ki, 12 setpoint, 13 inertia,
    14 k_opt, 15 eta_gb, 16 eta_conv, 17 rated_power, 18 u_noload,
    19 volts_per_watt, 20 u_max, 21 omega_max, 22 torque_max,
    23 power_max
  params_i[2]: 0 mode (0 emulation, 1 torque, 2 speed), 1 delay_steps
  state_f[3]: 0 omega, 1 applied torque, 2 PI integral
  state_i[2]: 0 ring position, 1 trip latch
  ring[max(1, delay_steps)]: pending torque references
  out_f[n, 9]: 0 t, 1 v, 2 omega, 3 t_ref, 4 t_applied, 5 p_wt,
    6 p_est, 7 p_exported, 8 u_star
  out_i[n, 3]: 0 level_code, 1 trip_latched, 2 violations mask
    (1 = over-speed, 2 = over-torque, 4 = over-power)
"""

from __future__ import annotations

import math

PARAMS_F_LEN = 24
PARAMS_I_LEN = 2
STATE_F_LEN = 3
STATE_I_LEN = 2
OUT_F_COLS = 9
OUT_I_COLS = 3


def run_segment(n, k0, t0, dt, wind, out_f, out_i, ring, state_f, state_i, params_f, params_i):
    """Advance n steps; returns -1, or the step index that went non-finite.

    k0 is the global index of the first step so timestamps come out as
    t0 + (k0 + k + 1)*dt regardless of how a run is chunked.
    """
    radius = params_f[0]
    rho = params_f[1]
    cp_a = params_f[2]
    cp_b = params_f[3]
    cp_c = params_f[4]
    lambda_cutoff = params_f[5]
    omega_min = params_f[6]
    breakaway = params_f[7]
    tau_d = params_f[8]
    torque_limit = params_f[9]
    kp = params_f[10]
    ki = params_f[11]
    setpoint = params_f[12]
    inertia = params_f[13]
    k_opt = params_f[14]
    eta_gb = params_f[15]
    eta_conv = params_f[16]
    rated_power = params_f[17]
    u_noload = params_f[18]
    volts_per_watt = params_f[19]
    u_max = params_f[20]
    omega_max = params_f[21]
    torque_max = params_f[22]
    power_max = params_f[23]
    mode = params_i[0]
    delay_steps = params_i[1]

    omega = state_f[0]
    applied = state_f[1]
    pi_int = state_f[2]
    ring_pos = state_i[0]
    trip = state_i[1]

    area_half_rho = 0.5 * rho * (math.pi * radius * radius)

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
                    cp = cp_a * lam + cp_b * lam * lam - cp_c * lam**3.5
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
                cp2 = cp_a * lam2 + cp_b * lam2 * lam2 - cp_c * lam2**3.5
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
            mask |= 1
        if abs(applied) > torque_max:
            mask |= 2
        if p_exp > power_max:
            mask |= 4
        if u_star > u_max or mask != 0:
            trip = 1
        if trip != 0:
            p_exp = 0.0

        ratio = p_exp / rated_power
        if ratio < 0.0:
            ratio = 0.0
        elif ratio > 1.0:
            ratio = 1.0
        level = int(math.floor(15.0 * ratio + 0.5))

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

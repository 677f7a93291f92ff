"""The bench executive: fixed-step loop, telemetry, logs, summaries.

Owns all mutable simulation state and advances it through the selected
kernel in chunks.  Commands are applied strictly between chunks, so a
run is a pure function of (scenario, config, command schedule).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import kernels
from .config import BenchConfig
from .drivetrain import total_inertia
from .errors import ConfigurationError, ProtocolError, SimulationError
from .mppt import MppTableRow, mpp_table, optimal_load_constant
from .reference import REFERENCE_WIND_SPEEDS, p_gen_by_wind_speed
from .scenario import (
    ConstantWind,
    GustWind,
    Mode,
    Scenario,
    WindProfile,
    wind_at,
)
from .turbine import RADS_TO_RPM, aerodynamic_power

# violation-mask bits in their deterministic report order
VIOLATION_BITS = ((1, "over_speed"), (2, "over_torque"), (4, "over_power"))

_MODE_CODES = {
    Mode.TURBINE_EMULATION: 0,
    Mode.TORQUE_CONTROL: 1,
    Mode.SPEED_CONTROL: 2,
}

CSV_COLUMNS = (
    "t",
    "v",
    "omega",
    "rpm",
    "tsr",
    "t_ref",
    "t_applied",
    "p_wt",
    "p_est",
    "p_exported",
    "u_star",
    "level_code",
    "mode",
    "trip_latched",
    "violations",
)


@dataclass(frozen=True)
class TelemetrySample:
    """One timestamped snapshot of the whole bench."""

    t: float  # s
    v: float  # m/s
    omega: float  # rad/s
    rpm: float
    tsr: float
    t_ref: float  # N·m
    t_applied: float  # N·m
    p_wt: float  # W
    p_est: float  # W
    p_exported: float  # W
    u_star: float  # V
    level_code: int
    mode: str
    trip_latched: bool
    violations: tuple[str, ...]

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["violations"] = list(self.violations)
        return d


def _decode_violations(mask: int) -> tuple[str, ...]:
    return tuple(name for bit, name in VIOLATION_BITS if mask & bit)


class SimState:
    """Mutable bench state plus the knobs commands can turn."""

    def __init__(self, config: BenchConfig, scenario: Scenario) -> None:
        self.config = config
        self.scenario = scenario
        self.dt = scenario.dt if scenario.dt is not None else config.simulation.dt
        if self.dt > config.drive.torque_time_constant:
            raise ConfigurationError(
                f"dt {self.dt} exceeds the drive time constant "
                f"{config.drive.torque_time_constant}"
            )
        if self.dt > config.drivetrain.max_dt:
            raise ConfigurationError(
                f"dt {self.dt} exceeds drivetrain max_dt {config.drivetrain.max_dt}"
            )
        self.profile: WindProfile = scenario.profile
        self.mode: Mode = scenario.mode
        self.setpoint: float | None = scenario.setpoint
        self.t0 = 0.0
        self.steps_done = 0
        self.k_opt = optimal_load_constant(config.turbine)
        self.inertia = total_inertia(config.drivetrain)
        self.delay_steps = int(round(config.drive.command_delay / self.dt))
        self.ring = np.zeros(max(1, self.delay_steps), dtype=np.float64)
        self.state_f = np.array(
            [config.simulation.initial_omega, 0.0, 0.0], dtype=np.float64
        )
        self.state_i = np.zeros(kernels.STATE_I_LEN, dtype=np.int64)
        self.last_sample = self._initial_sample()

    # -- state views -------------------------------------------------

    @property
    def t(self) -> float:
        return self.t0 + self.steps_done * self.dt

    @property
    def omega(self) -> float:
        return float(self.state_f[0])

    @property
    def trip_latched(self) -> bool:
        return bool(self.state_i[1])

    def _initial_sample(self) -> TelemetrySample:
        turbine = self.config.turbine
        v0 = wind_at(0.0, self.profile)
        omega0 = float(self.state_f[0])
        p_wt = aerodynamic_power(v0, omega0, turbine)
        tsr = omega0 * turbine.rotor_radius / v0 if v0 > 0.0 else 0.0
        return TelemetrySample(
            t=0.0,
            v=v0,
            omega=omega0,
            rpm=omega0 * RADS_TO_RPM,
            tsr=tsr,
            t_ref=0.0,
            t_applied=0.0,
            p_wt=p_wt,
            p_est=self.config.generator.eta_conv * p_wt,
            p_exported=0.0,
            u_star=self.config.converter.u_noload,
            level_code=0,
            mode=self.mode.value,
            trip_latched=False,
            violations=(),
        )

    def _pack_params(self) -> tuple[np.ndarray, np.ndarray]:
        c = self.config
        t = c.turbine
        breakaway = c.control.breakaway_torque
        params_f = np.array(
            [
                t.rotor_radius,
                t.air_density,
                t.cp_a,
                t.cp_b,
                t.cp_c,
                t.lambda_cutoff,
                t.omega_min,
                -1.0 if breakaway is None else breakaway,
                c.drive.torque_time_constant,
                c.drive.torque_limit,
                c.control.kp,
                c.control.ki,
                0.0 if self.setpoint is None else self.setpoint,
                self.inertia,
                self.k_opt,
                c.drivetrain.gearbox_efficiency,
                c.generator.eta_conv,
                c.generator.rated_power,
                c.converter.u_noload,
                c.converter.volts_per_watt,
                c.converter.u_max,
                c.protections.omega_max,
                c.protections.torque_max,
                c.protections.power_max,
            ],
            dtype=np.float64,
        )
        params_i = np.array(
            [_MODE_CODES[self.mode], self.delay_steps], dtype=np.int64
        )
        return params_f, params_i

    def _wind_chunk(self, n: int) -> np.ndarray:
        # each step reads the wind at its start time
        base, dt, k0 = self.t0, self.dt, self.steps_done
        return np.array(
            [wind_at(base + (k0 + k) * dt, self.profile) for k in range(n)],
            dtype=np.float64,
        )

    def _sample_from_row(self, row_f: np.ndarray, row_i: np.ndarray) -> TelemetrySample:
        turbine = self.config.turbine
        t, v, omega, t_ref, t_applied, p_wt, p_est, p_exported, u_star = (
            float(x) for x in row_f
        )
        tsr = omega * turbine.rotor_radius / v if v > 0.0 else 0.0
        return TelemetrySample(
            t=t,
            v=v,
            omega=omega,
            rpm=omega * RADS_TO_RPM,
            tsr=tsr,
            t_ref=t_ref,
            t_applied=t_applied,
            p_wt=p_wt,
            p_est=p_est,
            p_exported=p_exported,
            u_star=u_star,
            level_code=int(row_i[0]),
            mode=self.mode.value,
            trip_latched=bool(row_i[1]),
            violations=_decode_violations(int(row_i[2])),
        )

    # -- stepping ----------------------------------------------------

    def advance(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Run n steps; returns the per-step float and int log arrays."""
        if n < 1:
            raise SimulationError(f"chunk size must be at least 1, got {n}")
        wind = self._wind_chunk(n)
        out_f = np.empty((n, kernels.OUT_F_COLS), dtype=np.float64)
        out_i = np.empty((n, kernels.OUT_I_COLS), dtype=np.int64)
        params_f, params_i = self._pack_params()
        status = kernels.run_segment(
            n,
            self.steps_done,
            self.t0,
            self.dt,
            wind,
            out_f,
            out_i,
            self.ring,
            self.state_f,
            self.state_i,
            params_f,
            params_i,
        )
        if status >= 0:
            failed = self.steps_done + status
            self.steps_done += status + 1
            raise SimulationError(f"step {failed} produced a non-finite value")
        self.steps_done += n
        self.last_sample = self._sample_from_row(out_f[n - 1], out_i[n - 1])
        return out_f, out_i

    def step(self) -> TelemetrySample:
        """Advance exactly one dt and return the new sample."""
        self.advance(1)
        return self.last_sample

    # -- commands ----------------------------------------------------

    def apply_command(self, name: str, args: dict) -> dict:
        """Apply one operator command between steps.

        Raises :class:`ProtocolError` for unknown commands or bad
        arguments, leaving the state unchanged.
        """
        if not isinstance(args, dict):
            raise ProtocolError("command args must be a mapping")
        if name == "set_wind":
            v = _num_arg(args, "v")
            if v < 0.0:
                raise ProtocolError(f"wind speed must be non-negative, got {v}")
            self.profile = ConstantWind(v)
            return {"v": v}
        if name == "inject_gust":
            amplitude = _num_arg(args, "amplitude")
            duration = _num_arg(args, "duration")
            if duration <= 0.0:
                raise ProtocolError(f"duration must be positive, got {duration}")
            now = self.t
            v_base = wind_at(now, self.profile)
            self.profile = GustWind(
                v_base=v_base, amplitude=amplitude, t_start=now, duration=duration
            )
            return {"v_base": v_base, "t_start": now, "duration": duration}
        if name == "set_mode":
            raw = args.get("mode")
            try:
                mode = Mode(raw)
            except ValueError:
                modes = ", ".join(m.value for m in Mode)
                raise ProtocolError(f"unknown mode {raw!r} (one of {modes})") from None
            if mode is Mode.TURBINE_EMULATION:
                self.setpoint = None
            else:
                if "setpoint" not in args:
                    raise ProtocolError(f"{mode.value} mode needs a setpoint")
                self.setpoint = _num_arg(args, "setpoint")
            self.mode = mode
            self.state_f[2] = 0.0  # fresh PI integrator
            return {"mode": mode.value, "setpoint": self.setpoint}
        if name == "set_setpoint":
            if self.mode is Mode.TURBINE_EMULATION:
                raise ProtocolError("emulation mode takes no setpoint")
            self.setpoint = _num_arg(args, "value")
            return {"setpoint": self.setpoint}
        if name == "trip_reset":
            if not self.trip_latched:
                raise ProtocolError("not tripped")
            self.state_i[1] = 0
            return {"reset": True}
        raise ProtocolError(f"unknown command {name!r}")

    def status(self) -> dict:
        return {
            "t": self.t,
            "mode": self.mode.value,
            "setpoint": self.setpoint,
            "trip_latched": self.trip_latched,
            "last_sample": self.last_sample.as_dict(),
        }


def _num_arg(args: dict, key: str) -> float:
    value = args.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProtocolError(f"argument {key!r} must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class RunSummary:
    """Energy totals and closing state of one run."""

    scenario_mode: str
    steps: int
    dt: float  # s
    duration: float  # s
    energy_mech_in: float  # J, integral of applied torque times speed
    energy_elec_out: float  # J, integral of exported power
    delta_kinetic: float  # J
    audit_residual_rel: float  # conservation misfit, relative
    mean_efficiency: float  # exported / mechanical
    tripped: bool
    trip_time: float | None  # s
    violations_seen: tuple[str, ...]
    final_omega: float  # rad/s
    final_v: float  # m/s
    final_p_exported: float  # W

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["violations_seen"] = list(self.violations_seen)
        return d


class RunResult:
    """Full-rate log of one run plus its summary."""

    def __init__(
        self,
        config: BenchConfig,
        scenario: Scenario,
        initial_sample: TelemetrySample,
        out_f: np.ndarray,
        out_i: np.ndarray,
        dt: float,
    ) -> None:
        self.config = config
        self.scenario = scenario
        self.initial_sample = initial_sample
        self.out_f = out_f
        self.out_i = out_i
        self.dt = dt
        self.summary = self._summarize()

    # column views over the step log (initial sample not included)
    @property
    def t(self) -> np.ndarray:
        return self.out_f[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.out_f[:, 1]

    @property
    def omega(self) -> np.ndarray:
        return self.out_f[:, 2]

    @property
    def t_applied(self) -> np.ndarray:
        return self.out_f[:, 4]

    @property
    def p_wt(self) -> np.ndarray:
        return self.out_f[:, 5]

    @property
    def p_est(self) -> np.ndarray:
        return self.out_f[:, 6]

    @property
    def p_exported(self) -> np.ndarray:
        return self.out_f[:, 7]

    @property
    def u_star(self) -> np.ndarray:
        return self.out_f[:, 8]

    @property
    def trip_latched(self) -> np.ndarray:
        return self.out_i[:, 1]

    def _summarize(self) -> RunSummary:
        dt = self.dt
        mech = float(np.sum(self.out_f[:, 4] * self.out_f[:, 2]) * dt)
        elec = float(np.sum(self.out_f[:, 7]) * dt)
        eta = (
            self.config.generator.eta_conv
            * self.config.drivetrain.gearbox_efficiency
        )
        j = total_inertia(self.config.drivetrain)
        w0 = self.initial_sample.omega
        w1 = float(self.out_f[-1, 2])
        d_kinetic = 0.5 * j * (w1 * w1 - w0 * w0)
        residual = mech - (elec / eta + d_kinetic)
        scale = max(abs(mech), abs(elec), abs(d_kinetic), 1e-9)
        trips = np.flatnonzero(self.out_i[:, 1] != 0)
        mask_union = int(np.bitwise_or.reduce(self.out_i[:, 2])) if len(self.out_i) else 0
        return RunSummary(
            scenario_mode=self.scenario.mode.value,
            steps=int(self.out_f.shape[0]),
            dt=dt,
            duration=self.out_f.shape[0] * dt,
            energy_mech_in=mech,
            energy_elec_out=elec,
            delta_kinetic=d_kinetic,
            audit_residual_rel=abs(residual) / scale,
            mean_efficiency=elec / mech if mech > 0.0 else 0.0,
            tripped=bool(self.out_i[-1, 1]),
            trip_time=float(self.out_f[trips[0], 0]) if len(trips) else None,
            violations_seen=_decode_violations(mask_union),
            final_omega=w1,
            final_v=float(self.out_f[-1, 1]),
            final_p_exported=float(self.out_f[-1, 7]),
        )

    def samples(self) -> list[TelemetrySample]:
        """Materialize every sample, initial one first."""
        turbine = self.config.turbine
        mode = self.scenario.mode.value
        out = [self.initial_sample]
        for row_f, row_i in zip(self.out_f, self.out_i):
            omega = float(row_f[2])
            v = float(row_f[1])
            out.append(
                TelemetrySample(
                    t=float(row_f[0]),
                    v=v,
                    omega=omega,
                    rpm=omega * RADS_TO_RPM,
                    tsr=omega * turbine.rotor_radius / v if v > 0.0 else 0.0,
                    t_ref=float(row_f[3]),
                    t_applied=float(row_f[4]),
                    p_wt=float(row_f[5]),
                    p_est=float(row_f[6]),
                    p_exported=float(row_f[7]),
                    u_star=float(row_f[8]),
                    level_code=int(row_i[0]),
                    mode=mode,
                    trip_latched=bool(row_i[1]),
                    violations=_decode_violations(int(row_i[2])),
                )
            )
        return out

    def _csv_lines(self):
        yield ",".join(CSV_COLUMNS)
        turbine = self.config.turbine
        mode = self.scenario.mode.value
        s = self.initial_sample
        yield _csv_row(
            s.t, s.v, s.omega, s.rpm, s.tsr, s.t_ref, s.t_applied, s.p_wt,
            s.p_est, s.p_exported, s.u_star, s.level_code, mode,
            int(s.trip_latched), s.violations,
        )
        radius = turbine.rotor_radius
        for row_f, row_i in zip(self.out_f, self.out_i):
            omega = float(row_f[2])
            v = float(row_f[1])
            yield _csv_row(
                float(row_f[0]), v, omega, omega * RADS_TO_RPM,
                omega * radius / v if v > 0.0 else 0.0,
                float(row_f[3]), float(row_f[4]), float(row_f[5]),
                float(row_f[6]), float(row_f[7]), float(row_f[8]),
                int(row_i[0]), mode, int(row_i[1]),
                _decode_violations(int(row_i[2])),
            )

    def write_csv(self, path: str | Path) -> None:
        """Full-rate log, one row per step; bytes are reproducible."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for line in self._csv_lines():
                fh.write(line)
                fh.write("\n")

    def write_summary(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            yaml.safe_dump(self.summary.as_dict(), fh, sort_keys=True)


def _csv_row(t, v, omega, rpm, tsr, t_ref, t_applied, p_wt, p_est, p_exported,
             u_star, level_code, mode, trip, violations) -> str:
    return ",".join(
        (
            repr(t), repr(v), repr(omega), repr(rpm), repr(tsr), repr(t_ref),
            repr(t_applied), repr(p_wt), repr(p_est), repr(p_exported),
            repr(u_star), str(level_code), mode, str(trip),
            "|".join(violations),
        )
    )


def run_scenario(
    scenario: Scenario,
    config: BenchConfig,
    log_path: str | Path | None = None,
    summary_path: str | Path | None = None,
) -> RunResult:
    """Run one scenario start to finish.

    Deterministic: the same scenario and config (seeds included)
    reproduce the log byte for byte.
    """
    state = SimState(config, scenario)
    initial = state.last_sample
    n = int(round(scenario.duration / state.dt))
    if n < 1:
        raise ConfigurationError(
            f"duration {scenario.duration} shorter than one step {state.dt}"
        )
    out_f, out_i = state.advance(n)
    result = RunResult(config, scenario, initial, out_f, out_i, state.dt)
    if log_path is not None:
        result.write_csv(log_path)
    if summary_path is not None:
        result.write_summary(summary_path)
    return result


def report_table(
    config: BenchConfig,
    speeds: list[float] | None = None,
    eta_conv: float | None = None,
) -> list[MppTableRow]:
    """Maximum-power table with the bundled measured column attached."""
    if speeds is None:
        speeds = list(REFERENCE_WIND_SPEEDS)
    eta = config.generator.eta_conv if eta_conv is None else eta_conv
    return mpp_table(speeds, config.turbine, eta, p_gen_reference=p_gen_by_wind_speed())

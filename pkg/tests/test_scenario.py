import pytest

from windbench.errors import ConfigurationError, DomainError
from windbench.scenario import (
    TURBULENCE_SAMPLE_DT,
    ConstantWind,
    ControlParams,
    GustWind,
    Mode,
    PIState,
    RampWind,
    Scenario,
    StepWind,
    TurbulentWind,
    torque_reference,
    wind_at,
)
from windbench.turbine import TurbineParams, aerodynamic_torque


class TestProfiles:
    def test_constant(self):
        profile = ConstantWind(8.0)
        assert wind_at(0.0, profile) == 8.0
        assert wind_at(1e6, profile) == 8.0

    def test_step_boundary_is_inclusive(self):
        profile = StepWind(4.0, 12.0, t_step=30.0)
        assert wind_at(29.999, profile) == 4.0
        assert wind_at(30.0, profile) == 12.0
        assert wind_at(31.0, profile) == 12.0

    def test_ramp_interpolates(self):
        profile = RampWind(4.0, 8.0, t0=10.0, t1=20.0)
        assert wind_at(0.0, profile) == 4.0
        assert wind_at(10.0, profile) == 4.0
        assert wind_at(15.0, profile) == pytest.approx(6.0)
        assert wind_at(20.0, profile) == 8.0
        assert wind_at(100.0, profile) == 8.0

    def test_gust_shape(self):
        profile = GustWind(v_base=8.0, amplitude=4.0, t_start=10.0, duration=6.0)
        assert wind_at(9.99, profile) == 8.0
        assert wind_at(10.0, profile) == pytest.approx(8.0)
        # half-cosine bump peaks mid-window at base + amplitude
        assert wind_at(13.0, profile) == pytest.approx(12.0)
        assert wind_at(16.0, profile) == pytest.approx(8.0)
        assert wind_at(16.01, profile) == 8.0

    def test_lull_clamps_at_zero(self):
        profile = GustWind(v_base=3.0, amplitude=-10.0, t_start=0.0, duration=4.0)
        assert wind_at(2.0, profile) == 0.0

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            wind_at(-0.1, ConstantWind(8.0))

    @pytest.mark.parametrize(
        "factory",
        [
            lambda: ConstantWind(-1.0),
            lambda: StepWind(4.0, -1.0, 10.0),
            lambda: StepWind(4.0, 8.0, -1.0),
            lambda: RampWind(4.0, 8.0, 10.0, 10.0),
            lambda: RampWind(-4.0, 8.0, 0.0, 10.0),
            lambda: GustWind(-1.0, 2.0, 0.0, 1.0),
            lambda: GustWind(8.0, 2.0, 0.0, 0.0),
            lambda: TurbulentWind(-8.0, 0.1, 1),
            lambda: TurbulentWind(8.0, -0.1, 1),
            lambda: TurbulentWind(8.0, 0.1, 1, rate=0.0),
        ],
    )
    def test_profile_validation(self, factory):
        with pytest.raises(ConfigurationError):
            factory()


class TestTurbulence:
    def test_same_seed_replays_identically(self):
        times = [0.0, 0.37, 1.0, 5.55, 30.0]
        a = [wind_at(t, TurbulentWind(8.0, 0.1, seed=7)) for t in times]
        b = [wind_at(t, TurbulentWind(8.0, 0.1, seed=7)) for t in times]
        assert a == b

    def test_different_seeds_differ(self):
        t = 10.0
        assert wind_at(t, TurbulentWind(8.0, 0.1, seed=1)) != wind_at(
            t, TurbulentWind(8.0, 0.1, seed=2)
        )

    def test_sample_and_hold(self):
        profile = TurbulentWind(8.0, 0.1, seed=3)
        t0 = 7 * TURBULENCE_SAMPLE_DT
        inside = t0 + 0.4 * TURBULENCE_SAMPLE_DT
        assert wind_at(t0, profile) == wind_at(inside, profile)

    def test_query_order_does_not_matter(self):
        # asking for a late sample first must not change early ones
        early = wind_at(0.3, TurbulentWind(9.0, 0.2, seed=11))
        profile = TurbulentWind(9.0, 0.2, seed=11, rate=0.5)
        wind_at(50.0, profile)
        assert wind_at(0.3, profile) == early

    def test_never_negative(self):
        profile = TurbulentWind(0.5, 3.0, seed=13)
        values = [wind_at(k * 0.05, profile) for k in range(2000)]
        assert min(values) >= 0.0

    def test_stays_near_base_at_modest_intensity(self):
        profile = TurbulentWind(8.0, 0.1, seed=42)
        values = [wind_at(k * 0.05, profile) for k in range(4000)]
        mean = sum(values) / len(values)
        assert mean == pytest.approx(8.0, rel=0.1)


class TestScenario:
    def test_emulation_takes_no_setpoint(self):
        with pytest.raises(ConfigurationError):
            Scenario(profile=ConstantWind(8.0), setpoint=1.0)

    def test_control_modes_need_a_setpoint(self):
        with pytest.raises(ConfigurationError):
            Scenario(profile=ConstantWind(8.0), mode=Mode.TORQUE_CONTROL)
        with pytest.raises(ConfigurationError):
            Scenario(profile=ConstantWind(8.0), mode=Mode.SPEED_CONTROL)

    def test_duration_and_dt_bounds(self):
        with pytest.raises(ConfigurationError):
            Scenario(profile=ConstantWind(8.0), duration=0.0)
        with pytest.raises(ConfigurationError):
            Scenario(profile=ConstantWind(8.0), dt=0.0)


class TestControlParams:
    def test_validation(self):
        with pytest.raises(ConfigurationError):
            ControlParams(kp=0.0)
        with pytest.raises(ConfigurationError):
            ControlParams(ki=-1.0)
        with pytest.raises(ConfigurationError):
            ControlParams(torque_limit=0.0)
        with pytest.raises(ConfigurationError):
            ControlParams(breakaway_torque=0.0)

    def test_breakaway_may_be_disabled(self):
        assert ControlParams(breakaway_torque=None).breakaway_torque is None


def make_args(**overrides):
    args = {
        "mode": Mode.TURBINE_EMULATION,
        "measured_omega": 9.5,
        "v": 8.0,
        "setpoint": None,
        "turbine": TurbineParams(),
        "control": ControlParams(),
        "pi": PIState(),
        "dt": 1e-3,
    }
    args.update(overrides)
    return args


class TestTorqueReference:
    def test_emulation_tracks_the_torque_map(self):
        turbine = TurbineParams()
        t_ref = torque_reference(**make_args())
        assert t_ref == pytest.approx(aerodynamic_torque(8.0, 9.5, turbine))

    def test_emulation_zero_wind_rests(self):
        assert torque_reference(**make_args(v=0.0, measured_omega=0.0)) == 0.0

    def test_breakaway_below_the_floor(self):
        t_ref = torque_reference(**make_args(measured_omega=0.0))
        assert t_ref == 5.0

    def test_floor_formula_when_breakaway_disabled(self):
        turbine = TurbineParams()
        control = ControlParams(breakaway_torque=None)
        t_ref = torque_reference(**make_args(measured_omega=0.0, control=control))
        assert t_ref == pytest.approx(
            aerodynamic_torque(8.0, turbine.omega_min, turbine)
        )

    def test_torque_mode_passes_through_saturated(self):
        args = make_args(mode=Mode.TORQUE_CONTROL, setpoint=120.0)
        assert torque_reference(**args) == 120.0
        args = make_args(mode=Mode.TORQUE_CONTROL, setpoint=900.0)
        assert torque_reference(**args) == 400.0
        args = make_args(mode=Mode.TORQUE_CONTROL, setpoint=-900.0)
        assert torque_reference(**args) == -400.0

    def test_control_modes_require_setpoint(self):
        with pytest.raises(ConfigurationError):
            torque_reference(**make_args(mode=Mode.TORQUE_CONTROL))
        with pytest.raises(ConfigurationError):
            torque_reference(**make_args(mode=Mode.SPEED_CONTROL))

    def test_negative_omega_rejected(self):
        with pytest.raises(DomainError):
            torque_reference(**make_args(measured_omega=-1.0))

    def test_speed_mode_regulates_a_simple_plant(self):
        # close the loop around a bare inertia and watch it settle
        control = ControlParams()
        pi = PIState()
        inertia, dt, omega = 0.09, 1e-3, 0.0
        for _ in range(20000):
            u = torque_reference(
                **make_args(
                    mode=Mode.SPEED_CONTROL,
                    measured_omega=omega,
                    setpoint=9.0,
                    control=control,
                    pi=pi,
                    dt=dt,
                )
            )
            omega += dt * (u - 0.5 * omega) / inertia
        assert omega == pytest.approx(9.0, rel=1e-3)

    def test_speed_mode_needs_positive_dt(self):
        with pytest.raises(DomainError):
            torque_reference(
                **make_args(mode=Mode.SPEED_CONTROL, setpoint=5.0, dt=0.0)
            )

    def test_anti_windup_bounds_the_integrator(self):
        # hold the plant at rest against a far setpoint; back-calculation
        # must keep the integral from running away
        control = ControlParams()
        pi = PIState()
        for _ in range(5000):
            torque_reference(
                **make_args(
                    mode=Mode.SPEED_CONTROL,
                    measured_omega=0.0,
                    setpoint=100.0,
                    control=control,
                    pi=pi,
                )
            )
        assert control.ki * pi.integral <= control.torque_limit * 1.01

    def test_pi_state_reset(self):
        pi = PIState(integral=3.0)
        pi.reset()
        assert pi.integral == 0.0

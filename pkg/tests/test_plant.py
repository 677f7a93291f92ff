import pytest
from hypothesis import given, strategies as st

from windbench.errors import ConfigurationError, DomainError, StepSizeError
from windbench.plant import (
    ConverterParams,
    ConverterState,
    DrivePlant,
    GeneratorModel,
    ProtectionLimits,
    Violation,
    converter_level_command,
    dc_bus_voltage,
    drive_torque_response,
    generator_electrical_power,
    overvoltage_guard,
    protection_check,
    saturate_torque,
)


class Sample:
    """Minimal stand-in carrying the fields protection_check reads."""

    def __init__(self, omega=0.0, t_applied=0.0, p_exported=0.0):
        self.omega = omega
        self.t_applied = t_applied
        self.p_exported = p_exported


class TestValidation:
    def test_protection_limits(self):
        with pytest.raises(ConfigurationError):
            ProtectionLimits(omega_max=0.0)
        with pytest.raises(ConfigurationError):
            ProtectionLimits(power_max=-1.0)

    def test_generator_model(self):
        with pytest.raises(ConfigurationError):
            GeneratorModel(eta_conv=0.0)
        with pytest.raises(ConfigurationError):
            GeneratorModel(eta_conv=1.2)
        with pytest.raises(ConfigurationError):
            GeneratorModel(rated_power=0.0)

    def test_converter_params(self):
        with pytest.raises(ConfigurationError):
            ConverterParams(u_noload=0.0)
        with pytest.raises(ConfigurationError):
            ConverterParams(volts_per_watt=-0.01)

    def test_converter_state(self):
        with pytest.raises(DomainError):
            ConverterState(level_code=16)
        with pytest.raises(DomainError):
            ConverterState(level_code=-1)
        with pytest.raises(DomainError):
            ConverterState(trip_latched=True, connected=True)

    def test_drive_plant(self):
        with pytest.raises(ConfigurationError):
            DrivePlant(torque_time_constant=0.0)
        with pytest.raises(ConfigurationError):
            DrivePlant(command_delay=-0.001)
        with pytest.raises(ConfigurationError):
            DrivePlant(torque_limit=0.0)


class TestSaturation:
    def test_passthrough_and_clamp(self):
        assert saturate_torque(100.0, 400.0) == 100.0
        assert saturate_torque(500.0, 400.0) == 400.0
        assert saturate_torque(-500.0, 400.0) == -400.0

    @given(torque=st.floats(min_value=-1e4, max_value=1e4))
    def test_never_exceeds_limit(self, torque):
        assert abs(saturate_torque(torque, 350.0)) <= 350.0


class TestDriveResponse:
    def test_delay_line_holds_early_commands_back(self):
        plant = DrivePlant(command_delay=0.005)
        dt = 1e-3
        assert plant.delay_steps(dt) == 5
        for _ in range(5):
            # five steps of pure delay: the output never moves
            assert drive_torque_response(100.0, plant, dt) == 0.0
        assert drive_torque_response(100.0, plant, dt) > 0.0

    def test_first_order_step_response(self):
        plant = DrivePlant(torque_time_constant=0.02, command_delay=0.0)
        dt = 1e-3
        decay = 1.0 - dt / 0.02
        for k in range(1, 200):
            applied = drive_torque_response(100.0, plant, dt)
            assert applied == pytest.approx(100.0 * (1.0 - decay**k), rel=1e-9)
        assert applied == pytest.approx(100.0, rel=1e-2)

    def test_reference_saturates_before_the_lag(self):
        plant = DrivePlant(torque_limit=50.0, command_delay=0.0)
        for _ in range(5000):
            applied = drive_torque_response(900.0, plant, 1e-3)
        assert applied == pytest.approx(50.0, rel=1e-6)

    def test_reset_returns_to_rest(self):
        plant = DrivePlant()
        for _ in range(30):
            drive_torque_response(100.0, plant, 1e-3)
        assert plant.applied_torque != 0.0
        plant.reset()
        assert plant.applied_torque == 0.0
        assert drive_torque_response(0.0, plant, 1e-3) == 0.0

    def test_rejects_bad_step(self):
        with pytest.raises(StepSizeError):
            drive_torque_response(10.0, DrivePlant(), 0.0)

    def test_zero_delay_acts_immediately(self):
        plant = DrivePlant(command_delay=0.0)
        assert drive_torque_response(100.0, plant, 1e-3) > 0.0


class TestGenerator:
    def test_efficiency_map(self):
        model = GeneratorModel(eta_conv=0.8, rated_power=8000.0)
        assert generator_electrical_power(1000.0, model) == pytest.approx(800.0)

    def test_rated_cap(self):
        model = GeneratorModel(eta_conv=0.8, rated_power=8000.0)
        assert generator_electrical_power(50000.0, model) == 8000.0

    def test_rejects_negative_power(self):
        with pytest.raises(DomainError):
            generator_electrical_power(-1.0, GeneratorModel())


class TestConverterLevel:
    @pytest.mark.parametrize(
        "power, expected",
        [
            (0.0, 0),
            (8000.0, 15),
            (4000.0, 8),  # half rated rounds up
            (266.0, 0),
            (267.0, 1),  # first level boundary at rated/30
            (-10.0, 0),
            (20000.0, 15),
        ],
    )
    def test_quantization(self, power, expected):
        assert converter_level_command(power, 8000.0) == expected

    @given(power=st.floats(min_value=-1e5, max_value=1e5))
    def test_codes_stay_in_four_bits(self, power):
        assert 0 <= converter_level_command(power, 8000.0) <= 15

    def test_monotone_in_power(self):
        codes = [converter_level_command(p * 10.0, 8000.0) for p in range(0, 900)]
        assert all(a <= b for a, b in zip(codes, codes[1:]))

    def test_rejects_bad_rating(self):
        with pytest.raises(DomainError):
            converter_level_command(100.0, 0.0)


class TestBusAndGuard:
    def test_bus_voltage_is_affine_in_export(self):
        params = ConverterParams(u_noload=540.0, volts_per_watt=0.05)
        assert dc_bus_voltage(0.0, params) == 540.0
        assert dc_bus_voltage(2000.0, params) == pytest.approx(640.0)

    def test_guard_trips_above_threshold(self):
        state = ConverterState(u_star=701.0)
        tripped = overvoltage_guard(state, 700.0)
        assert tripped.trip_latched
        assert not tripped.connected

    def test_guard_holds_below_threshold(self):
        state = ConverterState(u_star=699.9)
        assert overvoltage_guard(state, 700.0) == state

    def test_threshold_itself_does_not_trip(self):
        state = ConverterState(u_star=700.0)
        assert not overvoltage_guard(state, 700.0).trip_latched

    def test_latch_survives_low_voltage(self):
        state = ConverterState(u_star=540.0, connected=False, trip_latched=True)
        after = overvoltage_guard(state, 700.0)
        assert after.trip_latched
        assert not after.connected

    def test_rejects_bad_threshold(self):
        with pytest.raises(DomainError):
            overvoltage_guard(ConverterState(), 0.0)


class TestProtectionCheck:
    LIMITS = ProtectionLimits(omega_max=25.0, torque_max=350.0, power_max=6000.0)

    def test_clean_sample(self):
        assert protection_check(Sample(20.0, 300.0, 5000.0), self.LIMITS) == []

    def test_each_bound_individually(self):
        assert protection_check(Sample(omega=25.1), self.LIMITS) == [Violation.OVER_SPEED]
        assert protection_check(Sample(t_applied=351.0), self.LIMITS) == [
            Violation.OVER_TORQUE
        ]
        assert protection_check(Sample(t_applied=-351.0), self.LIMITS) == [
            Violation.OVER_TORQUE
        ]
        assert protection_check(Sample(p_exported=6001.0), self.LIMITS) == [
            Violation.OVER_POWER
        ]

    def test_report_order_is_deterministic(self):
        sample = Sample(omega=30.0, t_applied=-400.0, p_exported=7000.0)
        assert protection_check(sample, self.LIMITS) == [
            Violation.OVER_SPEED,
            Violation.OVER_TORQUE,
            Violation.OVER_POWER,
        ]

    def test_limits_are_inclusive(self):
        # sitting exactly on a bound is still legal
        sample = Sample(omega=25.0, t_applied=350.0, p_exported=6000.0)
        assert protection_check(sample, self.LIMITS) == []

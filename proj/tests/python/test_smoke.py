"""End-to-end smoke tests for the python module."""

import math
import os
import pathlib

import pytest

import iosim

DATA_DIR = pathlib.Path(os.environ.get("IOSIM_DATA_DIR", "data"))

MINIMAL = """
[scenario]
frequency_hz = 3.6e9
[ios]
rows = 3
cols = 3
dx = 0.0416
dy = 0.0416
[antenna]
position = 0.866 0.0 0.5
gain = 1
pattern_exponent = 0
[user]
position = 0.5 0.0 -0.866
gain = 1
pattern_exponent = 0
"""


@pytest.fixture(scope="module")
def scenario():
    return iosim.parse_scenario(MINIMAL)


def test_default_table_values():
    table = iosim.ElementResponseTable.builtin_default()
    assert table.interpolate(iosim.ElementState.ON, iosim.InteractionMode.REFLECT, 0.0).psi_deg == -146.0
    assert table.interpolate(iosim.ElementState.OFF, iosim.InteractionMode.REFRACT, 20.0).psi_deg == -32.0
    # even symmetry
    assert table.interpolate(iosim.ElementState.ON, iosim.InteractionMode.REFLECT, -10.0).psi_deg == -135.0
    gamma = iosim.lookup_gamma(table, iosim.ElementState.ON, iosim.InteractionMode.REFLECT, 0.0)
    assert math.isclose(abs(gamma), 1.0)
    assert math.isclose(math.degrees(math.atan2(gamma.imag, gamma.real)), -146.0)


def test_geometry_helpers():
    grid = iosim.IosGrid(3, 3, 0.04, 0.04)
    p = iosim.element_position(grid, 8)
    assert math.isclose(p.x, 0.04) and math.isclose(p.y, -0.04)
    ray = iosim.angles_to(grid, 4, iosim.Vec3(0.0, 1.0, -1.0))
    assert ray.side == iosim.Side.REFRACTION
    assert math.isclose(ray.angle.elevation_deg, 45.0)


def test_scenario_and_reciprocity(scenario):
    assert scenario.element_count == 9
    config = iosim.random_configuration(7, scenario.element_count)
    report = iosim.check_channel_reciprocity(scenario, config)
    assert report.passed
    assert report.max_rel_err <= 1e-10
    h_down = iosim.effective_channel(scenario, config, 0, 0, iosim.Direction.DOWNLINK)
    h_up = iosim.effective_channel(scenario, config, 0, 0, iosim.Direction.UPLINK)
    assert abs(h_down - h_up) <= 1e-10 * abs(h_down)


def test_beamforming_round_trip(scenario):
    incident = iosim.SideAngle(60.0, 0.0, iosim.Side.REFLECTION)
    target = iosim.SideAngle(30.0, 0.0, iosim.Side.REFRACTION)
    config = iosim.configure_surface(scenario, incident, target, iosim.PhaseModel.ANGLE_AWARE)
    assert len(config) == 9

    grid = iosim.SweepGrid(theta_step=1.0)
    sweep = iosim.far_field_pattern(scenario, config, incident, iosim.InteractionMode.REFRACT, grid)
    beam = iosim.main_beam(sweep)
    assert 0.0 <= beam.main_beam.elevation_deg < 90.0

    report = iosim.beam_reciprocity_experiment(
        scenario, incident, iosim.InteractionMode.REFRACT, grid, target=target
    )
    assert not report.reciprocal
    assert report.beam2.main_beam.elevation_deg < 59.0


def test_model_comparison(scenario):
    incident = iosim.SideAngle(15.0, 0.0, iosim.Side.REFLECTION)
    target = iosim.SideAngle(32.0, 0.0, iosim.Side.REFRACTION)
    report = iosim.compare_beamforming_models(scenario, incident, target, iosim.SweepGrid())
    assert report.gain_loss_db >= 0.0
    assert report.angle_aware.power_at_target_db >= report.ideal.power_at_target_db


def test_bundled_scenarios_load():
    if not DATA_DIR.exists():
        pytest.skip("data directory not available")
    scn = iosim.load_scenario(DATA_DIR / "demo_small.cfg")
    assert scn.element_count == 9
    assert scn.hash() == iosim.scenario_hash(scn)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        iosim.parse_scenario("[scenario]\nfrequency_hz = nope\n")
    with pytest.raises(OSError):
        iosim.load_scenario("/nonexistent/file.cfg")
    with pytest.raises(ValueError):
        iosim.SphericalAngle(95.0, 0.0)

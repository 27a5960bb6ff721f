import math

import numpy as np
import pytest

from risplan.ris import (ALLOWED_ELEMENT_COUNTS, RisConfig, RisGainParams,
                         alignment_factor, cascaded_gain, isac_weights,
                         reflection_gain, validate_ris)
from risplan.scenario import DeploymentArea, Point2D, ValidationError


def surface(x=50.0, y=50.0, theta=0.0, n=512, alpha=0.5):
    return RisConfig(Point2D(x, y), theta, n, alpha)


def test_alignment_examples():
    assert alignment_factor(surface(theta=0.0), Point2D(60, 50)) == 1.0
    assert alignment_factor(surface(theta=0.0), Point2D(50, 60)) == pytest.approx(0.0, abs=1e-15)
    assert alignment_factor(surface(theta=0.0), Point2D(50 + math.cos(math.pi / 3),
                                                        50 + math.sin(math.pi / 3))) \
        == pytest.approx(0.5)


def test_alignment_clips_behind_surface():
    assert alignment_factor(surface(theta=0.0), Point2D(40, 50)) == 0.0


def test_alignment_coincident_node_rejected():
    with pytest.raises(ValueError, match="coincident"):
        alignment_factor(surface(), Point2D(50, 50))


def test_alignment_invariant_under_scene_rotation():
    rng = np.random.default_rng(21)
    for _ in range(100):
        theta, phi = rng.uniform(-math.pi, math.pi, 2)
        node = Point2D(*rng.uniform(-50, 50, 2))
        base = alignment_factor(surface(0.0, 0.0, theta), node)
        c, s = math.cos(phi), math.sin(phi)
        rotated_node = Point2D(c * node.x - s * node.y, s * node.x + c * node.y)
        rotated = alignment_factor(surface(0.0, 0.0, theta + phi), rotated_node)
        assert rotated == pytest.approx(base, abs=1e-12)


def test_reflection_gain_examples():
    params = RisGainParams(element_efficiency=1.0, orientation_exponent=3.7)
    assert reflection_gain(512, params, 1.0, 1.0) == pytest.approx(512.0)
    assert reflection_gain(512, params, 0.0, 1.0) == 0.0
    params = RisGainParams(element_efficiency=0.8, orientation_exponent=2.0)
    assert reflection_gain(512, params, 0.5, 0.5) == pytest.approx(25.6)


def test_reflection_gain_monotone_in_everything():
    base = reflection_gain(128, RisGainParams(0.7, 2.0), 0.6, 0.5)
    assert reflection_gain(256, RisGainParams(0.7, 2.0), 0.6, 0.5) >= base
    assert reflection_gain(128, RisGainParams(0.9, 2.0), 0.6, 0.5) >= base
    assert reflection_gain(128, RisGainParams(0.7, 2.0), 0.8, 0.5) >= base
    assert reflection_gain(128, RisGainParams(0.7, 2.0), 0.6, 0.7) >= base


def test_reflection_gain_rejects_out_of_range_alignment():
    with pytest.raises(ValueError):
        reflection_gain(64, RisGainParams(), 1.2, 0.5)


def test_isac_weights():
    assert isac_weights(0.0) == (0.0, 1.0)
    assert isac_weights(1.0) == (1.0, 0.0)
    assert isac_weights(0.95) == (0.95, pytest.approx(0.05))
    with pytest.raises(ValueError):
        isac_weights(1.01)


def test_cascaded_gain_examples():
    assert cascaded_gain(0.3 + 0.1j, 0.2 - 0.4j, 25.6, 0.0) == 0.0
    h_sr, h_rx = 0.3 + 0.1j, 0.2 - 0.4j
    assert cascaded_gain(h_sr, h_rx, 1.0, 1.0) == h_sr * h_rx
    value = cascaded_gain(np.exp(0.3j), np.exp(-1.1j), 25.6, 0.5)
    assert abs(value) == pytest.approx(2.5298221281347035)


def test_cascaded_gain_linear_in_weight_and_sqrt_gain():
    h_sr, h_rx = 0.7 - 0.2j, -0.1 + 0.9j
    one = abs(cascaded_gain(h_sr, h_rx, 4.0, 0.25))
    assert abs(cascaded_gain(h_sr, h_rx, 4.0, 0.5)) == pytest.approx(2 * one)
    assert abs(cascaded_gain(h_sr, h_rx, 16.0, 0.25)) == pytest.approx(2 * one)


def test_cascaded_gain_rejects_bad_inputs():
    with pytest.raises(ValueError):
        cascaded_gain(1.0, 1.0, 1.0, 1.5)
    with pytest.raises(ValueError):
        cascaded_gain(1.0, 1.0, -1.0, 0.5)


def test_validate_ris():
    area = DeploymentArea(0, 100, 0, 100)
    validate_ris(surface(), area)
    with pytest.raises(ValidationError, match=r"RisConfig\.position"):
        validate_ris(surface(x=150.0), area)
    with pytest.raises(ValidationError, match=r"RisConfig\.num_elements"):
        validate_ris(surface(n=100), area)
    with pytest.raises(ValidationError, match=r"RisConfig\.alpha"):
        validate_ris(surface(alpha=-0.1), area)
    assert set(ALLOWED_ELEMENT_COUNTS) == {64, 128, 256, 512}

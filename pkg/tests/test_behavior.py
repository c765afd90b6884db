import json
import math
import random
from pathlib import Path

import pytest

from craftpipe.behavior import (
    MotionDescriptor,
    RawScript,
    compile_to_platform_script,
    simulate,
    validate_descriptor,
)
from craftpipe.errors import InvariantError, SchemaError, UnsupportedPrimitive
from craftpipe.mathutil import quat_norm, rotations_equivalent
from craftpipe.platform_gateway import cluster_like_templates

GOLDEN_DIR = Path(__file__).parent / "golden"


def descriptor_json(primitives, duration="loop", version=1):
    return json.dumps(
        {"version": version, "duration_s": duration, "primitives": primitives}
    )


# --- validate_descriptor -----------------------------------------------------


def test_validate_rotate_example():
    raw = '{"primitives":[{"rotate":{"axis":[0,1,0],"deg_per_s":90}}],"duration_s":"loop","version":1}'
    descriptor = validate_descriptor(raw)
    assert isinstance(descriptor, MotionDescriptor)
    assert len(descriptor.primitives) == 1
    assert descriptor.primitives[0].deg_per_s == 90.0
    assert descriptor.duration_s == "loop"


def test_validate_axis_far_from_unit_rejected():
    raw = descriptor_json([{"rotate": {"axis": [0, 2, 0], "deg_per_s": 10}}])
    with pytest.raises(InvariantError):
        validate_descriptor(raw)


def test_validate_axis_near_unit_renormalized():
    raw = descriptor_json(
        [{"rotate": {"axis": [0.0, 1.0005, 0.0], "deg_per_s": 10}}]
    )
    descriptor = validate_descriptor(raw)
    axis = descriptor.primitives[0].axis
    assert math.sqrt(axis.x**2 + axis.y**2 + axis.z**2) == pytest.approx(1.0, abs=1e-12)


def test_validate_empty_primitives_rejected():
    with pytest.raises(SchemaError):
        validate_descriptor(descriptor_json([]))


def test_validate_schema_error_paths():
    with pytest.raises(SchemaError) as err:
        validate_descriptor(descriptor_json([{"rotate": {"axis": "up"}}]))
    assert "primitives[0].rotate.axis" in str(err.value)

    with pytest.raises(SchemaError):
        validate_descriptor("{}")
    with pytest.raises(SchemaError):
        validate_descriptor("not json")
    with pytest.raises(SchemaError):
        validate_descriptor(descriptor_json([{"teleport": {}}]))
    with pytest.raises(SchemaError):
        validate_descriptor(
            descriptor_json(
                [{"rotate": {"axis": [0, 1, 0], "deg_per_s": 10}}] * 17
            )
        )


def test_validate_nonpositive_period_rejected():
    raw = descriptor_json(
        [{"oscillate": {"axis": [0, 1, 0], "amplitude_m": 0.5, "period_s": 0}}]
    )
    with pytest.raises(InvariantError):
        validate_descriptor(raw)


def test_validate_raw_passthrough():
    raw = json.dumps({"version": 1, "kind": "raw", "script": "spin(1)"})
    descriptor = validate_descriptor(raw)
    assert isinstance(descriptor, RawScript)
    assert descriptor.text == "spin(1)"


# --- simulate -------------------------------------------------------------------


def test_translate_linear_motion():
    descriptor = validate_descriptor(
        descriptor_json([{"translate": {"velocity": [1, 0, 0]}}])
    )
    trajectory = simulate(descriptor, 0.1, 10)
    t, pose = trajectory.samples[-1]
    assert t == pytest.approx(1.0)
    assert pose.translation.as_tuple() == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)


def test_rotate_full_turn_is_identity():
    descriptor = validate_descriptor(
        descriptor_json([{"rotate": {"axis": [0, 1, 0], "deg_per_s": 90}}])
    )
    trajectory = simulate(descriptor, 0.1, 40)  # dt capped at 0.1: 40 steps = 4 s
    _, pose = trajectory.samples[-1]
    assert rotations_equivalent(
        pose.rotation.as_tuple(), (0.0, 0.0, 0.0, 1.0), tol=1e-6
    )


def test_oscillate_quarter_period_peak():
    # independent evaluation: a * sin(2*pi*t/T)
    a, period, t = 0.5, 2.0, 0.5
    expected = a * math.sin(2.0 * math.pi * t / period)
    descriptor = validate_descriptor(
        descriptor_json(
            [{"oscillate": {"axis": [0, 1, 0], "amplitude_m": a, "period_s": period}}]
        )
    )
    trajectory = simulate(descriptor, 0.1, 5)
    t_got, pose = trajectory.samples[-1]
    assert t_got == pytest.approx(t)
    assert pose.translation.y == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.5)


def test_simulation_determinism_bit_identical():
    descriptor = validate_descriptor(
        descriptor_json(
            [
                {"translate": {"velocity": [0.3, 0, -0.1]}},
                {"rotate": {"axis": [0, 1, 0], "deg_per_s": 33.0}},
                {"oscillate": {"axis": [1, 0, 0], "amplitude_m": 0.7, "period_s": 1.3}},
                {
                    "orbit": {
                        "center": [0, 1, 0],
                        "axis": [0, 0, 1],
                        "radius_m": 2.0,
                        "deg_per_s": 77.0,
                    }
                },
            ]
        )
    )
    a = simulate(descriptor, 0.05, 600)
    b = simulate(descriptor, 0.05, 600)
    assert a == b  # dataclass equality over exact floats


def test_rotation_norms_stay_unit():
    descriptor = validate_descriptor(
        descriptor_json(
            [
                {"rotate": {"axis": [0, 1, 0], "deg_per_s": 123.0}},
                {"rotate": {"axis": [1, 0, 0], "deg_per_s": -45.0}},
            ]
        )
    )
    trajectory = simulate(descriptor, 0.07, 1000)
    for _, pose in trajectory.samples:
        assert abs(quat_norm(pose.rotation.as_tuple()) - 1.0) <= 1e-9


def test_oscillate_periodicity():
    period = 1.6
    descriptor = validate_descriptor(
        descriptor_json(
            [
                {
                    "oscillate": {
                        "axis": [0, 1, 0],
                        "amplitude_m": 0.4,
                        "period_s": period,
                    }
                }
            ]
        )
    )
    dt = 0.08  # period = 20 * dt exactly
    trajectory = simulate(descriptor, dt, 200)
    samples = trajectory.samples
    for k in range(len(samples) - 20):
        y0 = samples[k][1].translation.y
        y1 = samples[k + 20][1].translation.y
        assert abs(y1 - y0) <= 1e-9


def test_translate_exact_linearity():
    descriptor = validate_descriptor(
        descriptor_json([{"translate": {"velocity": [0.37, -1.2, 5.5]}}])
    )
    trajectory = simulate(descriptor, 0.05, 400)
    samples = trajectory.samples
    for k in range(len(samples) // 2):
        single = samples[k][1].translation
        double = samples[2 * k][1].translation
        assert double.x == 2 * single.x
        assert double.y == 2 * single.y
        assert double.z == 2 * single.z


def test_bounded_primitives_stay_bounded():
    amplitude, radius = 0.5, 2.0
    descriptor = validate_descriptor(
        descriptor_json(
            [
                {
                    "oscillate": {
                        "axis": [0, 1, 0],
                        "amplitude_m": amplitude,
                        "period_s": 0.9,
                    }
                }
            ]
        )
    )
    for _, pose in simulate(descriptor, 0.03, 500).samples:
        assert abs(pose.translation.y) <= amplitude + 1e-9

    orbit = validate_descriptor(
        descriptor_json(
            [
                {
                    "orbit": {
                        "center": [1.0, 2.0, 3.0],
                        "axis": [0, 1, 0],
                        "radius_m": radius,
                        "deg_per_s": 50.0,
                    }
                }
            ]
        )
    )
    for _, pose in simulate(orbit, 0.03, 500).samples:
        p = pose.translation
        dist = math.sqrt((p.x - 1.0) ** 2 + (p.y - 2.0) ** 2 + (p.z - 3.0) ** 2)
        assert dist <= radius + 1e-9


def test_simulate_preconditions():
    descriptor = validate_descriptor(
        descriptor_json([{"translate": {"velocity": [1, 0, 0]}}])
    )
    with pytest.raises(ValueError):
        simulate(descriptor, 0.2, 10)  # dt too large
    with pytest.raises(ValueError):
        simulate(descriptor, 0.05, 200_000)  # too many steps


def test_trajectory_times_strictly_increasing():
    descriptor = validate_descriptor(
        descriptor_json([{"translate": {"velocity": [0, 0, 1]}}])
    )
    samples = simulate(descriptor, 0.05, 100).samples
    times = [t for t, _ in samples]
    assert all(b > a for a, b in zip(times, times[1:]))


# --- compile_to_platform_script ------------------------------------------------


def test_compile_rotate_only_contains_skeleton_and_rate():
    descriptor = validate_descriptor(
        descriptor_json([{"rotate": {"axis": [0, 1, 0], "deg_per_s": 90}}])
    )
    text = compile_to_platform_script(descriptor, cluster_like_templates())
    assert "item.onUpdate" in text  # update-loop skeleton
    assert "90" in text
    assert "Quaternion.fromAxisAngle" in text


def test_compile_unsupported_primitive():
    from craftpipe.behavior import ScriptTemplateSet

    limited = ScriptTemplateSet(
        name="limited",
        skeleton="${duration_guard}${body}",
        primitive_templates={"translate": "t(${vx},${vy},${vz})\n", "rotate": "r\n"},
    )
    descriptor = validate_descriptor(
        descriptor_json(
            [
                {
                    "orbit": {
                        "center": [0, 0, 0],
                        "axis": [0, 1, 0],
                        "radius_m": 1.0,
                        "deg_per_s": 10.0,
                    }
                }
            ]
        )
    )
    with pytest.raises(UnsupportedPrimitive):
        compile_to_platform_script(descriptor, limited)


def test_compile_deterministic():
    descriptor = validate_descriptor(
        descriptor_json(
            [
                {"translate": {"velocity": [0, 0, 0.6]}},
                {"oscillate": {"axis": [0, 1, 0], "amplitude_m": 0.2, "period_s": 3}},
            ],
            duration=12.5,
        )
    )
    templates = cluster_like_templates()
    assert compile_to_platform_script(descriptor, templates) == (
        compile_to_platform_script(descriptor, templates)
    )


def test_compile_raw_script_verbatim():
    raw = RawScript("custom.code(42)\n")
    assert compile_to_platform_script(raw, cluster_like_templates()) == raw.text


def test_compile_matches_golden_file():
    descriptor = validate_descriptor(
        descriptor_json(
            [
                {"rotate": {"axis": [0, 1, 0], "deg_per_s": 90}},
                {"translate": {"velocity": [0.0, 0.0, 0.6]}},
            ],
            duration=8.0,
        )
    )
    text = compile_to_platform_script(descriptor, cluster_like_templates())
    golden = (GOLDEN_DIR / "cluster_like_rotate_translate.txt").read_text("utf-8")
    assert text == golden


# --- descriptor round-trip -------------------------------------------------------


def test_descriptor_json_roundtrip():
    rng = random.Random(31337)
    for _ in range(50):
        primitives = []
        for _ in range(rng.randint(1, 4)):
            kind = rng.choice(["translate", "rotate", "oscillate", "orbit"])
            if kind == "translate":
                primitives.append(
                    {"translate": {"velocity": [rng.uniform(-2, 2) for _ in range(3)]}}
                )
            elif kind == "rotate":
                primitives.append(
                    {"rotate": {"axis": [0, 1, 0], "deg_per_s": rng.uniform(-360, 360)}}
                )
            elif kind == "oscillate":
                primitives.append(
                    {
                        "oscillate": {
                            "axis": [1, 0, 0],
                            "amplitude_m": rng.uniform(0.01, 3),
                            "period_s": rng.uniform(0.1, 10),
                        }
                    }
                )
            else:
                primitives.append(
                    {
                        "orbit": {
                            "center": [rng.uniform(-2, 2) for _ in range(3)],
                            "axis": [0, 0, 1],
                            "radius_m": rng.uniform(0.1, 5),
                            "deg_per_s": rng.uniform(-180, 180),
                        }
                    }
                )
        duration = rng.choice(["loop", rng.uniform(0.5, 60.0)])
        descriptor = validate_descriptor(descriptor_json(primitives, duration))
        again = validate_descriptor(json.dumps(descriptor.to_json_obj()))
        assert again == descriptor

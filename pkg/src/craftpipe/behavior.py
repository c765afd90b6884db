"""Declarative object behaviors: validation, simulation, and script output.

A behavior is a JSON motion descriptor (schema below) rather than opaque
platform code, which gives the pipeline a deterministic checkpoint: the
descriptor is schema-validated, simulated in closed form for preview, and
only then rendered to platform script text. An opaque-script escape hatch
(`kind: "raw"`) skips simulation and is embedded verbatim.

Descriptor schema (embedded in GLBs under the "VENDOR_behavior" extension):

    {
      "version": 1,
      "duration_s": 4.0 | "loop",
      "primitives": [                      # 1..16 entries, applied together
        {"translate": {"velocity": [x, y, z]}},              # m/s
        {"rotate":    {"axis": [x, y, z], "deg_per_s": r}},
        {"oscillate": {"axis": [x, y, z], "amplitude_m": a, "period_s": p}},
        {"orbit":     {"center": [x, y, z], "axis": [x, y, z],
                       "radius_m": r, "deg_per_s": s}}
      ]
    }

Conventions (fixed, since no upstream convention exists): oscillation is
a * sin(2*pi*t/period) with phase 0 at t=0; translations sum; rotations
compose in list order (earlier primitives apply first); orbit translates
along a circle of exactly `radius_m` about `center` and does not spin the
object.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from string import Template

from .asset_core.types import Rotation, Transform, Vec3
from .errors import InvariantError, SchemaError, UnsupportedPrimitive
from .mathutil import quat_from_axis_angle, quat_mul, quat_normalize

BEHAVIOR_EXTENSION_NAME = "VENDOR_behavior"

MAX_PRIMITIVES = 16
AXIS_UNIT_TOLERANCE = 1e-3


@dataclass(frozen=True)
class Translate:
    velocity: Vec3

    kind = "translate"

    def params_json(self):
        return {"velocity": self.velocity.as_list()}


@dataclass(frozen=True)
class Rotate:
    axis: Vec3
    deg_per_s: float

    kind = "rotate"

    def params_json(self):
        return {"axis": self.axis.as_list(), "deg_per_s": self.deg_per_s}


@dataclass(frozen=True)
class Oscillate:
    axis: Vec3
    amplitude_m: float
    period_s: float

    kind = "oscillate"

    def params_json(self):
        return {
            "axis": self.axis.as_list(),
            "amplitude_m": self.amplitude_m,
            "period_s": self.period_s,
        }


@dataclass(frozen=True)
class Orbit:
    center: Vec3
    axis: Vec3
    radius_m: float
    deg_per_s: float

    kind = "orbit"

    def params_json(self):
        return {
            "center": self.center.as_list(),
            "axis": self.axis.as_list(),
            "radius_m": self.radius_m,
            "deg_per_s": self.deg_per_s,
        }


@dataclass(frozen=True)
class MotionDescriptor:
    primitives: tuple
    duration_s: object = "loop"  # positive float or "loop"
    version: int = 1

    def to_json_obj(self) -> dict:
        return {
            "version": self.version,
            "duration_s": self.duration_s,
            "primitives": [{p.kind: p.params_json()} for p in self.primitives],
        }


@dataclass(frozen=True)
class RawScript:
    """Opaque platform script text; skips simulation, embedded verbatim."""

    text: str

    def to_json_obj(self) -> dict:
        return {"version": 1, "kind": "raw", "script": self.text}


@dataclass(frozen=True)
class Trajectory:
    """Closed-form motion samples: (t_seconds, Transform), t strictly increasing."""

    samples: tuple

    def to_json_obj(self) -> list:
        return [
            {
                "t": t,
                "translation": tr.translation.as_list(),
                "rotation": tr.rotation.as_list(),
            }
            for t, tr in self.samples
        ]


def _number(value, path, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError("expected a number", path)
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError("expected a finite number", path)
    if positive and value <= 0:
        raise InvariantError(f"{path}: must be > 0, got {value}")
    return value


def _vec3(value, path) -> Vec3:
    if not isinstance(value, list) or len(value) != 3:
        raise SchemaError("expected [x, y, z]", path)
    return Vec3(*(_number(v, f"{path}[{i}]") for i, v in enumerate(value)))


def _unit_axis(value, path) -> Vec3:
    v = _vec3(value, path)
    norm = math.sqrt(v.x * v.x + v.y * v.y + v.z * v.z)
    if abs(norm - 1.0) > AXIS_UNIT_TOLERANCE:
        raise InvariantError(f"{path}: axis norm {norm} not within 1e-3 of unit")
    return Vec3(v.x / norm, v.y / norm, v.z / norm)


_PRIMITIVE_PARSERS = {}


def _parses(name):
    def register(fn):
        _PRIMITIVE_PARSERS[name] = fn
        return fn

    return register


@_parses("translate")
def _parse_translate(params, path):
    return Translate(_vec3(params.get("velocity"), f"{path}.velocity"))


@_parses("rotate")
def _parse_rotate(params, path):
    return Rotate(
        _unit_axis(params.get("axis"), f"{path}.axis"),
        _number(params.get("deg_per_s"), f"{path}.deg_per_s"),
    )


@_parses("oscillate")
def _parse_oscillate(params, path):
    return Oscillate(
        _unit_axis(params.get("axis"), f"{path}.axis"),
        _number(params.get("amplitude_m"), f"{path}.amplitude_m", positive=True),
        _number(params.get("period_s"), f"{path}.period_s", positive=True),
    )


@_parses("orbit")
def _parse_orbit(params, path):
    return Orbit(
        _vec3(params.get("center"), f"{path}.center"),
        _unit_axis(params.get("axis"), f"{path}.axis"),
        _number(params.get("radius_m"), f"{path}.radius_m", positive=True),
        _number(params.get("deg_per_s"), f"{path}.deg_per_s"),
    )


def validate_descriptor(raw: str):
    """Parse and check descriptor JSON text.

    Returns a MotionDescriptor (axes renormalized when within 1e-3 of unit)
    or a RawScript for `kind: "raw"` payloads. Raises SchemaError with the
    offending field path, or InvariantError for out-of-range numerics.
    """
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("descriptor must be a JSON object")

    if obj.get("kind") == "raw":
        script = obj.get("script")
        if not isinstance(script, str) or not script:
            raise SchemaError("expected non-empty script text", "script")
        return RawScript(script)

    version = obj.get("version")
    if not isinstance(version, int) or isinstance(version, bool) or version < 1:
        raise SchemaError("expected a positive integer", "version")

    duration = obj.get("duration_s")
    if duration != "loop":
        duration = _number(duration, "duration_s", positive=True)

    prims = obj.get("primitives")
    if not isinstance(prims, list) or not prims:
        raise SchemaError("expected a non-empty list", "primitives")
    if len(prims) > MAX_PRIMITIVES:
        raise SchemaError(f"at most {MAX_PRIMITIVES} primitives", "primitives")

    parsed = []
    for i, entry in enumerate(prims):
        path = f"primitives[{i}]"
        if not isinstance(entry, dict) or len(entry) != 1:
            raise SchemaError("expected an object with exactly one key", path)
        (name, params), = entry.items()
        parser = _PRIMITIVE_PARSERS.get(name)
        if parser is None:
            raise SchemaError(f"unknown primitive {name!r}", path)
        if not isinstance(params, dict):
            raise SchemaError("expected a parameter object", f"{path}.{name}")
        parsed.append(parser(params, f"{path}.{name}"))

    return MotionDescriptor(tuple(parsed), duration, version)


# --- closed-form evaluation ----------------------------------------------------


def _orbit_basis(axis: Vec3):
    ax = (axis.x, axis.y, axis.z)
    up = (0.0, 1.0, 0.0) if abs(ax[1]) < 0.999 else (1.0, 0.0, 0.0)
    ux = ax[1] * up[2] - ax[2] * up[1]
    uy = ax[2] * up[0] - ax[0] * up[2]
    uz = ax[0] * up[1] - ax[1] * up[0]
    n = math.sqrt(ux * ux + uy * uy + uz * uz)
    u = (ux / n, uy / n, uz / n)
    w = (
        ax[1] * u[2] - ax[2] * u[1],
        ax[2] * u[0] - ax[0] * u[2],
        ax[0] * u[1] - ax[1] * u[0],
    )
    return u, w


def _evaluate(primitives, t: float):
    """Pose contributed by all primitives at time t (translation, rotation)."""
    tx = ty = tz = 0.0
    rot = (0.0, 0.0, 0.0, 1.0)
    for p in primitives:
        if isinstance(p, Translate):
            tx += p.velocity.x * t
            ty += p.velocity.y * t
            tz += p.velocity.z * t
        elif isinstance(p, Rotate):
            angle = math.radians(p.deg_per_s) * t
            rot = quat_mul(quat_from_axis_angle(p.axis.as_tuple(), angle), rot)
        elif isinstance(p, Oscillate):
            offset = p.amplitude_m * math.sin(2.0 * math.pi * t / p.period_s)
            tx += p.axis.x * offset
            ty += p.axis.y * offset
            tz += p.axis.z * offset
        elif isinstance(p, Orbit):
            u, w = _orbit_basis(p.axis)
            theta = math.radians(p.deg_per_s) * t
            c, s = math.cos(theta), math.sin(theta)
            tx += p.center.x + p.radius_m * (c * u[0] + s * w[0])
            ty += p.center.y + p.radius_m * (c * u[1] + s * w[1])
            tz += p.center.z + p.radius_m * (c * u[2] + s * w[2])
        else:
            raise TypeError(f"unknown primitive {p!r}")
    return (tx, ty, tz), quat_normalize(rot)


def simulate(descriptor: MotionDescriptor, dt_s: float, steps: int) -> Trajectory:
    """Sample the descriptor at t = 0, dt, ..., steps*dt in closed form.

    Evaluation at each sample time is exact (no integrator), so identical
    inputs yield bit-identical trajectories.
    """
    if not isinstance(descriptor, MotionDescriptor):
        raise TypeError("simulate requires a validated MotionDescriptor")
    if not 0.0 < dt_s <= 0.1:
        raise ValueError(f"dt_s must be in (0, 0.1], got {dt_s}")
    if not 0 < steps <= 100_000:
        raise ValueError(f"steps must be in [1, 100000], got {steps}")

    samples = []
    for k in range(steps + 1):
        t = k * dt_s
        translation, rotation = _evaluate(descriptor.primitives, t)
        samples.append(
            (t, Transform(Vec3(*translation), Rotation(*rotation), Vec3.ones()))
        )
    return Trajectory(tuple(samples))


# --- platform script rendering --------------------------------------------------


@dataclass(frozen=True)
class ScriptTemplateSet:
    """Per-platform script dialect: an update-loop skeleton plus one body
    template per supported primitive kind. Templates use $name placeholders."""

    name: str
    skeleton: str
    primitive_templates: dict

    def supports(self, kind: str) -> bool:
        return kind in self.primitive_templates


def _fmt(value: float) -> str:
    return repr(float(value))


def _primitive_fields(p) -> dict:
    if isinstance(p, Translate):
        return {"vx": _fmt(p.velocity.x), "vy": _fmt(p.velocity.y), "vz": _fmt(p.velocity.z)}
    if isinstance(p, Rotate):
        return {
            "ax": _fmt(p.axis.x), "ay": _fmt(p.axis.y), "az": _fmt(p.axis.z),
            "deg_per_s": _fmt(p.deg_per_s),
        }
    if isinstance(p, Oscillate):
        return {
            "ax": _fmt(p.axis.x), "ay": _fmt(p.axis.y), "az": _fmt(p.axis.z),
            "amplitude": _fmt(p.amplitude_m), "period": _fmt(p.period_s),
        }
    if isinstance(p, Orbit):
        return {
            "cx": _fmt(p.center.x), "cy": _fmt(p.center.y), "cz": _fmt(p.center.z),
            "ax": _fmt(p.axis.x), "ay": _fmt(p.axis.y), "az": _fmt(p.axis.z),
            "radius": _fmt(p.radius_m), "deg_per_s": _fmt(p.deg_per_s),
        }
    raise TypeError(f"unknown primitive {p!r}")


def compile_to_platform_script(descriptor, templates: ScriptTemplateSet) -> str:
    """Render a descriptor through a platform's template set.

    Pure function of (descriptor, templates): identical inputs produce
    byte-identical text. RawScript payloads pass through verbatim.
    Raises UnsupportedPrimitive when the set lacks a needed template.
    """
    if isinstance(descriptor, RawScript):
        return descriptor.text

    bodies = []
    for p in descriptor.primitives:
        template = templates.primitive_templates.get(p.kind)
        if template is None:
            raise UnsupportedPrimitive(
                f"adapter {templates.name!r} has no template for {p.kind!r}"
            )
        bodies.append(Template(template).substitute(_primitive_fields(p)))

    duration_guard = (
        "" if descriptor.duration_s == "loop"
        else f"  if (elapsed > {_fmt(descriptor.duration_s)}) return;\n"
    )
    return Template(templates.skeleton).substitute(
        body="".join(bodies),
        duration_guard=duration_guard,
        duration=str(descriptor.duration_s),
    )

"""Problem instances: generation, validation and the JSON wire format."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .geometry import Point, as_point

SCHEMA = "relay-placer/1"
PRNG_ID = "numpy.PCG64/SeedSequence-v1"
DEFAULT_FIELD = (100.0, 100.0)
DEFAULT_R_SENSOR = 10.0
DEFAULT_R_RELAY = 20.0


@dataclass(frozen=True)
class Scenario:
    field_width: float
    field_height: float
    sensors: tuple[Point, ...]
    sink: Point
    r: float
    R: float
    meta: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "sensors", tuple(as_point(p) for p in self.sensors))
        object.__setattr__(self, "sink", as_point(self.sink))
        validate_scenario(self)

    @property
    def n(self) -> int:
        return len(self.sensors)

    def sensor_array(self) -> np.ndarray:
        return np.asarray(self.sensors, dtype=float).reshape(-1, 2)

    def subset(self, indices: Sequence[int]) -> "Scenario":
        """Same field and radii, keeping only the listed sensors (re-indexed 0..k-1)."""
        return Scenario(
            self.field_width,
            self.field_height,
            tuple(self.sensors[i] for i in indices),
            self.sink,
            self.r,
            self.R,
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": SCHEMA,
            "field": [self.field_width, self.field_height],
            "r": self.r,
            "R": self.R,
            "sink": [self.sink.x, self.sink.y],
            "sensors": [[p.x, p.y] for p in self.sensors],
        }
        if self.meta:
            out["meta"] = dict(self.meta)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Scenario":
        schema = data.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise InvalidArgumentError(f"unsupported schema {schema!r}")
        try:
            w, h = data["field"]
            return cls(
                float(w),
                float(h),
                tuple(as_point(p) for p in data["sensors"]),
                as_point(data["sink"]),
                float(data["r"]),
                float(data["R"]),
                meta=dict(data.get("meta", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"malformed scenario: {exc}") from exc


def validate_scenario(sc: Scenario) -> None:
    if not (sc.r > 0 and math.isfinite(sc.r)):
        raise InvalidArgumentError(f"r must be positive, got {sc.r}")
    if not sc.R >= 2 * sc.r:
        raise InvalidArgumentError(f"R must be >= 2r (R={sc.R}, r={sc.r})")
    if not (sc.field_width > 0 and sc.field_height > 0):
        raise InvalidArgumentError("field dimensions must be positive")
    for label, p in [("sink", sc.sink), *((f"sensor {i}", p) for i, p in enumerate(sc.sensors))]:
        if not (0 <= p.x <= sc.field_width and 0 <= p.y <= sc.field_height):
            raise InvalidArgumentError(f"{label} {tuple(p)} lies outside the field")


def generate_scenario(
    n: int,
    field: tuple[float, float] = DEFAULT_FIELD,
    r: float = DEFAULT_R_SENSOR,
    R: float = DEFAULT_R_RELAY,
    sink: Point | None = None,
    seed: int = 0,
) -> Scenario:
    """Draw ``n`` sensors i.i.d. uniform over the field.

    The sink defaults to the field center.
    """
    if n < 0:
        raise InvalidArgumentError("n must be >= 0")
    if not R >= 2 * r:
        raise InvalidArgumentError(f"R must be >= 2r (R={R}, r={r})")
    w, h = field
    if sink is None:
        sink = Point(w / 2, h / 2)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    xy = rng.random((n, 2)) * np.array([w, h])
    sensors = tuple(Point(float(x), float(y)) for x, y in xy)
    return Scenario(w, h, sensors, sink, r, R, meta={"prng": PRNG_ID, "seed": int(seed)})


def derive_seed(base_seed: int, n: int, trial: int) -> int:
    """64-bit trial seed: SeedSequence hash of (base_seed, n, trial)."""
    ss = np.random.SeedSequence([int(base_seed), int(n), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])

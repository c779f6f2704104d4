"""10-byte TP sensor frame.

Layout (big-endian)::

    0..3  sensor id
    4..5  pressure, units of 0.25 kPa (0..5600)
    6     temperature + 40 (0..165)
    7     flags: bit7 alert, bits3-0 status, bits6-4 reserved (zero)
    8     battery percent (0..100)
    9     checksum, sum of bytes 0..8 mod 256

Field widths are this package's own choice; the encoding is frozen by golden
vectors in the test-suite.
"""

from __future__ import annotations

import struct
from dataclasses import asdict, dataclass

from .errors import BadLengthError, ChecksumMismatchError, FieldOutOfRangeError

FRAME_LEN = 10
_BODY = struct.Struct(">IHBBB")
PRESSURE_MAX_KPA = 1400.0
TEMP_MIN, TEMP_MAX = -40, 125


@dataclass(frozen=True)
class SensorFrame:
    sensor_id: int
    pressure: float  # kPa
    temperature: int  # degC
    alert: bool = False
    battery: int = 100
    status: int = 0

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "SensorFrame":
        return cls(int(obj["sensor_id"]), float(obj["pressure"]), int(obj["temperature"]),
                   bool(obj["alert"]), int(obj["battery"]), int(obj["status"]))


def checksum(body: bytes) -> int:
    return sum(body) & 0xFF


def _validate(frame: SensorFrame) -> int:
    if not 0 <= frame.sensor_id <= 0xFFFFFFFF:
        raise FieldOutOfRangeError(f"sensor_id {frame.sensor_id} not a 32-bit id")
    quarters = frame.pressure * 4
    if not 0 <= frame.pressure <= PRESSURE_MAX_KPA or quarters != int(quarters):
        raise FieldOutOfRangeError(
            f"pressure {frame.pressure} kPa not in [0, 1400] at 0.25 kPa steps")
    if not TEMP_MIN <= frame.temperature <= TEMP_MAX:
        raise FieldOutOfRangeError(f"temperature {frame.temperature} outside [-40, 125]")
    if not 0 <= frame.battery <= 100:
        raise FieldOutOfRangeError(f"battery {frame.battery} outside 0..100")
    if not 0 <= frame.status <= 0x0F:
        raise FieldOutOfRangeError(f"status {frame.status} is not a 4-bit code")
    return int(quarters)


def encode(frame: SensorFrame) -> bytes:
    quarters = _validate(frame)
    flags = (0x80 if frame.alert else 0) | frame.status
    body = _BODY.pack(frame.sensor_id, quarters, frame.temperature + 40, flags, frame.battery)
    return body + bytes([checksum(body)])


def decode(data: bytes) -> SensorFrame:
    data = bytes(data)
    if len(data) != FRAME_LEN:
        raise BadLengthError(f"expected {FRAME_LEN} bytes, got {len(data)}")
    body, check = data[:-1], data[-1]
    if checksum(body) != check:
        raise ChecksumMismatchError(f"checksum 0x{check:02x} != 0x{checksum(body):02x}")
    sensor_id, quarters, temp, flags, battery = _BODY.unpack(body)
    if quarters > PRESSURE_MAX_KPA * 4:
        raise FieldOutOfRangeError(f"pressure field {quarters} exceeds 1400 kPa")
    if temp > TEMP_MAX + 40:
        raise FieldOutOfRangeError(f"temperature field {temp} exceeds 125 degC")
    if flags & 0x70:
        raise FieldOutOfRangeError(f"reserved flag bits set: 0x{flags:02x}")
    if battery > 100:
        raise FieldOutOfRangeError(f"battery {battery} exceeds 100%")
    return SensorFrame(sensor_id, quarters / 4, temp - 40, bool(flags & 0x80), battery, flags & 0x0F)

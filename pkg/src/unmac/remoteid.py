"""Binary codec for broadcast identification messages.

Fixed-layout little-endian records carrying the mandated identification
fields plus the optional extensions of the three candidate formats
(reported localization error, actual airframe size, movement direction).
Positions are local-plane ENU centimeters as int32 -- the simulator works
on a flat plane, so no geodesy is involved and every field round-trips
bit-exactly.

See docs/wire-format.md for the per-field offset tables.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

from .geometry import MessageFormat

_INT32_MIN, _INT32_MAX = -(2**31), 2**31 - 1
_UINT16_MAX = 2**16 - 1
_UINT32_MAX = 2**32 - 1

#: Exclusive upper bound of the heading field: 2*pi in units of 1e-4 rad.
HEADING_UNITS_PER_TURN = 62832

UAV_ID_LENGTH = 20

_BASE = struct.Struct("<B20siiiHBIiii")
_EXT_C1 = struct.Struct("<H")
_EXT_C2 = struct.Struct("<HH")
_EXT_C3 = struct.Struct("<HHH4s")

_FORMAT_TAGS: dict[MessageFormat, int] = {
    MessageFormat.STANDARD_REMOTE_ID: 0,
    MessageFormat.CANDIDATE_1: 1,
    MessageFormat.CANDIDATE_2: 2,
    MessageFormat.CANDIDATE_3: 3,
}
_TAG_FORMATS = {tag: fmt for fmt, tag in _FORMAT_TAGS.items()}

#: Formats that exist on the wire (the zero-error baseline does not).
WIRE_FORMATS = tuple(_FORMAT_TAGS)

_MESSAGE_LENGTHS: dict[MessageFormat, int] = {
    MessageFormat.STANDARD_REMOTE_ID: _BASE.size,
    MessageFormat.CANDIDATE_1: _BASE.size + _EXT_C1.size,
    MessageFormat.CANDIDATE_2: _BASE.size + _EXT_C2.size,
    MessageFormat.CANDIDATE_3: _BASE.size + _EXT_C3.size,
}

_HAS_AF = (MessageFormat.CANDIDATE_2, MessageFormat.CANDIDATE_3)
_HAS_LOC = (
    MessageFormat.CANDIDATE_1,
    MessageFormat.CANDIDATE_2,
    MessageFormat.CANDIDATE_3,
)
_HAS_HEADING = (MessageFormat.CANDIDATE_3,)


class ParseError(ValueError):
    """Structured decode failure: what went wrong and at which byte offset."""

    def __init__(self, offset: int, reason: str):
        super().__init__(f"at offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


def message_length(fmt: MessageFormat) -> int:
    """Encoded length in bytes; a pure function of the format tag."""
    try:
        return _MESSAGE_LENGTHS[fmt]
    except KeyError:
        raise ValueError(f"{fmt.value} has no wire representation") from None


def _check_int(name: str, value: int, lo: int, hi: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an int, got {value!r}")
    if not lo <= value <= hi:
        raise ValueError(f"{name} out of range [{lo}, {hi}]: {value}")


@dataclass(frozen=True)
class RemoteIdMessage:
    """One broadcast record, all quantities in fixed-point wire units.

    Extension fields must be present exactly when the format carries them:
    ``af_size_cm`` on Candidates 2-3, ``loc_error_cm`` on Candidates 1-3,
    ``heading_1e4rad`` (units of 1e-4 rad, in [0, 62832)) on Candidate 3.
    """

    format: MessageFormat
    uav_id: bytes
    east_cm: int
    north_cm: int
    altitude_cm: int
    speed_cms: int
    emergency: bool
    time_mark_ms: int
    cs_east_cm: int
    cs_north_cm: int
    cs_alt_cm: int
    af_size_cm: int | None = None
    loc_error_cm: int | None = None
    heading_1e4rad: int | None = None

    def __post_init__(self) -> None:
        if self.format not in _FORMAT_TAGS:
            raise ValueError(f"{self.format.value} has no wire representation")
        if not isinstance(self.uav_id, bytes) or len(self.uav_id) != UAV_ID_LENGTH:
            raise ValueError(f"uav_id must be exactly {UAV_ID_LENGTH} bytes")
        for name in ("east_cm", "north_cm", "altitude_cm", "cs_east_cm", "cs_north_cm", "cs_alt_cm"):
            _check_int(name, getattr(self, name), _INT32_MIN, _INT32_MAX)
        _check_int("speed_cms", self.speed_cms, 0, _UINT16_MAX)
        _check_int("time_mark_ms", self.time_mark_ms, 0, _UINT32_MAX)
        if not isinstance(self.emergency, bool):
            raise ValueError(f"emergency must be a bool, got {self.emergency!r}")

        for name, value, formats, hi in (
            ("af_size_cm", self.af_size_cm, _HAS_AF, _UINT16_MAX),
            ("loc_error_cm", self.loc_error_cm, _HAS_LOC, _UINT16_MAX),
            ("heading_1e4rad", self.heading_1e4rad, _HAS_HEADING, HEADING_UNITS_PER_TURN - 1),
        ):
            if self.format in formats:
                if value is None:
                    raise ValueError(f"{self.format.value} requires {name}")
                _check_int(name, value, 0, hi)
            elif value is not None:
                raise ValueError(f"{self.format.value} does not carry {name}")

    @property
    def heading_radians(self) -> float | None:
        """Movement direction in radians, if the format carries it."""
        if self.heading_1e4rad is None:
            return None
        return self.heading_1e4rad * 1e-4


def encode(msg: RemoteIdMessage) -> bytes:
    """Serialize a message to its fixed wire layout."""
    base = _BASE.pack(
        _FORMAT_TAGS[msg.format],
        msg.uav_id,
        msg.east_cm,
        msg.north_cm,
        msg.altitude_cm,
        msg.speed_cms,
        int(msg.emergency),
        msg.time_mark_ms,
        msg.cs_east_cm,
        msg.cs_north_cm,
        msg.cs_alt_cm,
    )
    if msg.format is MessageFormat.CANDIDATE_1:
        return base + _EXT_C1.pack(msg.loc_error_cm)
    if msg.format is MessageFormat.CANDIDATE_2:
        return base + _EXT_C2.pack(msg.af_size_cm, msg.loc_error_cm)
    if msg.format is MessageFormat.CANDIDATE_3:
        return base + _EXT_C3.pack(
            msg.af_size_cm, msg.loc_error_cm, msg.heading_1e4rad, b"\x00\x00\x00\x00"
        )
    return base


def decode(data: bytes) -> tuple[RemoteIdMessage, int]:
    """Parse one message from the front of ``data``.

    Returns the message and the number of bytes consumed; trailing bytes
    are left untouched. Never reads past the declared record length.

    Raises:
        ParseError: On a short buffer, unknown format tag, or any
            out-of-range field, naming the offending byte offset.
    """
    if len(data) < 1:
        raise ParseError(0, "empty buffer")
    tag = data[0]
    fmt = _TAG_FORMATS.get(tag)
    if fmt is None:
        raise ParseError(0, f"unknown format tag {tag}")
    need = _MESSAGE_LENGTHS[fmt]
    if len(data) < need:
        raise ParseError(len(data), f"short buffer: {fmt.value} needs {need} bytes")

    (
        _,
        uav_id,
        east,
        north,
        alt,
        speed,
        emergency,
        time_mark,
        cs_east,
        cs_north,
        cs_alt,
    ) = _BASE.unpack_from(data, 0)
    if emergency not in (0, 1):
        raise ParseError(35, f"emergency flag must be 0 or 1, got {emergency}")

    af_size = loc_error = heading = None
    if fmt is MessageFormat.CANDIDATE_1:
        (loc_error,) = _EXT_C1.unpack_from(data, _BASE.size)
    elif fmt is MessageFormat.CANDIDATE_2:
        af_size, loc_error = _EXT_C2.unpack_from(data, _BASE.size)
    elif fmt is MessageFormat.CANDIDATE_3:
        af_size, loc_error, heading, pad = _EXT_C3.unpack_from(data, _BASE.size)
        if heading >= HEADING_UNITS_PER_TURN:
            raise ParseError(
                _BASE.size + 4, f"heading {heading} exceeds one turn"
            )
        if pad != b"\x00\x00\x00\x00":
            raise ParseError(_BASE.size + 6, "reserved pad bytes must be zero")

    msg = RemoteIdMessage(
        format=fmt,
        uav_id=uav_id,
        east_cm=east,
        north_cm=north,
        altitude_cm=alt,
        speed_cms=speed,
        emergency=bool(emergency),
        time_mark_ms=time_mark,
        cs_east_cm=cs_east,
        cs_north_cm=cs_north,
        cs_alt_cm=cs_alt,
        af_size_cm=af_size,
        loc_error_cm=loc_error,
        heading_1e4rad=heading,
    )
    return msg, need


# ---------------------------------------------------------------------------
# Broadcast technology profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BroadcastProfile:
    """A wireless technology's range and broadcast interval.

    ``dt_com`` is the shortest supported interval; technologies with a
    configurable rate also state ``dt_com_max``.
    """

    technology: str
    range_m: float
    dt_com: float
    dt_com_max: float

    def __post_init__(self) -> None:
        if self.dt_com <= 0:
            raise ValueError(f"dt_com must be positive, got {self.dt_com}")
        if self.dt_com_max < self.dt_com:
            raise ValueError("dt_com_max must be >= dt_com")


BROADCAST_PROFILES: dict[str, BroadcastProfile] = {
    "bluetooth-le": BroadcastProfile("Bluetooth LE", 50.0, 0.010, 0.010),
    "bluetooth": BroadcastProfile("Bluetooth", 100.0, 0.010, 0.010),
    "lora": BroadcastProfile("LoRa", 10_000.0, 5.0, 5.0),
    "flarm": BroadcastProfile("FLARM", 10_000.0, 3.0, 3.0),
    "wifi-ssid": BroadcastProfile("Wi-Fi SSID", 1_000.0, 0.016, 0.016),
    "5g-nr-sidelink": BroadcastProfile("5G NR Sidelink", 1_000.0, 0.000125, 0.001),
}


def effective_interval(loc_dt: float, com_dt: float) -> float:
    """Staleness bound when localization and broadcasting run at different
    rates: the slower of the two dominates."""
    if loc_dt <= 0 or com_dt <= 0:
        raise ValueError(f"intervals must be positive, got ({loc_dt}, {com_dt})")
    return max(loc_dt, com_dt)


def heading_to_wire(heading_rad: float) -> int:
    """Quantize a heading in radians to wire units of 1e-4 rad in [0, 2*pi)."""
    wrapped = heading_rad % (2.0 * math.pi)
    units = int(round(wrapped / 1e-4))
    return units % HEADING_UNITS_PER_TURN

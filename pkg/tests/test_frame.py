import pytest
from hypothesis import given, strategies as st

from tpmsdelay.errors import BadLengthError, ChecksumMismatchError, FieldOutOfRangeError, FrameError
from tpmsdelay.frame import FRAME_LEN, SensorFrame, checksum, decode, encode

GOLDEN = [
    (SensorFrame(16, 250.0, 25, True, 90, 2), "0000001003e841825a18"),
    (SensorFrame(1, 0.0, -40, False, 0, 0), "00000001000000000001"),
    (SensorFrame(0xFFFFFFFF, 1400.0, 125, True, 100, 15), "ffffffff15e0a58f6489"),
]


@pytest.mark.parametrize("frame,hexstr", GOLDEN)
def test_golden_vectors(frame, hexstr):
    assert encode(frame).hex() == hexstr
    assert decode(bytes.fromhex(hexstr)) == frame


frames = st.builds(
    SensorFrame,
    sensor_id=st.integers(0, 0xFFFFFFFF),
    pressure=st.integers(0, 5600).map(lambda q: q / 4),
    temperature=st.integers(-40, 125),
    alert=st.booleans(),
    battery=st.integers(0, 100),
    status=st.integers(0, 15),
)


@given(frames)
def test_round_trip(frame):
    raw = encode(frame)
    assert len(raw) == FRAME_LEN and raw[-1] == checksum(raw[:-1])
    assert decode(raw) == frame
    assert SensorFrame.from_json(frame.to_json()) == frame


@given(frames, st.integers(0, FRAME_LEN - 1), st.integers(1, 255))
def test_single_byte_corruption_is_detected(frame, pos, delta):
    raw = bytearray(encode(frame))
    raw[pos] = (raw[pos] + delta) & 0xFF
    with pytest.raises(ChecksumMismatchError):
        decode(bytes(raw))


@pytest.mark.parametrize("length", [0, 9, 11])
def test_bad_length(length):
    with pytest.raises(BadLengthError):
        decode(bytes(length))


def _with_body(body):
    return bytes(body) + bytes([sum(body) & 0xFF])


@pytest.mark.parametrize("body", [
    [0, 0, 0, 1, 0x15, 0xE1, 0, 0, 0],   # pressure 5601 quarters
    [0, 0, 0, 1, 0, 0, 166, 0, 0],       # temperature 126
    [0, 0, 0, 1, 0, 0, 0, 0x10, 0],      # reserved flag bit
    [0, 0, 0, 1, 0, 0, 0, 0, 101],       # battery 101
])
def test_decode_field_out_of_range(body):
    with pytest.raises(FieldOutOfRangeError):
        decode(_with_body(body))


@pytest.mark.parametrize("kwargs", [
    dict(sensor_id=-1), dict(sensor_id=2**32), dict(pressure=1400.25), dict(pressure=-0.25),
    dict(pressure=100.1), dict(temperature=-41), dict(temperature=126), dict(battery=101),
    dict(status=16),
])
def test_encode_field_out_of_range(kwargs):
    base = dict(sensor_id=1, pressure=200.0, temperature=20)
    base.update(kwargs)
    with pytest.raises(FieldOutOfRangeError):
        encode(SensorFrame(**base))


def test_errors_share_a_base():
    assert issubclass(ChecksumMismatchError, FrameError) and issubclass(FrameError, ValueError)

"""VVOL volume file codec.

Layout::

    b"VVOL1\\n"                      6-byte magic
    <uint32 little-endian L>         header byte-length
    <L bytes of UTF-8 JSON>          dims, spacing, origin, dtype, order
    <payload>                        little-endian, one value per voxel, x fastest

``dtype`` is ``"u8"`` for binary volumes and ``"f32"`` for scalar volumes.
"""

import json
import logging
import struct
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from sdflab.core.exceptions import (
    BadMagicError,
    HeaderError,
    NonFiniteVolumeError,
    PayloadLengthError,
    TruncatedPayloadError,
    UnknownDtypeError,
    VolumeIOError,
)
from sdflab.core.grid import BinaryVolume, GridMeta, ScalarVolume, Volume

logger = logging.getLogger(__name__)

MAGIC = b"VVOL1\n"
ORDER = "x-fastest"

_DTYPES: dict[str, np.dtype] = {
    "u8": np.dtype("<u1"),
    "f32": np.dtype("<f4"),
}


def encode_header(meta: GridMeta, dtype: str) -> bytes:
    """Serialize the JSON header for a volume.

    Examples:
        >>> meta = GridMeta.of((1, 1, 1))
        >>> encode_header(meta, "u8")[:22]
        b'{"dims": [1, 1, 1], "s'
    """
    header = {
        "dims": list(meta.dims),
        "spacing": list(meta.spacing),
        "origin": list(meta.origin),
        "dtype": dtype,
        "order": ORDER,
    }
    return json.dumps(header).encode("utf-8")


def encode_volume(volume: Volume) -> bytes:
    """Encode a volume into the bytes of a VVOL file."""
    match volume:
        case BinaryVolume():
            dtype = "u8"
        case ScalarVolume():
            dtype = "f32"
            if not np.isfinite(volume.voxels).all():
                raise NonFiniteVolumeError("Refusing to write non-finite scalar volume")
        case _:
            raise TypeError(f"Unsupported volume type: {type(volume)}")

    header = encode_header(volume.meta, dtype)
    payload = volume.linear().astype(_DTYPES[dtype]).tobytes()
    return MAGIC + struct.pack("<I", len(header)) + header + payload


def write_volume(path: str | Path, volume: Volume) -> None:
    """Write a volume to ``path`` in VVOL format.

    The payload is validated before the file is opened, so a non-finite
    scalar volume leaves no bytes behind.

    Raises:
        NonFiniteVolumeError: If a scalar value is NaN or infinite
        VolumeIOError: If the file cannot be written
    """
    data = encode_volume(volume)
    path = Path(path)
    try:
        path.write_bytes(data)
    except OSError as e:
        raise VolumeIOError(path, e) from e
    logger.debug("Wrote %s (%d bytes)", path, len(data))


def decode_volume(data: bytes, path: str | Path = "<memory>") -> Volume:
    """Decode VVOL bytes; ``path`` only labels error messages."""
    if data[: len(MAGIC)] != MAGIC:
        raise BadMagicError(path, f"bad magic {data[: len(MAGIC)]!r}")

    cursor = len(MAGIC)
    if len(data) < cursor + 4:
        raise TruncatedPayloadError(path, "file ends inside the header length")
    (header_len,) = struct.unpack_from("<I", data, cursor)
    cursor += 4
    if len(data) < cursor + header_len:
        raise TruncatedPayloadError(path, "file ends inside the header")

    try:
        header = json.loads(data[cursor : cursor + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise HeaderError(path, f"unreadable header: {e}") from e
    cursor += header_len

    missing = {"dims", "spacing", "origin", "dtype", "order"} - set(header)
    if missing:
        raise HeaderError(path, f"header missing keys: {sorted(missing)}")
    if header["order"] != ORDER:
        raise HeaderError(path, f"unsupported voxel order: {header['order']!r}")

    dtype_name = header["dtype"]
    if dtype_name not in _DTYPES:
        raise UnknownDtypeError(path, f"unknown dtype {dtype_name!r}")

    try:
        meta = GridMeta.of(
            tuple(header["dims"]), tuple(header["spacing"]), tuple(header["origin"])
        )
    except (ValidationError, TypeError) as e:
        raise HeaderError(path, f"invalid grid metadata: {e}") from e

    dtype = _DTYPES[dtype_name]
    expected = meta.voxel_count * dtype.itemsize
    available = len(data) - cursor
    if available < expected:
        raise TruncatedPayloadError(
            path, f"payload has {available} bytes, dims require {expected}"
        )
    if available > expected:
        raise PayloadLengthError(
            path, f"payload has {available} bytes, dims require {expected}"
        )

    values = np.frombuffer(data, dtype=dtype, count=meta.voxel_count, offset=cursor)
    try:
        if dtype_name == "u8":
            return BinaryVolume.from_linear(meta, values)
        return ScalarVolume.from_linear(meta, values)
    except (ValueError, NonFiniteVolumeError) as e:
        raise HeaderError(path, f"invalid payload values: {e}") from e


def read_volume(path: str | Path) -> Volume:
    """Read a VVOL file; the header dtype selects the returned variant.

    Raises:
        BadMagicError, TruncatedPayloadError, UnknownDtypeError,
        PayloadLengthError, HeaderError: On malformed files
        VolumeIOError: If the file cannot be read
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise VolumeIOError(path, e) from e
    return decode_volume(data, path)


def read_binary(path: str | Path) -> BinaryVolume:
    """Read a VVOL file that must hold a binary volume."""
    volume = read_volume(path)
    if not isinstance(volume, BinaryVolume):
        raise HeaderError(path, "expected a u8 (binary) volume")
    return volume


def read_scalar(path: str | Path) -> ScalarVolume:
    """Read a VVOL file that must hold a scalar volume."""
    volume = read_volume(path)
    if not isinstance(volume, ScalarVolume):
        raise HeaderError(path, "expected an f32 (scalar) volume")
    return volume

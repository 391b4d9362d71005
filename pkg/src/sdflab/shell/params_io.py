"""Parameter file codec.

Layout::

    b"VPRM1\\n"                      6-byte magic
    <uint32 little-endian L>         header byte-length
    <L bytes of UTF-8 JSON>          version, seed, net, dtype, tensors
    <payload>                        little-endian float64, tensors in header order
"""

import json
import logging
import struct
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from sdflab.core.exceptions import ParamsFormatError, ShapeMismatchError, VolumeIOError
from sdflab.core.net import NetSpec, Params, check_params

logger = logging.getLogger(__name__)

MAGIC = b"VPRM1\n"
VERSION = 1
_PAYLOAD = np.dtype("<f8")


def encode_params(spec: NetSpec, params: Params) -> bytes:
    check_params(spec, params)
    names = list(params.tensors)
    header = {
        "version": VERSION,
        "seed": params.seed,
        "net": spec.model_dump(mode="json"),
        "dtype": str(params.dtype),
        "tensors": [{"name": n, "shape": list(params.tensors[n].shape)} for n in names],
    }
    header_bytes = json.dumps(header).encode("utf-8")
    payload = b"".join(
        np.ascontiguousarray(params.tensors[n], dtype=_PAYLOAD).tobytes() for n in names
    )
    return MAGIC + struct.pack("<I", len(header_bytes)) + header_bytes + payload


def decode_params(data: bytes, path: str | Path = "<memory>") -> tuple[NetSpec, Params]:
    """Decode parameter bytes back into the network spec and its parameters."""
    if data[: len(MAGIC)] != MAGIC:
        raise ParamsFormatError(f"{path}: bad magic {data[: len(MAGIC)]!r}")
    cursor = len(MAGIC)
    if len(data) < cursor + 4:
        raise ParamsFormatError(f"{path}: file ends inside the header length")
    (header_len,) = struct.unpack_from("<I", data, cursor)
    cursor += 4
    try:
        header = json.loads(data[cursor : cursor + header_len].decode("utf-8"))
        if header["version"] != VERSION:
            raise ParamsFormatError(f"{path}: unsupported version {header['version']}")
        spec = NetSpec.model_validate(header["net"])
        dtype = header["dtype"]
        layout = [(t["name"], tuple(t["shape"])) for t in header["tensors"]]
        seed = int(header["seed"])
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValidationError) as e:
        raise ParamsFormatError(f"{path}: unreadable header: {e}") from e
    cursor += header_len

    expected = sum(int(np.prod(shape)) for _, shape in layout) * _PAYLOAD.itemsize
    if len(data) - cursor != expected:
        raise ParamsFormatError(
            f"{path}: payload has {len(data) - cursor} bytes, tensors require {expected}"
        )

    tensors = {}
    for name, shape in layout:
        count = int(np.prod(shape))
        values = np.frombuffer(data, dtype=_PAYLOAD, count=count, offset=cursor)
        tensors[name] = values.reshape(shape).astype(dtype)
        cursor += count * _PAYLOAD.itemsize
    params = Params(tensors=tensors, seed=seed)
    try:
        check_params(spec, params)
    except ShapeMismatchError as e:
        raise ParamsFormatError(f"{path}: {e}") from e
    return spec, params


def write_params(path: str | Path, spec: NetSpec, params: Params) -> None:
    data = encode_params(spec, params)
    path = Path(path)
    try:
        path.write_bytes(data)
    except OSError as e:
        raise VolumeIOError(path, e) from e
    logger.debug("Wrote %d parameters to %s", params.count(), path)


def read_params(path: str | Path) -> tuple[NetSpec, Params]:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise VolumeIOError(path, e) from e
    return decode_params(data, path)

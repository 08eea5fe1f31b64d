"""Binary weight-checkpoint format.

Layout: 8-byte magic "FORMCKPT", u32 format version, u32 entry count,
then per entry a u16 name length + UTF-8 name, u8 rank, u32 dims, and a
u64 byte offset into the data section; the data section is the entries'
little-endian float32 arrays back to back. The loader validates the
magic, the version, and that the offsets and total file length match the
declared shapes exactly.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import CheckpointError

MAGIC = b"FORMCKPT"
VERSION = 1


def save_checkpoint(path: str, arrays: dict[str, np.ndarray]) -> None:
    """Writes named float arrays to path in checkpoint format."""
    header = bytearray()
    header += MAGIC
    header += struct.pack("<II", VERSION, len(arrays))
    blobs: list[bytes] = []
    offset = 0
    for name, value in arrays.items():
        arr = np.ascontiguousarray(value, dtype="<f4")
        encoded = name.encode("utf-8")
        header += struct.pack("<H", len(encoded)) + encoded
        header += struct.pack("<B", arr.ndim)
        header += struct.pack("<" + "I" * arr.ndim, *arr.shape)
        header += struct.pack("<Q", offset)
        blobs.append(arr.tobytes())
        offset += arr.nbytes
    with open(path, "wb") as fh:
        fh.write(bytes(header))
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(path: str) -> dict[str, np.ndarray]:
    """Reads a checkpoint back into a dict of float32 arrays."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CheckpointError("cannot read checkpoint %r: %s" % (path, exc))
    view = memoryview(raw)
    pos = 0

    def take(count: int) -> memoryview:
        nonlocal pos
        if pos + count > len(raw):
            raise CheckpointError("truncated checkpoint %r" % (path,))
        chunk = view[pos:pos + count]
        pos += count
        return chunk

    if bytes(take(len(MAGIC))) != MAGIC:
        raise CheckpointError("bad checkpoint magic in %r" % (path,))
    version, count = struct.unpack("<II", take(8))
    if version != VERSION:
        raise CheckpointError("unsupported checkpoint version %d" % (version,))
    entries: list[tuple[str, tuple[int, ...], int]] = []
    for _ in range(count):
        (name_len,) = struct.unpack("<H", take(2))
        name = bytes(take(name_len)).decode("utf-8")
        (ndim,) = struct.unpack("<B", take(1))
        shape = struct.unpack("<" + "I" * ndim, take(4 * ndim))
        (offset,) = struct.unpack("<Q", take(8))
        entries.append((name, shape, offset))
    data_start = pos
    expected = 0
    arrays: dict[str, np.ndarray] = {}
    for name, shape, offset in entries:
        if offset != expected:
            raise CheckpointError("misaligned entry %r in %r" % (name, path))
        size = int(np.prod(shape, dtype=np.int64)) if shape else 1
        nbytes = 4 * size
        if data_start + offset + nbytes > len(raw):
            raise CheckpointError("entry %r overruns %r" % (name, path))
        flat = np.frombuffer(raw, dtype="<f4", count=size,
                             offset=data_start + offset)
        arrays[name] = flat.reshape(shape).copy()
        expected = offset + nbytes
    if data_start + expected != len(raw):
        raise CheckpointError("trailing bytes in checkpoint %r" % (path,))
    return arrays


def save_model(path: str, relation: str, model) -> None:
    """Writes a learned denoiser plus its relation tag to a checkpoint."""
    from ..relations import RELATIONS

    arrays = {"config": model.config_array(RELATIONS.index(relation))}
    for name, param in model.named_params():
        arrays["param." + name] = param.value
    save_checkpoint(path, arrays)


def load_model(path: str):
    """Reads a checkpoint back; returns (relation, denoiser)."""
    from ..relations import RELATIONS
    from .mlp import MlpDenoiser
    from .set_transformer import SetDenoiser

    arrays = load_checkpoint(path)
    if "config" not in arrays:
        raise CheckpointError("checkpoint %r has no config entry" % (path,))
    cfg = arrays["config"].astype(float)
    kind = int(round(cfg[0]))
    rel_idx = int(round(cfg[1]))
    if not 0 <= rel_idx < len(RELATIONS):
        raise CheckpointError("checkpoint %r names an unknown relation" % (path,))
    if kind == MlpDenoiser.kind:
        model = MlpDenoiser.from_config(cfg)
    elif kind == SetDenoiser.kind:
        model = SetDenoiser.from_config(cfg)
    else:
        raise CheckpointError("unknown model kind %d in %r" % (kind, path))
    for name, param in model.named_params():
        key = "param." + name
        if key not in arrays:
            raise CheckpointError("checkpoint %r is missing %r" % (path, key))
        stored = arrays[key]
        if stored.shape != param.value.shape:
            raise CheckpointError("shape mismatch for %r in %r" % (key, path))
        param.value = stored.astype(float)
    return RELATIONS[rel_idx], model

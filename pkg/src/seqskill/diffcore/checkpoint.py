"""Self-describing checkpoint container.

Layout: 4-byte magic ``SSK1``, little-endian uint32 header length, then a
UTF-8 JSON header ``{"version", "seed", "config", "tensors": [{name, shape}]}``
followed by the tensor payloads in listed order as little-endian float32.
"""

import json
import os
import struct
from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from ..errors import CorpusFormatError

MAGIC = b"SSK1"
VERSION = 1


@dataclass
class Checkpoint:
    config: dict
    seed: int
    tensors: dict[str, np.ndarray]


def save_checkpoint(path, config: dict, seed: int, tensors: dict[str, np.ndarray]):
    names = list(tensors)
    header = {
        "version": VERSION,
        "seed": int(seed),
        "config": config,
        "tensors": [
            {"name": n, "shape": list(np.asarray(tensors[n]).shape)} for n in names
        ],
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for n in names:
            arr = np.ascontiguousarray(tensors[n], dtype="<f4")
            fh.write(arr.tobytes())
    os.replace(tmp, path)


def load_checkpoint(path) -> Checkpoint:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 8:
        raise CorpusFormatError("checkpoint truncated before header length", len(data))
    if data[:4] != MAGIC:
        raise CorpusFormatError("bad checkpoint magic", 0)
    (hlen,) = struct.unpack("<I", data[4:8])
    if len(data) < 8 + hlen:
        raise CorpusFormatError("checkpoint truncated inside header", len(data))
    try:
        header = json.loads(data[8 : 8 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorpusFormatError(f"unparseable header: {exc}", 8) from exc
    if header.get("version") != VERSION:
        raise CorpusFormatError(f"unsupported version {header.get('version')}", 8)
    offset = 8 + hlen
    tensors = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        nbytes = int(np.prod(shape, dtype=np.int64)) * 4 if shape else 4
        if len(data) < offset + nbytes:
            raise CorpusFormatError(
                f"checkpoint truncated inside tensor {entry['name']!r}", len(data)
            )
        arr = np.frombuffer(data, dtype="<f4", count=nbytes // 4, offset=offset)
        tensors[entry["name"]] = arr.reshape(shape).copy()
        offset += nbytes
    return Checkpoint(config=header["config"], seed=header["seed"], tensors=tensors)


def module_tensors(module: nn.Module) -> dict[str, np.ndarray]:
    """State dict as float32 numpy arrays (parameters and buffers)."""
    return {
        name: t.detach().cpu().numpy().astype(np.float32)
        for name, t in module.state_dict().items()
    }


def load_module_tensors(module: nn.Module, tensors: dict[str, np.ndarray]) -> None:
    state = {
        name: torch.from_numpy(np.asarray(arr)).to(torch.float64)
        for name, arr in tensors.items()
    }
    module.load_state_dict(state)

"""Corpus container files.

Main file layout: 4-byte magic ``SSC1``, little-endian uint32 header length,
UTF-8 JSON header (version, kind, count, dims, seed, config hash), then one
length-prefixed block per trajectory of little-endian float32 payloads:

  demo:  uint32 m, uint32 n, m*frame_dim floats, n floats (token ids)
  robot: uint32 T, T*DS floats, (T-1)*DA floats

Hidden motif labels never enter the main file. They go to a sidecar JSON
(`<path>.labels.json`) keyed by trajectory index; read_corpus does not open
it, so training loaders physically cannot see the labels.
"""

import json
import os
import struct

import numpy as np

from ..errors import CorpusFormatError, InputError
from .env import DA, DS
from .generate import DemoTrajectory, RobotTrajectory

MAGIC = b"SSC1"
VERSION = 1


def sidecar_path(path) -> str:
    return f"{path}.labels.json"


def _write_block(fh, arrays, lengths):
    for n in lengths:
        fh.write(struct.pack("<I", n))
    for arr in arrays:
        fh.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())


def write_corpus(corpus, path, seed=None, config_hash=None, kind=None):
    """Write a corpus plus (if labels are present) its sidecar label file."""
    if kind is None:
        if len(corpus) == 0:
            raise InputError("cannot infer corpus kind from an empty corpus; pass kind=")
        kind = "demo" if isinstance(corpus[0], DemoTrajectory) else "robot"
    if kind not in ("demo", "robot"):
        raise InputError(f"unknown corpus kind {kind!r}")
    dims = {"frame_dim": None, "ds": DS, "da": DA}
    if kind == "demo" and corpus:
        dims["frame_dim"] = int(corpus[0].v.shape[1])
    header = {
        "version": VERSION,
        "kind": kind,
        "count": len(corpus),
        "dims": dims,
        "seed": seed,
        "config_hash": config_hash,
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for tr in corpus:
            if kind == "demo":
                if not isinstance(tr, DemoTrajectory):
                    raise InputError("mixed trajectory kinds in corpus")
                _write_block(
                    fh,
                    [tr.v, tr.w.astype(np.float64)],
                    [tr.v.shape[0], tr.w.shape[0]],
                )
            else:
                if not isinstance(tr, RobotTrajectory):
                    raise InputError("mixed trajectory kinds in corpus")
                _write_block(fh, [tr.s, tr.a], [tr.s.shape[0]])
    os.replace(tmp, path)

    labels = {
        str(i): [list(iv) for iv in tr.hidden_motifs]
        for i, tr in enumerate(corpus)
        if tr.hidden_motifs is not None
    }
    if labels:
        side_tmp = f"{sidecar_path(path)}.tmp"
        with open(side_tmp, "w", encoding="utf-8") as fh:
            json.dump({"version": VERSION, "labels": labels}, fh, sort_keys=True)
        os.replace(side_tmp, sidecar_path(path))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n: int, what: str) -> bytes:
        if self.offset + n > len(self.data):
            raise CorpusFormatError(f"truncated while reading {what}", self.offset)
        out = self.data[self.offset : self.offset + n]
        self.offset += n
        return out

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def f32_matrix(self, rows: int, cols: int, what: str) -> np.ndarray:
        raw = self.take(rows * cols * 4, what)
        return (
            np.frombuffer(raw, dtype="<f4").astype(np.float64).reshape(rows, cols)
        )


def read_header(path) -> dict:
    with open(path, "rb") as fh:
        data = fh.read()
    r = _Reader(data)
    if r.take(4, "magic") != MAGIC:
        raise CorpusFormatError("bad corpus magic", 0)
    hlen = r.u32("header length")
    try:
        header = json.loads(r.take(hlen, "header").decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorpusFormatError(f"unparseable header: {exc}", 8) from exc
    if header.get("version") != VERSION:
        raise CorpusFormatError(f"unsupported version {header.get('version')}", 8)
    header["_payload_offset"] = r.offset
    return header


def read_corpus(path):
    """Load the main corpus file. Hidden motif labels are never read here."""
    header = read_header(path)
    with open(path, "rb") as fh:
        data = fh.read()
    r = _Reader(data)
    r.offset = header["_payload_offset"]
    out = []
    for idx in range(header["count"]):
        if header["kind"] == "demo":
            m = r.u32(f"trajectory {idx} frame count")
            n = r.u32(f"trajectory {idx} token count")
            v = r.f32_matrix(m, header["dims"]["frame_dim"], f"trajectory {idx} frames")
            w = r.f32_matrix(n, 1, f"trajectory {idx} tokens")[:, 0]
            out.append(
                DemoTrajectory(v=v, w=w.astype(np.int64), hidden_motifs=None)
            )
        else:
            t = r.u32(f"trajectory {idx} length")
            s = r.f32_matrix(t, DS, f"trajectory {idx} states")
            a = r.f32_matrix(t - 1, DA, f"trajectory {idx} actions")
            out.append(RobotTrajectory(s=s, a=a, hidden_motifs=None))
    if r.offset != len(data):
        raise CorpusFormatError("trailing bytes after final trajectory", r.offset)
    return out


def read_sidecar(path) -> dict[int, list]:
    """Evaluation-only access to hidden motif labels."""
    with open(sidecar_path(path), "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return {
        int(k): [tuple(iv) for iv in v] for k, v in payload["labels"].items()
    }

"""Minimal netpbm writers/readers: binary PGM (P5) and ASCII PBM (P1)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["write_pgm", "read_pgm", "write_pbm", "read_pbm"]


def write_pgm(path: str | Path, image: np.ndarray) -> None:
    img = np.asarray(image)
    if img.ndim != 2:
        raise ValueError("PGM image must be 2-D")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise ValueError("PGM values must fit in [0, 255]")
        img = img.astype(np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())


def read_pgm(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:  # magic, width, height, maxval
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    if fields[0] != b"P5":
        raise ValueError(f"not a binary PGM: magic {fields[0]!r}")
    w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 255:
        raise ValueError("only maxval 255 is supported")
    pos += 1  # single whitespace after maxval
    return np.frombuffer(data[pos : pos + w * h], dtype=np.uint8).reshape(h, w).copy()


def write_pbm(path: str | Path, bits: np.ndarray) -> None:
    b = np.asarray(bits, dtype=bool)
    if b.ndim != 2:
        raise ValueError("PBM image must be 2-D")
    h, w = b.shape
    lines = [f"P1\n{w} {h}"]
    for row in b.astype(np.uint8):
        lines.append(" ".join(str(int(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_pbm(path: str | Path) -> np.ndarray:
    tokens: list[str] = []
    for line in Path(path).read_text(encoding="ascii").splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P1":
        raise ValueError("not an ASCII PBM")
    w, h = int(tokens[1]), int(tokens[2])
    bits = np.array([int(t) for t in tokens[3 : 3 + w * h]], dtype=np.uint8)
    if bits.size != w * h:
        raise ValueError("PBM pixel count does not match header")
    return bits.reshape(h, w).astype(bool)

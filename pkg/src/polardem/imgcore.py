"""Image planes, boundary-padded 2D filtering, and bit-exact image file I/O.

A "plane" throughout this package is a 2D float64 numpy array in row-major
order, nominally valued in [0, 1]. Width is ``plane.shape[1]``, height is
``plane.shape[0]``; row index grows downward.
"""

from __future__ import annotations

import os

import cv2
import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch, InvalidDimensions, IoError, UnsupportedFormat

BORDER_MODES = ("replicate", "symmetric")

# scipy.ndimage naming: "nearest" repeats the edge pixel, "reflect" mirrors
# including the edge pixel (numpy's "symmetric").
_NDIMAGE_MODE = {"replicate": "nearest", "symmetric": "reflect"}


def as_plane(img) -> np.ndarray:
    """Validate and return ``img`` as a 2D float64 plane."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidDimensions(f"expected a nonempty 2D image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidDimensions("image contains NaN or Inf samples")
    return arr


def check_same_shape(*planes: np.ndarray) -> None:
    shapes = {p.shape for p in planes}
    if len(shapes) > 1:
        raise DimensionMismatch(f"planes differ in shape: {sorted(shapes)}")


def convolve(img, kernel, border: str = "replicate") -> np.ndarray:
    """Filter ``img`` with an anchored, odd-sized kernel.

    Correlation orientation: ``taps[r, c]`` multiplies the pixel at offset
    ``(r - anchor, c - anchor)`` from the output pixel, so the top kernel row
    reaches the image row above. The border is padded by replication or
    symmetric mirroring; output has the input's shape.
    """
    arr = as_plane(img)
    k = np.asarray(kernel, dtype=np.float64)
    if k.ndim != 2 or k.shape[0] % 2 == 0 or k.shape[1] % 2 == 0:
        raise InvalidDimensions(f"kernel must be 2D with odd sides, got {k.shape}")
    if border not in BORDER_MODES:
        raise ValueError(f"border must be one of {BORDER_MODES}, got {border!r}")
    return ndimage.correlate(arr, k, mode=_NDIMAGE_MODE[border])


def _depth_scale(bit_depth: int) -> float:
    if bit_depth < 1 or bit_depth > 16:
        raise UnsupportedFormat(f"bit depth {bit_depth} outside supported range 1..16")
    return float((1 << bit_depth) - 1)


def _read_pnm(path: str):
    """Read a binary PGM (P5) or PPM (P6) file. Returns (int array, maxval)."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    # Header: magic, width, height, maxval as whitespace-separated tokens,
    # '#' comments allowed through end of line.
    pos = 0
    tokens = []
    while len(tokens) < 4:
        if pos >= len(data):
            raise IoError(f"truncated header in {path}")
        ch = data[pos : pos + 1]
        if ch == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            start = pos
            while pos < len(data) and not data[pos : pos + 1].isspace():
                pos += 1
            tokens.append(data[start:pos])
    pos += 1  # single whitespace byte after maxval precedes the raster

    magic = tokens[0].decode("ascii", "replace")
    if magic not in ("P5", "P6"):
        raise UnsupportedFormat(f"{path}: unsupported PNM magic {magic!r} (binary P5/P6 only)")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError as exc:
        raise IoError(f"malformed PNM header in {path}") from exc
    if width < 1 or height < 1:
        raise IoError(f"{path}: bad dimensions {width}x{height}")
    if not 0 < maxval <= 65535:
        raise UnsupportedFormat(f"{path}: maxval {maxval} outside 1..65535")

    channels = 1 if magic == "P5" else 3
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height * channels
    body = data[pos:]
    raster = np.frombuffer(body[: len(body) - len(body) % dtype.itemsize], dtype=dtype)
    if raster.size < count:
        raise IoError(f"truncated raster in {path}: {raster.size} of {count} samples")
    arr = raster[:count].astype(np.int64)
    if channels == 1:
        return arr.reshape(height, width), maxval
    return arr.reshape(height, width, 3), maxval


def _write_pnm(codes: np.ndarray, path: str, maxval: int) -> None:
    magic = b"P5" if codes.ndim == 2 else b"P6"
    h, w = codes.shape[:2]
    header = magic + f"\n{w} {h}\n{maxval}\n".encode("ascii")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(codes.astype(dtype).tobytes())
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _read_raw(path: str):
    """Read integer codes from a PNG or binary PNM file. Returns (codes, container maxval)."""
    ext = os.path.splitext(path)[1].lower()
    if ext in (".pgm", ".ppm", ".pnm"):
        return _read_pnm(path)
    if ext == ".png":
        if not os.path.exists(path):
            raise IoError(f"no such file: {path}")
        arr = cv2.imread(path, cv2.IMREAD_UNCHANGED)
        if arr is None:
            raise IoError(f"cannot decode {path}")
        if arr.ndim == 3:
            if arr.shape[2] != 3:
                raise UnsupportedFormat(f"{path}: {arr.shape[2]}-channel PNG not supported")
            arr = arr[:, :, ::-1]  # BGR -> RGB
        if arr.dtype == np.uint8:
            return arr.astype(np.int64), 255
        if arr.dtype == np.uint16:
            return arr.astype(np.int64), 65535
        raise UnsupportedFormat(f"{path}: unsupported PNG sample type {arr.dtype}")
    raise UnsupportedFormat(f"{path}: unsupported extension {ext!r} (png/pgm/ppm only)")


def read_image(path: str, bit_depth: int | None = None) -> np.ndarray:
    """Read a grayscale image, scaling integer codes to [0, 1].

    Codes are divided by ``2**bit_depth - 1`` when a depth is declared
    (e.g. 10-bit data in a 16-bit container), otherwise by the container's
    own maximum.
    """
    codes, maxval = _read_raw(path)
    if codes.ndim != 2:
        raise UnsupportedFormat(f"{path} is a color image; use read_image_rgb")
    scale = _depth_scale(bit_depth) if bit_depth is not None else float(maxval)
    return codes.astype(np.float64) / scale


def read_image_rgb(path: str, bit_depth: int | None = None):
    """Read an RGB image as three [0, 1] planes (r, g, b)."""
    codes, maxval = _read_raw(path)
    if codes.ndim != 3:
        raise UnsupportedFormat(f"{path} is grayscale; use read_image")
    scale = _depth_scale(bit_depth) if bit_depth is not None else float(maxval)
    planes = codes.astype(np.float64) / scale
    return planes[:, :, 0], planes[:, :, 1], planes[:, :, 2]


def quantize(img: np.ndarray, bit_depth: int) -> np.ndarray:
    """Clamp to [0, 1] and round to integer codes at the given depth."""
    scale = _depth_scale(bit_depth)
    return np.rint(np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0) * scale).astype(np.int64)


def _store(codes: np.ndarray, path: str, bit_depth: int) -> None:
    ext = os.path.splitext(path)[1].lower()
    if ext in (".pgm", ".ppm", ".pnm"):
        _write_pnm(codes, path, maxval=(1 << bit_depth) - 1)
        return
    if ext == ".png":
        # Sub-16-bit codes ride in the container's native width.
        out = codes.astype(np.uint8 if bit_depth <= 8 else np.uint16)
        if out.ndim == 3:
            out = out[:, :, ::-1]  # RGB -> BGR
        if not cv2.imwrite(path, out):
            raise IoError(f"cannot write {path}")
        return
    raise UnsupportedFormat(f"{path}: unsupported extension {ext!r} (png/pgm/ppm only)")


def write_image(img, path: str, bit_depth: int = 10) -> None:
    """Write a plane as integer codes: round(clamp(v, 0, 1) * (2**depth - 1))."""
    if bit_depth not in (8, 10, 16):
        raise UnsupportedFormat(f"write bit depth must be 8, 10, or 16, got {bit_depth}")
    _store(quantize(as_plane(img), bit_depth), path, bit_depth)


def write_image_rgb(r, g, b, path: str, bit_depth: int = 10) -> None:
    """Write three planes as one RGB image at the given depth."""
    if bit_depth not in (8, 10, 16):
        raise UnsupportedFormat(f"write bit depth must be 8, 10, or 16, got {bit_depth}")
    rp, gp, bp = as_plane(r), as_plane(g), as_plane(b)
    check_same_shape(rp, gp, bp)
    stacked = np.stack([rp, gp, bp], axis=-1)
    _store(quantize(stacked, bit_depth), path, bit_depth)

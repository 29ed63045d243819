"""
Stack Provider Module

Reads scenes (raster image plus binary depth map) and reads and writes focal stacks and rendered images.

Depth map layout: 16-byte header, the magic b"DFDM", uint32 width, uint32 height, 4 reserved bytes,
all little-endian, followed by width * height float32 little-endian values in row-major order.

Focal-stack directory: manifest.yaml listing plane_count, depths_diopter, channels and the raster files,
plus one plane raster per plane: a 16-byte header (b"DFSP", uint32 width, height, channels) followed
by float64 little-endian values, channels interleaved. Planes reload bit-exactly, values above 1 included.
"""
import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np
import yaml
from PIL import Image

from src.optics import PlaneLayout
from src.renderer import FocalStack, Scene
from src.utils.constants import DEPTH_HEADER_BYTES, DEPTH_MAGIC, PLANE_HEADER_BYTES, PLANE_MAGIC, STACK_MANIFEST
from src.utils.exceptions import BadMagicError, DimensionMismatchError, NonFiniteDepthError, UsageError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_HEADER = struct.Struct("<4sII4x")
_PLANE_HEADER = struct.Struct("<4sIII")
WORD_MAX = 65535
BYTE_MAX = 255


def load_image(path: PathLike) -> np.ndarray:
    """8/16-bit grayscale or RGB raster mapped to [0, 1]; grayscale gives H x W, color H x W x 3."""
    path = Path(path)
    if not path.exists():
        raise UsageError(f"image file not found: {path}")
    with Image.open(path) as img:
        mode = img.mode
        if mode in ("1", "LA"):
            img, mode = img.convert("L"), "L"
        elif mode in ("P", "RGBA", "CMYK", "YCbCr"):
            img, mode = img.convert("RGB"), "RGB"
        data = np.asarray(img)
    if mode in ("L", "RGB"):
        return data.astype(np.float64) / BYTE_MAX
    if mode.startswith("I"):
        return np.clip(data.astype(np.float64) / WORD_MAX, 0.0, 1.0)
    raise UsageError(f"unsupported image mode {mode} in {path}")


def read_depth(path: PathLike) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise UsageError(f"depth file not found: {path}")
    raw = path.read_bytes()
    if len(raw) < DEPTH_HEADER_BYTES:
        raise BadMagicError(f"{path} is too short for a depth header")
    magic, width, height = _HEADER.unpack_from(raw, 0)
    if magic != DEPTH_MAGIC:
        raise BadMagicError(f"{path} starts with {magic!r}, expected {DEPTH_MAGIC!r}")
    payload = raw[DEPTH_HEADER_BYTES:]
    if len(payload) != 4 * width * height:
        raise DimensionMismatchError(
            f"{path} declares {width}x{height} but holds {len(payload) // 4} values")
    return np.frombuffer(payload, dtype="<f4").reshape(height, width).astype(np.float64)


def write_depth(path: PathLike, depth: np.ndarray) -> Path:
    depth = np.asarray(depth)
    if depth.ndim != 2:
        raise DimensionMismatchError(f"depth map must be 2-D, got shape {depth.shape}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    height, width = depth.shape
    path.write_bytes(_HEADER.pack(DEPTH_MAGIC, width, height) + depth.astype("<f4").tobytes())
    return path


def load_scene(image_path: PathLike, depth_path: PathLike, depth_units: str = "diopter") -> Scene:
    """
    Scene from a raster and a depth file. With depth_units='meter' the depth file holds distances and is
    converted to diopters.
    """
    image = load_image(image_path)
    depth = read_depth(depth_path)
    if image.shape[:2] != depth.shape:
        raise DimensionMismatchError(f"image {Path(image_path).name} is {image.shape[:2]} "
                                     f"but depth {Path(depth_path).name} is {depth.shape}")
    if not np.all(np.isfinite(depth)):
        raise NonFiniteDepthError(f"{depth_path} contains non-finite depths")
    if depth_units == "meter":
        if np.any(depth <= 0):
            raise NonFiniteDepthError(f"{depth_path} contains non-positive distances")
        depth = 1.0 / depth
    elif depth_units != "diopter":
        raise UsageError(f"depth units must be 'diopter' or 'meter', got '{depth_units}'")
    logger.info("loaded scene %s (%dx%d, %d channel(s))", Path(image_path).name, depth.shape[1], depth.shape[0],
                1 if image.ndim == 2 else image.shape[2])
    return Scene(image=image, depth_map=depth)


def to_words(image: np.ndarray) -> np.ndarray:
    return np.rint(np.clip(image, 0.0, 1.0) * WORD_MAX).astype(np.uint16)


def write_image(path: PathLike, image: np.ndarray) -> Path:
    """Grayscale as 16-bit PNG, color as 8-bit RGB PNG. Values are clipped to [0, 1]."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    image = np.asarray(image, dtype=np.float64)
    if image.ndim == 2:
        Image.fromarray(to_words(image)).save(path)
    else:
        Image.fromarray(np.rint(np.clip(image, 0.0, 1.0) * BYTE_MAX).astype(np.uint8)).save(path)
    return path


def _plane_file(index: int) -> str:
    return f"plane_{index:03d}.bin"


def write_plane(path: PathLike, plane: np.ndarray) -> Path:
    """One plane as a headered little-endian float64 raster; values are stored unclipped."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim not in (2, 3):
        raise DimensionMismatchError(f"plane must be H x W or H x W x C, got shape {plane.shape}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    height, width = plane.shape[:2]
    channels = 1 if plane.ndim == 2 else plane.shape[2]
    path.write_bytes(_PLANE_HEADER.pack(PLANE_MAGIC, width, height, channels) + plane.astype("<f8").tobytes())
    return path


def read_plane(path: PathLike) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise UsageError(f"plane file not found: {path}")
    raw = path.read_bytes()
    if len(raw) < PLANE_HEADER_BYTES:
        raise BadMagicError(f"{path} is too short for a plane header")
    magic, width, height, channels = _PLANE_HEADER.unpack_from(raw, 0)
    if magic != PLANE_MAGIC:
        raise BadMagicError(f"{path} starts with {magic!r}, expected {PLANE_MAGIC!r}")
    payload = raw[PLANE_HEADER_BYTES:]
    if channels < 1 or len(payload) != 8 * width * height * channels:
        raise DimensionMismatchError(
            f"{path} declares {width}x{height}x{channels} but holds {len(payload) // 8} values")
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return values.reshape(height, width) if channels == 1 else values.reshape(height, width, channels)


def save_stack(stack: FocalStack, directory: PathLike) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = []
    for i, plane in enumerate(stack.planes):
        files.append(write_plane(directory / _plane_file(i), plane).name)
    manifest = {
        "plane_count": stack.layout.count,
        "depths_diopter": [float(d) for d in stack.layout.depths_diopter],
        "channels": stack.channels,
        "dtype": "float64",
        "files": files,
    }
    with open(directory / STACK_MANIFEST, "w") as f:
        yaml.safe_dump(manifest, f, sort_keys=False)
    logger.info("wrote %d-plane stack to %s", stack.layout.count, directory)
    return directory


def load_stack(directory: PathLike) -> FocalStack:
    directory = Path(directory)
    manifest_path = directory / STACK_MANIFEST
    if not manifest_path.exists():
        raise UsageError(f"no {STACK_MANIFEST} in {directory}")
    with open(manifest_path) as f:
        manifest = yaml.safe_load(f) or {}
    try:
        depths = tuple(float(d) for d in manifest["depths_diopter"])
        files = manifest["files"]
        count = int(manifest["plane_count"])
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"malformed stack manifest {manifest_path}: {e}")
    if count != len(depths) or count != len(files):
        raise DimensionMismatchError(
            f"manifest lists {count} planes, {len(depths)} depths and {len(files)} files")
    planes = [read_plane(directory / name) for name in files]
    return FocalStack(PlaneLayout(depths_diopter=depths), planes)

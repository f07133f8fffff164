"""File formats shared by the CLI, the HTTP service, and the picker UI.

Correspondences travel as schema-version-1 JSON with a fixed pixel
convention: origin at the image's top-left corner, x rightward, y downward.
The texture image itself is opaque to the pipeline; only its dimensions are
read (from the file header, no image library involved).
"""

import json
import os
import shutil
import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    CorrespondenceFormatError,
    DuplicateVertexError,
    ImageFormatError,
)
from .mesh import save_obj

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ImageInfo:
    width: int
    height: int
    path: str = ""


@dataclass
class CorrespondenceSet:
    """Feature pairs: mesh vertex id <-> image pixel, plus the image size."""

    vertex_ids: np.ndarray  # (P,) int64
    pixels: np.ndarray      # (P, 2) float64, top-left origin
    image_width: int
    image_height: int

    def __post_init__(self):
        self.vertex_ids = np.asarray(self.vertex_ids, dtype=np.int64).reshape(-1)
        self.pixels = np.asarray(self.pixels, dtype=np.float64).reshape(-1, 2)
        if self.vertex_ids.shape[0] != self.pixels.shape[0]:
            raise CorrespondenceFormatError("pairs", "vertex and pixel counts differ")
        if self.vertex_ids.shape[0] < 1:
            raise CorrespondenceFormatError("pairs", "at least one pair is required")
        if self.image_width <= 0 or self.image_height <= 0:
            raise CorrespondenceFormatError("image", "width and height must be positive")
        if (self.vertex_ids < 0).any():
            bad = int(np.flatnonzero(self.vertex_ids < 0)[0])
            raise CorrespondenceFormatError(f"pairs[{bad}].vertex", "vertex id must be >= 0")
        seen = {}
        for k, v in enumerate(self.vertex_ids):
            if int(v) in seen:
                raise DuplicateVertexError(int(v), field_path=f"pairs[{k}].vertex")
            seen[int(v)] = k
        oob_x = (self.pixels[:, 0] < 0) | (self.pixels[:, 0] > self.image_width)
        oob_y = (self.pixels[:, 1] < 0) | (self.pixels[:, 1] > self.image_height)
        if oob_x.any():
            bad = int(np.flatnonzero(oob_x)[0])
            raise CorrespondenceFormatError(
                f"pairs[{bad}].pixel[0]", f"x outside [0, {self.image_width}]"
            )
        if oob_y.any():
            bad = int(np.flatnonzero(oob_y)[0])
            raise CorrespondenceFormatError(
                f"pairs[{bad}].pixel[1]", f"y outside [0, {self.image_height}]"
            )

    def __len__(self):
        return self.vertex_ids.shape[0]

    def bind(self, mesh):
        """Validate vertex ids against a concrete mesh."""
        if self.vertex_ids.size and self.vertex_ids.max() >= mesh.vertex_count:
            bad = int(np.argmax(self.vertex_ids))
            raise CorrespondenceFormatError(
                f"pairs[{bad}].vertex",
                f"vertex {int(self.vertex_ids[bad])} out of range (mesh has {mesh.vertex_count})",
            )
        return self


def _require(cond, path, message):
    if not cond:
        raise CorrespondenceFormatError(path, message)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def correspondences_from_dict(doc):
    """Validate a schema-v1 document; error messages carry the field path."""
    _require(isinstance(doc, dict), "$", "document must be a JSON object")
    version = doc.get("version", SCHEMA_VERSION)
    _require(_is_int(version), "version", "must be an integer")
    _require(
        version == SCHEMA_VERSION,
        "version",
        f"unsupported schema version {version}; this build reads version {SCHEMA_VERSION}",
    )
    _require("image" in doc, "image", "missing")
    image = doc["image"]
    _require(isinstance(image, dict), "image", "must be an object")
    for key in ("width", "height"):
        _require(key in image, f"image.{key}", "missing")
        _require(_is_int(image[key]), f"image.{key}", "must be an integer")
        _require(image[key] > 0, f"image.{key}", "must be positive")
    _require("pairs" in doc, "pairs", "missing")
    pairs = doc["pairs"]
    _require(isinstance(pairs, list), "pairs", "must be an array")
    _require(len(pairs) >= 1, "pairs", "at least one pair is required")
    known_top = {"version", "image", "pairs"}
    for key in doc:
        _require(key in known_top, key, "unknown field")
    vertex_ids = []
    pixels = []
    for k, pair in enumerate(pairs):
        path = f"pairs[{k}]"
        _require(isinstance(pair, dict), path, "must be an object")
        for key in pair:
            _require(key in ("vertex", "pixel"), f"{path}.{key}", "unknown field")
        _require("vertex" in pair, f"{path}.vertex", "missing")
        _require(_is_int(pair["vertex"]), f"{path}.vertex", "must be an integer")
        _require("pixel" in pair, f"{path}.pixel", "missing")
        px = pair["pixel"]
        _require(isinstance(px, list) and len(px) == 2, f"{path}.pixel", "must be [x, y]")
        for axis in (0, 1):
            _require(_is_num(px[axis]), f"{path}.pixel[{axis}]", "must be a number")
        vertex_ids.append(pair["vertex"])
        pixels.append([float(px[0]), float(px[1])])
    return CorrespondenceSet(
        vertex_ids=np.array(vertex_ids, dtype=np.int64),
        pixels=np.array(pixels, dtype=np.float64),
        image_width=image["width"],
        image_height=image["height"],
    )


def correspondences_to_dict(corr):
    return {
        "version": SCHEMA_VERSION,
        "image": {"width": int(corr.image_width), "height": int(corr.image_height)},
        "pairs": [
            {"vertex": int(v), "pixel": [float(x), float(y)]}
            for v, (x, y) in zip(corr.vertex_ids, corr.pixels)
        ],
    }


def load_correspondences(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CorrespondenceFormatError("$", f"invalid JSON: {exc}") from None
    return correspondences_from_dict(doc)


def save_correspondences(corr, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(correspondences_to_dict(corr), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_image_size(path):
    """Image (width, height) from the file header; PNG/JPEG/GIF/BMP only."""
    with open(path, "rb") as fh:
        head = fh.read(26)
        if head.startswith(b"\x89PNG\r\n\x1a\n"):
            if len(head) < 24 or head[12:16] != b"IHDR":
                raise ImageFormatError(f"{path}: truncated PNG header")
            w, h = struct.unpack(">II", head[16:24])
            return int(w), int(h)
        if head.startswith(b"GIF87a") or head.startswith(b"GIF89a"):
            w, h = struct.unpack("<HH", head[6:10])
            return int(w), int(h)
        if head.startswith(b"BM"):
            w, h = struct.unpack("<ii", head[18:26])
            return int(w), abs(int(h))
        if head.startswith(b"\xff\xd8"):
            fh.seek(2)
            while True:
                marker = fh.read(2)
                if len(marker) < 2 or marker[0] != 0xFF:
                    raise ImageFormatError(f"{path}: no JPEG size marker found")
                code = marker[1]
                if code in (0xD8, 0x01) or 0xD0 <= code <= 0xD7:
                    continue
                seg = fh.read(2)
                if len(seg) < 2:
                    raise ImageFormatError(f"{path}: truncated JPEG segment")
                seg_len = struct.unpack(">H", seg)[0]
                if seg_len < 2:
                    raise ImageFormatError(f"{path}: invalid JPEG segment length")
                if 0xC0 <= code <= 0xCF and code not in (0xC4, 0xC8, 0xCC):
                    body = fh.read(5)
                    h, w = struct.unpack(">HH", body[1:5])
                    return int(w), int(h)
                fh.seek(seg_len - 2, os.SEEK_CUR)
    raise ImageFormatError(f"{path}: unrecognized image format (PNG/JPEG/GIF/BMP supported)")


def image_info(path):
    w, h = read_image_size(path)
    return ImageInfo(width=w, height=h, path=os.fspath(path))


def report_dict(result, cfg, image=None):
    """JSON-ready run report. Everything except "timings" is deterministic
    for fixed inputs, so golden tests compare the document minus that key."""
    doc = {
        "alpha": cfg.alpha,
        "beta": cfg.beta,
        "eps": cfg.eps,
        "tol": cfg.tol,
        "max_iterations": cfg.max_iterations,
        "laplacian": cfg.laplacian,
        "mode": cfg.mode,
        "iterations": result.iterations,
        "converged": result.converged,
        "anchor_vertex": result.anchor_vertex,
        "uv_out_of_image": result.uv_out_of_image,
        "energy": {
            "detail": result.report.detail,
            "projection": result.report.projection,
            "total": result.report.total,
        },
        "energy_history": result.report.history,
        "timings": result.timings,
    }
    if image is not None:
        doc["image"] = {"width": image.width, "height": image.height}
    return doc


def save_result(result, out_dir, image, cfg):
    """Write mesh.obj (+ mesh.mtl and vt records), copy the texture image,
    and write report.json into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    texture_name = None
    if image.path and os.path.exists(image.path):
        texture_name = os.path.basename(image.path)
        dst = os.path.join(out_dir, texture_name)
        if os.path.abspath(image.path) != os.path.abspath(dst):
            shutil.copyfile(image.path, dst)
    save_obj(result.mesh, os.path.join(out_dir, "mesh.obj"), uvs=result.uvs, texture_name=texture_name)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report_dict(result, cfg, image), fh, indent=2, sort_keys=True)
        fh.write("\n")

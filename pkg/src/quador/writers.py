"""Mesh, polyline and CSV writers.

Binary STL layout: 80-byte header, little-endian uint32 triangle count,
then 50 bytes per triangle (12 little-endian float32: normal + three
vertices, plus a zero uint16 attribute), so the file length is always
``84 + 50 * n``.  OBJ output is ASCII with 1-based indices; conic exports
use ``l`` polyline records with metadata comments.  All writers are
deterministic: identical input produces byte-identical output.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .solid import Mesh

__all__ = [
    "write_stl",
    "read_stl",
    "write_obj_mesh",
    "write_obj_polylines",
    "format_value",
]

_STL_HEADER = b"quador binary STL" + b"\x00" * 63


def write_stl(mesh: Mesh, path: str | Path) -> int:
    """Write binary STL; returns the triangle count."""
    tris = mesh.triangles
    verts = mesh.vertices
    with open(path, "wb") as fh:
        fh.write(_STL_HEADER)
        fh.write(struct.pack("<I", len(tris)))
        for ia, ib, ic in tris:
            a, b, c = verts[ia], verts[ib], verts[ic]
            n = np.cross(b - a, c - a)
            nn = np.linalg.norm(n)
            if nn > 0.0:
                n = n / nn
            fh.write(struct.pack("<12fH", *n, *a, *b, *c, 0))
    return len(tris)


def read_stl(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read binary STL back as (normals, triangle vertices (n, 3, 3))."""
    data = Path(path).read_bytes()
    (count,) = struct.unpack_from("<I", data, 80)
    normals = np.zeros((count, 3), dtype=np.float32)
    tris = np.zeros((count, 3, 3), dtype=np.float32)
    off = 84
    for i in range(count):
        vals = struct.unpack_from("<12fH", data, off)
        normals[i] = vals[0:3]
        tris[i] = np.array(vals[3:12]).reshape(3, 3)
        off += 50
    return normals, tris


def format_value(x: float) -> str:
    """Shortest exact decimal for a float; integral values print as integers."""
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def write_obj_mesh(mesh: Mesh, path: str | Path) -> int:
    lines = []
    for v in mesh.vertices:
        lines.append(f"v {format_value(v[0])} {format_value(v[1])} {format_value(v[2])}")
    for t in mesh.triangles:
        lines.append(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
    return len(mesh.triangles)


def write_obj_polylines(
    curves: list[tuple[np.ndarray, bool, str]], path: str | Path
) -> int:
    """Write polylines as OBJ ``v``/``l`` records.

    Each curve is (points, closed, comment); closed curves repeat their
    first index at the end of the ``l`` record.  Returns the polyline count.
    """
    lines = []
    base = 1
    for points, closed, comment in curves:
        if comment:
            lines.append(f"# {comment}")
        for p in points:
            lines.append(
                f"v {format_value(p[0])} {format_value(p[1])} {format_value(p[2])}"
            )
        idx = list(range(base, base + len(points)))
        if closed:
            idx.append(base)
        lines.append("l " + " ".join(str(i) for i in idx))
        base += len(points)
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
    return len(curves)

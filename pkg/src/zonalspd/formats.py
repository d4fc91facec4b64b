"""File formats: kernel spec JSON and point CSV."""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .errors import DuplicatePoint, InvalidField
from .kernels import KernelExpansion, expansion_to_dict, validate_expansion
from .spaces import Family, Point, Space, make_point, zonal_matrix

__all__ = ["load_spec", "dump_spec", "read_points", "write_points", "parse_space", "check_distinct"]

_HEADER = re.compile(r"^#\s*space\s*=\s*([A-Za-z_]+)\s*,\s*d\s*=\s*(-?\d+)\s*$")


def load_spec(path) -> KernelExpansion:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidField("spec", f"not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return validate_expansion(raw)


def dump_spec(e: KernelExpansion, path) -> None:
    Path(path).write_text(json.dumps(expansion_to_dict(e), indent=2) + "\n")


def parse_space(text: str) -> Space:
    """'family:d', e.g. 'real_projective:3'."""
    fam, sep, d = text.partition(":")
    if not sep:
        raise InvalidField("space", f"expected family:d, got {text!r}")
    try:
        return Space(fam.strip(), int(d))
    except ValueError as exc:
        raise InvalidField("space", str(exc)) from None


def _row_to_coords(s: Space, row: np.ndarray):
    if s.family is Family.CIRCLE:
        return row[0]
    if s.family is Family.COMPLEX_PROJECTIVE:
        return row[0::2] + 1j * row[1::2]
    return row.reshape(s.coord_shape)


def _row_width(s: Space) -> int:
    if s.family is Family.CIRCLE:
        return 1
    width = int(np.prod(s.coord_shape))
    return 2 * width if s.family is Family.COMPLEX_PROJECTIVE else width


def check_distinct(points) -> None:
    if len(points) < 2:
        return
    T = zonal_matrix(points[0].space, points)
    for i, j in np.argwhere(np.triu(T > 1.0 - 1e-9, k=1)):
        if points[i] == points[j]:
            raise DuplicatePoint(int(i), int(j))


def read_points(path) -> tuple[Space, list[Point]]:
    """Read a point CSV.  The first line must be ``# space=<family>,d=<n>``."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise InvalidField("points", "empty file")
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise InvalidField("points.header", f"expected '# space=<family>,d=<n>', got {lines[0]!r}")
    try:
        s = Space(m.group(1), int(m.group(2)))
    except ValueError as exc:
        raise InvalidField("points.header", str(exc)) from None
    if not s.has_geometry:
        raise InvalidField("points.header", f"{s} has no coordinate model")
    width = _row_width(s)
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = np.array([float(v) for v in line.split(",")])
        except ValueError:
            raise InvalidField(f"points line {lineno}", "non-numeric entry") from None
        if row.size != width:
            raise InvalidField(f"points line {lineno}", f"expected {width} values for {s}, got {row.size}")
        try:
            points.append(make_point(s, _row_to_coords(s, row)))
        except ValueError as exc:
            raise InvalidField(f"points line {lineno}", str(exc)) from None
    if not points:
        raise InvalidField("points", "no points")
    check_distinct(points)
    return s, points


def write_points(path, s: Space, points) -> None:
    rows = [",".join(repr(float(v)) for v in p.as_row()) for p in points]
    Path(path).write_text(f"# space={s.family.value},d={s.d}\n" + "\n".join(rows) + "\n")

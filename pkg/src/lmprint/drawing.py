"""Vector drawings: the native JSON format and an SVG import subset.

A drawing is a set of polyline strokes in millimetres plus named pad
points used later for connectivity queries. Closed strokes do not repeat
their first vertex; closure is a flag. The SVG subset covers path data
with M, L, H, V, Z and C commands (absolute and relative); cubic segments
are flattened to polylines within a configurable chord-error tolerance.
Everything else is rejected with a named error rather than guessed at.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.etree import ElementTree

import json
import math
import re

from .errors import (DrawingFormatError, NonVectorContentError,
                     UnsupportedSvgFeatureError)

DEFAULT_CHORD_TOLERANCE_MM = 0.05

Point = tuple[float, float]

NATIVE_TOP_KEYS = {"version", "id", "units", "strokes", "pads"}
NATIVE_STROKE_KEYS = {"points", "closed"}


@dataclass(frozen=True)
class VectorDrawing:
    """Polyline strokes (mm), per-stroke closed flags and named pads."""

    strokes: tuple[tuple[Point, ...], ...]
    closed_flags: tuple[bool, ...]
    pads: dict[str, Point] = field(default_factory=dict)
    drawing_id: str | None = None
    bounds: tuple[Point, Point] | None = field(default=None, compare=True)

    def __post_init__(self):
        strokes = tuple(tuple((float(x), float(y)) for x, y in s) for s in self.strokes)
        object.__setattr__(self, "strokes", strokes)
        object.__setattr__(self, "closed_flags", tuple(bool(c) for c in self.closed_flags))
        object.__setattr__(self, "pads",
                           {str(k): (float(v[0]), float(v[1])) for k, v in self.pads.items()})
        if len(strokes) != len(self.closed_flags):
            raise DrawingFormatError("strokes and closed_flags lengths differ")
        for i, s in enumerate(strokes):
            if len(s) < 2:
                raise DrawingFormatError(f"stroke {i}: needs at least 2 points")
            for x, y in s:
                if not (math.isfinite(x) and math.isfinite(y)):
                    raise DrawingFormatError(f"stroke {i}: non-finite coordinate")
            for j, (p, q) in enumerate(zip(s, s[1:])):
                if p == q:
                    raise DrawingFormatError(
                        f"stroke {i}: zero-length segment at vertex {j}")
            if self.closed_flags[i] and s[0] == s[-1]:
                raise DrawingFormatError(
                    f"stroke {i}: closed strokes must not repeat the first vertex")
        for name, (x, y) in self.pads.items():
            if not (math.isfinite(x) and math.isfinite(y)):
                raise DrawingFormatError(f"pad {name!r}: non-finite coordinate")
        object.__setattr__(self, "bounds", _bounds(strokes))

    @property
    def n_strokes(self) -> int:
        return len(self.strokes)

    def stroke_vertices(self, index: int) -> tuple[Point, ...]:
        """Vertices of a stroke with the closing vertex appended if closed."""
        s = self.strokes[index]
        return s + (s[0],) if self.closed_flags[index] else s


def _bounds(strokes) -> tuple[Point, Point] | None:
    pts = [p for s in strokes for p in s]
    if not pts:
        return None
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return ((min(xs), min(ys)), (max(xs), max(ys)))


# --- native JSON ------------------------------------------------------------


def parse_drawing(data: bytes | str, format: str = "native-json", *,
                  chord_tolerance_mm: float = DEFAULT_CHORD_TOLERANCE_MM) -> VectorDrawing:
    """Parse a drawing document in the named format.

    format is "native-json" or "svg-subset". chord_tolerance_mm bounds the
    distance between any point of an imported cubic and its polyline
    replacement.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if format == "native-json":
        return _parse_native(data)
    if format == "svg-subset":
        return _parse_svg(data, chord_tolerance_mm)
    raise DrawingFormatError(f"unknown drawing format {format!r}")


def _parse_native(text: str) -> VectorDrawing:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DrawingFormatError(f"malformed drawing JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DrawingFormatError("drawing document must be a JSON object")
    unknown = set(doc) - NATIVE_TOP_KEYS
    if unknown:
        raise DrawingFormatError(f"unknown drawing keys: {sorted(unknown)}")
    if doc.get("version") != 1:
        raise DrawingFormatError("drawing 'version' must be 1")
    units = doc.get("units", "mm")
    if units != "mm":
        raise DrawingFormatError(f"unsupported units {units!r}; drawings are mm")
    strokes = []
    closed = []
    raw_strokes = doc.get("strokes", [])
    if not isinstance(raw_strokes, list):
        raise DrawingFormatError("'strokes' must be a list")
    for i, s in enumerate(raw_strokes):
        if not isinstance(s, dict):
            raise DrawingFormatError(f"stroke {i}: must be an object")
        unknown = set(s) - NATIVE_STROKE_KEYS
        if unknown:
            raise DrawingFormatError(f"stroke {i}: unknown keys {sorted(unknown)}")
        pts = s.get("points")
        if not isinstance(pts, list) or any(
                not isinstance(p, list) or len(p) != 2 for p in pts):
            raise DrawingFormatError(f"stroke {i}: 'points' must be a list of [x, y]")
        strokes.append(tuple((float(p[0]), float(p[1])) for p in pts))
        closed.append(bool(s.get("closed", False)))
    pads = doc.get("pads", {})
    if not isinstance(pads, dict):
        raise DrawingFormatError("'pads' must be an object of name -> [x, y]")
    for name, p in pads.items():
        if not isinstance(p, list) or len(p) != 2:
            raise DrawingFormatError(f"pad {name!r}: must be [x, y]")
    return VectorDrawing(
        strokes=tuple(strokes),
        closed_flags=tuple(closed),
        pads={str(k): (float(v[0]), float(v[1])) for k, v in pads.items()},
        drawing_id=doc.get("id"),
    )


def serialize_drawing(drawing: VectorDrawing) -> bytes:
    """Canonical native-JSON bytes; parse_drawing inverts this exactly."""
    doc = {
        "version": 1,
        "units": "mm",
        "strokes": [
            {"points": [[x, y] for x, y in s], "closed": c}
            for s, c in zip(drawing.strokes, drawing.closed_flags)
        ],
        "pads": {k: [v[0], v[1]] for k, v in sorted(drawing.pads.items())},
    }
    if drawing.drawing_id is not None:
        doc["id"] = drawing.drawing_id
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


# --- SVG subset -------------------------------------------------------------

_NUMBER_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")
_TOKEN_RE = re.compile(r"([MmLlHhVvZzCcAaSsQqTt])|" + _NUMBER_RE.pattern)

_REJECTED_ELEMENTS = {
    "rect", "circle", "ellipse", "line", "polyline", "polygon",
    "text", "tspan", "use", "symbol", "linearGradient", "radialGradient",
}
_IGNORED_ELEMENTS = {"svg", "g", "defs", "title", "desc", "metadata", "style"}


def _local_tag(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_svg(text: str, tol: float) -> VectorDrawing:
    if tol <= 0:
        raise DrawingFormatError("chord tolerance must be > 0")
    try:
        root = ElementTree.fromstring(text)
    except ElementTree.ParseError as exc:
        raise DrawingFormatError(f"malformed SVG: {exc}") from exc
    if _local_tag(root.tag) != "svg":
        raise DrawingFormatError("root element is not <svg>")
    strokes: list[tuple[Point, ...]] = []
    closed: list[bool] = []
    for index, elem in enumerate(root.iter()):
        tag = _local_tag(elem.tag)
        where = f"element {index} <{tag}>"
        if tag == "image":
            raise NonVectorContentError(f"{where}: embedded raster content")
        if "transform" in elem.attrib:
            raise UnsupportedSvgFeatureError(f"{where}: transform attribute")
        if tag == "path":
            for pts, is_closed in _parse_path_data(elem.attrib.get("d", ""), tol, where):
                strokes.append(pts)
                closed.append(is_closed)
        elif tag in _IGNORED_ELEMENTS:
            continue
        elif tag in _REJECTED_ELEMENTS:
            raise UnsupportedSvgFeatureError(f"{where}: <{tag}> outside the subset")
        else:
            raise UnsupportedSvgFeatureError(f"{where}: unrecognized element <{tag}>")
    return VectorDrawing(strokes=tuple(strokes), closed_flags=tuple(closed))


def _parse_path_data(d: str, tol: float, where: str):
    """Subpaths of one 'd' attribute as (points, closed) pairs."""
    tokens = []
    pos = 0
    for m in _TOKEN_RE.finditer(d):
        if d[pos:m.start()].strip(" ,\t\n\r"):
            raise DrawingFormatError(f"{where}: garbage in path data near offset {pos}")
        tokens.append((m.group(1), m.group(0), m.start()))
        pos = m.end()
    if d[pos:].strip(" ,\t\n\r"):
        raise DrawingFormatError(f"{where}: garbage at end of path data")

    subpaths = []
    points: list[Point] = []
    cur = (0.0, 0.0)
    start = (0.0, 0.0)
    i = 0

    def take_numbers(n, cmd, off):
        nonlocal i
        vals = []
        for _ in range(n):
            if i >= len(tokens) or tokens[i][0] is not None:
                raise DrawingFormatError(
                    f"{where}: command {cmd!r} at offset {off} expects {n} numbers")
            vals.append(float(tokens[i][1]))
            i += 1
        return vals

    def flush(is_closed):
        nonlocal points
        if points:
            deduped = _dedup(points)
            if is_closed and len(deduped) >= 3 and deduped[0] == deduped[-1]:
                deduped = deduped[:-1]
            if len(deduped) >= 2:
                subpaths.append((tuple(deduped), is_closed))
        points = []

    def ensure_started():
        # a draw command after Z continues from the closing point
        if not points:
            points.append(cur)

    while i < len(tokens):
        cmd, _, off = tokens[i]
        if cmd is None:
            raise DrawingFormatError(f"{where}: number without command at offset {off}")
        i += 1
        rel = cmd.islower()
        op = cmd.upper()
        if op in "ASQT":
            raise UnsupportedSvgFeatureError(
                f"{where}: path command {cmd!r} at offset {off} outside the subset "
                f"(arcs/quadratics/smooth curves are not accepted)")
        if op == "M":
            flush(False)
            x, y = take_numbers(2, cmd, off)
            cur = (cur[0] + x, cur[1] + y) if rel else (x, y)
            start = cur
            points = [cur]
            # further pairs are implicit line-tos
            while i < len(tokens) and tokens[i][0] is None:
                x, y = take_numbers(2, cmd, off)
                cur = (cur[0] + x, cur[1] + y) if rel else (x, y)
                points.append(cur)
        elif op == "L":
            ensure_started()
            x, y = take_numbers(2, cmd, off)
            cur = (cur[0] + x, cur[1] + y) if rel else (x, y)
            points.append(cur)
            while i < len(tokens) and tokens[i][0] is None:
                x, y = take_numbers(2, cmd, off)
                cur = (cur[0] + x, cur[1] + y) if rel else (x, y)
                points.append(cur)
        elif op == "H":
            ensure_started()
            while True:
                (x,) = take_numbers(1, cmd, off)
                cur = (cur[0] + x if rel else x, cur[1])
                points.append(cur)
                if i >= len(tokens) or tokens[i][0] is not None:
                    break
        elif op == "V":
            ensure_started()
            while True:
                (y,) = take_numbers(1, cmd, off)
                cur = (cur[0], cur[1] + y if rel else y)
                points.append(cur)
                if i >= len(tokens) or tokens[i][0] is not None:
                    break
        elif op == "C":
            ensure_started()
            while True:
                v = take_numbers(6, cmd, off)
                if rel:
                    p1 = (cur[0] + v[0], cur[1] + v[1])
                    p2 = (cur[0] + v[2], cur[1] + v[3])
                    p3 = (cur[0] + v[4], cur[1] + v[5])
                else:
                    p1, p2, p3 = (v[0], v[1]), (v[2], v[3]), (v[4], v[5])
                flatten_cubic(cur, p1, p2, p3, tol, points)
                cur = p3
                if i >= len(tokens) or tokens[i][0] is not None:
                    break
        elif op == "Z":
            flush(True)
            cur = start
        else:  # unreachable: token regex only admits the handled letters
            raise UnsupportedSvgFeatureError(f"{where}: path command {cmd!r}")
    flush(False)
    return subpaths


def _dedup(points: list[Point], eps: float = 1e-12) -> list[Point]:
    out = [points[0]]
    for p in points[1:]:
        q = out[-1]
        if abs(p[0] - q[0]) > eps or abs(p[1] - q[1]) > eps:
            out.append(p)
    return out


def _point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    if den == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / den
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def flatten_cubic(p0: Point, p1: Point, p2: Point, p3: Point, tol: float,
                  out: list[Point], _depth: int = 0) -> None:
    """Append a polyline approximation of the cubic (excluding p0) to out.

    Subdivides until both interior control points sit within tol of the
    chord; the convex-hull property then bounds the curve-to-chord distance
    by the same tol.
    """
    flat = max(_point_segment_distance(p1, p0, p3),
               _point_segment_distance(p2, p0, p3)) <= tol
    if flat or _depth >= 48:
        out.append(p3)
        return
    # de Casteljau split at t = 1/2
    m01 = ((p0[0] + p1[0]) / 2, (p0[1] + p1[1]) / 2)
    m12 = ((p1[0] + p2[0]) / 2, (p1[1] + p2[1]) / 2)
    m23 = ((p2[0] + p3[0]) / 2, (p2[1] + p3[1]) / 2)
    m012 = ((m01[0] + m12[0]) / 2, (m01[1] + m12[1]) / 2)
    m123 = ((m12[0] + m23[0]) / 2, (m12[1] + m23[1]) / 2)
    mid = ((m012[0] + m123[0]) / 2, (m012[1] + m123[1]) / 2)
    flatten_cubic(p0, m01, m012, mid, tol, out, _depth + 1)
    flatten_cubic(mid, m123, m23, p3, tol, out, _depth + 1)

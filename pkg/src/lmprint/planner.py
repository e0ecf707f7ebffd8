"""Toolpath planning: drawing + machine settings -> tap/move/lift actions.

Coordinates are millimetres throughout. A toolpath is a flat sequence of
actions: Tap (seal and press the bead at a point), Move (draw a straight
segment at a commanded speed and pressure), Lift (raise the head). Corner
handling follows a CornerPolicy; strokes are greedily reordered to cut
travel unless reordering is disabled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import MachineSettings, grams_to_newtons, validate_settings
from .drawing import VectorDrawing
from .environment import (DEFAULT_ENVIRONMENT, CornerPolicy, Environment,
                          segment_physics)
from .errors import DomainError, IllegalActionError, PlanError

Point = tuple[float, float]


@dataclass(frozen=True)
class Tap:
    """Seal the nozzle against the substrate at `at` with force_n newtons."""

    at: Point
    force_n: float

    def __post_init__(self):
        object.__setattr__(self, "at", (float(self.at[0]), float(self.at[1])))


@dataclass(frozen=True)
class Move:
    """Draw a straight segment to `to` at speed_mm_s under pressure_g grams."""

    to: Point
    speed_mm_s: float
    pressure_g: float

    def __post_init__(self):
        object.__setattr__(self, "to", (float(self.to[0]), float(self.to[1])))
        if self.speed_mm_s <= 0:
            raise DomainError("move speed must be > 0")


@dataclass(frozen=True)
class Lift:
    """Raise the head, ending the current trace."""


Action = Tap | Move | Lift


@dataclass(frozen=True)
class Toolpath:
    actions: tuple[Action, ...]
    drawing_id: str | None = None
    policy: str = ""
    settings: MachineSettings | None = None

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        for a in self.actions:
            if not isinstance(a, (Tap, Move, Lift)):
                raise PlanError(f"not a toolpath action: {a!r}")

    def __len__(self) -> int:
        return len(self.actions)

    def segments(self):
        """Yield (start, end, speed_mm_s, pressure_g) per Move, in order."""
        pos: Point | None = None
        for a in self.actions:
            if isinstance(a, Tap):
                pos = a.at
            elif isinstance(a, Move):
                if pos is None:
                    raise IllegalActionError("move before any tap")
                yield pos, a.to, a.speed_mm_s, a.pressure_g
                pos = a.to
            else:
                pos = pos  # Lift keeps XY position


# --------------------------------------------------------------------------
# corner geometry


def interior_angle_deg(a: Point, p: Point, b: Point) -> float:
    """Interior angle at p for the polyline a -> p -> b, in degrees.

    180 means collinear (no corner); small values mean a hairpin.
    Degenerate zero-length edges count as straight.
    """
    ux, uy = p[0] - a[0], p[1] - a[1]
    wx, wy = b[0] - p[0], b[1] - p[1]
    nu = math.hypot(ux, uy)
    nw = math.hypot(wx, wy)
    if nu == 0.0 or nw == 0.0:
        return 180.0
    c = (ux * wx + uy * wy) / (nu * nw)
    c = max(-1.0, min(1.0, c))
    return 180.0 - math.degrees(math.acos(c))


def _unit(dx: float, dy: float) -> tuple[float, float]:
    n = math.hypot(dx, dy)
    return dx / n, dy / n


def _fillet_arc(a: Point, p: Point, b: Point, radius_mm: float,
                tol_mm: float, threshold_deg: float) -> list[Point] | None:
    """Polyline for a tangent arc replacing the corner at p, or None.

    None means the corner is a reversal (or numerically straight) and
    cannot be filleted. The arc is trimmed so tangent points stay within
    half of each adjacent edge, shrinking the radius if necessary. Chord
    step is capped so the sagitta stays under tol_mm and the residual
    chord-to-chord corners stay at or above the sharpness threshold.
    """
    ux, uy = _unit(p[0] - a[0], p[1] - a[1])
    wx, wy = _unit(b[0] - p[0], b[1] - p[1])
    dot = max(-1.0, min(1.0, ux * wx + uy * wy))
    dev = math.acos(dot)                      # turn angle
    if dev < 1e-12 or dev > math.pi - 1e-9:
        return None
    phi = math.pi - dev                       # interior angle
    trim = radius_mm / math.tan(phi / 2.0)
    trim_max = 0.5 * min(math.hypot(p[0] - a[0], p[1] - a[1]),
                         math.hypot(b[0] - p[0], b[1] - p[1]))
    if trim > trim_max:
        trim = trim_max
        radius_mm = trim * math.tan(phi / 2.0)
    if radius_mm <= 0.0:
        return None
    t1 = (p[0] - ux * trim, p[1] - uy * trim)
    t2 = (p[0] + wx * trim, p[1] + wy * trim)
    bx, by = _unit(wx - ux, wy - uy)          # internal bisector
    dist = radius_mm / math.sin(phi / 2.0)
    cx, cy = p[0] + bx * dist, p[1] + by * dist
    # max angular step: sagitta bound and residual-corner bound
    if tol_mm < radius_mm:
        step_sag = 2.0 * math.acos(1.0 - tol_mm / radius_mm)
    else:
        step_sag = math.pi
    step_corner = (math.pi - math.radians(threshold_deg)) * (1.0 - 1e-9)
    step_max = min(step_sag, step_corner)
    if step_max <= 0.0:
        step_max = 1e-6
    n = max(1, math.ceil(dev / step_max))
    a1 = math.atan2(t1[1] - cy, t1[0] - cx)
    turn = dev if (ux * wy - uy * wx) > 0 else -dev
    pts = []
    for k in range(n + 1):
        ang = a1 + turn * (k / n)
        pts.append((cx + radius_mm * math.cos(ang),
                    cy + radius_mm * math.sin(ang)))
    pts[0] = t1
    pts[-1] = t2
    return pts


def _dedup(points: list[Point], eps: float = 1e-9) -> list[Point]:
    out = [points[0]]
    for q in points[1:]:
        if math.hypot(q[0] - out[-1][0], q[1] - out[-1][1]) > eps:
            out.append(q)
    return out


def _cyclic_sharp(vertices: list[Point], policy: CornerPolicy) -> list[bool]:
    n = len(vertices)
    flags = []
    for i in range(n):
        ang = interior_angle_deg(vertices[i - 1], vertices[i],
                                 vertices[(i + 1) % n])
        flags.append(policy.is_sharp(ang))
    return flags


def apply_corner_policy(vertices: list[Point], closed: bool,
                        policy: CornerPolicy,
                        chord_tolerance_mm: float) -> list[tuple[list[Point], list[float]]]:
    """Resolve corners of one stroke into drawable sub-paths.

    Returns a list of (points, speed_factors) pairs; speed_factors has one
    multiplier per edge. Multiple sub-paths arise when the policy breaks
    the stroke (lift-and-retap, or fillet falling back at a reversal).
    """
    verts = list(vertices)
    if closed and len(verts) >= 3:
        sharp = _cyclic_sharp(verts, policy)
        if policy.strategy == "slowdown":
            n = len(verts)
            factors = [1.0] * n
            for i, s in enumerate(sharp):
                if s:
                    factors[(i - 1) % n] = policy.slowdown_factor
                    factors[i] = policy.slowdown_factor
            return [(verts + [verts[0]], factors)]
        if policy.strategy == "lift-and-retap":
            # start the loop at a sharp corner when there is one, so the
            # natural tap/lift break absorbs it
            if any(sharp):
                k = sharp.index(True)
                verts = verts[k:] + verts[:k]
            path = verts + [verts[0]]
            return _split_at_sharp(path, policy)
        # fillet: start mid-edge so every original vertex is interior
        mid = ((verts[0][0] + verts[1][0]) / 2.0,
               (verts[0][1] + verts[1][1]) / 2.0)
        path = [mid] + verts[1:] + [verts[0], mid]
        return _fillet_path(path, policy, chord_tolerance_mm)

    path = list(verts)
    if closed:  # degenerate 2-vertex loop: out and back
        path = path + [path[0]]
    if policy.strategy == "slowdown":
        factors = [1.0] * (len(path) - 1)
        for i in range(1, len(path) - 1):
            if policy.is_sharp(interior_angle_deg(path[i - 1], path[i],
                                                  path[i + 1])):
                factors[i - 1] = policy.slowdown_factor
                factors[i] = policy.slowdown_factor
        return [(path, factors)]
    if policy.strategy == "lift-and-retap":
        return _split_at_sharp(path, policy)
    return _fillet_path(path, policy, chord_tolerance_mm)


def _split_at_sharp(path: list[Point],
                    policy: CornerPolicy) -> list[tuple[list[Point], list[float]]]:
    subs = []
    cur = [path[0]]
    for i in range(1, len(path)):
        cur.append(path[i])
        if i < len(path) - 1 and policy.is_sharp(
                interior_angle_deg(path[i - 1], path[i], path[i + 1])):
            subs.append((cur, [1.0] * (len(cur) - 1)))
            cur = [path[i]]
    subs.append((cur, [1.0] * (len(cur) - 1)))
    return subs


def _fillet_path(path: list[Point], policy: CornerPolicy,
                 tol_mm: float) -> list[tuple[list[Point], list[float]]]:
    subs = []
    cur = [path[0]]
    for i in range(1, len(path) - 1):
        a, p, b = path[i - 1], path[i], path[i + 1]
        if not policy.is_sharp(interior_angle_deg(a, p, b)):
            cur.append(p)
            continue
        arc = _fillet_arc(a, p, b, policy.fillet_radius_mm, tol_mm,
                          policy.threshold_angle)
        if arc is None:
            # reversal: no tangent arc exists; break the stroke instead
            cur.append(p)
            subs.append(cur)
            cur = [p]
        else:
            cur.extend(arc)
    cur.append(path[-1])
    subs.append(cur)
    out = []
    for points in subs:
        points = _dedup(points)
        if len(points) >= 2:
            out.append((points, [1.0] * (len(points) - 1)))
    return out


# --------------------------------------------------------------------------
# stroke ordering


def _entry_exit(drawing: VectorDrawing, index: int) -> tuple[Point, Point]:
    stroke = drawing.strokes[index]
    if drawing.closed_flags[index]:
        return stroke[0], stroke[0]
    return stroke[0], stroke[-1]


def _travel_length(drawing: VectorDrawing, order: tuple[int, ...],
                   origin: Point) -> float:
    pos = origin
    total = 0.0
    for i in order:
        entry, exit_ = _entry_exit(drawing, i)
        total += math.hypot(entry[0] - pos[0], entry[1] - pos[1])
        pos = exit_
    return total

def order_strokes(drawing: VectorDrawing,
                  origin: Point = (0.0, 0.0)) -> tuple[int, ...]:
    """Greedy nearest-start ordering of strokes, measured from origin.

    Ties go to the lowest stroke index. If the greedy tour travels farther
    than the drawing's own order (greedy is only a heuristic), the original
    order is returned instead, so the result never loses to the identity.
    """
    n = len(drawing.strokes)
    remaining = set(range(n))
    order: list[int] = []
    pos = origin
    while remaining:
        best = min(remaining, key=lambda i: (
            math.hypot(_entry_exit(drawing, i)[0][0] - pos[0],
                       _entry_exit(drawing, i)[0][1] - pos[1]), i))
        order.append(best)
        remaining.discard(best)
        pos = _entry_exit(drawing, best)[1]
    greedy = tuple(order)
    identity = tuple(range(n))
    if _travel_length(drawing, greedy, origin) <= _travel_length(
            drawing, identity, origin):
        return greedy
    return identity


# --------------------------------------------------------------------------
# planning and estimating


def plan(drawing: VectorDrawing, settings: MachineSettings,
         policy: CornerPolicy | None = None,
         environment: Environment | None = None, *,
         reorder: bool = True) -> Toolpath:
    """Turn a drawing into a toolpath at the given machine settings.

    Settings are validated against the machine limits first; hard
    violations raise PlanError (quality warnings do not stop planning, the
    simulator flags them per segment). Each stroke becomes Tap, Moves and
    a final Lift, with corners resolved by the policy.
    """
    env = environment if environment is not None else DEFAULT_ENVIRONMENT
    pol = policy if policy is not None else env.policy
    verdict = validate_settings(settings, env.limits, env.speed_calibration,
                                env.pressure_calibration)
    if verdict.violations:
        raise PlanError("; ".join(verdict.violations),
                        violations=tuple(verdict.violations))
    speed = verdict.speed_mm_s
    pressure_g = verdict.force_g
    force_n = grams_to_newtons(pressure_g)

    order = order_strokes(drawing) if reorder else tuple(
        range(len(drawing.strokes)))
    actions: list[Action] = []
    for idx in order:
        verts = list(drawing.strokes[idx])
        closed = drawing.closed_flags[idx]
        for points, factors in apply_corner_policy(
                verts, closed, pol, env.chord_tolerance_mm):
            actions.append(Tap(at=points[0], force_n=force_n))
            for k in range(1, len(points)):
                actions.append(Move(to=points[k],
                                    speed_mm_s=speed * factors[k - 1],
                                    pressure_g=pressure_g))
            actions.append(Lift())
    return Toolpath(actions=tuple(actions), drawing_id=drawing.drawing_id,
                    policy=pol.describe(), settings=settings)


@dataclass(frozen=True)
class PlanEstimate:
    print_time_s: float
    ink_volume_mm3: float


def estimate(toolpath: Toolpath,
             environment: Environment | None = None) -> PlanEstimate:
    """Print time and deposited ink volume for a toolpath.

    Time is segment length over commanded speed plus one dwell per Tap and
    per Lift. Volume integrates the gap flux of each segment over its
    duration, using the same per-segment physics as the simulator.
    """
    env = environment if environment is not None else DEFAULT_ENVIRONMENT
    time_s = 0.0
    volume_m3 = 0.0
    cache: dict[tuple[float, float], float] = {}
    pos: Point | None = None
    for a in toolpath.actions:
        if isinstance(a, Tap):
            pos = a.at
            time_s += env.dwell_s
        elif isinstance(a, Move):
            if pos is None:
                raise IllegalActionError("move before any tap")
            length = math.hypot(a.to[0] - pos[0], a.to[1] - pos[1])
            dt = length / a.speed_mm_s
            key = (a.speed_mm_s, a.pressure_g)
            if key not in cache:
                cache[key] = segment_physics(a.speed_mm_s, a.pressure_g,
                                             env).flux_m3_s
            volume_m3 += cache[key] * dt
            time_s += dt
            pos = a.to
        else:
            time_s += env.dwell_s
    return PlanEstimate(print_time_s=time_s, ink_volume_mm3=volume_m3 * 1e9)

"""Built-in sample drawings: line, square, grid antenna, IC-style sketch.

These are constructed test patterns at realistic print scales; the grid
antenna uses a 4.8 mm pitch. Each builder returns a VectorDrawing; the
shipped samples/ directory holds their serialized form.
"""

from __future__ import annotations

from .drawing import VectorDrawing


def straight_line(length_mm: float = 60.0) -> VectorDrawing:
    """One horizontal stroke with a pad at each end."""
    return VectorDrawing(
        strokes=(((0.0, 0.0), (length_mm, 0.0)),),
        closed_flags=(False,),
        pads={"A": (0.0, 0.0), "B": (length_mm, 0.0)},
        drawing_id="straight-line",
    )


def square(side_mm: float = 20.0) -> VectorDrawing:
    """A closed square; exercises corner policies on all four corners."""
    s = side_mm
    return VectorDrawing(
        strokes=(((0.0, 0.0), (s, 0.0), (s, s), (0.0, s)),),
        closed_flags=(True,),
        pads={"corner": (0.0, 0.0)},
        drawing_id="square",
    )


def grid_antenna(rows: int = 7, cols: int = 15,
                 pitch_mm: float = 4.8) -> VectorDrawing:
    """Rectangular grid of rows horizontal and cols vertical lines.

    Every crossing touches, so the whole grid is one electrical net. The
    default 7 x 15 at 4.8 mm pitch spans 67.2 x 28.8 mm.
    """
    if rows < 2 or cols < 2:
        raise ValueError("grid needs at least 2 rows and 2 columns")
    w = (cols - 1) * pitch_mm
    h = (rows - 1) * pitch_mm
    strokes = []
    for r in range(rows):
        y = r * pitch_mm
        strokes.append(((0.0, y), (w, y)))
    for c in range(cols):
        x = c * pitch_mm
        strokes.append(((x, 0.0), (x, h)))
    return VectorDrawing(
        strokes=tuple(strokes),
        closed_flags=(False,) * len(strokes),
        pads={"feed": (0.0, 0.0), "tip": (w, h)},
        drawing_id=f"grid-antenna-{rows}x{cols}",
    )


def ic_sketch() -> VectorDrawing:
    """PCB-style fan-out: eight pin stubs around a footprint plus one route.

    The stubs are separate nets; the routed trace joins pins L1 and B1 so
    connectivity queries have one true pair and many false ones.
    """
    stubs = {
        "L1": ((20.0, 22.5), (10.0, 22.5)),
        "L2": ((20.0, 27.5), (10.0, 27.5)),
        "R1": ((30.0, 22.5), (40.0, 22.5)),
        "R2": ((30.0, 27.5), (40.0, 27.5)),
        "T1": ((22.5, 30.0), (22.5, 40.0)),
        "T2": ((27.5, 30.0), (27.5, 40.0)),
        "B1": ((22.5, 20.0), (22.5, 10.0)),
        "B2": ((27.5, 20.0), (27.5, 10.0)),
    }
    route = ((10.0, 22.5), (5.0, 22.5), (5.0, 5.0), (22.5, 5.0), (22.5, 10.0))
    names = sorted(stubs)
    strokes = tuple(stubs[n] for n in names) + (route,)
    pads = {n: stubs[n][1] for n in names}
    return VectorDrawing(
        strokes=strokes,
        closed_flags=(False,) * len(strokes),
        pads=pads,
        drawing_id="ic-sketch",
    )


SAMPLE_BUILDERS = {
    "straight-line": straight_line,
    "square": square,
    "grid-antenna": grid_antenna,
    "ic-sketch": ic_sketch,
}


def get_sample(name: str) -> VectorDrawing:
    try:
        return SAMPLE_BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown sample {name!r}; known: "
                       f"{sorted(SAMPLE_BUILDERS)}")

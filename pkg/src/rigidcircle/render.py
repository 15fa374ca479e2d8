"""SVG drawing of a scene.

Disks become ``<circle>``, rectangles outlined ``<rect>``, the J segments
``<line>`` pairs, and an optional neighbour chain a dashed ``<polyline>``.
Coordinates are written with 12 significant digits, the y axis flipped by
negation inside the view box, and stroke widths scale with the window.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import from_json, is_log, to_float

CANVAS_PX = 800
STROKE_FRACTION = Fraction(1, 800)


class RenderError(ValueError):
    pass


def _num(v) -> str:
    return format(float(v), ".12g")


def _val(j):
    v = from_json(j)
    if is_log(v):
        raise RenderError("log-scale geometry cannot be drawn")
    return v


def scene_shapes(scene_json: dict) -> list[dict]:
    """Flatten scene JSON objects into drawable shapes with exact coordinates."""
    shapes = []
    for o in scene_json["objects"]:
        kind = o["type"]
        if kind == "rect":
            cx, cy = (_val(v) for v in o["center"])
            t, r = _val(o["half_width"]), _val(o["half_height"])
            shapes.append({"type": "rect", "word": o["word"], "box": (cx - t, cy - r, cx + t, cy + r)})
        elif kind == "disk":
            cx, cy = (_val(v) for v in o["center"])
            r = _val(o["radius"])
            shapes.append({"type": "disk", "word": o["word"], "side": o["side"],
                           "center": (cx, cy), "radius": r, "box": (cx - r, cy - r, cx + r, cy + r)})
        elif kind == "segment":
            if o["kind"] == "I":
                continue
            x, lo, hi = _val(o["x"]), _val(o["y_lo"]), _val(o["y_hi"])
            shapes.append({"type": "segment", "word": o["word"], "kind": o["kind"],
                           "side": o["side"], "box": (x, lo, x, hi)})
        else:
            raise RenderError(f"unknown object type {kind!r}")
    return shapes


def _bbox(boxes):
    return (min(b[0] for b in boxes), min(b[1] for b in boxes),
            max(b[2] for b in boxes), max(b[3] for b in boxes))


def _meets(a, b) -> bool:
    return not (a[2] < b[0] or b[2] < a[0] or a[3] < b[1] or b[3] < a[1])


def render_svg(scene_json: dict, window=None, chain_points=None) -> str:
    """Deterministic SVG text for the scene inside ``window = (x0, y0, x1, y1)``."""
    shapes = scene_shapes(scene_json)
    if not shapes:
        raise RenderError("scene has no objects")
    full = _bbox([s["box"] for s in shapes])
    if window is None:
        pad = max(full[2] - full[0], full[3] - full[1]) / 20
        window = (full[0] - pad, full[1] - pad, full[2] + pad, full[3] + pad)
    window = tuple(Fraction(v) if not isinstance(v, Fraction) else v for v in window)
    x0, y0, x1, y1 = window
    if not (x1 > x0 and y1 > y0):
        raise RenderError("window must have x0 < x1 and y0 < y1")
    visible = [s for s in shapes if _meets(s["box"], window)]
    if not visible:
        raise RenderError("window does not meet the scene")
    w, h = x1 - x0, y1 - y0
    stroke = _num(max(w, h) * STROKE_FRACTION)
    px_h = max(1, round(CANVAS_PX * float(h / w)))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS_PX}" height="{px_h}" '
        f'viewBox="{_num(x0)} {_num(-y1)} {_num(w)} {_num(h)}">',
        f'<g fill="none" stroke="black" stroke-width="{stroke}">',
    ]
    for s in visible:
        if s["type"] == "rect":
            bx0, by0, bx1, by1 = s["box"]
            lines.append(f'<rect x="{_num(bx0)}" y="{_num(-by1)}" width="{_num(bx1 - bx0)}" '
                         f'height="{_num(by1 - by0)}" stroke="#888888" data-word="{s["word"]}"/>')
        elif s["type"] == "disk":
            cx, cy = s["center"]
            lines.append(f'<circle cx="{_num(cx)}" cy="{_num(-cy)}" r="{_num(s["radius"])}" '
                         f'data-id="{s["word"]}:{s["side"]}"/>')
        else:
            x, lo, _, hi = s["box"]
            lines.append(f'<line x1="{_num(x)}" y1="{_num(-lo)}" x2="{_num(x)}" y2="{_num(-hi)}" '
                         f'data-seg="{s["word"]}:{s["side"]}:{s["kind"]}"/>')
    if chain_points:
        pts = " ".join(f"{_num(to_float(x))},{_num(-to_float(y))}" for x, y in chain_points)
        lines.append(f'<polyline points="{pts}" stroke="#c00000" stroke-dasharray="'
                     f'{_num(max(w, h) / 100)} {_num(max(w, h) / 200)}" class="chain"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)

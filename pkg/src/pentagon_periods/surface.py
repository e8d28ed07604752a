"""Exact straight-line flow on the golden L translation surface.

The L is cut into three rectangles

    S = [0,1] x [0,1],   P = [1,phi] x [0,1],   Q = [0,1] x [1,phi]

whose twelve corners are all the single cone point (angle 6 pi).  Every
rectangle wall is one of six segments: four edge pairs glued by translation
and the two interior cuts x = 1 (between S and P) and y = 1 (between S and Q).

A trace follows a line leaving the cone point from the corner (0, 0) of S,
shifted sideways by an infinitesimal epsilon.  Coordinates are pairs
(real, eps) compared lexicographically, so the shifted line never meets the
cone point: its real part is the saddle connection, and the shifted line
itself is the closed geodesic running alongside it in the neighbouring
cylinder.  All arithmetic is exact in Q(phi).
"""

from dataclasses import dataclass, field
from itertools import permutations

from .errors import CalibrationError, GeometryError
from .golden import GoldenInt, GoldenRat

_0 = GoldenRat(0)
_1 = GoldenRat(1)
_PHI = GoldenRat(GoldenInt(0, 1))

COUNTER_LABELS = ("EF", "DG", "EG", "AF")  # counted a, b, c, d times


class Eps:
    """real + eps * inf with eps a positive infinitesimal."""

    __slots__ = ("r", "e")

    def __init__(self, r, e=_0):
        self.r = r
        self.e = e

    def __add__(self, other):
        if isinstance(other, Eps):
            return Eps(self.r + other.r, self.e + other.e)
        return Eps(self.r + other, self.e)

    def __sub__(self, other):
        if isinstance(other, Eps):
            return Eps(self.r - other.r, self.e - other.e)
        return Eps(self.r - other, self.e)

    def scale(self, c):
        return Eps(self.r * c, self.e * c)

    def div(self, c):
        inv = _1 / c
        return Eps(self.r * inv, self.e * inv)

    def sign(self):
        s = self.r.sign()
        return s if s else self.e.sign()

    def __eq__(self, other):
        other = other if isinstance(other, Eps) else Eps(other)
        return self.r == other.r and self.e == other.e

    def __hash__(self):
        return hash((self.r, self.e))

    def cmp(self, other):
        return (self - other).sign()

    def __repr__(self):
        return f"Eps({self.r}, {self.e})"


@dataclass(frozen=True)
class Rect:
    name: str
    x0: GoldenRat
    x1: GoldenRat
    y0: GoldenRat
    y1: GoldenRat

    def corners(self):
        return [(x, y) for x in (self.x0, self.x1) for y in (self.y0, self.y1)]

    def area(self):
        return (self.x1 - self.x0) * (self.y1 - self.y0)


@dataclass(frozen=True)
class Wall:
    """Leaving `rect` through `side` lands in `target` after adding `shift`."""

    rect: str
    side: str
    target: str
    shift: tuple
    label: str


@dataclass(frozen=True)
class SurfaceSpec:
    rects: dict
    walls: dict  # (rect, side) -> Wall
    segments: dict  # label -> description

    def area(self):
        return sum((r.area() for r in self.rects.values()), _0)

    def cone_angle_multiple(self):
        """Total angle at the cone point in units of pi/2 (four per rectangle)."""
        return 4 * len(self.rects)

    def genus(self):
        # Gauss-Bonnet: 2 pi (2 - 2g) = -(cone angle - 2 pi)
        excess = self.cone_angle_multiple() - 4  # in units of pi/2
        return (excess // 4 + 2) // 2

    def wall_segment(self, rect, side):
        r = self.rects[rect]
        if side == "left":
            return (r.x0, r.y0), (r.x0, r.y1)
        if side == "right":
            return (r.x1, r.y0), (r.x1, r.y1)
        if side == "bottom":
            return (r.x0, r.y0), (r.x1, r.y0)
        return (r.x0, r.y1), (r.x1, r.y1)


_OPPOSITE = {"left": "right", "right": "left", "top": "bottom", "bottom": "top"}

SEGMENT_DESCRIPTIONS = {
    "bottom_short": "[0,1]x{0} glued to [0,1]x{phi}",
    "bottom_long": "[1,phi]x{0} glued to [1,phi]x{1}",
    "left_low": "{0}x[0,1] glued to {phi}x[0,1]",
    "left_high": "{0}x[1,phi] glued to {1}x[1,phi]",
    "cut_x1": "interior cut {1}x[0,1]",
    "cut_y1": "interior cut [0,1]x{1}",
}


def build_surface():
    rects = {
        "S": Rect("S", _0, _1, _0, _1),
        "P": Rect("P", _1, _PHI, _0, _1),
        "Q": Rect("Q", _0, _1, _1, _PHI),
    }
    z = (_0, _0)
    spec = [
        ("S", "top", "Q", z, "cut_y1"),
        ("S", "bottom", "Q", (_0, _PHI), "bottom_short"),
        ("S", "right", "P", z, "cut_x1"),
        ("S", "left", "P", (_PHI, _0), "left_low"),
        ("P", "top", "P", (_0, -_1), "bottom_long"),
        ("P", "bottom", "P", (_0, _1), "bottom_long"),
        ("P", "right", "S", (-_PHI, _0), "left_low"),
        ("P", "left", "S", z, "cut_x1"),
        ("Q", "top", "S", (_0, -_PHI), "bottom_short"),
        ("Q", "bottom", "S", z, "cut_y1"),
        ("Q", "right", "Q", (-_1, _0), "left_high"),
        ("Q", "left", "Q", (_1, _0), "left_high"),
    ]
    walls = {(r, s): Wall(r, s, t, sh, lab) for r, s, t, sh, lab in spec}
    return SurfaceSpec(rects, walls, dict(SEGMENT_DESCRIPTIONS))


def check_identifications(surface):
    """Every wall is glued by a translation onto the opposite wall of equal length."""
    problems = []
    for (rect, side), wall in surface.walls.items():
        (p0, p1) = surface.wall_segment(rect, side)
        q0, q1 = surface.wall_segment(wall.target, _OPPOSITE[side])
        dx, dy = wall.shift
        if (p0[0] + dx, p0[1] + dy) != q0 or (p1[0] + dx, p1[1] + dy) != q1:
            problems.append((rect, side))
        back = surface.walls[(wall.target, _OPPOSITE[side])]
        if back.target != rect or back.label != wall.label:
            problems.append((rect, side, "not symmetric"))
    return problems


SURFACE = build_surface()


@dataclass
class TraceResult:
    closed: bool  # saddle connection reached the cone point
    holonomy: tuple  # saddle-connection holonomy (x, y)
    crossings: dict  # segment label -> crossings of the shifted closed geodesic
    steps: int
    loop_closed: bool = False
    loop_holonomy: tuple = None
    side: str = "left"
    sector: str = "S"
    path: list = field(default_factory=list, repr=False)

    def counters(self, table):
        """Crossing counts in counter order (a, b, c, d) under a SegmentTable or dict."""
        return tuple(self.crossings.get(table[label], 0) for label in COUNTER_LABELS)


def _as_vector(direction):
    if len(direction) == 4:
        a, b, c, d = direction
        return GoldenRat(GoldenInt(a, b)), GoldenRat(GoldenInt(c, d))
    x, y = direction
    return GoldenRat.coerce(x), GoldenRat.coerce(y)


def _inside(rect, px, py, vx, vy):
    for p, lo, hi, v in ((px, rect.x0, rect.x1, vx), (py, rect.y0, rect.y1, vy)):
        a, b = p.cmp(Eps(lo)), p.cmp(Eps(hi))
        s = v.sign()
        if s > 0 and not (a >= 0 and b < 0):
            return False
        if s < 0 and not (a > 0 and b <= 0):
            return False
        if s == 0 and not (a > 0 and b < 0):
            return False
    return True


def _escape_side(rect, px, py):
    if px.cmp(Eps(rect.x0)) < 0:
        return "left"
    if px.cmp(Eps(rect.x1)) > 0:
        return "right"
    if py.cmp(Eps(rect.y0)) < 0:
        return "bottom"
    if py.cmp(Eps(rect.y1)) > 0:
        return "top"
    return None


SECTORS = ("S", "P", "Q")


def trace_geodesic(direction, max_steps=None, side=None, sector=None, surface=SURFACE, record_path=False):
    """Trace from the cone point in `direction`.

    `direction` is a quadruple (a, b, c, d) or an exact pair (x, y).  The cone
    angle is 6 pi, so every direction leaves the cone point in three sectors,
    one at a corner of each rectangle; `sector` names the rectangle ("S" is
    the corner at the origin).  With sector=None the sectors are tried in
    order S, P, Q and the first whose saddle connection has holonomy exactly
    equal to the direction vector is used (the long saddle connection);
    failing that the S result is returned.

    `side` picks which side of the saddle connection the shifted closed
    geodesic runs on ("left" or "right" of the direction of travel).  With
    side=None the side whose closed geodesic has holonomy equal to the
    direction vector (the thin cylinder) is chosen; the other side runs
    through the fat cylinder, whose core holonomy is phi times as long.
    """
    if side is None:
        target = _exact_target(direction)
        res = trace_geodesic(direction, max_steps, "left", sector, surface, record_path)
        if res.loop_holonomy == target:
            return res
        other = trace_geodesic(direction, max_steps, "right", sector, surface, record_path)
        return other if other.loop_holonomy == target else res
    if sector is None:
        target = _exact_target(direction)
        first = None
        for name in SECTORS:
            res = trace_geodesic(direction, max_steps, side, name, surface, record_path)
            if res.holonomy == target:
                return res
            first = first or res
        return first
    vx, vy = _as_vector(direction)
    if not vx and not vy:
        raise ValueError("direction must be nonzero")
    if max_steps is None:
        ell = sum(abs(x) for x in direction) if len(direction) == 4 else 10
        max_steps = max(10 * ell * ell, 100)
    nx, ny = (-vy, vx) if side == "left" else (vy, -vx)

    rect_name = sector
    home = surface.rects[sector]
    cx = home.x1 if vx.sign() < 0 else home.x0
    cy = home.y1 if vy.sign() < 0 else home.y0
    px, py = Eps(cx, nx), Eps(cy, ny)
    for _ in range(4):
        rect = surface.rects[rect_name]
        if _inside(rect, px, py, vx, vy):
            break
        wall_side = _escape_side(rect, px, py)
        if wall_side is None:
            raise GeometryError("starting point sits on a wall")
        wall = surface.walls[(rect_name, wall_side)]
        px, py = px + wall.shift[0], py + wall.shift[1]
        rect_name = wall.target
    else:
        raise GeometryError("could not place the starting point")
    start = (rect_name, px, py)

    time = Eps(_0)
    crossings = {}
    sc_time = None
    loop_time = None
    path = []
    steps = 0
    while steps < max_steps:
        rect = surface.rects[rect_name]
        tx = ty = None
        if vx.sign() > 0:
            tx = (Eps(rect.x1) - px).div(vx)
        elif vx.sign() < 0:
            tx = (Eps(rect.x0) - px).div(vx)
        if vy.sign() > 0:
            ty = (Eps(rect.y1) - py).div(vy)
        elif vy.sign() < 0:
            ty = (Eps(rect.y0) - py).div(vy)
        if ty is None or (tx is not None and tx.cmp(ty) < 0):
            t, axis = tx, "x"
        else:
            t, axis = ty, "y"

        if rect_name == start[0] and steps > 0:
            s = _time_to(start[1], start[2], px, py, vx, vy)
            if s is not None and s.sign() > 0 and s.cmp(t) < 0:
                time = time + s
                loop_time = time
                if record_path:
                    path.append((rect_name, px, py, px + s.scale(vx), py + s.scale(vy)))
                break

        ex, ey = px + t.scale(vx), py + t.scale(vy)
        if record_path:
            path.append((rect_name, px, py, ex, ey))
        time = time + t
        if sc_time is None and time.r.sign() > 0:
            if ex.r in (rect.x0, rect.x1) and ey.r in (rect.y0, rect.y1):
                sc_time = time.r

        if axis == "x":
            wall_side = "right" if vx.sign() > 0 else "left"
        else:
            wall_side = "top" if vy.sign() > 0 else "bottom"
        wall = surface.walls[(rect_name, wall_side)]
        px, py = ex + wall.shift[0], ey + wall.shift[1]
        rect_name = wall.target
        crossings[wall.label] = crossings.get(wall.label, 0) + 1
        steps += 1
        if not _inside(surface.rects[rect_name], px, py, vx, vy):
            raise GeometryError(f"point ({px}, {py}) left rectangle {rect_name}")
        if rect_name == start[0] and px == start[1] and py == start[2]:
            loop_time = time
            break

    holonomy = _vec(sc_time, vx, vy) if sc_time is not None else None
    loop_hol = None
    if loop_time is not None:
        if loop_time.e.sign() != 0:
            raise GeometryError("closed geodesic length depends on the offset")
        loop_hol = _vec(loop_time.r, vx, vy)
    return TraceResult(
        closed=sc_time is not None,
        holonomy=holonomy,
        crossings=crossings,
        steps=steps,
        loop_closed=loop_time is not None,
        loop_holonomy=loop_hol,
        side=side,
        sector=sector,
        path=path,
    )


def _exact_target(direction):
    if len(direction) == 4:
        a, b, c, d = direction
        return (GoldenInt(a, b), GoldenInt(c, d))
    return _as_vector(direction)


def _time_to(qx, qy, px, py, vx, vy):
    """Time s with p + s v = q, or None when q is not on the line."""
    if vx.sign():
        s = (qx - px).div(vx)
        return s if (py + s.scale(vy)) == qy else None
    s = (qy - py).div(vy)
    return s if (px + s.scale(vx)) == qx else None


def _vec(t, vx, vy):
    x, y = t * vx, t * vy
    return (x.num if x.den == 1 else x, y.num if y.den == 1 else y)


# ---- calibration ---------------------------------------------------------------


@dataclass(frozen=True)
class SegmentTable:
    """Counter label -> surface segment, plus segments indistinguishable from it.

    For first-quadrant flow every entry into P through the cut x = 1 leaves
    through the glued edge {phi} x [0, 1], and every entry into Q through the
    cut y = 1 leaves through its top edge, so those pairs always carry equal
    crossing counts.  `equivalent` lists such twins for each counter.
    """

    segments: dict
    equivalent: dict

    def __getitem__(self, label):
        return self.segments[label]

    def endpoints(self, label, surface=SURFACE):
        for (rect, side), wall in surface.walls.items():
            if wall.label == self.segments[label]:
                return surface.wall_segment(rect, side)
        raise KeyError(label)

    def to_dict(self):
        return {"segments": dict(self.segments), "equivalent": {k: list(v) for k, v in self.equivalent.items()}}


def calibration_samples(vectors, max_ell=12):
    samples = []
    for v in vectors:
        v = tuple(int(x) for x in v)
        if sum(v) > max_ell:
            continue
        tr = trace_geodesic(v)
        if not tr.loop_closed:
            raise CalibrationError(f"trace of {v} did not close")
        samples.append((v, tr.crossings))
    return samples


def calibrate_segments(vectors, max_ell=12):
    """Bind the counters EF, DG, EG, AF (a, b, c, d) to surface segments.

    Every orbit vector (an OrbitCensus or an iterable of quadruples) with
    l <= max_ell is traced, and each injective assignment of the four counters
    to the six candidate segments is tested against crossings == (a, b, c, d).
    The consistent assignments must agree up to segments whose counts coincide
    on every sample; the first in candidate order is returned.
    """
    vectors = getattr(vectors, "vectors", vectors)
    samples = calibration_samples(vectors, max_ell)
    if not samples:
        raise CalibrationError("no vectors to calibrate against")
    found = [
        combo
        for combo in permutations(SEGMENT_DESCRIPTIONS, 4)
        if all(tuple(cr.get(lab, 0) for lab in combo) == v for v, cr in samples)
    ]
    if not found:
        raise CalibrationError("no assignment of counters to segments reproduces (a, b, c, d)")

    def profile(label):
        return tuple(cr.get(label, 0) for _, cr in samples)

    equivalent = {}
    for i, counter in enumerate(COUNTER_LABELS):
        choices = sorted({combo[i] for combo in found}, key=list(SEGMENT_DESCRIPTIONS).index)
        if len({profile(lab) for lab in choices}) != 1:
            raise CalibrationError(f"counter {counter} is ambiguous between {choices}")
        equivalent[counter] = tuple(choices)
    return SegmentTable({c: equivalent[c][0] for c in COUNTER_LABELS}, equivalent)


def svg_path(result, scale=200.0):
    """SVG drawing of the L with the traced path; diagnostic only."""
    phi = float(_PHI)
    h = phi * scale
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{phi * scale + 20:.0f}" height="{h + 20:.0f}">',
        '<g transform="translate(10,10)">',
        f'<path d="M0,{h} L{phi * scale},{h} L{phi * scale},{h - scale} L{scale},{h - scale} '
        f'L{scale},0 L0,0 Z" fill="none" stroke="black"/>',
    ]
    for _, sx, sy, ex, ey in result.path:
        x0, y0, x1, y1 = (float(c.r) * scale for c in (sx, sy, ex, ey))
        parts.append(f'<line x1="{x0:.3f}" y1="{h - y0:.3f}" x2="{x1:.3f}" y2="{h - y1:.3f}" stroke="red"/>')
    parts.append("</g></svg>")
    return "\n".join(parts)

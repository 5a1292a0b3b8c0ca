"""Parametric 2D transformer cross-sections.

Builds the tagged region decomposition (core, per-turn conductors,
insulation, bobbin, ambient) for the six reference structures and
arbitrary variants:

* EE / UU cores: planar analysis plane with an out-of-plane depth equal to
  the core depth; every turn appears as a go and a return conductor.
* Toroids with overlaid full-circumference windings: axisymmetric r-z
  half-plane. The azimuthal smearing of a full 1-layer toroidal winding is
  essentially exact; each winding becomes a ring of wire cross-sections
  around the core cross-section, and carries its ampere-turns poloidally.
* Toroids with sector (non-overlaid) windings: the two windings occupy
  opposite halves of the circumference, which no axisymmetric model can
  express (their leakage field is azimuthal-position dependent). These are
  unrolled into an equivalent planar core ring of the same cross-section
  and a window sized from the bore, with the windings on opposite limbs.

All coordinates are meters. Scenario files store millimeters.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from hftx.materials import MaterialCatalog, default_catalog


class GeometryError(ValueError):
    pass


PLANAR = "PLANAR_WITH_DEPTH"
AXISYMMETRIC = "AXISYMMETRIC"

PRIMARY = "PRIMARY"
SECONDARY = "SECONDARY"


# --------------------------------------------------------------------------
# shapes

@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float

    @property
    def area(self) -> float:
        return math.pi * self.r * self.r

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.cx - self.r, self.cy - self.r,
                self.cx + self.r, self.cy + self.r)


@dataclass(frozen=True)
class Polygon:
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.points) < 3:
            raise GeometryError("polygon needs >= 3 points")
        if _shoelace(self.points) < 0.0:
            object.__setattr__(self, "points", tuple(reversed(self.points)))

    @property
    def area(self) -> float:
        return _shoelace(self.points)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return (min(xs), min(ys), max(xs), max(ys))


Shape = Circle | Polygon


def _shoelace(pts) -> float:
    s = 0.0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def rect(x0: float, y0: float, x1: float, y1: float) -> Polygon:
    return Polygon(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))


def rounded_rect(x0: float, y0: float, x1: float, y1: float, offset: float,
                 pts_per_corner: int = 12) -> Polygon:
    """Rectangle outset by `offset` with quarter-circle corners."""
    if offset <= 0.0:
        return rect(x0, y0, x1, y1)
    pts: list[tuple[float, float]] = []
    corners = [  # (corner point, start angle of its outward arc)
        ((x1, y0), -0.5 * math.pi),
        ((x1, y1), 0.0),
        ((x0, y1), 0.5 * math.pi),
        ((x0, y0), math.pi),
    ]
    for (cx, cy), a0 in corners:
        for k in range(pts_per_corner + 1):
            a = a0 + 0.5 * math.pi * k / pts_per_corner
            pts.append((cx + offset * math.cos(a), cy + offset * math.sin(a)))
    return Polygon(tuple(pts))


# --------------------------------------------------------------------------
# regions

CORE = "CORE"
TURN = "TURN"
INSULATION = "INSULATION"
BOBBIN = "BOBBIN"
AIR = "AIR"


@dataclass(frozen=True)
class RegionTag:
    kind: str
    role: str | None = None     # TURN only: PRIMARY / SECONDARY
    layer: int | None = None    # TURN only: 0-based layer slot
    turn: int | None = None     # TURN only: 0-based turn within the layer
    side: str | None = None     # planar TURN only: GO / RETURN
    polarity: int = 1           # geometric current sense of this conductor

    def __str__(self) -> str:
        if self.kind != TURN:
            return self.kind
        side = f":{self.side}" if self.side else ""
        return f"TURN:{self.role}:{self.layer}:{self.turn}{side}"


@dataclass(frozen=True)
class Region:
    shape: Shape
    material: str
    tag: RegionTag

    @property
    def area(self) -> float:
        """Gross area of the outer boundary (children not subtracted)."""
        return self.shape.area


# --------------------------------------------------------------------------
# scenario description

@dataclass(frozen=True)
class CorePreset:
    family: str                      # TOROID / UU / EE
    dimensions: dict[str, float]     # named lengths, meters
    analysis_plane: str              # PLANAR / AXISYMMETRIC
    depth: float                     # out-of-plane length for planar models

    def __post_init__(self):
        if self.family not in ("TOROID", "UU", "EE"):
            raise GeometryError(f"unknown core family {self.family!r}")
        for k, v in self.dimensions.items():
            if v <= 0.0:
                raise GeometryError(f"dimension {k} must be > 0")
        if self.family == "TOROID":
            if self.dimensions["B"] >= self.dimensions["A"]:
                raise GeometryError("toroid inner radius must be < outer radius")

    @property
    def core_area(self) -> float:
        """Flux-carrying cross-section in m^2."""
        d = self.dimensions
        if self.family == "TOROID":
            return (d["A"] - d["B"]) * d["H"]
        if self.family == "UU":
            return d["K"] * d["G"]          # leg width x depth
        return d["C"] * d["P"]              # EE center leg x depth

    @property
    def window_area(self) -> float:
        d = self.dimensions
        if self.family == "TOROID":
            return math.pi * d["B"] ** 2    # bore
        return d["C"] * d["D"]


@dataclass(frozen=True)
class WindingSpec:
    role: str
    turns: int
    layers: int
    wire_diameter: float
    turn_insulation: float
    bobbin_gap: float

    def __post_init__(self):
        if self.role not in (PRIMARY, SECONDARY):
            raise GeometryError(f"bad winding role {self.role!r}")
        if self.turns < 1 or self.layers < 1 or self.layers > self.turns:
            raise GeometryError("need turns >= layers >= 1")
        if self.wire_diameter <= 0 or self.turn_insulation < 0 or self.bobbin_gap < 0:
            raise GeometryError("bad winding dimensions")

    def turns_in_layer(self, layer: int) -> int:
        """Near-uniform split of turns over layers.

        Uniform when turns divide evenly; otherwise the leading layers get
        one extra turn (80 turns in 3 layers -> 27/27/26, matching the
        reference 3-layer toroids, whose turn count is not divisible).
        """
        base, extra = divmod(self.turns, self.layers)
        return base + (1 if layer < extra else 0)

    @property
    def max_turns_per_layer(self) -> int:
        return self.turns_in_layer(0)


@dataclass(frozen=True)
class Rated:
    voltage: float   # V
    power: float     # VA
    frequency: float  # Hz

    @property
    def current(self) -> float:
        return self.power / self.voltage


def check_arrangement(arrangement: str, primary_layers: int,
                      secondary_layers: int) -> str:
    arr = arrangement.upper()
    if not arr or any(t not in "PS" for t in arr):
        raise GeometryError(f"arrangement must be over {{P,S}}: {arrangement!r}")
    if arr.count("P") != primary_layers or arr.count("S") != secondary_layers:
        raise GeometryError(
            f"arrangement {arr!r} has {arr.count('P')}P/{arr.count('S')}S tokens, "
            f"expected {primary_layers}P/{secondary_layers}S")
    return arr


@dataclass(frozen=True)
class Scenario:
    id: str
    core: CorePreset
    core_material: str
    windings: tuple[WindingSpec, WindingSpec]
    arrangement: str
    insulation_material: str = "silicon_varnish"
    bobbin_material: str = "bobbin_plastic"
    ambient_material: str = "air"
    rated: Rated = Rated(400.0, 8000.0, 10000.0)

    def __post_init__(self):
        roles = tuple(w.role for w in self.windings)
        if roles != (PRIMARY, SECONDARY):
            raise GeometryError("windings must be (PRIMARY, SECONDARY)")
        check_arrangement(self.arrangement, self.windings[0].layers,
                          self.windings[1].layers)

    @property
    def primary(self) -> WindingSpec:
        return self.windings[0]

    @property
    def secondary(self) -> WindingSpec:
        return self.windings[1]

    def winding(self, role: str) -> WindingSpec:
        return self.windings[0] if role == PRIMARY else self.windings[1]


# --------------------------------------------------------------------------
# presets

AWG8_DIAMETER = 3.2639e-3     # m
TURN_INSULATION = 0.15e-3     # m, between bare conductors
BOBBIN_GAP = 2.0e-3           # m, winding to core
RATED = Rated(voltage=400.0, power=8000.0, frequency=10000.0)

TOROID_DIMS = {
    "CASE1": {"A": 60e-3, "B": 40e-3, "H": 80e-3},   # A/B outer/inner radius
    "CASE2": {"A": 70e-3, "B": 30e-3, "H": 40e-3},
}
# Shared block-set catalog dimensions: blocks C x D x K assemble into a UU
# core E x F wide/tall with depth G, and an EE core M x N with depth P.
BLOCK_DIMS = {"C": 40e-3, "D": 80e-3, "K": 20e-3}
UU_DIMS = {**BLOCK_DIMS, "E": 80e-3, "F": 120e-3, "G": 80e-3}
EE_DIMS = {**BLOCK_DIMS, "M": 160e-3, "N": 120e-3, "P": 40e-3}

PRESET_IDS = (
    "TOROID_3LAYER_CASE1", "TOROID_3LAYER_CASE2",
    "TOROID_1LAYER_CASE1", "TOROID_1LAYER_CASE2",
    "UU_4LAYER", "EE_4LAYER",
)


def _winding_pair(layers: int) -> tuple[WindingSpec, WindingSpec]:
    mk = lambda role: WindingSpec(role=role, turns=80, layers=layers,
                                  wire_diameter=AWG8_DIAMETER,
                                  turn_insulation=TURN_INSULATION,
                                  bobbin_gap=BOBBIN_GAP)
    return (mk(PRIMARY), mk(SECONDARY))


def build_preset(preset_id: str, arrangement: str | None = None,
                 core_material: str = "iron_powder_mix8") -> Scenario:
    """One of the six reference structures, optionally with an arrangement
    override (EE/UU layer interleaving studies)."""
    pid = preset_id.upper()
    if pid not in PRESET_IDS:
        raise GeometryError(f"unknown preset {preset_id!r}; see PRESET_IDS")
    if pid.startswith("TOROID"):
        case = pid.rsplit("_", 1)[1]
        dims = TOROID_DIMS[case]
        if "1LAYER" in pid:
            core = CorePreset("TOROID", dims, AXISYMMETRIC, depth=0.0)
            windings = _winding_pair(layers=1)
            default_arr = "PS"
        else:
            # Sector windings: unrolled planar ring core (see module doc).
            core = CorePreset("TOROID", dims, PLANAR, depth=dims["H"])
            windings = _winding_pair(layers=3)
            default_arr = "PPPSSS"
    elif pid == "UU_4LAYER":
        core = CorePreset("UU", UU_DIMS, PLANAR, depth=UU_DIMS["G"])
        windings = _winding_pair(layers=4)
        default_arr = "PPPPSSSS"
    else:
        core = CorePreset("EE", EE_DIMS, PLANAR, depth=EE_DIMS["P"])
        windings = _winding_pair(layers=4)
        default_arr = "PPPPSSSS"
    arr = check_arrangement(arrangement or default_arr,
                            windings[0].layers, windings[1].layers)
    sid = pid if arrangement is None else f"{pid}_{arr}"
    return Scenario(id=sid, core=core, core_material=core_material,
                    windings=windings, arrangement=arr, rated=RATED)


# --------------------------------------------------------------------------
# layout helpers

def _layer_roles(scenario: Scenario) -> list[tuple[str, int]]:
    """Arrangement tokens resolved to (role, layer index within winding)."""
    counters = {PRIMARY: 0, SECONDARY: 0}
    out = []
    for tok in scenario.arrangement:
        role = PRIMARY if tok == "P" else SECONDARY
        out.append((role, counters[role]))
        counters[role] += 1
    return out


@dataclass(frozen=True)
class WindingBand:
    """Closed conductor band around the toroid cross-section (axisym).

    offset_lo/offset_hi are distances from the core-rectangle surface; the
    band carries the winding's full ampere-turns poloidally.
    """
    role: str
    offset_lo: float
    offset_hi: float


@dataclass
class Layout:
    """Region decomposition of a scenario plus solver-facing metadata."""

    scenario: Scenario
    regions: list[Region]
    plane: str
    depth: float                      # planar only; 0 for axisym
    core_rect: tuple[float, float, float, float] | None
    bands: list[WindingBand] = field(default_factory=list)  # axisym toroid
    window_boxes: list[tuple[float, float, float, float]] = field(default_factory=list)
    winding_breadth: float = 0.0      # layer span used for Dowell porosity
    mean_turn_length: dict[str, float] = field(default_factory=dict)

    @property
    def turn_regions(self) -> list[Region]:
        return [r for r in self.regions if r.tag.kind == TURN]


class _RingPath:
    """Offset path around a rectangle: 4 edges + 4 corner arcs, CCW,
    starting at the midpoint of the left edge going up... the start is at
    the midpoint of the left (x = x0) side, proceeding counterclockwise
    so the first half of the path covers the lower half of the ring."""

    def __init__(self, x0, y0, x1, y1, offset):
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1
        self.c = offset
        w, h = x1 - x0, y1 - y0
        arc = 0.5 * math.pi * offset
        # pieces: (length, kind, anchor); CCW from left-edge midpoint upward
        self.pieces = [
            (h / 2, "edge", ((x0 - offset, (y0 + y1) / 2), (0.0, 1.0))),
            (arc, "arc", ((x0, y1), math.pi)),
            (w, "edge", ((x0, y1 + offset), (1.0, 0.0))),
            (arc, "arc", ((x1, y1), 0.5 * math.pi)),
            (h, "edge", ((x1 + offset, y1), (0.0, -1.0))),
            (arc, "arc", ((x1, y0), 0.0)),
            (w, "edge", ((x1, y0 - offset), (-1.0, 0.0))),
            (arc, "arc", ((x0, y0), -0.5 * math.pi)),
            (h / 2, "edge", ((x0 - offset, y0), (0.0, 1.0))),
        ]
        self.length = sum(p[0] for p in self.pieces)

    def point_normal(self, s):
        """Point on the path and outward unit normal at arc length s."""
        s = s % self.length
        for length, kind, anchor in self.pieces:
            if s <= length:
                if kind == "edge":
                    (px, py), (tx, ty) = anchor
                    # outward normal is the tangent rotated -90 deg
                    return (px + tx * s, py + ty * s), (ty, -tx)
                (cx, cy), a0 = anchor
                a = a0 + s / self.c
                n = (math.cos(a), math.sin(a))
                return (cx + self.c * n[0], cy + self.c * n[1]), n
            s -= length
        raise AssertionError("unreachable")


def _ring_turn_centers(core_rect, offset_lo, n_turns, d, insulation):
    """Centers for n turns around the cross-section at a layer offset.

    Single file when the pitch allows; otherwise a two-row zigzag with the
    minimal radial stagger keeping surface spacing >= insulation (this is
    how a crowded full-circumference toroid layer actually packs at the
    bore). Returns (centers, band thickness)."""
    x0, y0, x1, y1 = core_rect
    c_base = offset_lo + d / 2
    path = _RingPath(x0, y0, x1, y1, c_base)
    pitch = path.length / n_turns
    min_pitch = d + insulation
    zig = 0.0
    if pitch < min_pitch:
        if 2 * pitch < min_pitch:
            raise GeometryError(
                f"winding ring cannot fit {n_turns} turns: pitch {pitch:.4g} m "
                f"vs required {min_pitch:.4g} m even with two-row packing")
        zig = math.sqrt(min_pitch**2 - pitch**2)
    centers = []
    for i in range(n_turns):
        (px, py), (nx, ny) = path.point_normal((i + 0.5) * pitch)
        off = zig if (i % 2 == 1) else 0.0
        centers.append((px + nx * off, py + ny * off))
    return centers, d + zig


# --------------------------------------------------------------------------
# layout: axisymmetric overlaid toroid

def _layout_toroid_axisym(scenario: Scenario) -> Layout:
    d = scenario.core.dimensions
    ra, rb, h = d["A"], d["B"], d["H"]
    core_rect = (rb, -h / 2, rb + (ra - rb), h / 2)
    wire = scenario.primary.wire_diameter
    ins = scenario.primary.turn_insulation
    gap = scenario.primary.bobbin_gap

    regions: list[Region] = []
    offset = gap
    bands: list[WindingBand] = []
    for role, layer in _layer_roles(scenario):
        spec = scenario.winding(role)
        n = spec.turns_in_layer(layer)
        centers, thickness = _ring_turn_centers(core_rect, offset, n, wire, ins)
        for t, (cx, cy) in enumerate(centers):
            regions.append(Region(Circle(cx, cy, wire / 2),
                                  "copper",
                                  RegionTag(TURN, role=role, layer=layer,
                                            turn=t, polarity=1)))
        bands.append(WindingBand(role, offset, offset + thickness))
        offset += thickness + ins
    stack_out = offset - ins

    if stack_out >= rb:
        raise GeometryError(
            f"toroid winding stack {stack_out * 1e3:.2f} mm exceeds the bore "
            f"radius {rb * 1e3:.2f} mm")

    margin = 0.25e-3
    potting = Region(rounded_rect(*core_rect, stack_out + margin),
                     scenario.insulation_material, RegionTag(INSULATION))
    bobbin = Region(rounded_rect(*core_rect, gap),
                    scenario.bobbin_material, RegionTag(BOBBIN))
    core = Region(rect(*core_rect), scenario.core_material, RegionTag(CORE))

    box = 5.0 * max(2 * ra, h)
    air = Region(rect(0.0, -box / 2, box / 2, box / 2),
                 scenario.ambient_material, RegionTag(AIR))
    regions = [air, potting, bobbin, core] + regions

    perim = 2 * ((ra - rb) + h)
    mlt = {
        PRIMARY: perim + 2 * math.pi * (gap + wire / 2),
        SECONDARY: perim + 2 * math.pi * (stack_out - wire / 2),
    }
    # merge bands of the same role (multi-layer windings)
    merged: dict[str, WindingBand] = {}
    for b in bands:
        if b.role in merged:
            m = merged[b.role]
            merged[b.role] = WindingBand(b.role, min(m.offset_lo, b.offset_lo),
                                         max(m.offset_hi, b.offset_hi))
        else:
            merged[b.role] = b
    return Layout(scenario=scenario, regions=regions, plane=AXISYMMETRIC,
                  depth=0.0, core_rect=core_rect,
                  bands=[merged[r] for r in (PRIMARY, SECONDARY)],
                  winding_breadth=_RingPath(*core_rect, gap + wire / 2).length,
                  mean_turn_length=mlt)


# --------------------------------------------------------------------------
# layout: planar window columns (EE, UU, unrolled toroid)

def _column_turns(regions, scenario, role, layer, n, x_center, y_lo, y_hi,
                  side, polarity):
    """One vertical layer column of turn circles, uniform pitch, centered."""
    wire = scenario.winding(role).wire_diameter
    span = y_hi - y_lo
    pitch = span / n
    if pitch < wire:
        raise GeometryError(
            f"layer column needs {n * wire * 1e3:.1f} mm, only "
            f"{span * 1e3:.1f} mm available")
    for t in range(n):
        cy = y_lo + (t + 0.5) * pitch
        regions.append(Region(Circle(x_center, cy, wire / 2), "copper",
                              RegionTag(TURN, role=role, layer=layer, turn=t,
                                        side=side, polarity=polarity)))


def _stack_positions(x_face, direction, layers, wire, ins, gap):
    """Layer-center x positions stacking away from a core face."""
    xs = []
    x = x_face + direction * (gap + wire / 2)
    for _ in range(layers):
        xs.append(x)
        x += direction * (wire + ins)
    return xs


def _layout_ee(scenario: Scenario) -> Layout:
    d = scenario.core.dimensions
    c, dd, k = d["C"], d["D"], d["K"]
    m, n_h = d["M"], d["N"]
    win_w, win_h = c, dd
    # center leg [-c/2, c/2]; windows [c/2, c/2+win_w] and mirror
    outer = rect(-m / 2, -n_h / 2, m / 2, n_h / 2)
    wire = scenario.primary.wire_diameter
    ins = scenario.primary.turn_insulation
    gap = scenario.primary.bobbin_gap

    layer_roles = _layer_roles(scenario)
    n_layers = len(layer_roles)
    stack = n_layers * wire + (n_layers - 1) * ins
    margin = 0.25e-3
    if gap + stack + margin > win_w:
        raise GeometryError(
            f"EE winding stack {(gap + stack) * 1e3:.1f} mm exceeds window "
            f"width {win_w * 1e3:.1f} mm")

    regions: list[Region] = []
    y0, y1 = -win_h / 2, win_h / 2
    breadth_lo, breadth_hi = y0 + gap, y1 - gap
    window_boxes = []
    for sgn, side, pol in ((+1, "R", +1), (-1, "L", -1)):
        face = sgn * c / 2
        xs = _stack_positions(face, sgn, n_layers, wire, ins, gap)
        for slot, (role, layer) in enumerate(layer_roles):
            nli = scenario.winding(role).turns_in_layer(layer)
            _column_turns(regions, scenario, role, layer, nli, xs[slot],
                          breadth_lo, breadth_hi, side, pol)
        pot_in = face + sgn * gap
        pot_out = xs[-1] + sgn * (wire / 2 + margin)
        regions.append(Region(rect(min(pot_in, pot_out), y0,
                                   max(pot_in, pot_out), y1),
                              scenario.insulation_material,
                              RegionTag(INSULATION)))
        regions.append(Region(rect(min(face, pot_in), y0, max(face, pot_in), y1),
                              scenario.bobbin_material, RegionTag(BOBBIN)))
        win_face = sgn * (c / 2 + win_w)
        regions.append(Region(rect(min(pot_out, win_face), y0,
                                   max(pot_out, win_face), y1),
                              scenario.ambient_material, RegionTag(AIR)))
        window_boxes.append((min(face, win_face), y0, max(face, win_face), y1))

    core = Region(outer, scenario.core_material, RegionTag(CORE))
    box = 5.0 * max(m, n_h)
    air = Region(rect(-box / 2, -box / 2, box / 2, box / 2),
                 scenario.ambient_material, RegionTag(AIR))
    regions = [air, core] + regions

    mid = gap + stack / 2
    mlt = 2 * (c + scenario.core.depth) + 2 * math.pi * mid
    return Layout(scenario=scenario, regions=regions, plane=PLANAR,
                  depth=scenario.core.depth, core_rect=None,
                  window_boxes=window_boxes,
                  winding_breadth=breadth_hi - breadth_lo,
                  mean_turn_length={PRIMARY: mlt, SECONDARY: mlt})


def _two_limb_layout(scenario: Scenario, leg_w: float, win_w: float,
                     win_h: float, yoke: float) -> Layout:
    """Common two-limb planar layout: primary wraps the left limb,
    secondary the right (UU cores and unrolled sector-wound toroids).

    Arrangement tokens list the primary limb's layers first (innermost
    slot nearest the limb), then the secondary limb's.
    """
    wire = scenario.primary.wire_diameter
    ins = scenario.primary.turn_insulation
    gap = scenario.primary.bobbin_gap
    outer_w = win_w + 2 * leg_w
    outer_h = win_h + 2 * yoke
    outer = rect(-outer_w / 2, -outer_h / 2, outer_w / 2, outer_h / 2)
    window = rect(-win_w / 2, -win_h / 2, win_w / 2, win_h / 2)

    layer_roles = _layer_roles(scenario)
    per_role = {PRIMARY: [], SECONDARY: []}
    for role, layer in layer_roles:
        per_role[role].append(layer)
    n_p = len(per_role[PRIMARY])
    n_s = len(per_role[SECONDARY])
    stack_p = n_p * wire + (n_p - 1) * ins
    stack_s = n_s * wire + (n_s - 1) * ins
    margin = 0.25e-3
    if 2 * gap + stack_p + stack_s + 2 * margin > win_w:
        raise GeometryError(
            f"two-limb stacks {(2 * gap + stack_p + stack_s) * 1e3:.1f} mm "
            f"exceed window width {win_w * 1e3:.1f} mm")

    regions: list[Region] = []
    y0, y1 = -win_h / 2, win_h / 2
    b_lo, b_hi = y0 + gap, y1 - gap

    def limb(role, leg_in_face, leg_out_face, sgn_in):
        """sgn_in: direction from the limb face into the window."""
        layers = per_role[role]
        xs_in = _stack_positions(leg_in_face, sgn_in, len(layers), wire, ins, gap)
        xs_out = _stack_positions(leg_out_face, -sgn_in, len(layers), wire, ins, gap)
        for slot, layer in enumerate(layers):
            nli = scenario.winding(role).turns_in_layer(layer)
            _column_turns(regions, scenario, role, layer, nli, xs_in[slot],
                          b_lo, b_hi, "GO", +1)
            _column_turns(regions, scenario, role, layer, nli, xs_out[slot],
                          b_lo, b_hi, "RETURN", -1)
        for face, xs, sgn in ((leg_in_face, xs_in, sgn_in),
                              (leg_out_face, xs_out, -sgn_in)):
            pot_in = face + sgn * gap
            pot_out = xs[-1] + sgn * (wire / 2 + margin)
            regions.append(Region(rect(min(pot_in, pot_out), y0,
                                       max(pot_in, pot_out), y1),
                                  scenario.insulation_material,
                                  RegionTag(INSULATION)))
            regions.append(Region(rect(min(face, pot_in), y0,
                                       max(face, pot_in), y1),
                                  scenario.bobbin_material, RegionTag(BOBBIN)))
        return xs_in[-1] + sgn_in * (wire / 2 + margin)

    pot_p_end = limb(PRIMARY, -win_w / 2, -outer_w / 2, +1)
    pot_s_end = limb(SECONDARY, win_w / 2, outer_w / 2, -1)
    regions.append(Region(rect(pot_p_end, y0, pot_s_end, y1),
                          scenario.ambient_material, RegionTag(AIR)))

    core = Region(outer, scenario.core_material, RegionTag(CORE))
    window_air = Region(window, scenario.ambient_material, RegionTag(AIR))
    # window rect nests inside the core outline; its own content nests deeper
    box = 5.0 * max(outer_w, outer_h)
    air = Region(rect(-box / 2, -box / 2, box / 2, box / 2),
                 scenario.ambient_material, RegionTag(AIR))
    regions = [air, core, window_air] + regions

    stack_mid = gap + max(stack_p, stack_s) / 2
    mlt = 2 * (leg_w + scenario.core.depth) + 2 * math.pi * stack_mid
    return Layout(scenario=scenario, regions=regions, plane=PLANAR,
                  depth=scenario.core.depth, core_rect=None,
                  window_boxes=[(-win_w / 2, y0, win_w / 2, y1)],
                  winding_breadth=b_hi - b_lo,
                  mean_turn_length={PRIMARY: mlt, SECONDARY: mlt})


def _layout_uu(scenario: Scenario) -> Layout:
    d = scenario.core.dimensions
    return _two_limb_layout(scenario, leg_w=d["K"], win_w=d["C"],
                            win_h=d["D"], yoke=d["K"])


def _layout_toroid_unrolled(scenario: Scenario) -> Layout:
    """Sector-wound toroid as an equivalent planar core ring.

    Limb cross-section equals the toroid cross-section (limb width = radial
    build A-B, depth = H); window width equals the bore radius; window
    height fits the sector winding breadth. Keeps the magnetizing path and
    the window-dominated leakage of the sectored structure in a plane where
    they are representable.
    """
    d = scenario.core.dimensions
    ra, rb, h = d["A"], d["B"], d["H"]
    spec = scenario.primary
    breadth = spec.max_turns_per_layer * (spec.wire_diameter + spec.turn_insulation)
    win_h = breadth + 2 * spec.bobbin_gap + 2e-3
    return _two_limb_layout(scenario, leg_w=(ra - rb), win_w=rb,
                            win_h=win_h, yoke=(ra - rb))


def build_layout(scenario: Scenario) -> Layout:
    """Full region decomposition plus solver metadata for a scenario."""
    if scenario.core.family == "EE":
        return _layout_ee(scenario)
    if scenario.core.family == "UU":
        return _layout_uu(scenario)
    if scenario.core.analysis_plane == AXISYMMETRIC:
        return _layout_toroid_axisym(scenario)
    return _layout_toroid_unrolled(scenario)


def layout_winding(scenario: Scenario) -> list[Region]:
    """TURN regions only, one per physical conductor cross-section."""
    return build_layout(scenario).turn_regions


# --------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Diagnostic:
    kind: str          # OVERLAP / TURN_SPACING / CORE_CLEARANCE
    message: str
    tags: tuple[str, ...]
    measured: float | None = None


def _circle_gap(a: Circle, b: Circle) -> float:
    return math.hypot(a.cx - b.cx, a.cy - b.cy) - a.r - b.r


def validate_geometry(regions: list[Region],
                      min_turn_gap: float | None = None,
                      bobbin_gap: float | None = None) -> list[Diagnostic]:
    """Overlap / spacing / clearance diagnostics; empty means valid.

    Containment of one region inside another is legal (nested subdivision);
    partial boundary crossings are reported.
    """
    import shapely
    from shapely.strtree import STRtree

    diags: list[Diagnostic] = []
    shapes = []
    for r in regions:
        if isinstance(r.shape, Circle):
            shapes.append(shapely.Point(r.shape.cx, r.shape.cy).buffer(
                r.shape.r, quad_segs=32))
        else:
            shapes.append(shapely.Polygon(r.shape.points))
    tree = STRtree(shapes)
    seen = set()
    for i, si in enumerate(shapes):
        for j in tree.query(si, predicate="intersects"):
            j = int(j)
            if j <= i or (i, j) in seen:
                continue
            seen.add((i, j))
            sj = shapes[j]
            if si.contains(sj) or sj.contains(si):
                continue
            inter = si.intersection(sj).area
            tol = 1e-9 * min(si.area, sj.area)
            if inter > tol:
                diags.append(Diagnostic(
                    "OVERLAP",
                    f"regions {regions[i].tag} and {regions[j].tag} overlap "
                    f"(area {inter:.3e} m^2)",
                    (str(regions[i].tag), str(regions[j].tag)), inter))

    turns = [(i, r) for i, r in enumerate(regions) if r.tag.kind == TURN]
    if min_turn_gap is not None and min_turn_gap > 0:
        for a in range(len(turns)):
            ia, ra = turns[a]
            for b in range(a + 1, len(turns)):
                ib, rb = turns[b]
                gap = _circle_gap(ra.shape, rb.shape)
                if gap < min_turn_gap * (1 - 1e-9):
                    diags.append(Diagnostic(
                        "TURN_SPACING",
                        f"{ra.tag} to {rb.tag} spacing {gap * 1e3:.3f} mm "
                        f"< {min_turn_gap * 1e3:.3f} mm",
                        (str(ra.tag), str(rb.tag)), gap))

    if bobbin_gap is not None and bobbin_gap > 0:
        cores = [shapes[i] for i, r in enumerate(regions) if r.tag.kind == CORE]
        for i, r in turns:
            c: Circle = r.shape
            pt = shapely.Point(c.cx, c.cy)
            for core_shape in cores:
                dist = core_shape.exterior.distance(pt) - c.r
                if core_shape.contains(pt):
                    dist = -dist
                if dist < bobbin_gap * (1 - 1e-9):
                    diags.append(Diagnostic(
                        "CORE_CLEARANCE",
                        f"{r.tag} is {dist * 1e3:.3f} mm from the core, "
                        f"bobbin gap is {bobbin_gap * 1e3:.3f} mm",
                        (str(r.tag), CORE), dist))
    return diags


# --------------------------------------------------------------------------
# scenario files (lengths in millimeters on disk)

_MM = 1e-3


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "id": s.id,
        "core": {
            "family": s.core.family,
            "dimensions_mm": {k: v / _MM for k, v in s.core.dimensions.items()},
            "analysis_plane": s.core.analysis_plane,
            "depth_mm": s.core.depth / _MM,
        },
        "windings": [
            {
                "role": w.role,
                "turns": w.turns,
                "layers": w.layers,
                "wire_diameter_mm": w.wire_diameter / _MM,
                "turn_insulation_mm": w.turn_insulation / _MM,
                "bobbin_gap_mm": w.bobbin_gap / _MM,
            }
            for w in s.windings
        ],
        "arrangement": s.arrangement,
        "materials": {
            "core": s.core_material,
            "insulation": s.insulation_material,
            "bobbin": s.bobbin_material,
            "ambient": s.ambient_material,
        },
        "rated": {
            "voltage_V": s.rated.voltage,
            "power_VA": s.rated.power,
            "frequency_Hz": s.rated.frequency,
        },
    }


def scenario_from_dict(d: dict) -> Scenario:
    core = d["core"]
    windings = tuple(
        WindingSpec(
            role=w["role"], turns=int(w["turns"]), layers=int(w["layers"]),
            wire_diameter=w["wire_diameter_mm"] * _MM,
            turn_insulation=w["turn_insulation_mm"] * _MM,
            bobbin_gap=w["bobbin_gap_mm"] * _MM,
        )
        for w in d["windings"]
    )
    mats = d.get("materials", {})
    rated = d.get("rated", {})
    return Scenario(
        id=d["id"],
        core=CorePreset(
            family=core["family"],
            dimensions={k: v * _MM for k, v in core["dimensions_mm"].items()},
            analysis_plane=core["analysis_plane"],
            depth=core.get("depth_mm", 0.0) * _MM,
        ),
        core_material=mats.get("core", "iron_powder_mix8"),
        windings=windings,
        arrangement=d["arrangement"],
        insulation_material=mats.get("insulation", "silicon_varnish"),
        bobbin_material=mats.get("bobbin", "bobbin_plastic"),
        ambient_material=mats.get("ambient", "air"),
        rated=Rated(rated.get("voltage_V", 400.0), rated.get("power_VA", 8000.0),
                    rated.get("frequency_Hz", 10000.0)),
    )


def save_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")


def load_scenario(path: str | Path) -> Scenario:
    return scenario_from_dict(json.loads(Path(path).read_text()))

"""Conforming triangulation of tagged 2D region decompositions.

Strategy: every region boundary curve is sampled once into a shared
registry (axis-aligned edges are split at mutual junctions so touching
regions share identical sample points); each region is then triangulated
independently by Delaunay (qhull) over its boundary samples plus a graded
hexagonal interior fill, and triangles outside the region are discarded.
Because both sides of every interface use the same sample array, the
assembled global mesh is conforming with interfaces meshed exactly.

A fix-up loop splits any boundary sub-segment that failed to appear as a
Delaunay edge (rare: interior points keep a protection clearance from
boundaries), and an optional smoothing/quality pass relaxes interior
points and inserts circumcenters of poorly shaped triangles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import shapely
from scipy.spatial import Delaunay, cKDTree

from hftx.geometry import (AIR, AXISYMMETRIC, CORE, PLANAR, TURN, Circle,
                           GeometryError, Polygon, Region)

MIN_ANGLE_DEG = 20.0


class MeshError(ValueError):
    pass


@dataclass
class Mesh:
    nodes: np.ndarray              # (n, 2) float64, (x,y) or (r,z)
    elements: np.ndarray           # (m, 3) int32, CCW
    element_region: np.ndarray     # (m,) int32 index into regions
    regions: list[Region]
    boundary_edges: np.ndarray     # (k, 2) int32 node pairs
    boundary_tags: list[str]       # OUTER / AXIS / CORE_SURFACE / CONDUCTOR_SURFACE:<tag>
    plane: str = PLANAR
    depth: float = 1.0

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    def element_areas(self) -> np.ndarray:
        p = self.nodes[self.elements]
        return 0.5 * ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                      - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))

    def element_centroids(self) -> np.ndarray:
        return self.nodes[self.elements].mean(axis=1)

    def region_indices(self, kind: str | None = None) -> np.ndarray:
        """Region indices whose tag kind matches."""
        return np.array([i for i, r in enumerate(self.regions)
                         if kind is None or r.tag.kind == kind], dtype=np.int32)


# --------------------------------------------------------------------------
# boundary-curve registry

class _Curve:
    """A polyline (open or closed) sampled into shared canonical points."""

    def __init__(self, pts: list[tuple[float, float]], closed: bool,
                 circle: tuple[float, float, float, list[float]] | None = None):
        self.pts = pts
        self.closed = closed
        # circles carry (cx, cy, r_true, angles) so splits stay on the arc
        self.circle = circle

    def split(self, k: int) -> None:
        """Insert a midpoint into segment k -> k+1 (wrapping if closed)."""
        if self.circle is not None:
            cx, cy, r, angles = self.circle
            a0 = angles[k]
            a1 = angles[(k + 1) % len(angles)]
            if a1 <= a0:
                a1 += 2 * math.pi
            am = 0.5 * (a0 + a1)
            angles.insert(k + 1, am)
            # re-correct the polygon radius so the polygon area stays pi r^2
            s = sum(math.sin((angles[(i + 1) % len(angles)] - angles[i])
                             % (2 * math.pi)) for i in range(len(angles)))
            rc = r * math.sqrt(2 * math.pi / s)
            self.pts = [(cx + rc * math.cos(a), cy + rc * math.sin(a))
                        for a in angles]
            return
        p0 = self.pts[k]
        p1 = self.pts[(k + 1) % len(self.pts)]
        self.pts.insert(k + 1, ((p0[0] + p1[0]) / 2, (p0[1] + p1[1]) / 2))


def _circle_curve(c: Circle, h: float, clearance_fn) -> _Curve:
    """Adaptively sampled circle, area-corrected polygon radius."""
    n0 = max(16, int(math.ceil(2 * math.pi * c.r / h)))
    angles = [2 * math.pi * i / n0 for i in range(n0)]
    for _ in range(6):
        new_angles: list[float] = []
        changed = False
        for i, a0 in enumerate(angles):
            a1 = angles[(i + 1) % len(angles)]
            if a1 <= a0:
                a1 += 2 * math.pi
            new_angles.append(a0)
            mid = 0.5 * (a0 + a1)
            px = c.cx + c.r * math.cos(mid)
            py = c.cy + c.r * math.sin(mid)
            allowed = min(h, 0.85 * clearance_fn(px, py))
            if (a1 - a0) * c.r > max(allowed, 0.05 * h):
                new_angles.append(mid)
                changed = True
        angles = new_angles
        if not changed:
            break
    s = sum(math.sin((angles[(i + 1) % len(angles)] - angles[i]) % (2 * math.pi))
            for i in range(len(angles)))
    rc = c.r * math.sqrt(2 * math.pi / s)
    pts = [(c.cx + rc * math.cos(a), c.cy + rc * math.sin(a)) for a in angles]
    return _Curve(pts, closed=True, circle=(c.cx, c.cy, c.r, angles))


def _polyline_curve(pts, closed: bool, h: float, clearance_fn) -> _Curve:
    out: list[tuple[float, float]] = []
    n = len(pts)
    last = n if closed else n - 1
    for i in range(last):
        p0 = np.asarray(pts[i])
        p1 = np.asarray(pts[(i + 1) % n])
        seg = np.linalg.norm(p1 - p0)
        mid = 0.5 * (p0 + p1)
        allowed = min(h, 0.85 * clearance_fn(mid[0], mid[1]))
        k = max(1, int(math.ceil(seg / max(allowed, 0.05 * h))))
        for j in range(k):
            t = j / k
            out.append(tuple(p0 * (1 - t) + p1 * t))
    if not closed:
        out.append(tuple(pts[-1]))
    return _Curve(out, closed=closed)


def _is_axis_rect(poly: Polygon) -> bool:
    if len(poly.points) != 4:
        return False
    xs = {round(p[0], 15) for p in poly.points}
    ys = {round(p[1], 15) for p in poly.points}
    return len(xs) == 2 and len(ys) == 2


class _EdgeRegistry:
    """Axis-aligned edges grouped per line, split at mutual junctions."""

    def __init__(self):
        # (axis, coord) -> list of (lo, hi, h)
        self.groups: dict[tuple[int, float], list[tuple[float, float, float]]] = {}
        self.curves: dict[tuple[int, float, float, float], _Curve] = {}

    def add_rect(self, bounds, h):
        x0, y0, x1, y1 = bounds
        self.groups.setdefault((0, y0), []).append((x0, x1, h))  # bottom
        self.groups.setdefault((0, y1), []).append((x0, x1, h))  # top
        self.groups.setdefault((1, x0), []).append((y0, y1, h))  # left
        self.groups.setdefault((1, x1), []).append((y0, y1, h))  # right

    def finalize(self, clearance_fn):
        for (axis, coord), intervals in self.groups.items():
            cuts = sorted({v for lo, hi, _ in intervals for v in (lo, hi)})
            for a, b in zip(cuts, cuts[1:]):
                hs = [h for lo, hi, h in intervals
                      if lo <= a + 1e-15 and b - 1e-15 <= hi]
                if not hs:
                    continue
                if axis == 0:
                    pts = [(a, coord), (b, coord)]
                else:
                    pts = [(coord, a), (coord, b)]
                key = (axis, coord, a, b)
                self.curves[key] = _polyline_curve(pts, False, min(hs),
                                                   clearance_fn)

    def rect_loop(self, bounds) -> list[tuple[_Curve, bool]]:
        """Ordered (curve, forward) pieces of a rect outline, CCW."""
        x0, y0, x1, y1 = bounds
        pieces: list[tuple[_Curve, bool]] = []

        def side(axis, coord, lo, hi, forward):
            keys = sorted(
                [k for k in self.curves
                 if k[0] == axis and k[1] == coord
                 and lo - 1e-15 <= k[2] and k[3] <= hi + 1e-15],
                key=lambda k: k[2], reverse=not forward)
            for k in keys:
                pieces.append((self.curves[k], forward))

        side(0, y0, x0, x1, True)    # bottom, +x
        side(1, x1, y0, y1, True)    # right, +y
        side(0, y1, x0, x1, False)   # top, -x
        side(1, x0, y0, y1, False)   # left, -y
        return pieces


def _loop_points(pieces: list[tuple[_Curve, bool]]) -> np.ndarray:
    """Closed loop point list from ordered open curve pieces."""
    pts: list[tuple[float, float]] = []
    for curve, forward in pieces:
        seq = curve.pts if forward else list(reversed(curve.pts))
        pts.extend(seq[:-1])
    return np.asarray(pts)


# --------------------------------------------------------------------------
# containment tree

def _shapely_shape(region: Region):
    if isinstance(region.shape, Circle):
        c = region.shape
        return shapely.Point(c.cx, c.cy).buffer(c.r, quad_segs=48)
    return shapely.Polygon(region.shape.points)


def build_tree(regions: list[Region]) -> tuple[list[int], list[list[int]]]:
    """parent index per region (-1 for roots) and children lists."""
    shapes = [_shapely_shape(r) for r in regions]
    areas = [s.area for s in shapes]
    order = sorted(range(len(regions)), key=lambda i: areas[i])
    parent = [-1] * len(regions)
    for pos, i in enumerate(order):
        for j in order[pos + 1:]:
            if areas[j] <= areas[i]:
                continue
            if shapes[j].covers(shapes[i]):
                parent[i] = j
                break
    children: list[list[int]] = [[] for _ in regions]
    for i, p in enumerate(parent):
        if p >= 0:
            children[p].append(i)
    return parent, children


# --------------------------------------------------------------------------
# interior fill

def _hex_fill(net, bbox, h_fn, h_min, h_max, boundary_pts, rng):
    """Graded hexagonal lattice fill of a shapely region."""
    x0, y0, x1, y1 = bbox
    levels = max(1, int(math.ceil(math.log2(max(h_max / h_min, 1.0)))) + 1)
    accepted = np.empty((0, 2))
    btree = cKDTree(boundary_pts) if len(boundary_pts) else None
    shapely.prepare(net)
    for k in range(levels):
        s = h_min * (2.0 ** k)
        if s > 2.0 * (x1 - x0) and s > 2.0 * (y1 - y0):
            break
        dy = s * math.sqrt(3.0) / 2.0
        ny = int((y1 - y0) / dy) + 2
        nx = int((x1 - x0) / s) + 2
        if nx * ny > 4_000_000:
            raise MeshError("fill lattice too large; increase h_target")
        jy, jx = np.mgrid[0:ny, 0:nx]
        px = x0 + (jx + 0.5 * (jy % 2)) * s
        py = y0 + jy * dy
        pts = np.column_stack([px.ravel(), py.ravel()])
        pts = pts + rng.uniform(-0.03, 0.03, pts.shape) * s
        h_here = h_fn(pts)
        band = (h_here >= s * 0.999) & (h_here < s * 1.999)
        if k == levels - 1:
            band = h_here >= s * 0.999
        pts = pts[band]
        if len(pts) == 0:
            continue
        inside = shapely.contains_xy(net, pts[:, 0], pts[:, 1])
        pts = pts[inside]
        if len(pts) == 0:
            continue
        if btree is not None:
            d, _ = btree.query(pts, k=1)
            pts = pts[d >= 0.72 * s]
        if len(accepted):
            tree = cKDTree(accepted)
            d, _ = tree.query(pts, k=1)
            pts = pts[d >= 0.72 * s]
        # self-spacing within the level is guaranteed by the lattice
        accepted = np.vstack([accepted, pts])
    return accepted


# --------------------------------------------------------------------------
# per-region triangulation

def _delaunay_region(points: np.ndarray, net_prep, min_area: float):
    """Delaunay triangles of `points` whose centroid lies in the region."""
    if len(points) < 3:
        return np.empty((0, 3), dtype=np.int32)
    tri = Delaunay(points)
    simp = tri.simplices.astype(np.int32)
    p = points[simp]
    area = 0.5 * ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                  - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))
    flip = area < 0
    simp[flip] = simp[flip][:, ::-1]
    area = np.abs(area)
    keep = area > min_area
    cent = p.mean(axis=1)
    keep &= shapely.contains_xy(net_prep, cent[:, 0], cent[:, 1])
    return simp[keep]


@dataclass
class _Loop:
    """Closed boundary loop with per-segment curve provenance."""

    pts: np.ndarray
    seg_owner: list[tuple[_Curve, int]]  # segment k starts at pts[k]


def _assemble_loop(pieces: list[tuple[_Curve, bool]]) -> _Loop:
    """Closed loop from ordered curve pieces (open pieces chained, or one
    closed curve)."""
    if len(pieces) == 1 and pieces[0][0].closed:
        curve = pieces[0][0]
        pts = np.asarray(curve.pts)
        owners = [(curve, k) for k in range(len(pts))]
        return _Loop(pts, owners)
    pts: list[tuple[float, float]] = []
    owners: list[tuple[_Curve, int]] = []
    for curve, forward in pieces:
        seq = curve.pts if forward else list(reversed(curve.pts))
        m = len(seq) - 1
        for j in range(m):
            pts.append(seq[j])
            owners.append((curve, j if forward else m - 1 - j))
    return _Loop(np.asarray(pts), owners)


def _missing_boundary_edges(simplices: np.ndarray, loops: list[_Loop],
                            point_index: dict) -> list[tuple[_Curve, int]]:
    """(curve, segment) pairs whose sample edge is absent from the mesh."""
    if len(simplices) == 0:
        return [owner for loop in loops for owner in loop.seg_owner]
    e = np.vstack([simplices[:, [0, 1]], simplices[:, [1, 2]],
                   simplices[:, [2, 0]]])
    e.sort(axis=1)
    have = set(map(tuple, e.tolist()))
    missing = []
    for loop in loops:
        n = len(loop.pts)
        for i in range(n):
            a = point_index[tuple(loop.pts[i])]
            b = point_index[tuple(loop.pts[(i + 1) % n])]
            if (min(a, b), max(a, b)) not in have:
                missing.append(loop.seg_owner[i])
    return missing


def _tri_min_angles(points: np.ndarray, simp: np.ndarray) -> np.ndarray:
    p = points[simp]
    a = np.linalg.norm(p[:, 1] - p[:, 2], axis=1)
    b = np.linalg.norm(p[:, 0] - p[:, 2], axis=1)
    c = np.linalg.norm(p[:, 0] - p[:, 1], axis=1)
    angles = []
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        cosv = np.clip((y**2 + z**2 - x**2) / (2 * y * z), -1.0, 1.0)
        angles.append(np.degrees(np.arccos(cosv)))
    return np.min(angles, axis=0)


# --------------------------------------------------------------------------
# main entry

def triangulate(regions: list[Region], h_target: float, grading: float = 1.5,
                seed: int = 0, plane: str = PLANAR, depth: float = 1.0,
                region_h: dict[int, float] | None = None,
                smooth_rounds: int = 2) -> Mesh:
    """Conforming triangulation with region and boundary tags.

    region_h optionally caps the element size per region index; the default
    uses h_target for conductor/insulation/bobbin regions and lets air and
    core regions grade coarser by `grading` per size doubling away from the
    winding area. grading=1 meshes the whole domain uniformly at h_target.
    """
    if h_target <= 0.0 or grading < 1.0:
        raise MeshError("need h_target > 0 and grading >= 1")
    rng = np.random.default_rng(seed + 12345)
    parent, children = build_tree(regions)

    circles = [(r.shape.cx, r.shape.cy, r.shape.r)
               for r in regions if isinstance(r.shape, Circle)]
    ctree = cKDTree([(c[0], c[1]) for c in circles]) if circles else None
    rmax = max((c[2] for c in circles), default=0.0)

    def clearance(px, py):
        """Distance to the nearest circle surface (other than self)."""
        if ctree is None:
            return math.inf
        d, idx = ctree.query([px, py], k=min(6, len(circles)))
        d = np.atleast_1d(d)
        idx = np.atleast_1d(idx)
        best = math.inf
        for dd, ii in zip(d, idx):
            gap = abs(dd - circles[ii][2])
            if gap > 1e-12:
                best = min(best, gap)
        return best

    # sampling at ~3/4 h keeps worst-case element diameters below h_target
    h_eff = 0.74 * h_target
    fine_kinds = {TURN, "INSULATION", "BOBBIN"}
    h_of_region = {}
    for i, r in enumerate(regions):
        if region_h and i in region_h:
            h_of_region[i] = 0.74 * region_h[i]
        elif isinstance(r.shape, Circle):
            h_of_region[i] = min(h_eff, 0.8 * r.shape.r)
        elif r.tag.kind in fine_kinds:
            h_of_region[i] = h_eff
        else:
            h_of_region[i] = h_eff  # coarsening handled by the fill field

    # ---- canonical boundary curves
    registry = _EdgeRegistry()
    generic: dict[int, _Curve] = {}
    for i, r in enumerate(regions):
        h_users = [h_of_region[i]] + [h_of_region[c] for c in children[i]]
        h_edge = min(h_users)
        if isinstance(r.shape, Circle):
            continue
        if _is_axis_rect(r.shape):
            registry.add_rect(r.shape.bounds, h_edge)
    registry.finalize(clearance)
    for i, r in enumerate(regions):
        h_edge = h_of_region[i]
        if isinstance(r.shape, Circle):
            generic[i] = _circle_curve(r.shape, h_edge, clearance)
        elif not _is_axis_rect(r.shape):
            generic[i] = _polyline_curve(list(r.shape.points), True, h_edge,
                                         clearance)

    def outline_loops(i: int) -> list[_Loop]:
        r = regions[i]
        if i in generic:
            return [_assemble_loop([(generic[i], True)])]
        return [_assemble_loop(registry.rect_loop(r.shape.bounds))]

    # fine bounding box for the grading distance field: conductors+insulation
    fine_boxes = [r.shape.bounds for r in regions if r.tag.kind in fine_kinds]
    if fine_boxes:
        fb = np.array(fine_boxes)
        fine_bbox = (fb[:, 0].min(), fb[:, 1].min(), fb[:, 2].max(), fb[:, 3].max())
    else:
        fine_bbox = None

    def h_field_for(i: int):
        h0 = h_of_region[i]
        coarse = regions[i].tag.kind in (AIR, CORE) and grading > 1.0
        if not coarse or fine_bbox is None:
            return (lambda pts: np.full(len(pts), h0)), h0, h0
        x0, y0, x1, y1 = fine_bbox
        hmax = h0 * grading ** 6

        def fn(pts):
            dx = np.maximum(np.maximum(x0 - pts[:, 0], pts[:, 0] - x1), 0.0)
            dy = np.maximum(np.maximum(y0 - pts[:, 1], pts[:, 1] - y1), 0.0)
            d = np.hypot(dx, dy)
            return np.clip(h0 + (grading - 1.0) * d, h0, hmax)

        return fn, h0, hmax

    # ---- mesh each region; iterate until all interfaces conform
    shp = [_shapely_shape(r) for r in regions]
    nets = []
    for i in range(len(regions)):
        net = shp[i]
        for c in children[i]:
            net = net.difference(shp[c])
        shapely.prepare(net)
        nets.append(net)
    submeshes: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    fills: dict[int, np.ndarray] = {}
    for round_no in range(12):
        curve_users: dict[int, set[int]] = {}
        region_loops: dict[int, list[_Loop]] = {}
        for i in range(len(regions)):
            loops = outline_loops(i)
            for c in children[i]:
                loops.extend(outline_loops(c))
            region_loops[i] = loops
            for loop in loops:
                for curve, _ in loop.seg_owner:
                    curve_users.setdefault(id(curve), set()).add(i)
        splits: list[tuple[_Curve, int]] = []
        for i, r in enumerate(regions):
            loops = region_loops[i]
            boundary = np.vstack([lp.pts for lp in loops])
            net = nets[i]
            if net.is_empty or net.area <= 0:
                submeshes[i] = (boundary, np.empty((0, 3), dtype=np.int32))
                continue
            if i not in fills:
                h_fn, h_min, h_max = h_field_for(i)
                fills[i] = _hex_fill(net, shp[i].bounds, h_fn, h_min, h_max,
                                     boundary, rng)
            pts = np.vstack([boundary, fills[i]]) if len(fills[i]) else boundary
            pts = np.ascontiguousarray(pts)
            # dedupe exact duplicates (loop junction points)
            _, uniq_idx = np.unique(pts.view([("x", float), ("y", float)]),
                                    return_index=True)
            pts = pts[np.sort(uniq_idx)]
            pidx = {tuple(p): k for k, p in enumerate(pts)}
            scale = max(shp[i].bounds[2] - shp[i].bounds[0],
                        shp[i].bounds[3] - shp[i].bounds[1])
            simp = _delaunay_region(pts, net, 1e-14 * scale * scale)
            splits.extend(_missing_boundary_edges(simp, loops, pidx))
            submeshes[i] = (pts, simp)
        if not splits:
            break
        stale: set[int] = set()
        # insert midpoints from the back so earlier segment indices survive
        by_curve: dict[int, tuple[_Curve, list[int]]] = {}
        for curve, seg in splits:
            entry = by_curve.setdefault(id(curve), (curve, []))
            entry[1].append(seg)
        for cid, (curve, segs) in by_curve.items():
            for seg in sorted(set(segs), reverse=True):
                curve.split(seg)
            stale |= curve_users.get(cid, set())
        for i in stale:
            fills.pop(i, None)
    else:
        raise MeshError("interface conformity not reached after 12 rounds")

    # ---- smoothing: relax interior fill points toward neighbor centroids
    for _ in range(smooth_rounds):
        moved = False
        for i, r in enumerate(regions):
            pts, simp = submeshes[i]
            if len(simp) == 0 or len(fills.get(i, ())) == 0:
                continue
            nb = len(pts) - len(fills[i])
            sums = np.zeros_like(pts)
            cnts = np.zeros(len(pts))
            for a, b in ((0, 1), (1, 2), (2, 0)):
                np.add.at(sums, simp[:, a], pts[simp[:, b]])
                np.add.at(cnts, simp[:, a], 1.0)
                np.add.at(sums, simp[:, b], pts[simp[:, a]])
                np.add.at(cnts, simp[:, b], 1.0)
            interior = np.zeros(len(pts), dtype=bool)
            interior[nb:] = True
            interior &= cnts > 0
            new_pts = pts.copy()
            new_pts[interior] = sums[interior] / cnts[interior, None]
            net = nets[i]
            ok = shapely.contains_xy(net, new_pts[nb:, 0], new_pts[nb:, 1])
            new_pts[nb:][~ok] = pts[nb:][~ok]
            scale = max(shp[i].bounds[2] - shp[i].bounds[0],
                        shp[i].bounds[3] - shp[i].bounds[1])
            simp2 = _delaunay_region(new_pts, net, 1e-14 * scale * scale)
            loops = region_loops[i]
            pidx = {tuple(p): k for k, p in enumerate(new_pts)}
            if not _missing_boundary_edges(simp2, loops, pidx):
                submeshes[i] = (new_pts, simp2)
                fills[i] = new_pts[nb:]
                moved = True
        if not moved:
            break

    # ---- assemble the global mesh
    node_index: dict[bytes, int] = {}
    nodes: list[tuple[float, float]] = []
    tris: list[np.ndarray] = []
    tri_region: list[np.ndarray] = []
    for i in range(len(regions)):
        pts, simp = submeshes[i]
        if len(simp) == 0:
            continue
        local_to_global = np.empty(len(pts), dtype=np.int64)
        for k, p in enumerate(pts):
            key = p.tobytes()
            idx = node_index.get(key)
            if idx is None:
                idx = len(nodes)
                node_index[key] = idx
                nodes.append((p[0], p[1]))
            local_to_global[k] = idx
        tris.append(local_to_global[simp])
        tri_region.append(np.full(len(simp), i, dtype=np.int32))
    if not tris:
        raise MeshError("empty mesh")
    nodes_arr = np.asarray(nodes)
    elements = np.vstack(tris).astype(np.int32)
    element_region = np.concatenate(tri_region)

    mesh = Mesh(nodes=nodes_arr, elements=elements,
                element_region=element_region, regions=regions,
                boundary_edges=np.empty((0, 2), dtype=np.int32),
                boundary_tags=[], plane=plane, depth=depth)
    _tag_boundaries(mesh)
    return mesh


def _tag_boundaries(mesh: Mesh) -> None:
    """Derive OUTER/AXIS, CORE_SURFACE and CONDUCTOR_SURFACE edge tags."""
    elements = mesh.elements
    edges = np.vstack([elements[:, [0, 1]], elements[:, [1, 2]],
                       elements[:, [2, 0]]])
    owner = np.tile(np.arange(len(elements)), 3)
    key = np.sort(edges, axis=1)
    order = np.lexsort((key[:, 1], key[:, 0]))
    key = key[order]
    owner = owner[order]
    bedges: list[tuple[int, int]] = []
    btags: list[str] = []
    kinds = np.array([mesh.regions[i].tag.kind
                      for i in range(len(mesh.regions))])
    elem_kind = kinds[mesh.element_region]
    i = 0
    n = len(key)
    box = (mesh.nodes[:, 0].min(), mesh.nodes[:, 1].min(),
           mesh.nodes[:, 0].max(), mesh.nodes[:, 1].max())
    tol = 1e-9 * max(box[2] - box[0], box[3] - box[1])
    while i < n:
        j = i + 1
        while j < n and key[j, 0] == key[i, 0] and key[j, 1] == key[i, 1]:
            j += 1
        a, b = int(key[i, 0]), int(key[i, 1])
        if j - i == 1:  # hull edge
            pa, pb = mesh.nodes[a], mesh.nodes[b]
            if (mesh.plane == AXISYMMETRIC and abs(pa[0]) < tol
                    and abs(pb[0]) < tol):
                tag = "AXIS"
            else:
                tag = "OUTER"
            bedges.append((a, b))
            btags.append(tag)
        elif j - i == 2:
            k0, k1 = elem_kind[owner[i]], elem_kind[owner[i + 1]]
            if k0 != k1:
                if TURN in (k0, k1):
                    ei = owner[i] if k0 == TURN else owner[i + 1]
                    t = mesh.regions[mesh.element_region[ei]].tag
                    bedges.append((a, b))
                    btags.append(f"CONDUCTOR_SURFACE:{t}")
                elif CORE in (k0, k1):
                    bedges.append((a, b))
                    btags.append("CORE_SURFACE")
        i = j
    mesh.boundary_edges = np.asarray(bedges, dtype=np.int32).reshape(-1, 2)
    mesh.boundary_tags = btags


# --------------------------------------------------------------------------
# refinement and quality

def refine(mesh: Mesh) -> Mesh:
    """Uniform 4-way refinement; tags inherited, min angle preserved."""
    elements = mesh.elements
    nodes = mesh.nodes
    edges = np.vstack([elements[:, [0, 1]], elements[:, [1, 2]],
                       elements[:, [2, 0]]])
    key = np.sort(edges, axis=1)
    uniq, inv = np.unique(key, axis=0, return_inverse=True)
    midpoints = 0.5 * (nodes[uniq[:, 0]] + nodes[uniq[:, 1]])
    mid_ids = len(nodes) + np.arange(len(uniq))
    new_nodes = np.vstack([nodes, midpoints])
    m01 = mid_ids[inv[:len(elements)]]
    m12 = mid_ids[inv[len(elements):2 * len(elements)]]
    m20 = mid_ids[inv[2 * len(elements):]]
    a, b, c = elements[:, 0], elements[:, 1], elements[:, 2]
    new_elements = np.vstack([
        np.column_stack([a, m01, m20]),
        np.column_stack([m01, b, m12]),
        np.column_stack([m20, m12, c]),
        np.column_stack([m01, m12, m20]),
    ]).astype(np.int32)
    new_region = np.tile(mesh.element_region, 4)

    edge_lookup = {(int(u), int(v)): int(m)
                   for (u, v), m in zip(uniq, mid_ids)}
    bedges: list[tuple[int, int]] = []
    btags: list[str] = []
    for (u, v), tag in zip(mesh.boundary_edges, mesh.boundary_tags):
        m = edge_lookup[(min(u, v), max(u, v))]
        bedges.extend([(int(u), m), (m, int(v))])
        btags.extend([tag, tag])
    return Mesh(nodes=new_nodes, elements=new_elements,
                element_region=new_region, regions=mesh.regions,
                boundary_edges=np.asarray(bedges, dtype=np.int32),
                boundary_tags=btags, plane=mesh.plane, depth=mesh.depth)


def mesh_quality(mesh: Mesh) -> dict:
    """Min angle, per-region max element diameter, and counts."""
    angles = _tri_min_angles(mesh.nodes, mesh.elements)
    p = mesh.nodes[mesh.elements]
    d = np.maximum(np.maximum(
        np.linalg.norm(p[:, 0] - p[:, 1], axis=1),
        np.linalg.norm(p[:, 1] - p[:, 2], axis=1)),
        np.linalg.norm(p[:, 2] - p[:, 0], axis=1))
    max_diam: dict[str, float] = {}
    for i in range(len(mesh.regions)):
        sel = mesh.element_region == i
        if sel.any():
            tag = str(mesh.regions[i].tag)
            max_diam[tag] = max(max_diam.get(tag, 0.0), float(d[sel].max()))
    return {
        "min_angle_deg": float(angles.min()) if len(angles) else 0.0,
        "max_diameter_per_region": max_diam,
        "element_count": mesh.n_elements,
        "node_count": mesh.n_nodes,
    }


def region_mesh_areas(mesh: Mesh) -> np.ndarray:
    """Summed element area per region index."""
    areas = mesh.element_areas()
    out = np.zeros(len(mesh.regions))
    np.add.at(out, mesh.element_region, areas)
    return out


# --------------------------------------------------------------------------
# VTK export

def write_vtk(mesh: Mesh, path: str | Path,
              point_data: dict[str, np.ndarray] | None = None,
              cell_data: dict[str, np.ndarray] | None = None) -> None:
    """Legacy ASCII VTK unstructured grid with region tags as cell data."""
    lines = ["# vtk DataFile Version 3.0", "hftx mesh", "ASCII",
             "DATASET UNSTRUCTURED_GRID",
             f"POINTS {mesh.n_nodes} double"]
    for x, y in mesh.nodes:
        lines.append(f"{x:.17g} {y:.17g} 0")
    m = mesh.n_elements
    lines.append(f"CELLS {m} {4 * m}")
    for tri in mesh.elements:
        lines.append(f"3 {tri[0]} {tri[1]} {tri[2]}")
    lines.append(f"CELL_TYPES {m}")
    lines.extend(["5"] * m)
    lines.append(f"CELL_DATA {m}")
    lines.append("SCALARS region_id int 1")
    lines.append("LOOKUP_TABLE default")
    lines.extend(str(int(r)) for r in mesh.element_region)
    if cell_data:
        for name, values in cell_data.items():
            lines.append(f"SCALARS {name} double 1")
            lines.append("LOOKUP_TABLE default")
            lines.extend(f"{v:.17g}" for v in values)
    if point_data:
        lines.append(f"POINT_DATA {mesh.n_nodes}")
        for name, values in point_data.items():
            lines.append(f"SCALARS {name} double 1")
            lines.append("LOOKUP_TABLE default")
            lines.extend(f"{v:.17g}" for v in values)
    Path(path).write_text("\n".join(lines) + "\n")

"""Constant-OWID level surfaces over (c1, c2, c3) at fixed s.

The field is sampled on a corner-aligned grid over [-1, 1]^3. Surfaces come
out two ways: a point cloud of grid points whose OWID lies within ``band``
of the target, and a triangle mesh from marching tetrahedra (each cube split
into six tetrahedra along its main diagonal, so there are no ambiguous cases).
"""

import csv
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .closed_form import owid_x_state
from .oracle import DEFAULT_CONFIG, reduced_minimize_batch
from .states import XStateParams, validate_corner_condition

EVALUATORS = ("closed_form", "reduced_oracle")
PHYS_TOL = 1e-10
LEVEL_SNAP = 1e-12

# Kuhn triangulation: one tetrahedron per axis ordering, all sharing 000-111
_CUBE_TETS = []
for _perm in itertools.permutations(range(3)):
    _corner = [0, 0, 0]
    _tet = [tuple(_corner)]
    for _axis in _perm:
        _corner[_axis] = 1
        _tet.append(tuple(_corner))
    _CUBE_TETS.append(_tet)


@dataclass(frozen=True)
class SurfaceSpec:
    s: float
    target: float
    resolution: int = 96
    evaluator: str = "reduced_oracle"
    band: float = 1e-3

    def __post_init__(self):
        if not self.target > 0:
            raise ValueError(f"target must be > 0, got {self.target}")
        if self.resolution < 16:
            raise ValueError(f"resolution must be >= 16, got {self.resolution}")
        if self.evaluator not in EVALUATORS:
            raise ValueError(f"evaluator must be one of {EVALUATORS}, got {self.evaluator!r}")
        if not self.band > 0:
            raise ValueError(f"band must be > 0, got {self.band}")
        if not -1.0 < self.s < 1.0:
            raise ValueError(f"s must lie in (-1, 1), got {self.s}")


@dataclass
class LevelSurfaceSample:
    spec: SurfaceSpec
    points: np.ndarray  # (M, 4): c1, c2, c3, owid
    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray  # (F, 3), zero-based
    physical_mask: np.ndarray  # (R+1, R+1, R+1)
    field: np.ndarray = field(repr=False)  # NaN where not defined
    diagnostic: Optional[str] = None

    @property
    def empty(self):
        return len(self.points) == 0 and len(self.faces) == 0

    def superlevel_count(self):
        """Number of defined grid points with OWID >= target."""
        return int(np.count_nonzero(self.field >= self.spec.target))


def physical_mask(s, c):
    """Physicality of X states (s, c1, c2, c3) for an (N, 3) array of c."""
    c = np.atleast_2d(c)
    c1, c2, c3 = c[:, 0], c[:, 1], c[:, 2]
    plus = np.hypot(s, c1 + c2)
    minus = np.hypot(s, c1 - c2)
    return (1 - c3 - plus >= -4 * PHYS_TOL) & (1 + c3 - minus >= -4 * PHYS_TOL) & (abs(s) < 1)


def _xlog2x(x):
    x = np.clip(x, 0.0, None)
    pos = x > 0
    return np.where(pos, x * np.log2(np.where(pos, x, 1.0)), 0.0)


def _entropy_x_batch(s, c):
    c1, c2, c3 = c[:, 0], c[:, 1], c[:, 2]
    plus = np.hypot(s, c1 + c2)
    minus = np.hypot(s, c1 - c2)
    terms = _xlog2x(1 - c3 + plus) + _xlog2x(1 - c3 - plus) + _xlog2x(1 + c3 + minus) + _xlog2x(1 + c3 - minus)
    return 2.0 - 0.25 * terms


def owid_field_batch(s, c, evaluator="reduced_oracle", cfg=None):
    """OWID at each row of ``c`` (shape (N, 3)); NaN marks not-defined points."""
    if evaluator not in EVALUATORS:
        raise ValueError(f"evaluator must be one of {EVALUATORS}, got {evaluator!r}")
    c = np.atleast_2d(np.asarray(c, dtype=float))
    out = np.full(c.shape[0], np.nan)
    phys = physical_mask(s, c)
    if evaluator == "closed_form":
        for i in np.flatnonzero(phys):
            p = XStateParams(s, *c[i])
            if validate_corner_condition(p):
                out[i] = owid_x_state(p)
        return out
    idx = np.flatnonzero(phys)
    if idx.size:
        cc = c[idx]
        mins, _, _ = reduced_minimize_batch(np.full(idx.size, float(s)), cc, cfg or DEFAULT_CONFIG)
        out[idx] = np.maximum(mins - _entropy_x_batch(s, cc), 0.0)
    return out


def owid_field(s, c, evaluator="reduced_oracle", cfg=None):
    """OWID of the X state (s, c), or None where it is not defined.

    ``closed_form`` is defined only where the corner condition holds;
    ``reduced_oracle`` everywhere the state is physical.
    """
    v = owid_field_batch(s, np.asarray(c, dtype=float)[None], evaluator, cfg)[0]
    return None if np.isnan(v) else float(v)


def grid_axis(resolution):
    return np.linspace(-1.0, 1.0, resolution + 1)


def _grid_points(resolution):
    g = grid_axis(resolution)
    return np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)


def marching_tetrahedra(values, coords, shape, level):
    """Triangulate ``values == level`` on a grid of corner values.

    ``values`` and ``coords`` are flattened over ``shape`` (C order); NaN
    values mark undefined corners, and any cube touching one is skipped.
    Faces are oriented with normals pointing towards larger values.
    """
    nx, ny, nz = shape
    strides = np.array([ny * nz, nz, 1])
    base = np.stack(np.meshgrid(np.arange(nx - 1), np.arange(ny - 1), np.arange(nz - 1), indexing="ij"), -1)
    base = (base.reshape(-1, 3) * strides).sum(axis=1)
    corner_off = {bits: int(np.dot(bits, strides)) for bits in itertools.product((0, 1), repeat=3)}
    cube_ok = np.ones(base.shape[0], dtype=bool)
    for off in corner_off.values():
        cube_ok &= np.isfinite(values[base + off])
    base = base[cube_ok]
    tets = np.concatenate([
        np.stack([base + corner_off[v] for v in tet], axis=1) for tet in _CUBE_TETS
    ]) if base.size else np.empty((0, 4), dtype=np.int64)
    # values within rounding of the level count as on it (and below)
    snap = LEVEL_SNAP * max(1.0, abs(level))
    vals = values[tets]
    above = vals > level + snap
    n_above = above.sum(axis=1)

    edges = []  # (T, 3, 2) grid index pairs per triangle
    ref = []  # (T,) tetrahedra the triangles came from

    odd = np.flatnonzero((n_above == 1) | (n_above == 3))
    if odd.size:
        lone_is_above = n_above[odd] == 1
        lone = np.where(lone_is_above, np.argmax(above[odd], axis=1), np.argmin(above[odd], axis=1))
        others = np.array([[j for j in range(4) if j != i] for i in range(4)])[lone]
        t_idx = tets[odd]
        a = t_idx[np.arange(odd.size), lone]
        o = np.take_along_axis(t_idx, others, axis=1)
        edges.append(np.stack([np.stack([a, o[:, k]], axis=1) for k in range(3)], axis=1))
        ref.append(odd)

    even = np.flatnonzero(n_above == 2)
    if even.size:
        order = np.argsort(~above[even], axis=1, kind="stable")  # above vertices first
        t_idx = np.take_along_axis(tets[even], order, axis=1)
        a, b, c, d = t_idx.T
        ac, ad, bd, bc = (np.stack(e, axis=1) for e in ((a, c), (a, d), (b, d), (b, c)))
        edges.append(np.stack([ac, ad, bd], axis=1))
        edges.append(np.stack([ac, bd, bc], axis=1))
        ref.extend([even, even])

    if not edges:
        return np.empty((0, 3)), np.empty((0, 3), dtype=np.int64)
    edges = np.concatenate(edges)
    ref = np.concatenate(ref)
    lo = edges.min(axis=2)
    hi = edges.max(axis=2)
    # a crossing exactly at a grid point (t = 0) is keyed by that point, so
    # all edges meeting there share one vertex
    n = values.size
    keys = lo * n + hi
    keys = np.where(np.abs(values[lo] - level) <= snap, lo * n + lo, keys)
    keys = np.where(np.abs(values[hi] - level) <= snap, hi * n + hi, keys)
    keep = (keys[:, 0] != keys[:, 1]) & (keys[:, 1] != keys[:, 2]) & (keys[:, 0] != keys[:, 2])
    keys, ref = keys[keep], ref[keep]
    if not len(keys):
        return np.empty((0, 3)), np.empty((0, 3), dtype=np.int64)
    uniq, inverse = np.unique(keys.ravel(), return_inverse=True)
    faces = inverse.reshape(-1, 3)
    g0, g1 = uniq // n, uniq % n
    span = values[g1] - values[g0]
    t = np.where(g0 == g1, 0.0, (level - values[g0]) / np.where(span == 0, 1.0, span))
    verts = coords[g0] + t[:, None] * (coords[g1] - coords[g0])

    # orient towards increasing value
    tv = values[tets[ref]] > level + snap
    tp = coords[tets[ref]]
    up = (tp * tv[..., None]).sum(1) / np.maximum(tv.sum(1), 1)[:, None]
    down = (tp * ~tv[..., None]).sum(1) / np.maximum((~tv).sum(1), 1)[:, None]
    tri = verts[faces]
    normal = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    flip = (normal * (up - down)).sum(axis=1) < 0
    faces[flip] = faces[flip][:, ::-1]
    return verts, faces


def sample_level_surface(spec, cfg=None):
    """Sample the OWID = ``spec.target`` surface at fixed ``spec.s``."""
    n = spec.resolution + 1
    coords = _grid_points(spec.resolution)
    values = owid_field_batch(spec.s, coords, spec.evaluator, cfg)
    phys = physical_mask(spec.s, coords)
    near = np.isfinite(values) & (np.abs(values - spec.target) <= spec.band)
    points = np.column_stack([coords[near], values[near]])
    verts, faces = marching_tetrahedra(values, coords, (n, n, n), spec.target)
    diagnostic = None
    if len(points) == 0 and len(faces) == 0:
        defined = np.isfinite(values)
        top = float(np.max(values[defined])) if defined.any() else float("nan")
        if not defined.any():
            why = "the field is not defined anywhere on the grid"
        elif top < spec.target:
            why = f"target exceeds the largest defined OWID {top:.6g}"
        else:
            why = "no fully defined cell brackets the target and no grid point lies within the band"
        diagnostic = f"empty surface for s={spec.s:g}, target={spec.target:g} ({spec.evaluator}): {why}"
    return LevelSurfaceSample(
        spec=spec,
        points=points,
        vertices=verts,
        faces=faces,
        physical_mask=phys.reshape(n, n, n),
        field=values.reshape(n, n, n),
        diagnostic=diagnostic,
    )


def export_surface(sample, fmt, path):
    """Write ``csv_points`` (c1,c2,c3,owid rows) or ``obj_mesh`` (v/f records)."""
    try:
        if fmt == "csv_points":
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["c1", "c2", "c3", "owid"])
                for row in sample.points:
                    w.writerow([f"{v:.12g}" for v in row])
        elif fmt == "obj_mesh":
            if len(sample.faces) == 0:
                raise ValueError("cannot write an OBJ mesh for an empty surface")
            with open(path, "w") as fh:
                sp = sample.spec
                fh.write(f"# constant OWID surface: s={sp.s:.12g} target={sp.target:.12g} "
                         f"resolution={sp.resolution} evaluator={sp.evaluator}\n")
                for v in sample.vertices:
                    fh.write("v {:.12g} {:.12g} {:.12g}\n".format(*v))
                for f in sample.faces:
                    fh.write("f {} {} {}\n".format(*(f + 1)))
        else:
            raise ValueError(f"format must be 'csv_points' or 'obj_mesh', got {fmt!r}")
    except OSError as exc:
        raise OSError(f"failed writing surface to {path}: {exc}") from exc


def read_points_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != ["c1", "c2", "c3", "owid"]:
        raise ValueError(f"{path}: unexpected header {rows[0]}")
    return np.array(rows[1:], dtype=float).reshape(-1, 4)


def read_obj(path):
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x.split("/")[0]) - 1 for x in parts[1:4]])
    return np.array(verts).reshape(-1, 3), np.array(faces, dtype=np.int64).reshape(-1, 3)

"""Dataset loading, synthetic generators and result serialization."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from importlib import resources

import numpy as np


class TSPLIBError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    name: str
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"dataset {self.name!r} needs an m x n matrix with m, n >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError(f"dataset {self.name!r} has non-finite coordinates")
        object.__setattr__(self, "points", pts)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]


_SECTIONS_REJECTED = ("EDGE_WEIGHT_SECTION", "DISPLAY_DATA_SECTION", "TOUR_SECTION")


def parse_tsplib(text: str, name: str | None = None) -> Dataset:
    """Parse a TSPLIB file with a ``NODE_COORD_SECTION``.

    Node ids are 1-based in the file and become 0-based rows. A missing
    ``EOF`` marker is tolerated.
    """
    header = {}
    lines = text.splitlines()
    pos = 0
    while pos < len(lines):
        line = lines[pos].strip()
        pos += 1
        if not line:
            continue
        if line.startswith("NODE_COORD_SECTION"):
            break
        if line.startswith(_SECTIONS_REJECTED):
            raise TSPLIBError(f"line {pos}: only NODE_COORD_SECTION files are supported")
        if line == "EOF":
            raise TSPLIBError("no NODE_COORD_SECTION found")
        key, sep, value = line.partition(":")
        if not sep:
            raise TSPLIBError(f"line {pos}: expected 'KEY : value', got {line!r}")
        header[key.strip().upper()] = value.strip()
    else:
        raise TSPLIBError("no NODE_COORD_SECTION found")

    if "DIMENSION" not in header:
        raise TSPLIBError("missing DIMENSION")
    try:
        dim = int(header["DIMENSION"])
    except ValueError:
        raise TSPLIBError(f"bad DIMENSION {header['DIMENSION']!r}")
    if dim < 1:
        raise TSPLIBError(f"bad DIMENSION {dim}")

    rows = {}
    width = None
    while pos < len(lines):
        line = lines[pos].strip()
        pos += 1
        if not line:
            continue
        if line == "EOF" or line.endswith("_SECTION"):
            break
        parts = line.split()
        try:
            idx = int(parts[0])
            coords = [float(v) for v in parts[1:]]
        except ValueError:
            raise TSPLIBError(f"line {pos}: malformed coordinate line {line!r}")
        if not coords or (width is not None and len(coords) != width):
            raise TSPLIBError(f"line {pos}: malformed coordinate line {line!r}")
        width = len(coords)
        if not 1 <= idx <= dim or idx in rows:
            raise TSPLIBError(f"line {pos}: node index {idx} invalid for DIMENSION {dim}")
        rows[idx] = coords
    if len(rows) != dim:
        raise TSPLIBError(f"DIMENSION is {dim} but {len(rows)} nodes were listed")
    points = np.array([rows[i] for i in range(1, dim + 1)])
    return Dataset(name or header.get("NAME", "tsplib"), points)


def serialize_tsplib(ds: Dataset) -> str:
    out = [f"NAME : {ds.name}", "TYPE : TSP", f"DIMENSION : {ds.m}"]
    if ds.n == 2:
        out.append("EDGE_WEIGHT_TYPE : EUC_2D")
    out.append("NODE_COORD_SECTION")
    for i, row in enumerate(ds.points, start=1):
        out.append(" ".join([str(i)] + [repr(float(v)) for v in row]))
    out.append("EOF")
    return "\n".join(out) + "\n"


def parse_csv(text: str, has_header: bool = False, name: str = "csv") -> Dataset:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    if has_header and rows:
        rows = rows[1:]
    if not rows:
        raise ValueError("CSV contains no data rows")
    try:
        points = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise ValueError(f"non-numeric CSV value: {exc}")
    if points.ndim != 2:
        raise ValueError("CSV rows have different lengths")
    return Dataset(name, points)


def load_dataset(path: str) -> Dataset:
    """Read a ``.tsp`` or ``.csv`` file; ``eil76`` resolves to the bundled copy."""
    if path.lower() in ("eil76", "eil76.tsp") and not os.path.exists(path):
        text = resources.files("bilevel.data").joinpath("eil76.tsp").read_text()
        return parse_tsplib(text)
    with open(path) as fh:
        text = fh.read()
    if path.lower().endswith(".csv"):
        stem = os.path.splitext(os.path.basename(path))[0]
        try:
            return parse_csv(text, has_header=False, name=stem)
        except ValueError:
            return parse_csv(text, has_header=True, name=stem)
    return parse_tsplib(text)


def eil76() -> Dataset:
    return load_dataset("eil76")


def gen_uniform(m: int, n: int, bounds=(0.0, 1000.0), seed=0, name: str | None = None) -> Dataset:
    lo, hi = bounds
    pts = np.random.default_rng(seed).uniform(lo, hi, size=(m, n))
    return Dataset(name or f"uniform{m}x{n}", pts)


def gen_clusters(blob_centers, spread: float, points_per_blob: int, seed=0,
                 extra_points=(), name: str = "clusters") -> Dataset:
    """Gaussian blobs around ``blob_centers`` plus optional fixed extra points."""
    centers = np.atleast_2d(np.asarray(blob_centers, dtype=float))
    rng = np.random.default_rng(seed)
    blobs = [c + spread * rng.standard_normal((points_per_blob, centers.shape[1]))
             for c in centers]
    extra = np.asarray(extra_points, dtype=float).reshape(-1, centers.shape[1])
    return Dataset(name, np.vstack(blobs + [extra]))


def _star(center, toward, angles_deg, radius):
    """A hub node plus arm nodes at the given angles, measured from the
    direction that points from ``center`` to ``toward``."""
    center = np.asarray(center, dtype=float)
    d = np.asarray(toward, dtype=float) - center
    base = np.arctan2(d[1], d[0])
    ang = base + np.radians(np.asarray(angles_deg, dtype=float))
    arms = center + radius * np.column_stack([np.cos(ang), np.sin(ang)])
    return np.vstack([center, arms])


# Layouts for the global-convergence study. Each cluster is a hub with four
# arms; the arms are placed so that the hub is the strict best center of its
# cluster even after the pull toward the total center is added.
def eleven_node_layout(radius: float = 10.0) -> Dataset:
    """Lone node 0 at the middle, then two five-node stars to its left and right."""
    arms = [90.0, -90.0, 138.6, -138.6]
    mid = (50.0, 50.0)
    pts = np.vstack([
        [mid],
        _star((20.0, 50.0), mid, arms, radius),
        _star((80.0, 50.0), mid, arms, radius),
    ])
    return Dataset("artificial11", pts)


def fifteen_node_layout(radius: float = 5.0) -> Dataset:
    """Three five-node stars on a line; the middle one links the outer two."""
    arms = [90.0, -90.0, 120.0, -120.0]
    mid = (50.0, 50.0)
    pts = np.vstack([
        _star((10.0, 50.0), mid, arms, radius),
        _star((90.0, 50.0), mid, arms, radius),
        _star(mid, (50.0, 100.0), [0.0, 90.0, 180.0, 270.0], radius),
    ])
    return Dataset("artificial15", pts)


def parse_gen_spec(spec: str) -> Dataset:
    """``uniform:M:N[:SEED]``, ``synthetic1002[:SEED]``, ``artificial11`` or
    ``artificial15``.

    ``synthetic1002`` is a seeded uniform stand-in for the unpublished
    1002-node instance, named so that results are not mistaken for it.
    """
    parts = spec.split(":")
    kind = parts[0]
    if kind == "uniform":
        if len(parts) not in (3, 4):
            raise ValueError("expected uniform:M:N[:SEED]")
        seed = int(parts[3]) if len(parts) == 4 else 0
        return gen_uniform(int(parts[1]), int(parts[2]), seed=seed)
    if kind == "synthetic1002" and len(parts) in (1, 2):
        seed = int(parts[1]) if len(parts) == 2 else 0
        return gen_uniform(1002, 2, seed=seed, name="synthetic1002")
    if kind == "artificial11" and len(parts) == 1:
        return eleven_node_layout()
    if kind == "artificial15" and len(parts) == 1:
        return fifteen_node_layout()
    raise ValueError(f"unknown generator spec {spec!r}")


RESULT_COLUMNS = (
    "dataset", "model", "cost", "continuous_cost", "iterations", "time_s",
    "k", "m", "n", "seed", "init", "gauge", "centers", "total_center", "params",
)


def result_row(dataset: Dataset, result, k: int, init: str, gauge: str, params) -> dict:
    """Flatten one solve into the fixed results schema."""
    p = params.__dict__ if hasattr(params, "__dict__") else dict(params)
    return {
        "dataset": dataset.name,
        "model": result.model,
        "cost": round(float(result.discrete_cost), 6),
        "continuous_cost": round(float(result.continuous_cost), 6),
        "iterations": int(result.total_inner_iterations),
        "time_s": round(float(result.wall_time), 4),
        "k": k,
        "m": dataset.m,
        "n": dataset.n,
        "seed": result.seed,
        "init": init,
        "gauge": gauge,
        "centers": [int(i) for i in result.snapped_center_indices],
        "total_center": int(result.total_center_index),
        "params": {key: p[key] for key in sorted(p) if key != "record_trace"},
    }


def write_results(rows: list[dict], fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps(list(rows), indent=2, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for row in rows:
        writer.writerow([
            json.dumps(row[c], sort_keys=True) if isinstance(row[c], (list, dict)) else row[c]
            for c in RESULT_COLUMNS
        ])
    return buf.getvalue()


def read_results_json(text: str) -> list[dict]:
    return json.loads(text)

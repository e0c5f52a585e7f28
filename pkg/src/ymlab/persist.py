"""Snapshots, history CSV, JSON reports.  All writes are atomic
(temp file in the target directory, then rename).

Snapshot format, version 1 (all integers little-endian):

    bytes 0-3   magic "YMF1"
    byte  4     format version (1)
    byte  5     group id: 0 = U1, 1 = SU2, 2 = SU3
    byte  6     lattice dimension d (3 or 4)
    byte  7     reserved (0)
    then d x u32 extents L_0..L_{d-1}
    then the links, site-major with x_0 fastest, direction-minor:
    U(1) as one f64 angle per link; SU(n) as the n^2 complex entries in row
    major order, each as (re, im) f64 pairs.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .fields import LinkField
from .groups import Group, U1, SU2, SU3
from .lattice import Lattice

MAGIC = b"YMF1"
FORMAT_VERSION = 1
_GROUP_IDS = {"U1": 0, "SU2": 1, "SU3": 2}
_GROUPS_BY_ID = {0: U1, 1: SU2, 2: SU3}
_LOAD_UNITARITY_TOL = 1e-6


class SnapshotError(ValueError):
    pass


def atomic_write_bytes(path: str, data: bytes):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-ymf-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str, text: str):
    atomic_write_bytes(path, text.encode("utf-8"))


def _payload_order(u: np.ndarray, d: int) -> np.ndarray:
    """Reorder a (d, *dims, *elem) link array so a C ravel runs site-major with
    x_0 fastest and direction-minor."""
    a = np.moveaxis(u, 0, d)  # (*dims, d, *elem)
    perm = tuple(range(d - 1, -1, -1)) + tuple(range(d, a.ndim))
    return a.transpose(perm)  # (x_{d-1}, ..., x_0, d, *elem)


def snapshot_bytes(U: LinkField) -> bytes:
    d = U.lattice.d
    gid = _GROUP_IDS[U.group.name]
    header = MAGIC + bytes([FORMAT_VERSION, gid, d, 0])
    header += np.asarray(U.lattice.dims, dtype="<u4").tobytes()
    if U.group.is_abelian:
        angles = U.group.reunitarize(U.u)  # canonical wrap to [-pi, pi)
        payload = _payload_order(angles, d).astype("<f8").tobytes()
    else:
        payload = _payload_order(U.u, d).astype("<c16").tobytes()
    return header + payload


def save_snapshot(U: LinkField, path: str):
    atomic_write_bytes(path, snapshot_bytes(U))


def load_snapshot(path: str) -> LinkField:
    with open(path, "rb") as fh:
        data = fh.read()
    return snapshot_from_bytes(data)


def snapshot_from_bytes(data: bytes) -> LinkField:
    if len(data) < 8 or data[:4] != MAGIC:
        raise SnapshotError("not a link-field snapshot (bad magic)")
    version, gid, d, _reserved = data[4], data[5], data[6], data[7]
    if version != FORMAT_VERSION:
        raise SnapshotError(f"unsupported snapshot version {version}")
    if gid not in _GROUPS_BY_ID:
        raise SnapshotError(f"unknown group id {gid}")
    if d not in (3, 4):
        raise SnapshotError(f"unsupported lattice dimension {d}")
    group: Group = _GROUPS_BY_ID[gid]
    if len(data) < 8 + 4 * d:
        raise SnapshotError("truncated snapshot header")
    dims = tuple(int(x) for x in np.frombuffer(data, dtype="<u4", count=d, offset=8))
    if any(L < 1 for L in dims):
        raise SnapshotError(f"invalid extents {dims}")
    lattice = Lattice(dims)
    n_links = lattice.n_links
    elem_count = 1 if group.is_abelian else group.n * group.n
    dtype = np.dtype("<f8") if group.is_abelian else np.dtype("<c16")
    expected = 8 + 4 * d + n_links * elem_count * dtype.itemsize
    if len(data) != expected:
        raise SnapshotError(
            f"truncated or oversized snapshot: {len(data)} bytes, expected {expected}"
        )
    flat = np.frombuffer(data, dtype=dtype, offset=8 + 4 * d)
    shape = tuple(reversed(dims)) + (d,) + group.elem_shape
    a = flat.reshape(shape)
    perm = tuple(range(d - 1, -1, -1)) + tuple(range(d, a.ndim))
    u = np.ascontiguousarray(np.moveaxis(a.transpose(perm), d, 0))
    if group.is_abelian:
        u = u.astype(np.float64)
        if not np.all(np.isfinite(u)):
            raise SnapshotError("non-finite link angle in snapshot")
    else:
        u = u.astype(np.complex128)
        defect = group.unitarity_defect(u)
        if defect > _LOAD_UNITARITY_TOL:
            raise SnapshotError(f"links violate unitarity by {defect:.3e}")
    return LinkField(lattice, group, u)


# -- run artifacts ----------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def history_csv_text(history) -> str:
    lines = ["iter,energy,e_plus,e_minus,q,force_inf,step"]
    for row in history:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def jsonable(obj):
    """Recursively convert report objects to JSON-safe values (NaN -> null)."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) else v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def json_text(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def write_json(path: str, obj):
    atomic_write_text(path, json_text(obj))

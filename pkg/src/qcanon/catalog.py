"""Catalog of canonical circuits up to a T-count bound.

Entries are grouped into buckets by their exact |trace|^2 ring value (the
double key is only a sorted representative), and each non-degenerate
bucket carries three geometric indexes over rotation axes: per containing
tile, per nearest boundary arc, per nearest corner.  The file format is a
flat little-endian dump with a trailing CRC-64 so truncation and bit rot
are detected on load.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import assign_bins, tile_of  # noqa: F401  (tile_of re-exported)
from .rewrite import blocks_tokens, pack_bits, unpack_bits
from .ring import Real2
from .unitary import ExactUnitary, GATES, su2_quaternion

MAGIC = b"QCAN"
VERSION = 1
DELTA_BUCKET = 1e-10
DEFAULT_MAX_TCOUNT = 26

_FOUR = Real2.from_int(4)


class CatalogError(ValueError):
    pass


def canonical_count(t_max: int) -> int:
    """Number of canonical circuits with T-count <= t_max (closed form)."""
    if t_max < 0:
        return 0
    if t_max < 4:
        return t_max + 1
    return 2 ** (t_max - 3) + 3


def enumerate_canonical(t_max: int):
    """Yield canonical block strings with T-count <= t_max.

    Order is (t_count, bit-value) with the first free bit (the fifth
    syllable) most significant.  Iterative except for trivially bounded
    recursion over free bits.
    """
    if t_max < 0:
        return
    for t in range(0, min(t_max, 3) + 1):
        yield (0,) * t
    for t in range(4, t_max + 1):
        base = (0, 0, 0, 0)
        free = t - 4
        for v in range(1 << free):
            # MSB of v is the fifth syllable
            yield base + tuple((v >> (free - 1 - i)) & 1 for i in range(free))


_TH = GATES["T"] * GATES["H"]
_SHTH = GATES["S"] * GATES["H"] * _TH
_BLOCK = (_TH, _SHTH)


def _iter_exact(t: int, prefix_u: ExactUnitary, free: int):
    """DFS over free suffix bits, yielding (suffix_bits, product) in lex order."""
    if free == 0:
        yield (), prefix_u
        return
    for b in (0, 1):
        for suffix, u in _iter_exact(t, prefix_u * _BLOCK[b], free - 1):
            yield (b,) + suffix, u


def _entry_of(bits: tuple[int, ...], u: ExactUnitary):
    tsq = u.trace_abs_sq()
    trace = math.sqrt(max(0.0, float(tsq)))
    if tsq == _FOUR:
        axis = (0.0, 0.0, 1.0)  # placeholder; the identity level has no axis
    else:
        q = su2_quaternion(u.to_matrix())
        s = math.sqrt(max(1e-300, float(q[1] ** 2 + q[2] ** 2 + q[3] ** 2)))
        axis = (q[1] / s, q[2] / s, q[3] / s)
    return tsq.key(), trace, axis


def _entries_for_prefix(args):
    """Worker task: all entries below one (t, fixed-prefix) subtree."""
    t, head_bits = args
    u = GATES["I"]
    for b in head_bits:
        u = u * _BLOCK[b]
    out = []
    for suffix, prod in _iter_exact(t, u, t - len(head_bits)):
        bits = head_bits + suffix
        key, trace, axis = _entry_of(bits, prod)
        out.append((t, bits, key, trace, axis))
    return out


@dataclass
class Bucket:
    """All catalog entries sharing one exact |trace| class."""

    key: float
    t_counts: np.ndarray
    bits_packed: list[bytes]
    traces: np.ndarray
    axes: np.ndarray
    face_idx: list = field(default_factory=list)
    edge_idx: list = field(default_factory=list)
    vertex_idx: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.bits_packed)

    @property
    def degenerate(self) -> bool:
        return self.key <= DELTA_BUCKET or self.key >= 2.0 - DELTA_BUCKET

    def entry_bits(self, i: int) -> tuple[int, ...]:
        return unpack_bits(self.bits_packed[i], int(self.t_counts[i]))

    def build_indexes(self) -> None:
        if len(self) == 0 or self.key >= 2.0 - DELTA_BUCKET:
            self.face_idx = [np.empty(0, np.int64) for _ in range(24)]
            self.edge_idx = [np.empty(0, np.int64) for _ in range(36)]
            self.vertex_idx = [np.empty(0, np.int64) for _ in range(14)]
            return
        faces, edges, verts = assign_bins(self.axes)
        self.face_idx = [np.flatnonzero(faces == j) for j in range(24)]
        self.edge_idx = [np.flatnonzero(edges == j) for j in range(36)]
        self.vertex_idx = [np.flatnonzero(verts == j) for j in range(14)]


class Catalog:
    """Immutable bucket list sorted by representative trace key."""

    def __init__(self, buckets: list[Bucket], max_tcount: int):
        self.buckets = buckets
        self.max_tcount = max_tcount
        self.keys = np.array([b.key for b in buckets])
        if len(self.keys) > 1:
            gaps = np.diff(self.keys)
            if not (gaps > 2 * DELTA_BUCKET).all():
                raise CatalogError("bucket keys closer than the bucket tolerance")
        for b in buckets:
            if not b.face_idx:
                b.build_indexes()

    def entry_count(self) -> int:
        return sum(len(b) for b in self.buckets)

    def distinct_traces(self, t_cap: int | None = None) -> int:
        if t_cap is None:
            return len(self.buckets)
        return sum(1 for b in self.buckets if int(b.t_counts.min()) <= t_cap)

    def window(self, trace: float, radius: float) -> range:
        """Bucket index range with |key - trace| < radius."""
        lo = int(np.searchsorted(self.keys, trace - radius, side="left"))
        hi = int(np.searchsorted(self.keys, trace + radius, side="right"))
        return range(lo, hi)


def build(t_max: int, workers: int = 1) -> Catalog:
    """Enumerate, evaluate exactly, and index every canonical circuit.

    Deterministic for any worker count: entries are merged in
    (t_count, bit-value) order before bucketing.
    """
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    if t_max > DEFAULT_MAX_TCOUNT:
        raise ValueError(
            f"t_max {t_max} above the memory budget ({DEFAULT_MAX_TCOUNT})"
        )
    rows = []
    small, jobs = [], []
    for t in range(0, min(t_max, 4) + 1):
        small.append((t, (0,) * t))
    split = max(0, min(4, t_max - 12)) if workers > 1 else 0
    for t in range(5, t_max + 1):
        free = t - 4
        head = min(split, free)
        for v in range(1 << head):
            prefix = (0, 0, 0, 0) + tuple((v >> (head - 1 - i)) & 1 for i in range(head))
            jobs.append((t, prefix))
    if workers > 1 and jobs:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_entries_for_prefix, jobs, chunksize=4):
                rows.extend(chunk)
    else:
        for job in jobs:
            rows.extend(_entries_for_prefix(job))
    for job in small:
        rows.extend(_entries_for_prefix(job))
    rows.sort(key=lambda r: (r[0], r[1]))
    return _bucketize(rows, t_max)


def _bucketize(rows, t_max: int) -> Catalog:
    by_class: dict[tuple, list] = {}
    for row in rows:
        by_class.setdefault(row[2], []).append(row)
    buckets = []
    for cls in by_class.values():
        key = cls[0][3]
        t_counts = np.array([r[0] for r in cls], dtype=np.uint8)
        packed = [pack_bits(r[1]) for r in cls]
        traces = np.array([r[3] for r in cls])
        axes = np.array([r[4] for r in cls])
        if not (np.abs(traces - key) < DELTA_BUCKET).all():
            raise CatalogError("exact trace class spans more than the tolerance")
        buckets.append(Bucket(key, t_counts, packed, traces, axes))
    buckets.sort(key=lambda b: b.key)
    return Catalog(buckets, t_max)


# CRC-64/XZ: reflected 0x42F0E1EBA9EA3693, init and xorout all-ones.
_CRC_TABLE = []
for _b in range(256):
    _c = _b
    for _ in range(8):
        _c = (_c >> 1) ^ 0xC96C5795D7870F42 if _c & 1 else _c >> 1
    _CRC_TABLE.append(_c)


def crc64(data: bytes, crc: int = 0) -> int:
    crc ^= 0xFFFFFFFFFFFFFFFF
    for byte in data:
        crc = _CRC_TABLE[(crc ^ byte) & 0xFF] ^ (crc >> 8)
    return crc ^ 0xFFFFFFFFFFFFFFFF


if crc64(b"123456789") != 0x995DC9BBDF1939FA:
    raise AssertionError("CRC-64 self-check failed")


def save(cat: Catalog, path) -> None:
    parts = [MAGIC, struct.pack("<II", VERSION, cat.max_tcount)]
    for b in cat.buckets:
        parts.append(struct.pack("<dQ", b.key, len(b)))
        for i in range(len(b)):
            t = int(b.t_counts[i])
            parts.append(struct.pack("<B", t))
            parts.append(b.bits_packed[i])
            parts.append(struct.pack("<d", b.traces[i]))
            parts.append(struct.pack("<3d", *b.axes[i]))
    blob = b"".join(parts)
    blob += struct.pack("<Q", crc64(blob))
    with open(path, "wb") as f:
        f.write(blob)


def load(path) -> Catalog:
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < 20:
        raise CatalogError("file too short")
    stored, = struct.unpack_from("<Q", blob, len(blob) - 8)
    if crc64(blob[:-8]) != stored:
        raise CatalogError("checksum mismatch")
    if blob[:4] != MAGIC:
        raise CatalogError("bad magic")
    version, t_max = struct.unpack_from("<II", blob, 4)
    if version != VERSION:
        raise CatalogError(f"unsupported version {version}")
    off, end = 12, len(blob) - 8
    buckets = []
    while off < end:
        if off + 16 > end:
            raise CatalogError("truncated bucket header")
        key, count = struct.unpack_from("<dQ", blob, off)
        off += 16
        t_counts = np.empty(count, dtype=np.uint8)
        packed = []
        traces = np.empty(count)
        axes = np.empty((count, 3))
        for i in range(count):
            if off + 1 > end:
                raise CatalogError("truncated entry")
            t = blob[off]
            off += 1
            nb = (t + 7) // 8
            if off + nb + 32 > end:
                raise CatalogError("truncated entry")
            t_counts[i] = t
            packed.append(blob[off:off + nb])
            off += nb
            traces[i], = struct.unpack_from("<d", blob, off)
            off += 8
            axes[i] = struct.unpack_from("<3d", blob, off)
            off += 24
            if t > t_max:
                raise CatalogError("entry exceeds catalog t_max")
        buckets.append(Bucket(key, t_counts, packed, traces, axes))
    return Catalog(buckets, t_max)

"""Enumeration of the orbit Gamma+ . (0, 1)^t and its on-disk cache format.

Orbit vectors (a + b phi, c + d phi) are handled as integer quadruples
(a, b, c, d).  Every generator has nonnegative integer action on quadruples,
and l = a + b + c + d strictly increases under every generator except B
acting on the base vector (0, 0, 1, 0), so pruning at l > bound is sound.
"""

import logging
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CacheFormatError, InvariantViolation, ResourceLimitError
from .hecke import QUAD_ACTION

log = logging.getLogger(__name__)

BASE = (0, 0, 1, 0)
GENERATOR_ORDER = ("A", "B", "C", "D")
_ACTIONS = np.array([QUAD_ACTION[g] for g in GENERATOR_ORDER], dtype=np.int64)

MAGIC = b"PSPC1"
CACHE_VERSION = 1
_HEADER = struct.Struct("<IIQ")  # version, l-bound, record count: 16 bytes
DEFAULT_MAX_VECTORS = 60_000_000


@dataclass(frozen=True, eq=False)
class OrbitCensus:
    """All orbit quadruples with l <= bound, sorted lexicographically."""

    bound: int
    vectors: np.ndarray  # (N, 4) int64, unique rows in lexicographic order
    counts_per_ell: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.vectors)

    @property
    def ell(self):
        return self.vectors.sum(axis=1)

    def as_set(self):
        return set(map(tuple, self.vectors.tolist()))

    def __contains__(self, v):
        return _key(np.asarray([v], dtype=np.int64), self.bound)[0] in self._keys()

    def _keys(self):
        keys = getattr(self, "_keyset", None)
        if keys is None:
            keys = set(_key(self.vectors, self.bound).tolist())
            object.__setattr__(self, "_keyset", keys)
        return keys

    def restrict(self, bound):
        """Sub-census with l <= bound (bound must not exceed self.bound)."""
        if bound > self.bound:
            raise ValueError("cannot restrict to a larger bound")
        return _make_census(bound, self.vectors[self.ell <= bound])

    def equals(self, other):
        return self.bound == other.bound and np.array_equal(self.vectors, other.vectors)


def _bits(bound):
    return max(int(bound).bit_length(), 1)


def _key(vecs, bound):
    s = _bits(bound)
    return (vecs[:, 0] << (3 * s)) | (vecs[:, 1] << (2 * s)) | (vecs[:, 2] << s) | vecs[:, 3]


def _make_census(bound, vecs):
    ell = vecs.sum(axis=1)
    values, counts = np.unique(ell, return_counts=True)
    counts_per_ell = {int(v): int(c) for v, c in zip(values, counts)}
    return OrbitCensus(bound, vecs, counts_per_ell)


def apply_generators(vecs):
    """All four generator images of each row of vecs, as one (4N, 4) array."""
    return np.concatenate([vecs @ M.T for M in _ACTIONS])


def _expand(chunk, bound):
    children = apply_generators(chunk)
    parent_ell = np.tile(chunk.sum(axis=1), len(_ACTIONS))
    child_ell = children.sum(axis=1)
    keep = (child_ell <= bound) & (child_ell > parent_ell)
    return children[keep]


def orbit_enumerate(bound, threads=1, max_vectors=DEFAULT_MAX_VECTORS):
    """Breadth-first closure of (0, 0, 1, 0) under A, B, C, D, pruned at l > bound.

    The frontier of each level is split into `threads` shards that are expanded
    concurrently; the merged result is sorted, so content never depends on the
    thread count.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if 4 * _bits(bound) > 63:
        raise ValueError(f"bound {bound} too large for 64-bit keys")
    frontier = np.array([BASE], dtype=np.int64)
    levels = [frontier]
    total = 1
    depth = 0
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while len(frontier):
            if pool is not None and len(frontier) >= 4 * threads:
                shards = np.array_split(frontier, threads)
                children = np.concatenate(list(pool.map(lambda s: _expand(s, bound), shards)))
            else:
                children = _expand(frontier, bound)
            if not len(children):
                break
            keys, first = np.unique(_key(children, bound), return_index=True)
            frontier = children[first]
            total += len(frontier)
            depth += 1
            if total > max_vectors:
                raise ResourceLimitError(
                    f"orbit enumeration to l <= {bound} exceeded {max_vectors} vectors",
                    progress={"depth": depth, "vectors": total},
                )
            levels.append(frontier)
    finally:
        if pool is not None:
            pool.shutdown()
    allvecs = np.concatenate(levels)
    _, first = np.unique(_key(allvecs, bound), return_index=True)
    vecs = allvecs[first]
    if vecs.min() < 0:
        raise InvariantViolation("negative orbit component")
    log.debug("orbit to l<=%d: %d vectors, depth %d", bound, len(vecs), depth)
    return _make_census(bound, vecs)


def check_closure(census, sample=None, rng=None):
    """Return the children (l <= bound) of census vectors that are missing from it."""
    vecs = census.vectors
    if sample is not None and sample < len(vecs):
        rng = rng or np.random.default_rng(0)
        vecs = vecs[rng.choice(len(vecs), size=sample, replace=False)]
    children = apply_generators(vecs)
    children = children[children.sum(axis=1) <= census.bound]
    known = np.sort(_key(census.vectors, census.bound))
    ck = _key(children, census.bound)
    pos = np.searchsorted(known, ck)
    pos[pos == len(known)] = 0
    return children[known[pos] != ck]


# ---- cache file --------------------------------------------------------------

def census_bytes(census):
    header = MAGIC + _HEADER.pack(CACHE_VERSION, census.bound, len(census))
    return header + census.vectors.astype("<u4").tobytes()


def write_census(census, path):
    with open(path, "wb") as fh:
        fh.write(census_bytes(census))


def read_census(path, validate_sample=1000):
    with open(path, "rb") as fh:
        data = fh.read()
    return census_from_bytes(data, validate_sample=validate_sample)


def census_from_bytes(data, validate_sample=1000):
    head = len(MAGIC) + _HEADER.size
    if len(data) < head or data[: len(MAGIC)] != MAGIC:
        raise CacheFormatError("missing PSPC1 header")
    version, bound, count = _HEADER.unpack_from(data, len(MAGIC))
    if version != CACHE_VERSION:
        raise CacheFormatError(f"cache version {version} is not supported (expected {CACHE_VERSION})")
    if len(data) != head + 16 * count:
        raise CacheFormatError(f"expected {count} records, file holds {(len(data) - head) / 16:g}")
    vecs = np.frombuffer(data, dtype="<u4", offset=head).reshape(-1, 4).astype(np.int64)
    if count:
        keys = _key(vecs, bound)
        if np.any(np.diff(keys) <= 0):
            raise CacheFormatError("records are not strictly sorted")
        if vecs.sum(axis=1).max() > bound:
            raise CacheFormatError("record exceeds the stated l-bound")
    census = _make_census(bound, vecs)
    if validate_sample and count and len(check_closure(census, sample=validate_sample)):
        raise CacheFormatError("cached census is not closed under the generators")
    return census


def cache_io(census, path):
    """Write the census and read it back, raising CacheFormatError if the bytes do not survive."""
    write_census(census, path)
    if census_bytes(read_census(path)) != census_bytes(census):
        raise CacheFormatError(f"round trip through {path} changed the census")

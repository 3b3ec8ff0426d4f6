"""On-disk phi tables.

File layout (all integers little-endian)::

    b"PHIS" | version: u8 = 1 | n: u64 | phi(1) ... phi(n): u64 each
"""
from __future__ import annotations

import os
import random
import re
import struct
import tempfile
from pathlib import Path

import numpy as np

from .arith import euler_phi
from .errors import CorruptCacheError
from .sieve import PhiSieve

MAGIC = b"PHIS"
VERSION = 1
HEADER = struct.Struct("<4sBQ")
SPOT_CHECKS = 16
ENV_VAR = "SPARSEPHI_CACHE_DIR"

_NAME = re.compile(r"^phi-(\d+)\.phis$")


def default_cache_dir():
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "sparsephi"


def encode(sieve):
    body = np.ascontiguousarray(sieve.values[1 : sieve.n + 1], dtype="<u8").tobytes()
    return HEADER.pack(MAGIC, VERSION, sieve.n) + body


def save_sieve(path, sieve):
    """Write atomically: temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(encode(sieve))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_sieve(path, seed=0):
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise CorruptCacheError(f"{path}: truncated header")
    magic, version, n = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptCacheError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CorruptCacheError(f"{path}: unsupported version {version}")
    if n < 1 or len(data) != HEADER.size + 8 * n:
        raise CorruptCacheError(f"{path}: expected {n} entries, file has {len(data) - HEADER.size} bytes")
    body = np.frombuffer(data, dtype="<u8", offset=HEADER.size)
    dtype = np.uint32 if n <= 0xFFFFFFFF else np.uint64
    if dtype is np.uint32 and body.max() > 0xFFFFFFFF:
        raise CorruptCacheError(f"{path}: value exceeds phi(k) <= k")
    values = np.zeros(n + 1, dtype=dtype)
    values[1:] = body
    rng = random.Random(seed)
    for k in [1, n] + [rng.randint(1, n) for _ in range(SPOT_CHECKS - 2)]:
        if int(values[k]) != euler_phi(k):
            raise CorruptCacheError(f"{path}: phi({k}) recorded as {int(values[k])}")
    return PhiSieve(n, values)


def cache_path(cache_dir, n):
    return Path(cache_dir) / f"phi-{n}.phis"


def find_cached(cache_dir, n, slack=4):
    """Smallest cached horizon in [n, slack * n], or None."""
    cache_dir = Path(cache_dir)
    if not cache_dir.is_dir():
        return None
    sizes = []
    for p in cache_dir.iterdir():
        mt = _NAME.match(p.name)
        if mt and n <= int(mt.group(1)) <= slack * n:
            sizes.append(int(mt.group(1)))
    return cache_path(cache_dir, min(sizes)) if sizes else None


def fetch(cache_dir, n, build):
    """A table covering n: from the cache when a valid file exists, else built and stored."""
    path = find_cached(cache_dir, n)
    if path is not None:
        try:
            return load_sieve(path)
        except CorruptCacheError:
            path.unlink(missing_ok=True)  # rebuild below
    sieve = build(n)
    try:
        save_sieve(cache_path(cache_dir, n), sieve)
    except OSError:
        pass  # a read-only cache only costs the rebuild
    return sieve

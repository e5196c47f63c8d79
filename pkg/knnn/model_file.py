"""
Binary model persistence.

Layout (little-endian throughout):

    magic "KNNN" | u16 version
    u32 D | u32 N | u32 L | u32 S | u32 k_nnn | u32 n | u16 floor_policy
    f64 floor_ratio | u8 method | u32 k | u8 reorder | u8 flags
    u32 permutation[D]
    f64 train[N*D]                      original feature order
    packs   (flags & 1) for each point, for each set: n_s values then
            n_s eigenvectors of w_s components each
    global  (flags & 2) for each set: n_s values then n_s eigenvectors
    u64 FNV-1a of every preceding byte
"""

from __future__ import annotations

import logging
import struct
import time
from pathlib import Path

import numpy as np

from knnn.core.constants import (
    DEFAULT_K_NNN,
    FLAG_GLOBAL,
    FLAG_PACKS,
    FLOOR_POLICY_RELATIVE,
    FNV64_OFFSET,
    FNV64_PRIME,
    METHODS,
    MODEL_MAGIC,
    MODEL_VERSION,
)
from knnn.core.errors import (
    BadConfig,
    BadMagic,
    ChecksumMismatch,
    KnnnError,
    ModelFileError,
    TruncatedFile,
    UnsupportedVersion,
)
from knnn.core.models import EigenPack, FeatureMatrix, PartitionPlan, ScoreConfig, SetPacks, TrainedModel

logger = logging.getLogger(__name__)

MASK64 = 0xFFFFFFFFFFFFFFFF
# Bodies above this size log their checksum time at INFO
SLOW_CHECKSUM_BYTES = 16 << 20
PREAMBLE = struct.Struct("<4sH")
HEADER = struct.Struct("<4sH6IHdBIBB")
CHECKSUM = struct.Struct("<Q")


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a."""
    h = FNV64_OFFSET
    prime = FNV64_PRIME
    for byte in data:
        h = ((h ^ byte) * prime) & MASK64
    return h


def checksum(body: bytes) -> int:
    """FNV-1a of a model body, with its running time logged."""
    t0 = time.perf_counter()
    value = fnv1a64(body)
    elapsed = time.perf_counter() - t0
    level = logging.INFO if len(body) >= SLOW_CHECKSUM_BYTES else logging.DEBUG
    logger.log(level, "FNV-1a over %.1f MiB took %.2fs", len(body) / (1 << 20), elapsed)
    return value


def _widths(plan: PartitionPlan, n: int) -> list[tuple[int, int]]:
    """(w_s, n_s) for every set."""
    return [(w, min(n, w)) for w in plan.widths]


def _pack_block(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Rows of [values..., vector_0..., vector_1..., ...] for stacked packs."""
    count = values.shape[0]
    return np.concatenate([values, np.swapaxes(vectors, 1, 2).reshape(count, -1)], axis=1)


def encode_model(model: TrainedModel) -> bytes:
    plan = model.plan
    shapes = _widths(plan, model.n)
    config = model.config or ScoreConfig(method="knnn" if model.has_packs else "knn", k_nnn=model.k_nnn)
    flags = (FLAG_PACKS if model.has_packs else 0) | (FLAG_GLOBAL if model.has_global else 0)

    for s, (w, n_s) in enumerate(shapes):
        if model.has_packs and model.packs[s].values.shape != (model.n_rows, n_s):
            raise BadConfig(f"Set {s} packs hold {model.packs[s].n} pairs, expected {n_s}")
        if model.has_global and model.global_packs[s].n != n_s:
            raise BadConfig(f"Set {s} global pack holds {model.global_packs[s].n} pairs, expected {n_s}")

    parts = [
        HEADER.pack(
            MODEL_MAGIC,
            MODEL_VERSION,
            model.dim,
            model.n_rows,
            plan.set_width,
            plan.set_count,
            model.k_nnn,
            model.n,
            FLOOR_POLICY_RELATIVE,
            model.floor_ratio,
            METHODS.index(config.method),
            config.k,
            1 if config.reorder else 0,
            flags,
        ),
        plan.permutation.astype("<u4").tobytes(),
        model.train.rows.astype("<f8").tobytes(),
    ]
    if model.has_packs:
        blocks = [_pack_block(p.values, p.vectors) for p in model.packs]
        parts.append(np.concatenate(blocks, axis=1).astype("<f8").tobytes())
    if model.has_global:
        for pack in model.global_packs:
            parts.append(_pack_block(pack.values[None], pack.vectors[None]).astype("<f8").tobytes())
    body = b"".join(parts)
    return body + CHECKSUM.pack(checksum(body))


def save_model(model: TrainedModel, path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    data = encode_model(model)
    p.write_bytes(data)
    logger.info("Saved model (%d x %d, %d set(s)) to %s [%d bytes]", model.n_rows, model.dim, model.plan.set_count, p, len(data))
    return p


def _split_block(block: np.ndarray, shapes: list[tuple[int, int]]) -> list[tuple[np.ndarray, np.ndarray]]:
    """Inverse of the per-set [values, vectors] row layout."""
    out = []
    offset = 0
    for w, n_s in shapes:
        values = block[:, offset:offset + n_s]
        offset += n_s
        vectors = block[:, offset:offset + n_s * w].reshape(-1, n_s, w)
        offset += n_s * w
        out.append((values, np.swapaxes(vectors, 1, 2)))
    return out


def decode_model(data: bytes, source: str = "<bytes>") -> TrainedModel:
    """
    Parse model bytes, checking length, checksum, magic, version and
    payload size in that order.
    """
    if len(data) < HEADER.size + CHECKSUM.size:
        raise TruncatedFile(source, f"{len(data)} bytes is shorter than a model header")
    body, (stored,) = data[:-CHECKSUM.size], CHECKSUM.unpack(data[-CHECKSUM.size:])
    if checksum(body) != stored:
        raise ChecksumMismatch(source, "checksum does not match contents")
    magic, version = PREAMBLE.unpack_from(body)
    if magic != MODEL_MAGIC:
        raise BadMagic(source, f"bad magic {magic!r}")
    if version != MODEL_VERSION:
        raise UnsupportedVersion(source, f"model version {version}, this build reads {MODEL_VERSION}")

    (_, _, dim, n_rows, set_width, set_count, k_nnn, n, policy,
     floor_ratio, method, k, reorder, flags) = HEADER.unpack_from(body)
    if policy != FLOOR_POLICY_RELATIVE:
        raise ModelFileError(source, f"unknown eigenvalue floor policy {policy}")
    if method >= len(METHODS):
        raise ModelFileError(source, f"unknown method code {method}")
    if set_width < 1 or set_width > dim or -(-dim // set_width) != set_count:
        raise ModelFileError(source, f"inconsistent set layout D={dim}, L={set_width}, S={set_count}")

    widths = [min(set_width, dim - b) for b in range(0, dim, set_width)]
    shapes = [(w, min(n, w)) for w in widths]
    per_point = sum(n_s + n_s * w for w, n_s in shapes)
    expected = HEADER.size + 4 * dim + 8 * n_rows * dim
    if flags & FLAG_PACKS:
        expected += 8 * n_rows * per_point
    if flags & FLAG_GLOBAL:
        expected += 8 * per_point
    if len(body) != expected:
        raise TruncatedFile(source, f"payload is {len(body)} bytes, header implies {expected}")

    offset = HEADER.size
    perm = np.frombuffer(body, dtype="<u4", count=dim, offset=offset).astype(np.int64)
    offset += 4 * dim
    rows = np.frombuffer(body, dtype="<f8", count=n_rows * dim, offset=offset).reshape(n_rows, dim)
    offset += 8 * n_rows * dim

    packs: tuple[SetPacks, ...] = ()
    global_packs: tuple[EigenPack, ...] = ()
    try:
        if flags & FLAG_PACKS:
            block = np.frombuffer(body, dtype="<f8", count=n_rows * per_point, offset=offset)
            offset += 8 * n_rows * per_point
            packs = tuple(SetPacks(v, vec) for v, vec in _split_block(block.reshape(n_rows, per_point), shapes))
        if flags & FLAG_GLOBAL:
            block = np.frombuffer(body, dtype="<f8", count=per_point, offset=offset)
            global_packs = tuple(EigenPack(v[0], vec[0]) for v, vec in _split_block(block.reshape(1, per_point), shapes))

        name = METHODS[method]
        config = ScoreConfig(
            method=name,
            k=k,
            k_nnn=k_nnn if name == "knnn" else DEFAULT_K_NNN,
            n=n,
            L=set_width,
            reorder=bool(reorder),
        )
        return TrainedModel(
            train=FeatureMatrix(rows),
            plan=PartitionPlan(permutation=perm, set_width=set_width),
            k_nnn=k_nnn,
            n=n,
            packs=packs,
            global_packs=global_packs,
            config=config,
            floor_ratio=floor_ratio,
        )
    except ModelFileError:
        raise
    except KnnnError as e:
        raise ModelFileError(source, f"invalid contents: {e}") from e


def load_model(path: str | Path) -> TrainedModel:
    """
    Raises:
        TruncatedFile, ChecksumMismatch, BadMagic, UnsupportedVersion
    """
    p = Path(path)
    model = decode_model(p.read_bytes(), source=str(p))
    logger.info("Loaded model (%d x %d, %d set(s)) from %s", model.n_rows, model.dim, model.plan.set_count, p)
    return model

"""Sample embeddings: spatial pooling, validation, and file I/O.

Two on-disk formats are supported:

* ``EMB1`` binary: 4-byte magic ``EMB1``, then little-endian u32 sample
  count N, u32 feature dim C, u32 byte length of the id/label table.
  The table holds, for each row in order, a length-prefixed (u32) UTF-8
  sample id followed by a length-prefixed UTF-8 label.  Row data follows
  as N*C little-endian 32-bit floats.
* CSV: header ``id,label,f0..f{C-1}``, one sample per line.

Values are stored at 32-bit precision; everything downstream computes in
64-bit.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError

EMB1_MAGIC = b"EMB1"


@dataclass(frozen=True)
class RawFeatureTensor:
    """Per-sample spatial feature maps, shape (samples, channels, rows, cols)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 4:
            raise ValidationError(
                f"feature tensor must be 4-dimensional, got shape {arr.shape}"
            )
        if min(arr.shape) < 1:
            raise ValidationError(f"all tensor dimensions must be >= 1, got {arr.shape}")
        bad = ~np.isfinite(arr)
        if bad.any():
            n, c = np.argwhere(bad)[0][:2]
            raise ValidationError(
                f"non-finite value in feature tensor at sample {n}, channel {c}"
            )
        object.__setattr__(self, "values", arr)

    @property
    def samples(self) -> int:
        return self.values.shape[0]

    @property
    def channels(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class EmbeddingMatrix:
    """N pooled feature vectors with a unique sample id and a class label each."""

    rows: np.ndarray
    sample_ids: tuple[str, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise ValidationError(f"embedding matrix must be (N>=1, C>=1), got {rows.shape}")
        if not np.isfinite(rows).all():
            n = int(np.argwhere(~np.isfinite(rows))[0][0])
            raise ValidationError(f"non-finite value in embedding row {n}")
        ids = tuple(self.sample_ids)
        labels = tuple(self.labels)
        if len(ids) != rows.shape[0] or len(labels) != rows.shape[0]:
            raise ValidationError("sample_ids/labels length must equal row count")
        if len(set(ids)) != len(ids):
            seen = set()
            dup = next(i for i in ids if i in seen or seen.add(i))
            raise ValidationError(f"duplicate sample id {dup!r}")
        zero = ~rows.any(axis=1)
        if zero.any():
            raise ValidationError(
                f"zero-norm embedding row {int(np.argmax(zero))}: cosine similarity undefined"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "sample_ids", ids)
        object.__setattr__(self, "labels", labels)

    @property
    def samples(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingMatrix):
            return NotImplemented
        return (
            self.sample_ids == other.sample_ids
            and self.labels == other.labels
            and self.rows.shape == other.rows.shape
            and bool((self.rows == other.rows).all())
        )


def pool_spatial(raw: RawFeatureTensor) -> np.ndarray:
    """Average each sample's feature map over its spatial axes.

    Returns the pooled (N, C) array; callers attach ids and labels to form
    an EmbeddingMatrix.
    """
    return raw.values.mean(axis=(2, 3))


def pool_to_matrix(
    raw: RawFeatureTensor, sample_ids, labels
) -> EmbeddingMatrix:
    return EmbeddingMatrix(pool_spatial(raw), tuple(sample_ids), tuple(labels))


def default_ids(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _float32_repr(x: float) -> str:
    # shortest decimal string that parses back to the same float32
    return np.format_float_positional(np.float32(x), unique=True, trim="0")


def save_embeddings(matrix: EmbeddingMatrix, path: str | Path, format: str = "binary") -> None:
    """Write a matrix to ``path``; bytes are deterministic for equal input."""
    path = Path(path)
    if format == "binary":
        table = bytearray()
        for sid, label in zip(matrix.sample_ids, matrix.labels):
            for s in (sid, label):
                raw = s.encode("utf-8")
                table += struct.pack("<I", len(raw)) + raw
        payload = (
            EMB1_MAGIC
            + struct.pack("<III", matrix.samples, matrix.dim, len(table))
            + bytes(table)
            + matrix.rows.astype("<f4").tobytes()
        )
        path.write_bytes(payload)
    elif format == "csv":
        header = "id,label," + ",".join(f"f{i}" for i in range(matrix.dim))
        lines = [header]
        for sid, label, row in zip(matrix.sample_ids, matrix.labels, matrix.rows):
            lines.append(f"{sid},{label}," + ",".join(_float32_repr(v) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown embedding format {format!r}")


def load_embeddings(path: str | Path, format: str | None = None) -> EmbeddingMatrix:
    """Read an EMB1 or CSV embedding file.

    ``format`` defaults from the file extension: ``.csv`` means CSV,
    anything else binary.
    """
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "binary"
    if format == "binary":
        return _load_binary(path)
    if format == "csv":
        return _load_csv(path)
    raise ValueError(f"unknown embedding format {format!r}")


def _load_binary(path: Path) -> EmbeddingMatrix:
    data = path.read_bytes()
    if data[:4] != EMB1_MAGIC:
        raise FormatError(f"{path}: bad magic at byte 0 (expected {EMB1_MAGIC!r})")
    if len(data) < 16:
        raise FormatError(f"{path}: truncated header at byte {len(data)}")
    n, c, table_len = struct.unpack_from("<III", data, 4)
    offset = 16
    if offset + table_len > len(data):
        raise FormatError(f"{path}: id/label table truncated at byte {len(data)}")
    ids, labels = [], []
    end = offset + table_len
    for row in range(n):
        strings = []
        for _ in range(2):
            if offset + 4 > end:
                raise FormatError(f"{path}: id/label table underrun at byte {offset}")
            (slen,) = struct.unpack_from("<I", data, offset)
            offset += 4
            if offset + slen > end:
                raise FormatError(f"{path}: string overruns table at byte {offset}")
            strings.append(data[offset : offset + slen].decode("utf-8"))
            offset += slen
        ids.append(strings[0])
        labels.append(strings[1])
    if offset != end:
        raise FormatError(f"{path}: {end - offset} trailing table bytes at byte {offset}")
    expected = n * c * 4
    if len(data) - end != expected:
        raise FormatError(
            f"{path}: row data length mismatch at byte {end}: "
            f"expected {expected} bytes, found {len(data) - end}"
        )
    rows = np.frombuffer(data, dtype="<f4", count=n * c, offset=end).reshape(n, c)
    return EmbeddingMatrix(rows, tuple(ids), tuple(labels))


def _load_csv(path: Path) -> EmbeddingMatrix:
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        cols = header.split(",")
        if len(cols) < 3 or cols[:2] != ["id", "label"]:
            raise FormatError(f"{path}: line 1: expected header 'id,label,f0..'")
        dim = len(cols) - 2
        ids, labels, rows = [], [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != dim + 2:
                raise FormatError(
                    f"{path}: line {lineno}: expected {dim + 2} fields, got {len(parts)}"
                )
            ids.append(parts[0])
            labels.append(parts[1])
            try:
                rows.append([np.float32(v) for v in parts[2:]])
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: {exc}") from exc
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return EmbeddingMatrix(np.array(rows, dtype=np.float64), tuple(ids), tuple(labels))


def partition_by_label(matrix: EmbeddingMatrix) -> dict[str, EmbeddingMatrix]:
    """Split a matrix into one per class label, labels in sorted order."""
    out: dict[str, EmbeddingMatrix] = {}
    labels = np.array(matrix.labels)
    for label in sorted(set(matrix.labels)):
        mask = labels == label
        idx = np.flatnonzero(mask)
        out[label] = EmbeddingMatrix(
            matrix.rows[idx],
            tuple(matrix.sample_ids[i] for i in idx),
            tuple(matrix.labels[i] for i in idx),
        )
    return out

"""Loading, cleaning, normalizing and synthesizing expression matrices.

Rows are genes and columns are conditions. Files are plain delimited text
whose first field is the row label; lines starting with ``#`` are treated as
comments, which is how :func:`write_delimited` stores its header row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstantRowError, DataError

DEFAULT_MISSING = frozenset({"NA", "N/A", ""})


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RawMatrix:
    """Matrix as read from disk; missing slots are stored as NaN."""

    labels: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = _readonly(self.values)
        if values.ndim != 2 or values.shape[1] < 1:
            raise DataError("raw matrix must be 2-D with at least one column")
        if len(self.labels) != values.shape[0]:
            raise DataError("label count does not match row count")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)


@dataclass(frozen=True)
class ExpressionMatrix:
    """Complete n x m matrix of finite values with unique row labels."""

    labels: tuple[str, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = _readonly(self.data)
        if data.ndim != 2:
            raise DataError(f"expected a 2-D matrix, got shape {data.shape}")
        n, m = data.shape
        if n < 1 or m < 1:
            raise DataError(f"matrix must have at least one row and column, got {n}x{m}")
        if not np.isfinite(data).all():
            raise DataError("matrix contains missing or non-finite entries")
        labels = tuple(str(x) for x in self.labels)
        if len(labels) != n:
            raise DataError(f"{len(labels)} labels for {n} rows")
        if len(set(labels)) != n:
            raise DataError("row labels are not unique")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_array(cls, data, labels: Sequence[str] | None = None) -> "ExpressionMatrix":
        data = np.asarray(data, dtype=np.float64)
        if data.ndim == 1:
            data = data[:, None]
        if labels is None:
            labels = [f"row{i}" for i in range(data.shape[0])]
        return cls(tuple(labels), data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def m(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def as_array(data) -> np.ndarray:
    """Return the C-contiguous float64 matrix behind ``data``."""
    if isinstance(data, ExpressionMatrix):
        return data.data
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise DataError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def _parse_value(token: str, missing: frozenset[str]) -> float:
    token = token.strip()
    if token in missing:
        return math.nan
    try:
        value = float(token)
    except ValueError:
        return math.nan
    return value if math.isfinite(value) else math.nan


def load_delimited(
    path,
    delimiter: str = "\t",
    missing_token: str | Iterable[str] = DEFAULT_MISSING,
    has_labels: bool = True,
) -> RawMatrix:
    """Read a delimited matrix file.

    Parameters
    ----------
    path : path-like
        File to read.
    delimiter : str
        Field separator, tab by default.
    missing_token : str or iterable of str
        Token(s) marking a missing value. Unparseable and non-finite fields
        are treated as missing as well.
    has_labels : bool
        If true the first field of every line is the row label; an empty
        label is replaced by ``row<i>``.

    Returns
    -------
    RawMatrix
        One record per non-empty, non-comment line.

    Raises
    ------
    DataError
        If the file is missing, rows disagree on their field count (the
        offending line number is reported) or there are no data rows.
    """
    path = Path(path)
    missing = frozenset({missing_token}) if isinstance(missing_token, str) else frozenset(missing_token)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise DataError(f"file not found: {path}") from None
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None

    labels: list[str] = []
    rows: list[list[float]] = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split(delimiter)
        if width is None:
            width = len(fields)
            if has_labels and width < 2:
                raise DataError(f"line {lineno}: no value columns after the label")
        elif len(fields) != width:
            raise DataError(f"line {lineno}: expected {width} fields, found {len(fields)}")
        if has_labels:
            label = fields[0].strip() or f"row{len(rows)}"
            fields = fields[1:]
        else:
            label = f"row{len(rows)}"
        labels.append(label)
        rows.append([_parse_value(tok, missing) for tok in fields])

    if not rows:
        raise DataError(f"{path}: zero data rows")
    return RawMatrix(tuple(labels), np.array(rows, dtype=np.float64))


def drop_missing_rows(raw: RawMatrix) -> ExpressionMatrix:
    """Keep only the complete rows of ``raw``, preserving their order."""
    keep = ~raw.missing.any(axis=1)
    if not keep.any():
        raise DataError("all rows dropped: every row has a missing value")
    labels = [lab for lab, k in zip(raw.labels, keep) if k]
    return ExpressionMatrix(tuple(labels), raw.values[keep])


def zscore_normalize(mat: ExpressionMatrix) -> ExpressionMatrix:
    """Scale every row (gene) to mean 0 and population standard deviation 1."""
    x = mat.data
    if mat.m < 2:
        raise DataError("z-score normalization needs at least 2 columns")
    constant = np.ptp(x, axis=1) == 0
    if constant.any():
        raise ConstantRowError(mat.labels[int(np.argmax(constant))])
    z = (x - x.mean(axis=1, keepdims=True)) / x.std(axis=1, keepdims=True)
    # second pass removes the rounding left by the first
    z = z - z.mean(axis=1, keepdims=True)
    z = z / z.std(axis=1, keepdims=True)
    return ExpressionMatrix(mat.labels, z)


def _place_centers(rng: np.random.Generator, k: int, dims: int, separation: float) -> np.ndarray:
    side = 2.0 * separation * max(1.0, k ** (1.0 / dims))
    centers = np.empty((k, dims))
    placed = 0
    misses = 0
    while placed < k:
        candidate = rng.uniform(0.0, side, size=dims)
        if placed == 0 or np.sqrt(((centers[:placed] - candidate) ** 2).sum(axis=1)).min() >= separation:
            centers[placed] = candidate
            placed += 1
            misses = 0
            continue
        misses += 1
        if misses > 1000:
            side *= 1.1
            misses = 0
    return centers


def generate_synthetic(
    k_true: int,
    points_per_cluster: int,
    dims: int,
    separation: float,
    spread: float,
    seed=None,
) -> tuple[ExpressionMatrix, np.ndarray]:
    """Draw ``k_true`` isotropic Gaussian blobs.

    Centers are sampled uniformly in a box by rejection so that every pair
    is at least ``separation`` apart; points have per-coordinate standard
    deviation ``spread``. Rows are grouped by cluster. Returns the matrix and
    the ground-truth labels.
    """
    for name, value in (("k_true", k_true), ("points_per_cluster", points_per_cluster), ("dims", dims)):
        if int(value) != value or value < 1:
            raise DataError(f"{name} must be a positive integer, got {value!r}")
    if not separation > 0 or not spread > 0:
        raise DataError("separation and spread must be positive")
    rng = np.random.default_rng(seed)
    centers = _place_centers(rng, k_true, dims, separation)
    noise = rng.standard_normal((k_true, points_per_cluster, dims)) * spread
    data = (centers[:, None, :] + noise).reshape(k_true * points_per_cluster, dims)
    truth = np.repeat(np.arange(k_true, dtype=np.int64), points_per_cluster)
    width = len(str(len(data)))
    labels = tuple(f"gene{i:0{width}d}" for i in range(len(data)))
    return ExpressionMatrix(labels, data), truth


def write_delimited(path, mat: ExpressionMatrix, delimiter: str = "\t") -> None:
    """Write ``mat`` with a ``#label`` header of condition indices.

    Values are written with ``repr`` so that reloading is exact.
    """
    lines = [delimiter.join(["#label", *(str(j) for j in range(mat.m))])]
    for label, row in zip(mat.labels, mat.data):
        lines.append(delimiter.join([label, *(repr(float(v)) for v in row)]))
    Path(path).write_text("\n".join(lines) + "\n")

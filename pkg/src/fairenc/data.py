"""Tabular datasets of categorical columns with a binary target.

Everything downstream (encoders, models, metrics) consumes the immutable
:class:`Dataset` built here, either from a CSV file or from a synthetic
generator. Columns are always categorical (string labels); the target is
always 0/1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

CONCAT_SEPARATOR = "|"


class DataError(Exception):
    """Base class for dataset construction and I/O failures."""


class EmptyFileError(DataError):
    pass


class MissingColumnError(DataError):
    pass


class NonBinaryTargetError(DataError):
    pass


class MalformedRowError(DataError):
    pass


class InvalidLabelError(DataError):
    """A category label contains a reserved character ("|", ",", newline)."""


class ColumnCollisionError(DataError):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable table: named categorical columns plus a 0/1 target.

    ``columns`` preserves ingestion order. Column values are numpy object
    arrays of strings; ``target`` is an int64 array of 0s and 1s.
    """

    columns: tuple[str, ...]
    values: dict[str, np.ndarray] = field(repr=False)
    target: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.target) < 1:
            raise DataError("dataset must contain at least one row")
        for name in self.columns:
            if name not in self.values:
                raise MissingColumnError(f"column {name!r} has no values")
            if len(self.values[name]) != len(self.target):
                raise DataError(f"column {name!r} length does not match target")
        bad = set(np.unique(self.target)) - {0, 1}
        if bad:
            raise NonBinaryTargetError(f"target contains values outside {{0,1}}: {sorted(bad)}")

    @property
    def n(self) -> int:
        return len(self.target)

    def column(self, name: str) -> np.ndarray:
        if name not in self.values:
            raise MissingColumnError(f"no column named {name!r}")
        return self.values[name]

    def subset(self, indices: np.ndarray) -> "Dataset":
        """New dataset restricted to the given row indices (order kept)."""
        return Dataset(
            columns=self.columns,
            values={c: self.values[c][indices] for c in self.columns},
            target=self.target[indices],
        )


class GroupCount(NamedTuple):
    count: int        # rows in the category
    positives: int    # rows in the category with target 1
    rate: float       # positives / count


@dataclass(frozen=True)
class GroupStats:
    """Per-category counts and positive rates for one column.

    These are the sufficient statistics for every encoder and for the
    theoretical bias oracles: group sizes, group positive counts, and the
    global prior (overall positive fraction).
    """

    column: str
    groups: dict[str, GroupCount]
    n: int
    positives: int

    @property
    def prior(self) -> float:
        return self.positives / self.n

    def labels(self) -> list[str]:
        return sorted(self.groups)


@dataclass(frozen=True, eq=False)
class SplitPair:
    train: Dataset
    test: Dataset
    seed: int


def make_dataset(columns: dict[str, list | np.ndarray], target) -> Dataset:
    """Build a Dataset from plain sequences, in the dict's key order."""
    values = {name: np.asarray(col, dtype=object) for name, col in columns.items()}
    return Dataset(
        columns=tuple(columns),
        values=values,
        target=np.asarray(target, dtype=np.int64),
    )


def load_csv(path, target_column: str, positive_label: str) -> Dataset:
    """Read a comma-delimited UTF-8 file into a Dataset.

    The first row is the header. Quoting is not supported: a row whose
    field count differs from the header is rejected. Category labels may
    not contain "|" (reserved for column concatenation). Target values
    are mapped to 1 where equal to ``positive_label``, else 0; more than
    two distinct target values is an error.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EmptyFileError(f"{path}: file is empty")
    header = lines[0].split(",")
    if len(set(header)) != len(header):
        raise MalformedRowError(f"{path}: duplicate column names in header")
    if target_column not in header:
        raise MissingColumnError(f"{path}: target column {target_column!r} not in header")
    if len(lines) == 1:
        raise EmptyFileError(f"{path}: no data rows")

    width = len(header)
    cells: list[list[str]] = [[] for _ in header]
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != width:
            raise MalformedRowError(
                f"{path}:{lineno}: expected {width} fields, got {len(fields)}"
                " (embedded commas / quoting are not supported)"
            )
        for store, value in zip(cells, fields):
            store.append(value)

    target_idx = header.index(target_column)
    raw_target = cells[target_idx]
    distinct = sorted(set(raw_target))
    if len(distinct) > 2:
        raise NonBinaryTargetError(
            f"{path}: non-binary target ({len(distinct)} distinct values: {distinct[:5]})"
        )
    target = [1 if v == positive_label else 0 for v in raw_target]

    columns: dict[str, list[str]] = {}
    for name, col in zip(header, cells):
        if name == target_column:
            continue
        for v in col:
            if CONCAT_SEPARATOR in v:
                raise InvalidLabelError(
                    f"{path}: column {name!r} contains the reserved separator {CONCAT_SEPARATOR!r}"
                )
        columns[name] = col
    return make_dataset(columns, target)


def write_csv(dataset: Dataset, path, target_column: str = "target") -> None:
    """Write a Dataset in the schema load_csv accepts (target as "1"/"0")."""
    if target_column in dataset.columns:
        raise ColumnCollisionError(f"target column name {target_column!r} collides with a data column")
    for name in dataset.columns:
        _check_writable_label(name, "column name")
        for v in dataset.values[name]:
            _check_writable_label(v, f"value in column {name!r}")
    lines = [",".join(dataset.columns + (target_column,))]
    cols = [dataset.values[c] for c in dataset.columns]
    for i in range(dataset.n):
        row = [str(col[i]) for col in cols]
        row.append("1" if dataset.target[i] else "0")
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _check_writable_label(label: str, what: str) -> None:
    for ch in (",", CONCAT_SEPARATOR, "\n", "\r"):
        if ch in label:
            raise InvalidLabelError(f"{what} contains {ch!r} and cannot be written as CSV: {label!r}")


def group_stats(dataset: Dataset, column: str) -> GroupStats:
    """Counts, positives and positive rate per category of ``column``."""
    values = dataset.column(column)
    labels, inverse = np.unique(values, return_inverse=True)
    counts = np.bincount(inverse, minlength=len(labels))
    positives = np.bincount(inverse, weights=dataset.target, minlength=len(labels)).astype(np.int64)
    groups = {
        str(lab): GroupCount(int(c), int(p), int(p) / int(c))
        for lab, c, p in zip(labels, counts, positives)
    }
    return GroupStats(
        column=column,
        groups=groups,
        n=dataset.n,
        positives=int(dataset.target.sum()),
    )


def stratified_split(dataset: Dataset, column: str, fraction: float, seed: int) -> SplitPair:
    """Split rows into train/test keeping each category's ratio.

    Per category, round(fraction * n_i) rows (half rounds up, so a
    singleton category lands in train) are chosen by a seeded shuffle.
    Every row appears in exactly one side; row order is preserved within
    each side. Deterministic for a fixed (dataset, column, fraction, seed).
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0,1), got {fraction}")
    values = dataset.column(column)
    labels, inverse = np.unique(values, return_inverse=True)
    rng = np.random.default_rng(seed)
    train_mask = np.zeros(dataset.n, dtype=bool)
    for i in range(len(labels)):
        idx = np.nonzero(inverse == i)[0]
        k = int(math.floor(fraction * len(idx) + 0.5))
        chosen = rng.permutation(idx)[:k]
        train_mask[chosen] = True
    train_idx = np.nonzero(train_mask)[0]
    test_idx = np.nonzero(~train_mask)[0]
    if len(train_idx) == 0 or len(test_idx) == 0:
        raise DataError("split produced an empty side; use a less extreme fraction")
    return SplitPair(train=dataset.subset(train_idx), test=dataset.subset(test_idx), seed=seed)


def concat_columns(dataset: Dataset, a: str, b: str, new_name: str) -> Dataset:
    """Add a column whose value per row is ``"<a>|<b>"``.

    Used to study intersectional groups: the concatenated column's
    categories are the observed crossings of the two source columns.
    """
    if new_name in dataset.columns:
        raise ColumnCollisionError(f"column {new_name!r} already exists")
    col_a = dataset.column(a)
    col_b = dataset.column(b)
    combined = np.array(
        [f"{x}{CONCAT_SEPARATOR}{y}" for x, y in zip(col_a, col_b)], dtype=object
    )
    values = dict(dataset.values)
    values[new_name] = combined
    return Dataset(columns=dataset.columns + (new_name,), values=values, target=dataset.target)

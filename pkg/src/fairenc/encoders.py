"""One-hot and regularized target encoders, fit on training data only.

A fitted target encoder maps each training category to

    value = w * (positives_i / count_i) + (1 - w) * prior,   w = n_i / (n_i + m)

optionally plus one seeded Gaussian draw per category (width
``noise_sigma``) added at fit time. Categories never seen in training
fall back to the prior (target encoding) or to an all-zero row (one-hot).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, group_stats


def smoothing_weight(n_i, m) -> float:
    """Interpolation weight n_i / (n_i + m) of the group mean vs the prior.

    Increasing in n_i for fixed m > 0; equals 1 when m = 0 and n_i > 0.
    The degenerate n_i = m = 0 case returns 0 (all weight on the prior).
    """
    if n_i < 0 or m < 0:
        raise ValueError(f"counts and smoothing must be non-negative, got n_i={n_i}, m={m}")
    if n_i == 0:
        return 0.0
    return n_i / (n_i + m)


@dataclass(frozen=True, eq=False)
class EncodedMatrix:
    """Numeric design matrix with provenance labels for each column."""

    values: np.ndarray                 # shape (n_rows, n_cols), float64
    columns: tuple[str, ...]

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.columns):
            raise ValueError("values shape does not match column labels")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @staticmethod
    def hstack(parts: list["EncodedMatrix"]) -> "EncodedMatrix":
        if not parts:
            raise ValueError("nothing to stack")
        n = parts[0].n
        if any(p.n != n for p in parts):
            raise ValueError("row counts differ")
        labels: tuple[str, ...] = ()
        for p in parts:
            labels += p.columns
        return EncodedMatrix(np.hstack([p.values for p in parts]), labels)


@dataclass(frozen=True)
class FittedTargetEncoder:
    column: str
    mapping: dict[str, float] = field(repr=False)
    prior: float
    m: float
    noise_sigma: float
    seed: int

    def encoded_value(self, category: str) -> float:
        return self.mapping.get(category, self.prior)

    def transform(self, dataset: Dataset) -> EncodedMatrix:
        values = dataset.column(self.column)
        out = np.fromiter(
            (self.mapping.get(v, self.prior) for v in values),
            dtype=np.float64,
            count=len(values),
        )
        return EncodedMatrix(out.reshape(-1, 1), (self.column,))


@dataclass(frozen=True)
class FittedOneHotEncoder:
    column: str
    mapping: dict[str, int] = field(repr=False)

    @property
    def width(self) -> int:
        return len(self.mapping)

    def transform(self, dataset: Dataset) -> EncodedMatrix:
        values = dataset.column(self.column)
        out = np.zeros((len(values), self.width), dtype=np.float64)
        for i, v in enumerate(values):
            j = self.mapping.get(v)
            if j is not None:
                out[i, j] = 1.0
        labels = tuple(f"{self.column}={cat}" for cat in sorted(self.mapping, key=self.mapping.get))
        return EncodedMatrix(out, labels)


def fit_target_encoder(
    train: Dataset,
    column: str,
    m: float = 0.0,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> FittedTargetEncoder:
    """Fit the smoothed (and optionally noise-regularized) target encoder.

    With noise_sigma > 0, one N(0, noise_sigma^2) draw per category is
    added to the smoothed value, in sorted category order, from a
    generator seeded with ``seed``. For a fixed seed the underlying
    standard-normal draws are identical across sigma values, so the
    encoding moves continuously along one noise direction as sigma grows.
    """
    if m < 0 or noise_sigma < 0:
        raise ValueError("m and noise_sigma must be non-negative")
    stats = group_stats(train, column)
    prior = stats.prior
    labels = stats.labels()
    mapping: dict[str, float] = {}
    for cat in labels:
        g = stats.groups[cat]
        w = smoothing_weight(g.count, m)
        mapping[cat] = w * g.rate + (1.0 - w) * prior
    if noise_sigma > 0.0:
        rng = np.random.default_rng(seed)
        noise = noise_sigma * rng.standard_normal(len(labels))
        for cat, eps in zip(labels, noise):
            mapping[cat] = float(mapping[cat] + eps)
    return FittedTargetEncoder(
        column=column, mapping=mapping, prior=prior, m=m, noise_sigma=noise_sigma, seed=seed
    )


def fit_one_hot(train: Dataset, column: str) -> FittedOneHotEncoder:
    """One indicator column per category seen in training, sorted order."""
    labels = sorted(set(train.column(column).tolist()))
    return FittedOneHotEncoder(column=column, mapping={c: i for i, c in enumerate(labels)})


def transform(encoder, dataset: Dataset) -> EncodedMatrix:
    """Apply a fitted encoder to any dataset with the encoder's column."""
    return encoder.transform(dataset)


def encode_table(encoders: list, dataset: Dataset) -> EncodedMatrix:
    """Transform with several fitted encoders and stack the results."""
    return EncodedMatrix.hstack([enc.transform(dataset) for enc in encoders])


def encoder_to_text(encoder) -> str:
    """Serialize a fitted encoder as plain text for audit.

    Floats are written with repr, which round-trips the exact binary
    value (beyond 15 significant digits).
    """
    if isinstance(encoder, FittedTargetEncoder):
        lines = [
            "target-encoder v1",
            f"column {encoder.column}",
            f"prior {encoder.prior!r}",
            f"m {encoder.m!r}",
            f"noise_sigma {encoder.noise_sigma!r}",
            f"seed {encoder.seed}",
        ]
        for cat in sorted(encoder.mapping):
            lines.append(f"cat {cat} {encoder.mapping[cat]!r}")
        return "\n".join(lines) + "\n"
    if isinstance(encoder, FittedOneHotEncoder):
        lines = ["one-hot-encoder v1", f"column {encoder.column}"]
        for cat in sorted(encoder.mapping):
            lines.append(f"cat {cat} {encoder.mapping[cat]}")
        return "\n".join(lines) + "\n"
    raise TypeError(f"cannot serialize {type(encoder).__name__}")


def encoder_from_text(text: str):
    """Inverse of encoder_to_text; exact value round-trip."""
    lines = [ln for ln in text.split("\n") if ln]
    kind = lines[0]
    meta: dict[str, str] = {}
    cats: list[tuple[str, str]] = []
    for line in lines[1:]:
        key, rest = line.split(" ", 1)
        if key == "cat":
            label, value = rest.rsplit(" ", 1)
            cats.append((label, value))
        else:
            meta[key] = rest
    if kind == "target-encoder v1":
        return FittedTargetEncoder(
            column=meta["column"],
            mapping={label: float(v) for label, v in cats},
            prior=float(meta["prior"]),
            m=float(meta["m"]),
            noise_sigma=float(meta["noise_sigma"]),
            seed=int(meta["seed"]),
        )
    if kind == "one-hot-encoder v1":
        return FittedOneHotEncoder(
            column=meta["column"], mapping={label: int(v) for label, v in cats}
        )
    raise ValueError(f"unknown encoder serialization: {kind!r}")

"""Seeded synthetic datasets for the three bias experiments.

Each generator produces a protected categorical column (or two, for the
crossed scenario) plus three weak categorical context columns that shift
the per-row positive log-odds. The context columns give the classifiers
something to learn beyond the protected attribute, so accuracy/fairness
trade-off curves are not degenerate.

Scenarios:

* irreducible: two large groups with genuinely different rates (0.43 vs
  0.25) plus a tail of smaller groups; the disparity persists no matter
  how much data is available.
* reducible: one dominant group (27,000 rows at 0.43) and a 50-row
  relabeled subgroup drawn from the same distribution; any apparent
  disparity is sampling noise and smoothing can remove it.
* intersectional: two attributes whose crossing yields ~42 observed
  cells, with a large protected cell at 0.46 and a large reference cell
  at 0.10, while the marginal rates still reproduce the 0.43/0.25 pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, make_dataset

PROTECTED_COLUMN = "group"
CROSSED_COLUMNS = ("origin", "status")


@dataclass(frozen=True)
class GroupSpec:
    label: str
    size: int
    rate: float


@dataclass(frozen=True)
class CellSpec:
    origin: str
    status: str
    size: int
    rate: float


@dataclass(frozen=True)
class NoiseColumnSpec:
    """A context column: ``cardinality`` categories whose log-odds
    effects are evenly spread over [-strength, +strength]."""

    name: str
    cardinality: int
    strength: float

    def effects(self) -> np.ndarray:
        k = self.cardinality
        if k == 1:
            return np.zeros(1)
        return self.strength * (2.0 * np.arange(k) / (k - 1) - 1.0)


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    groups: tuple[GroupSpec, ...] = ()
    cells: tuple[CellSpec, ...] = ()
    noise_columns: tuple[NoiseColumnSpec, ...] = ()
    protected_column: str = PROTECTED_COLUMN
    protected_group: str = ""
    reference_group: str = ""


# One finer-grained, stronger context column alongside two mild ones:
# its structure keeps degrading through the upper end of the noise-width
# sweep instead of being wiped out at the first nonzero sigma.
DEFAULT_NOISE_COLUMNS = (
    NoiseColumnSpec("ctx_1", 5, 0.2),
    NoiseColumnSpec("ctx_2", 5, 0.2),
    NoiseColumnSpec("ctx_3", 12, 0.6),
)

IRREDUCIBLE_SPEC = ScenarioSpec(
    kind="irreducible",
    groups=(
        GroupSpec("group_a", 13_000, 0.43),
        GroupSpec("group_b", 10_000, 0.25),
        GroupSpec("small_1", 1_500, 0.35),
        GroupSpec("small_2", 1_200, 0.30),
        GroupSpec("small_3", 800, 0.45),
        GroupSpec("small_4", 500, 0.20),
        GroupSpec("small_5", 300, 0.38),
    ),
    noise_columns=DEFAULT_NOISE_COLUMNS,
    protected_group="group_a",
    reference_group="group_b",
)

# Weaker context columns than the other scenarios: group score
# distributions stay clear of the decision threshold, so the smoothing
# sweep's fairness signal is not drowned by per-seed TPR noise on the
# 25-row test side of the sampled subgroup.
REDUCIBLE_NOISE_COLUMNS = (
    NoiseColumnSpec("ctx_1", 5, 0.05),
    NoiseColumnSpec("ctx_2", 5, 0.05),
    NoiseColumnSpec("ctx_3", 12, 0.15),
)

REDUCIBLE_SPEC = ScenarioSpec(
    kind="reducible",
    groups=(
        GroupSpec("majority", 27_000, 0.43),
        GroupSpec("sampled", 50, 0.43),
        GroupSpec("small_1", 1_200, 0.25),
        GroupSpec("small_2", 700, 0.32),
        GroupSpec("small_3", 400, 0.45),
        GroupSpec("small_4", 200, 0.20),
        GroupSpec("small_5", 100, 0.35),
    ),
    noise_columns=REDUCIBLE_NOISE_COLUMNS,
    protected_group="sampled",
    reference_group="majority",
)


def _intersectional_cells() -> tuple[CellSpec, ...]:
    cells = [CellSpec("o0", "s0", 6_000, 0.46)]
    # remaining o0 mass solves 6000*0.46 + 4000*r = 10000*0.43 -> r = 0.385
    for status, size in (("s1", 800), ("s2", 900), ("s3", 700),
                         ("s4", 600), ("s5", 500), ("s6", 500)):
        cells.append(CellSpec("o0", status, size, 0.385))
    cells.append(CellSpec("o1", "s1", 4_000, 0.10))
    # remaining o1 mass solves 4000*0.10 + 6000*r = 10000*0.25 -> r = 0.35
    for status, size in (("s0", 1_400), ("s2", 1_100), ("s3", 900),
                         ("s4", 900), ("s5", 900), ("s6", 800)):
        cells.append(CellSpec("o1", status, size, 0.35))
    # sparse tail: seven small origins, four cells each, n < 100
    sizes = (80, 60, 40, 30)
    rates = (0.25, 0.35, 0.45, 0.55)
    for k in range(2, 9):
        for j in range(4):
            status = f"s{(k + 2 * j) % 7}"
            cells.append(CellSpec(f"o{k}", status, sizes[j], rates[(k + j) % 4]))
    return tuple(cells)


INTERSECTIONAL_SPEC = ScenarioSpec(
    kind="intersectional",
    cells=_intersectional_cells(),
    noise_columns=DEFAULT_NOISE_COLUMNS,
    protected_column=CROSSED_COLUMNS[0],
    protected_group="o0",
    reference_group="o1",
)


def _sample_rows(rate_logits, noise_columns, rng):
    """Draw context categories and targets for rows with given base
    log-odds; returns (noise_values dict, target array)."""
    n = len(rate_logits)
    logits = np.array(rate_logits, dtype=np.float64)
    noise_values: dict[str, np.ndarray] = {}
    for col in noise_columns:
        cats = rng.integers(0, col.cardinality, size=n)
        logits = logits + col.effects()[cats]
        noise_values[col.name] = np.array([f"v{c}" for c in cats], dtype=object)
    probs = 1.0 / (1.0 + np.exp(-logits))
    target = (rng.random(n) < probs).astype(np.int64)
    return noise_values, target


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def generate(spec: ScenarioSpec, seed: int) -> Dataset:
    """Generate a dataset for a scenario spec; pure in (spec, seed)."""
    rng = np.random.default_rng(seed)
    if spec.cells:
        origins, statuses, logits = [], [], []
        for cell in spec.cells:
            origins.extend([cell.origin] * cell.size)
            statuses.extend([cell.status] * cell.size)
            logits.extend([_logit(cell.rate)] * cell.size)
        noise_values, target = _sample_rows(logits, spec.noise_columns, rng)
        columns: dict[str, list | np.ndarray] = {
            CROSSED_COLUMNS[0]: origins,
            CROSSED_COLUMNS[1]: statuses,
        }
        columns.update(noise_values)
        return make_dataset(columns, target)

    labels, logits = [], []
    for group in spec.groups:
        labels.extend([group.label] * group.size)
        logits.extend([_logit(group.rate)] * group.size)
    noise_values, target = _sample_rows(logits, spec.noise_columns, rng)
    columns = {spec.protected_column: labels}
    columns.update(noise_values)
    return make_dataset(columns, target)


def gen_irreducible(seed: int = 0) -> Dataset:
    """Two large groups at rates 0.43 and 0.25 (plus a small-group tail
    and three context columns): disparity from different true rates."""
    return generate(IRREDUCIBLE_SPEC, seed)


def gen_reducible(seed: int = 0) -> Dataset:
    """A 27,000-row group and a 50-row subgroup sampled from the same
    0.43-rate process but relabeled as its own category: any disparity
    between them is estimation noise."""
    return generate(REDUCIBLE_SPEC, seed)


def gen_intersectional(seed: int = 0) -> Dataset:
    """Two attributes (9 x 7 categories, 42 observed crossings): the
    protected crossing has rate 0.46 and the reference crossing 0.10,
    while the marginal rates stay at 0.43 and 0.25."""
    return generate(INTERSECTIONAL_SPEC, seed)


SCENARIOS = {
    "irreducible": IRREDUCIBLE_SPEC,
    "reducible": REDUCIBLE_SPEC,
    "intersectional": INTERSECTIONAL_SPEC,
}

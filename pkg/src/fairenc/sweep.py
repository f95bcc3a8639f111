"""Experiment harness: run encoder/regularization/model grids over a
dataset or synthetic scenario and collect accuracy/fairness records.

For every (grid point, model, seed) the harness splits the data
stratified on the protected column, fits the encoding under test on the
training side of every categorical column, trains the model, scores the
test side and evaluates the full fairness report there. One
:class:`TradeoffRecord` is produced per combination, and the whole run is
deterministic given the config.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset, concat_columns, group_stats, load_csv, stratified_split
from .encoders import encode_table, fit_one_hot, fit_target_encoder
from .metrics import UndefinedMetricError, auc, evaluate_fairness
from .models import MODEL_KINDS, TrainConfig, score, train
from .synth import CROSSED_COLUMNS, SCENARIOS, generate

DEFAULT_SIGMA_GRID = (0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0)
DEFAULT_M_GRID = (0.0, 1.0, 10.0, 100.0, 1000.0, 10_000.0)
DEFAULT_SEEDS = tuple(range(20))

REPORT_HEADER = (
    "encoder,reg_param,model,seed,auc_global,auc_protected,auc_reference,"
    "eof,sdp,aao,L_eof,L_sdp,L_aao,warnings"
)

INTERSECTIONAL_COLUMN = f"{CROSSED_COLUMNS[0]}_{CROSSED_COLUMNS[1]}"


class ConfigError(ValueError):
    """The sweep configuration is inconsistent or incomplete."""


class ReportWriteError(OSError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    scenario: str | None = None
    data_path: str | None = None
    target_column: str = "target"
    positive_label: str = "1"
    protected: str | None = None          # protected column
    reference: str | None = None          # reference group label
    protected_group: str | None = None    # None: largest non-reference group
    encoder: str = "target"               # "one-hot" or "target"
    m_grid: tuple[float, ...] = ()
    sigma_grid: tuple[float, ...] = ()
    models: tuple[str, ...] = ("logistic",)
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    split_fraction: float = 0.5
    threshold: float = 0.5
    train_config: TrainConfig = field(default_factory=TrainConfig)


@dataclass(frozen=True)
class TradeoffRecord:
    """One grid point: encoder setting, model, seed and the measured
    accuracy and fairness values on the test split."""

    encoder: str
    reg_param: float | None
    model: str
    seed: int
    auc_global: float
    auc_protected: float
    auc_reference: float
    eof: float | None
    sdp: float | None
    aao: float | None
    L_eof: float
    L_sdp: float
    L_aao: float
    warnings: tuple[str, ...] = ()


def _validate(config: SweepConfig) -> SweepConfig:
    if (config.scenario is None) == (config.data_path is None):
        raise ConfigError("exactly one of scenario and data_path must be set")
    if config.scenario is not None and config.scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {config.scenario!r}; expected one of {sorted(SCENARIOS)}")
    if config.encoder not in ("one-hot", "target"):
        raise ConfigError(f"encoder must be 'one-hot' or 'target', got {config.encoder!r}")
    for kind in config.models:
        if kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model {kind!r}; expected one of {MODEL_KINDS}")
    if not config.models:
        raise ConfigError("at least one model is required")
    if not config.seeds:
        raise ConfigError("at least one seed is required")
    if not 0.0 < config.split_fraction < 1.0:
        raise ConfigError("split fraction must lie in (0,1)")
    if any(m < 0 for m in config.m_grid) or any(s < 0 for s in config.sigma_grid):
        raise ConfigError("grid values must be non-negative")

    if config.encoder == "target" and not config.m_grid and not config.sigma_grid:
        config = replace(config, m_grid=DEFAULT_M_GRID, sigma_grid=DEFAULT_SIGMA_GRID)
    if config.data_path is not None and (config.protected is None or config.reference is None):
        raise ConfigError("CSV runs need --protected and --reference")
    if config.scenario is not None:
        spec = SCENARIOS[config.scenario]
        if config.protected is None:
            default_col = INTERSECTIONAL_COLUMN if spec.cells else spec.protected_column
            config = replace(config, protected=default_col)
        if config.reference is None or config.protected_group is None:
            ref, prot = spec.reference_group, spec.protected_group
            if spec.cells and config.protected == INTERSECTIONAL_COLUMN:
                ref, prot = "o1|s1", "o0|s0"
            if config.reference is None:
                config = replace(config, reference=ref)
            if config.protected_group is None:
                config = replace(config, protected_group=prot)
    return config


def _dataset_for_seed(config: SweepConfig, loaded: Dataset | None, seed: int) -> Dataset:
    if loaded is not None:
        return loaded
    spec = SCENARIOS[config.scenario]
    data = generate(spec, seed)
    if spec.cells:
        data = concat_columns(data, CROSSED_COLUMNS[0], CROSSED_COLUMNS[1], INTERSECTIONAL_COLUMN)
    return data


def _grid_points(config: SweepConfig) -> list[tuple[str, float | None]]:
    if config.encoder == "one-hot":
        return [("one-hot", None)]
    points: list[tuple[str, float | None]] = [("target-m", m) for m in config.m_grid]
    points += [("target-sigma", s) for s in config.sigma_grid]
    return points


def _fit_encoders(family, reg, train_data: Dataset, seed: int):
    encoders = []
    for index, column in enumerate(train_data.columns):
        if family == "one-hot":
            encoders.append(fit_one_hot(train_data, column))
        else:
            m = reg if family == "target-m" else 0.0
            sigma = reg if family == "target-sigma" else 0.0
            # One noise stream per (seed, column), shared across the whole
            # sigma grid: the sweep moves along a fixed noise direction.
            encoders.append(
                fit_target_encoder(train_data, column, m=m, noise_sigma=sigma,
                                   seed=seed * 1_000_003 + index)
            )
    return encoders


def _resolve_protected_group(config: SweepConfig, data: Dataset) -> str:
    if config.protected_group is not None:
        return config.protected_group
    stats = group_stats(data, config.protected)
    candidates = [(g.count, label) for label, g in stats.groups.items() if label != config.reference]
    if not candidates:
        raise ConfigError("no group besides the reference is present")
    return max(candidates)[1]


def _substituted_auc(scores, labels, warnings: list[str], tag: str) -> float:
    try:
        return auc(scores, labels)
    except UndefinedMetricError:
        warnings.append(f"auc:{tag}:undefined, reported as 0.5")
        return 0.5


def run_sweep(config: SweepConfig) -> list[TradeoffRecord]:
    """Run the full grid; records come back sorted by
    (encoder, regularization, model, seed)."""
    config = _validate(config)
    loaded = None
    if config.data_path is not None:
        loaded = load_csv(config.data_path, config.target_column, config.positive_label)
        if config.protected not in loaded.columns:
            raise ConfigError(f"protected column {config.protected!r} not in the data")

    records: list[TradeoffRecord] = []
    for seed in config.seeds:
        data = _dataset_for_seed(config, loaded, seed)
        protected_group = _resolve_protected_group(config, data)
        split = stratified_split(data, config.protected, config.split_fraction, seed)
        y_train = split.train.target
        y_test = split.test.target
        test_groups = split.test.column(config.protected)

        for family, reg in _grid_points(config):
            encoders = _fit_encoders(family, reg, split.train, seed)
            X_train = encode_table(encoders, split.train)
            X_test = encode_table(encoders, split.test)
            for model_kind in config.models:
                model = train(model_kind, X_train, y_train, config.train_config, seed)
                scores = score(model, X_test)
                report = evaluate_fairness(
                    scores, y_test, test_groups, config.reference, config.threshold
                )
                warnings = list(report.warnings)
                auc_global = _substituted_auc(scores, y_test, warnings, "global")

                def group_auc(label: str) -> float:
                    value = report.group_auc.get(label)
                    if value is None:
                        if label not in report.group_auc:
                            warnings.append(f"auc:{label}:group missing from test split, reported as 0.5")
                        return 0.5
                    return value

                records.append(TradeoffRecord(
                    encoder=family,
                    reg_param=reg,
                    model=model_kind,
                    seed=seed,
                    auc_global=auc_global,
                    auc_protected=group_auc(protected_group),
                    auc_reference=group_auc(config.reference),
                    eof=report.pairwise["eof"].get(protected_group),
                    sdp=report.pairwise["sdp"].get(protected_group),
                    aao=report.pairwise["aao"].get(protected_group),
                    L_eof=report.aggregate["eof"],
                    L_sdp=report.aggregate["sdp"],
                    L_aao=report.aggregate["aao"],
                    warnings=tuple(warnings),
                ))

    records.sort(key=lambda r: (r.encoder, -1.0 if r.reg_param is None else r.reg_param,
                                r.model, r.seed))
    return records


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _record_fields(record: TradeoffRecord) -> list[str]:
    warnings = ";".join(record.warnings)
    if "," in warnings or "\n" in warnings:
        raise ValueError("warnings must not contain commas or newlines")
    return [
        record.encoder,
        _format_value(record.reg_param),
        record.model,
        str(record.seed),
        _format_value(record.auc_global),
        _format_value(record.auc_protected),
        _format_value(record.auc_reference),
        _format_value(record.eof),
        _format_value(record.sdp),
        _format_value(record.aao),
        _format_value(record.L_eof),
        _format_value(record.L_sdp),
        _format_value(record.L_aao),
        warnings,
    ]


def emit_report(records: list[TradeoffRecord], path, format: str = "csv") -> None:
    """Write records as CSV (exact column schema, float values repr'd so
    they parse back bit-identically) or as a markdown table."""
    if not records:
        raise ValueError("no records to write")
    if format == "csv":
        lines = [REPORT_HEADER]
        lines += [",".join(_record_fields(r)) for r in records]
    elif format in ("markdown", "markdown-table"):
        names = REPORT_HEADER.split(",")
        lines = ["| " + " | ".join(names) + " |",
                 "|" + "|".join(" --- " for _ in names) + "|"]
        lines += ["| " + " | ".join(_record_fields(r)) + " |" for r in records]
    else:
        raise ValueError(f"unknown format {format!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {path}: {exc}") from exc


def parse_report(path) -> list[TradeoffRecord]:
    """Read back a CSV report written by :func:`emit_report`."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().split("\n") if ln]
    if not lines or lines[0] != REPORT_HEADER:
        raise ValueError(f"{path}: not a sweep report")
    records = []
    for line in lines[1:]:
        f = line.split(",")
        if len(f) != 14:
            raise ValueError(f"{path}: malformed row {line!r}")
        opt = lambda s: None if s == "" else float(s)
        records.append(TradeoffRecord(
            encoder=f[0], reg_param=opt(f[1]), model=f[2], seed=int(f[3]),
            auc_global=float(f[4]), auc_protected=float(f[5]), auc_reference=float(f[6]),
            eof=opt(f[7]), sdp=opt(f[8]), aao=opt(f[9]),
            L_eof=float(f[10]), L_sdp=float(f[11]), L_aao=float(f[12]),
            warnings=tuple(f[13].split(";")) if f[13] else (),
        ))
    return records

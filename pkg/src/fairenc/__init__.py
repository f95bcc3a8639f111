"""fairenc: regularized target encoding of protected categorical
attributes, simple from-scratch classifiers, and measurement of the
accuracy/fairness trade-off that the encoding induces."""

from .data import (
    Dataset,
    GroupStats,
    SplitPair,
    concat_columns,
    group_stats,
    load_csv,
    make_dataset,
    stratified_split,
    write_csv,
)
from .encoders import (
    EncodedMatrix,
    FittedOneHotEncoder,
    FittedTargetEncoder,
    encode_table,
    encoder_from_text,
    encoder_to_text,
    fit_one_hot,
    fit_target_encoder,
    smoothing_weight,
    transform,
)
from .metrics import (
    FairnessReport,
    GroupOutcome,
    aggregate_fairness,
    auc,
    average_absolute_odds,
    confusion,
    equal_opportunity,
    evaluate_fairness,
    statistical_parity_wasserstein,
    wasserstein_1,
)
from .models import TrainConfig, score, train
from .sweep import SweepConfig, TradeoffRecord, emit_report, parse_report, run_sweep
from .synth import (
    ScenarioSpec,
    gen_intersectional,
    gen_irreducible,
    gen_reducible,
    generate,
)
from .theory import (
    ClassifierSpec,
    PopulationSpec,
    bayes_classifier,
    bayes_decision,
    classification_error,
    encoded_classifier,
    encoded_classifier_decisions,
    estimator_variance,
    expected_smoothed_estimate,
    perfect_encoding_eof,
    randomized_classifier,
    randomized_eof,
    randomized_eof_mc,
    smoothing_flip_point,
)

__version__ = "0.1.0"

from .base import (  # noqa: F401  imported but unused
    Ann,
    BaselineMean,
    ExperimentConfig,
    InputInvariant,
    LinearRegression,
    ResultCell,
    TargetInvariant,
    baseline_mean,
    bold_rule,
    build_features,
    features_for_recipe,
    run_experiment,
    split,
)
from .export import export_scatter, read_scatter  # noqa: F401  imported but unused
from .formula import (  # noqa: F401  imported but unused
    REFERENCE_FORMULA,
    FormulaFit,
    PhaseScore,
    distill_formula,
    golden_section,
    phase_sweep,
)
from .tables import (  # noqa: F401  imported but unused
    CorrelationTable,
    ResultTable,
    default_error_configs,
    mahler_clusters,
    network_size_sweep,
    run_correlation_table,
    run_error_tables,
)

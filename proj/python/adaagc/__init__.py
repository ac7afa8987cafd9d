from ._adaagc import (
    DimensionMismatch,
    Error,
    InvalidConfiguration,
    LipschitzSearchFailure,
    OracleFailure,
    ParseError,
    Dataset,
    Loss,
    Problem,
    Regularizer,
    Trace,
    adaagc,
    apg,
    format_number,
    load_libsvm,
    parse_libsvm,
    pg,
    project_l1_ball,
    prox_huber_norm,
    prox_l1,
    prox_l1inf_groups,
    prox_linf,
    rapg,
    run_experiment,
    scale_features,
)

__all__ = [name for name in dir() if not name.startswith("_")]

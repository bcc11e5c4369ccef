from .engine import (
    EnumerationContext,
    ScanTally,
    ValueDistribution,
    check_budget,
    default_jobs,
    enumerate_all,
    enumerate_samples,
    hmat_tables,
    projective_points,
    sample_deltas,
    value_distribution,
)
from .quadform import (
    FormRank,
    LinearizedMap,
    SValueReport,
    batch_rank,
    build_linearized,
    f_delta,
    h_image,
    l_image,
    quadratic_form,
    radical_size,
    rank_consistent,
    rank_of_form,
    s_exact,
    s_from_zero_count,
)

__all__ = [
    'EnumerationContext',
    'FormRank',
    'LinearizedMap',
    'SValueReport',
    'ScanTally',
    'ValueDistribution',
    'batch_rank',
    'build_linearized',
    'check_budget',
    'default_jobs',
    'enumerate_all',
    'enumerate_samples',
    'f_delta',
    'h_image',
    'hmat_tables',
    'l_image',
    'projective_points',
    'quadratic_form',
    'radical_size',
    'rank_consistent',
    'rank_of_form',
    's_exact',
    's_from_zero_count',
    'sample_deltas',
    'value_distribution',
]

from .closed_forms import (
    REFERENCE_ENUMERATORS,
    FrequencyTable,
    TableKind,
    enumerator_string,
    expected_moments,
    minimum_distance,
    moment_sums,
    solve_frequency_system,
    table1,
    table2,
    table3,
    weight_for_value,
)

__all__ = [
    'REFERENCE_ENUMERATORS',
    'FrequencyTable',
    'TableKind',
    'enumerator_string',
    'expected_moments',
    'minimum_distance',
    'moment_sums',
    'solve_frequency_system',
    'table1',
    'table2',
    'table3',
    'weight_for_value',
]

from .counting import (
    CASE_LABELS,
    UnitSystem,
    count_n2,
    count_n3,
    count_n4,
    curve_system_histogram,
    reduced_n3_solutions,
    residue_case_histogram,
    residue_class_reconciliation,
    scaling_reduction_check,
    unit_system,
    unit_system_histogram,
)

__all__ = [
    'CASE_LABELS',
    'UnitSystem',
    'count_n2',
    'count_n3',
    'count_n4',
    'curve_system_histogram',
    'reduced_n3_solutions',
    'residue_case_histogram',
    'residue_class_reconciliation',
    'scaling_reduction_check',
    'unit_system',
    'unit_system_histogram',
]

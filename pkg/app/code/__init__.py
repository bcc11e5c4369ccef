from .cyclic import (
    DEFAULT_BUDGET,
    CodeMode,
    CodeSpec,
    DeltaTriple,
    WeightDistribution,
    WeightMethod,
    code_parameters,
    codeword,
    delsarte_check,
    hamming_weight,
    in_cyclic_code,
    parity_check,
    random_delta,
    validate_spec,
    weight_distribution,
    weight_from_s,
    weights_from_values,
)

__all__ = [
    'DEFAULT_BUDGET',
    'CodeMode',
    'CodeSpec',
    'DeltaTriple',
    'WeightDistribution',
    'WeightMethod',
    'code_parameters',
    'codeword',
    'delsarte_check',
    'hamming_weight',
    'in_cyclic_code',
    'parity_check',
    'random_delta',
    'validate_spec',
    'weight_distribution',
    'weight_from_s',
    'weights_from_values',
]

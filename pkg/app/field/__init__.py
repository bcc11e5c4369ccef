from .gf import (
    FieldDescriptor,
    ResidueClass,
    construct_field,
    field_add,
    field_inv,
    field_mul,
    field_neg,
    field_pow,
    frobenius,
    primitive_moduli,
    residue_class,
    trace,
)

__all__ = [
    'FieldDescriptor',
    'ResidueClass',
    'construct_field',
    'field_add',
    'field_inv',
    'field_mul',
    'field_neg',
    'field_pow',
    'frobenius',
    'primitive_moduli',
    'residue_class',
    'trace',
]

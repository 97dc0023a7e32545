"""Hypercomplex quantum-mechanics toolkit: composition algebras, scalar
products, Kronecker-product Fock spaces and Wong-type particle dynamics."""

from hyperqm.algebra import (
    AlgebraElement,
    DimensionError,
    associator,
    check_hurwitz_dimension,
    conjugate,
    decompose_octonion,
    e,
    moufang_check,
    multiply,
    norm,
    scalar_part,
)

__version__ = "0.1.0"

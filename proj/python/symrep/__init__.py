"""Symmetry-aware CTL model checking, repair, and program extraction."""

from ._core import (
    Formula,
    Program,
    Structure,
    check,
    global_structure,
    is_invariant,
    make_nc_mutex,
    make_ntc_mutex,
    models,
    orbits,
    parse_formula,
    parse_program,
    quotient,
    reduced_structure,
    repair,
    repair_program,
    repair_symmetric,
    structure_from_json,
)

__all__ = [
    "Formula",
    "Program",
    "Structure",
    "check",
    "global_structure",
    "is_invariant",
    "make_nc_mutex",
    "make_ntc_mutex",
    "models",
    "orbits",
    "parse_formula",
    "parse_program",
    "quotient",
    "reduced_structure",
    "repair",
    "repair_program",
    "repair_symmetric",
    "structure_from_json",
]

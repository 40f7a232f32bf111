"""Exact computation with k-regular sequences given by linear representations."""

from __future__ import annotations

from .linrep import (
    BaseMismatchError,
    LinearRepresentation,
    RepresentationError,
    deserialize,
    digits_lsd,
    evaluate,
    evaluate_range,
    evaluate_word,
    load,
    matrix_seq,
    normalize_leading_zeros,
    s2_rep,
    save,
    serialize,
    zero_rep,
)
from .kernel import (
    KernelRelationSystem,
    from_kernel_relations,
    parse_kernel_relations,
    to_kernel_relations,
)
from .minimize import MinimizationResult, equal, is_zero, minimal_rank, minimize

__all__ = [
    "BaseMismatchError", "LinearRepresentation", "RepresentationError", "deserialize",
    "digits_lsd", "evaluate", "evaluate_range", "evaluate_word", "load", "matrix_seq",
    "normalize_leading_zeros", "s2_rep", "save", "serialize", "zero_rep",
    "KernelRelationSystem", "from_kernel_relations", "parse_kernel_relations",
    "to_kernel_relations", "MinimizationResult", "equal", "is_zero", "minimal_rank", "minimize",
]

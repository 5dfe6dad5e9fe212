"""Exact combinatorial workbench: operads, box products, little cubes,
finite simplicial sets, and fibered constructions over them."""

from .errors import (
    ArityOverflow,
    CapExceeded,
    DimensionMismatch,
    InvalidInput,
    InvalidWitness,
    OperadError,
    PatternMismatch,
    SearchExhausted,
    SizeMismatch,
)
from .perm import Permutation, act_tuple, block_sum, block_wreath, pad_fixed
from .trees import (
    GeneratorSignature,
    Internal,
    Leaf,
    OperadTree,
    act_tree,
    graft,
    leaf_permutation,
    leaf_tree,
    parse_sexpr,
)
from .setoperad import (
    SetOperad,
    assoc_operad,
    check_operad_axioms,
    comm_operad,
    eval_tree,
    free_pointed_operad,
)

__all__ = [name for name in dir() if not name.startswith("_")]

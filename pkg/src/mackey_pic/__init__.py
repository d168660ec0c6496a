"""Burnside rings, Mackey functors and their Picard groups for finite abelian groups."""

from .agmod import AGModule, check_counit, check_module_axioms, eval_GG, tensor_up, twisted_module
from .boxhom import dress_pairing_box, gamma_space, verify_box_law
from .burnside import BurnsideElement, marks, marks_matrix
from .changegroups import geometric_fixed_points, induct_up, inflate, qind_twisted, qres, restrict_down
from .errors import (
    ConsistencyError,
    InvalidInputError,
    MackeyPicError,
    ResourceLimitError,
    UnrepresentableError,
)
from .groups import FiniteAbelianGroup, make_group, subgroup, subgroup_lattice
from .mackey import MackeyFunctor, MackeyMorphism, burnside_mackey, check_axioms, render_lewis
from .picard import picard_group, picard_order, verify_classification, verify_splitting
from .report import ValidationReport
from .twists import Twist, equivalent, make_twist, normalize, twisted_burnside, witness_iso

__all__ = [
    "AGModule",
    "BurnsideElement",
    "ConsistencyError",
    "FiniteAbelianGroup",
    "InvalidInputError",
    "MackeyFunctor",
    "MackeyMorphism",
    "MackeyPicError",
    "ResourceLimitError",
    "Twist",
    "UnrepresentableError",
    "ValidationReport",
    "burnside_mackey",
    "check_axioms",
    "check_counit",
    "check_module_axioms",
    "dress_pairing_box",
    "equivalent",
    "eval_GG",
    "gamma_space",
    "geometric_fixed_points",
    "induct_up",
    "inflate",
    "make_group",
    "make_twist",
    "marks",
    "marks_matrix",
    "normalize",
    "picard_group",
    "picard_order",
    "qind_twisted",
    "qres",
    "render_lewis",
    "restrict_down",
    "subgroup",
    "subgroup_lattice",
    "tensor_up",
    "twisted_burnside",
    "twisted_module",
    "verify_box_law",
    "verify_classification",
    "verify_splitting",
    "witness_iso",
]

"""Matroid-constrained rooted-tree decompositions and boundary rigidity."""

from .count import (ConditionReport, MatchingState, check_conditions, check_counts, count_rank,
                    f_value, find_tight_set)
from .decompose import Decomposition, basic_decomposition, rooted_component_packing, validate
from .errors import (BudgetExceeded, CertificationError, GeneralPositionError, InfeasibleError,
                     InputError, PreconditionError)
from .graph import GraphWithRoots
from .matroid import Matroid
from .rigidity import FrameworkModel, certify

__version__ = "0.1.0"

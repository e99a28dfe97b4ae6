"""List recovery of folded Reed-Solomon codes by subspace pruning and sum-set reduction."""

from .frs import EnumerationLimit, FrsCode, encode, new_frs, tau_frs
from .instance import ListRecoveryInstance, make_instance
from .prune import PruneParams, PruneTrace, fprune, prune_ahs, prune_uniform
from .recovery import (RecoveryConfig, RecoveryOutput, bound_bcz, bound_list_size, exact_list,
                       frs_theorem_params, recover)
from .sumset import SumSet, reduce
from .vspace import AffineSpace, Subspace, coordinate_zero_subspace, span

__all__ = [
    "AffineSpace", "EnumerationLimit", "FrsCode", "ListRecoveryInstance", "PruneParams",
    "PruneTrace", "RecoveryConfig", "RecoveryOutput", "Subspace", "SumSet", "bound_bcz",
    "bound_list_size", "coordinate_zero_subspace", "encode", "exact_list", "fprune",
    "frs_theorem_params", "make_instance", "new_frs", "prune_ahs", "prune_uniform", "recover",
    "reduce", "span", "tau_frs",
]

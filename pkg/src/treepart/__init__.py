"""Exact solvers and polyhedral checks for partitioning a tree under pairwise costs."""
from .errors import (
    InfeasibleEncodingError,
    InputError,
    ParseError,
    PreconditionError,
    SizeLimitError,
    TreePartError,
)
from .instance import (
    Instance,
    Partition,
    Tree,
    evaluate_objective,
    labeling_to_lifted,
    lifted_to_labeling,
    load_instance,
    partition_from_labeling,
    save_instance,
)
from .oracle import solve_bruteforce, solve_set_partitioning_bruteforce
from .pathdp import solve_path
from .solver import BncCertificate, BncConfig, lower_bound, solve_exact

__all__ = [
    "BncCertificate",
    "BncConfig",
    "InfeasibleEncodingError",
    "InputError",
    "Instance",
    "ParseError",
    "Partition",
    "PreconditionError",
    "SizeLimitError",
    "Tree",
    "TreePartError",
    "evaluate_objective",
    "labeling_to_lifted",
    "lifted_to_labeling",
    "load_instance",
    "partition_from_labeling",
    "save_instance",
    "solve_bruteforce",
    "solve_exact",
    "solve_path",
    "solve_set_partitioning_bruteforce",
]

"""Near-collision analysis for binary template databases.

Tools for partitioning a Hamming-space template database into few
master templates, searching cover templates exactly or by simulated
annealing, sizing databases against near-collision risk, and
demonstrating leak-based covering attacks under an invertible toy
transform.
"""

from .attack import (
    AttackResult,
    EnrolledRecord,
    enroll_random,
    invert_feature,
    invert_token,
    master_feature_attack,
    masterkey_attack,
    transform,
)
from .bounds import (
    CapacityReport,
    ball_volume,
    birthday_bound,
    capacity_report,
    dirichlet_bound,
    expected_near_collisions,
    log2_birthday_bound,
)
from .clustering import Clustering, cluster_complete_link
from .core import (
    DatabaseFormatError,
    Template,
    TemplateDatabase,
    dissimilarity_matrix,
    hamming,
    parse_database,
    random_database,
    write_database,
)
from .cover import (
    CoolingSchedule,
    CoverResult,
    IndexPartition,
    ReducedSystem,
    build_reduced_system,
    cooling_temperature,
    decode,
    energy,
    feasible,
    index_partition,
    solve_exact,
    solve_sann,
)
from .partition import (
    MasterTemplateSet,
    MtsEntry,
    RemovalReport,
    add_user,
    ball_intersection,
    partition_database,
    partition_greedy,
    remove_user,
)

__version__ = "0.1.0"

__all__ = [
    "Template",
    "TemplateDatabase",
    "DatabaseFormatError",
    "hamming",
    "dissimilarity_matrix",
    "random_database",
    "parse_database",
    "write_database",
    "Clustering",
    "cluster_complete_link",
    "IndexPartition",
    "ReducedSystem",
    "CoverResult",
    "CoolingSchedule",
    "index_partition",
    "build_reduced_system",
    "decode",
    "feasible",
    "energy",
    "solve_exact",
    "solve_sann",
    "cooling_temperature",
    "MasterTemplateSet",
    "MtsEntry",
    "RemovalReport",
    "partition_database",
    "partition_greedy",
    "add_user",
    "remove_user",
    "ball_intersection",
    "CapacityReport",
    "ball_volume",
    "dirichlet_bound",
    "birthday_bound",
    "log2_birthday_bound",
    "expected_near_collisions",
    "capacity_report",
    "EnrolledRecord",
    "AttackResult",
    "transform",
    "invert_token",
    "invert_feature",
    "enroll_random",
    "master_feature_attack",
    "masterkey_attack",
]

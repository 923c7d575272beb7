"""Gaussian weighted-graph states as quantum teamwork resources.

Covariance matrices use ``xxpp`` ordering with the vacuum equal to the
identity.  Mode indices in the Python API are 0-based.
"""

from .circuits import (
    LocalReduction,
    SymplecticOp,
    beam_splitter,
    cz_gate,
    ghz_input_cm,
    graph_state_circuit,
    psi4,
    psi4_effective_squeezing,
    psi4_local_reduction,
    single_mode_squeezer,
    tmss_cm,
)
from .graphs import (
    AdjacencyFormatError,
    AdjacencyMatrix,
    complete_unweighted,
    graph_state_cm,
    nullifier,
    random_graph,
    read_adjacency,
    toeplitz_family,
    twenty_mode_fixture,
    write_adjacency,
)
from .mmes import (
    Bipartition,
    ChannelSpec,
    MmesReport,
    ScalingFit,
    block_rank,
    effective_squeezings,
    enumerate_bipartitions,
    is_perfect_mmes,
    scaling_fit,
    symplectic_rank,
    typicality_scan,
)
from .symplectic import (
    NotPhysicalError,
    apply_symplectic,
    gaussian_fidelity_pure,
    reduce,
    symplectic_eigenvalues,
    symplectic_form,
    variance_of_linear_combination,
)
from .teamwork import (
    FidelityReport,
    bk_teleport_cm,
    eq1_fidelity,
    f1,
    fidelity_curve,
    fk_bounds,
    teamwork_fidelity,
)

__version__ = "0.1.0"

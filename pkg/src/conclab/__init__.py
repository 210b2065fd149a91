"""Concurrence evolution of few-qubit states under local Pauli channels."""

from .channels import (
    ChannelAssignment,
    KrausChannel,
    PauliParams,
    apply,
    channel_from_json,
    flip_channel,
    identity_channel,
    parse_channel,
    parse_channel_list,
    pauli_channel,
    sample_channel,
    single_sided,
)
from .concurrence import (
    Bipartition,
    ConcurrenceBreakdown,
    PairTerm,
    bipartite_concurrence,
    cut_concurrence,
    parse_cut,
    so_generators,
    tau3,
    wootters,
)
from .errors import (
    DimensionMismatchError,
    InvalidPermutationError,
    NotHermitianError,
    NotNormalizedError,
    NotPSDError,
    SpectralLeakError,
)
from .experiments import (
    Figure1Result,
    RankRow,
    SweepSpec,
    figure1_scan,
    rank_table,
    rank_table_csv,
)
from .factorization import (
    CampaignConfig,
    CampaignReport,
    FactorizationIdentity,
    IdentityReport,
    classify_scenario,
    default_cut,
    evaluate_identity,
    identity_for,
    relabel_scenario,
    run_campaign,
)
from .linalg import (
    DensityMatrix,
    hermitian_eig,
    kron,
    numerical_rank,
    permutation_indices,
    permute_qubits,
    psd_sqrt,
)
from .states import PureState, bell, ghz, parse_state, random_pure, state_from_json, w

__version__ = "0.1.0"

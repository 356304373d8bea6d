"""Single-measurement LOCC conversion of bipartite pure states.

Given Schmidt weights ``alpha`` (source) and ``beta`` (target) with beta
majorizing alpha, :func:`plan` builds a doubly stochastic transfer matrix,
decomposes it into permutations, and turns the decomposition into a
diagonal POVM for Alice followed by permutation corrections on both sides.
"""

from .birkhoff import (
    BirkhoffDecomposition,
    NoPerfectMatching,
    Term,
    birkhoff_decompose,
    find_nonzero_arrangement,
    validate_decomposition,
)
from .core import (
    BistochasticMatrix,
    ParseError,
    Permutation,
    WeightVector,
    parse_rational,
    permutation_matrix,
    permute_vector,
    render_rational,
    sort_descending,
)
from .majorization import NotMajorized, majorization_certificate, majorizes
from .povm import (
    InconsistentDecomposition,
    PovmElement,
    build_povm,
    check_completeness,
    outcome_probability,
    post_measurement_weights,
)
from .protocol import (
    Protocol,
    deserialize,
    gamma_from_povm,
    plan,
    serialize,
    verify_converse,
    verify_protocol,
)
from .transfer import build_transfer_matrix, validate_transfer

__version__ = "0.1.0"

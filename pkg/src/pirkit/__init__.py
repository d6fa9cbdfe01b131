"""k-server recovery codes over GF(2) and coded-storage private retrieval."""

from .gf2 import (
    BitMatrix,
    BitVector,
    FormatError,
    RankDeficientError,
    SystematizedForm,
    VectorSet,
    format_matrix,
    offset_product_sum,
    pairwise_products,
    parse_matrix,
    product,
    rank,
    set_square,
    span_contains,
    span_dimension,
    systematize,
)
from .codes import (
    PirCode,
    RecoveryCertificate,
    SearchGuardError,
    check_certificate,
    construct_pir2,
    construct_pir3,
    construct_pir4,
    count_systematic_pk,
    enumerate_recovery_sets,
    find_disjoint_recovery_sets,
    format_certificate,
    format_code,
    lower_bound_ok,
    min_redundancy_code,
    min_redundancy_search,
    parse_certificate,
    parse_code,
    rho,
    verify_pk,
)
from .witness import CoordinateReplay, ProofReplayError, ProofWitness, build_proof_witness
from .emulator import (
    CodedStorage,
    Database,
    OverheadReport,
    ServerRecord,
    SessionTranscript,
    encode_database,
    make_queries,
    overhead_report,
    run_session,
)
from ._backend import backend_name

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "BitVector",
    "CodedStorage",
    "CoordinateReplay",
    "Database",
    "FormatError",
    "OverheadReport",
    "PirCode",
    "ProofReplayError",
    "ProofWitness",
    "RankDeficientError",
    "RecoveryCertificate",
    "SearchGuardError",
    "ServerRecord",
    "SessionTranscript",
    "SystematizedForm",
    "VectorSet",
    "backend_name",
    "build_proof_witness",
    "check_certificate",
    "construct_pir2",
    "construct_pir3",
    "construct_pir4",
    "count_systematic_pk",
    "encode_database",
    "enumerate_recovery_sets",
    "find_disjoint_recovery_sets",
    "format_certificate",
    "format_code",
    "format_matrix",
    "lower_bound_ok",
    "make_queries",
    "min_redundancy_code",
    "min_redundancy_search",
    "offset_product_sum",
    "overhead_report",
    "pairwise_products",
    "parse_certificate",
    "parse_code",
    "parse_matrix",
    "product",
    "rank",
    "rho",
    "run_session",
    "set_square",
    "span_contains",
    "span_dimension",
    "systematize",
    "verify_pk",
]

"""sktlie: Hermitian geometry on finite-dimensional Lie algebras.

Verification machinery for pluriclosed (SKT) and generalized Kahler
structures, the skew-torsion Hermitian connection and its torsion 3-form,
tangent Lie algebras built from flat Hermitian connections, and taming
symplectic / Kahler feasibility, together with a verified catalog of
4-dimensional examples.
"""

from .config import __version__, set_tolerance, tolerance
from .errors import (
    InternalInconsistencyError,
    InvalidInputError,
    NoSuchConnectionError,
    PreconditionError,
    SktError,
)
from .multilinear import (
    ComplexKForm,
    Endomorphism,
    KForm,
    bidegree_decompose,
    holomorphic_coframe,
    pullback,
    wedge,
)
from .liealg import Fingerprint, LieAlgebra, form_to_string
from .hermitian import (
    ComplexStructure,
    HermitianStructure,
    MetricClass,
    adjoint_admissible,
    bismut_connection,
    classify_metric,
    connection_torsion_form,
    dc_form,
    fundamental_form,
    generalized_kahler_check,
    nijenhuis_norm,
    standard_complex_structure,
    torsion_three_form,
)
from .connections import (
    Connection,
    canonical_flat_connection,
    curvature_norm,
    flat_family_g1,
    flat_family_g3,
    hermitian_parallel_check,
)
from .tangent import (
    TangentAlgebra,
    build_tangent,
    gk_transfer_report,
    skt_transfer_report,
)
from .taming import (
    BetaSolution,
    SearchReport,
    TamingForm,
    assemble_taming,
    hermitian_symplectic_search,
    kahler_search,
    solve_beta,
)
from . import catalog

__all__ = [name for name in dir() if not name.startswith("_")]

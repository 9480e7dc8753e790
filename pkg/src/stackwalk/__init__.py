"""Stacked triangulations: exact homology, recognition, surgery and tightness."""
from .complex import (
    Complex,
    PreconditionError,
    are_isomorphic,
    boundary_simplex,
    chordal_witness,
    cone,
    connected_components,
    f_vector,
    from_facets,
    induced,
    is_chordal_skeleton,
    is_neighborly,
    link,
    missing_faces,
    simplex,
)
from .generators import (
    Certificate,
    gen_hbar_member,
    gen_stacked_ball,
    gen_stacked_sphere,
    gen_walkup_closed,
    search_neighborly_walkup,
    verify_certificate,
)
from .homology import BettiVector, betti, inclusion_induced, is_orientable, relative_betti
from .linalg import F2, QQ, FieldSpec, SparseMatrix, kernel_basis, rank
from .recognition import (
    ManifoldClass,
    Verdict,
    boundary_complex,
    classify,
    interior_faces,
    is_pseudomanifold,
)
from .stacked import (
    TreeCertificate,
    is_locally_stacked,
    is_stacked_closed,
    is_stacked_sphere,
    is_stacked_with_boundary,
    kalai_criterion,
    tree_certificate,
)
from .surgery import (
    DeletionDecomposition,
    FacetBijection,
    connected_union,
    deletion_decomposition,
    enumerate_admissible,
    handle_add_boundary,
    handle_add_closed,
    handle_delete,
    is_admissible,
)
from .tightness import criteria, equivalence_report, is_tight, missing_face_vanishing_check

__version__ = "0.1.0"

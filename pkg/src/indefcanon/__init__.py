"""Canonical Jordan bases of real H-selfadjoint matrix pairs.

The package constructs flipped-orthogonal (FO), conjugate-symmetric FOCS,
and real canonical (RC) Jordan bases, and measures their Lipschitz
stability under structure-preserving perturbations.
"""

from .chains import ChainSet, fit_chain_to, jordan_chains, reduce_real_chain
from .errors import (
    AmbiguousMatchError,
    CanonError,
    DegenerateGramError,
    DeltaUnreachableError,
    EigenvalueDriftError,
    KindMismatchError,
    NotConjugateSymmetricError,
    NotHermitianError,
    NotRealError,
    NotUnitTriangularError,
    PureImaginaryAnchorError,
    RetryExhaustedError,
    SingularBasisError,
    SingularInnerProductError,
    SingularMatrixError,
    StructureMismatchError,
)
from .harness import (
    Instance,
    PerturbedPair,
    StabilityReport,
    TrialRecord,
    anchored_canonize,
    estimate_lipschitz,
    generate_instance,
    match_eigenvalues,
    perturb_instance,
)
from .linalg import (
    DEFAULT_TOL,
    affiliation_residuals,
    mat_norm,
    matrix_from_json,
    matrix_to_json,
    solve,
    spectral_norm,
)
from .pipeline import (
    CanonicalBasis,
    Certificate,
    GramAnchor,
    PipelineTrace,
    flip_step,
    focs_basis,
    phase_step,
    scale_step,
    symmetrize_step,
    toeplitz_inv_sqrt,
)
from .rc import focs_from_rc, rc_basis
from .structure import (
    BlockSpec,
    JordanSpec,
    conjugate_symmetry_gamma,
    h_selfadjoint_residual,
    jordan_form,
    mixing_matrix,
    mixing_matrix_inv,
    real_jordan_form,
    same_jordan_structure,
    sip_form,
)

__version__ = "0.1.0"

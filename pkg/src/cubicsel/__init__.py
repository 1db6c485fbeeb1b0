"""Exact local computations for optimal embeddings of cubic orders into
the 3x3 matrix ring over truncated unramified local rings, plus the
global selectivity verdict layer they feed."""

from .embeddings import (
    EmbeddingPair,
    NormClassSet,
    NotAHomomorphism,
    NotOptimal,
    OrbitClass,
    classify_orbit,
    embedding_number,
    is_optimal,
    is_special,
    local_norm_set,
    make_pair,
    regular_pair,
    regular_special_witness,
    sinert_conjugator,
    special_normal_form,
    translate_norm_set,
)
from .matrices import (
    Mat3,
    SimilarityClass,
    SolutionModule,
    howell_form,
    intertwiners,
    min_poly,
    char_poly,
    residue_classify,
    solve_homogeneous,
    unit_det_in_module,
)
from .orders import (
    AlgebraKind,
    CubicAlgebraLocal,
    LocalOrder,
    disc_exponent,
    division_embedding_number,
    gram_disc_exponent,
    normalize_inert_order,
    regular_rep,
    structure_constants,
)
from .rings import (
    LocalElem,
    ResidueElem,
    RingSpec,
    Valuation,
    hensel_root,
    invert,
    is_unit,
    lift,
    reduce_mod_p,
    ring_make,
    valuation,
)
from .selectivity import (
    PrimeDatum,
    SelectivityContext,
    Verdict,
    admitted_types,
    parse_config,
    selectivity_set,
    validate,
    verdict,
    vhat_element,
)

__version__ = "0.1.0"

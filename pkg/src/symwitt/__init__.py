"""Exact symplectic Witt-group machinery over small commutative rings.

Ring constructions (excision, doubles, Rees rings), division-free
Pfaffians, relative elementary-group words and certificates, unimodular
row symbols with van der Kallen's product, and brute-force orbit ground
truth over finite rings.
"""

from .errors import (
    ArtifactError,
    BadIndices,
    BoundExceeded,
    IndexOutOfRange,
    InfiniteRing,
    MalformedSpec,
    NoP0Found,
    NoRelativeCompletionFound,
    NonInvertibleIndex,
    NotAUnit,
    NotAlternating,
    NotCompleted,
    NotInC,
    NotLinear,
    NotRelative,
    NotUnipotent,
    OddSize,
    RingMismatch,
    SizeMismatch,
    TailAlignmentFailed,
    UndecidableCompletion,
    UndecidableMembership,
    VerificationFailed,
    ZeroPolynomial,
)
from .rings import (
    DoubleRing,
    ExcisionRing,
    ExtendedReesRing,
    Ideal,
    IntegerRing,
    LaurentRing,
    ModularRing,
    PolynomialRing,
    ProductRing,
    QuotientRing,
    RationalField,
    ReesRing,
    Ring,
    double_to_excision,
    enumerate_elements,
    excision_project,
    excision_section,
    excision_to_double,
    rees_contains,
    unit_ideal,
    zero_ideal,
)
from .matrices import (
    Conj,
    Elem,
    FormWitness,
    GroupWord,
    Inv,
    RingMatrix,
    StandardForm,
    chi,
    chi_n,
    chi_of_signs,
    congruent_mod_ideal,
    determinant,
    double_matrix_join,
    double_matrix_split,
    in_congruence_level,
    orth_sum,
    pad_word,
    pfaffian,
    relative_level,
    token_matrix,
    word_eval,
    word_inverse,
)
from .polytools import MultiPoly, Substitution, is_weierstrass, nagata_transform
from .witt import (
    EquivalenceCertificate,
    WittSymbol,
    compose_certificates,
    equation_holds,
    identity_certificate,
    karoubi_linear_verify,
    make_witt_symbol,
    map_i,
    map_p1,
    pf_unit,
    split_section,
    standard_form_witness,
    symmetric_certificate,
    tilde_lift_alt,
    unipotent_root,
    verify_equivalence,
    witt_product,
)
from .umrows import (
    UmRow,
    complete,
    complete_relative,
    excision_map_f,
    stable_range_reduce,
    theta,
    theta_independence_cert,
    theta_matrix,
    tilde_row_lift,
    um_row,
    vaserstein_symbol,
    vdk_product,
)
from .orbits import (
    CONFIRMED,
    INCONCLUSIVE,
    REFUTED,
    BijectivityReport,
    Generator,
    OrbitPartition,
    WittClassFamily,
    alt_orbit_partition,
    elementary_generators,
    enumerate_um,
    find_equivalence_certificate,
    nice_mult_check,
    orbit_bfs,
    um_orbit_partition,
    vaserstein_report,
    vdk_product_aligned,
    witt_classes_bounded,
    witt_universe,
)
from .ringio import (
    canonical_json,
    ideal_from_spec,
    ideal_to_spec,
    matrix_from_obj,
    matrix_to_obj,
    parse_ring,
    ring_from_spec,
    ring_to_spec,
    vector_from_obj,
    vector_to_obj,
    word_from_obj,
    word_to_obj,
)

__version__ = "0.1.0"

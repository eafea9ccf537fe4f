"""Exact calculus of finite groupoids: mapping groupoids, nerves and
homology, principal bundles and descent, lax colimits, and orbit categories.
"""

from .errors import (
    BadInverse,
    BudgetExceeded,
    EndpointMismatch,
    GroupoidError,
    Indeterminate,
    MissingIdentity,
    NonAssociative,
    NotACover,
    NotASubgroup,
    NotFree,
    NotPrincipal,
    OrbkitError,
    ParseError,
    PentagonViolation,
    PreconditionFailed,
    ShearNotBijective,
    SizeLimit,
    UnknownEntity,
)
from .core import (
    FinGroup,
    FinGroupoid,
    GSet,
    Iso,
    action_groupoid,
    coproduct,
    coset_gset,
    cyclic_group,
    delooping,
    gauge_groupoid,
    iso_check,
    opposite_groupoid,
    pair_groupoid,
    product,
    product_group,
    quotient_groupoid,
    restriction,
    symmetric_group,
    translation_groupoid,
    trivial_group,
    unit_groupoid,
    validate_groupoid,
    validate_gset,
)
from .smith import elementary_divisors, integer_rank, rank_mod_p
from .functors import (
    ALL,
    FAITHFUL,
    EquivalenceCertificate,
    GroupoidFunctor,
    MappingGroupoid,
    NatTransformation,
    categorical_equivalence,
    conj_action_model,
    enumerate_functors,
    exponential_compare,
    group_homs,
    identity_functor,
    mapping_groupoid,
    transformations_between,
)
from .nerve import (
    ChainComplex,
    HomologyTable,
    NerveLevels,
    chain_complex,
    homology,
    homotopy_quotient_check,
    nerve,
    pi0,
    pi1,
    weak_equivalence_check,
)
from .present import (
    GroupoidPresentation,
    HomSolution,
    MaterializedGroupoid,
    contract_forest,
    group_from_cosets,
    groupoid_presentation,
    hom_solver,
    invert_word,
    materialize,
    todd_coxeter,
)
from .bundles import (
    Cocycle,
    DescentReport,
    GammaDiagram,
    GroupoidLevel,
    HSBundle,
    MoritaReport,
    PowerLevel,
    PrincipalBundle,
    bgstr_check,
    cech_gamma,
    cocycle_to_hs,
    constant_gamma,
    descent_check,
    faithful_bundle,
    flip,
    groupoid_equivalence,
    holim_gamma,
    hs_iso,
    hs_isos,
    hs_to_cocycle,
    identity_cocycle,
    is_biprincipal,
    moduli_groupoid,
    morita_report,
    power_groupoid,
    pullback_functor,
    trivial_bundle,
    validate_bundle,
    validate_diagram,
    validate_hs,
)
from .laxcolim import (
    # laxcolim.hom_solver and laxcolim.validate_diagram stay qualified; the
    # bare names belong to present and bundles
    Cone,
    Cov2,
    IndexCategory2,
    LaxDiagram,
    cone_category,
    cov2_builder,
    cover_mapping_diagram,
    hocolim_presentation,
    index_from_category,
    pbasm_check,
    presentation_from_doc,
    presentation_to_doc,
    swap_cell_check,
    universal_property_check,
    validate_index2,
)
from .orb import (
    DiagramMappingGroupoid,
    FreeOrbSpace,
    L_functor,
    OrbCategory,
    OrbMap,
    OrbSpace,
    R_functor,
    adjunction_check,
    build_orb,
    coequalizer_check,
    counit_check,
    free_orbspace,
    orbspace_mapping_groupoid,
    orbspace_weq,
    r_map,
    unit_check,
    validate_orbspace,
)
from .equivariant import (
    AuxCategory,
    ComparisonReport,
    OrbitCategory,
    aux_category,
    f_contractible_check,
    orbit_category,
    tvc_compare,
)

__version__ = "0.1.0"

"""Poncelet conic-line arrangements, double covers and Zariski certificates.

The package builds validated conic pairs admitting periodic Poncelet
transverses, computes unramified double covers of the two-conic curve via
node-sign calculus, derives splitting types of the induced covers, and
assembles machine-checkable certificates that arrangements with equal
combinatorics have distinct embedded topology.
"""

from .numeric import (
    CertNumber,
    CertPoly,
    NotASquare,
    PrecisionExhausted,
    Sign,
    certify_sign,
    poly_roots,
    poly_sqrt,
)
from .geometry import (
    Bitangent,
    Conic,
    ConicParam,
    DegenerateDuals,
    IncidenceViolation,
    ProjLine,
    ProjPoint,
    bitangents,
    intersect_conics,
    other_intersection,
    parametrize,
    restrict_poly,
    tangent_lines_from_point,
)
from .poncelet import (
    ConicFamily,
    Degeneracy,
    NoClosure,
    NoSignChange,
    PonceletPair,
    Transverse,
    ValidationFailed,
    certify_pair,
    classify_degenerate,
    default_family,
    degenerate_pairing,
    find_periodic_pair,
    trace,
    transverse_step,
)
from .covers import (
    AbstractCover,
    BranchDivisor,
    GluingClass,
    GluingData,
    NodalArrangement,
    OddMultiplicity,
    SignUncertified,
    SupportHitsNode,
    build_cover,
    canonical_form,
    conic_component,
    enumerate_pic2,
    equivalent,
    flip,
    induced_gluing,
    line_component,
    tensor,
)
from .splitting import (
    CombSignature,
    SplittingType,
    Verdict,
    ZariskiCertificate,
    comb_signature,
    salmon_rank_check,
    splitting_type,
    zariski_certificate,
)

__version__ = "0.1.0"

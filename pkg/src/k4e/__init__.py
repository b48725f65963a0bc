"""Enumeration, classification and intersection spectra of (K4-e)-designs."""

from .canon import CanonicalForm, are_isomorphic, aut_order, automorphisms, canonical_form
from .classify import KNOWN_CLASS_COUNTS, ClassInfo, enumerate_classes
from .core import (
    Block,
    Design,
    DesignError,
    EdgeCollision,
    EdgeMask,
    EdgeMissing,
    InadmissibleOrder,
    K4EError,
    OrderMismatch,
    Permutation,
    Triangle,
    VertexOutOfRange,
    WrongBlockCount,
    admissible_order,
    apply_permutation,
    block_edges,
    block_triangles,
    num_blocks,
    read_design,
    validate_design,
)
from .known import CertificateSet, known_designs, load_certificates
from .search import OrderTooLarge, count_labeled, enumerate_labeled
from .spectrum import (
    AdmEnvelope,
    Certificate,
    FinePair,
    IncompleteClassList,
    SpectrumPoint,
    SpectrumResult,
    UnknownClass,
    UnsupportedOrder,
    adm,
    compute_spectrum,
    fine_pair,
    reference_adm,
    reference_j_sets,
    verify_certificates,
)
from .structure import (
    DegreeProfile,
    DNSets,
    NotTwoRegular,
    check_d_cycle,
    degree_profile,
    dn_sets,
    find_subdesigns,
    verify_structure,
)

__version__ = "0.1.0"

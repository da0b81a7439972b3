"""Local cohomology of GL_2 Galois modules over Galois rings, with exhaustive small-prime checks."""

__version__ = "0.1.0"

from .ring import RingSpec, RingElement, make_ring
from .groups import FiniteMatrixGroup, GroupElement, closure, det_image, p_sylow, cyclic_representatives
from .cohomology import GaloisModule, CohomologyReport, h1, h1_loc
from .oracle import brute_force_h1
from .classify import classify, is_borel, borel_certificate, eigenvalue_one_index, conjugacy_conditions
from .criteria import constant_C, euclid_bound, euclid_oracle, index_gcd_check, isogeny_criterion, IsogenyBoundInput
from .scan import ScanSpec, enumerate_subgroups

__all__ = [
    "RingSpec", "RingElement", "make_ring", "FiniteMatrixGroup", "GroupElement", "closure", "det_image", "p_sylow",
    "cyclic_representatives", "GaloisModule", "CohomologyReport", "h1", "h1_loc", "brute_force_h1", "classify",
    "is_borel", "borel_certificate", "eigenvalue_one_index", "conjugacy_conditions", "constant_C", "euclid_bound",
    "euclid_oracle", "index_gcd_check", "isogeny_criterion", "IsogenyBoundInput", "ScanSpec", "enumerate_subgroups",
]

"""Exact expansion of eta/theta quotients and explainable congruences of their specializations."""

from .congruence import (
    CongruenceQuery, CongruenceReport, MaximalityCheck, OrbitResult, ScanResult,
    check_explainable, check_maximality_bounds, detect_congruence,
    scan_maximal_progressions, square_class_orbit, verify_square_class_theorem,
)
from .dsl import format_spec, parse_spec
from .errors import (
    CongruenceForgeError, ConsistencyError, InsufficientRange, NonUnitLeadingTerm,
    NotDivisible, OutOfRange, ParseError, SemanticError, SpecError, SpecHasResidualPole,
)
from .jacobi import (
    JacobiExpansion, Specialization, expand, leading_coefficient, restrict_progression,
    specialize,
)
from .oracle import (
    RankTable, colored_partition_count, crank, enumerate_partitions, equidistributed,
    oracle_product_coefficients, oracle_specialization, partition_mod_recurrence, rank,
    rank_table,
)
from .qseries import (
    Eta, FourierSeries, Pochhammer, ProductSpec, Theta, build_pochhammer, elaborate_spec,
    fs_add, fs_invert, fs_mul,
)
from .ring import (
    EllipticPolynomial, ep_add, ep_cyclotomic_divide, ep_eval_at_zero, ep_mul,
    ep_vanishes_at_ell_torsion,
)

__version__ = "0.1.0"

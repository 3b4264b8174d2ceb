"""Packing sets for codes that correct restricted (e.g. limited-magnitude) errors."""

__version__ = "0.1.0"

from .bounds import (
    BoundsReport,
    bounds_report,
    hamming_like_bound_holds,
    max_B_upper,
    maximal_lower_bound_holds,
    min_B_maximal,
    ratio_set,
)
from .codec import RestrictedCode, build_syndrome_table, decode, encode, inject_error
from .constructions import (
    CyclotomicRun,
    basis_packing_set,
    certify_sufficient,
    cyclotomic_construct,
    powers_packing_set,
    quadratic_residue_packing_set,
    ratio_set_alphabet,
)
from .field import FieldCtx, element_order, make_extension_field, make_prime_field
from .ntheory import (
    FactoredInteger,
    factor,
    find_primitive_root,
    is_prime,
    is_primitive_root,
    random_factored_integer,
    random_prime_in_step1_interval,
)
from .packing import (
    ErrorAlphabet,
    ErrorVector,
    PackingSet,
    Status,
    Verdict,
    enumerate_error_vectors,
    exhaustive_maximum,
    extend_to_maximal,
    syndrome,
    verify_packing,
)

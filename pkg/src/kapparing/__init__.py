"""Exact arithmetic in the kappa ring of moduli of curves of compact type.

The package expands products of kappa classes in the additive basis of kappa
monomials, computes every coefficient by several independent methods, and
verifies the supporting combinatorial identities against brute-force oracles.
All arithmetic is exact (big integers and fractions); there is no floating
point anywhere.
"""

from .identities import (
    IDENTITY_NAMES,
    IdentityReport,
    SweepBounds,
    check_identity,
    identity_sweep,
    labeled_trees,
    prufer_decode,
    prufer_encode,
    tree_sum_oracle,
)
from .numbers import (
    alt_binomial_partial_sum,
    binomial,
    factorial,
    falling_factorial,
    format_rational,
    multinomial,
    parse_rational,
)
from .oracle import (
    DimensionSequence,
    RankDeficientPairingError,
    StableTree,
    build_stratum_tree,
    integer_partitions,
    integrate_kappa_top,
    integrate_psi_pushforward,
    pair_kappa_stratum,
    pairing_system,
    psi_integral,
    solve_coeffs_by_pairing,
    solve_exact,
)
from .partitions import (
    Multiset,
    SetPartition,
    bell,
    block_sums,
    canonical_partition,
    induced_partition,
    multiset,
    refinements,
    refines,
    restrict_partition,
    set_partitions,
    stirling2,
)
from .ring import (
    METHODS,
    TRUNCATION_VARIANTS,
    KappaPoly,
    ModuliContext,
    PsiPoly,
    basis_coeff,
    correction_coeff,
    faber_expand,
    kappa_monomial,
    kappa_product,
    kappa_to_psi,
    reduce_to_basis,
    socle_coeff,
    split_weight,
)

__version__ = "0.1.0"

__all__ = [
    "IDENTITY_NAMES",
    "IdentityReport",
    "SweepBounds",
    "check_identity",
    "identity_sweep",
    "labeled_trees",
    "prufer_decode",
    "prufer_encode",
    "tree_sum_oracle",
    "alt_binomial_partial_sum",
    "binomial",
    "factorial",
    "falling_factorial",
    "format_rational",
    "multinomial",
    "parse_rational",
    "DimensionSequence",
    "RankDeficientPairingError",
    "StableTree",
    "build_stratum_tree",
    "integer_partitions",
    "integrate_kappa_top",
    "integrate_psi_pushforward",
    "pair_kappa_stratum",
    "pairing_system",
    "psi_integral",
    "solve_coeffs_by_pairing",
    "solve_exact",
    "Multiset",
    "SetPartition",
    "bell",
    "block_sums",
    "canonical_partition",
    "induced_partition",
    "multiset",
    "refinements",
    "refines",
    "restrict_partition",
    "set_partitions",
    "stirling2",
    "METHODS",
    "TRUNCATION_VARIANTS",
    "KappaPoly",
    "ModuliContext",
    "PsiPoly",
    "basis_coeff",
    "correction_coeff",
    "faber_expand",
    "kappa_monomial",
    "kappa_product",
    "kappa_to_psi",
    "reduce_to_basis",
    "socle_coeff",
    "split_weight",
]

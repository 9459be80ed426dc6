"""Exact computations with the torus bundle groups G_k, E_k and their 2-adic completions."""

from .intlinalg import AbelianGroupInvariants, IntMatrix, Lattice, cokernel, smith_normal_form
from .invariants import baer_free_nilpotent, gamma_omega_witness, h2_torus_extension
from .iso import SCHEMA, IsoReport, build_candidate_iso, distinguish, ghat_isomorphism, zinf_obstruction
from .local_arith import DyadicLocal, DyadicModOne, TruncatedTwoAdic, hensel_sqrt, is_unit_square
from .nilgroups import HeisenbergElement, ak_prime_apply, heisenberg_extension, torus_bundle_group

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupInvariants",
    "DyadicLocal",
    "DyadicModOne",
    "HeisenbergElement",
    "IntMatrix",
    "IsoReport",
    "Lattice",
    "SCHEMA",
    "TruncatedTwoAdic",
    "ak_prime_apply",
    "baer_free_nilpotent",
    "build_candidate_iso",
    "cokernel",
    "distinguish",
    "gamma_omega_witness",
    "ghat_isomorphism",
    "h2_torus_extension",
    "hensel_sqrt",
    "heisenberg_extension",
    "is_unit_square",
    "smith_normal_form",
    "torus_bundle_group",
    "zinf_obstruction",
]

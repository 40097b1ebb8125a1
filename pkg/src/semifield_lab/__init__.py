"""Budaghyan-Helleseth commutative presemifields over odd characteristic."""

from .errors import SemifieldError
from .ff_tower import FieldSpec, make_field, canonical_constants
from .linmap import PLinearMap
from .biform import BiForm
from .bh_core import BHParams, bh_mul, k_map, semifield_mul, check_presemifield, build_table, MulTable
from .nuclei import nucleus_report, middle_nucleus, center, is_nonsquare_nm
from .isotopy import (IsotopismCert, verify, verify_basis_pairs, compose, build_beta_change,
                      build_d_reflection, build_l_minus_d, enumerate_strong_autotopisms,
                      search_strong_isotopism_monomial)
from .catalog import census, valid_ds

__version__ = "0.1.0"

__all__ = [
    "SemifieldError", "FieldSpec", "make_field", "canonical_constants", "PLinearMap", "BiForm",
    "BHParams", "bh_mul", "k_map", "semifield_mul", "check_presemifield", "build_table", "MulTable",
    "nucleus_report", "middle_nucleus", "center", "is_nonsquare_nm", "IsotopismCert", "verify",
    "verify_basis_pairs", "compose", "build_beta_change", "build_d_reflection", "build_l_minus_d",
    "enumerate_strong_autotopisms", "search_strong_isotopism_monomial", "census", "valid_ds",
]

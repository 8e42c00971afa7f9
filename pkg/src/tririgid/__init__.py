"""Exact computations on hyperbolic triangle groups and their finite quotients."""

from tririgid.characters import character_census, rigidity_report, trace_field_degree
from tririgid.cosets import reidemeister_schreier, todd_coxeter, verify_index2_embedding
from tririgid.cyclotomic import CycNumber, format_cyc, parse_cyc
from tririgid.fuchsian import admissible_free_products, euler_characteristic
from tririgid.presentation import (
    Presentation,
    coxeter_presentation,
    index2_extensions,
    parse_presentation,
    signature_presentation,
    triangle_presentation,
)
from tririgid.quotients import (
    Budget,
    character_count,
    distinguish,
    enumerate_homs,
    fingerprint,
    quotient_witness,
    verify_witness,
)
from tririgid.smith import abelian_invariants

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "CycNumber",
    "Presentation",
    "abelian_invariants",
    "admissible_free_products",
    "character_census",
    "character_count",
    "coxeter_presentation",
    "distinguish",
    "enumerate_homs",
    "euler_characteristic",
    "fingerprint",
    "format_cyc",
    "index2_extensions",
    "parse_cyc",
    "parse_presentation",
    "quotient_witness",
    "reidemeister_schreier",
    "rigidity_report",
    "signature_presentation",
    "todd_coxeter",
    "trace_field_degree",
    "triangle_presentation",
    "verify_index2_embedding",
    "verify_witness",
]

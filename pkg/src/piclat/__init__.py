"""Exact lattice invariants of Picard groups of moduli stacks of G-bundles."""

from .exactalg import FGAbGroup, LatticeInAmbient, hnf, snf
from .groupspec import parse_group_spec
from .invforms import EvVariant, FormKind, coker_r_G, ev_hom, form_lattice
from .oracle7 import Family, FamilyParams, Quantity, bruteforce_invariant_forms, oracle
from .picard import (
    MarkedGenus,
    NSClass,
    cl_report,
    coker_gamma_bar,
    coker_omega,
    coker_res_bar,
    curve_ns,
    genus0_report,
    im_omega_gamma,
    ns_lattice,
    ns_membership,
    ns_pullback,
    rpic_report,
    rpic_rig_report,
    torus_cokernels,
)
from .rootdata import ReductiveDatum, build_named, datum_from_text, pi1_class

__version__ = "0.1.0"

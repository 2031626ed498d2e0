"""Frobenius nilpotence on graded local cohomology over prime fields."""

from .ff_linalg import KernelChain, PrimeFieldElement, PrimeFieldMatrix, kernel, multinomial_mod_p
from .fmodule_calculus import UNKNOWN, NilSupport, UpperBound
from .hypersurface_cech import (
    CechClass,
    HypersurfaceRing,
    Status,
    basis_at_degree,
    classify_ring,
    degree_verdict,
    frobenius_layer,
    polynomial_ring_profile,
)
from .profile import RingProfile

__all__ = [
    "UNKNOWN",
    "CechClass",
    "HypersurfaceRing",
    "KernelChain",
    "NilSupport",
    "PrimeFieldElement",
    "PrimeFieldMatrix",
    "RingProfile",
    "Status",
    "UpperBound",
    "basis_at_degree",
    "classify_ring",
    "degree_verdict",
    "frobenius_layer",
    "kernel",
    "multinomial_mod_p",
    "polynomial_ring_profile",
]

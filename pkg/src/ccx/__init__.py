"""Numerical verification of the geometry of the symmetrized polydisc."""
from .polynomial import MonicPolynomial, NonConvergence, RootLocation, Verdict, root_location, roots, schur_inside_disc
from .symdisc import SymPoint, homeo, homeo_inv, membership, rho, sym

__version__ = "0.1.0"

__all__ = [
    "MonicPolynomial",
    "NonConvergence",
    "RootLocation",
    "SymPoint",
    "Verdict",
    "homeo",
    "homeo_inv",
    "membership",
    "rho",
    "root_location",
    "roots",
    "schur_inside_disc",
    "sym",
]

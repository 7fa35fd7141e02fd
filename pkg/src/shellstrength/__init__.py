"""Harmonic strength of lattice shells, from enumeration, theta series and modular forms."""

from .designs import PointSet, fisher_bound, half_set, is_design_at_degree, triangle_strength
from .harmonics import Polynomial, ZonalHarmonic, harm_dim, harmonic_basis, laplacian
from .lattices import enumerate_shell, get_lattice, shell_count_formula
from .modring import fit_and_extend, monomial_basis
from .qseries import QSeries, eisenstein, eta, eta_product, tau, tau2
from .strength import StrengthReport, appendix_strength_scan, strength_upto
from .theta import image_rank, verify_eta_identity, weighted_theta

__version__ = "0.1.0"

__all__ = [
    "PointSet", "Polynomial", "QSeries", "StrengthReport", "ZonalHarmonic",
    "appendix_strength_scan", "eisenstein", "enumerate_shell", "eta", "eta_product",
    "fisher_bound", "fit_and_extend", "get_lattice", "half_set", "harm_dim", "harmonic_basis",
    "image_rank", "is_design_at_degree", "laplacian", "monomial_basis", "shell_count_formula",
    "strength_upto", "tau", "tau2", "triangle_strength", "verify_eta_identity", "weighted_theta",
]

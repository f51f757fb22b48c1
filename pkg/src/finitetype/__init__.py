"""Local dimensions of self-similar measures of finite type.

Exact net-interval machinery (characteristic vectors, transition matrices,
loop classes), rigorous local-dimension brackets, constructions with
prescribed isolated pieces, L^q and multifractal spectra, and a brute-force
oracle for cross-checking.
"""
from .classes import ClassGraph, build, classify
from .constructions import (
    ConstructionSpec,
    multiinterval,
    multipoint,
    select_probabilities,
    verify_requirements,
)
from .dimensions import (
    DimensionSet,
    attainable_set,
    cycle_dims,
    local_dim,
    loop_attractor_dim,
    outer_interval,
    periodic_dim,
)
from .estimators import FiniteTypeAnalysis, LqSpectrum, check_ifs, check_points, check_q_grid
from .ifs import WeightedIFS, compose, validate
from .net import Omega, children, closure, net_intervals, symbolic
from .oracle import DiscreteMeasure, empirical_local_dim, empirical_lq, pushforward, refine
from .spectra import SpectrumComponent, assemble_f, crossings, legendre, tau_component, tau_mu
from .transitions import TransitionMatrix, spectral_radius

__all__ = [
    "ClassGraph", "ConstructionSpec", "DimensionSet", "DiscreteMeasure", "FiniteTypeAnalysis",
    "LqSpectrum", "Omega", "SpectrumComponent", "TransitionMatrix", "WeightedIFS",
    "assemble_f", "attainable_set", "build", "check_ifs", "check_points", "check_q_grid",
    "children", "classify", "closure", "compose", "crossings", "cycle_dims",
    "empirical_local_dim", "empirical_lq", "legendre", "local_dim", "loop_attractor_dim",
    "multiinterval", "multipoint", "net_intervals", "outer_interval", "periodic_dim",
    "pushforward", "refine", "select_probabilities", "spectral_radius", "symbolic",
    "tau_component", "tau_mu", "validate", "verify_requirements",
]

"""Estimator-style front end over the analysis pipeline.

``fit`` takes a weighted IFS (object, config mapping or YAML path), learned
state ends in an underscore, and hyperparameters round-trip through
``get_params``/``set_params``.
"""
from __future__ import annotations

import os
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .classes import build, classify
from .constructions import ConstructionSpec
from .dimensions import attainable_set, local_dim
from .ifs import WeightedIFS, ifs_from_config, load_config, validate
from .net import DEFAULT_CAP, closure
from .spectra import (
    DEFAULT_Q,
    assemble_f,
    components_from_classes,
    components_from_construction,
    q_grid,
    spectrum,
    tau_mu,
)


def check_ifs(X) -> tuple:
    """(validated IFS, construction spec or None) from an IFS, a config
    mapping, or a path to a YAML config."""
    spec = None
    if isinstance(X, (str, os.PathLike)):
        X = load_config(X)
    if isinstance(X, dict):
        if "construction" in X:
            spec = ConstructionSpec.from_config(X)
        X = ifs_from_config(X)
    if not isinstance(X, WeightedIFS):
        raise TypeError(f"expected a WeightedIFS, config mapping or path, got {type(X).__name__}")
    return validate(X), spec


def check_points(X) -> list:
    """Points of [0, 1] as exact rationals; floats convert exactly."""
    pts = [X] if np.isscalar(X) or isinstance(X, Fraction) else list(np.ravel(np.asarray(X, dtype=object)))
    out = []
    for x in pts:
        x = Fraction(x) if not isinstance(x, Fraction) else x
        if not 0 <= x <= 1:
            raise ValueError(f"point {x} outside [0, 1]")
        out.append(x)
    return out


def check_q_grid(q) -> np.ndarray:
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if q.ndim != 1 or not np.all(np.isfinite(q)):
        raise ValueError("q must be a one-dimensional array of finite values")
    return q


class FiniteTypeAnalysis(BaseEstimator):
    """Closure, class graph and attainable local dimensions of an IFS.

    Parameters
    ----------
    cap : int
        Maximum number of reduced characteristic vectors.
    L, Lc : int or None
        Word lengths of the outer and inner brackets; ``None`` picks them
        from the class out-degrees.

    Attributes
    ----------
    ifs_ : WeightedIFS
    omega_ : Omega
    classes_ : ClassGraph
    dimensions_ : DimensionSet
    """

    def __init__(self, cap=DEFAULT_CAP, L=None, Lc=None):
        self.cap = cap
        self.L = L
        self.Lc = Lc

    def fit(self, X, y=None):
        self.ifs_, self.construction_ = check_ifs(X)
        self.omega_ = closure(self.ifs_, self.cap)
        self.classes_ = build(self.omega_)
        self.dimensions_ = attainable_set(self.classes_, self.L, self.Lc)
        return self

    def predict(self, X) -> np.ndarray:
        """Local dimension at each eventually periodic point."""
        check_is_fitted(self, "omega_")
        return np.array([local_dim(self.omega_, x) for x in check_points(X)])

    def transform(self, X) -> np.ndarray:
        """Id of the maximal loop class holding the tail of each point's
        (first) symbolic representation."""
        check_is_fitted(self, "classes_")
        return np.array([classify(self.classes_, x)[0].component.id for x in check_points(X)])


class LqSpectrum(BaseEstimator):
    """L^q-spectrum bounds, active components, crossings and the assembled
    multifractal spectrum.

    Systems carrying a construction section are split into their blocks
    K_0, K_1, ... and the essential class; others into maximal loop classes.
    """

    def __init__(self, cap=DEFAULT_CAP, L=None, Lc=None, qmin=DEFAULT_Q[0],
                 qmax=DEFAULT_Q[1], qstep=DEFAULT_Q[2]):
        self.cap = cap
        self.L = L
        self.Lc = Lc
        self.qmin = qmin
        self.qmax = qmax
        self.qstep = qstep

    def fit(self, X, y=None):
        analysis = FiniteTypeAnalysis(self.cap, self.L, self.Lc).fit(X)
        self.analysis_ = analysis
        if analysis.construction_ is not None:
            comps = components_from_construction(analysis.construction_, analysis.dimensions_)
        else:
            comps = components_from_classes(analysis.classes_, analysis.dimensions_)
        self.components_ = comps
        self.curve_, self.crossings_ = spectrum(comps, self.qmin, self.qmax, self.qstep)
        self.multifractal_ = assemble_f(comps)
        return self

    def transform(self, X) -> np.ndarray:
        """(lower, upper) bounds on tau at each q, shape (n, 2)."""
        check_is_fitted(self, "components_")
        c = tau_mu(self.components_, check_q_grid(X))
        return np.column_stack([c.lower, c.upper])

    def predict(self, X) -> np.ndarray:
        """Active component label at each q."""
        check_is_fitted(self, "components_")
        return np.array(tau_mu(self.components_, check_q_grid(X)).active)

    def grid(self) -> np.ndarray:
        return q_grid(self.qmin, self.qmax, self.qstep)

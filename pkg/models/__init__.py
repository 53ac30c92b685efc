#!/usr/bin/env python3
"""
Models package for the Gaussian Riesz transform toolkit
"""

from .atoms import (AtomCertificate, BumpComponent, BumpProfile, GenericH1Profile, H1Atom,
                    PlateauProfile, XkAtom)
from .errors import (AdmissibilityError, ConfigError, DegenerateProfileError, DegreeCapError,
                     DiagonalSingularityError, DimensionMismatchError, GaussRieszError,
                     JetOverflowError, QuadratureError, UnknownExperimentError)
from .geometry import AdmissibleBall, Ball, QuadratureGrid, WeightFunction, m_admissibility
from .multiindex import HermiteCoeffs, MultiIndex, total_degree_indices
from .operators import FAlphaEval, Family, KernelSpec, PVConfig, RieszOrder, SpectralMultiplier
from .sweep_result import ExperimentConfig, SampleRecord, SweepReport

__all__ = [
    'AtomCertificate', 'BumpComponent', 'BumpProfile', 'GenericH1Profile', 'H1Atom',
    'PlateauProfile', 'XkAtom',
    'AdmissibilityError', 'ConfigError', 'DegenerateProfileError', 'DegreeCapError',
    'DiagonalSingularityError', 'DimensionMismatchError', 'GaussRieszError', 'JetOverflowError',
    'QuadratureError', 'UnknownExperimentError',
    'AdmissibleBall', 'Ball', 'QuadratureGrid', 'WeightFunction', 'm_admissibility',
    'HermiteCoeffs', 'MultiIndex', 'total_degree_indices',
    'FAlphaEval', 'Family', 'KernelSpec', 'PVConfig', 'RieszOrder', 'SpectralMultiplier',
    'ExperimentConfig', 'SampleRecord', 'SweepReport',
]

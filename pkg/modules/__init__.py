"""
simpforge modules
"""

from .poly import Polynomial, VarId, parse_polynomial, poly_arith, specialize_pi, substitute, weight
from .simplex import MonotoneMap, compose, delta, enumerate_maps, m_alpha, s_alpha, sigma
from .salg import SAlgMorphism, check_morphism, check_presentation, morphisms_equal
from .checks import CheckResult, Counterexample

__all__ = [
    'Polynomial',
    'VarId',
    'parse_polynomial',
    'poly_arith',
    'specialize_pi',
    'substitute',
    'weight',
    'MonotoneMap',
    'compose',
    'delta',
    'enumerate_maps',
    'm_alpha',
    's_alpha',
    'sigma',
    'SAlgMorphism',
    'check_morphism',
    'check_presentation',
    'morphisms_equal',
    'CheckResult',
    'Counterexample',
]

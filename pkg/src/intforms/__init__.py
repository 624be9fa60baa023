"""
Integral polynomial forms as commutative I-dgas: exact chain-level
computations with the bar levels, their evaluation on finite simplicial
sets, homotopy colimits over I with the Barratt-Eccles action, and the
comparison with rational polynomial forms.
"""

from .chain_core import F2, QQ, ZZ, ChainComplex, ChainMap, GroundRing, Mat, Zmod
from .sset_eval import build_space

__all__ = ["F2", "QQ", "ZZ", "ChainComplex", "ChainMap", "GroundRing", "Mat", "Zmod",
           "build_space"]

"""Generic rational univariate representations of parametric polynomial systems."""
from .errors import (AmbiguousReconstruction, DenominatorVanishes, EmptySampleSet, FormSearchFailed,
                     GrurError, InsufficientGoodPoints, NoSolutionInBounds, NoSolutions,
                     NotZeroDimensional, StructureError, WitnessSearchExhausted)
from .groebner import GroebnerBasis, buchberger, dimension_check, normal_form
from .grur_ei import DegreeBounds, EIConfig, blackbox_rur, degree_bounds, grur_ei
from .parser import load_system, parse_parampoly, parse_poly
from .poly import QQ, MultiPoly, block_order, compare_monomials, grevlex
from .quotient import QuotientStructure, build_quotient
from .ratfunc import RatFunc, RatFuncField, parampoly_specialize, to_parampoly
from .realroots import ClassificationResult, classify_real_roots, count_real_roots, signed_subresultants
from .rur import GRUR, LinearForm, candidate_forms, grur_la, is_generically_separating, specialize_grur

__all__ = [name for name in dir() if not name.startswith("_")]

"""Certified root-separation measures for integer polynomials.

Exact polynomial arithmetic, certified complex root isolation,
effective lower-bound thresholds from auxiliary polynomials, the five
separation measures, exhaustive record search with a compiled fast
pass, explicit low-separation families, and exact perturbation-series
verification.
"""

from .polycore import (IntPolynomial, RatPolynomial, canonicalize,
                       is_canonical, orbit, parse_poly, render_poly,
                       squarefree_part)
from .rootfind import (PrecisionExceededError, RepeatedRootError,
                       RootBall, RootSet, certified_roots,
                       has_repeated_root)
from .sepmeasure import (MEASURES, MeasureError, NoQualifyingPairError,
                         SeparationResult, measure, quality)
from .auxpoly import (AuxPolynomial, build_aux, certified_gap_threshold,
                      exponent_of)
from ._kernel import KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "IntPolynomial", "RatPolynomial", "canonicalize", "is_canonical",
    "orbit", "parse_poly", "render_poly", "squarefree_part",
    "PrecisionExceededError", "RepeatedRootError", "RootBall",
    "RootSet", "certified_roots", "has_repeated_root",
    "MEASURES", "MeasureError", "NoQualifyingPairError",
    "SeparationResult", "measure", "quality",
    "AuxPolynomial", "build_aux", "certified_gap_threshold",
    "exponent_of", "KERNEL_BACKEND", "__version__",
]

"""Ratliff-Rush closures of ideals and modules by exact truncated linear algebra."""

from .errors import (HorizonError, InternalCheckError, RatliffRushError,
                     ValidationError)
from .fields import DEFAULT_PRIME, FieldSpec
from .rings import (OVERFLOW, RingElement, RingPresentation, TruncatedAlgebra,
                    build_ring, element_mul, format_element, format_monomial,
                    parse_element, recommend_truncation)
from .submodules import (Echelon, FreeModuleSpec, LengthResult, Submodule,
                         colon_ideal, colon_submodule, equality, full_module,
                         ideal_power, ideal_span, ideal_times_module,
                         intersection, is_subset, membership, minimal_generators,
                         module_sum, quotient_length, span, unit_ideal,
                         zero_module)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

"""Exact Rauzy-Veech induction on suspension data.

Surfaces are given by a permutation pair, lengths and a suspension vector
whose entries are rational combinations of named real numbers.  All
decisions (induction types, winners, vertex hits) are exact.
"""

from .errors import (
    NonPositiveHeight,
    NonSimplePolygon,
    NotAPermutation,
    OrbitStops,
    OutOfDomain,
    ParseError,
    PrecisionExhausted,
    RauzyError,
    RauzyUndefined,
    ValidationError,
)
from .geometry import (
    MinimalityVerdict,
    SaddleConnection,
    SeparatrixTrace,
    enumerate_saddle_connections,
    minimality_probe,
    origin_winner,
    simple_representative,
    trace_horizontal,
)
from .iet import (
    PermutationPair,
    StepRecord,
    displacement_vector,
    forward_rauzy_step,
    iet_apply,
    keane_check,
    translation_matrix,
    validate_permutation,
)
from .induction import (
    OrbitLog,
    backward_orbit,
    backward_step,
    backward_type,
    completeness_report,
    forward_orbit,
    forward_step_suspension,
    tau_decay_monitor,
)
from .io import dump_surface, load_surface, parse_surface
from .kernel import BACKEND
from .numeric import Basis, BasisSymbol, SymbolicReal, parse_rational, symreal_arith, symreal_sign
from .render import RenderSpec, render_svg
from .suspension import (
    Surface,
    heights,
    is_simple,
    polygon_vertices,
    singularity_classes,
    surface_area,
    validate_suspension,
)

__version__ = "0.1.0"

"""
Copyright (c) 2024 quarticflex developers. All rights reserved.

quarticflex: Flexes and hyperflexes of plane quartics
"""

from ._config import DEFAULT_TOLERANCES, Config, Tolerances
from ._geometry import (
    FlexRecord,
    ProjPoint,
    TangentLine,
    chordal_distance,
    contact_order,
    expected_count,
    find_flexes,
    hessian,
    tangent_at,
)
from ._group import (
    GroupAction,
    Orbit,
    Transform,
    fixed_locus,
    klein_four,
    orbit,
    orbit_decomposition,
    orbit_shape,
    stabilizer,
)
from ._kuribayashi import (
    ClassificationReport,
    Params,
    SpecialLoci,
    build_curve,
    classify,
    hyperflex_branch_parameters,
    reproduce_example,
    special_flex_conditions,
    two_parameter_reduction,
    verify_resultant_identities,
    worked_examples,
)
from ._poly import MPoly, UPoly, parse_polynomial
from ._solve import all_roots, resultant_bivariate, resultant_univariate
from ._utils import QuarticFlexError
from ._version import __version__

__all__ = [
    "DEFAULT_TOLERANCES",
    "ClassificationReport",
    "Config",
    "FlexRecord",
    "GroupAction",
    "MPoly",
    "Orbit",
    "Params",
    "ProjPoint",
    "QuarticFlexError",
    "SpecialLoci",
    "TangentLine",
    "Tolerances",
    "Transform",
    "UPoly",
    "__version__",
    "all_roots",
    "build_curve",
    "chordal_distance",
    "classify",
    "contact_order",
    "expected_count",
    "find_flexes",
    "fixed_locus",
    "hessian",
    "hyperflex_branch_parameters",
    "klein_four",
    "orbit",
    "orbit_decomposition",
    "orbit_shape",
    "parse_polynomial",
    "reproduce_example",
    "resultant_bivariate",
    "resultant_univariate",
    "special_flex_conditions",
    "stabilizer",
    "tangent_at",
    "two_parameter_reduction",
    "verify_resultant_identities",
    "worked_examples",
]

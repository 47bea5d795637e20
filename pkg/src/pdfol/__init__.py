"""Blow-up reduction, Poincare-Dulac normal forms and projective holonomy
for nilpotent singularities of plane holomorphic foliations, at a finite
truncation order."""

__version__ = "0.1.0"

from .errors import (InputError, MathError, NotInvertibleError, PdfolError,
                     PrecisionError)
from .rings import (ComplexApprox, ParamPoly, ParamPolyRing, RationalExact,
                    rational, rational_sqrt)
from .series import Series1, Series2
from .forms import (OneForm2, PlaneVectorField, SingularityReport, cs_index,
                    dual, dual_field, report_at, wedge)
from .blowup import (BlowupResult, ReductionPath, blowup_chain, blowup_chart1,
                     blowup_chart2, recenter, singular_points_on_divisor)
from .classify import (GPDReport, PrenormalData, analyze, default_order,
                       gpd_condition, gpd_detect, parse_prenormal,
                       pd_vs_dicritical, saddle_subcase, takens_case)
from .normal_form import (FiberedField, NormalizationResult, bound_bruteforce,
                          normalize, to_fibered_field, verify_conjugation)
from .holonomy import (FormalDiffeo1, HolonomyGroupModel, VectorField1,
                       commutes_with_scaling, compose, conjugate, dichotomy,
                       exp_vf, group_commutator, group_model, inverse,
                       log_diffeo, numeric_holonomy, pd_holonomy_model,
                       periodicity, sz_lambda)
from .parser import InputExpression, parse_expr, print_form

__all__ = [
    "BlowupResult",
    "ComplexApprox",
    "FiberedField",
    "FormalDiffeo1",
    "GPDReport",
    "HolonomyGroupModel",
    "InputError",
    "InputExpression",
    "MathError",
    "NormalizationResult",
    "NotInvertibleError",
    "OneForm2",
    "ParamPoly",
    "ParamPolyRing",
    "PdfolError",
    "PlaneVectorField",
    "PrecisionError",
    "PrenormalData",
    "RationalExact",
    "ReductionPath",
    "Series1",
    "Series2",
    "SingularityReport",
    "VectorField1",
    "analyze",
    "blowup_chain",
    "blowup_chart1",
    "blowup_chart2",
    "bound_bruteforce",
    "commutes_with_scaling",
    "compose",
    "conjugate",
    "cs_index",
    "default_order",
    "dichotomy",
    "dual",
    "dual_field",
    "exp_vf",
    "gpd_condition",
    "gpd_detect",
    "group_commutator",
    "group_model",
    "inverse",
    "log_diffeo",
    "normalize",
    "numeric_holonomy",
    "parse_expr",
    "parse_prenormal",
    "pd_holonomy_model",
    "pd_vs_dicritical",
    "periodicity",
    "print_form",
    "recenter",
    "report_at",
    "saddle_subcase",
    "singular_points_on_divisor",
    "sz_lambda",
    "takens_case",
    "to_fibered_field",
    "verify_conjugation",
    "wedge",
    "__version__",
]

"""The log tangent integral, Catalan's constant and their acceleration formulas."""

__version__ = "0.1.0"

from .accel import aux_lvalue, catalan_accel, catalan_lucas  # noqa: E402
from .logtan import t_value  # noqa: E402
from .numkernel import RationalAngle  # noqa: E402
from .relations import discover_t_relations, explain_relation, find_relation  # noqa: E402
from .transforms import multiplication_relation, reflect  # noqa: E402
from .units import certify_unit, unit_poly  # noqa: E402

__all__ = [
    "RationalAngle",
    "aux_lvalue",
    "catalan_accel",
    "catalan_lucas",
    "certify_unit",
    "discover_t_relations",
    "explain_relation",
    "find_relation",
    "multiplication_relation",
    "reflect",
    "t_value",
    "unit_poly",
]

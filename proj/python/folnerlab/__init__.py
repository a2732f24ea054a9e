"""Covering constants, Folner families, Rokhlin castles, and dimension bounds
for computable discrete groups.

The heavy lifting lives in the compiled extension; descriptors are JSON
strings, e.g. '{"kind":"heisenberg","n":1}' for groups and
'{"family":"heisenberg_sqrt","n":1}' for Folner families.
"""

from folnerlab._folnerlab import (
    BudgetExceeded,
    PreconditionError,
    amenability_bound,
    amenability_witness,
    ball,
    bounds_report,
    build_castle,
    check_afc,
    check_wafc,
    covering_number,
    embedding_bound,
    family_covering_number,
    folner_defect,
    group_info,
    is_approximate,
    rokhlin_bound,
    symmetrization_bound,
    symmetrization_check,
    version,
)

__version__ = version()

__all__ = [
    "BudgetExceeded",
    "PreconditionError",
    "amenability_bound",
    "amenability_witness",
    "ball",
    "bounds_report",
    "build_castle",
    "check_afc",
    "check_wafc",
    "covering_number",
    "embedding_bound",
    "family_covering_number",
    "folner_defect",
    "group_info",
    "is_approximate",
    "rokhlin_bound",
    "symmetrization_bound",
    "symmetrization_check",
    "version",
]

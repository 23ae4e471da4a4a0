"""Exact-arithmetic workbench for Schreier families, miniature mixed-Tsirelson
norming sets, and the combinatorial games they support."""

from _tslab import (  # noqa: F401
    Workbench,
    family_enumerate,
    family_maximal,
    family_member,
    family_order,
    fundamental_sequence,
    l2sum_norm_sq,
    l_member,
    lambda_class,
    ordinal_normalize,
    profiles,
    run_suite,
)

__all__ = [
    "Workbench",
    "family_enumerate",
    "family_maximal",
    "family_member",
    "family_order",
    "fundamental_sequence",
    "l2sum_norm_sq",
    "l_member",
    "lambda_class",
    "ordinal_normalize",
    "profiles",
    "run_suite",
]

__version__ = "0.1.0"

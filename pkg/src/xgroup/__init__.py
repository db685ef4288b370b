"""Finite group engine for self-centralizing-subgroup classification."""

from .engine import (
    Group,
    SubgroupSet,
    Fingerprint,
    closure,
    centralizer,
    conjugacy_classes,
    derived_subgroup,
    quotient,
    sylow,
    p_core,
    fitting,
    generalized_fitting,
    structure_tests,
    subgroups_up_to_conjugacy,
    fingerprint,
)

__all__ = [
    "Group", "SubgroupSet", "Fingerprint", "closure", "centralizer",
    "conjugacy_classes", "derived_subgroup", "quotient", "sylow", "p_core",
    "fitting", "generalized_fitting", "structure_tests",
    "subgroups_up_to_conjugacy", "fingerprint",
]

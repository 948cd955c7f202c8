"""Prenex MSO1 over cliquewidth decompositions."""

from divcw.mso.core import MsoCore, model_check, mso_core, root_tree
from divcw.mso.formula import (
    DOMINATING_SET,
    INDEPENDENT_SET,
    VERTEX_COVER,
    Formula,
    FormulaError,
    NaiveEvaluator,
    format_formula,
    naive_holds,
    parse_formula,
)
from divcw.mso.trees import (
    EXT,
    MAX_QUANTIFIERS,
    ArenaBudgetExceeded,
    Configuration,
    FullTree,
    TreeArena,
    configuration_of,
    evaluate_full,
    full_partial_tree,
    full_product,
)

__all__ = [
    "ArenaBudgetExceeded",
    "Configuration",
    "DOMINATING_SET",
    "EXT",
    "Formula",
    "FormulaError",
    "FullTree",
    "INDEPENDENT_SET",
    "MAX_QUANTIFIERS",
    "MsoCore",
    "NaiveEvaluator",
    "TreeArena",
    "VERTEX_COVER",
    "configuration_of",
    "evaluate_full",
    "format_formula",
    "full_partial_tree",
    "full_product",
    "model_check",
    "mso_core",
    "naive_holds",
    "parse_formula",
    "root_tree",
]

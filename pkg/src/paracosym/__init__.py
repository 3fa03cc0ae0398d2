"""Exact symbolic verification, analysis, and classification of almost
alpha-paracosymplectic structures on coordinate charts."""

from .errors import (
    DefinitionError,
    DeformationParameterError,
    EngineError,
    ParseError,
    StructureError,
)
from .parser import ManifoldDefinition, load_definition, parse_scalar
from .scalars import GeneratorDecl, ScalarContext, ScalarField
from .geometry import Chart, TensorField
from .structures import (
    AlmostParacontactStructure,
    CheckItem,
    StructureAnalysis,
    identity_suite,
    verify_axioms,
)
from .nullity import NullityFit, nullity_fit
from .classify import HType, classify_h
from .catalog import CatalogEntry, catalog, catalog_entry
from .report import AnalysisReport, run_analyze

__version__ = "0.1.0"

__all__ = [
    "AlmostParacontactStructure",
    "AnalysisReport",
    "CatalogEntry",
    "Chart",
    "CheckItem",
    "DefinitionError",
    "DeformationParameterError",
    "EngineError",
    "GeneratorDecl",
    "HType",
    "ManifoldDefinition",
    "NullityFit",
    "ParseError",
    "ScalarContext",
    "ScalarField",
    "StructureAnalysis",
    "StructureError",
    "TensorField",
    "catalog",
    "catalog_entry",
    "classify_h",
    "identity_suite",
    "load_definition",
    "nullity_fit",
    "parse_scalar",
    "run_analyze",
    "verify_axioms",
]

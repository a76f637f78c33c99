"""Data quality evaluation toolkit.

A library of documented quality metrics, decision trees that map a use
case onto the metrics worth computing, evaluators that run them against
a common dataset model, and reporting helpers for audits and dataset
comparisons.
"""

from importlib import metadata as _metadata

from .datamodel import (
    MISSING,
    ColumnSpec,
    DataModelError,
    Dataset,
    SignalBlock,
    take_records,
)
from .harness import PTBXL_PROFILE, load_ptbxl, run_harness, write_demo_root
from .registry import (
    ApplicabilityError,
    EvaluationError,
    EvaluatorUnavailable,
    MetricCard,
    MetricResult,
    PrerequisiteError,
    RegistryError,
    all_cards,
    card,
    evaluate,
    filter_cards,
    render_card,
    resolve_id,
)
from .report import (
    DataLoadError,
    build_report,
    load_dataset,
    read_descriptor,
    render_report_markdown,
)
from .selection import (
    DecisionTree,
    SelectionError,
    SelectionResult,
    TreeFormatError,
    builtin_trees,
    load_tree,
    rationale_document,
    select_all,
    traverse,
)

try:
    __version__ = _metadata.version("artifact")
except _metadata.PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"

__all__ = [
    "MISSING",
    "ColumnSpec",
    "DataModelError",
    "Dataset",
    "SignalBlock",
    "take_records",
    "PTBXL_PROFILE",
    "load_ptbxl",
    "run_harness",
    "write_demo_root",
    "ApplicabilityError",
    "EvaluationError",
    "EvaluatorUnavailable",
    "MetricCard",
    "MetricResult",
    "PrerequisiteError",
    "RegistryError",
    "all_cards",
    "card",
    "evaluate",
    "filter_cards",
    "render_card",
    "resolve_id",
    "DataLoadError",
    "build_report",
    "load_dataset",
    "read_descriptor",
    "render_report_markdown",
    "DecisionTree",
    "SelectionError",
    "SelectionResult",
    "TreeFormatError",
    "builtin_trees",
    "load_tree",
    "rationale_document",
    "select_all",
    "traverse",
    "__version__",
]

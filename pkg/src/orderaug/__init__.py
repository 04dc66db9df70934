"""Order-centric augmentation for premise/conclusion reasoning datasets.

The library turns a corpus of logic problems (premises, conclusion,
label, optional step-by-step solution) into order-augmented training
data: premise shuffles targeted at Kendall-tau bins, dependency-safe
reorderings of solution steps drawn from the linear extensions of the
step DAG, and the random-reorder baseline. A three-stage LLM pipeline
generates solutions and their dependency structure for corpora that lack
them, and reporting utilities summarize tau/TFI distributions.
"""

from .errors import IoError, OrderAugError
from .fol import (
    Connective,
    Formula,
    Not,
    ParseError,
    Predicate,
    Quantified,
    Term,
    parse_fol,
    render_fol,
    validate_fol_fields,
)
from .ingest import (
    DatasetFile,
    DatasetRecord,
    TrainingRecord,
    emit_dataset,
    emit_training_records,
    parse_dataset,
    record_from_json,
    record_to_json,
    record_violations,
)
from .model import (
    BUILTIN_LABEL_SETS,
    LINEAGES,
    Instance,
    LabelSet,
    Permutation,
    Premise,
    Solution,
    Step,
    Violation,
    validate_instance,
    validate_solution,
)
from .permute import (
    BUILTIN_BINS,
    ConditionVariant,
    TauBin,
    apply_permutation,
    inversion_count,
    kendall_tau,
    kendall_tau_exact,
    sample_permutation_in_bin,
    sample_random_permutation,
    shuffle_premises,
    shuffle_test_set,
)
from .pipeline import (
    EndpointConfig,
    FileMockEndpoint,
    HttpEndpoint,
    PipelineResult,
    RetryPolicy,
    convert_to_fol,
    extract_dependencies,
    generate_solution,
    parse_dependency_listing,
    prompt_key,
    read_journal,
    run_pipeline,
)
from .prompts import EXAMPLE_FOL_STRINGS, PromptTemplate
from .report import RunManifest, collect_stats, format_stats_table, summarize
from .rng import substream
from .stepdag import (
    DepDag,
    DrawnExtension,
    ExtensionSet,
    TfiReport,
    build_dag,
    count_linear_extensions,
    enumerate_linear_extensions,
    random_step_shuffle,
    remap_premise_refs,
    reorder_solution,
    rewrite_numbered_refs,
    sample_extension,
    tfi,
    tfi_exact,
    tfi_report,
)
from .version import __version__

__all__ = [
    "__version__",
    "OrderAugError",
    "IoError",
    # model
    "Premise",
    "LabelSet",
    "BUILTIN_LABEL_SETS",
    "LINEAGES",
    "Instance",
    "Step",
    "Solution",
    "Permutation",
    "Violation",
    "validate_instance",
    "validate_solution",
    # permute
    "TauBin",
    "BUILTIN_BINS",
    "ConditionVariant",
    "inversion_count",
    "kendall_tau",
    "kendall_tau_exact",
    "sample_random_permutation",
    "sample_permutation_in_bin",
    "apply_permutation",
    "shuffle_premises",
    "shuffle_test_set",
    # stepdag
    "DepDag",
    "ExtensionSet",
    "DrawnExtension",
    "TfiReport",
    "build_dag",
    "enumerate_linear_extensions",
    "count_linear_extensions",
    "sample_extension",
    "tfi",
    "tfi_exact",
    "tfi_report",
    "reorder_solution",
    "random_step_shuffle",
    "remap_premise_refs",
    "rewrite_numbered_refs",
    # fol
    "Term",
    "Predicate",
    "Not",
    "Connective",
    "Quantified",
    "Formula",
    "ParseError",
    "parse_fol",
    "render_fol",
    "validate_fol_fields",
    # ingest
    "DatasetFile",
    "DatasetRecord",
    "TrainingRecord",
    "parse_dataset",
    "emit_dataset",
    "emit_training_records",
    "record_to_json",
    "record_from_json",
    "record_violations",
    # prompts
    "PromptTemplate",
    "EXAMPLE_FOL_STRINGS",
    # pipeline
    "EndpointConfig",
    "RetryPolicy",
    "HttpEndpoint",
    "FileMockEndpoint",
    "prompt_key",
    "convert_to_fol",
    "generate_solution",
    "extract_dependencies",
    "parse_dependency_listing",
    "run_pipeline",
    "read_journal",
    "PipelineResult",
    # report
    "RunManifest",
    "collect_stats",
    "summarize",
    "format_stats_table",
    # rng
    "substream",
]

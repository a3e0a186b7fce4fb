"""taxunify: a workbench for unifying classification schemes.

Catalog previous classification schemes, record the mapping relation into a
unified scheme, compute the generality metrics (laconicity, lucidity) and
appropriateness metrics (completeness, soundness) with refinement advice,
and evaluate classification user studies (Krippendorff's alpha, confusion
metrics against a gold standard, SUS usability scores).
"""

from .canonical import canonical_json_bytes, parse_fraction, render_decimal
from .catalog import (
    Catalog,
    CatalogEntry,
    CollectionSubtag,
    CollectionType,
    Project,
    StatsTable,
    Workspace,
    catalog_stats,
    load_annotations,
    load_catalog,
    load_gold,
    load_project,
    load_scheme,
    load_sus,
    normalize_doi,
    save_annotations,
    save_catalog,
    save_gold,
    save_project,
    save_scheme,
)
from .errors import (
    DuplicateDoiError,
    EmptyPreviousSetError,
    EmptySchemeError,
    EmptyUnifiedError,
    InsufficientDataError,
    LabelOutsideAlphabetError,
    MetricDomainError,
    OutOfRangeItemError,
    ParseError,
    ReferentialViolationError,
    SchemaVersionError,
    TaxunifyError,
    UnknownFieldError,
    UnknownUnitError,
)
from .metrics import (
    DEFAULT_THRESHOLDS,
    Advice,
    MetricReport,
    MetricValue,
    PreviousNodeResult,
    SchemeFanOut,
    ThresholdResult,
    UnifiedNodeResult,
    completeness,
    laconicity,
    lucidity,
    metric_report,
    resolve_thresholds,
    soundness,
)
from .model import (
    ClassificationScheme,
    ClassNode,
    MappingPair,
    MappingSet,
    MetaResearchArea,
    NodeKind,
    SchemeRole,
    ValidationOutcome,
    Violation,
    validate_mapping,
    validate_project,
    validate_scheme,
)
from .study import (
    AlphaResult,
    AnnotationMatrix,
    ClassScores,
    ConfusionReport,
    GoldStandard,
    StudyCorrectness,
    SusBatch,
    SusResponse,
    correctness,
    krippendorff_alpha,
    majority_vote,
    study_correctness,
    sus_batch,
    sus_score,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

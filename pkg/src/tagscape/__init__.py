"""Visual analytics and pairwise tag-vector similarity for annotated
literary corpora: corpus model, chart summaries, DTW/FastDTW alignment
scoring, a ranking-evaluation harness, and an HTTP service over it all."""

from .analytics import (
    GanttLane,
    StackedSeries,
    SunburstNode,
    gallery,
    gantt,
    stacked_area,
    sunburst,
)
from .dtw import AlignmentResult, dtw_exact, fastdtw
from .evaluation import (
    EvaluationReport,
    RaterResponse,
    Trial,
    build_trials,
    record_response,
    score_responses,
)
from .model import (
    Annotation,
    Project,
    Tag,
    Tagset,
    Text,
    Violation,
    load_project,
    save_project,
    validate_project,
)
from .remote import (
    RemoteCredentials,
    RemoteProjectDescriptor,
    import_project,
    list_remote_projects,
    update_project,
)
from .similarity import (
    BinaryTagVector,
    SimilarityCell,
    SimilarityMatrix,
    TamScore,
    pair_similarity,
    rank_similar,
    similarity_matrix,
    tam,
    vectorize,
    weight,
)

__version__ = "0.1.0"

"""Archive data model, IO, cleansing, timeline partitioning, and synthesis."""

from .archive import (
    ArchiveFormatError,
    LoadReport,
    dataset_to_lines,
    load_dataset,
    load_labels,
    save_dataset,
    save_labels,
)
from .cleanse import CleanseReport, cleanse
from .periods import GRANULARITIES, PartitionReport, PeriodSpec, partition_periods
from .synth import INFLUENCER_LEVEL, ORDINARY_LEVEL, EngagementLevel, SynthConfig, synthesize
from .types import (
    INFLUENCER,
    LABELS,
    NON_INFLUENCER,
    Dataset,
    GroundTruthLabels,
    PeriodSlice,
    ReplyRecord,
    TweetRecord,
    UserProfile,
    format_timestamp,
    parse_timestamp,
)

__all__ = [
    "ArchiveFormatError",
    "CleanseReport",
    "Dataset",
    "EngagementLevel",
    "GRANULARITIES",
    "GroundTruthLabels",
    "INFLUENCER",
    "INFLUENCER_LEVEL",
    "LABELS",
    "LoadReport",
    "NON_INFLUENCER",
    "ORDINARY_LEVEL",
    "PartitionReport",
    "PeriodSlice",
    "PeriodSpec",
    "ReplyRecord",
    "SynthConfig",
    "TweetRecord",
    "UserProfile",
    "cleanse",
    "dataset_to_lines",
    "format_timestamp",
    "load_dataset",
    "load_labels",
    "parse_timestamp",
    "partition_periods",
    "save_dataset",
    "save_labels",
    "synthesize",
]

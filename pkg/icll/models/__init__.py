from icll.models.clustering import (
    CutParameters,
    DistanceMatrix,
    FlatClustering,
    LinkageTree,
    MergeRecord,
)
from icll.models.dataset import Dataset, ImbalanceSummary
from icll.models.evaluation import ComparisonSummary, FoldPlan, RopeOutcome, ScoreTable
from icll.models.icll import IcllConfig, IcllModel, IcllVariant
from icll.models.layering import (
    DegeneracyKind,
    GroupAssignment,
    GroupKind,
    LayerTargets,
)
from icll.models.learner import ForestConfig, LearnerConfig, LearnerKind, LogisticConfig
from icll.models.method import ComparisonMethod
from icll.models.resampling import ResampleMethod, ResamplePlan

__all__ = [
    "ComparisonMethod",
    "ComparisonSummary",
    "CutParameters",
    "Dataset",
    "DegeneracyKind",
    "DistanceMatrix",
    "FlatClustering",
    "FoldPlan",
    "ForestConfig",
    "GroupAssignment",
    "GroupKind",
    "IcllConfig",
    "IcllModel",
    "IcllVariant",
    "ImbalanceSummary",
    "LayerTargets",
    "LearnerConfig",
    "LearnerKind",
    "LinkageTree",
    "LogisticConfig",
    "MergeRecord",
    "ResampleMethod",
    "ResamplePlan",
    "RopeOutcome",
    "ScoreTable",
]

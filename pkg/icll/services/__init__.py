from icll.services.benchmark_service import BenchmarkService
from icll.services.cluster_service import ClusterService
from icll.services.dataset_service import DatasetService
from icll.services.evaluation_service import EvaluationService
from icll.services.icll_service import IcllService
from icll.services.layering_service import LayeringService
from icll.services.learner_service import LearnerService
from icll.services.method_service import FittedMethod, MethodService
from icll.services.resampling_service import ResamplingService
from icll.services.storage_service import StorageService

__all__ = [
    "BenchmarkService",
    "ClusterService",
    "DatasetService",
    "EvaluationService",
    "FittedMethod",
    "IcllService",
    "LayeringService",
    "LearnerService",
    "MethodService",
    "ResamplingService",
    "StorageService",
]

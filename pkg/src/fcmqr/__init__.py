"""Gene selection by fuzzy clustering, rough-set reducts and correlation scoring."""

__version__ = "0.1.0"

from .dataset import ExpressionDataset, load_csv, subset_features
from .pipeline import PipelineConfig, run

__all__ = ["ExpressionDataset", "PipelineConfig", "load_csv", "run", "subset_features", "__version__"]

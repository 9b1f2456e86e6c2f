"""Labeled stream sources.

synthetic: piecewise-shifted regression stream
known_quantile: Gaussian stream with exact conditional quantiles
classification: drifting Gaussian-mixture classification stream
images: desk-scale image stream with noise-level shifts
csv_stream: CSV ingestion with time augmentation and warm-up normalization
"""
from .classification import ClassificationConfig, classification_stream
from .csv_stream import CsvStreamConfig, LabeledStream, StreamFormatError, csv_ingest, time_features
from .images import ImageStreamConfig, ImageStreamState, image_stream, image_stream_next
from .known_quantile import KnownQuantileConfig, known_quantile_stream, oracle_model
from .standardize import StandardizedStream, fit_warmup_scaler
from .synthetic import SyntheticConfig, SyntheticState, synthetic_next, synthetic_response, synthetic_stream
from .trace_io import export_trace, import_trace

__all__ = ["SyntheticConfig", "SyntheticState", "synthetic_next", "synthetic_response", "synthetic_stream",
           "KnownQuantileConfig", "known_quantile_stream", "oracle_model", "ClassificationConfig",
           "classification_stream", "ImageStreamConfig", "ImageStreamState", "image_stream", "image_stream_next",
           "CsvStreamConfig", "LabeledStream", "StreamFormatError", "csv_ingest", "time_features",
           "StandardizedStream", "fit_warmup_scaler", "export_trace", "import_trace"]

"""Labeled streams read from CSV files.

Rows are consumed in file order. Features and target are standardized with
the statistics of the first `warmup` rows only, and the timestamp can be
expanded into day, month, year, hour, minute and day-of-week features.
"""
import logging
from collections import namedtuple

import numpy as np
import pandas as pd

from .standardize import fit_warmup_scaler

logger = logging.getLogger(__name__)

TIME_FEATURES = ("day", "month", "year", "hour", "minute", "day_of_week")

CsvStreamConfig = namedtuple("CsvStreamConfig", [
    "path", "timestamp_column", "target_column", "feature_columns", "warmup", "augment_time", "timestamp_format",
])
CsvStreamConfig.__new__.__defaults__ = (None, "target", None, 8000, True, "iso")


class StreamFormatError(ValueError):
    """The CSV file cannot be turned into a labeled stream."""


class LabeledStream:
    """Materialized (features, label, group) samples plus the normalization metadata."""

    def __init__(self, features, labels, groups, feature_names, feature_scaler, label_scaler):
        self.features = features
        self.labels = labels
        self.groups = groups
        self.feature_names = feature_names
        self.feature_scaler = feature_scaler
        self.label_scaler = label_scaler

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        for index in range(len(self.labels)):
            yield self.features[index], float(self.labels[index]), self.groups[index]


def _parse_timestamps(column, timestamp_format):
    if timestamp_format == "epoch":
        return pd.to_datetime(pd.to_numeric(column, errors="raise"), unit="s")
    if timestamp_format == "iso":
        return pd.to_datetime(column, errors="raise", format="ISO8601")
    raise StreamFormatError(f"Unknown timestamp format [{timestamp_format}], expected iso or epoch")


def time_features(timestamps):
    """Calendar features of a datetime series; Monday is day_of_week 0."""
    return pd.DataFrame({
        "day": timestamps.dt.day,
        "month": timestamps.dt.month,
        "year": timestamps.dt.year,
        "hour": timestamps.dt.hour,
        "minute": timestamps.dt.minute,
        "day_of_week": timestamps.dt.dayofweek,
    })


def _numeric_column(frame, column, lines):
    """Parse one column; `lines` holds the file line of every row for the diagnostics."""
    values = pd.to_numeric(frame[column], errors="coerce")
    bad = values.isna() & frame[column].notna()
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise StreamFormatError(
            f"Row {lines[row]}, column [{column}]: cannot parse {frame[column].iloc[row]!r} as a number"
        )
    return values


def csv_ingest(config):
    """Read, validate, augment and standardize a CSV stream."""
    try:
        frame = pd.read_csv(config.path, sep=",", dtype=str, keep_default_na=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as error:
        raise StreamFormatError(f"Cannot parse {config.path}: {error}") from error

    feature_columns = list(config.feature_columns) if config.feature_columns else [
        column for column in frame.columns if column not in (config.target_column, config.timestamp_column)
    ]
    required = [config.target_column] + feature_columns
    if config.timestamp_column:
        required.append(config.timestamp_column)

    for column in required:
        if column not in frame.columns:
            raise StreamFormatError(f"Column [{column}] is missing from {config.path} (header: {list(frame.columns)})")

    missing = frame[required].isna()
    for row in np.flatnonzero(missing.any(axis=1).to_numpy()):
        columns = [column for column in required if missing.iloc[row][column]]
        logger.warning("Row %d rejected: missing value in %s", row + 2, columns)
    kept = ~missing.any(axis=1)
    # header is line 1
    lines = (np.flatnonzero(kept.to_numpy()) + 2).tolist()
    frame = frame[kept].reset_index(drop=True)

    numeric = pd.DataFrame({column: _numeric_column(frame, column, lines) for column in feature_columns})
    target = _numeric_column(frame, config.target_column, lines).to_numpy(dtype=float)
    groups = [None] * len(frame)

    if config.timestamp_column:
        try:
            timestamps = _parse_timestamps(frame[config.timestamp_column], config.timestamp_format)
        except (ValueError, TypeError) as error:
            raise StreamFormatError(f"Column [{config.timestamp_column}]: {error}") from error

        calendar = time_features(timestamps)
        groups = calendar["day_of_week"].tolist()
        if config.augment_time:
            numeric = pd.concat([numeric, calendar], axis=1)

    if config.warmup > len(frame):
        raise StreamFormatError(f"The warm-up size {config.warmup} exceeds the {len(frame)} usable rows")

    feature_names = list(numeric.columns)
    features = numeric.to_numpy(dtype=float)

    feature_scaler = fit_warmup_scaler(features[:config.warmup], names=feature_names)
    label_scaler = fit_warmup_scaler(target[:config.warmup], names=[config.target_column])

    features = feature_scaler.transform(features)
    labels = label_scaler.transform(target[:, None])[:, 0]

    return LabeledStream(features, labels, groups, feature_names, feature_scaler, label_scaler)

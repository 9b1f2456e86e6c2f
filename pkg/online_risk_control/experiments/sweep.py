"""Grid sweep over one dotted config parameter.

Every grid value runs a full experiment in its own output directory; values
are ranked by the mean validation-window pinball loss of the calibrated
interval endpoints, ties going to the smaller value.
"""
import json
import logging
import math
import os
from collections import namedtuple

import pandas as pd

from .config import ConfigError, parse_config, set_dotted
from .runner import run_experiment

logger = logging.getLogger(__name__)

SweepResult = namedtuple("SweepResult", ["ranking", "selected", "passed"])


def _mean_validation_loss(result):
    values = [trial.validation_pinball_loss for trial in result.trials if trial.validation_pinball_loss is not None]
    if not values:
        return math.nan
    return sum(values) / len(values)


def rank_grid(scores):
    """Sort (value, score) pairs by score then value; NaN scores rank last."""
    def key(entry):
        value, score = entry
        return (math.isnan(score), score if not math.isnan(score) else 0.0, value)

    return sorted(scores, key=key)


def sweep(document, parameter, grid, workers=1, output=None):
    """Run the experiment once per grid value and rank the values.

    Parameters
    ----------
    document : dict
        Parsed (not yet validated) experiment configuration.
    parameter : str
        Dotted config field to vary, e.g. controller.gamma.
    grid : sequence
        Values to try.

    Returns
    -------
    SweepResult
        ranking table (pandas DataFrame), selected value and whether every certificate passed.

    """
    grid = list(grid)
    if not grid:
        raise ConfigError(parameter, "the sweep grid is empty")

    base = output or parse_config(document).output
    os.makedirs(base, exist_ok=True)

    rows = []
    passed = True
    for value in grid:
        config = parse_config(set_dotted(document, parameter, value))
        result = run_experiment(config, workers, output=os.path.join(base, f"{parameter}={value}"))
        passed = passed and result.passed

        summary_path = os.path.join(result.output, "summary.json")
        with open(summary_path, "r") as file:
            metrics = json.load(file)["metrics"]

        rows.append({
            "value": value,
            "validation_pinball_loss": _mean_validation_loss(result),
            "coverage": metrics["coverage"]["mean"],
            "msl": metrics["msl"]["mean"],
            "mean_length": metrics["mean_length"]["mean"],
            "certificates_passed": result.passed,
        })

    order = rank_grid([(row["value"], row["validation_pinball_loss"]) for row in rows])
    by_value = {row["value"]: row for row in rows}
    ranking = pd.DataFrame([by_value[value] for value, _ in order])
    ranking.insert(0, "rank", range(1, len(ranking) + 1))
    selected = order[0][0]

    ranking.to_csv(os.path.join(base, "ranking.csv"), index=False)
    with open(os.path.join(base, "sweep.json"), "w") as file:
        json.dump({"parameter": parameter, "grid": grid, "selected": selected}, file, indent=2)

    logger.info("sweep over %s selected %s (validation pinball loss %.6g)", parameter, selected,
                by_value[selected]["validation_pinball_loss"])
    return SweepResult(ranking, selected, passed)

"""Experiment runner: wires stream, model, constructor, losses, stretch and controller for each trial.

Output layout under config.output:

    trial_000/trace.csv      one row per calibrated step
    trial_000/report.json    evaluation report and certificates of the trial
    per_trial.csv            flat metrics, one row per trial
    summary.json             mean and std of every metric across trials
    certificate.txt          PASS/FAIL of every bound check of every trial
"""
import json
import logging
import math
import os
from collections import namedtuple
from itertools import chain, islice

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from ..algorithms import (MultiRiskController, RollingRiskController, certificate_failed, check_risk_bound,
                          check_theta_bounds, check_two_sided_risk_bound, check_upper_risk_bound)
from ..algorithms.calibration_with_cal import aci_risk_spec, run_calibration_with_cal
from ..algorithms.rolling_risk_control import unpack_sample
from ..algorithms.stretching import ADAPTIVE_KINDS, build_stretch, mean_absolute_change
from ..constructors import (ClassCumulativeConstructor, ClassThresholdConstructor, CQRConstructor, ImageConstructor,
                            QuantileScaleConstructor, build_heuristic)
from ..evaluation.metrics import endpoint_pinball_loss, evaluate_trace, report_to_dict
from ..losses import LossSpec, build_loss
from ..models import ConstantModel, LinearPinballModel, OnlineSoftmaxClassifier
from ..streams import (ClassificationConfig, CsvStreamConfig, ImageStreamConfig, ImageStreamState,
                       KnownQuantileConfig, StandardizedStream, SyntheticConfig, classification_stream, csv_ingest,
                       export_trace, image_stream, known_quantile_stream, oracle_model, synthetic_stream)
from ..structures import MultiRiskSpec, RiskSpec
from ..utils import trial_generator

logger = logging.getLogger(__name__)

# Child seed streams of one trial
STREAM_KEY = 0
MODEL_KEY = 1

SUMMARY_METRICS = ("coverage", "mc_risk", "msl", "delta_coverage_pct", "mean_length", "full_space_rate",
                   "pinball_loss", "validation_pinball_loss")

TrialResult = namedtuple("TrialResult", ["trial", "seed", "report", "certificates", "validation_pinball_loss"])
ExperimentResult = namedtuple("ExperimentResult", ["output", "trials", "passed", "complete"])


def derived_seed(seed, trial, key):
    return int(trial_generator(seed, trial, key).integers(2 ** 31 - 1))


class TrialStream:
    """The labeled samples of one trial plus what the runner needs to know about them.

    Attributes:
        samples (iterator): (x, y[, group]) items in stream order
        mask (np.ndarray): valid-pixel mask of image streams, else None
        warmup_labels (callable): labels of the standardization window, once known
    """

    def __init__(self, samples, mask=None, warmup_labels=None):
        self.samples = iter(samples)
        self.mask = mask
        self._warmup_labels = warmup_labels or (lambda: None)

    def warmup_labels(self):
        return self._warmup_labels()


def build_stream(stream_config, seed):
    params = stream_config.params
    length = stream_config.length

    if stream_config.kind == "csv":
        labeled = csv_ingest(CsvStreamConfig(warmup=stream_config.warmup, **params))
        samples = labeled if length is None else islice(labeled, length)
        return TrialStream(samples, warmup_labels=lambda: labeled.labels[:stream_config.warmup])

    if stream_config.kind == "image":
        image_config = ImageStreamConfig(seed=seed, length=length, **params)
        state = ImageStreamState(image_config)
        return TrialStream(image_stream(image_config, state), mask=state.valid_mask)

    if stream_config.kind == "synthetic":
        samples = synthetic_stream(SyntheticConfig(seed=seed, length=length, **params))
    elif stream_config.kind == "known_quantile":
        samples = known_quantile_stream(KnownQuantileConfig(seed=seed, length=length, **params))
    else:
        samples = classification_stream(ClassificationConfig(seed=seed, length=length, **params))

    if not stream_config.warmup:
        return TrialStream(samples)

    standardized = StandardizedStream(samples, stream_config.warmup, stream_config.standardize_label)
    return TrialStream(standardized, warmup_labels=lambda: standardized.warmup_labels)


def build_model(config, seed):
    model_config = config.model
    alpha = config.constructor.alpha

    if model_config.kind == "linear_pinball":
        taus = model_config.taus or (alpha / 2.0, 1.0 - alpha / 2.0)
        return LinearPinballModel(taus, model_config.learning_rate, model_config.steps_per_update,
                                  fit_intercept=model_config.params.get("fit_intercept", True))
    if model_config.kind == "oracle":
        return oracle_model()
    if model_config.kind == "constant":
        return ConstantModel(model_config.params["quantiles"])
    if model_config.kind == "classifier":
        num_classes = config.stream.params.get("num_classes", ClassificationConfig().num_classes)
        return OnlineSoftmaxClassifier(num_classes, model_config.learning_rate, seed=seed)
    return None


def build_constructor(constructor_config):
    kind = constructor_config.kind

    if kind == "cqr":
        return CQRConstructor(constructor_config.alpha)
    if kind == "quantile_scale":
        return QuantileScaleConstructor()
    if kind == "class_threshold":
        return ClassThresholdConstructor()
    if kind == "class_cumulative":
        return ClassCumulativeConstructor()
    return ImageConstructor(build_heuristic(constructor_config.heuristic, **constructor_config.params))


def build_losses(loss_configs, mask=None):
    return [build_loss(LossSpec(loss.kind, loss.B, loss.mc_cap, loss.center_region, loss.center_threshold), mask)
            for loss in loss_configs]


def build_stretch_state(stretch_config, warmup_labels):
    """The stretch of the run; missing lambda clips default to +-(mean absolute change of the warm-up labels)."""
    beta_low, beta_high = stretch_config.beta_low, stretch_config.beta_high

    if stretch_config.kind in ADAPTIVE_KINDS and (beta_low is None or beta_high is None):
        scale = mean_absolute_change(warmup_labels)
        logger.info("lambda clipped to +-%.4f, the mean absolute change of %d warm-up labels", scale,
                    len(warmup_labels))
        beta_low = -scale if beta_low is None else beta_low
        beta_high = scale if beta_high is None else beta_high

    return build_stretch(stretch_config.kind, stretch_config.beta_score, stretch_config.beta_loss,
                         beta_low or 0.0, beta_high or 0.0)


def build_spec(config):
    controller, losses = config.controller, config.losses

    if controller.kind == "baseline_aci":
        return aci_risk_spec(losses[0].r, controller.gamma)

    if controller.kind == "multi":
        return MultiRiskSpec([loss.r for loss in losses], controller.gamma, controller.m, controller.M,
                             [loss.B for loss in losses], controller.theta_init, controller.aggregation,
                             controller.two_sided)

    return RiskSpec(losses[0].r, controller.gamma, controller.m, controller.M, losses[0].B, controller.theta_init)


def pretrain(samples, model, constructor, steps):
    """Feed the first `steps` samples to the model and constructor; returns their labels."""
    labels = []
    for sample in islice(samples, steps):
        x, y, _ = unpack_sample(sample)
        constructor.update(x, y)
        if model is not None:
            model.update(x, y)
        labels.append(y)

    if len(labels) < steps:
        raise ValueError(f"The stream ended after {len(labels)} of {steps} pretraining samples")
    return labels


def _peek(samples):
    """Start the iterator (so lazy warm-up statistics exist) without losing its first item."""
    try:
        first = next(samples)
    except StopIteration:
        return iter(())
    return chain([first], samples)


def run_controller(config, stream, model, constructor, losses, spec, stretch, start_step):
    controller = config.controller

    if controller.kind == "baseline_aci":
        taus = (config.constructor.alpha / 2.0, 1.0 - config.constructor.alpha / 2.0)
        return run_calibration_with_cal(stream, model, spec.r, controller.gamma, controller.window_size,
                                        controller.warmup, controller.order, start_step, taus=taus)

    if controller.kind == "multi":
        runner = MultiRiskController(model, constructor, losses, spec, stretch, start_step=start_step)
    else:
        runner = RollingRiskController(model, constructor, losses[0], spec, stretch, start_step=start_step)

    for sample in stream:
        x, y, group = unpack_sample(sample)
        runner.construct(x)
        runner.observe(y, group)

    return runner.trace


def trial_certificates(config, trace, spec, losses):
    """Bound checks that apply to the controller of the run, recomputed from the trace."""
    controller = config.controller
    guaranteed = all(loss.contract_holds(risk.r) for loss, risk in zip(losses, config.losses))

    if controller.kind == "multi":
        certificates = [check_theta_bounds(trace, spec, guaranteed, two_sided=spec.two_sided),
                        check_upper_risk_bound(trace, spec, guaranteed)]
        if spec.two_sided:
            certificates.append(check_two_sided_risk_bound(trace, spec, guaranteed))
        return certificates

    return [check_theta_bounds(trace, spec, guaranteed), check_risk_bound(trace, spec, guaranteed)]


def validation_pinball_loss(trace, window, alpha):
    selected = trace.window(*window)
    if not selected.any():
        return math.nan

    frame = trace.to_frame()[selected]
    return endpoint_pinball_loss(frame["label"], frame["set_lo"], frame["set_hi"], alpha)


def _certificate_entry(certificate):
    entry = certificate._asdict()
    entry["worst_slack"] = entry["worst_slack"] if math.isfinite(entry["worst_slack"]) else None
    entry["failed"] = certificate_failed(certificate)
    return entry


def run_trial(config, trial, output):
    """Run one seeded trial, write its trace and report, and return its TrialResult."""
    seed = derived_seed(config.seed, trial, STREAM_KEY)
    logger.debug("trial %d of %s started (stream seed %d)", trial, config.name, seed)

    stream = build_stream(config.stream, seed)
    model = build_model(config, derived_seed(config.seed, trial, MODEL_KEY))
    constructor = build_constructor(config.constructor)
    losses = build_losses(config.losses, stream.mask)
    spec = build_spec(config)

    samples = _peek(stream.samples)
    pretrain_labels = pretrain(samples, model, constructor, config.model.pretrain_steps)

    warmup_labels = stream.warmup_labels()
    if warmup_labels is None:
        warmup_labels = pretrain_labels
    stretch = build_stretch_state(config.stretch, warmup_labels)

    trace = run_controller(config, samples, model, constructor, losses, spec, stretch,
                           start_step=config.model.pretrain_steps + 1)

    certificates = trial_certificates(config, trace, spec, losses)
    alpha = config.evaluation.alpha
    report = evaluate_trace(trace, config.evaluation.window, alpha)
    validation = validation_pinball_loss(trace, config.evaluation.validation_window, alpha)

    trial_dir = os.path.join(output, f"trial_{trial:03d}")
    os.makedirs(trial_dir, exist_ok=True)
    export_trace(trace, os.path.join(trial_dir, "trace.csv"))

    entries = [_certificate_entry(certificate) for certificate in certificates]
    result = TrialResult(trial, seed, report_to_dict(report), entries, None if math.isnan(validation) else validation)
    with open(os.path.join(trial_dir, "report.json"), "w") as file:
        json.dump(result._asdict(), file, indent=2)

    return result


def _flat_row(result):
    report = result.report
    row = {"trial": result.trial, "seed": result.seed}
    for metric in ("coverage", "mc_risk", "msl", "mean_length", "full_space_rate", "pinball_loss"):
        row[metric] = report[metric]

    delta = report["delta_coverage"]
    row["delta_coverage_pct"] = None if delta is None else 100.0 * delta
    row["validation_pinball_loss"] = result.validation_pinball_loss

    for index, risk in enumerate(report["risks"]):
        row[f"risk_{index + 1}"] = risk
    row["certificates_passed"] = not any(entry["failed"] for entry in result.certificates)
    return row


def summarize(config, results, complete=True):
    """Mean and std of every metric across the finished trials."""
    frame = pd.DataFrame([_flat_row(result) for result in results])
    summary = {"name": config.name, "trials": len(results), "requested_trials": config.trials, "complete": complete,
               "passed": bool(frame["certificates_passed"].all()) if len(frame) else True, "metrics": {}}

    for column in [c for c in frame.columns if c in SUMMARY_METRICS or c.startswith("risk_")]:
        values = pd.to_numeric(frame[column], errors="coerce").to_numpy(dtype=float)
        values = values[np.isfinite(values)]
        summary["metrics"][column] = {
            "mean": float(values.mean()) if values.size else None,
            "std": float(values.std()) if values.size else None,
        }

    return frame, summary


def format_certificates(results):
    lines = []
    for result in results:
        lines.append(f"trial {result.trial} (seed {result.seed})")
        for entry in result.certificates:
            verdict = "PASS" if entry["passed"] else "FAIL"
            note = "" if entry["guaranteed"] else " (not guaranteed: the loss contract does not hold)"
            slack = "none" if entry["worst_slack"] is None else f"{entry['worst_slack']:.6g}"
            lines.append(f"  {entry['name']:<22} {verdict}  worst slack {slack}{note}")
    return "\n".join(lines) + "\n"


def write_outputs(config, results, output, complete=True):
    frame, summary = summarize(config, results, complete)
    frame.to_csv(os.path.join(output, "per_trial.csv"), index=False)

    with open(os.path.join(output, "summary.json"), "w") as file:
        json.dump(summary, file, indent=2)
    with open(os.path.join(output, "certificate.txt"), "w") as file:
        file.write(format_certificates(results))

    return summary


def run_experiment(config, workers=1, output=None):
    """Run every trial of an experiment and write its artifacts; returns an ExperimentResult.

    Results already finished are flushed to disk when the run is interrupted.
    """
    output = output or config.output
    os.makedirs(output, exist_ok=True)

    results = []
    complete = False
    try:
        jobs = Parallel(n_jobs=workers, return_as="generator")(
            delayed(run_trial)(config, trial, output) for trial in range(config.trials)
        )
        # workers log nowhere; progress is reported here, in trial order
        for result in jobs:
            results.append(result)
            logger.info("trial %d finished: coverage %s, certificates %s", result.trial, result.report["coverage"],
                        "FAIL" if any(entry["failed"] for entry in result.certificates) else "PASS")
        complete = True
    finally:
        summary = write_outputs(config, results, output, complete)
        if not complete:
            logger.warning("interrupted after %d of %d trials; partial results written to %s", len(results),
                           config.trials, output)

    verdict = "PASS" if summary["passed"] else "FAIL"
    logger.info("%s: %d trials, certificates %s (see %s)", config.name, len(results), verdict,
                os.path.join(output, "certificate.txt"))
    return ExperimentResult(output, results, summary["passed"], complete)

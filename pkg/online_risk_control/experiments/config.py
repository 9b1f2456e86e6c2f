"""Experiment configuration: YAML documents validated into namedtuples.

Every section is checked before anything runs; a failure raises ConfigError
naming the dotted path of the offending field (e.g. controller.gamma).
"""
import copy
import math
from collections import namedtuple

import yaml

from ..algorithms.calibration_with_cal import QUANTILE_ORDERS
from ..algorithms.stretching import ADAPTIVE_KINDS, STRETCH_KINDS
from ..constructors.images import HEURISTIC_KINDS
from ..losses import LOSS_KINDS
from ..streams import ClassificationConfig, CsvStreamConfig, ImageStreamConfig, KnownQuantileConfig, SyntheticConfig

SCHEMA_VERSION = 1

STREAM_KINDS = ("synthetic", "known_quantile", "classification", "image", "csv")
MODEL_KINDS = ("linear_pinball", "oracle", "constant", "classifier", "none")
CONSTRUCTOR_KINDS = ("cqr", "quantile_scale", "class_threshold", "class_cumulative", "image")
CONTROLLER_KINDS = ("single", "multi", "baseline_aci")

# Parameters a config may set on each stream; seed, length and warm-up are owned by the runner
STREAM_PARAMS = {
    kind: tuple(field for field in fields._fields if field not in ("seed", "length", "warmup"))
    for kind, fields in (("synthetic", SyntheticConfig), ("known_quantile", KnownQuantileConfig),
                         ("classification", ClassificationConfig), ("image", ImageStreamConfig),
                         ("csv", CsvStreamConfig))
}

# Model kinds each constructor can consume
CONSTRUCTOR_MODELS = {
    "cqr": ("linear_pinball", "oracle", "constant"),
    "quantile_scale": ("oracle",),
    "class_threshold": ("classifier",),
    "class_cumulative": ("classifier",),
    "image": ("none",),
}
# Constructors whose theta lives on the miscoverage scale, safeguarded by (-1, 0)
MISCOVERAGE_SCALE_KINDS = ("quantile_scale", "class_threshold", "class_cumulative")
SCALAR_LOSSES = ("binary", "mc")
IMAGE_LOSSES = ("image_miscoverage", "center_failure")

StreamConfig = namedtuple("StreamConfig", ["kind", "length", "warmup", "standardize_label", "params"])
ModelConfig = namedtuple("ModelConfig", ["kind", "taus", "learning_rate", "steps_per_update", "pretrain_steps",
                                         "params"])
ConstructorConfig = namedtuple("ConstructorConfig", ["kind", "alpha", "heuristic", "params"])
LossConfig = namedtuple("LossConfig", ["kind", "r", "B", "mc_cap", "center_region", "center_threshold"])
StretchConfig = namedtuple("StretchConfig", ["kind", "beta_score", "beta_loss", "beta_low", "beta_high"])
ControllerConfig = namedtuple("ControllerConfig", ["kind", "gamma", "m", "M", "theta_init", "aggregation",
                                                   "two_sided", "window_size", "warmup", "order"])
EvaluationConfig = namedtuple("EvaluationConfig", ["window", "validation_window", "alpha"])
ExperimentConfig = namedtuple("ExperimentConfig", ["schema_version", "name", "stream", "model", "constructor",
                                                   "losses", "stretch", "controller", "evaluation", "trials",
                                                   "seed", "output"])


class ConfigError(ValueError):
    """Invalid experiment configuration; `path` is the dotted name of the field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


def _join(path, key):
    return f"{path}.{key}" if path else key


def _section(document, name):
    section = document.get(name, {})
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigError(name, f"expected a mapping, got {type(section).__name__}")
    return section


def _reject_unknown(section, allowed, path):
    for key in section:
        if key not in allowed:
            raise ConfigError(_join(path, key), f"unknown field (allowed: {', '.join(allowed)})")


def _choice(section, key, choices, path, default=None):
    value = section.get(key, default)
    if value not in choices:
        raise ConfigError(_join(path, key), f"[{value}] is not one of {', '.join(map(str, choices))}")
    return value


def _number(section, key, path, default=None, lower=None, upper=None, strict=False, integer=False,
            optional=False):
    value = section.get(key, default)
    if value is None:
        if optional:
            return None
        raise ConfigError(_join(path, key), "is required")

    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(_join(path, key), f"expected a number, got {value!r}")
    if integer and float(value) != int(value):
        raise ConfigError(_join(path, key), f"expected an integer, got {value}")
    if not math.isfinite(value):
        raise ConfigError(_join(path, key), f"expected a finite number, got {value}")

    if lower is not None and (value <= lower if strict else value < lower):
        raise ConfigError(_join(path, key), f"should be {'>' if strict else '>='} {lower}, got {value}")
    if upper is not None and (value >= upper if strict else value > upper):
        raise ConfigError(_join(path, key), f"should be {'<' if strict else '<='} {upper}, got {value}")

    return int(value) if integer else float(value)


def _numbers(section, key, path, count, default=None, lower=None, strict=False):
    """A number or a list of `count` numbers; scalars stay scalars."""
    value = section.get(key, default)
    if isinstance(value, list):
        if len(value) != count:
            raise ConfigError(_join(path, key), f"expected {count} values (one per loss), got {len(value)}")
        return [_number({index: item}, index, _join(path, key), lower=lower, strict=strict)
                for index, item in enumerate(value)]
    return _number(section, key, path, default=default, lower=lower, strict=strict)


def _broadcast(value, count):
    return value if isinstance(value, list) else [value] * count


def _window(section, key, path, default):
    value = section.get(key, default)
    if value is None:
        return (None, None)
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(_join(path, key), f"expected [start, end], got {value!r}")

    start, end = value
    for bound in (start, end):
        if bound is not None and (isinstance(bound, bool) or not isinstance(bound, int) or bound < 1):
            raise ConfigError(_join(path, key), f"window bounds should be positive step numbers, got {value!r}")
    if start is not None and end is not None and start > end:
        raise ConfigError(_join(path, key), f"window start {start} is after its end {end}")
    return (start, end)


def _params(section, path):
    params = section.get("params", {}) or {}
    if not isinstance(params, dict):
        raise ConfigError(f"{path}.params", f"expected a mapping, got {type(params).__name__}")
    return dict(params)


def parse_stream(section):
    _reject_unknown(section, ("kind", "length", "warmup", "standardize_label", "params"), "stream")
    kind = _choice(section, "kind", STREAM_KINDS, "stream")
    length = _number(section, "length", "stream", lower=1, integer=True, optional=True)
    warmup = _number(section, "warmup", "stream", default=0, lower=0, integer=True)

    if length is None and kind != "csv":
        raise ConfigError("stream.length", f"is required for [{kind}] streams")
    if warmup == 1:
        raise ConfigError("stream.warmup", "a standardization window needs at least two samples")
    if length is not None and warmup > length:
        raise ConfigError("stream.warmup", f"warm-up {warmup} exceeds the stream length {length}")

    params = _params(section, "stream")
    _reject_unknown(params, STREAM_PARAMS[kind], "stream.params")
    if kind == "csv":
        if warmup < 2:
            raise ConfigError("stream.warmup", "csv streams need a warm-up window of at least two rows")
        for key in ("path", "target_column"):
            if not params.get(key):
                raise ConfigError(f"stream.params.{key}", "is required for csv streams")
        if params.get("timestamp_format", "iso") not in ("iso", "epoch"):
            raise ConfigError("stream.params.timestamp_format", "should be iso or epoch")

    return StreamConfig(kind, length, warmup, bool(section.get("standardize_label", True)), params)


def parse_model(section):
    _reject_unknown(section, ("kind", "taus", "learning_rate", "steps_per_update", "pretrain_steps", "params"),
                    "model")
    kind = _choice(section, "kind", MODEL_KINDS, "model")

    taus = section.get("taus")
    if taus is not None:
        if not isinstance(taus, list) or not taus:
            raise ConfigError("model.taus", f"expected a nonempty list of levels, got {taus!r}")
        taus = tuple(_number({"taus": tau}, "taus", "model", lower=0, upper=1, strict=True) for tau in taus)

    return ModelConfig(
        kind=kind,
        taus=taus,
        learning_rate=_number(section, "learning_rate", "model", default=0.01, lower=0),
        steps_per_update=_number(section, "steps_per_update", "model", default=1, lower=1, integer=True),
        pretrain_steps=_number(section, "pretrain_steps", "model", default=0, lower=0, integer=True),
        params=_params(section, "model"),
    )


def parse_constructor(section):
    _reject_unknown(section, ("kind", "alpha", "heuristic", "params"), "constructor")
    kind = _choice(section, "kind", CONSTRUCTOR_KINDS, "constructor")
    heuristic = _choice(section, "heuristic", HEURISTIC_KINDS, "constructor", default="previous_residuals")
    alpha = _number(section, "alpha", "constructor", default=0.1, lower=0, upper=1, strict=True)
    return ConstructorConfig(kind, alpha, heuristic, _params(section, "constructor"))


def parse_loss(section, path):
    if not isinstance(section, dict):
        raise ConfigError(path, f"expected a mapping, got {type(section).__name__}")
    _reject_unknown(section, LossConfig._fields, path)

    kind = _choice(section, "kind", LOSS_KINDS, path)
    region = section.get("center_region")
    if region is not None:
        if (not isinstance(region, list) or len(region) != 4
                or any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in region)):
            raise ConfigError(f"{path}.center_region", f"expected [row_start, row_stop, col_start, col_stop], "
                                                       f"got {region!r}")
        if region[0] >= region[1] or region[2] >= region[3]:
            raise ConfigError(f"{path}.center_region", f"the region {region} is empty")
        region = tuple(region)

    mc_cap = _number(section, "mc_cap", path, default=50, lower=1, integer=True)
    default_bound = float(mc_cap) if kind == "mc" else 1.0
    B = _number(section, "B", path, default=default_bound, lower=0, strict=True)
    if kind == "mc" and B < mc_cap:
        raise ConfigError(f"{path}.B", f"the MC loss reaches mc_cap = {mc_cap}, above B = {B}")

    r = _number(section, "r", path)
    if abs(r) > B:
        raise ConfigError(f"{path}.r", f"the target risk {r} is outside [-B, B] = [{-B}, {B}]")

    return LossConfig(
        kind=kind,
        r=r,
        B=B,
        mc_cap=mc_cap,
        center_region=region,
        center_threshold=_number(section, "center_threshold", path, default=0.6, lower=0, upper=1, strict=True),
    )


def parse_losses(document):
    if "losses" in document and "loss" in document:
        raise ConfigError("losses", "give either loss or losses, not both")

    if "loss" in document:
        return [parse_loss(document["loss"], "loss")]

    losses = document.get("losses")
    if not isinstance(losses, list) or not losses:
        raise ConfigError("losses", "expected a nonempty list of losses")
    return [parse_loss(section, f"losses.{index}") for index, section in enumerate(losses)]


def parse_stretch(section):
    _reject_unknown(section, StretchConfig._fields, "stretch")
    kind = _choice(section, "kind", STRETCH_KINDS, "stretch", default="none")
    beta_low = _number(section, "beta_low", "stretch", upper=0, optional=True)
    beta_high = _number(section, "beta_high", "stretch", lower=0, optional=True)

    return StretchConfig(
        kind=kind,
        beta_score=_number(section, "beta_score", "stretch", default=0.0),
        beta_loss=_number(section, "beta_loss", "stretch", default=0.0),
        beta_low=beta_low,
        beta_high=beta_high,
    )


def parse_controller(section, num_losses, safeguards=(-9999.0, 9999.0, 0.0)):
    """safeguards holds the default (m, M, theta_init) of the constructor's theta scale."""
    _reject_unknown(section, ControllerConfig._fields, "controller")
    default_m, default_M, default_theta = safeguards
    kind = _choice(section, "kind", CONTROLLER_KINDS, "controller", default="single" if num_losses == 1 else "multi")

    if kind == "multi":
        gamma = _numbers(section, "gamma", "controller", num_losses, default=0.05, lower=0, strict=True)
        m = _numbers(section, "m", "controller", num_losses, default=default_m)
        M = _numbers(section, "M", "controller", num_losses, default=default_M)
        theta_init = _numbers(section, "theta_init", "controller", num_losses, default=default_theta)
        if not all(low < high for low, high in zip(_broadcast(m, num_losses), _broadcast(M, num_losses))):
            raise ConfigError("controller.m", f"every lower safeguard {m} should be below its upper safeguard {M}")
    else:
        gamma = _number(section, "gamma", "controller", default=0.05, lower=0, strict=True)
        m = _number(section, "m", "controller", default=default_m)
        M = _number(section, "M", "controller", default=default_M)
        theta_init = _number(section, "theta_init", "controller", default=default_theta)

        if not m < M:
            raise ConfigError("controller.m", f"the lower safeguard {m} should be below the upper safeguard {M}")

    return ControllerConfig(
        kind=kind,
        gamma=gamma,
        m=m,
        M=M,
        theta_init=theta_init,
        aggregation=_choice(section, "aggregation", ("mean", "max"), "controller", default="max"),
        two_sided=bool(section.get("two_sided", False)),
        window_size=_number(section, "window_size", "controller", default=500, lower=1, integer=True),
        warmup=_number(section, "warmup", "controller", default=10, lower=1, integer=True),
        order=_choice(section, "order", QUANTILE_ORDERS, "controller", default="smallest"),
    )


def parse_evaluation(section):
    _reject_unknown(section, EvaluationConfig._fields, "evaluation")
    return EvaluationConfig(
        window=_window(section, "window", "evaluation", None),
        validation_window=_window(section, "validation_window", "evaluation", [6001, 8000]),
        alpha=_number(section, "alpha", "evaluation", default=0.1, lower=0, upper=1, strict=True),
    )


def _check_compatibility(config):
    """Cross-section rules: model/constructor/loss pairings and controller requirements."""
    stream, model, constructor, losses = config.stream, config.model, config.constructor, config.losses
    controller, stretch = config.controller, config.stretch

    if model.kind not in CONSTRUCTOR_MODELS[constructor.kind]:
        raise ConfigError("model.kind", f"[{constructor.kind}] constructors need a model among "
                                        f"{CONSTRUCTOR_MODELS[constructor.kind]}, got [{model.kind}]")

    if model.kind == "oracle" and stream.kind != "known_quantile":
        raise ConfigError("model.kind", "the oracle model only knows the known_quantile stream")
    if model.kind == "oracle" and stream.warmup:
        raise ConfigError("stream.warmup", "the oracle model answers on the raw scale; disable standardization")
    if model.kind == "constant" and not model.params.get("quantiles"):
        raise ConfigError("model.params.quantiles", "the constant model needs a tau -> value mapping")

    image_run = constructor.kind == "image"
    if image_run != (stream.kind == "image"):
        raise ConfigError("constructor.kind", "image constructors and image streams only go together")
    if (constructor.kind in ("class_threshold", "class_cumulative")) != (stream.kind == "classification"):
        raise ConfigError("constructor.kind", "classification constructors and classification streams only go "
                                              "together")
    if image_run and stream.warmup:
        raise ConfigError("stream.warmup", "image streams are not standardized")
    if stream.kind == "classification" and stream.warmup and stream.standardize_label:
        raise ConfigError("stream.standardize_label", "class labels cannot be standardized; set it to false")

    for index, loss in enumerate(losses):
        allowed = IMAGE_LOSSES if image_run else SCALAR_LOSSES
        if loss.kind not in allowed:
            raise ConfigError(f"losses.{index}.kind", f"[{loss.kind}] does not apply to this set kind "
                                                      f"(allowed: {', '.join(allowed)})")

    if controller.kind != "multi" and len(losses) != 1:
        raise ConfigError("controller.kind", f"{len(losses)} losses need the multi controller")

    if controller.kind == "baseline_aci":
        if constructor.kind != "cqr" or losses[0].kind != "binary":
            raise ConfigError("controller.kind", "the baseline calibrates CQR intervals under the 0-1 loss")
        if stretch.kind != "none":
            raise ConfigError("stretch.kind", "the baseline has no stretching")

    if stretch.kind in ADAPTIVE_KINDS:
        if controller.kind != "single" or constructor.kind != "cqr":
            raise ConfigError("stretch.kind", f"[{stretch.kind}] needs the single controller with CQR intervals")
        if (stretch.beta_low is None or stretch.beta_high is None) and not (stream.warmup or model.pretrain_steps > 1):
            raise ConfigError("stretch.beta_low", "give beta_low/beta_high or a warm-up window to derive them from")

    if constructor.kind == "quantile_scale" and stretch.kind != "none":
        raise ConfigError("stretch.kind", "quantile-scale intervals take theta unstretched")

    if stream.length is not None and model.pretrain_steps >= stream.length:
        raise ConfigError("model.pretrain_steps", f"pretraining {model.pretrain_steps} steps leaves nothing of "
                                                  f"a {stream.length}-step stream")


def parse_config(document):
    """Validate a parsed document into an ExperimentConfig."""
    if not isinstance(document, dict):
        raise ConfigError("<root>", "the configuration should be a mapping")

    _reject_unknown(document, ("schema_version", "name", "stream", "model", "constructor", "loss", "losses",
                               "stretch", "controller", "evaluation", "trials", "seed", "output"), "")

    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")

    losses = parse_losses(document)
    constructor = parse_constructor(_section(document, "constructor"))
    if constructor.kind in MISCOVERAGE_SCALE_KINDS:
        safeguards = (-1.0, 0.0, -constructor.alpha)
    else:
        safeguards = (-9999.0, 9999.0, 0.0)

    config = ExperimentConfig(
        schema_version=version,
        name=str(document.get("name", "experiment")),
        stream=parse_stream(_section(document, "stream")),
        model=parse_model(_section(document, "model")),
        constructor=constructor,
        losses=losses,
        stretch=parse_stretch(_section(document, "stretch")),
        controller=parse_controller(_section(document, "controller"), len(losses), safeguards),
        evaluation=parse_evaluation(_section(document, "evaluation")),
        trials=_number(document, "trials", "", default=1, lower=1, integer=True),
        seed=_number(document, "seed", "", default=0, lower=0, integer=True),
        output=str(document.get("output", "runs")),
    )
    _check_compatibility(config)
    return config


def load_document(path):
    with open(path, "r") as file:
        try:
            return yaml.safe_load(file)
        except yaml.YAMLError as error:
            raise ConfigError("<root>", f"cannot parse {path}: {error}") from error


def load_config(path, overrides=None):
    """Read, override and validate a config file."""
    document = load_document(path)
    for dotted, value in (overrides or {}).items():
        document = set_dotted(document, dotted, value)
    return parse_config(document)


def set_dotted(document, dotted, value):
    """Copy of the document with the dotted field replaced (list items by index)."""
    document = copy.deepcopy(document) if document is not None else {}
    keys = dotted.split(".")
    node = document

    for position, key in enumerate(keys[:-1]):
        if isinstance(node, list):
            if not key.isdigit() or int(key) >= len(node):
                raise ConfigError(".".join(keys[:position + 1]), "no such list item")
            node = node[int(key)]
        else:
            if not isinstance(node.get(key, {}), (dict, list)):
                raise ConfigError(".".join(keys[:position + 1]), "is not a section")
            node = node.setdefault(key, {})

    last = keys[-1]
    if isinstance(node, list):
        if not last.isdigit() or int(last) >= len(node):
            raise ConfigError(dotted, "no such list item")
        node[int(last)] = value
    else:
        node[last] = value
    return document

import math


class LossBoundError(ValueError):
    """A loss value escaped the declared bound [-B, B]."""


def validate_defined_argument(argument_value, argument_name):
    """Validates if a given argument has a defined value (is not None)."""
    if argument_value is None:
        raise ValueError(f"The {argument_name} should be defined")


def validate_positive(argument_value, argument_name):
    validate_defined_argument(argument_value, argument_name)

    if not argument_value > 0:
        raise ValueError(f"The {argument_name} should be positive, got {argument_value}")


def validate_finite(argument_value, argument_name):
    validate_defined_argument(argument_value, argument_name)

    if not math.isfinite(argument_value):
        raise ValueError(f"The {argument_name} should be finite, got {argument_value}")


def validate_in_range(argument_value, argument_name, lower, upper, closed=True):
    """Validates that lower <= value <= upper (or strict bounds when closed is False)."""
    validate_defined_argument(argument_value, argument_name)

    inside = lower <= argument_value <= upper if closed else lower < argument_value < upper
    if not inside:
        brackets = ("[", "]") if closed else ("(", ")")
        raise ValueError(
            f"The {argument_name} should be in {brackets[0]}{lower}, {upper}{brackets[1]}, got {argument_value}"
        )

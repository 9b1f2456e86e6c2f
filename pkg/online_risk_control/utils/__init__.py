"""Logging and seeding shared by the experiment runner and the library."""
from .logger import get_logger  # noqa: F401
from .reproducibility import make_reproducible, trial_generator  # noqa: F401
